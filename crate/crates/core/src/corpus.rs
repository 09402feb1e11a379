//! A fixed, seeded collection of homology spheres used by the acceptance
//! checks and the property tests.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classify::PrimeFamily;
use crate::complex::{Face, SimplicialComplex, Vertex};
use crate::constructions::*;
use crate::error::Result;

#[derive(Clone, Debug)]
pub struct Entry {
    pub name: String,
    pub complex: SimplicialComplex,
    /// Known to be prime by construction.
    pub prime: bool,
}

fn entry(name: impl Into<String>, complex: SimplicialComplex, prime: bool) -> Entry {
    Entry { name: name.into(), complex, prime }
}

/// Six-vertex triangulation of the real projective plane.
pub fn real_projective_plane() -> SimplicialComplex {
    SimplicialComplex::from_vertex_lists([
        [0u32, 1, 2],
        [0, 2, 3],
        [0, 3, 4],
        [0, 4, 5],
        [0, 1, 5],
        [1, 2, 4],
        [2, 3, 5],
        [1, 3, 4],
        [1, 3, 5],
        [2, 4, 5],
    ])
    .expect("fixed facet list")
}

/// `octahedron * ∂σ^{d-3}`, a non-stacked `(d-1)`-sphere.
pub fn octahedron_join(d: usize) -> Result<SimplicialComplex> {
    Ok(cross_polytope(3)?.join_relabeled(&boundary_simplex(d - 3)?))
}

/// Applies `times` stellar subdivisions at seeded random ridges.
pub fn subdivide_ridges(k: &SimplicialComplex, times: usize, seed: u64) -> Result<SimplicialComplex> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut k = k.clone();
    for _ in 0..times {
        let ridges: Vec<&Face> = k.faces(k.dim() - 1).iter().collect();
        let ridge = (*ridges.choose(&mut rng).expect("sphere has ridges")).clone();
        k = stellar_subdivide_ridge(&k, &ridge)?.0;
    }
    Ok(k)
}

/// Connected sum along random facets of each and a random bijection.
pub fn random_connected_sum(k: &SimplicialComplex, l: &SimplicialComplex, rng: &mut impl Rng) -> Result<SimplicialComplex> {
    let fk = k.facets().choose(rng).expect("nonempty").clone();
    let fl = l.facets().choose(rng).expect("nonempty").clone();
    let mut image: Vec<Vertex> = fk.vertices().to_vec();
    image.shuffle(rng);
    let pairs: Vec<(Vertex, Vertex)> = fl.vertices().iter().copied().zip(image).collect();
    connected_sum(k, l, &fk, &fl, &pairs)
}

/// The corpus of homology spheres of dimension 2 to 6.
pub fn spheres() -> Vec<Entry> {
    let mut out = Vec::new();
    let ok = "corpus parameters are valid";
    for m in 3..=6 {
        out.push(entry(format!("simplex_boundary({m})"), boundary_simplex(m).expect(ok), false));
    }
    for d in 3..=5 {
        out.push(entry(format!("cross_polytope({d})"), cross_polytope(d).expect(ok), true));
    }
    for d in 5..=6 {
        out.push(entry(format!("octahedron_join({d})"), octahedron_join(d).expect(ok), true));
    }
    for (d, stacks, seed) in [(3, 6, 1), (4, 8, 2), (5, 6, 3), (6, 4, 4)] {
        let k = stacked_sphere(d, stacks, seed).expect(ok).0;
        out.push(entry(format!("stacked_sphere({d},{stacks},{seed})"), k, false));
    }
    for a in 2..=4 {
        for b in a..=(7 - a) {
            out.push(entry(format!("two_simplices({a},{b})"), family_two_simplices(a, b).expect(ok), true));
        }
    }
    for (n, d) in [(4, 4), (5, 4), (7, 4), (5, 5), (6, 5), (4, 6)] {
        out.push(entry(format!("polygon_simplex({n},{d})"), family_polygon_simplex(n, d).expect(ok), true));
    }
    for (base, times, seed) in [((5, 4), 1, 11), ((6, 4), 2, 12), ((4, 5), 1, 13), ((5, 4), 3, 14)] {
        let k = family_polygon_simplex(base.0, base.1).expect(ok);
        let k = subdivide_ridges(&k, times, seed).expect(ok);
        out.push(entry(format!("polygon_simplex({},{})+{times} subdivisions", base.0, base.1), k, true));
    }
    let k = subdivide_ridges(&family_two_simplices(2, 2).expect(ok), 2, 15).expect(ok);
    out.push(entry("two_simplices(2,2)+2 subdivisions", k, true));
    let bases = [(PrimeFamily::TwoSimplices { a: 2, b: 2 }, 2, 21), (PrimeFamily::PolygonSimplex { n: 5, d: 4 }, 3, 22)];
    for (family, stacks, seed) in bases {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = stack_randomly(&family.generate().expect(ok), stacks, &mut rng).expect(ok);
        out.push(entry(format!("{family} stacked {stacks} times"), k, false));
    }
    out
}
