//! Sphere generators and the surgeries used on them: stacking, connected
//! sum, stellar subdivision at a ridge and edge contraction.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::complex::{Face, SimplicialComplex, Vertex};
use crate::error::{Error, Result};

/// `∂σ^m` on vertices `0..=m`.
pub fn boundary_simplex(m: usize) -> Result<SimplicialComplex> {
    if m < 1 {
        return Err(Error::InvalidParameter(format!("simplex boundary needs m >= 1, got {m}")));
    }
    boundary_simplex_on(&Face::new(0..=m as Vertex)?)
}

/// `∂σ` for the simplex on `face`.
pub fn boundary_simplex_on(face: &Face) -> Result<SimplicialComplex> {
    if face.len() < 2 {
        return Err(Error::InvalidParameter(format!("simplex boundary of {face} is not a sphere")));
    }
    SimplicialComplex::from_facets(face.boundary().collect::<Vec<_>>())
}

/// The `n`-cycle on `0..n`.
pub fn polygon(n: usize) -> Result<SimplicialComplex> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("polygon needs n >= 3, got {n}")));
    }
    let n = n as Vertex;
    SimplicialComplex::from_vertex_lists((0..n).map(|i| [i, (i + 1) % n]))
}

/// Boundary of the `d`-dimensional cross-polytope: `d` joined copies of
/// `∂σ^1`, the pairs being `{2i, 2i+1}`.
pub fn cross_polytope(d: usize) -> Result<SimplicialComplex> {
    if d < 1 {
        return Err(Error::InvalidParameter("cross-polytope needs d >= 1".into()));
    }
    let mut k = SimplicialComplex::empty();
    for i in 0..d as Vertex {
        let pair = SimplicialComplex::from_vertex_lists([[2 * i], [2 * i + 1]])?;
        k = k.join(&pair)?;
    }
    Ok(k)
}

/// `∂σ^a * ∂σ^b` with `∂σ^a` on `0..=a` and `∂σ^b` on `a+1..=a+b+1`.
pub fn family_two_simplices(a: usize, b: usize) -> Result<SimplicialComplex> {
    if a < 2 || b < 2 {
        return Err(Error::InvalidParameter(format!("need a, b >= 2, got ({a}, {b})")));
    }
    let first = boundary_simplex(a)?;
    let second = boundary_simplex_on(&Face::new((a as Vertex + 1)..=(a + b + 1) as Vertex)?)?;
    first.join(&second)
}

/// `polygon(n) * ∂σ^{d-2}` with the cycle on `0..n` and the simplex on
/// `n..n+d-1`.
pub fn family_polygon_simplex(n: usize, d: usize) -> Result<SimplicialComplex> {
    if n < 3 || d < 4 {
        return Err(Error::InvalidParameter(format!("need n >= 3 and d >= 4, got ({n}, {d})")));
    }
    let simplex = Face::new(n as Vertex..(n + d - 1) as Vertex)?;
    polygon(n)?.join(&boundary_simplex_on(&simplex)?)
}

/// Replaces `facet` by the cone from `new_vertex` over its boundary.
pub fn stack(k: &SimplicialComplex, facet: &Face, new_vertex: Vertex) -> Result<SimplicialComplex> {
    if !k.is_facet(facet) {
        return Err(Error::NotAFacet(facet.clone()));
    }
    if k.has_vertex(new_vertex) {
        return Err(Error::VertexCollision(new_vertex));
    }
    let mut facets: Vec<Face> = k.facets().iter().filter(|f| *f != facet).cloned().collect();
    facets.extend(facet.boundary().map(|r| r.with(new_vertex)));
    SimplicialComplex::from_facets(facets)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StackStep {
    pub facet: Face,
    pub vertex: Vertex,
}

/// A base complex and the stackings that rebuild a target from it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StackingLog {
    pub base: SimplicialComplex,
    pub steps: Vec<StackStep>,
}

impl StackingLog {
    pub fn replay(&self) -> Result<SimplicialComplex> {
        self.steps.iter().try_fold(self.base.clone(), |k, s| stack(&k, &s.facet, s.vertex))
    }
}

/// `∂σ^d` stacked `stacks` times over uniformly chosen facets.
pub fn stacked_sphere(d: usize, stacks: usize, seed: u64) -> Result<(SimplicialComplex, StackingLog)> {
    let base = boundary_simplex(d)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut k = base.clone();
    let mut steps = Vec::with_capacity(stacks);
    for _ in 0..stacks {
        let facet = k.facets()[rng.gen_range(0..k.facets().len())].clone();
        let vertex = k.fresh_vertex();
        k = stack(&k, &facet, vertex)?;
        steps.push(StackStep { facet, vertex });
    }
    Ok((k, StackingLog { base, steps }))
}

/// Stacks `stacks` times over seeded random facets of `k`.
pub fn stack_randomly(k: &SimplicialComplex, stacks: usize, rng: &mut impl Rng) -> Result<SimplicialComplex> {
    let mut k = k.clone();
    for _ in 0..stacks {
        let facet = k.facets()[rng.gen_range(0..k.facets().len())].clone();
        let vertex = k.fresh_vertex();
        k = stack(&k, &facet, vertex)?;
    }
    Ok(k)
}

/// Glues `l` to `k` along `facet_l -> facet_k` and deletes the glued facet.
///
/// `bijection` lists `(vertex of facet_l, vertex of facet_k)` pairs. Vertices
/// of `l` outside `facet_l` move to the smallest ids unused by `k`.
pub fn connected_sum(
    k: &SimplicialComplex,
    l: &SimplicialComplex,
    facet_k: &Face,
    facet_l: &Face,
    bijection: &[(Vertex, Vertex)],
) -> Result<SimplicialComplex> {
    if !k.is_facet(facet_k) {
        return Err(Error::NotAFacet(facet_k.clone()));
    }
    if !l.is_facet(facet_l) {
        return Err(Error::NotAFacet(facet_l.clone()));
    }
    if facet_k.len() != facet_l.len() || k.max_face_size() != l.max_face_size() {
        return Err(Error::SizeMismatch(format!("cannot glue {facet_l} onto {facet_k}")));
    }
    let map: BTreeMap<Vertex, Vertex> = bijection.iter().copied().collect();
    let domain = Face::new(map.keys().copied())?;
    let image = Face::new(map.values().copied())?;
    if map.len() != bijection.len() || domain != *facet_l || image != *facet_k {
        return Err(Error::MalformedInput(format!("{bijection:?} is not a bijection {facet_l} -> {facet_k}")));
    }
    let mut full = map;
    let mut fresh = (0..).filter(|v| !k.has_vertex(*v));
    for &v in l.vertices() {
        full.entry(v).or_insert_with(|| fresh.next().expect("unbounded ids"));
    }
    let moved = l.relabel(&full)?;
    let facets: Vec<Face> = k
        .facets()
        .iter()
        .filter(|f| *f != facet_k)
        .chain(moved.facets().iter().filter(|f| *f != facet_k))
        .cloned()
        .collect();
    SimplicialComplex::from_facets(facets)
}

/// Connected sum along the first facet of each, matched in increasing order.
pub fn connected_sum_default(k: &SimplicialComplex, l: &SimplicialComplex) -> Result<SimplicialComplex> {
    let (fk, fl) = (&k.facets()[0], &l.facets()[0]);
    let pairs: Vec<(Vertex, Vertex)> = fl.vertices().iter().copied().zip(fk.vertices().iter().copied()).collect();
    connected_sum(k, l, fk, fl, &pairs)
}

/// Replaces the closed star of `face` by `w * ∂face * lk(face)` for the
/// smallest unused vertex `w`. Returns the new complex and `w`.
pub fn stellar_subdivide(k: &SimplicialComplex, face: &Face) -> Result<(SimplicialComplex, Vertex)> {
    if face.is_empty() {
        return Err(Error::InvalidParameter("cannot subdivide the empty face".into()));
    }
    let link = k.link(face)?;
    let w = k.fresh_vertex();
    let mut facets: Vec<Face> = k.facets().iter().filter(|f| !face.is_subset(f)).cloned().collect();
    for r in face.boundary() {
        for l in link.facets() {
            facets.push(r.union(l).with(w));
        }
    }
    Ok((SimplicialComplex::from_facets(facets)?, w))
}

/// Stellar subdivision at a ridge of a pure complex whose ridges each lie in
/// exactly two facets.
pub fn stellar_subdivide_ridge(k: &SimplicialComplex, ridge: &Face) -> Result<(SimplicialComplex, Vertex)> {
    let d = k.max_face_size();
    let cofaces = k.facets().iter().filter(|f| ridge.is_subset(f)).count();
    if !k.is_pure() || d < 2 || ridge.len() + 1 != d || cofaces != 2 {
        return Err(Error::NotARidge(ridge.clone()));
    }
    stellar_subdivide(k, ridge)
}

/// `lk({u,v}) = lk(u) ∩ lk(v)`.
pub fn link_condition(k: &SimplicialComplex, u: Vertex, v: Vertex) -> Result<bool> {
    let edge = Face::new([u, v])?;
    if edge.len() != 2 || !k.contains(&edge) {
        return Err(Error::NotAnEdge(edge));
    }
    let lu = k.link(&Face::of(&[u]))?;
    let lv = k.link(&Face::of(&[v]))?;
    let luv = k.link(&edge)?;
    let common: BTreeSet<&Face> = lu.all_faces().filter(|f| lv.contains(f)).collect();
    Ok(common.len() == luv.all_faces().count())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContractionResult {
    #[serde(skip)]
    pub complex: SimplicialComplex,
    pub removed_vertex: Vertex,
    pub kept_vertex: Vertex,
    pub delta_f0: i64,
    pub delta_f1: i64,
    /// `Δf1 - d Δf0` with `d` the largest face size of the input.
    pub delta_g2: i64,
    /// `antist(v, lk(u))_0 - lk(v, lk(u))_0`.
    pub independent_set: Vec<Vertex>,
    pub common_neighbors: usize,
    pub link_condition: bool,
    /// Set when the link condition fails: the result need not be a sphere.
    pub no_sphere_guarantee: bool,
}

/// Contracts `{u, v}` onto `v`: `K' = (K - st(u)) ∪ ({v} * antist(v, lk(u)))`.
pub fn edge_contract(k: &SimplicialComplex, u: Vertex, v: Vertex) -> Result<ContractionResult> {
    let holds = link_condition(k, u, v)?;
    let fu = Face::of(&[u]);
    let lk_u = k.link(&fu)?;
    let fv = Face::of(&[v]);
    let anti = lk_u.antistar(&fv);
    let lk_v_in_lk_u = lk_u.link(&fv)?;

    let mut facets: Vec<Face> = k.antistar(&fu).facets().to_vec();
    facets.extend(anti.facets().iter().map(|g| g.with(v)));
    let contracted = SimplicialComplex::from_facets(facets)?;

    let independent_set: Vec<Vertex> = anti
        .vertices()
        .iter()
        .copied()
        .filter(|w| !lk_v_in_lk_u.has_vertex(*w))
        .collect();
    let g = k.skeleton_graph();
    let nu: BTreeSet<Vertex> = g.neighbors(u).into_iter().collect();
    let common_neighbors = g.neighbors(v).into_iter().filter(|w| nu.contains(w)).count();

    let (before, after) = (k.f_vector(), contracted.f_vector());
    let delta_f0 = after.f(0) as i64 - before.f(0) as i64;
    let delta_f1 = after.f(1) as i64 - before.f(1) as i64;
    let d = k.max_face_size() as i64;
    Ok(ContractionResult {
        complex: contracted,
        removed_vertex: u,
        kept_vertex: v,
        delta_f0,
        delta_f1,
        delta_g2: delta_f1 - d * delta_f0,
        independent_set,
        common_neighbors,
        link_condition: holds,
        no_sphere_guarantee: !holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::is_isomorphic;
    use crate::homology::is_homology_sphere;

    #[test]
    fn generator_shapes() {
        assert_eq!(boundary_simplex(2).unwrap(), polygon(3).unwrap());
        assert_eq!(boundary_simplex(4).unwrap().f_vector().counts, vec![1, 5, 10, 10, 5]);
        assert!(boundary_simplex(0).is_err());
        assert!(polygon(2).is_err());
        assert_eq!(cross_polytope(3).unwrap().f_vector().counts, vec![1, 6, 12, 8]);
        assert!(family_two_simplices(1, 3).is_err());
        assert!(family_polygon_simplex(5, 3).is_err());
    }

    #[test]
    fn family_examples() {
        let k = family_two_simplices(2, 2).unwrap();
        assert_eq!(k.num_vertices(), 6);
        assert_eq!(k.f_vector().f(1), 15);
        assert_eq!(k.g2().unwrap(), 1);
        assert_eq!(family_polygon_simplex(5, 4).unwrap().g2().unwrap(), 1);
        let c3 = family_polygon_simplex(3, 4).unwrap();
        assert!(is_isomorphic(&c3, &k).is_some());
    }

    #[test]
    fn stacking() {
        let s = boundary_simplex(4).unwrap();
        let k = stack(&s, &s.facets()[0], 5).unwrap();
        assert_eq!(k.f_vector().f(0), 6);
        assert_eq!(k.f_vector().f(1), 14);
        assert_eq!(k.g2().unwrap(), 0);
        assert!(stack(&s, &Face::of(&[0, 1]), 5).is_err());
        assert!(stack(&s, &s.facets()[0], 2).is_err());
        let (k0, log0) = stacked_sphere(4, 0, 1).unwrap();
        assert_eq!(k0, s);
        assert!(log0.steps.is_empty());
        let (k10, log) = stacked_sphere(4, 10, 7).unwrap();
        assert_eq!(k10.f_vector().f(0), 15);
        assert_eq!(k10.f_vector().f(1), 10 + 4 * 10);
        assert_eq!(k10.g2().unwrap(), 0);
        assert_eq!(log.replay().unwrap(), k10);
    }

    #[test]
    fn connected_sums() {
        let s = boundary_simplex(4).unwrap();
        let ss = connected_sum_default(&s, &s).unwrap();
        assert_eq!(ss.num_vertices(), 6);
        assert_eq!(ss.g2().unwrap(), 0);
        let j = family_two_simplices(2, 2).unwrap();
        let js = connected_sum_default(&j, &s).unwrap();
        assert_eq!(js.num_vertices(), 7);
        assert_eq!(js.g2().unwrap(), 1);
        assert_eq!(js.missing_faces().iter().filter(|f| f.len() == 4).count(), 1);
        assert!(is_homology_sphere(&js));
        let tri = boundary_simplex(2).unwrap();
        assert!(matches!(connected_sum_default(&s, &tri), Err(Error::SizeMismatch(_))));
        let bad = [(0, 0), (1, 0), (2, 2), (3, 3)];
        assert!(connected_sum(&s, &s, &s.facets()[0], &s.facets()[0], &bad).is_err());
    }

    #[test]
    fn ridge_subdivision() {
        let k = family_polygon_simplex(5, 4).unwrap();
        let ridge = k.faces(2).iter().next().unwrap().clone();
        let (sub, w) = stellar_subdivide_ridge(&k, &ridge).unwrap();
        assert_eq!(w, 8);
        assert_eq!(sub.num_vertices(), 9);
        assert_eq!(sub.g2().unwrap(), 2);
        assert_eq!(sub.skeleton_graph().degree(w), 5);
        assert!(!sub.contains(&ridge));
        assert!(is_homology_sphere(&sub));
        assert!(matches!(stellar_subdivide_ridge(&k, &Face::of(&[0, 1])), Err(Error::NotARidge(_))));
    }

    #[test]
    fn contraction_examples() {
        let oct = cross_polytope(3).unwrap();
        let r = edge_contract(&oct, 0, 2).unwrap();
        assert!(r.link_condition);
        assert_eq!(r.common_neighbors, 2);
        assert_eq!(r.complex.num_vertices(), 5);
        assert_eq!(r.delta_f0, -1);
        assert_eq!(r.delta_f1, -3);
        assert_eq!(r.delta_g2, 0);
        // bipyramid over a triangle = suspension of a 3-cycle
        let bipyramid = boundary_simplex(2).unwrap().join_relabeled(&SimplicialComplex::from_vertex_lists([[0u32], [1]]).unwrap());
        assert!(is_isomorphic(&r.complex, &bipyramid).is_some());
        assert!(matches!(edge_contract(&oct, 0, 1), Err(Error::NotAnEdge(_))));

        let c4 = polygon(4).unwrap();
        let r = edge_contract(&c4, 0, 1).unwrap();
        assert_eq!(r.complex, SimplicialComplex::from_vertex_lists([[1u32, 2], [2, 3], [1, 3]]).unwrap());
        assert!(is_homology_sphere(&r.complex));
    }

    #[test]
    fn contraction_without_link_condition_is_flagged() {
        // [0,1,2] becomes a missing triangle, so {0,1} fails the condition
        let k = stack(&boundary_simplex(3).unwrap(), &Face::of(&[0, 1, 2]), 4).unwrap();
        assert!(!link_condition(&k, 0, 1).unwrap());
        assert!(link_condition(&k, 0, 4).unwrap());
        let r = edge_contract(&k, 0, 1).unwrap();
        assert!(r.no_sphere_guarantee);
        assert_eq!(r.common_neighbors, 3);
        assert_eq!(r.delta_f1, -(r.common_neighbors as i64 + 1));
        assert!(!is_homology_sphere(&r.complex));
    }
}
