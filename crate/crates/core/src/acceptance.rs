//! The acceptance checks, runnable from tests and from the command line.

use std::collections::BTreeSet;
use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classify::{classify, is_prime, is_stacked, prime_decomposition, PrimeFamily, Verdict};
use crate::complex::{binomial, is_isomorphic, Face, SimplicialComplex};
use crate::constructions::*;
use crate::corpus::{self, octahedron_join, random_connected_sum, real_projective_plane};
use crate::graph::Graph;
use crate::homology::{boundary_matrix, homology, is_homology_sphere};
use crate::matrix::Matrix;
use crate::rigidity::{
    complete_graph_rank, cone_graph, float_rank_check, generic_rank, is_generically_rigid, is_stress_free, kernel_dim,
    participating_edges, participating_vertices, DEFAULT_TRIALS, FLOAT_SINGULAR_TOLERANCE,
};
use crate::smith::smith_normal_form_adaptive;

type Check = std::result::Result<String, String>;

pub struct Criterion {
    pub id: u8,
    pub name: &'static str,
    pub time_limit: Option<Duration>,
    run: fn() -> Check,
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] criterion {:>2} {} ({:.2}s): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed.as_secs_f64(),
            self.detail
        )
    }
}

impl Criterion {
    pub fn run(&self) -> Outcome {
        let start = Instant::now();
        let result = (self.run)();
        let elapsed = start.elapsed();
        let (mut passed, mut detail) = match result {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        if let Some(limit) = self.time_limit {
            if elapsed > limit {
                passed = false;
                detail = format!("{detail}; exceeded time limit of {}s", limit.as_secs_f64());
            }
        }
        Outcome { id: self.id, name: self.name, passed, detail, elapsed }
    }
}

pub fn criteria() -> Vec<Criterion> {
    let secs = |s| Some(Duration::from_secs(s));
    vec![
        Criterion { id: 1, name: "polygon-simplex joins are prime with g2 = 1", time_limit: secs(1), run: polygon_joins },
        Criterion { id: 2, name: "g2 = 0 iff stacked", time_limit: None, run: lower_bound_equality },
        Criterion { id: 3, name: "prime g2 = 1 family round trip", time_limit: secs(10), run: family_round_trip },
        Criterion { id: 4, name: "stackings over the prime families", time_limit: None, run: stacked_over_base },
        Criterion { id: 5, name: "rigidity anchors", time_limit: secs(30), run: rigidity_anchors },
        Criterion { id: 6, name: "cone lemma", time_limit: None, run: cone_lemma },
        Criterion { id: 7, name: "stress participation in prime spheres", time_limit: None, run: prime_stress },
        Criterion { id: 8, name: "surgery ledgers", time_limit: None, run: surgery },
        Criterion { id: 9, name: "homology", time_limit: secs(5), run: homology_checks },
        Criterion { id: 10, name: "decomposition soundness", time_limit: None, run: decomposition_soundness },
    ]
}

pub fn run_all() -> Vec<Outcome> {
    criteria().iter().map(Criterion::run).collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: impl fmt::Display) -> String {
    e.to_string()
}

fn polygon_joins() -> Check {
    let mut count = 0;
    for d in 4..=7 {
        for n in 3..=12 {
            let k = family_polygon_simplex(n, d).map_err(err)?;
            let g2 = k.g2().map_err(err)?;
            ensure(g2 == 1, || format!("polygon({n}) * simplex boundary, d = {d}: g2 = {g2}"))?;
            ensure(is_prime(&k), || format!("polygon({n}) * simplex boundary, d = {d}: not prime"))?;
            count += 1;
        }
    }
    Ok(format!("{count} complexes, all prime with g2 = 1"))
}

fn lower_bound_equality() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for i in 0..100u64 {
        let d = [4, 5, 6][i as usize % 3];
        let stacks = rng.gen_range(0..=40 - (d + 1));
        let (k, _) = stacked_sphere(d, stacks, i).map_err(err)?;
        let g2 = k.g2().map_err(err)?;
        ensure(g2 == 0, || format!("stacked_sphere({d},{stacks},{i}) has g2 = {g2}"))?;
        let (ok, log) = is_stacked(&k);
        ensure(ok, || format!("stacked_sphere({d},{stacks},{i}) not recognised"))?;
        ensure(log.steps.len() == stacks, || format!("stacked_sphere({d},{stacks},{i}): log has {} steps", log.steps.len()))?;
    }
    let mut others = Vec::new();
    for d in 4..=6 {
        others.push((format!("octahedron_join({d})"), octahedron_join(d).map_err(err)?));
        others.push((format!("cross_polytope({d})"), cross_polytope(d).map_err(err)?));
        others.push((format!("polygon_simplex(5,{d})"), family_polygon_simplex(5, d).map_err(err)?));
    }
    for (name, k) in &others {
        let g2 = k.g2().map_err(err)?;
        ensure(g2 >= 1, || format!("{name}: g2 = {g2}"))?;
        ensure(!is_stacked(k).0, || format!("{name} recognised as stacked"))?;
    }
    Ok(format!("100 stacked spheres with g2 = 0; {} non-stacked spheres with g2 >= 1", others.len()))
}

fn expect_family(k: &SimplicialComplex, expected: PrimeFamily, label: &str) -> std::result::Result<(), String> {
    let c = classify(k, false).map_err(|e| format!("{label}: {e}"))?;
    let want = match expected {
        PrimeFamily::TwoSimplices { a, b } => Verdict::PrimeTwoSimplices { a, b },
        PrimeFamily::PolygonSimplex { n, d } => Verdict::PrimePolygonSimplex { n, d },
    };
    ensure(c.verdict == want, || format!("{label}: got {}, expected {want}", c.verdict))
}

fn family_round_trip() -> Check {
    let mut count = 0;
    for a in 2..=6 {
        for b in a..=(8 - a) {
            let k = family_two_simplices(a, b).map_err(err)?;
            expect_family(&k, PrimeFamily::TwoSimplices { a, b }, &format!("two_simplices({a},{b})"))?;
            count += 1;
        }
    }
    for d in 4..=7 {
        for n in 3..=10 {
            let k = family_polygon_simplex(n, d).map_err(err)?;
            // a triangle is the boundary of a 2-simplex
            let expected = if n == 3 {
                PrimeFamily::TwoSimplices { a: 2, b: d - 2 }
            } else {
                PrimeFamily::PolygonSimplex { n, d }
            };
            expect_family(&k, expected, &format!("polygon_simplex({n},{d})"))?;
            count += 1;
        }
    }
    Ok(format!("{count} family members classified with their parameters"))
}

fn random_family(rng: &mut impl Rng) -> PrimeFamily {
    let d = rng.gen_range(4..=6);
    random_family_in(d, rng)
}

fn stacked_over_base() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for i in 0..50 {
        let family = random_family(&mut rng);
        let base = family.generate().map_err(err)?;
        let d = base.max_face_size();
        let stacks = rng.gen_range(1..=5);
        let extra = rng.gen_range(0..=2);
        let mut k = stack_randomly(&base, stacks, &mut rng).map_err(err)?;
        for _ in 0..extra {
            k = random_connected_sum(&k, &boundary_simplex(d).map_err(err)?, &mut rng).map_err(err)?;
        }
        let c = classify(&k, false).map_err(|e| format!("instance {i} ({family}): {e}"))?;
        let want = Verdict::StackedOverBase {
            base: Box::new(match family {
                PrimeFamily::TwoSimplices { a, b } => Verdict::PrimeTwoSimplices { a, b },
                PrimeFamily::PolygonSimplex { n, d } => Verdict::PrimePolygonSimplex { n, d },
            }),
            stacks: stacks + extra,
        };
        ensure(c.verdict == want, || format!("instance {i}: got {}, expected {want}", c.verdict))?;
    }
    Ok("50 instances recovered base and stack count".into())
}

fn rigidity_anchors() -> Check {
    let mut checked = 0;
    for d in 1..=6 {
        for n in (d + 1)..=10 {
            let g = Graph::complete(n as u32);
            let r = generic_rank(&g, d, DEFAULT_TRIALS, 0);
            let want = d * n - binomial(d + 1, 2);
            ensure(r == want && r == complete_graph_rank(n, d), || format!("rank of K_{n} in dimension {d}: {r}, expected {want}"))?;
            checked += 1;
        }
    }
    let oct = cross_polytope(3).map_err(err)?.skeleton_graph();
    ensure(is_generically_rigid(&oct, 3), || "octahedron graph not 3-rigid".into())?;
    ensure(is_stress_free(&oct, 3), || "octahedron graph has a 3-stress".into())?;

    let mut spheres: Vec<(String, SimplicialComplex)> =
        corpus::spheres().into_iter().map(|e| (e.name, e.complex)).collect();
    let (big, _) = stacked_sphere(4, 195, 5).map_err(err)?;
    spheres.push(("stacked_sphere(4,195,5)".into(), big));
    let mut floats = 0;
    for (name, k) in &spheres {
        let g2 = k.g2().map_err(err)? as usize;
        let d = k.max_face_size();
        let g = k.skeleton_graph();
        // every trial on its own must reach the generic rank
        for trial_seed in 0..DEFAULT_TRIALS as u64 {
            let kd = kernel_dim(&g, d, 1, trial_seed);
            ensure(kd == g2, || format!("{name}: kernel dimension {kd} with seed {trial_seed}, g2 = {g2}"))?;
        }
        if g.n() <= 12 {
            let float = float_rank_check(&g, d, 0);
            let exact = g.edge_count() - g2;
            ensure(float.rank == exact, || format!("{name}: float rank {} against exact rank {exact}", float.rank))?;
            floats += 1;
        }
    }
    Ok(format!(
        "{checked} complete graphs, octahedron, {} spheres up to 200 vertices with every trial at full rank (failure bound rank/p per trial), {floats} float SVD cross-checks at tolerance {FLOAT_SINGULAR_TOLERANCE:e}",
        spheres.len()
    ))
}

fn random_graph(rng: &mut impl Rng) -> Graph {
    let n = rng.gen_range(3..=15u32);
    let p = rng.gen_range(0.2..0.8);
    let edges: Vec<(u32, u32)> =
        (0..n).flat_map(|a| ((a + 1)..n).map(move |b| (a, b))).filter(|_| rng.gen_bool(p)).collect();
    Graph::new(0..n, edges).expect("simple graph")
}

fn cone_lemma() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut stressed = 0;
    for i in 0..50 {
        let g = random_graph(&mut rng);
        let d = rng.gen_range(2..=3);
        let apex = g.fresh_vertex();
        let cone = cone_graph(&g, apex).map_err(err)?;
        let (base, coned) = (kernel_dim(&g, d, DEFAULT_TRIALS, i), kernel_dim(&cone, d + 1, DEFAULT_TRIALS, i));
        ensure(base == coned, || format!("graph {i}: kernel {base} in dimension {d}, cone kernel {coned}"))?;
        if coned > 0 {
            stressed += 1;
            ensure(participating_vertices(&cone, d + 1, i).contains(&apex), || format!("graph {i}: apex carries no stress"))?;
        }
    }
    Ok(format!("50 graphs, {stressed} with stresses"))
}

fn prime_stress() -> Check {
    let mut count = 0;
    for e in corpus::spheres().into_iter().filter(|e| e.prime) {
        let k = &e.complex;
        let d = k.max_face_size();
        let g2 = k.g2().map_err(err)?;
        if g2 < 1 || d < 4 {
            continue;
        }
        let g = k.skeleton_graph();
        let pv = participating_vertices(&g, d, 0);
        ensure(pv.len() == g.n(), || format!("{}: {} of {} vertices participate", e.name, pv.len(), g.n()))?;
        if g2 == 1 {
            let pe = participating_edges(&g, d, 0);
            ensure(pe.len() == g.edge_count(), || format!("{}: {} of {} edges participate", e.name, pe.len(), g.edge_count()))?;
        }
        count += 1;
    }
    Ok(format!("{count} prime spheres with g2 >= 1"))
}

fn surgery() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let bases = [family_two_simplices(2, 2), family_two_simplices(2, 3), family_polygon_simplex(5, 4), family_polygon_simplex(6, 5)];
    let mut subdivisions = 0;
    for base in bases {
        let mut k = base.map_err(err)?;
        for step in 1..=4 {
            let ridges: Vec<Face> = k.faces(k.dim() - 1).iter().cloned().collect();
            let ridge = ridges.choose(&mut rng).expect("ridges").clone();
            let (next, _) = stellar_subdivide_ridge(&k, &ridge).map_err(err)?;
            let g2 = next.g2().map_err(err)?;
            ensure(g2 == 1 + step, || format!("after {step} subdivisions g2 = {g2}"))?;
            ensure(next.num_vertices() == k.num_vertices() + 1, || "f0 did not grow by one".into())?;
            ensure(is_prime(&next), || format!("subdivision {step} is not prime"))?;
            if next.num_vertices() <= 12 {
                ensure(is_homology_sphere(&next), || format!("subdivision {step} is not a sphere"))?;
            }
            k = next;
            subdivisions += 1;
        }
    }

    let oct = cross_polytope(3).map_err(err)?;
    let r = edge_contract(&oct, 0, 2).map_err(err)?;
    let bipyramid = boundary_simplex(2).map_err(err)?.join_relabeled(&boundary_simplex(1).map_err(err)?);
    ensure(r.complex.num_vertices() == 5 && r.complex.g2().map_err(err)? == 0, || "octahedron contraction".into())?;
    ensure(is_isomorphic(&r.complex, &bipyramid).is_some(), || "octahedron contraction is not the bipyramid".into())?;

    let mut contractions = 0;
    'outer: for e in corpus::spheres() {
        let k = &e.complex;
        for edge in k.faces(1).iter().take(3) {
            let (u, v) = (edge.vertices()[0], edge.vertices()[1]);
            if !link_condition(k, u, v).map_err(err)? {
                continue;
            }
            let r = edge_contract(k, u, v).map_err(err)?;
            ensure(is_homology_sphere(&r.complex), || format!("{}: contracting {edge} broke the sphere", e.name))?;
            contractions += 1;
            if contractions == 20 {
                break 'outer;
            }
        }
    }
    ensure(contractions == 20, || format!("only {contractions} contractible edges found"))?;
    Ok(format!("{subdivisions} ridge subdivisions, octahedron contraction, {contractions} link-condition contractions"))
}

fn homology_checks() -> Check {
    for d in 1..=7 {
        let h = homology(&boundary_simplex(d).map_err(err)?);
        for deg in -1..d as isize {
            let want = usize::from(deg == d as isize - 1);
            ensure(h.betti(deg) == want && h.torsion(deg).is_empty(), || format!("boundary of the {d}-simplex, degree {deg}"))?;
        }
    }
    let h = homology(&real_projective_plane());
    ensure(h.torsion(1) == [BigInt::from(2)] && h.betti(1) == 0 && h.betti(2) == 0, || format!("projective plane: {h:?}"))?;

    let mut matrices = 0;
    let mut complexes: Vec<SimplicialComplex> = corpus::spheres().into_iter().map(|e| e.complex).collect();
    complexes.push(real_projective_plane());
    for k in &complexes {
        for i in 0..=k.dim() {
            let m: Matrix<i64> = boundary_matrix(k, i);
            let snf = smith_normal_form_adaptive(&m);
            ensure(snf.has_divisibility_chain(), || format!("{k}: Smith form of boundary {i} breaks divisibility"))?;
            if i >= 1 {
                let lower: Matrix<i64> = boundary_matrix(k, i - 1);
                ensure(lower.mul(&m).is_zero_matrix(), || format!("{k}: boundary {i} composed with boundary {} is not zero", i - 1))?;
            }
            matrices += 1;
        }
    }
    Ok(format!("boundaries of the 1- to 7-simplex, projective plane torsion Z/2, {matrices} boundary matrices"))
}

fn decomposition_soundness() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for i in 0..30 {
        let d = rng.gen_range(4..=5);
        let count = rng.gen_range(1..=5);
        let mut parts = Vec::new();
        for _ in 0..count {
            let part = match rng.gen_range(0..5) {
                0 => boundary_simplex(d),
                1 => cross_polytope(d),
                2 => corpus::subdivide_ridges(&family_polygon_simplex(5, d).map_err(err)?, 1, rng.gen()),
                _ => random_family_in(d, &mut rng).generate(),
            }
            .map_err(err)?;
            parts.push(part);
        }
        let mut k = parts[0].clone();
        for p in &parts[1..] {
            k = random_connected_sum(&k, p, &mut rng).map_err(err)?;
        }
        let dec = prime_decomposition(&k).map_err(|e| format!("sum {i}: {e}"))?;
        let total: i64 = dec.components.iter().map(|c| c.g2().unwrap_or(i64::MIN)).sum();
        let g2 = k.g2().map_err(err)?;
        ensure(total == g2, || format!("sum {i}: component g2 total {total}, complex g2 {g2}"))?;
        ensure(dec.components.len() == parts.len(), || format!("sum {i}: {} components for {} summands", dec.components.len(), parts.len()))?;
        let mut unmatched: BTreeSet<usize> = (0..dec.components.len()).collect();
        for (j, p) in parts.iter().enumerate() {
            let hit = unmatched.iter().copied().find(|&c| is_isomorphic(&dec.components[c], p).is_some());
            let c = hit.ok_or_else(|| format!("sum {i}: summand {j} not recovered"))?;
            unmatched.remove(&c);
        }
        ensure(dec.reassemble().map_err(err)? == k, || format!("sum {i}: reassembly differs"))?;
    }
    Ok("30 connected sums decomposed into their summands".into())
}

fn random_family_in(d: usize, rng: &mut impl Rng) -> PrimeFamily {
    if rng.gen_bool(0.5) {
        let a = rng.gen_range(2..=d / 2);
        PrimeFamily::TwoSimplices { a, b: d - a }
    } else {
        PrimeFamily::PolygonSimplex { n: rng.gen_range(4..=7), d }
    }
}
