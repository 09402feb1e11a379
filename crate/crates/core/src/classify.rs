//! Primality, stackedness, prime decomposition and the `g2 <= 1` verdicts.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::complex::{Face, FVector, SimplicialComplex, Vertex};
use crate::constructions::{family_polygon_simplex, family_two_simplices, StackStep, StackingLog};
use crate::error::{Error, Result};
use crate::homology::{facet_components, is_homology_sphere};
use crate::rigidity::{kernel_dim, DEFAULT_TRIALS};

/// Missing faces of size `dim K + 1`, sorted.
pub fn missing_facets(k: &SimplicialComplex) -> Vec<Face> {
    let d = k.max_face_size();
    if d < 3 {
        return k.missing_faces().into_iter().filter(|f| f.len() == d).collect();
    }
    let mut nbrs: BTreeMap<Vertex, BTreeSet<Vertex>> = k.vertices().iter().map(|&v| (v, BTreeSet::new())).collect();
    for e in k.faces(1) {
        let (a, b) = (e.vertices()[0], e.vertices()[1]);
        nbrs.get_mut(&a).expect("vertex").insert(b);
        nbrs.get_mut(&b).expect("vertex").insert(a);
    }
    let mut out = BTreeSet::new();
    for ridge in k.faces(d as isize - 2) {
        let top = *ridge.vertices().last().expect("ridge is nonempty");
        let (first, rest) = ridge.vertices().split_first().expect("ridge is nonempty");
        for &w in nbrs[first].range(top + 1..) {
            if rest.iter().all(|v| nbrs[v].contains(&w)) {
                let cand = ridge.with(w);
                if !k.is_facet(&cand) && cand.boundary().all(|r| k.contains(&r)) {
                    out.insert(cand);
                }
            }
        }
    }
    out.into_iter().collect()
}

/// No missing face of size `dim K + 1`, and `K` is not a simplex boundary.
pub fn is_prime(k: &SimplicialComplex) -> bool {
    k.is_pure() && !k.is_simplex_boundary() && missing_facets(k).is_empty()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GluingEdge {
    pub a: usize,
    pub b: usize,
    pub facet: Face,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeDecomposition {
    pub components: Vec<SimplicialComplex>,
    pub gluing_tree: Vec<GluingEdge>,
    pub simplex_count: usize,
}

impl PrimeDecomposition {
    /// Glues the components back together: all their facets except the
    /// glued ones.
    pub fn reassemble(&self) -> Result<SimplicialComplex> {
        let glued: BTreeSet<&Face> = self.gluing_tree.iter().map(|e| &e.facet).collect();
        let facets: BTreeSet<Face> = self
            .components
            .iter()
            .flat_map(|c| c.facets().iter())
            .filter(|f| !glued.contains(f))
            .cloned()
            .collect();
        SimplicialComplex::from_facets(facets)
    }

    pub fn prime_components(&self) -> impl Iterator<Item = &SimplicialComplex> {
        self.components.iter().filter(|c| !c.is_simplex_boundary())
    }
}

/// Splits `K` along missing facets until every piece is prime or a simplex
/// boundary. Components keep the vertex labels of `K`.
///
/// Fails with `NotASphere` when a missing facet does not separate `K` into
/// exactly two pieces.
pub fn prime_decomposition(k: &SimplicialComplex) -> Result<PrimeDecomposition> {
    if !k.is_pure() {
        return Err(Error::NotPure);
    }
    if k.max_face_size() < 3 {
        return Err(Error::UnsupportedDimension(format!(
            "decomposition needs dimension at least 2, got {}",
            k.dim()
        )));
    }
    let mut components = vec![k.clone()];
    let mut gluing_tree: Vec<GluingEdge> = Vec::new();
    let mut i = 0;
    while i < components.len() {
        let Some(f) = missing_facets(&components[i]).into_iter().next() else {
            i += 1;
            continue;
        };
        let forbidden: BTreeSet<Face> = f.boundary().collect();
        let sides = facet_components(&components[i], &forbidden)?;
        if sides.len() != 2 {
            return Err(Error::NotASphere(format!(
                "missing facet {f} leaves {} pieces instead of two",
                sides.len()
            )));
        }
        let mut halves = sides.into_iter().map(|mut side| {
            side.push(f.clone());
            SimplicialComplex::from_facets(side)
        });
        let first = halves.next().expect("two sides")?;
        let second = halves.next().expect("two sides")?;
        let j = components.len();
        for e in &mut gluing_tree {
            for end in [&mut e.a, &mut e.b] {
                if *end == i && !e.facet.boundary().all(|r| first.contains(&r)) {
                    *end = j;
                }
            }
        }
        components[i] = first;
        components.push(second);
        gluing_tree.push(GluingEdge { a: i, b: j, facet: f });
    }
    let simplex_count = components.iter().filter(|c| c.is_simplex_boundary()).count();
    Ok(PrimeDecomposition { components, gluing_tree, simplex_count })
}

/// Greedy un-stacking. Repeatedly picks the lowest vertex `v` whose link is
/// the boundary of a simplex `N` with `N` not a facet, and replaces the star
/// of `v` by `N`. Succeeds when the result is `∂σ^d`.
///
/// The returned log rebuilds `K` from the final complex.
pub fn is_stacked(k: &SimplicialComplex) -> (bool, StackingLog) {
    let d = k.max_face_size();
    let mut cur = k.clone();
    let mut removed: Vec<StackStep> = Vec::new();
    while cur.is_pure() && !cur.is_simplex_boundary() && d >= 2 {
        let Some((v, n)) = find_stacked_vertex(&cur, d) else {
            break;
        };
        let facets: Vec<Face> =
            cur.facets().iter().filter(|f| !f.contains(v)).cloned().chain([n.clone()]).collect();
        cur = SimplicialComplex::from_facets(facets).expect("nonempty facet list");
        removed.push(StackStep { facet: n, vertex: v });
    }
    let ok = cur.is_pure() && cur.max_face_size() == d && cur.num_vertices() == d + 1 && cur.is_simplex_boundary();
    removed.reverse();
    (ok, StackingLog { base: cur, steps: removed })
}

fn find_stacked_vertex(k: &SimplicialComplex, d: usize) -> Option<(Vertex, Face)> {
    let mut star: BTreeMap<Vertex, Vec<&Face>> = BTreeMap::new();
    for f in k.facets() {
        for &v in f.vertices() {
            star.entry(v).or_default().push(f);
        }
    }
    star.into_iter().find_map(|(v, fs)| {
        if fs.len() != d {
            return None;
        }
        let n = fs.iter().fold(Face::empty(), |acc, f| acc.union(f)).without(v);
        (n.len() == d && !k.is_facet(&n)).then_some((v, n))
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum PrimeFamily {
    /// `∂σ^a * ∂σ^b`, `2 <= a <= b`.
    TwoSimplices { a: usize, b: usize },
    /// `n`-gon `* ∂σ^{d-2}`, `n >= 4`.
    PolygonSimplex { n: usize, d: usize },
}

impl PrimeFamily {
    pub fn generate(&self) -> Result<SimplicialComplex> {
        match *self {
            PrimeFamily::TwoSimplices { a, b } => family_two_simplices(a, b),
            PrimeFamily::PolygonSimplex { n, d } => family_polygon_simplex(n, d),
        }
    }
}

impl fmt::Display for PrimeFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrimeFamily::TwoSimplices { a, b } => write!(f, "PrimeTwoSimplices({a},{b})"),
            PrimeFamily::PolygonSimplex { n, d } => write!(f, "PrimePolygonSimplex({n},{d})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DetectedForm {
    pub family: PrimeFamily,
    /// Vertex of `K` to vertex of `family.generate()`.
    pub bijection: BTreeMap<Vertex, Vertex>,
}

/// Recognises the two prime `g2 = 1` families from their missing faces. The
/// returned bijection carries `K` exactly onto the family generator.
pub fn detect_g2_one_form(k: &SimplicialComplex) -> Option<DetectedForm> {
    let d = k.max_face_size();
    if d < 4 || !k.is_pure() {
        return None;
    }
    let missing = k.missing_faces();
    detect_two_simplices(k, &missing).or_else(|| detect_polygon_simplex(k, d, &missing))
}

fn confirm(k: &SimplicialComplex, family: PrimeFamily, order: impl IntoIterator<Item = Vertex>) -> Option<DetectedForm> {
    let bijection: BTreeMap<Vertex, Vertex> = order.into_iter().zip(0..).collect();
    if bijection.len() != k.num_vertices() {
        return None;
    }
    (k.relabel(&bijection).ok()? == family.generate().ok()?).then_some(DetectedForm { family, bijection })
}

fn detect_two_simplices(k: &SimplicialComplex, missing: &[Face]) -> Option<DetectedForm> {
    let [x, y] = missing else { return None };
    if !x.is_disjoint(y) || x.len() + y.len() != k.num_vertices() {
        return None;
    }
    let (small, large) = if x.len() <= y.len() { (x, y) } else { (y, x) };
    let (a, b) = (small.len() - 1, large.len() - 1);
    if a < 2 {
        return None;
    }
    let order = small.vertices().iter().chain(large.vertices()).copied();
    confirm(k, PrimeFamily::TwoSimplices { a, b }, order)
}

fn detect_polygon_simplex(k: &SimplicialComplex, d: usize, missing: &[Face]) -> Option<DetectedForm> {
    let mut big = missing.iter().filter(|f| f.len() == d - 1);
    let sigma = big.next()?;
    if big.next().is_some() {
        return None;
    }
    let rest: BTreeSet<Vertex> = k.vertices().iter().copied().filter(|v| !sigma.contains(*v)).collect();
    let cycle = walk_cycle(&k.skeleton_graph().induced(&rest))?;
    if cycle.len() < 4 {
        return None;
    }
    let n = cycle.len();
    confirm(k, PrimeFamily::PolygonSimplex { n, d }, cycle.into_iter().chain(sigma.vertices().iter().copied()))
}

/// Vertices of a cycle graph in walking order, from the smallest vertex
/// towards its smaller neighbour.
fn walk_cycle(g: &crate::graph::Graph) -> Option<Vec<Vertex>> {
    let start = *g.vertices().first()?;
    if g.edge_count() != g.n() || g.vertices().iter().any(|&v| g.degree(v) != 2) {
        return None;
    }
    let mut order = vec![start];
    let mut prev = start;
    let mut cur = g.neighbors(start)[0];
    while cur != start {
        order.push(cur);
        let nb = g.neighbors(cur);
        let next = if nb[0] == prev { nb[1] } else { nb[0] };
        prev = cur;
        cur = next;
    }
    (order.len() == g.n()).then_some(order)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    NotASphere { reason: String },
    Stacked,
    PrimeTwoSimplices { a: usize, b: usize },
    PrimePolygonSimplex { n: usize, d: usize },
    StackedOverBase { base: Box<Verdict>, stacks: usize },
    Unclassified { g2: i64 },
}

impl Verdict {
    fn prime(family: PrimeFamily) -> Self {
        match family {
            PrimeFamily::TwoSimplices { a, b } => Verdict::PrimeTwoSimplices { a, b },
            PrimeFamily::PolygonSimplex { n, d } => Verdict::PrimePolygonSimplex { n, d },
        }
    }

    /// The prime family underneath a prime or stacked-over-prime verdict.
    pub fn family(&self) -> Option<PrimeFamily> {
        match self {
            Verdict::PrimeTwoSimplices { a, b } => Some(PrimeFamily::TwoSimplices { a: *a, b: *b }),
            Verdict::PrimePolygonSimplex { n, d } => Some(PrimeFamily::PolygonSimplex { n: *n, d: *d }),
            Verdict::StackedOverBase { base, .. } => base.family(),
            _ => None,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::NotASphere { reason } => write!(f, "NotASphere ({reason})"),
            Verdict::Stacked => write!(f, "Stacked"),
            Verdict::PrimeTwoSimplices { a, b } => write!(f, "PrimeTwoSimplices({a},{b})"),
            Verdict::PrimePolygonSimplex { n, d } => write!(f, "PrimePolygonSimplex({n},{d})"),
            Verdict::StackedOverBase { base, stacks } => write!(f, "StackedOverBase({base}, {stacks})"),
            Verdict::Unclassified { g2 } => write!(f, "Unclassified({g2})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompositionSummary {
    pub components: usize,
    pub simplex_count: usize,
    pub prime_components: Vec<SimplicialComplex>,
    pub gluing_tree: Vec<GluingEdge>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub d: usize,
    pub f_vector: FVector,
    pub g2: i64,
    pub missing_facets: Vec<Face>,
    pub stress_kernel_dim: Option<usize>,
    pub sphere_checked: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<DecompositionSummary>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub stacking_steps: Vec<StackStep>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detected_form: Option<DetectedForm>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub verdict: Verdict,
    pub certificate: Certificate,
}

struct Run<'a> {
    k: &'a SimplicialComplex,
    sphere_checked: bool,
    certificate: Certificate,
}

impl Run<'_> {
    fn done(mut self, verdict: Verdict) -> Result<Classification> {
        if !matches!(verdict, Verdict::NotASphere { .. }) && self.k.num_vertices() <= 400 {
            let g = self.k.skeleton_graph();
            self.certificate.stress_kernel_dim = Some(kernel_dim(&g, self.certificate.d, DEFAULT_TRIALS, 0));
        }
        self.certificate.sphere_checked = self.sphere_checked;
        Ok(Classification { verdict, certificate: self.certificate })
    }

    /// Reports `message` as a theorem violation, unless `K` turns out not to
    /// be a homology sphere.
    fn violation(mut self, message: String) -> Result<Classification> {
        if !self.sphere_checked {
            self.sphere_checked = true;
            if !is_homology_sphere(self.k) {
                return self.done(not_a_sphere("not a homology sphere"));
            }
        }
        Err(Error::TheoremViolation(message))
    }
}

fn not_a_sphere(reason: &str) -> Verdict {
    Verdict::NotASphere { reason: reason.to_owned() }
}

/// Classifies a pure complex. `check_sphere` runs the full homology-sphere
/// test first; without it the input is trusted, and a homology-sphere test is
/// only run before reporting a theorem violation.
pub fn classify(k: &SimplicialComplex, check_sphere: bool) -> Result<Classification> {
    let d = k.max_face_size();
    if d < 3 {
        return Err(Error::UnsupportedDimension(format!(
            "classification needs dimension at least 2, got {}",
            k.dim()
        )));
    }
    let g2 = k.g2()?;
    let mut run = Run {
        k,
        sphere_checked: false,
        certificate: Certificate {
            d,
            f_vector: k.f_vector(),
            g2,
            missing_facets: Vec::new(),
            stress_kernel_dim: None,
            sphere_checked: false,
            decomposition: None,
            stacking_steps: Vec::new(),
            detected_form: None,
        },
    };
    if !k.is_pure() {
        return run.done(not_a_sphere("not pure"));
    }
    if check_sphere {
        run.sphere_checked = true;
        if !is_homology_sphere(k) {
            return run.done(not_a_sphere("not a homology sphere"));
        }
    }
    run.certificate.missing_facets = missing_facets(k);

    if d == 3 {
        // every 2-sphere has g2 = 0
        if g2 != 0 {
            return run.done(not_a_sphere("g2 of a 2-sphere is 0"));
        }
        let (stacked, log) = is_stacked(k);
        if stacked {
            run.certificate.stacking_steps = log.steps;
            return run.done(Verdict::Stacked);
        }
        return run.done(Verdict::Unclassified { g2 });
    }

    match g2 {
        g if g < 0 => run.done(not_a_sphere("negative g2")),
        0 => {
            let (stacked, log) = is_stacked(k);
            if !stacked {
                return run.violation(format!("g2 = 0 but un-stacking stopped at {} vertices", log.base.num_vertices()));
            }
            run.certificate.stacking_steps = log.steps;
            run.done(Verdict::Stacked)
        }
        1 => {
            let dec = match prime_decomposition(k) {
                Ok(dec) => dec,
                Err(Error::NotASphere(reason)) => return run.done(Verdict::NotASphere { reason }),
                Err(e) => return Err(e),
            };
            let primes: Vec<&SimplicialComplex> = dec.prime_components().collect();
            run.certificate.decomposition = Some(DecompositionSummary {
                components: dec.components.len(),
                simplex_count: dec.simplex_count,
                prime_components: primes.iter().map(|c| (*c).clone()).collect(),
                gluing_tree: dec.gluing_tree.clone(),
            });
            let [prime] = primes.as_slice() else {
                return run.violation(format!("g2 = 1 with {} prime components", primes.len()));
            };
            let Some(form) = detect_g2_one_form(prime) else {
                return run.violation("g2 = 1 prime component of unknown form".into());
            };
            let base = Verdict::prime(form.family);
            run.certificate.detected_form = Some(form);
            if dec.simplex_count == 0 {
                run.done(base)
            } else {
                run.done(Verdict::StackedOverBase { base: Box::new(base), stacks: dec.simplex_count })
            }
        }
        g => run.done(Verdict::Unclassified { g2: g }),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantReport {
    pub d: usize,
    /// Missing triangles, each with the cycle `C` such that `K = ∂T * C` (d = 4).
    pub missing_triangles: Vec<(Face, Vec<Vertex>)>,
    /// Lowest vertex whose link is a prime `g2 = 1` sphere on all other vertices (d > 4).
    pub witness_vertex: Option<Vertex>,
}

/// Checks the structural facts behind the `g2 = 1` classification on a
/// prime instance.
pub fn d4_invariant_checks(k: &SimplicialComplex) -> Result<InvariantReport> {
    let d = k.max_face_size();
    if d < 4 {
        return Err(Error::UnsupportedDimension(format!("needs dimension at least 3, got {}", k.dim())));
    }
    if !is_prime(k) || k.g2()? != 1 {
        return Err(Error::InvalidParameter("expected a prime complex with g2 = 1".into()));
    }
    let mut report = InvariantReport { d, missing_triangles: Vec::new(), witness_vertex: None };
    if d == 4 {
        for t in k.missing_faces().into_iter().filter(|f| f.len() == 3) {
            let edge = t.boundary().next().expect("triangle has edges");
            let link = k.link(&edge)?;
            let cycle = walk_cycle(&link.skeleton_graph())
                .filter(|c| link.max_face_size() == 2 && c.len() >= 3)
                .ok_or_else(|| Error::TheoremViolation(format!("link of {edge} is not a cycle")))?;
            let tri = SimplicialComplex::from_facets(t.boundary().collect::<Vec<_>>())?;
            if tri.join(&link).ok().as_ref() != Some(k) {
                return Err(Error::TheoremViolation(format!("K is not ∂{t} joined with a cycle")));
            }
            report.missing_triangles.push((t, cycle));
        }
        if report.missing_triangles.is_empty() {
            return Err(Error::TheoremViolation("no missing triangle".into()));
        }
    } else {
        let all: BTreeSet<Vertex> = k.vertices().iter().copied().collect();
        let witness = k.vertices().iter().copied().find(|&u| {
            let lk = k.link(&Face::of(&[u])).expect("vertex is a face");
            lk.num_vertices() + 1 == all.len() && lk.g2().ok() == Some(1) && is_prime(&lk)
        });
        report.witness_vertex =
            Some(witness.ok_or_else(|| Error::TheoremViolation("no vertex link is a prime g2 = 1 sphere".into()))?);
    }
    Ok(report)
}
