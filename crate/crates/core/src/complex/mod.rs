//! Finite abstract simplicial complexes in canonical facet form.

mod face;
mod iso;
mod json;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::OnceLock;

use serde::Serialize;

pub use face::{Face, Vertex};
pub use iso::is_isomorphic;
pub use json::{parse_complex_json, to_canonical_json, ComplexDocument};

use crate::error::{Error, Result};
use crate::graph::Graph;

static NO_FACES: BTreeSet<Face> = BTreeSet::new();

/// A finite abstract simplicial complex, stored as its sorted set of facets.
///
/// `{∅}` (a single empty facet) is the complex of dimension -1. A complex
/// without any face is not representable.
#[derive(Clone)]
pub struct SimplicialComplex {
    facets: Vec<Face>,
    vertices: Vec<Vertex>,
    // faces grouped by size, index 0 holding the empty face
    faces: OnceLock<Vec<BTreeSet<Face>>>,
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.facets == other.facets
    }
}

impl Eq for SimplicialComplex {}

impl Hash for SimplicialComplex {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.facets.hash(state);
    }
}

impl fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.facets).finish()
    }
}

impl fmt::Display for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, facet) in self.facets.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{facet}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for SimplicialComplex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ComplexDocument::from_complex(self, None).serialize(s)
    }
}

/// Face counts `(f_-1, f_0, ..., f_dim)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct FVector {
    pub counts: Vec<usize>,
}

impl FVector {
    /// Number of faces of dimension `i`, for `i >= -1`.
    pub fn f(&self, i: isize) -> usize {
        usize::try_from(i + 1).ok().and_then(|k| self.counts.get(k).copied()).unwrap_or(0)
    }

    /// Reduced Euler characteristic `sum_{i >= -1} (-1)^i f_i`.
    pub fn reduced_euler_characteristic(&self) -> i64 {
        self.counts
            .iter()
            .enumerate()
            .map(|(k, &c)| if k % 2 == 1 { c as i64 } else { -(c as i64) })
            .sum()
    }

    /// Coefficient list of `f(K, t) = sum f_{i-1} t^i`.
    pub fn polynomial(&self) -> &[usize] {
        &self.counts
    }
}

/// `d` is the largest face size; `g1 = f0 - (d + 1)`, `g2 = f1 - d f0 + C(d+1, 2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GStats {
    pub d: usize,
    pub g1: i64,
    pub g2: i64,
}

pub(crate) fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

impl SimplicialComplex {
    /// Builds the complex generated by `faces`; dominated faces are dropped.
    pub fn from_facets(faces: impl IntoIterator<Item = Face>) -> Result<Self> {
        let faces: Vec<Face> = faces.into_iter().collect();
        if faces.is_empty() {
            return Err(Error::MalformedInput("a complex needs at least one face".into()));
        }
        Ok(Self::generated_by(faces))
    }

    /// Like [`from_facets`](Self::from_facets) from raw vertex lists, rejecting
    /// lists with repeated vertices.
    pub fn from_vertex_lists<I, L>(lists: I) -> Result<Self>
    where
        I: IntoIterator<Item = L>,
        L: IntoIterator<Item = Vertex>,
    {
        let faces = lists.into_iter().map(Face::new).collect::<Result<Vec<_>>>()?;
        Self::from_facets(faces)
    }

    /// The complex `{∅}`.
    pub fn empty() -> Self {
        Self::generated_by(vec![Face::empty()])
    }

    /// The full simplex on `face`.
    pub fn simplex(face: Face) -> Self {
        Self::generated_by(vec![face])
    }

    /// Canonicalises an arbitrary nonempty face list.
    pub(crate) fn generated_by(mut faces: Vec<Face>) -> Self {
        debug_assert!(!faces.is_empty());
        faces.sort_unstable();
        faces.dedup();
        let uniform = faces.windows(2).all(|w| w[0].len() == w[1].len());
        let facets = if uniform {
            faces
        } else {
            let mut by_size = faces;
            by_size.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
            let mut kept: Vec<Face> = Vec::new();
            for f in by_size {
                if !kept.iter().any(|k| k.len() > f.len() && f.is_subset(k)) {
                    kept.push(f);
                }
            }
            kept.sort_unstable();
            kept
        };
        let vertices: BTreeSet<Vertex> =
            facets.iter().flat_map(|f| f.vertices().iter().copied()).collect();
        SimplicialComplex { facets, vertices: vertices.into_iter().collect(), faces: OnceLock::new() }
    }

    pub fn facets(&self) -> &[Face] {
        &self.facets
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn has_vertex(&self, v: Vertex) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    /// Dimension: largest facet size minus one (`-1` for `{∅}`).
    pub fn dim(&self) -> isize {
        self.max_face_size() as isize - 1
    }

    /// Largest face size, `dim + 1`.
    pub fn max_face_size(&self) -> usize {
        self.facets.iter().map(Face::len).max().unwrap_or(0)
    }

    pub fn is_pure(&self) -> bool {
        let d = self.max_face_size();
        self.facets.iter().all(|f| f.len() == d)
    }

    pub fn is_facet(&self, face: &Face) -> bool {
        self.facets.binary_search(face).is_ok()
    }

    fn face_table(&self) -> &Vec<BTreeSet<Face>> {
        self.faces.get_or_init(|| {
            let mut table = vec![BTreeSet::new(); self.max_face_size() + 1];
            for facet in &self.facets {
                for s in facet.subsets() {
                    table[s.len()].insert(s);
                }
            }
            table
        })
    }

    /// All faces of dimension `i`; empty when `i` is out of range.
    pub fn faces(&self, i: isize) -> &BTreeSet<Face> {
        usize::try_from(i + 1)
            .ok()
            .and_then(|k| self.face_table().get(k))
            .unwrap_or(&NO_FACES)
    }

    pub fn all_faces(&self) -> impl Iterator<Item = &Face> {
        self.face_table().iter().flatten()
    }

    pub fn contains(&self, face: &Face) -> bool {
        self.face_table().get(face.len()).is_some_and(|s| s.contains(face))
    }

    pub fn f_vector(&self) -> FVector {
        FVector { counts: self.face_table().iter().map(BTreeSet::len).collect() }
    }

    pub fn g_stats(&self) -> Result<GStats> {
        if self.dim() < 1 {
            return Err(Error::UnsupportedDimension(format!(
                "g2 needs dimension at least 1, got {}",
                self.dim()
            )));
        }
        let d = self.max_face_size();
        let f = self.f_vector();
        let (f0, f1) = (f.f(0) as i64, f.f(1) as i64);
        Ok(GStats {
            d,
            g1: f0 - (d as i64 + 1),
            g2: f1 - d as i64 * f0 + binomial(d + 1, 2) as i64,
        })
    }

    pub fn g2(&self) -> Result<i64> {
        Ok(self.g_stats()?.g2)
    }

    /// `lk(F) = {T : T ∩ F = ∅, T ∪ F ∈ K}`.
    pub fn link(&self, face: &Face) -> Result<Self> {
        if !self.contains(face) {
            return Err(Error::MissingFace(face.clone()));
        }
        Ok(Self::generated_by(
            self.facets.iter().filter(|g| face.is_subset(g)).map(|g| g.difference(face)).collect(),
        ))
    }

    /// `{T : T ∪ F ∈ K}`, generated by the facets containing `F`.
    pub fn closed_star(&self, face: &Face) -> Result<Self> {
        if !self.contains(face) {
            return Err(Error::MissingFace(face.clone()));
        }
        Ok(Self::generated_by(self.facets.iter().filter(|g| face.is_subset(g)).cloned().collect()))
    }

    /// `{T ∈ K : F ⊆ T}`. Not a complex, so returned as a sorted face list.
    pub fn open_star(&self, face: &Face) -> Result<Vec<Face>> {
        if !self.contains(face) {
            return Err(Error::MissingFace(face.clone()));
        }
        Ok(self.all_faces().filter(|t| face.is_subset(t)).cloned().collect())
    }

    /// `{T ∈ K : T ∩ F = ∅}`; `F` need not be a face.
    pub fn antistar(&self, face: &Face) -> Self {
        Self::generated_by(self.facets.iter().map(|g| g.difference(face)).collect())
    }

    /// Subcomplex of faces whose vertices all lie in `keep`.
    pub fn induced(&self, keep: &BTreeSet<Vertex>) -> Self {
        Self::generated_by(
            self.facets
                .iter()
                .map(|g| Face::from_sorted(g.vertices().iter().copied().filter(|v| keep.contains(v)).collect()))
                .collect(),
        )
    }

    /// `K * L`; vertex sets must be disjoint.
    pub fn join(&self, other: &Self) -> Result<Self> {
        if let Some(v) = self.vertices.iter().find(|v| other.has_vertex(**v)) {
            return Err(Error::VertexCollision(*v));
        }
        let mut facets = Vec::with_capacity(self.facets.len() * other.facets.len());
        for a in &self.facets {
            for b in &other.facets {
                facets.push(a.union(b));
            }
        }
        Ok(Self::generated_by(facets))
    }

    /// `K * L` after moving the vertices of `other` onto the smallest ids
    /// unused by `self`, in increasing order.
    pub fn join_relabeled(&self, other: &Self) -> Self {
        let moved = other.relabel_avoiding(self);
        self.join(&moved).expect("relabelled vertex sets are disjoint")
    }

    /// Renames vertices of `self` to the smallest ids not used by `avoid`.
    pub(crate) fn relabel_avoiding(&self, avoid: &Self) -> Self {
        let mut fresh = (0..).filter(|v| !avoid.has_vertex(*v));
        let map: BTreeMap<Vertex, Vertex> =
            self.vertices.iter().map(|&v| (v, fresh.next().expect("unbounded"))).collect();
        self.relabel(&map).expect("injective relabelling")
    }

    /// Applies a vertex map; fails if it is not injective on some face.
    pub fn relabel(&self, map: &BTreeMap<Vertex, Vertex>) -> Result<Self> {
        let faces = self
            .facets
            .iter()
            .map(|f| f.map(|v| *map.get(&v).unwrap_or(&v)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::generated_by(faces))
    }

    /// Relabels vertices to `0..n` preserving their order.
    pub fn normalized(&self) -> Self {
        let map: BTreeMap<Vertex, Vertex> =
            self.vertices.iter().enumerate().map(|(i, &v)| (v, i as Vertex)).collect();
        self.relabel(&map).expect("order-preserving relabelling")
    }

    /// `{apex} * K`.
    pub fn cone(&self, apex: Vertex) -> Result<Self> {
        self.join(&Self::simplex(Face::of(&[apex])))
    }

    /// Smallest vertex id not in use.
    pub fn fresh_vertex(&self) -> Vertex {
        (0..).find(|v| !self.has_vertex(*v)).expect("finite complex")
    }

    /// The 1-skeleton as a graph.
    pub fn skeleton_graph(&self) -> Graph {
        Graph::new(
            self.vertices.iter().copied(),
            self.faces(1).iter().map(|e| (e.vertices()[0], e.vertices()[1])),
        )
        .expect("edges of a complex form a simple graph")
    }

    /// Minimal non-faces on the vertex set, sorted by size then lexicographically.
    ///
    /// Candidates of size `k` are grown from `(k-1)`-faces, so only vertex
    /// sets whose every proper subset is a face are ever examined.
    pub fn missing_faces(&self) -> Vec<Face> {
        let mut out = Vec::new();
        let mut k = 2;
        loop {
            let prev = self.faces(k as isize - 2);
            if prev.is_empty() {
                break;
            }
            for g in prev {
                let top = g.vertices().last().copied();
                for &w in &self.vertices {
                    if top.is_some_and(|t| w <= t) {
                        continue;
                    }
                    let cand = g.with(w);
                    if self.contains(&cand) {
                        continue;
                    }
                    if cand.boundary().all(|b| self.contains(&b)) {
                        out.push(cand);
                    }
                }
            }
            k += 1;
        }
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    /// Every missing face is an edge.
    pub fn is_clique_complex(&self) -> bool {
        self.missing_faces().iter().all(|f| f.len() == 2)
    }

    /// `K = ∂σ` for the simplex on its vertex set.
    pub fn is_simplex_boundary(&self) -> bool {
        let n = self.vertices.len();
        n >= 1
            && self.facets.len() == n
            && self.facets.iter().all(|f| f.len() + 1 == n)
    }

    /// Number of facets containing each vertex.
    pub fn facet_degrees(&self) -> BTreeMap<Vertex, usize> {
        let mut deg: BTreeMap<Vertex, usize> = self.vertices.iter().map(|&v| (v, 0)).collect();
        for f in &self.facets {
            for v in f.vertices() {
                *deg.get_mut(v).expect("vertex of facet") += 1;
            }
        }
        deg
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sc(lists: &[&[Vertex]]) -> SimplicialComplex {
        SimplicialComplex::from_vertex_lists(lists.iter().map(|l| l.iter().copied())).unwrap()
    }

    fn boundary(n: Vertex) -> SimplicialComplex {
        let full = Face::new(0..n).unwrap();
        SimplicialComplex::from_facets(full.boundary().collect::<Vec<_>>()).unwrap()
    }

    fn octahedron() -> SimplicialComplex {
        let pair = |a| sc(&[&[a], &[a + 1]]);
        pair(0).join(&pair(2)).unwrap().join(&pair(4)).unwrap()
    }

    fn cycle(n: Vertex) -> SimplicialComplex {
        SimplicialComplex::from_vertex_lists((0..n).map(|i| [i, (i + 1) % n])).unwrap()
    }

    /// Every subset of every given face, collected independently of the face table.
    fn closure_oracle(k: &SimplicialComplex) -> BTreeSet<Vec<Vertex>> {
        let mut out = BTreeSet::new();
        for f in k.facets() {
            let v = f.vertices();
            for mask in 0..(1u32 << v.len()) {
                out.insert((0..v.len()).filter(|i| mask >> i & 1 == 1).map(|i| v[i]).collect());
            }
        }
        out
    }

    fn brute_missing(k: &SimplicialComplex) -> BTreeSet<Face> {
        let faces = closure_oracle(k);
        let vs = k.vertices();
        let mut out = BTreeSet::new();
        for mask in 1u32..(1 << vs.len()) {
            let cand: Vec<Vertex> = (0..vs.len()).filter(|i| mask >> i & 1 == 1).map(|i| vs[i]).collect();
            if faces.contains(&cand) {
                continue;
            }
            let f = Face::new(cand.iter().copied()).unwrap();
            if f.boundary().all(|b| faces.contains(b.vertices())) {
                out.insert(f);
            }
        }
        out
    }

    #[test]
    fn from_facets_examples() {
        let c3 = sc(&[&[0, 1], &[1, 2], &[0, 2]]);
        assert_eq!(c3.dim(), 1);
        assert_eq!(c3.facets().len(), 3);
        let k = sc(&[&[0, 1, 2], &[0, 1]]);
        assert_eq!(k.facets(), &[Face::of(&[0, 1, 2])]);
        assert!(SimplicialComplex::from_vertex_lists([[0u32, 0, 1]]).is_err());
        assert!(SimplicialComplex::from_facets(Vec::new()).is_err());
        let again = SimplicialComplex::from_facets(k.facets().to_vec()).unwrap();
        assert_eq!(again, k);
    }

    #[test]
    fn empty_complex_has_dimension_minus_one() {
        let e = SimplicialComplex::empty();
        assert_eq!(e.dim(), -1);
        assert_eq!(e.f_vector().counts, vec![1]);
        assert!(e.g2().is_err());
    }

    #[test]
    fn faces_and_f_vectors() {
        let s3 = boundary(4);
        assert_eq!(s3.faces(1).len(), 6);
        assert_eq!(s3.f_vector().counts, vec![1, 4, 6, 4]);
        let oct = octahedron();
        assert_eq!(oct.faces(2).len(), 8);
        assert_eq!(oct.f_vector().counts, vec![1, 6, 12, 8]);
        assert_eq!(oct.faces(-1).len(), 1);
        assert!(oct.faces(5).is_empty());
        assert!(oct.faces(-3).is_empty());
        assert_eq!(cycle(5).f_vector().counts, vec![1, 5, 5]);
        for k in [s3, oct, cycle(5)] {
            let oracle = closure_oracle(&k);
            assert_eq!(k.all_faces().count(), oracle.len());
        }
    }

    #[test]
    fn g2_examples() {
        assert_eq!(boundary(5).g2().unwrap(), 0);
        let poly = cycle(5).join_relabeled(&boundary(3));
        assert_eq!(poly.g2().unwrap(), 1);
        let cross4 = octahedron().join_relabeled(&sc(&[&[0], &[1]]));
        assert_eq!(cross4.f_vector().f(0), 8);
        assert_eq!(cross4.f_vector().f(1), 24);
        assert_eq!(cross4.g2().unwrap(), 2);
        assert_eq!(octahedron().g2().unwrap(), 0);
    }

    #[test]
    fn links_and_stars() {
        let oct = octahedron();
        let lk = oct.link(&Face::of(&[0])).unwrap();
        assert_eq!(lk.f_vector().counts, vec![1, 4, 4]);
        assert!(lk.vertices().iter().all(|&v| v != 0 && v != 1));
        assert_eq!(oct.link(&Face::empty()).unwrap(), oct);
        let anti = oct.antistar(&Face::of(&[0]));
        assert_eq!(anti, oct.closed_star(&Face::of(&[1])).unwrap());
        assert_eq!(anti.facets().len(), 4);
        assert_eq!(oct.link(&Face::of(&[0, 1])), Err(Error::MissingFace(Face::of(&[0, 1]))));
    }

    #[test]
    fn star_identities() {
        let k = cycle(5).join_relabeled(&boundary(3));
        for &v in k.vertices() {
            let f = Face::of(&[v]);
            let lk = k.link(&f).unwrap();
            let star = k.closed_star(&f).unwrap();
            assert_eq!(star, lk.cone(v).unwrap());
            let open = k.open_star(&f).unwrap();
            let anti = k.antistar(&f);
            let total = open.len() + anti.all_faces().count();
            assert_eq!(total, k.all_faces().count());
            assert!(open.iter().all(|t| !anti.contains(t)));
        }
    }

    #[test]
    fn join_examples() {
        let pts = sc(&[&[0], &[1]]);
        let c4 = pts.join_relabeled(&pts);
        assert_eq!(c4.f_vector().counts, vec![1, 4, 4]);
        let k = cycle(5).join_relabeled(&boundary(3));
        assert_eq!(k.facets().len(), 15);
        assert!(k.facets().iter().all(|f| f.len() == 4));
        assert_eq!(cycle(5).join(&SimplicialComplex::empty()).unwrap(), cycle(5));
        assert!(cycle(5).join(&cycle(4)).is_err());
    }

    #[test]
    fn cone_examples() {
        let c4 = cycle(4);
        let c = c4.cone(9).unwrap();
        assert_eq!(c.facets().len(), 4);
        assert!(c.facets().iter().all(|f| f.contains(9)));
        assert_eq!(SimplicialComplex::empty().cone(3).unwrap().facets(), &[Face::of(&[3])]);
        let disk = boundary(3).cone(7).unwrap();
        assert_eq!(disk.facets().len(), 3);
        assert!(c4.cone(0).is_err());
    }

    #[test]
    fn skeleton_graph_examples() {
        assert_eq!(octahedron().skeleton_graph().edge_count(), 12);
        assert_eq!(sc(&[&[4]]).skeleton_graph().edge_count(), 0);
        let k = cycle(5).join_relabeled(&boundary(3));
        assert_eq!(k.skeleton_graph().edge_count(), 23);
    }

    #[test]
    fn missing_face_examples() {
        let oct = octahedron();
        let m = oct.missing_faces();
        assert_eq!(m, vec![Face::of(&[0, 1]), Face::of(&[2, 3]), Face::of(&[4, 5])]);
        assert!(oct.is_clique_complex());
        assert_eq!(boundary(5).missing_faces(), vec![Face::of(&[0, 1, 2, 3, 4])]);
        assert!(!boundary(3).is_clique_complex());
        let k = cycle(5).join_relabeled(&boundary(3));
        let m = k.missing_faces();
        assert_eq!(m.iter().filter(|f| f.len() == 2).count(), 5);
        assert_eq!(m.iter().filter(|f| f.len() == 3).count(), 1);
        assert_eq!(m.len(), 6);
        assert!(!k.is_clique_complex());
        for k in [oct, k, boundary(4), cycle(6)] {
            assert_eq!(k.missing_faces().into_iter().collect::<BTreeSet<_>>(), brute_missing(&k));
        }
    }

    fn arb_complex() -> impl Strategy<Value = SimplicialComplex> {
        proptest::collection::vec(proptest::collection::btree_set(0u32..7, 1..4), 1..6).prop_map(|fs| {
            SimplicialComplex::from_facets(fs.into_iter().map(|s| Face::new(s).unwrap()).collect::<Vec<_>>())
                .unwrap()
        })
    }

    proptest! {
        #[test]
        fn closure_matches_f_vector(k in arb_complex()) {
            let oracle = closure_oracle(&k);
            for i in -1..=k.dim() {
                let n = oracle.iter().filter(|f| f.len() as isize == i + 1).count();
                prop_assert_eq!(k.faces(i).len(), n);
                prop_assert_eq!(k.f_vector().f(i), n);
            }
            for f in k.all_faces() {
                for b in f.boundary() {
                    prop_assert!(k.contains(&b));
                }
            }
        }

        #[test]
        fn f_polynomial_is_multiplicative(a in arb_complex(), b in arb_complex()) {
            let j = a.join_relabeled(&b);
            let (pa, pb) = (a.f_vector().counts, b.f_vector().counts);
            let mut prod = vec![0usize; pa.len() + pb.len() - 1];
            for (i, x) in pa.iter().enumerate() {
                for (k, y) in pb.iter().enumerate() {
                    prod[i + k] += x * y;
                }
            }
            prop_assert_eq!(j.f_vector().counts, prod);
            prop_assert_eq!(j.dim(), a.dim() + b.dim() + 1);
        }

        #[test]
        fn join_is_associative(a in arb_complex(), b in arb_complex(), c in arb_complex()) {
            let b = b.relabel_avoiding(&a);
            let ab = a.join(&b).unwrap();
            let c = c.relabel_avoiding(&ab);
            let bc = b.join(&c).unwrap();
            prop_assert_eq!(ab.join(&c).unwrap(), a.join(&bc).unwrap());
        }

        #[test]
        fn missing_faces_of_join_are_union(a in arb_complex(), b in arb_complex()) {
            let b = b.relabel_avoiding(&a);
            let j = a.join(&b).unwrap();
            let mut expected: Vec<Face> = a.missing_faces().into_iter().chain(b.missing_faces()).collect();
            expected.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)));
            prop_assert_eq!(j.missing_faces(), expected);
        }

        #[test]
        fn missing_faces_match_brute_force(k in arb_complex()) {
            prop_assert_eq!(k.missing_faces().into_iter().collect::<BTreeSet<_>>(), brute_missing(&k));
        }
    }
}
