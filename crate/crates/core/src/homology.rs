//! Reduced integral homology via Smith normal form, and the homology sphere
//! and ball predicates built on it.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::ops::Neg;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::complex::{Face, SimplicialComplex};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::smith::{smith_normal_form_adaptive, SmithForm};

/// Boundary matrix with arbitrary-precision entries.
pub type IntegerMatrix = Matrix<BigInt>;

/// `∂_i : C_i → C_{i-1}` of the augmented chain complex.
///
/// Rows are indexed by the `(i-1)`-faces (the single empty face when
/// `i = 0`), columns by the `i`-faces, both in lexicographic order. Removing
/// the vertex at position `j` contributes `(-1)^j`.
pub fn boundary_matrix<T>(k: &SimplicialComplex, i: isize) -> Matrix<T>
where
    T: Clone + Zero + One + Neg<Output = T>,
{
    let rows: Vec<&Face> = k.faces(i - 1).iter().collect();
    let cols: Vec<&Face> = k.faces(i).iter().collect();
    let index: HashMap<&Face, usize> = rows.iter().enumerate().map(|(r, f)| (*f, r)).collect();
    let mut m = Matrix::zeros(rows.len(), cols.len());
    for (c, face) in cols.iter().enumerate() {
        for (j, sub) in face.boundary().enumerate() {
            let r = index[&sub];
            m.set(r, c, if j % 2 == 0 { T::one() } else { -T::one() });
        }
    }
    m
}

/// Reduced Betti numbers and torsion coefficients in degrees `-1..=dim`.
///
/// Index `0` of both vectors is degree `-1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct HomologyProfile {
    pub betti: Vec<usize>,
    #[serde(serialize_with = "serialize_torsion")]
    pub torsion: Vec<Vec<BigInt>>,
}

fn serialize_torsion<S: Serializer>(torsion: &[Vec<BigInt>], s: S) -> std::result::Result<S::Ok, S::Error> {
    let as_json: Vec<Vec<serde_json::Value>> = torsion
        .iter()
        .map(|fs| {
            fs.iter()
                .map(|f| match f.to_u64() {
                    Some(v) => serde_json::Value::from(v),
                    None => serde_json::Value::from(f.to_string()),
                })
                .collect()
        })
        .collect();
    as_json.serialize(s)
}

impl HomologyProfile {
    pub fn betti(&self, degree: isize) -> usize {
        usize::try_from(degree + 1).ok().and_then(|k| self.betti.get(k).copied()).unwrap_or(0)
    }

    pub fn torsion(&self, degree: isize) -> &[BigInt] {
        usize::try_from(degree + 1)
            .ok()
            .and_then(|k| self.torsion.get(k))
            .map_or(&[], Vec::as_slice)
    }

    pub fn is_acyclic(&self) -> bool {
        self.betti.iter().all(|&b| b == 0) && self.torsion.iter().all(Vec::is_empty)
    }

    /// Reduced homology of `S^m` (for `m = -1`, of `{∅}`).
    pub fn is_sphere(&self, m: isize) -> bool {
        if m < -1 || m + 1 >= self.betti.len() as isize {
            return false;
        }
        self.torsion.iter().all(Vec::is_empty)
            && self.betti.iter().enumerate().all(|(k, &b)| b == usize::from(k as isize == m + 1))
    }

    /// `sum_k (-1)^k betti_k`, equal to the reduced Euler characteristic.
    pub fn euler_characteristic(&self) -> i64 {
        self.betti
            .iter()
            .enumerate()
            .map(|(k, &b)| if k % 2 == 1 { b as i64 } else { -(b as i64) })
            .sum()
    }
}

/// Smith forms of `∂_0, ..., ∂_dim`.
pub fn boundary_smith_forms(k: &SimplicialComplex) -> Vec<SmithForm<BigInt>> {
    (0..=k.dim()).map(|i| smith_normal_form_adaptive(&boundary_matrix::<i64>(k, i))).collect()
}

pub fn homology(k: &SimplicialComplex) -> HomologyProfile {
    let dim = k.dim();
    let f = k.f_vector();
    let snf = boundary_smith_forms(k);
    // snf[i] is ∂_i for i in 0..=dim
    let rank = |i: isize| -> usize {
        if i < 0 || i > dim {
            0
        } else {
            snf[i as usize].rank()
        }
    };
    let mut betti = Vec::new();
    let mut torsion = Vec::new();
    for deg in -1..=dim {
        betti.push(f.f(deg) - rank(deg) - rank(deg + 1));
        let t = if deg < dim { snf[(deg + 1) as usize].torsion() } else { Vec::new() };
        torsion.push(t);
    }
    HomologyProfile { betti, torsion }
}

/// Memoises link homology by the order-normalised link.
#[derive(Default)]
pub struct LinkHomologyCache {
    profiles: HashMap<SimplicialComplex, HomologyProfile>,
}

impl LinkHomologyCache {
    pub fn profile(&mut self, k: &SimplicialComplex) -> &HomologyProfile {
        self.profiles.entry(k.normalized()).or_insert_with_key(homology)
    }
}

fn ridges_have_two_cofaces(k: &SimplicialComplex) -> bool {
    let mut count: HashMap<Face, usize> = HashMap::new();
    for f in k.facets() {
        for r in f.boundary() {
            *count.entry(r).or_default() += 1;
        }
    }
    count.values().all(|&c| c == 2)
}

/// Every face `F` (including `∅`) has a link with the reduced homology of
/// `S^{dim K - |F|}`.
pub fn is_homology_sphere(k: &SimplicialComplex) -> bool {
    is_homology_sphere_cached(k, &mut LinkHomologyCache::default())
}

pub fn is_homology_sphere_cached(k: &SimplicialComplex, cache: &mut LinkHomologyCache) -> bool {
    if !k.is_pure() {
        return false;
    }
    if k.dim() >= 1 && !ridges_have_two_cofaces(k) {
        return false;
    }
    let dim = k.dim();
    // largest faces first: their links are cheap and catch most failures
    for size in (0..=k.max_face_size()).rev() {
        for face in k.faces(size as isize - 1) {
            let lk = k.link(face).expect("face of complex");
            if !cache.profile(&lk).is_sphere(dim - face.len() as isize) {
                return false;
            }
        }
    }
    true
}

/// The boundary of `K` if `K` is a homology ball, else `None`.
///
/// `K` must be acyclic, every face link must be acyclic or a homology sphere
/// of dimension `dim K - |F|`, and the faces with acyclic links must form a
/// homology `(dim K - 1)`-sphere.
pub fn homology_ball_boundary(k: &SimplicialComplex) -> Option<SimplicialComplex> {
    let mut cache = LinkHomologyCache::default();
    if !k.is_pure() || !cache.profile(k).is_acyclic() {
        return None;
    }
    let dim = k.dim();
    let mut boundary_faces = Vec::new();
    for face in k.all_faces() {
        let lk = k.link(face).expect("face of complex");
        let p = cache.profile(&lk);
        if p.is_acyclic() {
            boundary_faces.push(face.clone());
        } else if !p.is_sphere(dim - face.len() as isize) {
            return None;
        }
    }
    let boundary = SimplicialComplex::from_facets(boundary_faces.clone()).ok()?;
    // the acyclic-link faces must already be closed under taking subsets
    if boundary.all_faces().count() != boundary_faces.len() {
        return None;
    }
    if boundary.dim() != dim - 1 || !is_homology_sphere_cached(&boundary, &mut cache) {
        return None;
    }
    Some(boundary)
}

pub fn is_homology_ball(k: &SimplicialComplex) -> bool {
    homology_ball_boundary(k).is_some()
}

/// Connected components of the facet adjacency graph of a pure complex, where
/// two facets are adjacent when they share a ridge not in `forbidden_ridges`.
///
/// Components are listed by their smallest facet; facets inside a component
/// are sorted.
pub fn facet_components(k: &SimplicialComplex, forbidden_ridges: &BTreeSet<Face>) -> Result<Vec<Vec<Face>>> {
    if !k.is_pure() {
        return Err(Error::NotPure);
    }
    let facets = k.facets();
    let mut parent: Vec<usize> = (0..facets.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut first_at: HashMap<Face, usize> = HashMap::new();
    for (i, f) in facets.iter().enumerate() {
        for r in f.boundary() {
            if forbidden_ridges.contains(&r) {
                continue;
            }
            match first_at.get(&r) {
                Some(&j) => {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    parent[a.max(b)] = a.min(b);
                }
                None => {
                    first_at.insert(r, i);
                }
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<Face>> = BTreeMap::new();
    for (i, f) in facets.iter().enumerate() {
        let root = find(&mut parent, i);
        groups.entry(root).or_default().push(f.clone());
    }
    Ok(groups.into_values().collect())
}
