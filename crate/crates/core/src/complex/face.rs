use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vertex = u32;

/// A face as a strictly increasing vertex list. The empty face is allowed.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vertex>", into = "Vec<Vertex>")]
pub struct Face(Vec<Vertex>);

impl Face {
    /// Sorts the vertices; repeated vertices are rejected.
    pub fn new(vertices: impl IntoIterator<Item = Vertex>) -> Result<Self> {
        let mut v: Vec<Vertex> = vertices.into_iter().collect();
        v.sort_unstable();
        if v.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::MalformedInput(format!("repeated vertex in face {v:?}")));
        }
        Ok(Face(v))
    }

    /// Panicking constructor for literals in tests and generators.
    pub fn of(vertices: &[Vertex]) -> Self {
        Face::new(vertices.iter().copied()).expect("distinct vertices")
    }

    pub(crate) fn from_sorted(v: Vec<Vertex>) -> Self {
        debug_assert!(v.windows(2).all(|w| w[0] < w[1]));
        Face(v)
    }

    pub fn empty() -> Self {
        Face(Vec::new())
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Vertex> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn dim(&self) -> isize {
        self.0.len() as isize - 1
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn is_subset(&self, other: &Face) -> bool {
        if self.len() > other.len() {
            return false;
        }
        let mut it = other.0.iter();
        'outer: for a in &self.0 {
            for b in it.by_ref() {
                if b == a {
                    continue 'outer;
                }
                if b > a {
                    return false;
                }
            }
            return false;
        }
        true
    }

    pub fn is_disjoint(&self, other: &Face) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    }

    pub fn union(&self, other: &Face) -> Face {
        let mut v = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < other.0.len() {
            let next = match (self.0.get(i), other.0.get(j)) {
                (Some(a), Some(b)) if a == b => {
                    i += 1;
                    j += 1;
                    *a
                }
                (Some(a), Some(b)) if a < b => {
                    i += 1;
                    *a
                }
                (Some(_), Some(b)) => {
                    j += 1;
                    *b
                }
                (Some(a), None) => {
                    i += 1;
                    *a
                }
                (None, Some(b)) => {
                    j += 1;
                    *b
                }
                (None, None) => unreachable!(),
            };
            v.push(next);
        }
        Face(v)
    }

    pub fn difference(&self, other: &Face) -> Face {
        Face(self.0.iter().copied().filter(|v| !other.contains(*v)).collect())
    }

    pub fn intersection(&self, other: &Face) -> Face {
        Face(self.0.iter().copied().filter(|v| other.contains(*v)).collect())
    }

    pub fn with(&self, v: Vertex) -> Face {
        let mut out = self.0.clone();
        if let Err(pos) = out.binary_search(&v) {
            out.insert(pos, v);
        }
        Face(out)
    }

    pub fn without(&self, v: Vertex) -> Face {
        Face(self.0.iter().copied().filter(|&w| w != v).collect())
    }

    /// Codimension-one subfaces, in order of the removed position.
    pub fn boundary(&self) -> impl Iterator<Item = Face> + '_ {
        (0..self.0.len()).map(move |i| {
            let mut v = self.0.clone();
            v.remove(i);
            Face(v)
        })
    }

    /// All subsets, including the empty face and the face itself.
    pub fn subsets(&self) -> impl Iterator<Item = Face> + '_ {
        let n = self.0.len();
        (0u64..(1u64 << n)).map(move |mask| {
            Face((0..n).filter(|i| mask >> i & 1 == 1).map(|i| self.0[i]).collect())
        })
    }

    pub fn map(&self, f: impl Fn(Vertex) -> Vertex) -> Result<Face> {
        Face::new(self.0.iter().map(|&v| f(v)))
    }
}

impl TryFrom<Vec<Vertex>> for Face {
    type Error = Error;
    fn try_from(v: Vec<Vertex>) -> Result<Self> {
        Face::new(v)
    }
}

impl From<Face> for Vec<Vertex> {
    fn from(f: Face) -> Self {
        f.0
    }
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn canonical_order_and_duplicates() {
        assert_eq!(Face::new([2, 0, 1]).unwrap().vertices(), &[0, 1, 2]);
        assert!(Face::new([0, 0, 1]).is_err());
        assert!(Face::empty().is_empty());
        assert_eq!(Face::empty().dim(), -1);
    }

    #[test]
    fn set_operations() {
        let a = Face::of(&[0, 2, 4]);
        let b = Face::of(&[2, 3]);
        assert_eq!(a.union(&b), Face::of(&[0, 2, 3, 4]));
        assert_eq!(a.difference(&b), Face::of(&[0, 4]));
        assert_eq!(a.intersection(&b), Face::of(&[2]));
        assert!(!a.is_disjoint(&b));
        assert!(Face::of(&[0, 4]).is_subset(&a));
        assert!(!Face::of(&[0, 3]).is_subset(&a));
        assert!(Face::empty().is_subset(&a));
        assert_eq!(a.boundary().count(), 3);
        assert_eq!(a.subsets().count(), 8);
    }

    proptest! {
        #[test]
        fn subset_agrees_with_sets(a in proptest::collection::btree_set(0u32..10, 0..6),
                                   b in proptest::collection::btree_set(0u32..10, 0..6)) {
            let fa = Face::new(a.iter().copied()).unwrap();
            let fb = Face::new(b.iter().copied()).unwrap();
            prop_assert_eq!(fa.is_subset(&fb), a.is_subset(&b));
            prop_assert_eq!(fa.is_disjoint(&fb), a.is_disjoint(&b));
            let u: Vec<u32> = a.union(&b).copied().collect();
            let fu = fa.union(&fb);
            prop_assert_eq!(fu.vertices(), &u[..]);
        }
    }
}
