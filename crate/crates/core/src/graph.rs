use std::collections::BTreeSet;

use serde::Serialize;

use crate::complex::Vertex;
use crate::error::{Error, Result};

/// Simple undirected graph on labelled vertices.
///
/// Edges are stored as `(u, v)` with `u < v`, sorted lexicographically; that
/// order is also the column order of rigidity matrices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Graph {
    vertices: Vec<Vertex>,
    edges: Vec<(Vertex, Vertex)>,
}

impl Graph {
    /// Edges may reference vertices missing from `vertices`; they are added.
    pub fn new(
        vertices: impl IntoIterator<Item = Vertex>,
        edges: impl IntoIterator<Item = (Vertex, Vertex)>,
    ) -> Result<Self> {
        let mut vs: BTreeSet<Vertex> = vertices.into_iter().collect();
        let mut es = BTreeSet::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::MalformedInput(format!("loop at vertex {a}")));
            }
            let e = (a.min(b), a.max(b));
            if !es.insert(e) {
                return Err(Error::MalformedInput(format!("repeated edge {e:?}")));
            }
            vs.insert(a);
            vs.insert(b);
        }
        Ok(Graph { vertices: vs.into_iter().collect(), edges: es.into_iter().collect() })
    }

    pub fn complete(n: u32) -> Self {
        let edges = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b)));
        Graph::new(0..n, edges).expect("complete graph is simple")
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn index_of(&self, v: Vertex) -> Option<usize> {
        self.vertices.binary_search(&v).ok()
    }

    pub fn has_edge(&self, a: Vertex, b: Vertex) -> bool {
        self.edges.binary_search(&(a.min(b), a.max(b))).is_ok()
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    pub fn neighbors(&self, v: Vertex) -> Vec<Vertex> {
        let mut out: Vec<Vertex> = self
            .edges
            .iter()
            .filter_map(|&(a, b)| if a == v { Some(b) } else if b == v { Some(a) } else { None })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn fresh_vertex(&self) -> Vertex {
        (0..).find(|v| self.index_of(*v).is_none()).expect("finite graph")
    }

    pub fn with_edge(&self, a: Vertex, b: Vertex) -> Result<Graph> {
        Graph::new(self.vertices.iter().copied(), self.edges.iter().copied().chain([(a, b)]))
    }

    pub fn without_edge(&self, a: Vertex, b: Vertex) -> Graph {
        let e = (a.min(b), a.max(b));
        Graph {
            vertices: self.vertices.clone(),
            edges: self.edges.iter().copied().filter(|&x| x != e).collect(),
        }
    }

    /// Union of vertex and edge sets.
    pub fn union(&self, other: &Graph) -> Graph {
        let vs: BTreeSet<Vertex> = self.vertices.iter().chain(&other.vertices).copied().collect();
        let es: BTreeSet<(Vertex, Vertex)> = self.edges.iter().chain(&other.edges).copied().collect();
        Graph { vertices: vs.into_iter().collect(), edges: es.into_iter().collect() }
    }

    pub fn induced(&self, keep: &BTreeSet<Vertex>) -> Graph {
        Graph {
            vertices: self.vertices.iter().copied().filter(|v| keep.contains(v)).collect(),
            edges: self
                .edges
                .iter()
                .copied()
                .filter(|(a, b)| keep.contains(a) && keep.contains(b))
                .collect(),
        }
    }

    /// Graph of the cone `{apex} * G`: `G` plus `apex` joined to every vertex.
    pub fn cone(&self, apex: Vertex) -> Result<Graph> {
        if self.index_of(apex).is_some() {
            return Err(Error::VertexCollision(apex));
        }
        Graph::new(
            self.vertices.iter().copied().chain([apex]),
            self.edges.iter().copied().chain(self.vertices.iter().map(|&v| (apex, v))),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_loops_and_multi_edges() {
        assert!(Graph::new([0, 1], [(0, 0)]).is_err());
        assert!(Graph::new([0, 1], [(0, 1), (1, 0)]).is_err());
    }

    #[test]
    fn cone_of_four_cycle_is_wheel() {
        let c4 = Graph::new(0..4, [(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        let w = c4.cone(4).unwrap();
        assert_eq!(w.n(), 5);
        assert_eq!(w.edge_count(), 8);
        assert_eq!(w.degree(4), 4);
        assert!(c4.cone(0).is_err());
    }

    #[test]
    fn cone_of_edgeless_is_star() {
        let g = Graph::new(0..5, []).unwrap();
        let s = g.cone(9).unwrap();
        assert_eq!(s.edge_count(), 5);
        assert!(s.vertices().iter().filter(|&&v| v != 9).all(|&v| s.degree(v) == 1));
    }
}
