//! Generic rigidity of graphs.
//!
//! Genericity is realised by evaluating the rigidity matrix at random points
//! of GF(2^61 - 1). Every minor of the matrix is a polynomial of degree at
//! most its size in the coordinates, so a single random embedding reaches the
//! generic rank `r` except with probability at most `r / p`; the best of
//! several independent trials is reported. Field-generic rank is treated as
//! the ground truth for rigidity over the reals.

use std::collections::BTreeSet;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::complex::{binomial, Vertex};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::matrix::{kernel_basis, rank, Matrix};
use crate::scalar::{Field, Fp, MODULUS};

pub const DEFAULT_TRIALS: usize = 3;

/// Singular values at or below this are treated as zero by [`float_rank_check`].
pub const FLOAT_SINGULAR_TOLERANCE: f64 = 1e-8;

/// Rigidity matrices live in the generic [`Matrix`] type.
pub type RigidityMatrix<F = Fp> = Matrix<F>;

/// Coordinates of each graph vertex (by index into `Graph::vertices`).
#[derive(Clone, Debug, PartialEq)]
pub struct Embedding<F> {
    d: usize,
    coords: Vec<Vec<F>>,
}

impl<F: Field> Embedding<F> {
    pub fn new(d: usize, coords: Vec<Vec<F>>) -> Result<Self> {
        if let Some(c) = coords.iter().find(|c| c.len() != d) {
            return Err(Error::DimensionMismatch(format!("point of length {} in dimension {d}", c.len())));
        }
        Ok(Embedding { d, coords })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn point(&self, i: usize) -> &[F] {
        &self.coords[i]
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }
}

/// Deterministic generator for trial `trial` under `seed`.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

impl Embedding<Fp> {
    pub fn random<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> Self {
        Embedding { d, coords: (0..n).map(|_| (0..d).map(|_| Fp::random(rng)).collect()).collect() }
    }
}

impl Embedding<f64> {
    /// Uniform coordinates in `[-1, 1]`.
    pub fn random_real<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> Self {
        Embedding { d, coords: (0..n).map(|_| (0..d).map(|_| rng.gen_range(-1.0..=1.0)).collect()).collect() }
    }
}

/// The `dn x |E|` matrix whose column for `{v < u}` holds `f(v) - f(u)` in the
/// rows of `v` and `f(u) - f(v)` in the rows of `u`.
pub fn rigidity_matrix<F: Field>(g: &Graph, f: &Embedding<F>) -> Result<RigidityMatrix<F>> {
    if f.len() != g.n() {
        return Err(Error::DimensionMismatch(format!("{} points for {} vertices", f.len(), g.n())));
    }
    let d = f.d;
    let mut m = Matrix::zeros(d * g.n(), g.edge_count());
    for (col, &(a, b)) in g.edges().iter().enumerate() {
        let (i, j) = (g.index_of(a).expect("edge endpoint"), g.index_of(b).expect("edge endpoint"));
        for k in 0..d {
            let diff = f.coords[i][k].clone() - f.coords[j][k].clone();
            m.set(i * d + k, col, diff.clone());
            m.set(j * d + k, col, -diff);
        }
    }
    Ok(m)
}

/// Generic rank of the complete graph on `n` vertices in dimension `d`.
pub fn complete_graph_rank(n: usize, d: usize) -> usize {
    if n <= d + 1 {
        binomial(n, 2)
    } else {
        d * n - binomial(d + 1, 2)
    }
}

/// Edge weights in the order of `Graph::edges`.
#[derive(Clone, Debug, PartialEq)]
pub struct StressVector<F = Fp> {
    pub weights: Vec<F>,
}

impl<F: Field> StressVector<F> {
    /// Indices of edges with nonzero weight.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.weights.iter().enumerate().filter(|(_, w)| !w.is_zero()).map(|(i, _)| i)
    }

    /// `sum_u w(v,u) (f(v) - f(u)) = 0` at every vertex, evaluated exactly.
    pub fn is_equilibrium(&self, g: &Graph, f: &Embedding<F>) -> bool {
        if self.weights.len() != g.edge_count() {
            return false;
        }
        let mut force = vec![vec![F::zero(); f.d]; g.n()];
        for (&(a, b), w) in g.edges().iter().zip(&self.weights) {
            let (i, j) = (g.index_of(a).unwrap(), g.index_of(b).unwrap());
            for k in 0..f.d {
                let diff = f.coords[i][k].clone() - f.coords[j][k].clone();
                force[i][k] = force[i][k].clone() + w.clone() * diff.clone();
                force[j][k] = force[j][k].clone() - w.clone() * diff;
            }
        }
        force.iter().flatten().all(|x| x.is_zero())
    }
}

/// Machine-readable summary of a rigidity computation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RigidityReport {
    pub n: usize,
    pub edges: usize,
    pub d: usize,
    pub rank: usize,
    pub kernel_dim: usize,
    pub expected_rank: usize,
    pub is_rigid: bool,
    pub is_stress_free: bool,
    pub participating_vertices: Vec<Vertex>,
    pub participating_edges: Vec<(Vertex, Vertex)>,
    pub trials: usize,
    pub seed: u64,
    pub modulus: u64,
    /// Upper bound `rank / p` on the chance that one trial undershoots.
    pub failure_bound_per_trial: f64,
}

/// A rigidity matrix evaluation together with its stress space.
#[derive(Clone, Debug)]
pub struct RigidityAnalysis {
    pub embedding: Embedding<Fp>,
    pub rank: usize,
    pub stresses: Vec<StressVector<Fp>>,
    pub report: RigidityReport,
}

fn best_trial(g: &Graph, d: usize, trials: usize, seed: u64) -> (Embedding<Fp>, usize) {
    let ceiling = complete_graph_rank(g.n(), d).min(g.edge_count());
    let mut best: Option<(Embedding<Fp>, usize)> = None;
    for t in 0..trials.max(1) {
        let f = Embedding::random(g.n(), d, &mut trial_rng(seed, t));
        let r = rank(&rigidity_matrix(g, &f).expect("embedding sized to graph"));
        if best.as_ref().is_none_or(|(_, b)| r > *b) {
            best = Some((f, r));
        }
        if r == ceiling {
            break;
        }
    }
    best.expect("at least one trial")
}

/// Maximum rank over `trials` seeded random embeddings.
pub fn generic_rank(g: &Graph, d: usize, trials: usize, seed: u64) -> usize {
    best_trial(g, d, trials, seed).1
}

pub fn kernel_dim(g: &Graph, d: usize, trials: usize, seed: u64) -> usize {
    g.edge_count() - generic_rank(g, d, trials, seed)
}

/// Full analysis at the best of `trials` embeddings: rank, stress basis and
/// participation.
pub fn analyze(g: &Graph, d: usize, trials: usize, seed: u64) -> RigidityAnalysis {
    let (embedding, r) = best_trial(g, d, trials, seed);
    let m = rigidity_matrix(g, &embedding).expect("embedding sized to graph");
    let stresses: Vec<StressVector<Fp>> =
        kernel_basis(&m).into_iter().map(|weights| StressVector { weights }).collect();
    debug_assert_eq!(stresses.len() + r, g.edge_count());
    let edge_ix: BTreeSet<usize> = stresses.iter().flat_map(|s| s.support().collect::<Vec<_>>()).collect();
    let participating_edges: Vec<(Vertex, Vertex)> = edge_ix.iter().map(|&i| g.edges()[i]).collect();
    let participating_vertices: Vec<Vertex> = participating_edges
        .iter()
        .flat_map(|&(a, b)| [a, b])
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let expected = complete_graph_rank(g.n(), d);
    let report = RigidityReport {
        n: g.n(),
        edges: g.edge_count(),
        d,
        rank: r,
        kernel_dim: g.edge_count() - r,
        expected_rank: expected,
        is_rigid: r == expected,
        is_stress_free: r == g.edge_count(),
        participating_vertices,
        participating_edges,
        trials: trials.max(1),
        seed,
        modulus: MODULUS,
        failure_bound_per_trial: r as f64 / MODULUS as f64,
    };
    RigidityAnalysis { embedding, rank: r, stresses, report }
}

/// Rank equals that of the complete graph on the same vertices.
pub fn is_generically_rigid(g: &Graph, d: usize) -> bool {
    generic_rank(g, d, DEFAULT_TRIALS, 0) == complete_graph_rank(g.n(), d)
}

pub fn is_stress_free(g: &Graph, d: usize) -> bool {
    generic_rank(g, d, DEFAULT_TRIALS, 0) == g.edge_count()
}

pub fn stress_basis(g: &Graph, d: usize, seed: u64) -> Vec<StressVector<Fp>> {
    analyze(g, d, DEFAULT_TRIALS, seed).stresses
}

pub fn participating_vertices(g: &Graph, d: usize, seed: u64) -> BTreeSet<Vertex> {
    analyze(g, d, DEFAULT_TRIALS, seed).report.participating_vertices.into_iter().collect()
}

pub fn participating_edges(g: &Graph, d: usize, seed: u64) -> BTreeSet<(Vertex, Vertex)> {
    analyze(g, d, DEFAULT_TRIALS, seed).report.participating_edges.into_iter().collect()
}

/// `C(G) = ({apex} * G)_{<=1}`.
pub fn cone_graph(g: &Graph, apex: Vertex) -> Result<Graph> {
    g.cone(apex)
}

/// Whether `G - e` stays generically rigid, per edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeRemoval {
    pub edge: (Vertex, Vertex),
    pub rigid_without: bool,
}

/// Tests every edge of `g` for removability without losing rigidity. No
/// claim is made about the outcome; this only records it.
pub fn edge_removal_experiment(g: &Graph, d: usize, trials: usize, seed: u64) -> Vec<EdgeRemoval> {
    let target = complete_graph_rank(g.n(), d);
    g.edges()
        .iter()
        .map(|&(a, b)| EdgeRemoval {
            edge: (a, b),
            rigid_without: generic_rank(&g.without_edge(a, b), d, trials, seed) == target,
        })
        .collect()
}

/// Floating-point rank from singular values, for sanity checks only.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FloatRankCheck {
    pub rank: usize,
    pub singular_values: Vec<f64>,
    pub tolerance: f64,
}

pub fn float_rank_check(g: &Graph, d: usize, seed: u64) -> FloatRankCheck {
    let f = Embedding::random_real(g.n(), d, &mut trial_rng(seed, 0));
    let m = rigidity_matrix(g, &f).expect("embedding sized to graph");
    let singular_values: Vec<f64> = if m.rows() == 0 || m.cols() == 0 {
        Vec::new()
    } else {
        let dm = DMatrix::from_fn(m.rows(), m.cols(), |i, j| *m.get(i, j));
        let mut sv: Vec<f64> = dm.svd(false, false).singular_values.iter().copied().collect();
        sv.sort_by(|a, b| b.total_cmp(a));
        sv
    };
    FloatRankCheck {
        rank: singular_values.iter().filter(|&&s| s > FLOAT_SINGULAR_TOLERANCE).count(),
        singular_values,
        tolerance: FLOAT_SINGULAR_TOLERANCE,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn cycle_graph(n: u32) -> Graph {
        Graph::new(0..n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    #[test]
    fn single_edge_column() {
        let g = Graph::new([0, 1], [(0, 1)]).unwrap();
        let f = Embedding::new(1, vec![vec![Fp::ZERO], vec![Fp::ONE]]).unwrap();
        let m = rigidity_matrix(&g, &f).unwrap();
        assert_eq!(m.shape(), (2, 1));
        assert_eq!(*m.get(0, 0), -Fp::ONE);
        assert_eq!(*m.get(1, 0), Fp::ONE);
    }

    #[test]
    fn mismatched_embedding_is_rejected() {
        let g = Graph::complete(3);
        let f = Embedding::new(2, vec![vec![Fp::ONE, Fp::ONE]]).unwrap();
        assert!(rigidity_matrix(&g, &f).is_err());
        assert!(Embedding::new(2, vec![vec![Fp::ONE]]).is_err());
    }

    #[test]
    fn edgeless_graph_has_no_columns() {
        let g = Graph::new(0..4, []).unwrap();
        let f = Embedding::random(4, 3, &mut trial_rng(0, 0));
        assert_eq!(rigidity_matrix(&g, &f).unwrap().cols(), 0);
        assert_eq!(generic_rank(&g, 3, 1, 0), 0);
        assert!(!is_generically_rigid(&g, 3));
        assert!(is_generically_rigid(&Graph::new([7], []).unwrap(), 3));
    }

    /// Exact rational rank at a fixed integer embedding in general position.
    fn rational_rank(g: &Graph, pts: &[Vec<i64>]) -> usize {
        let f = Embedding::new(
            pts[0].len(),
            pts.iter().map(|p| p.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect()).collect(),
        )
        .unwrap();
        rank(&rigidity_matrix(g, &f).unwrap())
    }

    #[test]
    fn rank_examples() {
        let tri = Graph::complete(3);
        assert_eq!(rational_rank(&tri, &[vec![0, 0], vec![1, 0], vec![0, 1]]), 3);
        assert_eq!(generic_rank(&tri, 2, 3, 0), 3);
        assert_eq!(generic_rank(&tri, 3, 3, 0), 3);
        assert_eq!(generic_rank(&Graph::complete(5), 4, 3, 0), 10);
        let path = Graph::new(0..3, [(0, 1), (1, 2)]).unwrap();
        assert!(!is_generically_rigid(&path, 2));
        assert!(is_stress_free(&path, 2));
    }

    #[test]
    fn complete_graph_formula() {
        assert_eq!(complete_graph_rank(5, 4), 10);
        assert_eq!(complete_graph_rank(3, 3), 3);
        assert_eq!(complete_graph_rank(6, 3), 12);
        assert_eq!(complete_graph_rank(1, 3), 0);
    }

    #[test]
    fn k4_plane_stress() {
        let g = Graph::complete(4);
        let a = analyze(&g, 2, 3, 0);
        assert_eq!(a.stresses.len(), 1);
        assert_eq!(a.stresses[0].support().count(), 6);
        assert!(a.stresses[0].is_equilibrium(&g, &a.embedding));
        assert_eq!(a.report.participating_vertices, vec![0, 1, 2, 3]);
        // K4 at a rational embedding: one-dimensional stress space, full support
        let pts = [vec![0, 0], vec![3, 0], vec![0, 2], vec![1, 1]];
        assert_eq!(rational_rank(&g, &pts), 5);
    }

    #[test]
    fn stress_vectors_satisfy_equilibrium() {
        for (g, d) in [(Graph::complete(7), 3), (cycle_graph(6).cone(10).unwrap(), 3), (Graph::complete(6), 2)] {
            let a = analyze(&g, d, 2, 11);
            assert_eq!(a.stresses.len(), a.report.kernel_dim);
            for s in &a.stresses {
                assert!(s.is_equilibrium(&g, &a.embedding));
                let mut bad = s.clone();
                bad.weights[0] += Fp::ONE;
                assert!(!bad.is_equilibrium(&g, &a.embedding));
            }
        }
    }

    #[test]
    fn float_check_agrees_on_small_graphs() {
        for (g, d) in [(Graph::complete(5), 2), (cycle_graph(7), 2), (Graph::complete(6), 3)] {
            assert_eq!(float_rank_check(&g, d, 5).rank, generic_rank(&g, d, 3, 5));
        }
    }

    #[test]
    fn seeds_are_reproducible() {
        let g = Graph::complete(6);
        let a = analyze(&g, 3, 3, 42);
        let b = analyze(&g, 3, 3, 42);
        assert_eq!(a.stresses, b.stresses);
        assert_eq!(a.report, b.report);
    }
}
