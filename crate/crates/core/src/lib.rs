//! Simplicial complexes, exact homology, generic rigidity and the
//! classification of homology spheres with `g2 <= 1`.

pub mod acceptance;
pub mod classify;
pub mod complex;
pub mod constructions;
pub mod corpus;
pub mod error;
pub mod graph;
pub mod homology;
pub mod matrix;
pub mod rigidity;
pub mod scalar;
pub mod smith;

pub use classify::{classify, is_prime, is_stacked, prime_decomposition, Classification, Verdict};
pub use complex::{is_isomorphic, parse_complex_json, to_canonical_json, FVector, Face, SimplicialComplex, Vertex};
pub use error::{Error, Result};
pub use graph::Graph;
pub use homology::{homology, is_homology_sphere, HomologyProfile};
pub use scalar::{Field, Fp, RingInteger, MODULUS};

use num_bigint::BigInt;
use num_rational::BigRational;

/// Prime-field matrices, the default for generic rank computations.
pub type FpMatrix = matrix::Matrix<Fp>;
pub type RationalMatrix = matrix::Matrix<BigRational>;
pub type RealMatrix = matrix::Matrix<f64>;
pub type IntMatrix = matrix::Matrix<BigInt>;
pub type FpEmbedding = rigidity::Embedding<Fp>;
pub type RealEmbedding = rigidity::Embedding<f64>;
