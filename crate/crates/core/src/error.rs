use thiserror::Error;

use crate::complex::Face;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed input: {0}")]
    MalformedInput(String),

    #[error("face {0} is not in the complex")]
    MissingFace(Face),

    #[error("unsupported dimension: {0}")]
    UnsupportedDimension(String),

    #[error("vertex {0} already present")]
    VertexCollision(u32),

    #[error("complex is not pure")]
    NotPure,

    #[error("{0} is not a facet")]
    NotAFacet(Face),

    #[error("{0} is not a ridge")]
    NotARidge(Face),

    #[error("{0} is not an edge")]
    NotAnEdge(Face),

    #[error("size mismatch: {0}")]
    SizeMismatch(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("not a homology sphere: {0}")]
    NotASphere(String),

    /// A verified structural statement failed on a concrete instance.
    #[error("theorem violation: {0}")]
    TheoremViolation(String),
}

impl Error {
    /// Classes used by the command line to pick exit codes.
    pub fn is_malformed_input(&self) -> bool {
        !matches!(self, Error::TheoremViolation(_))
    }

    pub fn is_theorem_violation(&self) -> bool {
        matches!(self, Error::TheoremViolation(_))
    }
}
