use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("singular basis matrix")]
    SingularBasis,

    #[error("mixed field backends in one object")]
    BackendMismatch,

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("subspace input does not span a subspace of the expected kind: {0}")]
    BadSubspace(String),

    #[error("norm is not diagonal in the monomial basis")]
    NotMonomialDiagonal,

    #[error("missing monomial support: {0}")]
    MissingSupport(String),

    #[error("invalid metric: {0}")]
    InvalidMetric(String),

    #[error("empty polyhedron")]
    EmptyPolyhedron,

    #[error("unbounded region: {0}")]
    Unbounded(String),

    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
