//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("polynomial total degree {degree} exceeds the cap {cap}")]
    DegreeCapExceeded { degree: u32, cap: u32 },

    #[error("series precondition violated: {0}")]
    SeriesPrecondition(String),

    #[error("tensor leg count mismatch: {left} vs {right}")]
    LegMismatch { left: usize, right: usize },

    #[error("multi-index length {index_len} does not match ground-set size {ground}")]
    LengthMismatch { index_len: usize, ground: usize },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("order {k} out of range (limit {limit})")]
    OrderOutOfRange { k: usize, limit: usize },

    #[error("matrix is singular: zero pivot at row {pivot}")]
    SingularMatrix { pivot: usize },

    #[error("parameter t is required for variable {0}")]
    MissingParameter(&'static str),

    #[error("no closed form available for {0}")]
    NoClosedForm(&'static str),

    #[error("evaluation point lies on a branch cut")]
    BranchCut,

    #[error("iteration failed to converge: {0}")]
    NonConvergence(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
