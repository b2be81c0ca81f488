use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is singular")]
    Singular,

    #[error("operation requires {expected} mode")]
    WrongMode { expected: &'static str },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("unsupported constraint for this operation: {0}")]
    UnsupportedConstraint(String),

    /// An a-posteriori residual check failed.
    #[error("{what}: residual {residual:e} exceeds bound {bound:e}")]
    Residual { what: String, residual: f64, bound: f64 },

    /// A check that is a theorem on valid inputs did not hold.
    #[error("theorem violation: {0}")]
    TheoremViolation(String),

    #[error("eigenvalue computation did not converge")]
    NoConvergence,

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn dim_err(msg: impl Into<String>) -> Error {
    Error::DimensionMismatch(msg.into())
}
