use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("variable `{0}` has no value in the evaluation point")]
    MissingVariable(String),

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("graph is disconnected")]
    DisconnectedGraph,

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("domain error: {0}")]
    DomainError(String),

    #[error("verification failed: {0}")]
    VerificationFailed(String),

    #[error("pencil determinant is identically zero")]
    SingularPencil,

    #[error("determinant vanishes at the evaluation point")]
    ZeroDeterminant,

    #[error("no invertible sample after {0} attempts")]
    SingularAfterRetries(usize),

    #[error("shift {shift} is an eigenvalue of the coefficient of `{var}`")]
    BadShift { var: String, shift: String },

    #[error("pencil size {size} exceeds the limit {limit}")]
    SizeOverflow { size: usize, limit: usize },

    #[error("polynomial has degree {0}, expected at most 2")]
    DegreeTooHigh(u32),

    #[error("variable `{0}` occurs in both pencils")]
    VariableCollision(String),

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
