use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("variable lists differ: {left:?} vs {right:?}")]
    VarMismatch { left: Vec<String>, right: Vec<String> },
    #[error("coefficient domains differ")]
    DomainMismatch,
    #[error("exponent vector has length {got}, expected {expected}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("determinant of size {size} exceeds the configured cap {cap}")]
    CapExceeded { size: usize, cap: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("division is not exact")]
    NotDivisible,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("root finding failed: {0}")]
    RootCertification(String),
    #[error("unknown conjecture `{0}`")]
    UnknownConjecture(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
