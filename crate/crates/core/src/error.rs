use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime below 2^31")]
    InvalidPrime(u32),
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("not composable: {0}")]
    NotComposable(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("constraint violated: {0}")]
    Constraint(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    #[error("not a chain map: {0}")]
    NotChainMap(String),
    #[error("malformed input: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
