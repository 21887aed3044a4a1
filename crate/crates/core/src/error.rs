use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid vertex list: {0}")]
    InvalidVertexList(String),
    #[error("size mismatch: expected {expected}, got {got}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("enumeration of {needed} items exceeds guard {limit} (raise LABELFORGE_GUARD to allow)")]
    GuardExceeded { needed: u128, limit: u128 },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("contract violation: {0}")]
    ContractViolation(String),
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("inverse of zero")]
    ZeroInverse,
    #[error("label scheme mismatch")]
    SchemeMismatch,
    #[error("labels share position {0}")]
    EqualPositions(usize),
    #[error("label of vertex {0} has no universal-graph vertex")]
    UnmappedLabel(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
