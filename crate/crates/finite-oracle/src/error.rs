use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("closure exceeds {cap} elements")]
    CapExceeded { cap: usize },
    #[error("exhaustive search limited to {guard} elements, got {size}")]
    GuardExceeded { size: usize, guard: usize },
    #[error("not associative at ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type OResult<T> = Result<T, OracleError>;
