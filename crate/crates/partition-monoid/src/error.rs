use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PartitionError {
    #[error("sizes differ: {0} and {1}")]
    SizeMismatch(usize, usize),
    #[error("not a partition: {0}")]
    Invalid(String),
    #[error("cannot render P_{n}: at most {max} points per row")]
    SizeOverflow { n: usize, max: usize },
    #[error("component of {vertex} exceeds {cap} vertices")]
    CapExceeded { vertex: String, cap: usize },
    #[error("cannot parse diagram: {0}")]
    Parse(String),
}

pub type PResult<T> = Result<T, PartitionError>;
