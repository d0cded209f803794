use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NatError {
    #[error("unregistered generator `{0}`")]
    UnregisteredGenerator(String),
    #[error("bad parameters for generator `{generator}`: {reason}")]
    BadParams { generator: String, reason: String },
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
    #[error("scan budget {cap} exhausted while enumerating {what}")]
    ScanBudget { what: String, cap: u64 },
    #[error("enumeration of {what} ended before index {index}")]
    Exhausted { what: String, index: u64 },
    #[error("malformed term: {0}")]
    MalformedTerm(String),
    #[error("malformed capability: {0}")]
    MalformedCapability(String),
}

pub type Result<T> = std::result::Result<T, NatError>;
