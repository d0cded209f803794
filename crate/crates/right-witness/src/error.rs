use natmap_core::{NatError, WindowReport};
use semigroup_classes::ClassError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum WitnessError {
    #[error(transparent)]
    Nat(#[from] NatError),
    #[error(transparent)]
    Class(#[from] ClassError),
    #[error("missing certificate: {0}")]
    MissingCertificate(String),
    #[error("scan budget exhausted: {0}")]
    BudgetExhausted(String),
    #[error("no branch could be confirmed within the scan budgets")]
    UndecidedBranch,
    #[error("constructed sequence failed verification at step {step:?}, point {point}")]
    Verification { step: Option<usize>, point: u64, report: Box<WindowReport> },
    #[error("sequence endpoints and steps mix total and partial elements")]
    TypeMismatch,
    #[error("{0}")]
    Precondition(String),
}

pub type WResult<T> = Result<T, WitnessError>;
