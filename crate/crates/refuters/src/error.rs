use natmap_core::NatError;
use semigroup_classes::ClassError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RefuteError {
    #[error(transparent)]
    Nat(#[from] NatError),
    #[error(transparent)]
    Class(#[from] ClassError),
    #[error("precondition: {0}")]
    Precondition(String),
    #[error("missing capability: {0}")]
    MissingCapability(String),
    #[error("search budget exhausted: {0}")]
    Budget(String),
    #[error("colarge status undecided on the window: {0}")]
    Unknown(String),
    #[error("malformed certificate: {0}")]
    Malformed(String),
    #[error("certificate does not replay: {0}")]
    Replay(String),
    #[error("refutation and witness conflict: {0}")]
    Conflict(String),
}

pub type RResult<T> = Result<T, RefuteError>;
