//! Run reports and exit codes.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::job::Job;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFY: i32 = 2;
pub const EXIT_CAPABILITY: i32 = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    /// Bad arguments, unreadable or malformed input.
    Usage(String),
    /// A check on a produced or supplied artifact failed.
    Verify(String),
    /// The inputs lack a certificate the construction needs, or a
    /// precondition does not hold.
    Capability(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Verify(_) => EXIT_VERIFY,
            CliError::Capability(_) => EXIT_CAPABILITY,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Verify(m) | CliError::Capability(m) => m,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let kind = match self {
            CliError::Usage(_) => "usage",
            CliError::Verify(_) => "verification failed",
            CliError::Capability(_) => "capability",
        };
        write!(f, "{kind}: {}", self.message())
    }
}

pub type CResult<T> = Result<T, CliError>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verification {
    pub check: String,
    pub passed: bool,
    pub detail: Value,
}

impl Verification {
    pub fn new(check: &str, passed: bool, detail: impl Serialize) -> Self {
        let detail = serde_json::to_value(detail).expect("detail serializes");
        Verification { check: check.into(), passed, detail }
    }
}

/// What a command produced, before it is wrapped in a report.
#[derive(Debug, Clone, PartialEq)]
pub struct Executed {
    pub outputs: Value,
    pub verification: Vec<Verification>,
}

impl Executed {
    pub fn passed(&self) -> bool {
        self.verification.iter().all(|v| v.passed)
    }
}

/// Everything needed to replay a run: the fully resolved inputs, with all
/// terms embedded, and what came out.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub inputs: Job,
    pub outputs: Value,
    pub verification: Vec<Verification>,
    pub exit_status: i32,
}

impl RunReport {
    pub fn build(command: Vec<String>, inputs: Job, result: CResult<Executed>) -> Self {
        match result {
            Ok(e) => {
                let exit_status = if e.passed() { EXIT_OK } else { EXIT_VERIFY };
                RunReport { command, inputs, outputs: e.outputs, verification: e.verification, exit_status }
            }
            Err(err) => RunReport {
                command,
                inputs,
                outputs: serde_json::json!({ "error": err.to_string() }),
                verification: vec![],
                exit_status: err.code(),
            },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
