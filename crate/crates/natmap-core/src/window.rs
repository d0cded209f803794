//! Finite-window verification reports.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::expr::MapExpr;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub point: u64,
    /// The two values that disagreed; `None` marks an undefined partial value.
    pub left: Option<u64>,
    pub right: Option<u64>,
    /// Index of the failing step when the report is about a sequence.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<usize>,
    pub check: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status")]
pub enum Status {
    Pass,
    Fail(Failure),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowReport {
    pub window: u64,
    #[serde(flatten)]
    pub status: Status,
    pub checks_run: u64,
}

impl WindowReport {
    pub fn pass(window: u64, checks_run: u64) -> Self {
        WindowReport { window, status: Status::Pass, checks_run }
    }

    pub fn fail(window: u64, checks_run: u64, failure: Failure) -> Self {
        WindowReport { window, status: Status::Fail(failure), checks_run }
    }

    pub fn passed(&self) -> bool {
        matches!(self.status, Status::Pass)
    }

    pub fn failure(&self) -> Option<&Failure> {
        match &self.status {
            Status::Fail(f) => Some(f),
            Status::Pass => None,
        }
    }
}

/// Pass iff `f(x) = g(x)` for every `x < n`; failures carry the least counterexample.
pub fn verify_equal_on_window(f: &MapExpr, g: &MapExpr, n: u64) -> Result<WindowReport> {
    let (cf, cg) = (f.compile()?, g.compile()?);
    for x in 0..n {
        let (a, b) = (cf(x)?, cg(x)?);
        if a != b {
            return Ok(WindowReport::fail(
                n,
                x + 1,
                Failure { point: x, left: Some(a), right: Some(b), step: None, check: "equal".into() },
            ));
        }
    }
    Ok(WindowReport::pass(n, n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let p = MapExpr::patch(MapExpr::Id, [(0, 0)]);
        assert!(verify_equal_on_window(&MapExpr::Id, &p, 100).unwrap().passed());
        let r = verify_equal_on_window(&MapExpr::Id, &MapExpr::constant(0), 2).unwrap();
        let f = r.failure().unwrap();
        assert_eq!((f.point, f.left, f.right), (1, Some(1), Some(0)));
    }
}
