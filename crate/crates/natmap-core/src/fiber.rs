//! Kernel classes `y f⁻¹` of a map, enumerated increasingly.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::error::{NatError, Result};
use crate::expr::{MapExpr, MapFn};
use crate::pairing::{try_pack, unpack};

/// How the classes of a map are enumerated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FiberForm {
    /// Scan ℕ upward, bucketing points by value.
    Scan,
    /// Class `y` is `{pack(y, b) : b ∈ ℕ}` (the map is `UnpackFirst`).
    PackFirst,
    /// Class `y` is `{pack(b, y) : b ∈ ℕ}` (the map is `UnpackSecond`).
    PackSecond,
}

/// Every preimage of `y` lies below `a·y + b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearBound {
    pub a: u64,
    pub b: u64,
}

impl LinearBound {
    pub fn at(&self, y: u64) -> u64 {
        self.a.saturating_mul(y).saturating_add(self.b)
    }

    /// Bound for `f` followed by `g` given bounds for each.
    pub fn then(self, g: LinearBound) -> LinearBound {
        // preimages under g of y lie below g.at(y); under f below f.at(g.at(y))
        LinearBound { a: self.a.saturating_mul(g.a), b: self.a.saturating_mul(g.b).saturating_add(self.b) }
    }

    pub fn max(self, other: LinearBound) -> LinearBound {
        LinearBound { a: self.a.max(other.a), b: self.b.max(other.b) }
    }
}

struct ScanTable {
    next: u64,
    classes: HashMap<u64, Vec<u64>>,
}

pub struct Fibers {
    map: MapFn,
    form: FiberForm,
    bound: Option<LinearBound>,
    cap: u64,
    table: Mutex<ScanTable>,
}

impl Fibers {
    pub fn new(map: &MapExpr, form: FiberForm, bound: Option<LinearBound>, cap: u64) -> Result<Self> {
        Ok(Fibers {
            map: map.compile()?,
            form,
            bound,
            cap,
            table: Mutex::new(ScanTable { next: 0, classes: HashMap::new() }),
        })
    }

    pub fn shared(map: &MapExpr, form: FiberForm, bound: Option<LinearBound>, cap: u64) -> Result<Arc<Self>> {
        Ok(Arc::new(Fibers::new(map, form, bound, cap)?))
    }

    pub fn class_of(&self, x: u64) -> Result<u64> {
        (self.map)(x)
    }

    fn scan_to(&self, t: &mut ScanTable, limit: u64) -> Result<()> {
        while t.next < limit {
            if t.next >= self.cap {
                return Err(NatError::ScanBudget { what: "kernel classes".into(), cap: self.cap });
            }
            let y = (self.map)(t.next)?;
            t.classes.entry(y).or_default().push(t.next);
            t.next += 1;
        }
        Ok(())
    }

    /// The `i`-th element of `y f⁻¹`, or `None` when the class is known to be smaller.
    pub fn nth(&self, y: u64, i: u64) -> Result<Option<u64>> {
        match self.form {
            FiberForm::PackFirst => return try_pack(y, i).map(Some),
            FiberForm::PackSecond => return try_pack(i, y).map(Some),
            FiberForm::Scan => {}
        }
        let limit = self.bound.map(|b| b.at(y));
        let mut t = self.table.lock().unwrap();
        loop {
            if let Some(c) = t.classes.get(&y) {
                if let Some(&x) = c.get(i as usize) {
                    return Ok(Some(x));
                }
            }
            if limit.is_some_and(|l| t.next >= l) {
                return Ok(None);
            }
            let step = (t.next + 1).min(1 << 12);
            let target = t.next + step;
            self.scan_to(&mut t, target)?;
        }
    }

    /// `(f(x), position of x in the increasing enumeration of its class)`.
    pub fn rank(&self, x: u64) -> Result<(u64, u64)> {
        match self.form {
            FiberForm::PackFirst => return Ok(unpack(x)),
            FiberForm::PackSecond => {
                let (a, b) = unpack(x);
                return Ok((b, a));
            }
            FiberForm::Scan => {}
        }
        let y = (self.map)(x)?;
        let mut t = self.table.lock().unwrap();
        self.scan_to(&mut t, x + 1)?;
        let r = t.classes[&y].partition_point(|&z| z < x) as u64;
        Ok((y, r))
    }

    /// The whole class of `y`; needs a preimage bound.
    pub fn all(&self, y: u64) -> Result<Vec<u64>> {
        let limit = self
            .bound
            .ok_or_else(|| NatError::MalformedCapability("no preimage bound for a finite class".into()))?
            .at(y);
        let mut t = self.table.lock().unwrap();
        self.scan_to(&mut t, limit)?;
        Ok(t.classes.get(&y).cloned().unwrap_or_default())
    }
}
