//! Decidable subsets of ℕ and increasing enumeration by scanning.

use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::error::{NatError, Result};
use crate::expr::MapExpr;

pub type SetFn = Arc<dyn Fn(u64) -> Result<bool> + Send + Sync>;

/// Default scan cap for enumerators built without an explicit budget.
pub const DEFAULT_SCAN_CAP: u64 = 1 << 22;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "set")]
pub enum SetExpr {
    Empty,
    All,
    Finite {
        elems: Vec<u64>,
    },
    /// `{x : x mod m ∈ rs}`.
    Residues {
        m: u64,
        rs: Vec<u64>,
    },
    AtLeast {
        n: u64,
    },
    Complement {
        of: Box<SetExpr>,
    },
    Union {
        parts: Vec<SetExpr>,
    },
    Inter {
        parts: Vec<SetExpr>,
    },
    /// `{x : map(x) ∈ of}`.
    Preimage {
        map: MapExpr,
        of: Box<SetExpr>,
    },
    /// Image of `map`, decided by `map(retract(v)) = v`. Sound whenever
    /// `retract(v)` is a preimage of `v` for every `v` in the image.
    Image {
        map: MapExpr,
        retract: MapExpr,
    },
    /// Members of `of` whose rank in `of` has the given parity.
    Alternate {
        of: Box<SetExpr>,
        parity: u64,
    },
}

impl SetExpr {
    pub fn finite(elems: impl IntoIterator<Item = u64>) -> Self {
        let mut elems: Vec<u64> = elems.into_iter().collect();
        elems.sort_unstable();
        elems.dedup();
        SetExpr::Finite { elems }
    }

    pub fn complement(self) -> Self {
        match self {
            SetExpr::Complement { of } => *of,
            s => SetExpr::Complement { of: Box::new(s) },
        }
    }

    pub fn union(parts: Vec<SetExpr>) -> Self {
        SetExpr::Union { parts }
    }

    pub fn inter(parts: Vec<SetExpr>) -> Self {
        SetExpr::Inter { parts }
    }

    pub fn preimage(map: MapExpr, of: SetExpr) -> Self {
        SetExpr::Preimage { map, of: Box::new(of) }
    }

    /// `map(of)` for an injective `map` with left inverse `retract`.
    pub fn image_of(map: MapExpr, retract: MapExpr, of: SetExpr) -> Self {
        match of {
            SetExpr::All => SetExpr::Image { map, retract },
            of => {
                SetExpr::inter(vec![SetExpr::Image { map, retract: retract.clone() }, SetExpr::preimage(retract, of)])
            }
        }
    }

    pub fn alternate(of: SetExpr, parity: u64) -> Self {
        SetExpr::Alternate { of: Box::new(of), parity: parity % 2 }
    }

    /// An exclusive upper bound on the members, when one follows from the syntax.
    pub fn upper_bound(&self) -> Option<u64> {
        match self {
            SetExpr::Empty => Some(0),
            SetExpr::Finite { elems } => Some(elems.iter().max().map_or(0, |m| m + 1)),
            SetExpr::Inter { parts } => parts.iter().filter_map(SetExpr::upper_bound).min(),
            SetExpr::Union { parts } => {
                let mut best = 0;
                for p in parts {
                    best = best.max(p.upper_bound()?);
                }
                Some(best)
            }
            SetExpr::Alternate { of, .. } => of.upper_bound(),
            SetExpr::Residues { rs, .. } if rs.is_empty() => Some(0),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SetExpr::Residues { m, rs } => {
                if *m == 0 || rs.iter().any(|r| r >= m) {
                    return Err(NatError::MalformedTerm(format!("bad residue set mod {m}")));
                }
                Ok(())
            }
            SetExpr::Complement { of } | SetExpr::Alternate { of, .. } => of.validate(),
            SetExpr::Union { parts } | SetExpr::Inter { parts } => parts.iter().try_for_each(SetExpr::validate),
            SetExpr::Preimage { map, of } => {
                map.validate()?;
                of.validate()
            }
            SetExpr::Image { map, retract } => {
                map.validate()?;
                retract.validate()
            }
            _ => Ok(()),
        }
    }

    pub fn compile(&self) -> Result<SetFn> {
        self.validate()?;
        self.compile_unchecked()
    }

    fn compile_unchecked(&self) -> Result<SetFn> {
        Ok(match self {
            SetExpr::Empty => Arc::new(|_| Ok(false)),
            SetExpr::All => Arc::new(|_| Ok(true)),
            SetExpr::Finite { elems } => {
                let mut elems = elems.clone();
                elems.sort_unstable();
                Arc::new(move |x| Ok(elems.binary_search(&x).is_ok()))
            }
            SetExpr::Residues { m, rs } => {
                let m = *m;
                let mut hit = vec![false; m as usize];
                for r in rs {
                    hit[*r as usize] = true;
                }
                Arc::new(move |x| Ok(hit[(x % m) as usize]))
            }
            SetExpr::AtLeast { n } => {
                let n = *n;
                Arc::new(move |x| Ok(x >= n))
            }
            SetExpr::Complement { of } => {
                let f = of.compile_unchecked()?;
                Arc::new(move |x| Ok(!f(x)?))
            }
            SetExpr::Union { parts } => {
                let fs = parts.iter().map(SetExpr::compile_unchecked).collect::<Result<Vec<_>>>()?;
                Arc::new(move |x| {
                    for f in &fs {
                        if f(x)? {
                            return Ok(true);
                        }
                    }
                    Ok(false)
                })
            }
            SetExpr::Inter { parts } => {
                let fs = parts.iter().map(SetExpr::compile_unchecked).collect::<Result<Vec<_>>>()?;
                Arc::new(move |x| {
                    for f in &fs {
                        if !f(x)? {
                            return Ok(false);
                        }
                    }
                    Ok(true)
                })
            }
            SetExpr::Preimage { map, of } => {
                let (m, s) = (map.compile()?, of.compile_unchecked()?);
                Arc::new(move |x| s(m(x)?))
            }
            SetExpr::Image { map, retract } => {
                let (m, r) = (map.compile()?, retract.compile()?);
                Arc::new(move |v| Ok(m(r(v)?)? == v))
            }
            SetExpr::Alternate { of, parity } => {
                let inner = Arc::new(Enumerator::new(of, DEFAULT_SCAN_CAP)?);
                let member = inner.member.clone();
                let parity = *parity;
                Arc::new(move |v| Ok(member(v)? && inner.rank(v)? % 2 == parity))
            }
        })
    }

    pub fn contains(&self, x: u64) -> Result<bool> {
        self.compile()?(x)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("SetExpr serializes")
    }
}

/// Cardinality claim attached to a set by its producer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "claim")]
pub enum Cardinality {
    Finite { elems: Vec<u64> },
    Infinite,
}

impl Cardinality {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Cardinality::Infinite)
    }
}

struct ScanState {
    found: Vec<u64>,
    next: u64,
}

/// Increasing enumeration of a decidable set, memoized and scan-capped.
pub struct Enumerator {
    member: SetFn,
    bound: Option<u64>,
    cap: u64,
    label: String,
    state: Mutex<ScanState>,
}

impl Enumerator {
    pub fn new(set: &SetExpr, cap: u64) -> Result<Self> {
        Ok(Enumerator {
            member: set.compile()?,
            bound: set.upper_bound(),
            cap,
            label: short_label(set),
            state: Mutex::new(ScanState { found: Vec::new(), next: 0 }),
        })
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }

    fn scan_one(&self, st: &mut ScanState) -> Result<bool> {
        if self.bound.is_some_and(|b| st.next >= b) {
            return Ok(false);
        }
        if st.next >= self.cap {
            return Err(NatError::ScanBudget { what: self.label.clone(), cap: self.cap });
        }
        let x = st.next;
        if (self.member)(x)? {
            st.found.push(x);
        }
        st.next += 1;
        Ok(true)
    }

    /// The `i`-th member in increasing order, `None` if the set is known to end first.
    pub fn nth(&self, i: u64) -> Result<Option<u64>> {
        let mut st = self.state.lock().unwrap();
        while st.found.len() as u64 <= i {
            if !self.scan_one(&mut st)? {
                return Ok(None);
            }
        }
        Ok(Some(st.found[i as usize]))
    }

    /// Number of members below `x`.
    pub fn rank(&self, x: u64) -> Result<u64> {
        let mut st = self.state.lock().unwrap();
        while st.next < x {
            if !self.scan_one(&mut st)? {
                break;
            }
        }
        Ok(st.found.partition_point(|&y| y < x) as u64)
    }

    /// Members in `[lo, hi)`.
    pub fn count_between(&self, lo: u64, hi: u64) -> Result<u64> {
        Ok(self.rank(hi)? - self.rank(lo)?)
    }

    /// Up to `k` leading members.
    pub fn take(&self, k: u64) -> Result<Vec<u64>> {
        let mut out = Vec::new();
        for i in 0..k {
            match self.nth(i)? {
                Some(v) => out.push(v),
                None => break,
            }
        }
        Ok(out)
    }
}

fn short_label(set: &SetExpr) -> String {
    let s = set.to_json();
    if s.len() > 80 {
        format!("{}...", &s[..80])
    } else {
        s
    }
}
