//! Derivation sequences. On the right side a sequence from `a` to `b` is
//! `a = u₁s₁, v₁s₁ = u₂s₂, …, vₙsₙ = b`; on the left side every product is
//! mirrored (`a = s₁u₁`, …). Products read left to right: `us` is "first u,
//! then s".

use std::sync::Arc;

use natmap_core::{Capability, Failure, MapExpr, WindowReport};
use semigroup_classes::{then_fn, ElemFn, Element, PartialMapExpr};
use serde::{Deserialize, Serialize};

use crate::error::{WResult, WitnessError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Right,
    Left,
}

/// A semigroup element or the adjoined identity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Gen {
    One,
    Total { map: MapExpr },
    Partial { map: PartialMapExpr },
}

impl Gen {
    pub fn map(m: MapExpr) -> Self {
        Gen::Total { map: m }
    }

    pub fn partial(p: PartialMapExpr) -> Self {
        Gen::Partial { map: p }
    }

    pub fn as_map(&self) -> Option<&MapExpr> {
        match self {
            Gen::Total { map } => Some(map),
            _ => None,
        }
    }

    pub fn element(&self) -> Option<Element> {
        match self {
            Gen::One => None,
            Gen::Total { map } => Some(Element::total(map.clone())),
            Gen::Partial { map } => Some(Element::partial(map.clone())),
        }
    }

    fn compile(&self) -> WResult<ElemFn> {
        match self.element() {
            None => Ok(Arc::new(|x| Ok(Some(x)))),
            Some(e) => Ok(e.compile()?),
        }
    }
}

impl From<MapExpr> for Gen {
    fn from(m: MapExpr) -> Self {
        Gen::map(m)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Step {
    pub u: Gen,
    pub v: Gen,
    pub s: Gen,
    /// Capability derived for the multiplier, when the construction knows one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s_cap: Option<Capability>,
}

impl Step {
    pub fn new(u: Gen, v: Gen, s: Gen) -> Self {
        Step { u, v, s, s_cap: None }
    }

    pub fn with_cap(mut self, cap: Capability) -> Self {
        self.s_cap = Some(cap);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivationSequence {
    pub side: Side,
    pub a: Gen,
    pub b: Gen,
    pub steps: Vec<Step>,
    pub generators: Vec<Gen>,
}

impl DerivationSequence {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("sequence serializes")
    }

    /// The same sequence read from `b` to `a`.
    pub fn reverse(mut self) -> Self {
        std::mem::swap(&mut self.a, &mut self.b);
        self.steps.reverse();
        for st in &mut self.steps {
            std::mem::swap(&mut st.u, &mut st.v);
        }
        self
    }

    /// Concatenate `other` after `self`. Endpoints must meet; generator sets merge.
    pub fn concat(mut self, other: DerivationSequence) -> Self {
        assert_eq!(self.side, other.side);
        self.b = other.b;
        self.steps.extend(other.steps);
        for g in other.generators {
            if !self.generators.contains(&g) {
                self.generators.push(g);
            }
        }
        self
    }
}

fn kind(g: &Gen) -> Option<bool> {
    match g {
        Gen::One => None,
        Gen::Total { .. } => Some(false),
        Gen::Partial { .. } => Some(true),
    }
}

fn product(side: Side, x: &ElemFn, s: &ElemFn) -> ElemFn {
    match side {
        Side::Right => then_fn(x.clone(), s.clone()),
        Side::Left => then_fn(s.clone(), x.clone()),
    }
}

/// Check every equality of the sequence on `[0, n)` and that every `uᵢ, vᵢ`
/// belongs to the generator set.
pub fn verify_sequence(seq: &DerivationSequence, n: u64) -> WResult<WindowReport> {
    let mut kinds = vec![kind(&seq.a), kind(&seq.b)];
    for st in &seq.steps {
        kinds.extend([kind(&st.u), kind(&st.v), kind(&st.s)]);
    }
    let kinds: Vec<bool> = kinds.into_iter().flatten().collect();
    if kinds.windows(2).any(|w| w[0] != w[1]) {
        return Err(WitnessError::TypeMismatch);
    }

    let mut checks = 0;
    for (i, st) in seq.steps.iter().enumerate() {
        for g in [&st.u, &st.v] {
            checks += 1;
            if !seq.generators.contains(g) {
                return Ok(WindowReport::fail(
                    n,
                    checks,
                    Failure { point: 0, left: None, right: None, step: Some(i + 1), check: "generator".into() },
                ));
            }
        }
    }

    // the chain of terms that must agree pairwise
    let a = seq.a.compile()?;
    let b = seq.b.compile()?;
    let mut lhs = vec![a];
    let mut rhs = Vec::new();
    for st in &seq.steps {
        let (u, v, s) = (st.u.compile()?, st.v.compile()?, st.s.compile()?);
        rhs.push(product(seq.side, &u, &s));
        lhs.push(product(seq.side, &v, &s));
    }
    rhs.push(b);
    let last = seq.steps.len();
    for (k, (l, r)) in lhs.iter().zip(&rhs).enumerate() {
        let step = if last == 0 {
            None
        } else if k == 0 {
            Some(1)
        } else if k < last {
            Some(k + 1)
        } else {
            Some(last)
        };
        for x in 0..n {
            checks += 1;
            let (lv, rv) = (l(x)?, r(x)?);
            if lv != rv {
                return Ok(WindowReport::fail(
                    n,
                    checks,
                    Failure { point: x, left: lv, right: rv, step, check: format!("equation {k}") },
                ));
            }
        }
    }
    Ok(WindowReport::pass(n, checks))
}

/// Verify and turn a failing report into an error.
pub fn ensure_verified(seq: DerivationSequence, n: u64) -> WResult<DerivationSequence> {
    let report = verify_sequence(&seq, n)?;
    match report.failure() {
        None => Ok(seq),
        Some(f) => Err(WitnessError::Verification { step: f.step, point: f.point, report: Box::new(report.clone()) }),
    }
}
