//! Membership classification backed by capabilities and finite witnesses.

use std::collections::HashMap;

use natmap_core::{check_capabilities, Capability, FiberClaim, MapExpr, MapFn, NatError, SetExpr};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::partial::{Element, PartialMapExpr};
use crate::tag::ClassTag;

#[derive(Debug, Error)]
pub enum ClassError {
    #[error(transparent)]
    Nat(#[from] NatError),
    #[error("missing capability: {0}")]
    MissingCapability(String),
}

/// Finite evidence that an element lies outside a class. Some kinds pair the
/// finite data with a capability claim, e.g. a listed finite complement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Witness {
    Collision { x: u64, y: u64, value: u64 },
    Missed { value: u64 },
    FiniteComplement { missing: Vec<u64> },
    FiniteClass { class: u64, members: Vec<u64> },
    Undefined { x: u64 },
    NotIdentity { x: u64, value: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum Verdict {
    CertifiedYes,
    CertifiedNo { witness: Witness },
    WindowConsistent,
}

impl Verdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, Verdict::CertifiedYes)
    }

    pub fn is_no(&self) -> bool {
        matches!(self, Verdict::CertifiedNo { .. })
    }

    fn no(witness: Witness) -> Self {
        Verdict::CertifiedNo { witness }
    }
}

/// Points scanned when a preimage bound lets a missed value be confirmed exactly.
const MISS_SCAN: u64 = 1 << 20;

struct Probe<'a> {
    f: MapFn,
    map: &'a MapExpr,
    cap: &'a Capability,
    n: u64,
}

impl Probe<'_> {
    fn window_collision(&self) -> Result<Option<Witness>, ClassError> {
        let mut seen: HashMap<u64, u64> = HashMap::new();
        for x in 0..self.n {
            let v = (self.f)(x)?;
            if let Some(&first) = seen.get(&v) {
                return Ok(Some(Witness::Collision { x: first, y: x, value: v }));
            }
            seen.insert(v, x);
        }
        if let Some((a, b)) = self.cap.collision {
            let (fa, fb) = ((self.f)(a)?, (self.f)(b)?);
            if a != b && fa == fb {
                return Ok(Some(Witness::Collision { x: a, y: b, value: fa }));
            }
        }
        Ok(None)
    }

    /// A value certified absent from the image.
    fn missed_value(&self) -> Result<Option<u64>, ClassError> {
        if !self.cap.misses_something() {
            return Ok(None);
        }
        let Some(comp) = self.cap.complement_enum(natmap_core::DEFAULT_SCAN_CAP)? else {
            return Ok(None);
        };
        let Some(v) = comp.nth(0)? else { return Ok(None) };
        if let Some(b) = self.cap.preimage_bound {
            for x in 0..b.at(v).min(MISS_SCAN) {
                if (self.f)(x)? == v {
                    return Err(
                        NatError::MalformedCapability(format!("claimed missing value {v} is hit at {x}")).into()
                    );
                }
            }
        }
        Ok(Some(v))
    }

    fn inj(&self) -> Result<Verdict, ClassError> {
        if let Some(w) = self.window_collision()? {
            return Ok(Verdict::no(w));
        }
        Ok(if self.cap.cert_injective { Verdict::CertifiedYes } else { Verdict::WindowConsistent })
    }

    fn surj(&self) -> Result<Verdict, ClassError> {
        if self.cap.cert_surjective {
            return Ok(Verdict::CertifiedYes);
        }
        Ok(match self.missed_value()? {
            Some(value) => Verdict::no(Witness::Missed { value }),
            None => Verdict::WindowConsistent,
        })
    }

    fn finite_to_one(&self) -> Verdict {
        if self.cap.cert_finite_to_one {
            Verdict::CertifiedYes
        } else {
            Verdict::WindowConsistent
        }
    }

    fn bl(&self) -> Result<Verdict, ClassError> {
        let inj = self.inj()?;
        if inj.is_no() {
            return Ok(inj);
        }
        if let Some(natmap_core::Cardinality::Finite { elems }) = &self.cap.complement {
            return Ok(Verdict::no(Witness::FiniteComplement { missing: elems.clone() }));
        }
        if self.cap.cert_surjective {
            return Ok(Verdict::no(Witness::FiniteComplement { missing: vec![] }));
        }
        Ok(if inj.is_yes() && self.cap.complement_infinite() {
            Verdict::CertifiedYes
        } else {
            Verdict::WindowConsistent
        })
    }

    fn dbl(&self) -> Result<Verdict, ClassError> {
        let surj = self.surj()?;
        if surj.is_no() {
            return Ok(surj);
        }
        if self.cap.preimage_bound.is_some() {
            let class = (self.f)(0)?;
            let members = self.cap.fibers_of(self.map, MISS_SCAN)?.all(class)?;
            return Ok(Verdict::no(Witness::FiniteClass { class, members }));
        }
        let all_infinite =
            self.cap.cert_all_kernel_classes_infinite || self.cap.preimage == Some(FiberClaim::AllInfinite);
        Ok(if surj.is_yes() && all_infinite { Verdict::CertifiedYes } else { Verdict::WindowConsistent })
    }

    fn sym(&self) -> Result<Verdict, ClassError> {
        let (i, s) = (self.inj()?, self.surj()?);
        Ok(match (i, s) {
            (v @ Verdict::CertifiedNo { .. }, _) | (_, v @ Verdict::CertifiedNo { .. }) => v,
            (Verdict::CertifiedYes, Verdict::CertifiedYes) => Verdict::CertifiedYes,
            _ => Verdict::WindowConsistent,
        })
    }

    fn not_identity(&self) -> Result<Option<Witness>, ClassError> {
        for x in 0..self.n {
            let v = (self.f)(x)?;
            if v != x {
                return Ok(Some(Witness::NotIdentity { x, value: v }));
            }
        }
        Ok(None)
    }

    fn with_identity(&self, inner: Verdict) -> Result<Verdict, ClassError> {
        if *self.map == MapExpr::Id || inner.is_yes() {
            return Ok(Verdict::CertifiedYes);
        }
        if inner.is_no() {
            return Ok(match self.not_identity()? {
                Some(_) => inner,
                None => Verdict::WindowConsistent,
            });
        }
        Ok(inner)
    }

    fn either(a: Verdict, b: Verdict) -> Verdict {
        match (a, b) {
            (Verdict::CertifiedYes, _) | (_, Verdict::CertifiedYes) => Verdict::CertifiedYes,
            (Verdict::CertifiedNo { .. }, v @ Verdict::CertifiedNo { .. }) => v,
            _ => Verdict::WindowConsistent,
        }
    }

    fn verdict(&self, tag: ClassTag) -> Result<Verdict, ClassError> {
        Ok(match tag {
            ClassTag::T | ClassTag::PT => Verdict::CertifiedYes,
            ClassTag::F => self.finite_to_one(),
            ClassTag::Inj | ClassTag::I => self.inj()?,
            ClassTag::Surj => self.surj()?,
            ClassTag::Sym => self.sym()?,
            ClassTag::BL => self.bl()?,
            ClassTag::DBL => self.dbl()?,
            ClassTag::BL1 => self.with_identity(self.bl()?)?,
            ClassTag::DBL1 => self.with_identity(self.dbl()?)?,
            ClassTag::SymBL => Self::either(self.sym()?, self.bl()?),
            ClassTag::SymDBL => Self::either(self.sym()?, self.dbl()?),
            ClassTag::TNotInj => match self.window_collision()? {
                Some(_) => Verdict::CertifiedYes,
                None => Verdict::WindowConsistent,
            },
            ClassTag::TNotSurj => match self.missed_value()? {
                Some(_) => Verdict::CertifiedYes,
                None => Verdict::WindowConsistent,
            },
        })
    }
}

fn partial_verdict(p: &PartialMapExpr, cap: &Capability, tag: ClassTag, n: u64) -> Result<Verdict, ClassError> {
    let dom = p.domain.compile()?;
    if !tag.is_partial() {
        if p.domain == SetExpr::All {
            return total_verdict(&p.body, cap, tag, n);
        }
        for x in 0..n {
            if !dom(x)? {
                return Ok(Verdict::no(Witness::Undefined { x }));
            }
        }
        return Ok(Verdict::WindowConsistent);
    }
    if tag == ClassTag::PT {
        return Ok(Verdict::CertifiedYes);
    }
    let body = p.body.compile()?;
    let mut seen: HashMap<u64, u64> = HashMap::new();
    for x in 0..n {
        if !dom(x)? {
            continue;
        }
        let v = body(x)?;
        if let Some(&first) = seen.get(&v) {
            return Ok(Verdict::no(Witness::Collision { x: first, y: x, value: v }));
        }
        seen.insert(v, x);
    }
    Ok(if cap.cert_injective { Verdict::CertifiedYes } else { Verdict::WindowConsistent })
}

fn total_verdict(map: &MapExpr, cap: &Capability, tag: ClassTag, n: u64) -> Result<Verdict, ClassError> {
    let report = check_capabilities(map, cap, n)?;
    if let Some(f) = report.failure() {
        return Err(NatError::MalformedCapability(format!(
            "window check `{}` failed at {} ({:?} vs {:?})",
            f.check, f.point, f.left, f.right
        ))
        .into());
    }
    let probe = Probe { f: map.compile()?, map, cap, n };
    probe.verdict(tag)
}

/// Classify `e` against `tag` on the window `[0, n)`.
pub fn member_check(e: &Element, cap: &Capability, tag: ClassTag, n: u64) -> Result<Verdict, ClassError> {
    match e {
        Element::Total { map } => total_verdict(map, cap, tag, n),
        Element::Partial { map } => partial_verdict(map, cap, tag, n),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum KProbe {
    InK,
    NotInK,
    NotDecided,
}

/// Whether `x` has an infinite class under `map`.
pub fn k_class_probe(_alpha: &MapExpr, cap: &Capability, x: u64) -> Result<KProbe, ClassError> {
    let claim = cap.preimage.ok_or_else(|| ClassError::MissingCapability("preimage claim".into()))?;
    Ok(match claim {
        FiberClaim::AllInfinite => KProbe::InK,
        FiberClaim::AllFinite => KProbe::NotInK,
        FiberClaim::Mixed => match cap.image_member(x)? {
            Some(false) => KProbe::NotInK,
            _ => KProbe::NotDecided,
        },
    })
}
