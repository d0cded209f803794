//! Computability sidecar for a map: the cardinality facts a construction
//! needs but cannot decide from the term alone.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{NatError, Result};
use crate::expr::MapExpr;
use crate::fiber::{FiberForm, Fibers, LinearBound};
use crate::set::{Cardinality, Enumerator, SetExpr, DEFAULT_SCAN_CAP};
use crate::window::{Failure, WindowReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FiberClaim {
    AllFinite,
    AllInfinite,
    Mixed,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Capability {
    /// Decidable image, i.e. the `imageMember` predicate.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub image: Option<SetExpr>,
    /// Claim about `ℕ ∖ im f`. A finite claim lists the complement; an
    /// infinite claim is enumerated through `image`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complement: Option<Cardinality>,
    /// A map sending each image point to one of its preimages.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub retract: Option<MapExpr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preimage: Option<FiberClaim>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fibers: Option<FiberForm>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preimage_bound: Option<LinearBound>,
    /// Two distinct points with the same value.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub collision: Option<(u64, u64)>,
    #[serde(default)]
    pub cert_injective: bool,
    #[serde(default)]
    pub cert_surjective: bool,
    #[serde(default)]
    pub cert_image_coinfinite: bool,
    #[serde(default)]
    pub cert_all_kernel_classes_infinite: bool,
    #[serde(default)]
    pub cert_finite_to_one: bool,
}

/// Increasing enumeration of `ℕ ∖ im f`.
pub enum ComplementEnum {
    List(Vec<u64>),
    Scan(Enumerator),
}

impl ComplementEnum {
    pub fn nth(&self, i: u64) -> Result<Option<u64>> {
        match self {
            ComplementEnum::List(v) => Ok(v.get(i as usize).copied()),
            ComplementEnum::Scan(e) => e.nth(i),
        }
    }

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

fn strictly_increasing(v: &[u64]) -> bool {
    v.windows(2).all(|w| w[0] < w[1])
}

impl Capability {
    pub fn image_member(&self, v: u64) -> Result<Option<bool>> {
        self.image.as_ref().map(|s| s.contains(v)).transpose()
    }

    /// Whether the complement of the image is claimed nonempty.
    pub fn misses_something(&self) -> bool {
        match &self.complement {
            Some(Cardinality::Finite { elems }) => !elems.is_empty(),
            Some(Cardinality::Infinite) => true,
            None => false,
        }
    }

    pub fn complement_infinite(&self) -> bool {
        self.cert_image_coinfinite || matches!(self.complement, Some(Cardinality::Infinite))
    }

    pub fn complement_enum(&self, cap: u64) -> Result<Option<ComplementEnum>> {
        match &self.complement {
            None => Ok(None),
            Some(Cardinality::Finite { elems }) => {
                if !strictly_increasing(elems) {
                    return Err(NatError::MalformedCapability("complement list is not strictly increasing".into()));
                }
                Ok(Some(ComplementEnum::List(elems.clone())))
            }
            Some(Cardinality::Infinite) => {
                let image = self.image.as_ref().ok_or_else(|| {
                    NatError::MalformedCapability("infinite complement claim without an image".into())
                })?;
                Ok(Some(ComplementEnum::Scan(Enumerator::new(&image.clone().complement(), cap)?)))
            }
        }
    }

    /// Kernel-class oracle for `map`, scanning unless a closed form is declared.
    pub fn fibers_of(&self, map: &MapExpr, cap: u64) -> Result<Fibers> {
        Fibers::new(map, self.fibers.unwrap_or(FiberForm::Scan), self.preimage_bound, cap)
    }

    /// Claims that contradict each other without any evaluation.
    pub fn static_contradiction(&self) -> Option<&'static str> {
        if self.cert_surjective && self.misses_something() {
            return Some("surjective but claims a missing point");
        }
        if self.cert_injective && self.collision.is_some() {
            return Some("injective but carries a collision");
        }
        if self.cert_finite_to_one && self.cert_all_kernel_classes_infinite {
            return Some("finite-to-one and all classes infinite");
        }
        if self.cert_finite_to_one && self.preimage == Some(FiberClaim::AllInfinite) {
            return Some("finite-to-one with infinite preimage claim");
        }
        if self.cert_image_coinfinite && matches!(self.complement, Some(Cardinality::Finite { .. })) {
            return Some("coinfinite image with a finite complement list");
        }
        None
    }
}

fn failure(check: &str, point: u64, left: Option<u64>, right: Option<u64>) -> Failure {
    Failure { point, left, right, step: None, check: check.to_string() }
}

/// Run every window-consistency invariant of `cap` against `e` on `[0, n)`.
pub fn check_capabilities(e: &MapExpr, cap: &Capability, n: u64) -> Result<WindowReport> {
    if let Some(why) = cap.static_contradiction() {
        return Err(NatError::MalformedCapability(why.into()));
    }
    let f = e.compile()?;
    let values: Vec<u64> = (0..n).map(|x| f(x)).collect::<Result<_>>()?;
    let mut checks = 0u64;
    macro_rules! fail {
        ($check:expr, $x:expr, $l:expr, $r:expr) => {
            return Ok(WindowReport::fail(n, checks, failure($check, $x, $l, $r)))
        };
    }

    if cap.cert_injective {
        let mut seen: HashMap<u64, u64> = HashMap::new();
        for (x, &v) in values.iter().enumerate() {
            checks += 1;
            if let Some(&first) = seen.get(&v) {
                fail!("injective", x as u64, Some(first), Some(v));
            }
            seen.insert(v, x as u64);
        }
    }

    if let Some((a, b)) = cap.collision {
        checks += 1;
        let (fa, fb) = (f(a)?, f(b)?);
        if a == b || fa != fb {
            fail!("collision", a, Some(fa), Some(fb));
        }
    }

    if let Some(image) = &cap.image {
        let member = image.compile()?;
        for (x, &v) in values.iter().enumerate() {
            checks += 1;
            if !member(v)? {
                fail!("image-member", x as u64, Some(v), None);
            }
        }
    }

    if let Some(comp) = cap.complement_enum(DEFAULT_SCAN_CAP)? {
        let hit: std::collections::HashSet<u64> = values.iter().copied().collect();
        let top = values.iter().copied().max().unwrap_or(0);
        let mut prev = None;
        for i in 0..n {
            let Some(y) = comp.nth(i)? else { break };
            if y > top {
                break;
            }
            checks += 1;
            if prev.is_some_and(|p| p >= y) {
                return Err(NatError::MalformedCapability("complement enumerator not increasing".into()));
            }
            prev = Some(y);
            if hit.contains(&y) {
                let x = values.iter().position(|&v| v == y).unwrap() as u64;
                fail!("complement-disjoint", x, Some(y), None);
            }
        }
        if cap.cert_surjective && prev.is_some() {
            return Err(NatError::MalformedCapability("surjective map with complement points".into()));
        }
    }

    if let Some(r) = &cap.retract {
        let r = r.compile()?;
        for (x, &v) in values.iter().enumerate() {
            checks += 1;
            let back = f(r(v)?)?;
            if back != v {
                fail!("retract", x as u64, Some(v), Some(back));
            }
        }
    }

    if let Some(bound) = cap.preimage_bound {
        for (x, &v) in values.iter().enumerate() {
            checks += 1;
            if x as u64 >= bound.at(v) {
                fail!("preimage-bound", x as u64, Some(v), Some(bound.at(v)));
            }
        }
    }

    if cap.preimage.is_some() || cap.fibers.is_some() {
        let fib = cap.fibers_of(e, DEFAULT_SCAN_CAP)?;
        for (x, &v) in values.iter().enumerate() {
            let x = x as u64;
            checks += 1;
            let (c, r) = fib.rank(x)?;
            if c != v {
                fail!("class-rank", x, Some(v), Some(c));
            }
            match fib.nth(c, r)? {
                Some(z) if z == x => {}
                other => fail!("class-rank", x, Some(x), other),
            }
            if r > 0 {
                match fib.nth(c, r - 1)? {
                    Some(z) if z < x => {}
                    Some(_) => return Err(NatError::MalformedCapability("class enumerator not increasing".into())),
                    None => fail!("class-rank", x, Some(x), None),
                }
            }
        }
    }

    Ok(WindowReport::pass(n, checks))
}
