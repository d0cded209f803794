//! Factor a DBL map `γ` as `ψ·β` with `ψ` a permutation and `β = α·π·α`,
//! starting from a surjection `α` with infinitely many infinite classes.

use std::sync::{Arc, Mutex};

use natmap_core::registry::param;
use natmap_core::{
    verify_equal_on_window, Capability, Enumerator, Failure, FiberClaim, FiberForm, MapExpr, MapFn, NatError, Result,
    SetExpr, WindowReport,
};
use right_witness::{WResult, WitnessError};
use serde::Serialize;
use serde_json::json;

use crate::family::{class_align_expr, register_generators, ClassFamily};
use crate::left::dbl_capability;

pub const CONTAIN_PI: &str = "contain-pi";

/// Lazily enumerated complement of the set of least class elements.
struct NonLeast {
    alpha: ClassFamily,
    found: Mutex<(u64, Vec<u64>)>,
}

impl NonLeast {
    fn nth(&self, i: u64) -> Result<u64> {
        let mut g = self.found.lock().unwrap();
        while g.1.len() as u64 <= i {
            let v = g.0;
            if v >= self.alpha.cap {
                return Err(NatError::ScanBudget { what: "non-representatives".into(), cap: self.alpha.cap });
            }
            if self.alpha.rank_of(v)?.1 > 0 {
                g.1.push(v);
            }
            g.0 += 1;
        }
        Ok(g.1[i as usize])
    }
}

/// `π`: the `2x`-th element of `K` goes to the least element of class `x`;
/// everything else is matched increasingly with the non-least elements.
pub(crate) fn contain_pi(params: &serde_json::Value) -> Result<MapFn> {
    let alpha: ClassFamily = param(CONTAIN_PI, params, "alpha")?;
    let k: SetExpr = param(CONTAIN_PI, params, "k")?;
    let member = k.compile()?;
    let ranks = Enumerator::new(&k, alpha.cap)?;
    let rest = Arc::new(NonLeast { alpha: alpha.clone(), found: Mutex::new((0, Vec::new())) });
    Ok(Arc::new(move |v| {
        let r = ranks.rank(v)?;
        if member(v)? && r % 2 == 0 {
            alpha.nth(r / 2, 0)
        } else {
            // members of Y below v
            let below = r.div_ceil(2);
            rest.nth(v - below)
        }
    }))
}

#[derive(Debug, Clone, Serialize)]
pub struct FactorizationReport {
    /// `ψ` followed by `β` agrees with `γ`.
    pub psi_beta: WindowReport,
    /// Every `z` with `α(z) = y_x` has `β(z) = x`.
    pub containment: WindowReport,
    pub pi_injective: bool,
    pub psi_injective: bool,
}

impl FactorizationReport {
    pub fn passed(&self) -> bool {
        self.psi_beta.passed() && self.containment.passed() && self.pi_injective && self.psi_injective
    }
}

#[derive(Debug, Clone)]
pub struct Containment {
    pub k: SetExpr,
    pub pi: MapExpr,
    pub beta: MapExpr,
    pub beta_cap: Capability,
    pub psi: MapExpr,
    pub report: FactorizationReport,
}

fn injective_on(f: &MapFn, n: u64) -> Result<bool> {
    let mut seen = std::collections::HashSet::new();
    for x in 0..n {
        if !seen.insert(f(x)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `k` overrides the set `K(α)` of values with infinite classes; without it
/// the set is read off `cap_alpha`.
pub fn contain_dbl_construct(
    alpha: &MapExpr,
    cap_alpha: &Capability,
    k: Option<SetExpr>,
    gamma: &MapExpr,
    cap_gamma: &Capability,
    window: u64,
) -> WResult<Containment> {
    register_generators();
    let k = match (k, cap_alpha.preimage) {
        (Some(k), _) => k,
        (None, Some(FiberClaim::AllInfinite)) => SetExpr::All,
        (None, Some(FiberClaim::AllFinite)) => {
            return Err(WitnessError::Precondition("α has no infinite kernel class".into()))
        }
        (None, _) => return Err(WitnessError::MissingCertificate("set of infinite kernel classes of α".into())),
    };
    if !(cap_gamma.cert_surjective && cap_gamma.cert_all_kernel_classes_infinite) {
        return Err(WitnessError::MissingCertificate("γ is not certified DBL".into()));
    }
    let mut fam_alpha = ClassFamily::kernel(alpha.clone());
    if let Some(form) = cap_alpha.fibers {
        fam_alpha.form = form;
    }
    let ks = Enumerator::new(&k, fam_alpha.cap)?;
    match ks.nth(2 * window) {
        Ok(Some(_)) => {}
        Ok(None) | Err(NatError::ScanBudget { .. }) => {
            return Err(WitnessError::BudgetExhausted("K(α) enumerator stalls".into()))
        }
        Err(e) => return Err(e.into()),
    }

    let pi = MapExpr::opaque(CONTAIN_PI, json!({ "alpha": fam_alpha, "k": k }));
    let beta = alpha.clone().then(pi.clone()).then(alpha.clone());
    let fam_beta = ClassFamily::new(beta.clone(), FiberForm::Scan);
    let mut fam_gamma = ClassFamily::kernel(gamma.clone());
    if let Some(form) = cap_gamma.fibers {
        fam_gamma.form = form;
    }
    let psi = class_align_expr(&fam_gamma, &fam_beta);

    let psi_beta = verify_equal_on_window(&psi.clone().then(beta.clone()), gamma, window)?;

    let (fa, fb) = (alpha.compile()?, beta.compile()?);
    let member = k.compile()?;
    let mut containment = WindowReport::pass(window, window);
    for z in 0..window {
        let y = fa(z)?;
        if member(y)? {
            let r = ks.rank(y)?;
            if r % 2 == 0 && fb(z)? != r / 2 {
                containment = WindowReport::fail(
                    window,
                    z + 1,
                    Failure {
                        point: z,
                        left: Some(fb(z)?),
                        right: Some(r / 2),
                        step: None,
                        check: "containment".into(),
                    },
                );
                break;
            }
        }
    }

    let report = FactorizationReport {
        psi_beta,
        containment,
        pi_injective: injective_on(&pi.compile()?, window)?,
        psi_injective: injective_on(&psi.compile()?, window)?,
    };
    Ok(Containment { k, pi, beta, beta_cap: dbl_capability(FiberForm::Scan), psi, report })
}
