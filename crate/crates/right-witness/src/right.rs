//! Constructors of right sequences. Every generator set is built from the
//! hat maps `α̂ = 2x`, `β̂ = 2x+1` and, for monoids, the adjoined identity.

use natmap_core::registry::{set_nth_expr, set_rank_expr};
use natmap_core::{
    alpha_hat_capability, beta_hat_capability, canonical_alpha_hat, canonical_beta_hat, constant_with_capability,
    evens, gamma_hat, gamma_hat_capability, halve, odds, Capability, Cardinality, Enumerator, FiberClaim, LinearBound,
    MapExpr, NatError, SetExpr, DEFAULT_SCAN_CAP,
};
use semigroup_classes::PartialMapExpr;

use crate::branch::rank_candidates;
use crate::error::{WResult, WitnessError};
use crate::sequence::{ensure_verified, DerivationSequence, Gen, Side, Step};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Opts {
    /// Window on which every emitted sequence is verified.
    pub window: u64,
    /// Largest scan used when ranking branches.
    pub budget: u64,
    /// Scan cap handed to every enumerator.
    pub scan_cap: u64,
}

impl Default for Opts {
    fn default() -> Self {
        Opts { window: 4096, budget: 1 << 15, scan_cap: DEFAULT_SCAN_CAP }
    }
}

/// A map together with the capability it is certified by.
#[derive(Debug, Clone, PartialEq)]
pub struct CertMap {
    pub map: MapExpr,
    pub cap: Capability,
}

impl CertMap {
    pub fn new(map: MapExpr, cap: Capability) -> Self {
        CertMap { map, cap }
    }

    pub fn alpha_hat() -> Self {
        CertMap::new(canonical_alpha_hat(), alpha_hat_capability())
    }

    pub fn beta_hat() -> Self {
        CertMap::new(canonical_beta_hat(), beta_hat_capability())
    }

    fn gen(&self) -> Gen {
        Gen::map(self.map.clone())
    }

    fn image(&self, which: &str) -> WResult<&SetExpr> {
        self.cap.image.as_ref().ok_or_else(|| WitnessError::MissingCertificate(format!("image of {which}")))
    }

    fn retract(&self, which: &str) -> WResult<&MapExpr> {
        self.cap.retract.as_ref().ok_or_else(|| WitnessError::MissingCertificate(format!("left inverse of {which}")))
    }
}

fn hats() -> Vec<Gen> {
    vec![Gen::map(canonical_alpha_hat()), Gen::map(canonical_beta_hat())]
}

fn hat_step(gamma: MapExpr, cap: Option<Capability>) -> Step {
    let st = Step::new(Gen::map(canonical_alpha_hat()), Gen::map(canonical_beta_hat()), Gen::map(gamma));
    match cap {
        Some(c) => st.with_cap(c),
        None => st,
    }
}

fn right_seq(a: Gen, b: Gen, steps: Vec<Step>, generators: Vec<Gen>) -> DerivationSequence {
    DerivationSequence { side: Side::Right, a, b, steps, generators }
}

/// Errors after which another branch is worth trying.
fn retryable(e: &WitnessError) -> bool {
    matches!(
        e,
        WitnessError::BudgetExhausted(_)
            | WitnessError::Verification { .. }
            | WitnessError::Nat(NatError::Exhausted { .. } | NatError::ScanBudget { .. })
    )
}

/// `θ = α̂γ, β̂γ = φ` with `γ = γ̂(θ,φ)`.
pub fn witness_right_t(theta: &MapExpr, phi: &MapExpr) -> DerivationSequence {
    right_seq(Gen::map(theta.clone()), Gen::map(phi.clone()), vec![hat_step(gamma_hat(theta, phi), None)], hats())
}

/// The construction of [`witness_right_t`] for finite-to-one inputs; the
/// multiplier carries its derived finite-to-one certificate.
pub fn witness_right_f(theta: &CertMap, phi: &CertMap) -> WResult<DerivationSequence> {
    for (c, which) in [(theta, "θ"), (phi, "φ")] {
        if !c.cap.cert_finite_to_one {
            return Err(WitnessError::MissingCertificate(format!("{which} is not certified finite-to-one")));
        }
    }
    let cap = gamma_hat_capability(&theta.cap, &phi.cap, false);
    assert!(cap.cert_finite_to_one);
    Ok(right_seq(theta.gen(), phi.gen(), vec![hat_step(gamma_hat(&theta.map, &phi.map), Some(cap))], hats()))
}

/// Over ℕ the classes `F` and `H` coincide.
pub fn witness_right_h(theta: &CertMap, phi: &CertMap) -> WResult<DerivationSequence> {
    witness_right_f(theta, phi)
}

/// The only point missed by `c`, if it misses exactly one.
fn sole_missing(c: &CertMap, which: &str, opts: &Opts) -> WResult<Option<u64>> {
    match &c.cap.complement {
        None => Err(WitnessError::MissingCertificate(format!("image complement of {which}"))),
        Some(Cardinality::Finite { elems }) if elems.is_empty() => {
            Err(WitnessError::Precondition(format!("{which} is claimed surjective")))
        }
        Some(Cardinality::Finite { elems }) => Ok((elems.len() == 1).then_some(elems[0])),
        Some(Cardinality::Infinite) => match c.cap.complement_enum(opts.scan_cap)? {
            Some(e) => match e.nth(0) {
                Ok(Some(_)) => Ok(None),
                Ok(None) | Err(NatError::ScanBudget { .. }) => {
                    Err(WitnessError::BudgetExhausted(format!("no missing point of {which} found below the scan cap")))
                }
                Err(e) => Err(e.into()),
            },
            None => unreachable!("complement claim present"),
        },
    }
}

/// The point `y` used by [`witness_right_t_not_surj`]: the least value whose
/// addition to either image still leaves something missed.
pub fn not_surj_pivot(theta: &CertMap, phi: &CertMap, opts: &Opts) -> WResult<u64> {
    let banned = [sole_missing(theta, "θ", opts)?, sole_missing(phi, "φ", opts)?];
    Ok((0..).find(|y| !banned.contains(&Some(*y))).expect("at most two values are banned"))
}

fn join_constant(c: &CertMap, y: u64, (k, kc): &(MapExpr, Capability), first: bool) -> (MapExpr, Capability) {
    let (g, mut cap) = if first {
        (gamma_hat(&c.map, k), gamma_hat_capability(&c.cap, kc, false))
    } else {
        (gamma_hat(k, &c.map), gamma_hat_capability(kc, &c.cap, false))
    };
    cap.cert_surjective = false;
    cap.complement = match &c.cap.complement {
        Some(Cardinality::Finite { elems }) => {
            Some(Cardinality::Finite { elems: elems.iter().copied().filter(|&e| e != y).collect() })
        }
        _ => {
            cap.cert_image_coinfinite = true;
            Some(Cardinality::Infinite)
        }
    };
    (g, cap)
}

/// Length-2 sequence through the constant `c_y` inside the non-surjective maps.
pub fn witness_right_t_not_surj(theta: &CertMap, phi: &CertMap, opts: &Opts) -> WResult<DerivationSequence> {
    let y = not_surj_pivot(theta, phi, opts)?;
    let k = constant_with_capability(y);
    let (g1, c1) = join_constant(theta, y, &k, true);
    let (g2, c2) = join_constant(phi, y, &k, false);
    let seq = right_seq(theta.gen(), phi.gen(), vec![hat_step(g1, Some(c1)), hat_step(g2, Some(c2))], hats());
    ensure_verified(seq, opts.window)
}

fn require_bl(c: &CertMap, which: &str) -> WResult<()> {
    if c.cap.cert_injective && c.cap.complement_infinite() && c.cap.image.is_some() {
        Ok(())
    } else {
        Err(WitnessError::MissingCertificate(format!("{which} is not certified BL")))
    }
}

fn require_inj(c: &CertMap, which: &str) -> WResult<()> {
    if c.cap.cert_injective {
        c.image(which)?;
        c.retract(which)?;
        Ok(())
    } else {
        Err(WitnessError::MissingCertificate(format!("{which} is not certified injective")))
    }
}

/// `x ↦` the `2x`-th member of `set`. Its image skips every other member, so
/// the members it leaves out form an infinite set.
pub fn alternate_nth(set: &SetExpr, opts: &Opts) -> WResult<CertMap> {
    let probe = opts.window.max(1) * 2 - 2;
    match Enumerator::new(set, opts.scan_cap)?.nth(probe) {
        Ok(Some(_)) => {}
        Ok(None) => {
            return Err(WitnessError::BudgetExhausted(format!("set claimed infinite ends before member {probe}")))
        }
        Err(NatError::ScanBudget { cap, .. }) => {
            return Err(WitnessError::BudgetExhausted(format!("member {probe} not reached below {cap}")))
        }
        Err(e) => return Err(e.into()),
    }
    let cap = Capability {
        image: Some(SetExpr::alternate(set.clone(), 0)),
        complement: Some(Cardinality::Infinite),
        retract: Some(set_rank_expr(set, opts.scan_cap).then(halve())),
        preimage: Some(FiberClaim::AllFinite),
        preimage_bound: Some(LinearBound { a: 1, b: 1 }),
        cert_injective: true,
        cert_image_coinfinite: true,
        cert_finite_to_one: true,
        ..Default::default()
    };
    Ok(CertMap::new(set_nth_expr(set, 2, 0, opts.scan_cap), cap))
}

/// `γ̂(a,b)` for BL maps with disjoint images whose union misses infinitely much.
fn hat_join(a: &CertMap, b: &CertMap) -> (MapExpr, Capability) {
    let mut cap = gamma_hat_capability(&a.cap, &b.cap, true);
    cap.complement = Some(Cardinality::Infinite);
    cap.cert_image_coinfinite = true;
    (gamma_hat(&a.map, &b.map), cap)
}

/// Output of [`bridge_bl`]: the middle map and the length-2 sequence.
#[derive(Debug, Clone)]
pub struct Bridge {
    pub lambda: CertMap,
    pub seq: DerivationSequence,
}

/// `θ = α̂γ₁, β̂γ₁ = λ = α̂γ₂, β̂γ₂ = φ` where `λ` runs through every other
/// member of the joint complement `ℕ ∖ (im θ ∪ im φ)`.
pub fn bridge_bl(
    theta: &CertMap,
    phi: &CertMap,
    joint_complement: &SetExpr,
    claim: &Cardinality,
    opts: &Opts,
) -> WResult<Bridge> {
    require_bl(theta, "θ")?;
    require_bl(phi, "φ")?;
    if !claim.is_infinite() {
        return Err(WitnessError::Precondition("joint complement must be claimed infinite".into()));
    }
    let lambda = alternate_nth(joint_complement, opts)?;

    // the values used on the window must avoid both images
    let f = lambda.map.compile()?;
    for x in 0..opts.window {
        let v = f(x)?;
        for c in [theta, phi] {
            if c.cap.image_member(v)? == Some(true) {
                return Err(WitnessError::Precondition(format!(
                    "joint complement member {v} lies in an endpoint image"
                )));
            }
        }
    }

    let (g1, c1) = hat_join(theta, &lambda);
    let (g2, c2) = hat_join(&lambda, phi);
    let seq = right_seq(theta.gen(), phi.gen(), vec![hat_step(g1, Some(c1)), hat_step(g2, Some(c2))], hats());
    Ok(Bridge { lambda, seq })
}

fn joint_complement(a: &SetExpr, b: &SetExpr) -> SetExpr {
    SetExpr::inter(vec![a.clone().complement(), b.clone().complement()])
}

/// Try `attempts` in the order given by ranking `cands`.
fn first_success<T>(cands: &[SetExpr], opts: &Opts, mut attempt: impl FnMut(usize) -> WResult<T>) -> WResult<T> {
    for i in rank_candidates(cands, 64, opts.budget) {
        match attempt(i) {
            Ok(t) => return Ok(t),
            Err(e) if retryable(&e) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(WitnessError::UndecidedBranch)
}

/// Sequence of length at most 3 between two BL maps.
pub fn witness_right_bl(theta: &CertMap, phi: &CertMap, opts: &Opts) -> WResult<DerivationSequence> {
    require_bl(theta, "θ")?;
    require_bl(phi, "φ")?;
    let (it, ip) = (theta.image("θ")?, phi.image("φ")?);
    let jc = joint_complement(it, ip);
    let y = SetExpr::inter(vec![ip.clone(), it.clone().complement()]);
    first_success(&[jc.clone(), y.clone()], opts, |i| {
        if i == 0 {
            let b = bridge_bl(theta, phi, &jc, &Cardinality::Infinite, opts)?;
            return ensure_verified(b.seq, opts.window);
        }
        // the joint complement is finite, so im φ ∖ im θ is infinite
        let lambda = alternate_nth(&y, opts)?;
        let (g, c) = hat_join(theta, &lambda);
        let rest = bridge_bl(&lambda, phi, &ip.clone().complement(), &Cardinality::Infinite, opts)?;
        let first = right_seq(theta.gen(), lambda.gen(), vec![hat_step(g, Some(c))], hats());
        ensure_verified(first.concat(rest.seq), opts.window)
    })
}

fn with_one(mut seq: DerivationSequence) -> DerivationSequence {
    if !seq.generators.contains(&Gen::One) {
        seq.generators.insert(0, Gen::One);
    }
    seq
}

fn is_identity(c: &CertMap) -> bool {
    c.map == MapExpr::Id
}

/// From a BL map to the identity: bridge to `α̂` or `β̂`, then one step
/// `(α̂ or β̂, 1)` with multiplier `1`.
fn bl_to_identity(theta: &CertMap, opts: &Opts) -> WResult<DerivationSequence> {
    let it = theta.image("θ")?;
    let targets = [CertMap::alpha_hat(), CertMap::beta_hat()];
    let cands = [joint_complement(it, &evens()), joint_complement(it, &odds())];
    first_success(&cands, opts, |i| {
        let h = &targets[i];
        let b = bridge_bl(theta, h, &cands[i], &Cardinality::Infinite, opts)?;
        let last = right_seq(h.gen(), Gen::One, vec![Step::new(h.gen(), Gen::One, Gen::One)], vec![Gen::One]);
        ensure_verified(with_one(b.seq.concat(last)), opts.window)
    })
}

/// Sequence of length at most 3 in `BL ∪ {1}` over `{1, α̂, β̂}`.
pub fn witness_right_bl1(theta: &CertMap, phi: &CertMap, opts: &Opts) -> WResult<DerivationSequence> {
    match (is_identity(theta), is_identity(phi)) {
        (true, true) => {
            let mut gens = vec![Gen::One];
            gens.extend(hats());
            Ok(right_seq(Gen::One, Gen::One, vec![], gens))
        }
        (false, true) => Ok(with_one(bl_to_identity(theta, opts)?)),
        (true, false) => Ok(with_one(bl_to_identity(phi, opts)?.reverse())),
        (false, false) => Ok(with_one(witness_right_bl(theta, phi, opts)?)),
    }
}

/// `h·c` for a hat map `h` and an injective `c`: `c` restricted to the
/// evens or the odds, renumbered.
fn restrict_to_parity(c: &CertMap, parity: u64) -> WResult<CertMap> {
    let (img, r) = (c.image("map")?, c.retract("map")?);
    let (h, part) = if parity == 0 { (canonical_alpha_hat(), evens()) } else { (canonical_beta_hat(), odds()) };
    let cap = Capability {
        image: Some(SetExpr::inter(vec![img.clone(), SetExpr::preimage(r.clone(), part)])),
        complement: Some(Cardinality::Infinite),
        retract: Some(r.clone().then(halve())),
        preimage: Some(FiberClaim::AllFinite),
        preimage_bound: c.cap.preimage_bound,
        cert_injective: true,
        cert_image_coinfinite: true,
        cert_finite_to_one: true,
        ..Default::default()
    };
    Ok(CertMap::new(h.then(c.map.clone()), cap))
}

/// Sequence of length at most 4 between injections over `{1, α̂, β̂}`:
/// `θ ~ α̂θ`, a bridge to `α̂φ` or `β̂φ`, then back to `φ`.
pub fn witness_right_inj(theta: &CertMap, phi: &CertMap, opts: &Opts) -> WResult<DerivationSequence> {
    require_inj(theta, "θ")?;
    require_inj(phi, "φ")?;
    let theta2 = restrict_to_parity(theta, 0)?;
    let phis = [restrict_to_parity(phi, 0)?, restrict_to_parity(phi, 1)?];
    let it2 = theta2.image("θ′")?;
    let cands: Vec<SetExpr> = phis.iter().map(|p| joint_complement(it2, p.cap.image.as_ref().unwrap())).collect();
    let hat_gens = hats();
    first_success(&cands, opts, |i| {
        let b = bridge_bl(&theta2, &phis[i], &cands[i], &Cardinality::Infinite, opts)?;
        let mut steps = vec![Step::new(Gen::One, hat_gens[0].clone(), theta.gen()).with_cap(theta.cap.clone())];
        steps.extend(b.seq.steps);
        steps.push(Step::new(hat_gens[i].clone(), Gen::One, phi.gen()).with_cap(phi.cap.clone()));
        let mut gens = vec![Gen::One];
        gens.extend(hats());
        ensure_verified(right_seq(theta.gen(), phi.gen(), steps, gens), opts.window)
    })
}

/// `a = 1·a, ε·a = ε·b, 1·b = b` through the empty map `ε`.
pub fn witness_right_i_zero(a: &PartialMapExpr, b: &PartialMapExpr) -> DerivationSequence {
    let (ga, gb) = (Gen::partial(a.clone()), Gen::partial(b.clone()));
    let eps = Gen::partial(PartialMapExpr::empty());
    let steps = if a == b {
        vec![]
    } else {
        vec![Step::new(Gen::One, eps.clone(), ga.clone()), Step::new(eps.clone(), Gen::One, gb.clone())]
    };
    right_seq(ga, gb, steps, vec![Gen::One, eps])
}

/// `a = 1·a, u·a ~ u·b` inside the ideal by `inner`, then `u·b = 1·b`.
pub fn witness_right_ideal_descent<F>(
    a: &MapExpr,
    b: &MapExpr,
    u: &MapExpr,
    inner: F,
    opts: &Opts,
) -> WResult<DerivationSequence>
where
    F: FnOnce(&MapExpr, &MapExpr) -> WResult<DerivationSequence>,
{
    let (ua, ub) = (u.clone().then(a.clone()), u.clone().then(b.clone()));
    let mid = inner(&ua, &ub)?;
    let gu = Gen::map(u.clone());
    let mut steps = vec![Step::new(Gen::One, gu.clone(), Gen::map(a.clone()))];
    steps.extend(mid.steps);
    steps.push(Step::new(gu.clone(), Gen::One, Gen::map(b.clone())));
    let mut gens = mid.generators;
    for g in [Gen::One, gu] {
        if !gens.contains(&g) {
            gens.push(g);
        }
    }
    ensure_verified(right_seq(Gen::map(a.clone()), Gen::map(b.clone()), steps, gens), opts.window)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequence::verify_sequence;

    fn stride(k: u64, r: u64) -> CertMap {
        let cap = Capability {
            image: Some(SetExpr::Residues { m: k, rs: vec![r] }),
            complement: Some(Cardinality::Infinite),
            retract: Some(MapExpr::floor_div(k)),
            preimage: Some(FiberClaim::AllFinite),
            preimage_bound: Some(LinearBound { a: 1, b: 1 }),
            cert_injective: true,
            cert_image_coinfinite: true,
            cert_finite_to_one: true,
            ..Default::default()
        };
        CertMap::new(MapExpr::affine(k, r), cap)
    }

    #[test]
    fn identity_pair_gives_halving() {
        let s = witness_right_t(&MapExpr::Id, &MapExpr::Id);
        assert_eq!(s.len(), 1);
        let g = s.steps[0].s.as_map().unwrap().compile().unwrap();
        for x in 0..100 {
            assert_eq!(g(x).unwrap(), x / 2);
        }
    }

    #[test]
    fn bridge_on_residues() {
        let opts = Opts { window: 512, ..Opts::default() };
        let (t, p) = (stride(4, 0), stride(4, 1));
        let jc = joint_complement(t.cap.image.as_ref().unwrap(), p.cap.image.as_ref().unwrap());
        let b = bridge_bl(&t, &p, &jc, &Cardinality::Infinite, &opts).unwrap();
        let l = b.lambda.map.compile().unwrap();
        for x in 0..200 {
            assert_eq!(l(x).unwrap(), 4 * x + 2);
        }
        assert!(verify_sequence(&b.seq, 512).unwrap().passed());
    }

    #[test]
    fn reversed_sequence_verifies() {
        let opts = Opts { window: 256, ..Opts::default() };
        let s = witness_right_bl1(&CertMap::new(MapExpr::Id, natmap_core::identity_capability()), &stride(3, 1), &opts)
            .unwrap();
        assert_eq!(s.len(), 3);
        assert!(verify_sequence(&s, 256).unwrap().passed());
    }
}
