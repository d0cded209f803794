//! Constructors of left sequences over the tilde maps `α̃ = UnpackFirst`,
//! `β̃ = UnpackSecond`. A left step `(u, v, s)` relates `s·u` and `s·v`,
//! where `s·u` applies `s` first.

use natmap_core::{
    canonical_alpha_tilde, canonical_beta_tilde, constant_with_capability, gamma_tilde, gamma_tilde_capability,
    Capability, Cardinality, FiberClaim, FiberForm, MapExpr,
};
use right_witness::{ensure_verified, DerivationSequence, Gen, Side, Step, WResult, WitnessError};
use semigroup_classes::PartialMapExpr;

use crate::family::{dbl_interleave, ClassFamily};

fn tildes() -> Vec<Gen> {
    vec![Gen::map(canonical_alpha_tilde()), Gen::map(canonical_beta_tilde())]
}

fn tilde_step(gamma: MapExpr, cap: Option<Capability>) -> Step {
    let st = Step::new(Gen::map(canonical_alpha_tilde()), Gen::map(canonical_beta_tilde()), Gen::map(gamma));
    match cap {
        Some(c) => st.with_cap(c),
        None => st,
    }
}

fn left_seq(a: Gen, b: Gen, steps: Vec<Step>, generators: Vec<Gen>) -> DerivationSequence {
    DerivationSequence { side: Side::Left, a, b, steps, generators }
}

/// Capability of a surjection whose classes are all infinite.
pub fn dbl_capability(form: FiberForm) -> Capability {
    Capability {
        image: Some(natmap_core::SetExpr::All),
        complement: Some(Cardinality::Finite { elems: vec![] }),
        preimage: Some(FiberClaim::AllInfinite),
        fibers: Some(form),
        cert_surjective: true,
        cert_all_kernel_classes_infinite: true,
        ..Default::default()
    }
}

/// A map with the capability it is certified by.
#[derive(Debug, Clone, PartialEq)]
pub struct LeftMap {
    pub map: MapExpr,
    pub cap: Capability,
}

impl LeftMap {
    pub fn new(map: MapExpr, cap: Capability) -> Self {
        LeftMap { map, cap }
    }

    pub fn identity() -> Self {
        LeftMap::new(MapExpr::Id, natmap_core::identity_capability())
    }

    pub fn alpha_tilde() -> Self {
        LeftMap::new(canonical_alpha_tilde(), dbl_capability(FiberForm::PackFirst))
    }

    pub fn beta_tilde() -> Self {
        LeftMap::new(canonical_beta_tilde(), dbl_capability(FiberForm::PackSecond))
    }

    fn gen(&self) -> Gen {
        Gen::map(self.map.clone())
    }

    fn family(&self) -> ClassFamily {
        let mut f = ClassFamily::kernel(self.map.clone());
        if let Some(form) = self.cap.fibers {
            f.form = form;
        }
        f
    }

    fn is_dbl(&self) -> bool {
        self.cap.cert_surjective
            && (self.cap.cert_all_kernel_classes_infinite || self.cap.preimage == Some(FiberClaim::AllInfinite))
    }
}

/// `θ = γ·α̃, γ·β̃ = φ` with `γ = γ̃(θ,φ)`.
pub fn witness_left_t(theta: &MapExpr, phi: &MapExpr) -> DerivationSequence {
    left_seq(Gen::map(theta.clone()), Gen::map(phi.clone()), vec![tilde_step(gamma_tilde(theta, phi), None)], tildes())
}

/// Length-2 sequence through `c₀`; both multipliers keep a collision.
pub fn witness_left_t_not_inj(theta: &LeftMap, phi: &LeftMap, window: u64) -> WResult<DerivationSequence> {
    for (c, which) in [(theta, "θ"), (phi, "φ")] {
        if c.cap.collision.is_none() {
            return Err(WitnessError::MissingCertificate(format!("collision witness for {which}")));
        }
    }
    let (c0, k) = constant_with_capability(0);
    let g1 = gamma_tilde(&theta.map, &c0);
    let c1 = gamma_tilde_capability(&theta.map, &c0, &theta.cap, &k);
    let g2 = gamma_tilde(&c0, &phi.map);
    let c2 = gamma_tilde_capability(&c0, &phi.map, &k, &phi.cap);
    if c1.collision.is_none() || c2.collision.is_none() {
        return Err(WitnessError::MissingCertificate("collision witness does not collide".into()));
    }
    let seq = left_seq(theta.gen(), phi.gen(), vec![tilde_step(g1, Some(c1)), tilde_step(g2, Some(c2))], tildes());
    ensure_verified(seq, window)
}

/// `θ = γ₁α̃, γ₁β̃ = γ₂α̃, γ₂β̃ = φ` through the map `λ` sending `x` to its
/// class in the interleaving of the kernel classes of `θ` and `φ`.
pub fn witness_left_dbl(theta: &LeftMap, phi: &LeftMap, window: u64) -> WResult<DerivationSequence> {
    for (c, which) in [(theta, "θ"), (phi, "φ")] {
        if !c.is_dbl() {
            return Err(WitnessError::MissingCertificate(format!("{which} is not certified DBL")));
        }
    }
    let fam = dbl_interleave(&theta.family(), &phi.family());
    let lambda = fam.map;
    // classes of γ₁ are A_{yα̃} ∩ C_{yβ̃}, all infinite
    let g1 = gamma_tilde(&theta.map, &lambda);
    let g2 = gamma_tilde(&lambda, &phi.map);
    let cap = dbl_capability(FiberForm::Scan);
    let seq =
        left_seq(theta.gen(), phi.gen(), vec![tilde_step(g1, Some(cap.clone())), tilde_step(g2, Some(cap))], tildes());
    ensure_verified(seq, window)
}

fn with_one(mut seq: DerivationSequence) -> DerivationSequence {
    if !seq.generators.contains(&Gen::One) {
        seq.generators.insert(0, Gen::One);
    }
    seq
}

/// `DBL ∪ {1}` over `{1, α̃, β̃}`: at most 3 steps.
pub fn witness_left_dbl1(theta: &LeftMap, phi: &LeftMap, window: u64) -> WResult<DerivationSequence> {
    let one = |c: &LeftMap| c.map == MapExpr::Id;
    for (c, which) in [(theta, "θ"), (phi, "φ")] {
        if !one(c) && !c.is_dbl() {
            return Err(WitnessError::Precondition(format!("{which} is neither 1 nor certified DBL")));
        }
    }
    let from_one = |other: &LeftMap| -> WResult<DerivationSequence> {
        // 1 = 1·1, 1·α̃ = α̃
        let first = left_seq(
            Gen::One,
            Gen::map(canonical_alpha_tilde()),
            vec![Step::new(Gen::One, Gen::map(canonical_alpha_tilde()), Gen::One)],
            vec![Gen::One],
        );
        Ok(first.concat(witness_left_dbl(&LeftMap::alpha_tilde(), other, window)?))
    };
    let seq = match (one(theta), one(phi)) {
        (true, true) => {
            let mut gens = vec![Gen::One];
            gens.extend(tildes());
            left_seq(Gen::One, Gen::One, vec![], gens)
        }
        (true, false) => from_one(phi)?,
        (false, true) => from_one(theta)?.reverse(),
        (false, false) => witness_left_dbl(theta, phi, window)?,
    };
    ensure_verified(with_one(seq), window)
}

/// `θ` followed by `α̃`; its classes are preimages under the surjection `θ`
/// of the infinite classes of `α̃`, hence infinite.
fn then_alpha_tilde(c: &LeftMap) -> LeftMap {
    if c.map == MapExpr::Id {
        return LeftMap::alpha_tilde();
    }
    LeftMap::new(c.map.clone().then(canonical_alpha_tilde()), dbl_capability(FiberForm::Scan))
}

/// Surjections over `{1, α̃, β̃}`: `θ ~ θα̃`, two DBL steps, `φα̃ ~ φ`.
/// Endpoints certified DBL enter the middle part directly.
pub fn witness_left_surj(theta: &LeftMap, phi: &LeftMap, window: u64) -> WResult<DerivationSequence> {
    for (c, which) in [(theta, "θ"), (phi, "φ")] {
        if !c.cap.cert_surjective {
            return Err(WitnessError::MissingCertificate(format!("{which} is not certified surjective")));
        }
    }
    // an endpoint already in DBL needs no first step
    let enter = |c: &LeftMap| if c.is_dbl() { c.clone() } else { then_alpha_tilde(c) };
    let (t2, p2) = (enter(theta), enter(phi));
    let at = Gen::map(canonical_alpha_tilde());
    let mut steps = Vec::new();
    if !theta.is_dbl() {
        steps.push(Step::new(Gen::One, at.clone(), theta.gen()).with_cap(theta.cap.clone()));
    }
    steps.extend(witness_left_dbl(&t2, &p2, window)?.steps);
    if !phi.is_dbl() {
        steps.push(Step::new(at, Gen::One, phi.gen()).with_cap(phi.cap.clone()));
    }
    let mut gens = vec![Gen::One];
    gens.extend(tildes());
    ensure_verified(left_seq(theta.gen(), phi.gen(), steps, gens), window)
}

/// `a = a·1, a·ε = b·ε, b·1 = b` through the empty map `ε`.
pub fn witness_left_i_zero(a: &PartialMapExpr, b: &PartialMapExpr) -> DerivationSequence {
    let (ga, gb) = (Gen::partial(a.clone()), Gen::partial(b.clone()));
    let eps = Gen::partial(PartialMapExpr::empty());
    let steps = if a == b {
        vec![]
    } else {
        vec![Step::new(Gen::One, eps.clone(), ga.clone()), Step::new(eps.clone(), Gen::One, gb.clone())]
    };
    left_seq(ga, gb, steps, vec![Gen::One, eps])
}
