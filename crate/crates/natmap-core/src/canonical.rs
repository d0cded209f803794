//! The fixed generator maps and the two pairing combinators.
//!
//! `α̂ = 2x` and `β̂ = 2x+1` split ℕ into evens and odds, so
//! `γ̂(θ,φ) = PiecewiseMod(2, [θ, φ])` satisfies `α̂γ̂ = θ` and `β̂γ̂ = φ`.
//! `α̃`, `β̃` are the two halves of the Cantor unpairing, so
//! `γ̃(θ,φ) = PackPair(θ, φ)` satisfies `γ̃α̃ = θ` and `γ̃β̃ = φ`.

use crate::capability::{Capability, FiberClaim};
use crate::expr::MapExpr;
use crate::fiber::{FiberForm, LinearBound};
use crate::registry::select_expr;
use crate::set::{Cardinality, SetExpr};

pub fn evens() -> SetExpr {
    SetExpr::Residues { m: 2, rs: vec![0] }
}

pub fn odds() -> SetExpr {
    SetExpr::Residues { m: 2, rs: vec![1] }
}

pub fn canonical_alpha_hat() -> MapExpr {
    MapExpr::affine(2, 0)
}

pub fn canonical_beta_hat() -> MapExpr {
    MapExpr::affine(2, 1)
}

pub fn canonical_alpha_tilde() -> MapExpr {
    MapExpr::UnpackFirst
}

pub fn canonical_beta_tilde() -> MapExpr {
    MapExpr::UnpackSecond
}

/// `x ↦ ⌊x/2⌋`, a left inverse of both hat maps.
pub fn halve() -> MapExpr {
    MapExpr::floor_div(2)
}

fn hat_capability(image: SetExpr) -> Capability {
    Capability {
        image: Some(image),
        complement: Some(Cardinality::Infinite),
        retract: Some(halve()),
        preimage: Some(FiberClaim::AllFinite),
        preimage_bound: Some(LinearBound { a: 1, b: 1 }),
        cert_injective: true,
        cert_image_coinfinite: true,
        cert_finite_to_one: true,
        ..Default::default()
    }
}

pub fn alpha_hat_capability() -> Capability {
    hat_capability(evens())
}

pub fn beta_hat_capability() -> Capability {
    hat_capability(odds())
}

fn tilde_capability(form: FiberForm, collision: (u64, u64)) -> Capability {
    Capability {
        image: Some(SetExpr::All),
        complement: Some(Cardinality::Finite { elems: vec![] }),
        preimage: Some(FiberClaim::AllInfinite),
        fibers: Some(form),
        collision: Some(collision),
        cert_surjective: true,
        cert_all_kernel_classes_infinite: true,
        ..Default::default()
    }
}

pub fn alpha_tilde_capability() -> Capability {
    // pack(0,0) = 0 and pack(0,1) = 2 share first coordinate 0
    tilde_capability(FiberForm::PackFirst, (0, 2))
}

pub fn beta_tilde_capability() -> Capability {
    // pack(0,0) = 0 and pack(1,0) = 1 share second coordinate 0
    tilde_capability(FiberForm::PackSecond, (0, 1))
}

pub fn identity_capability() -> Capability {
    Capability {
        image: Some(SetExpr::All),
        complement: Some(Cardinality::Finite { elems: vec![] }),
        retract: Some(MapExpr::Id),
        preimage: Some(FiberClaim::AllFinite),
        preimage_bound: Some(LinearBound { a: 1, b: 1 }),
        cert_injective: true,
        cert_surjective: true,
        cert_finite_to_one: true,
        ..Default::default()
    }
}

/// The constant map `c_y` and its capability.
pub fn constant_with_capability(y: u64) -> (MapExpr, Capability) {
    let cap = Capability {
        image: Some(SetExpr::finite([y])),
        complement: Some(Cardinality::Infinite),
        retract: Some(MapExpr::constant(0)),
        preimage: Some(FiberClaim::Mixed),
        collision: Some((0, 1)),
        cert_image_coinfinite: true,
        ..Default::default()
    };
    (MapExpr::constant(y), cap)
}

/// `γ̂(θ,φ)`: `2q ↦ θ(q)`, `2q+1 ↦ φ(q)`.
pub fn gamma_hat(theta: &MapExpr, phi: &MapExpr) -> MapExpr {
    MapExpr::piecewise(vec![theta.clone(), phi.clone()])
}

/// `γ̃(θ,φ)`: `x ↦ pack(θ(x), φ(x))`.
pub fn gamma_tilde(theta: &MapExpr, phi: &MapExpr) -> MapExpr {
    MapExpr::pack_pair(theta.clone(), phi.clone())
}

/// Capability of `γ̂(θ,φ)` derived from the inputs. `disjoint_images` is the
/// caller's certificate that `im θ ∩ im φ = ∅`; the complement claim is left
/// to the caller because it depends on how the two images sit together.
pub fn gamma_hat_capability(ct: &Capability, cp: &Capability, disjoint_images: bool) -> Capability {
    let mut cap = Capability::default();
    if let (Some(a), Some(b)) = (&ct.image, &cp.image) {
        cap.image = Some(SetExpr::union(vec![a.clone(), b.clone()]));
    }
    cap.cert_surjective = ct.cert_surjective || cp.cert_surjective;
    if cap.cert_surjective {
        cap.complement = Some(Cardinality::Finite { elems: vec![] });
    }
    if ct.cert_injective && cp.cert_injective && disjoint_images {
        cap.cert_injective = true;
        if let (Some(it), Some(rt), Some(rp)) = (&ct.image, &ct.retract, &cp.retract) {
            let left = rt.clone().then(canonical_alpha_hat());
            let right = rp.clone().then(canonical_beta_hat());
            cap.retract = Some(select_expr(it, &left, &right));
        }
    }
    if ct.cert_finite_to_one && cp.cert_finite_to_one {
        cap.cert_finite_to_one = true;
        cap.preimage = Some(FiberClaim::AllFinite);
        if let (Some(bt), Some(bp)) = (ct.preimage_bound, cp.preimage_bound) {
            let m = bt.max(bp);
            cap.preimage_bound = Some(LinearBound { a: 2 * m.a, b: 2 * m.b + 2 });
        }
    }
    cap.collision = ct.collision.map(|(a, b)| (2 * a, 2 * b)).or(cp.collision.map(|(a, b)| (2 * a + 1, 2 * b + 1)));
    cap
}

/// Capability of `γ̃(θ,φ)`; its kernel is `ker θ ∩ ker φ`.
pub fn gamma_tilde_capability(theta: &MapExpr, phi: &MapExpr, ct: &Capability, cp: &Capability) -> Capability {
    let mut cap = Capability::default();
    let g = gamma_tilde(theta, phi);
    if ct.cert_injective {
        cap.cert_injective = true;
        if let Some(rt) = &ct.retract {
            let r = MapExpr::UnpackFirst.then(rt.clone());
            cap.image = Some(SetExpr::Image { map: g.clone(), retract: r.clone() });
            cap.retract = Some(r);
        }
    } else if cp.cert_injective {
        cap.cert_injective = true;
        if let Some(rp) = &cp.retract {
            let r = MapExpr::UnpackSecond.then(rp.clone());
            cap.image = Some(SetExpr::Image { map: g.clone(), retract: r.clone() });
            cap.retract = Some(r);
        }
    }
    if ct.cert_finite_to_one || cp.cert_finite_to_one {
        cap.cert_finite_to_one = true;
        cap.preimage = Some(FiberClaim::AllFinite);
        cap.preimage_bound = if ct.cert_finite_to_one { ct.preimage_bound } else { cp.preimage_bound };
    }
    // a pair collapsed by both coordinates stays collapsed
    for pair in [ct.collision, cp.collision].into_iter().flatten() {
        if cap.collision.is_none() && !cap.cert_injective {
            let (ft, fp) = (theta.compile(), phi.compile());
            if let (Ok(ft), Ok(fp)) = (ft, fp) {
                let same = |f: &crate::expr::MapFn| matches!((f(pair.0), f(pair.1)), (Ok(a), Ok(b)) if a == b);
                if same(&ft) && same(&fp) {
                    cap.collision = Some(pair);
                }
            }
        }
    }
    cap
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capability::check_capabilities;
    use crate::pairing::pack;

    #[test]
    fn hat_values() {
        assert_eq!(canonical_alpha_hat().eval(3).unwrap(), 6);
        assert_eq!(canonical_beta_hat().eval(3).unwrap(), 7);
        assert_eq!(alpha_hat_capability().image_member(5).unwrap(), Some(false));
    }

    #[test]
    fn tilde_values() {
        assert_eq!(canonical_alpha_tilde().eval(8).unwrap(), 1);
        assert_eq!(canonical_beta_tilde().eval(8).unwrap(), 2);
        let fib = alpha_tilde_capability().fibers_of(&canonical_alpha_tilde(), 1 << 20).unwrap();
        let first: Vec<_> = (0..3).map(|i| fib.nth(0, i).unwrap().unwrap()).collect();
        assert_eq!(first, vec![0, 2, 5]);
    }

    #[test]
    fn gamma_hat_examples() {
        let g = gamma_hat(&MapExpr::affine(1, 1), &MapExpr::affine(3, 0));
        assert_eq!(g.eval(4).unwrap(), 3);
        assert_eq!(g.eval(5).unwrap(), 6);
        let through = canonical_alpha_hat().then(g);
        assert_eq!(through.eval(7).unwrap(), 8);
        let halving = gamma_hat(&MapExpr::Id, &MapExpr::Id);
        for x in 0..100 {
            assert_eq!(halving.eval(x).unwrap(), x / 2);
        }
    }

    #[test]
    fn gamma_tilde_examples() {
        let g = gamma_tilde(&MapExpr::Id, &MapExpr::Id);
        assert_eq!(g.eval(1).unwrap(), pack(1, 1));
        assert_eq!(g.clone().then(canonical_alpha_tilde()).eval(1).unwrap(), 1);
        let g = gamma_tilde(&MapExpr::affine(1, 1), &MapExpr::affine(3, 0));
        assert_eq!(g.eval(2).unwrap(), 51);
    }

    #[test]
    fn canonical_capabilities_hold() {
        assert!(check_capabilities(&canonical_alpha_hat(), &alpha_hat_capability(), 1000).unwrap().passed());
        assert!(check_capabilities(&canonical_beta_hat(), &beta_hat_capability(), 1000).unwrap().passed());
        assert!(check_capabilities(&canonical_alpha_tilde(), &alpha_tilde_capability(), 500).unwrap().passed());
        assert!(check_capabilities(&canonical_beta_tilde(), &beta_tilde_capability(), 500).unwrap().passed());
        let (c, cc) = constant_with_capability(4);
        assert!(check_capabilities(&c, &cc, 100).unwrap().passed());
    }

    #[test]
    fn derived_gamma_hat_capability_holds() {
        let (t, p) = (MapExpr::affine(4, 0), MapExpr::affine(4, 1));
        let ct = Capability {
            image: Some(SetExpr::Residues { m: 4, rs: vec![0] }),
            retract: Some(MapExpr::floor_div(4)),
            cert_injective: true,
            ..Default::default()
        };
        let cp = Capability {
            image: Some(SetExpr::Residues { m: 4, rs: vec![1] }),
            retract: Some(MapExpr::floor_div(4)),
            cert_injective: true,
            ..Default::default()
        };
        let cap = gamma_hat_capability(&ct, &cp, true);
        assert!(cap.cert_injective);
        assert!(check_capabilities(&gamma_hat(&t, &p), &cap, 2000).unwrap().passed());
    }
}
