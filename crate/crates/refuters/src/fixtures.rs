//! Generator sets shipped for testing and for the command line: a handful
//! of hand-picked sets per target and seeded samples for the others.

use natmap_core::registry::{monus_expr, select_expr};
use natmap_core::{
    alpha_hat_capability, alpha_tilde_capability, beta_hat_capability, beta_tilde_capability, canonical_alpha_hat,
    canonical_alpha_tilde, canonical_beta_hat, canonical_beta_tilde, halve, Capability, Cardinality, FiberClaim,
    LinearBound, MapExpr, SetExpr,
};
use semigroup_classes::{find_collision, random_element, ClassTag};

use crate::cert::Target;
use crate::perm::finite_perm;
use crate::rel::Entry;

pub fn alpha_hat() -> Entry {
    Entry::new(canonical_alpha_hat(), alpha_hat_capability())
}

pub fn beta_hat() -> Entry {
    Entry::new(canonical_beta_hat(), beta_hat_capability())
}

pub fn alpha_tilde() -> Entry {
    Entry::new(canonical_alpha_tilde(), alpha_tilde_capability())
}

pub fn beta_tilde() -> Entry {
    Entry::new(canonical_beta_tilde(), beta_tilde_capability())
}

/// `x ↦ kx + r`.
pub fn stride(k: u64, r: u64) -> Entry {
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
    Entry::new(MapExpr::affine(k, r), cap)
}

/// `x ↦ x + 1`.
pub fn succ() -> Entry {
    let cap = Capability {
        image: Some(SetExpr::AtLeast { n: 1 }),
        complement: Some(Cardinality::Finite { elems: vec![0] }),
        retract: Some(monus_expr(1)),
        preimage: Some(FiberClaim::AllFinite),
        preimage_bound: Some(LinearBound { a: 1, b: 1 }),
        cert_injective: true,
        cert_finite_to_one: true,
        ..Default::default()
    };
    Entry::new(MapExpr::affine(1, 1), cap)
}

/// `x ↦ ⌊x/k⌋` for `k ≥ 2`.
pub fn fold(k: u64) -> Entry {
    let cap = Capability {
        image: Some(SetExpr::All),
        complement: Some(Cardinality::Finite { elems: vec![] }),
        preimage: Some(FiberClaim::AllFinite),
        preimage_bound: Some(LinearBound { a: k, b: k }),
        collision: Some((0, 1)),
        cert_surjective: true,
        cert_finite_to_one: true,
        ..Default::default()
    };
    Entry::new(MapExpr::floor_div(k), cap)
}

pub fn halving() -> Entry {
    Entry::new(halve(), fold(2).cap)
}

/// Reads the second coordinate on the pairs with first coordinate 0 and
/// sends everything else to 0.
pub fn collapse_second() -> Entry {
    let map = select_expr(
        &SetExpr::preimage(MapExpr::UnpackFirst, SetExpr::finite([0])),
        &MapExpr::UnpackSecond,
        &MapExpr::constant(0),
    );
    let cap = Capability {
        image: Some(SetExpr::All),
        complement: Some(Cardinality::Finite { elems: vec![] }),
        preimage: Some(FiberClaim::Mixed),
        collision: find_collision(&map, 64),
        cert_surjective: true,
        ..Default::default()
    };
    Entry::new(map, cap)
}

pub fn rotation() -> Entry {
    finite_perm(&[(0, 3), (3, 1), (1, 0)]).expect("distinct points")
}

pub fn swap(a: u64, b: u64) -> Entry {
    finite_perm(&[(a, b), (b, a)]).expect("distinct points")
}

fn sample(tag: ClassTag, seed: u64, depth: usize) -> Entry {
    let (e, cap) = random_element(tag, seed, depth);
    Entry::new(e.as_total().expect("total sample").clone(), cap)
}

/// Five hand-picked generator sets for `target`, with labels.
pub fn crafted(target: Target) -> Vec<(&'static str, Vec<Entry>)> {
    match target {
        Target::RightIdeal => vec![
            ("halving", vec![halving()]),
            ("halving twice", vec![halving(), fold(3)]),
            ("unpack pair", vec![alpha_tilde(), beta_tilde()]),
            ("collapse", vec![collapse_second()]),
            ("empty", vec![]),
        ],
        Target::LeftIdeal => vec![
            ("successor", vec![succ()]),
            ("hats", vec![alpha_hat(), beta_hat()]),
            ("successor and stride", vec![succ(), stride(3, 2)]),
            ("stride", vec![stride(5, 0)]),
            ("empty", vec![]),
        ],
        Target::RightCong => vec![
            ("identity", vec![finite_perm(&[]).expect("identity")]),
            ("rotation", vec![rotation()]),
            ("two swaps", vec![swap(0, 1), swap(2, 7)]),
            ("rotation and swap", vec![rotation(), swap(4, 5)]),
            ("three swaps", vec![swap(0, 1), swap(1, 2), swap(5, 9)]),
        ],
        Target::LeftCong => vec![
            ("identity", vec![finite_perm(&[]).expect("identity")]),
            ("halving", vec![halving()]),
            ("halving and successor", vec![halving(), succ()]),
            ("hats", vec![alpha_hat(), beta_hat()]),
            ("rotation and stride", vec![rotation(), stride(3, 1)]),
        ],
        Target::RightBl2 => vec![
            ("hats", vec![alpha_hat(), beta_hat()]),
            ("hats and rotation", vec![alpha_hat(), beta_hat(), rotation()]),
            ("three strides", vec![stride(3, 0), stride(3, 1), stride(3, 2)]),
            ("doubling and successor", vec![alpha_hat(), succ()]),
            ("strides and swap", vec![stride(4, 1), stride(2, 0), swap(1, 6)]),
        ],
        Target::RightInj3 => vec![
            ("hats and rotation", vec![alpha_hat(), beta_hat(), rotation()]),
            ("doubling and rotation", vec![alpha_hat(), rotation()]),
            ("successor and doubling", vec![succ(), alpha_hat()]),
            ("two swaps", vec![swap(0, 1), swap(2, 7)]),
            ("odd stride, successor, rotation", vec![beta_hat(), succ(), rotation()]),
        ],
        Target::LeftSurj2 => vec![
            ("unpack pair", vec![alpha_tilde(), beta_tilde()]),
            ("unpack pair and rotation", vec![alpha_tilde(), beta_tilde(), rotation()]),
            ("collapse", vec![alpha_tilde(), collapse_second(), rotation()]),
            ("halving and rotation", vec![halving(), rotation()]),
            ("two swaps", vec![swap(0, 1), swap(2, 7)]),
        ],
        Target::LeftSurj3 => vec![
            ("unpack pair and rotation", vec![alpha_tilde(), beta_tilde(), rotation()]),
            ("two swaps", vec![swap(0, 1), swap(2, 7)]),
            ("collapse", vec![alpha_tilde(), collapse_second(), rotation()]),
            ("halving and rotation", vec![halving(), rotation()]),
            ("second unpack and rotation", vec![beta_tilde(), rotation()]),
        ],
    }
}

/// A seeded generator set suited to `target`, of size 1 to 3. Only the
/// ideal and congruence targets are sampled.
pub fn seeded(target: Target, seed: u64) -> Option<Vec<Entry>> {
    let tag = match target {
        Target::RightIdeal => ClassTag::TNotInj,
        Target::LeftIdeal => ClassTag::TNotSurj,
        Target::RightCong => ClassTag::Sym,
        Target::LeftCong => ClassTag::F,
        _ => return None,
    };
    let size = 1 + seed % 3;
    Some((0..size).map(|i| sample(tag, seed.wrapping_mul(31).wrapping_add(i), 2)).collect())
}
