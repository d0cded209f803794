//! Seeded samplers. Every sample is a composite of "atoms" whose images,
//! left inverses and preimage bounds are known in closed form, so the
//! returned capability is exact rather than guessed.
//!
//! Atoms:
//! - `perm`: a permutation of a small block `{o, …, o+k−1}`, identity elsewhere;
//! - `shuffle`: `qm + r ↦ qm + σ(r)` for a permutation `σ` of residues;
//! - `stride`: `x ↦ kx + r` with `k ≥ 2` (infinite complement);
//! - `embed`: `qm + r ↦ Mq + b_r` with `m < M` and distinct `b_r < M` (infinite complement);
//! - `shift`: `x ↦ x + k` (complement `{0, …, k−1}`);
//! - `fold`: `x ↦ ⌊x/k⌋` and `monus`: `x ↦ x ∸ k` (surjective, finite-to-one);
//! - `unpack`: `UnpackFirst` / `UnpackSecond` (surjective, every class infinite).

use std::collections::HashMap;

use natmap_core::registry::monus_expr;
use natmap_core::{
    identity_capability, Capability, Cardinality, Enumerator, FiberClaim, LinearBound, MapExpr, SetExpr,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::partial::{Element, PartialMapExpr};
use crate::tag::ClassTag;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AtomKind {
    /// Bijection.
    Sym,
    /// Injection with infinite image complement.
    Wide,
    /// Injection with finite nonempty complement.
    Shift,
    /// Surjection, finite-to-one, not injective.
    Fold,
    /// Surjection with every class infinite.
    Unpack,
}

#[derive(Debug, Clone)]
pub struct Atom {
    pub map: MapExpr,
    pub kind: AtomKind,
    /// Left inverse, for injective atoms.
    pub retract: Option<MapExpr>,
    /// Image, for injective atoms.
    pub image: Option<SetExpr>,
    /// Preimage bound, for finite-to-one atoms.
    pub bound: Option<LinearBound>,
    /// Size of the image complement when finite.
    pub missing: u64,
}

fn residue_perm(rng: &mut ChaCha8Rng, m: u64) -> Vec<u64> {
    let mut v: Vec<u64> = (0..m).collect();
    v.shuffle(rng);
    v
}

pub fn perm_atom(rng: &mut ChaCha8Rng) -> Atom {
    let k = rng.gen_range(2..=6u64);
    let o = rng.gen_range(0..20u64);
    let sigma = residue_perm(rng, k);
    let fwd: Vec<(u64, u64)> = (0..k).map(|i| (o + i, o + sigma[i as usize])).collect();
    let back: Vec<(u64, u64)> = (0..k).map(|i| (o + sigma[i as usize], o + i)).collect();
    Atom {
        map: MapExpr::patch(MapExpr::Id, fwd),
        kind: AtomKind::Sym,
        retract: Some(MapExpr::patch(MapExpr::Id, back)),
        image: Some(SetExpr::All),
        bound: Some(LinearBound { a: 1, b: o + k }),
        missing: 0,
    }
}

pub fn shuffle_atom(rng: &mut ChaCha8Rng) -> Atom {
    let m = rng.gen_range(2..=4u64);
    let sigma = residue_perm(rng, m);
    let mut inv = vec![0; m as usize];
    for (r, &s) in sigma.iter().enumerate() {
        inv[s as usize] = r as u64;
    }
    Atom {
        map: MapExpr::AffineMod { m, rules: sigma.iter().map(|&s| (m, s)).collect() },
        kind: AtomKind::Sym,
        retract: Some(MapExpr::AffineMod { m, rules: inv.iter().map(|&s| (m, s)).collect() }),
        image: Some(SetExpr::All),
        bound: Some(LinearBound { a: 1, b: m }),
        missing: 0,
    }
}

pub fn stride_atom(rng: &mut ChaCha8Rng) -> Atom {
    let k = rng.gen_range(2..=4u64);
    let r = rng.gen_range(0..k);
    Atom {
        map: MapExpr::affine(k, r),
        kind: AtomKind::Wide,
        retract: Some(MapExpr::floor_div(k)),
        image: Some(SetExpr::Residues { m: k, rs: vec![r] }),
        bound: Some(LinearBound { a: 1, b: 1 }),
        missing: 0,
    }
}

pub fn embed_atom(rng: &mut ChaCha8Rng) -> Atom {
    let m = rng.gen_range(1..=3u64);
    let big = rng.gen_range(m + 1..=m + 3);
    let mut targets: Vec<u64> = (0..big).collect();
    targets.shuffle(rng);
    targets.truncate(m as usize);
    let rules: Vec<(u64, u64)> = targets.iter().map(|&b| (big, b)).collect();
    let branches: Vec<MapExpr> = (0..big)
        .map(|res| match targets.iter().position(|&b| b == res) {
            Some(r) => MapExpr::affine(m, r as u64),
            None => MapExpr::constant(0),
        })
        .collect();
    let mut rs = targets.clone();
    rs.sort_unstable();
    Atom {
        map: MapExpr::AffineMod { m, rules },
        kind: AtomKind::Wide,
        retract: Some(MapExpr::piecewise(branches)),
        image: Some(SetExpr::Residues { m: big, rs }),
        bound: Some(LinearBound { a: 1, b: m }),
        missing: 0,
    }
}

pub fn shift_atom(rng: &mut ChaCha8Rng) -> Atom {
    let k = rng.gen_range(1..=3u64);
    Atom {
        map: MapExpr::affine(1, k),
        kind: AtomKind::Shift,
        retract: Some(monus_expr(k)),
        image: Some(SetExpr::AtLeast { n: k }),
        bound: Some(LinearBound { a: 1, b: 1 }),
        missing: k,
    }
}

pub fn fold_atom(rng: &mut ChaCha8Rng) -> Atom {
    if rng.gen_bool(0.5) {
        let k = rng.gen_range(2..=3u64);
        Atom {
            map: MapExpr::floor_div(k),
            kind: AtomKind::Fold,
            retract: None,
            image: Some(SetExpr::All),
            bound: Some(LinearBound { a: k, b: k }),
            missing: 0,
        }
    } else {
        let k = rng.gen_range(1..=3u64);
        Atom {
            map: monus_expr(k),
            kind: AtomKind::Fold,
            retract: None,
            image: Some(SetExpr::All),
            bound: Some(LinearBound { a: 1, b: k + 1 }),
            missing: 0,
        }
    }
}

pub fn unpack_atom(rng: &mut ChaCha8Rng) -> Atom {
    let map = if rng.gen_bool(0.5) { MapExpr::UnpackFirst } else { MapExpr::UnpackSecond };
    Atom { map, kind: AtomKind::Unpack, retract: None, image: Some(SetExpr::All), bound: None, missing: 0 }
}

fn sym_atom(rng: &mut ChaCha8Rng) -> Atom {
    if rng.gen_bool(0.5) {
        perm_atom(rng)
    } else {
        shuffle_atom(rng)
    }
}

fn wide_atom(rng: &mut ChaCha8Rng) -> Atom {
    if rng.gen_bool(0.5) {
        stride_atom(rng)
    } else {
        embed_atom(rng)
    }
}

/// Search a window for two points with the same value.
pub fn find_collision(map: &MapExpr, window: u64) -> Option<(u64, u64)> {
    let f = map.compile().ok()?;
    let mut seen = HashMap::new();
    for x in 0..window {
        let v = f(x).ok()?;
        if let Some(&first) = seen.get(&v) {
            return Some((first, x));
        }
        seen.insert(v, x);
    }
    None
}

/// Compose atoms left to right and derive the exact capability.
pub fn chain(atoms: &[Atom]) -> (MapExpr, Capability) {
    assert!(!atoms.is_empty());
    let mut map = atoms[0].map.clone();
    for a in &atoms[1..] {
        map = map.then(a.map.clone());
    }
    let mut cap = Capability::default();

    let all_injective = atoms.iter().all(|a| a.retract.is_some());
    let all_surjective = atoms.iter().all(|a| matches!(a.kind, AtomKind::Sym | AtomKind::Fold | AtomKind::Unpack));
    let has_unpack = atoms.iter().any(|a| a.kind == AtomKind::Unpack);

    if !has_unpack {
        let mut bound = atoms[0].bound.expect("finite-to-one atom");
        for a in &atoms[1..] {
            bound = bound.then(a.bound.expect("finite-to-one atom"));
        }
        cap.preimage_bound = Some(bound);
        cap.preimage = Some(FiberClaim::AllFinite);
        cap.cert_finite_to_one = true;
    }

    if all_injective {
        let mut image = atoms[0].image.clone().unwrap();
        let mut retract = atoms[0].retract.clone().unwrap();
        for a in &atoms[1..] {
            let r = a.retract.clone().unwrap();
            image = match image {
                SetExpr::All => a.image.clone().unwrap(),
                prev => SetExpr::inter(vec![a.image.clone().unwrap(), SetExpr::preimage(r.clone(), prev)]),
            };
            retract = r.then(retract);
        }
        cap.cert_injective = true;
        cap.retract = Some(retract);
        if atoms.iter().any(|a| a.kind == AtomKind::Wide) {
            cap.complement = Some(Cardinality::Infinite);
            cap.cert_image_coinfinite = true;
        } else {
            let missing: u64 = atoms.iter().map(|a| a.missing).sum();
            let e = Enumerator::new(&image.clone().complement(), 1 << 20).expect("image compiles");
            let elems = e.take(missing).expect("finite complement found");
            cap.cert_surjective = missing == 0;
            cap.complement = Some(Cardinality::Finite { elems });
        }
        cap.image = Some(image);
    } else if all_surjective {
        cap.image = Some(SetExpr::All);
        cap.complement = Some(Cardinality::Finite { elems: vec![] });
        cap.cert_surjective = true;
        if has_unpack {
            cap.preimage = Some(FiberClaim::AllInfinite);
            cap.cert_all_kernel_classes_infinite = true;
        }
    }
    if !cap.cert_injective {
        cap.collision = find_collision(&map, 4096);
    }
    (map, cap)
}

fn chain_of(rng: &mut ChaCha8Rng, depth: usize, mut pick: impl FnMut(&mut ChaCha8Rng) -> Atom) -> Vec<Atom> {
    (0..depth.max(1)).map(|_| pick(rng)).collect()
}

/// Force one atom of the given family into a random position.
fn insert_atom(rng: &mut ChaCha8Rng, atoms: &mut Vec<Atom>, atom: Atom) {
    let at = rng.gen_range(0..=atoms.len());
    atoms.insert(at, atom);
}

/// A random term from the full grammar, without capability.
pub fn random_term(rng: &mut ChaCha8Rng, depth: usize) -> MapExpr {
    let leaf = |rng: &mut ChaCha8Rng| -> MapExpr {
        match rng.gen_range(0..6) {
            0 => MapExpr::Id,
            1 => MapExpr::constant(rng.gen_range(0..64)),
            2 => MapExpr::affine(rng.gen_range(0..4), rng.gen_range(0..9)),
            3 => {
                let m = rng.gen_range(1..=3u64);
                MapExpr::AffineMod { m, rules: (0..m).map(|_| (rng.gen_range(0..4), rng.gen_range(0..9))).collect() }
            }
            4 => MapExpr::UnpackFirst,
            _ => MapExpr::UnpackSecond,
        }
    };
    if depth <= 1 {
        return leaf(rng);
    }
    match rng.gen_range(0..5) {
        0 => random_term(rng, depth - 1).then(random_term(rng, depth - 1)),
        1 => MapExpr::piecewise(vec![random_term(rng, depth - 1), random_term(rng, depth - 1)]),
        2 => MapExpr::pack_pair(leaf(rng), leaf(rng)),
        3 => {
            let n = rng.gen_range(1..4);
            let o: Vec<(u64, u64)> = (0..n).map(|_| (rng.gen_range(0..64), rng.gen_range(0..64))).collect();
            MapExpr::patch(random_term(rng, depth - 1), o)
        }
        _ => leaf(rng),
    }
}

fn random_domain(rng: &mut ChaCha8Rng) -> (SetExpr, Cardinality) {
    match rng.gen_range(0..5) {
        0 => (SetExpr::Empty, Cardinality::Infinite),
        1 => {
            let m = rng.gen_range(2..=4u64);
            let r = rng.gen_range(0..m);
            (SetExpr::Residues { m, rs: vec![r] }, Cardinality::Infinite)
        }
        2 => {
            let n = rng.gen_range(1..10u64);
            (SetExpr::AtLeast { n }, Cardinality::Finite { elems: (0..n).collect() })
        }
        3 => {
            let elems: Vec<u64> = (0..rng.gen_range(1..8)).map(|_| rng.gen_range(0..40)).collect();
            (SetExpr::finite(elems), Cardinality::Infinite)
        }
        _ => (SetExpr::All, Cardinality::Finite { elems: vec![] }),
    }
}

/// Deterministic sample of the class `tag`, with its capability. `depth`
/// is the number of atoms composed.
pub fn random_element(tag: ClassTag, seed: u64, depth: usize) -> (Element, Capability) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((tag as u64) << 56));
    sample(&mut rng, tag, depth.max(1))
}

fn sample(rng: &mut ChaCha8Rng, tag: ClassTag, depth: usize) -> (Element, Capability) {
    let total = |(m, c): (MapExpr, Capability)| (Element::total(m), c);
    match tag {
        ClassTag::T => (Element::total(random_term(rng, depth + 1)), Capability::default()),
        ClassTag::F => {
            let atoms = chain_of(rng, depth, |r| match r.gen_range(0..4) {
                0 => sym_atom(r),
                1 => wide_atom(r),
                2 => shift_atom(r),
                _ => fold_atom(r),
            });
            total(chain(&atoms))
        }
        ClassTag::Inj => {
            let atoms = chain_of(rng, depth, |r| match r.gen_range(0..3) {
                0 => sym_atom(r),
                1 => wide_atom(r),
                _ => shift_atom(r),
            });
            total(chain(&atoms))
        }
        ClassTag::Surj => {
            let atoms = chain_of(rng, depth, |r| match r.gen_range(0..3) {
                0 => sym_atom(r),
                1 => fold_atom(r),
                _ => unpack_atom(r),
            });
            total(chain(&atoms))
        }
        ClassTag::Sym => total(chain(&chain_of(rng, depth, sym_atom))),
        ClassTag::BL => {
            let mut atoms = chain_of(rng, depth - 1, |r| if r.gen_bool(0.5) { sym_atom(r) } else { wide_atom(r) });
            let w = wide_atom(rng);
            insert_atom(rng, &mut atoms, w);
            total(chain(&atoms))
        }
        ClassTag::DBL => {
            let mut atoms = chain_of(rng, depth - 1, |r| if r.gen_bool(0.5) { sym_atom(r) } else { unpack_atom(r) });
            let u = unpack_atom(rng);
            insert_atom(rng, &mut atoms, u);
            total(chain(&atoms))
        }
        ClassTag::BL1 | ClassTag::DBL1 => {
            if rng.gen_ratio(1, 8) {
                (Element::total(MapExpr::Id), identity_capability())
            } else {
                let inner = if tag == ClassTag::BL1 { ClassTag::BL } else { ClassTag::DBL };
                sample(rng, inner, depth)
            }
        }
        ClassTag::SymBL | ClassTag::SymDBL => {
            let inner = if rng.gen_bool(0.5) {
                ClassTag::Sym
            } else if tag == ClassTag::SymBL {
                ClassTag::BL
            } else {
                ClassTag::DBL
            };
            sample(rng, inner, depth)
        }
        ClassTag::TNotInj => {
            let collapse = if rng.gen_bool(0.8) { fold_atom(rng).map } else { MapExpr::patch(MapExpr::Id, [(1, 0)]) };
            let map = collapse.then(random_term(rng, depth));
            let collision = find_collision(&map, 4096);
            (Element::total(map), Capability { collision, ..Default::default() })
        }
        ClassTag::TNotSurj => {
            let mut head = chain_of(rng, depth, |r| if r.gen_bool(0.5) { sym_atom(r) } else { fold_atom(r) });
            let tail = if rng.gen_bool(0.5) { shift_atom(rng) } else { wide_atom(rng) };
            let (_, tail_cap) = chain(std::slice::from_ref(&tail));
            head.push(tail);
            let (map, mut cap) = chain(&head);
            cap.image = tail_cap.image;
            cap.complement = tail_cap.complement;
            cap.cert_image_coinfinite = tail_cap.cert_image_coinfinite;
            (Element::total(map), cap)
        }
        ClassTag::I => {
            let atoms = chain_of(rng, depth, |r| match r.gen_range(0..3) {
                0 => sym_atom(r),
                1 => wide_atom(r),
                _ => shift_atom(r),
            });
            let (body, body_cap) = chain(&atoms);
            let (domain, complement) = random_domain(rng);
            let cap = Capability {
                image: Some(SetExpr::image_of(body.clone(), body_cap.retract.clone().unwrap(), domain.clone())),
                retract: body_cap.retract,
                cert_injective: true,
                ..Default::default()
            };
            let p = PartialMapExpr { domain, body, domain_complement: Some(complement) };
            (Element::partial(p), cap)
        }
        ClassTag::PT => {
            let (domain, complement) = random_domain(rng);
            let p = PartialMapExpr { domain, body: random_term(rng, depth), domain_complement: Some(complement) };
            (Element::partial(p), Capability::default())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_in_seed() {
        for tag in ClassTag::ALL {
            let a = random_element(tag, 17, 3);
            let b = random_element(tag, 17, 3);
            assert_eq!(a.0, b.0);
            assert_eq!(a.1, b.1);
        }
    }

    #[test]
    fn embed_atom_retracts() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let a = embed_atom(&mut rng);
            let (f, r) = (a.map.compile().unwrap(), a.retract.clone().unwrap().compile().unwrap());
            for x in 0..200 {
                assert_eq!(r(f(x).unwrap()).unwrap(), x);
                assert!(a.image.as_ref().unwrap().contains(f(x).unwrap()).unwrap());
            }
        }
    }
}
