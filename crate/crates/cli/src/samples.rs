//! Seeded inputs for the witnesses and the two families of BL fixtures.

use left_witness::LeftMap;
use natmap_core::{Capability, Cardinality, FiberClaim, LinearBound, MapExpr, SetExpr};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use refuters::Entry;
use semigroup_classes::random::{fold_atom, perm_atom, shuffle_atom, unpack_atom};
use semigroup_classes::{chain, random_element, ClassTag, Element, PartialMapExpr};
use serde::{Deserialize, Serialize};

use crate::report::{CResult, CliError};

/// A witness input: a certified total map or a partial injection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Operand {
    Total(Entry),
    Partial { partial: PartialMapExpr },
}

impl Operand {
    pub fn entry(&self) -> CResult<&Entry> {
        match self {
            Operand::Total(e) => Ok(e),
            Operand::Partial { .. } => Err(CliError::Usage("expected a total map".into())),
        }
    }

    pub fn partial(&self) -> CResult<&PartialMapExpr> {
        match self {
            Operand::Partial { partial } => Ok(partial),
            Operand::Total(_) => Err(CliError::Usage("expected a partial map".into())),
        }
    }
}

impl From<LeftMap> for Operand {
    fn from(m: LeftMap) -> Self {
        Operand::Total(Entry::new(m.map, m.cap))
    }
}

fn from_element((e, cap): (Element, Capability)) -> Operand {
    match e {
        Element::Total { map } => Operand::Total(Entry::new(map, cap)),
        Element::Partial { map } => Operand::Partial { partial: map },
    }
}

pub fn sample(tag: ClassTag, seed: u64) -> Operand {
    from_element(random_element(tag, seed, 3))
}

pub fn entry_of(op: &Operand) -> LeftMap {
    match op {
        Operand::Total(e) => LeftMap::new(e.map.clone(), e.cap.clone()),
        Operand::Partial { .. } => panic!("partial operand"),
    }
}

/// Window on which sampled left `T` maps must stay below `2^31`, so that
/// pairs of values fit one pack code.
pub const SMALL_WINDOW: u64 = 4096;

fn small(m: &MapExpr) -> bool {
    let Ok(f) = m.compile() else { return false };
    (0..SMALL_WINDOW).all(|x| f(x).is_ok_and(|v| v < 1 << 31))
}

/// The first seeded `T` map at or after `seed` whose values stay small.
pub fn small_t(seed: u64) -> (u64, MapExpr) {
    (seed..)
        .find_map(|s| {
            let (e, _) = random_element(ClassTag::T, s, 3);
            let m = e.as_total().expect("total sample").clone();
            small(&m).then_some((s, m))
        })
        .expect("some seed gives a small map")
}

/// A DBL map: one unpack map between two finite relabelings.
pub fn relabeled_dbl(seed: u64) -> LeftMap {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sym = |r: &mut ChaCha8Rng| if r.gen_bool(0.5) { perm_atom(r) } else { shuffle_atom(r) };
    let atoms = vec![sym(&mut rng), unpack_atom(&mut rng), sym(&mut rng)];
    let (m, cap) = chain(&atoms);
    LeftMap::new(m, cap)
}

/// A surjection with finite kernel classes, from permutations and folds.
pub fn finite_surj(seed: u64) -> LeftMap {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let atoms: Vec<_> = (0..rng.gen_range(1..=3))
        .map(|_| match rng.gen_range(0..3) {
            0 => perm_atom(&mut rng),
            1 => shuffle_atom(&mut rng),
            _ => fold_atom(&mut rng),
        })
        .collect();
    let (m, cap) = chain(&atoms);
    LeftMap::new(m, cap)
}

/// The seeded pair used by `witness --seed`.
pub fn witness_pair(left: bool, tag: ClassTag, seed: u64) -> CResult<(Operand, Operand)> {
    let other = seed.wrapping_add(1000);
    Ok(match (left, tag) {
        (false, _) => (sample(tag, seed), sample(tag, other)),
        (true, ClassTag::T) => {
            let (s, a) = small_t(seed);
            let (_, b) = small_t(s.wrapping_add(1000));
            let t = |m| Operand::Total(Entry::new(m, Capability::default()));
            (t(a), t(b))
        }
        (true, ClassTag::DBL) => (relabeled_dbl(seed).into(), relabeled_dbl(other).into()),
        (true, ClassTag::DBL1) => {
            let pick = |s: u64| if s.is_multiple_of(8) { LeftMap::identity() } else { relabeled_dbl(s) };
            (pick(seed).into(), pick(other).into())
        }
        (true, ClassTag::Surj) => (finite_surj(seed).into(), finite_surj(other).into()),
        (true, ClassTag::SymDBL) => {
            let t = if seed.is_multiple_of(2) { finite_surj(seed) } else { relabeled_dbl(seed) };
            (t.into(), relabeled_dbl(other).into())
        }
        (true, ClassTag::TNotInj | ClassTag::I) => (sample(tag, seed), sample(tag, other)),
        (true, _) => return Err(CliError::Capability(format!("no left sampler for class {tag}"))),
    })
}

fn injective(map: MapExpr, image: SetExpr, retract: MapExpr) -> Entry {
    let cap = Capability {
        image: Some(image),
        complement: Some(Cardinality::Infinite),
        retract: Some(retract),
        preimage: Some(FiberClaim::AllFinite),
        preimage_bound: Some(LinearBound { a: 1, b: 1 }),
        cert_injective: true,
        cert_image_coinfinite: true,
        cert_finite_to_one: true,
        ..Default::default()
    };
    Entry::new(map, cap)
}

/// `x ↦ kx + r`.
pub fn stride(k: u64, r: u64) -> Entry {
    injective(MapExpr::affine(k, r), SetExpr::Residues { m: k, rs: vec![r] }, MapExpr::floor_div(k))
}

/// The increasing bijection from ℕ onto the residues mod `k` other than `r`.
pub fn other_residues(k: u64, r: u64) -> Entry {
    let rs: Vec<u64> = (0..k).filter(|&i| i != r).collect();
    let map = MapExpr::AffineMod { m: k - 1, rules: rs.iter().map(|&s| (k, s)).collect() };
    let branches = (0..k)
        .map(|i| match rs.iter().position(|&s| s == i) {
            Some(j) => MapExpr::affine(k - 1, j as u64),
            None => MapExpr::constant(0),
        })
        .collect();
    injective(map, SetExpr::Residues { m: k, rs }, MapExpr::piecewise(branches))
}

pub const BL_FIXTURES: usize = 50;

/// Pairs of strides whose joint image misses a whole residue class.
pub fn bl_branch_a() -> Vec<(Entry, Entry)> {
    (3..)
        .flat_map(|k| (0..k).flat_map(move |a| (0..k).map(move |b| (stride(k, a), stride(k, b)))))
        .take(BL_FIXTURES)
        .collect()
}

/// Pairs whose joint image is all of ℕ: one residue class mod `k` and the rest.
pub fn bl_branch_b() -> Vec<(Entry, Entry)> {
    (2..).flat_map(|k| (0..k).map(move |r| (stride(k, r), other_residues(k, r)))).take(BL_FIXTURES).collect()
}
