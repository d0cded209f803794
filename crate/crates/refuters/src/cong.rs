//! Depth-bounded refutations for universal congruences through the word
//! relations `Σ(U)` and `Σ′(U)`: a pair related by no short word cannot be
//! joined by a short sequence.

use std::collections::BTreeSet;

use natmap_core::Cardinality;
use semigroup_classes::{member_check, ClassTag, Element};

use crate::cert::{seal, Proof, RefutationCertificate, RelPair, Target, PHI, THETA};
use crate::error::{RResult, RefuteError};
use crate::ideal::table;
use crate::perm::finite_perm;
use crate::rel::{sigma_enum, sigma_prime_enum, Entry, Env};
use crate::RefuteOpts;

/// Generators must be finite-to-one and expose exact preimages.
fn gate_finite_to_one(names: &[String], gens: &[Entry], window: u64) -> RResult<()> {
    for (name, e) in names.iter().zip(gens) {
        let v = member_check(&Element::total(e.map.clone()), &e.cap, ClassTag::F, window)?;
        if !v.is_yes() {
            return Err(RefuteError::Precondition(format!("`{name}` is not certified finite-to-one")));
        }
        let exact = (e.cap.cert_injective && e.cap.retract.is_some()) || e.cap.preimage_bound.is_some();
        if !exact {
            return Err(RefuteError::MissingCapability(format!("`{name}` has no exact preimage enumerator")));
        }
    }
    Ok(())
}

pub fn refute_right_cong_depth(gens: &[Entry], k: u64, opts: &RefuteOpts) -> RResult<RefutationCertificate> {
    let (names, mut maps) = table(gens);
    gate_finite_to_one(&names, gens, opts.window)?;
    let mut complements = Vec::new();
    for (name, e) in names.iter().zip(gens) {
        match &e.cap.complement {
            Some(Cardinality::Finite { elems }) => complements.push(elems.clone()),
            _ => {
                return Err(RefuteError::Precondition(format!(
                    "`{name}` has no finite image complement; it lies outside the class"
                )))
            }
        }
    }
    let env = Env::new(&maps, opts.window);
    let mut pairs = Vec::new();
    for rel in sigma_enum(&names, k as usize) {
        let mut found = None;
        for x in 0..opts.budget {
            let img = env.image(&rel, x)?;
            if let Some(&y) = img.elems.iter().next() {
                let path = env.find_path(&rel, x, y)?.expect("image point has a path");
                found = Some(RelPair { x, y, path });
                break;
            }
        }
        pairs.push(found);
    }
    drop(env);
    let xs: BTreeSet<u64> = pairs.iter().flatten().map(|p| p.x).collect();
    let ys: BTreeSet<u64> = pairs.iter().flatten().map(|p| p.y).collect();
    let base = opts.block.max(xs.iter().chain(&ys).max().map_or(0, |m| m + 1));
    let lam: Vec<(u64, u64)> = xs.iter().enumerate().map(|(j, &x)| (x, base + 2 * j as u64)).collect();
    let mu: Vec<(u64, u64)> = ys.iter().enumerate().map(|(j, &y)| (y, base + 2 * j as u64 + 1)).collect();
    maps.insert(THETA.into(), finite_perm(&lam)?);
    let phi = if mu.is_empty() { finite_perm(&[(0, 1), (1, 0)])? } else { finite_perm(&mu)? };
    maps.insert(PHI.into(), phi);
    seal(RefutationCertificate {
        target: Target::RightCong,
        depth: k,
        window: opts.window,
        generators: names,
        constructed: vec![THETA.into(), PHI.into()],
        maps,
        proof: Proof::RightCong { complements, pairs },
        notes: vec![],
        checked: vec![],
    })
}

pub fn refute_left_cong_depth(gens: &[Entry], k: u64, opts: &RefuteOpts) -> RResult<RefutationCertificate> {
    let (names, mut maps) = table(gens);
    gate_finite_to_one(&names, gens, opts.window)?;
    let env = Env::new(&maps, opts.window);
    let mut pairs = Vec::new();
    let mut used_y = BTreeSet::new();
    for (i, rel) in sigma_prime_enum(&names, k as usize).enumerate() {
        let x = i as u64;
        let img = env.image(&rel, x)?;
        if !img.exact {
            return Err(RefuteError::MissingCapability(format!("`{rel}` at {x} is not an exact finite set")));
        }
        let y =
            (0..).find(|v| *v != x && !img.elems.contains(v) && !used_y.contains(v)).expect("a finite set leaves room");
        used_y.insert(y);
        pairs.push((x, y));
    }
    drop(env);
    maps.insert(THETA.into(), finite_perm(&[])?);
    let phi = if pairs.is_empty() { finite_perm(&[(0, 1), (1, 0)])? } else { finite_perm(&pairs)? };
    maps.insert(PHI.into(), phi);
    seal(RefutationCertificate {
        target: Target::LeftCong,
        depth: k,
        window: opts.window,
        generators: names,
        constructed: vec![THETA.into(), PHI.into()],
        maps,
        proof: Proof::LeftCong { pairs },
        notes: vec![],
        checked: vec![],
    })
}
