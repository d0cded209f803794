//! One-sided ideals that no finite set generates: a single constructed
//! element escapes `US¹` (or `S¹U`).

use std::collections::BTreeMap;

use semigroup_classes::find_collision;

use crate::cert::{gen_names, seal, Proof, RefutationCertificate, Target, THETA};
use crate::error::{RResult, RefuteError};
use crate::perm::{collapse, skip};
use crate::rel::Entry;
use crate::RefuteOpts;

pub(crate) fn table(gens: &[Entry]) -> (Vec<String>, BTreeMap<String, Entry>) {
    let names = gen_names(gens.len());
    let maps = names.iter().cloned().zip(gens.iter().cloned()).collect();
    (names, maps)
}

/// A kernel pair of `e`, from its capability or a window search.
pub(crate) fn kernel_pair(e: &Entry, window: u64) -> RResult<Option<(u64, u64)>> {
    if let Some((a, b)) = e.cap.collision {
        let f = e.map.compile()?;
        if a != b && f(a)? == f(b)? {
            return Ok(Some((a, b)));
        }
    }
    Ok(find_collision(&e.map, window))
}

pub fn refute_right_ideal_fg(gens: &[Entry], opts: &RefuteOpts) -> RResult<RefutationCertificate> {
    let (names, mut maps) = table(gens);
    let mut pairs = Vec::new();
    for (name, e) in names.iter().zip(gens) {
        let p = kernel_pair(e, opts.window)?
            .ok_or_else(|| RefuteError::Precondition(format!("`{name}` has no kernel pair; it may be injective")))?;
        pairs.push(p);
    }
    let top = pairs.iter().map(|p| p.0.max(p.1)).max().unwrap_or(0);
    let fresh = opts.block.max(top + 2);
    maps.insert(THETA.into(), collapse(fresh));
    seal(RefutationCertificate {
        target: Target::RightIdeal,
        depth: 0,
        window: opts.window,
        generators: names,
        constructed: vec![THETA.into()],
        maps,
        proof: Proof::RightIdeal { pairs, fresh },
        notes: vec![],
        checked: vec![],
    })
}

/// A point outside `im e`, read from the capability.
pub(crate) fn missing_point(e: &Entry) -> RResult<Option<u64>> {
    match e.cap.complement_enum(natmap_core::DEFAULT_SCAN_CAP)? {
        Some(c) => Ok(c.nth(0)?),
        None => Ok(None),
    }
}

pub fn refute_left_ideal_fg(gens: &[Entry], opts: &RefuteOpts) -> RResult<RefutationCertificate> {
    let (names, mut maps) = table(gens);
    let mut missing = Vec::new();
    for (name, e) in names.iter().zip(gens) {
        let m = missing_point(e)?
            .ok_or_else(|| RefuteError::Precondition(format!("`{name}` has no certified missing point")))?;
        missing.push(m);
    }
    let top = missing.iter().copied().max().unwrap_or(0);
    let fresh = opts.block.max(top + 1);
    maps.insert(THETA.into(), skip(fresh));
    seal(RefutationCertificate {
        target: Target::LeftIdeal,
        depth: 0,
        window: opts.window,
        generators: names,
        constructed: vec![THETA.into()],
        maps,
        proof: Proof::LeftIdeal { missing, fresh },
        notes: vec![],
        checked: vec![],
    })
}
