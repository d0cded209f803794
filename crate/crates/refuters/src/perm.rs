//! Finite patches of the identity: the permutations and one-point collapses
//! the refuters emit as their constructed elements.

use std::collections::BTreeSet;

use natmap_core::{Capability, Cardinality, FiberClaim, LinearBound, MapExpr, SetExpr};

use crate::error::{RResult, RefuteError};
use crate::rel::Entry;

/// The permutation sending each `d` to its `r`, the leftover targets back
/// onto the leftover sources in increasing order, and fixing everything else.
pub fn finite_perm(pairs: &[(u64, u64)]) -> RResult<Entry> {
    let dom: BTreeSet<u64> = pairs.iter().map(|p| p.0).collect();
    let ran: BTreeSet<u64> = pairs.iter().map(|p| p.1).collect();
    if dom.len() != pairs.len() || ran.len() != pairs.len() {
        return Err(RefuteError::Precondition("partial bijection repeats a point".into()));
    }
    let mut fwd: Vec<(u64, u64)> = pairs.to_vec();
    let spare_src: Vec<u64> = ran.difference(&dom).copied().collect();
    let spare_dst: Vec<u64> = dom.difference(&ran).copied().collect();
    fwd.extend(spare_src.into_iter().zip(spare_dst));
    fwd.sort_unstable();
    let mut back: Vec<(u64, u64)> = fwd.iter().map(|&(a, b)| (b, a)).collect();
    back.sort_unstable();
    let top = fwd.iter().map(|p| p.0.max(p.1)).max().unwrap_or(0);
    let cap = Capability {
        image: Some(SetExpr::All),
        complement: Some(Cardinality::Finite { elems: vec![] }),
        retract: Some(MapExpr::patch(MapExpr::Id, back)),
        preimage: Some(FiberClaim::AllFinite),
        preimage_bound: Some(LinearBound { a: 1, b: top + 1 }),
        cert_injective: true,
        cert_surjective: true,
        cert_finite_to_one: true,
        ..Default::default()
    };
    Ok(Entry::new(MapExpr::patch(MapExpr::Id, fwd), cap))
}

/// Identity except `n+1 ↦ n`: fixes everything below `n+1` and is not injective.
pub fn collapse(n: u64) -> Entry {
    let cap = Capability {
        image: Some(SetExpr::finite([n + 1]).complement()),
        complement: Some(Cardinality::Finite { elems: vec![n + 1] }),
        preimage: Some(FiberClaim::AllFinite),
        preimage_bound: Some(LinearBound { a: 1, b: 2 }),
        collision: Some((n, n + 1)),
        cert_finite_to_one: true,
        ..Default::default()
    };
    Entry::new(MapExpr::patch(MapExpr::Id, [(n + 1, n)]), cap)
}

/// Identity except `n ↦ n+1`: misses `n`.
pub fn skip(n: u64) -> Entry {
    let cap = Capability {
        image: Some(SetExpr::finite([n]).complement()),
        complement: Some(Cardinality::Finite { elems: vec![n] }),
        preimage: Some(FiberClaim::AllFinite),
        preimage_bound: Some(LinearBound { a: 1, b: 1 }),
        collision: Some((n, n + 1)),
        cert_finite_to_one: true,
        ..Default::default()
    };
    Entry::new(MapExpr::patch(MapExpr::Id, [(n, n + 1)]), cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use natmap_core::check_capabilities;

    #[test]
    fn perm_is_a_bijection() {
        let e = finite_perm(&[(0, 10), (3, 11), (10, 0)]).unwrap();
        let f = e.map.compile().unwrap();
        let r = e.cap.retract.clone().unwrap().compile().unwrap();
        let mut seen = BTreeSet::new();
        for x in 0..64 {
            let y = f(x).unwrap();
            assert!(seen.insert(y));
            assert_eq!(r(y).unwrap(), x);
        }
        assert_eq!(f(0).unwrap(), 10);
        assert_eq!(f(3).unwrap(), 11);
        assert_eq!(f(11).unwrap(), 3);
        assert!(check_capabilities(&e.map, &e.cap, 64).unwrap().passed());
    }

    #[test]
    fn patches_carry_true_capabilities() {
        for e in [collapse(5), skip(5)] {
            assert!(check_capabilities(&e.map, &e.cap, 64).unwrap().passed());
        }
        assert!(finite_perm(&[(0, 1), (2, 1)]).is_err());
    }
}
