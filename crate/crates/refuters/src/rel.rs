//! Words over maps and their inverses, read as binary relations on ℕ, and
//! their evaluation at a point.
//!
//! A word `a₁ b₁⁻¹ … aₖ bₖ⁻¹` sends `x` to every `y` reachable by applying
//! `a₁`, then taking a `b₁`-preimage, and so on. Preimages are exact when the
//! map carries a retract with an injectivity certificate or a preimage bound;
//! otherwise only the part below the window is seen.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use natmap_core::{Capability, FiberForm, Fibers, MapExpr, MapFn, NatError};
use serde::{Deserialize, Serialize};

use crate::error::{RResult, RefuteError};

/// Scan cap for kernel classes under a preimage bound.
const FIBER_CAP: u64 = 1 << 24;

/// A named map with its certified facts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub map: MapExpr,
    pub cap: Capability,
}

impl Entry {
    pub fn new(map: MapExpr, cap: Capability) -> Self {
        Entry { map, cap }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Letter {
    pub map: String,
    pub inv: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RelTerm {
    pub letters: Vec<Letter>,
}

impl RelTerm {
    pub fn new(letters: impl IntoIterator<Item = (String, bool)>) -> Self {
        RelTerm { letters: letters.into_iter().map(|(map, inv)| Letter { map, inv }).collect() }
    }

    /// The converse relation.
    pub fn converse(&self) -> RelTerm {
        RelTerm { letters: self.letters.iter().rev().map(|l| Letter { map: l.map.clone(), inv: !l.inv }).collect() }
    }

    /// Number of `(a, b)` pairs.
    pub fn pairs(&self) -> usize {
        self.letters.len() / 2
    }
}

impl fmt::Display for RelTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.letters.iter().map(|l| if l.inv { format!("{}⁻¹", l.map) } else { l.map.clone() }).collect();
        write!(f, "{}", parts.join(" "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flavor {
    /// `a₁ b₁⁻¹ … aₖ bₖ⁻¹`
    Sigma,
    /// `a₁⁻¹ b₁ … aₖ⁻¹ bₖ`
    SigmaPrime,
}

/// Words of `1..=max_k` pairs over `names`, shortest first, then
/// lexicographically in the index sequence.
pub struct SigmaEnum {
    names: Vec<String>,
    flavor: Flavor,
    max_k: usize,
    idx: Vec<usize>,
    done: bool,
}

impl Iterator for SigmaEnum {
    type Item = RelTerm;

    fn next(&mut self) -> Option<RelTerm> {
        if self.done || self.names.is_empty() {
            return None;
        }
        let first_inv = self.flavor == Flavor::SigmaPrime;
        let term =
            RelTerm::new(self.idx.iter().enumerate().map(|(i, &j)| (self.names[j].clone(), (i % 2 == 0) == first_inv)));
        // odometer step
        let n = self.names.len();
        let mut pos = self.idx.len();
        loop {
            if pos == 0 {
                let k = self.idx.len() / 2 + 1;
                if k > self.max_k {
                    self.done = true;
                } else {
                    self.idx = vec![0; 2 * k];
                }
                break;
            }
            pos -= 1;
            self.idx[pos] += 1;
            if self.idx[pos] < n {
                break;
            }
            self.idx[pos] = 0;
        }
        Some(term)
    }
}

fn sigma_enum_of(names: &[String], max_k: usize, flavor: Flavor) -> SigmaEnum {
    SigmaEnum { names: names.to_vec(), flavor, max_k, idx: vec![0, 0], done: max_k == 0 }
}

pub fn sigma_enum(names: &[String], max_k: usize) -> SigmaEnum {
    sigma_enum_of(names, max_k, Flavor::Sigma)
}

pub fn sigma_prime_enum(names: &[String], max_k: usize) -> SigmaEnum {
    sigma_enum_of(names, max_k, Flavor::SigmaPrime)
}

/// `Σ_{k ≤ max_k} n^{2k}`.
pub fn sigma_count(n: usize, max_k: usize) -> u64 {
    (1..=max_k as u32).map(|k| (n as u64).pow(2 * k)).sum()
}

/// A set of points, complete or cut at the window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSet {
    pub elems: BTreeSet<u64>,
    pub exact: bool,
}

/// Compiled maps and class oracles for a table of entries.
pub struct Env<'a> {
    pub maps: &'a BTreeMap<String, Entry>,
    pub window: u64,
    compiled: RefCell<HashMap<String, MapFn>>,
    retracts: RefCell<HashMap<String, MapFn>>,
    fibers: RefCell<HashMap<String, Arc<Fibers>>>,
}

impl<'a> Env<'a> {
    pub fn new(maps: &'a BTreeMap<String, Entry>, window: u64) -> Self {
        Env { maps, window, compiled: RefCell::default(), retracts: RefCell::default(), fibers: RefCell::default() }
    }

    pub fn entry(&self, name: &str) -> RResult<&'a Entry> {
        self.maps.get(name).ok_or_else(|| RefuteError::Malformed(format!("unknown map `{name}`")))
    }

    pub fn f(&self, name: &str) -> RResult<MapFn> {
        if let Some(f) = self.compiled.borrow().get(name) {
            return Ok(f.clone());
        }
        let f = self.entry(name)?.map.compile()?;
        self.compiled.borrow_mut().insert(name.to_string(), f.clone());
        Ok(f)
    }

    pub fn apply(&self, name: &str, x: u64) -> RResult<u64> {
        Ok(self.f(name)?(x)?)
    }

    fn retract(&self, name: &str) -> RResult<Option<MapFn>> {
        let e = self.entry(name)?;
        let Some(r) = (if e.cap.cert_injective { e.cap.retract.as_ref() } else { None }) else {
            return Ok(None);
        };
        if let Some(f) = self.retracts.borrow().get(name) {
            return Ok(Some(f.clone()));
        }
        let f = r.compile()?;
        self.retracts.borrow_mut().insert(name.to_string(), f.clone());
        Ok(Some(f))
    }

    fn fibers(&self, name: &str) -> RResult<Arc<Fibers>> {
        if let Some(f) = self.fibers.borrow().get(name) {
            return Ok(f.clone());
        }
        let e = self.entry(name)?;
        let form = e.cap.fibers.unwrap_or(FiberForm::Scan);
        let f = Fibers::shared(&e.map, form, e.cap.preimage_bound, FIBER_CAP)?;
        self.fibers.borrow_mut().insert(name.to_string(), f.clone());
        Ok(f)
    }

    /// Whether `y` has a preimage, decided from the capability when possible.
    pub fn in_image(&self, name: &str, y: u64) -> RResult<Option<bool>> {
        if let Some(r) = self.retract(name)? {
            let x = match r(y) {
                Ok(x) => x,
                Err(NatError::Exhausted { .. }) => return Ok(Some(false)),
                Err(e) => return Err(e.into()),
            };
            return Ok(Some(self.apply(name, x)? == y));
        }
        let p = self.preimage(name, y)?;
        Ok(if !p.elems.is_empty() {
            Some(true)
        } else if p.exact {
            Some(false)
        } else {
            None
        })
    }

    /// `y` under the inverse of `name`.
    pub fn preimage(&self, name: &str, y: u64) -> RResult<PointSet> {
        let e = self.entry(name)?;
        if let Some(r) = self.retract(name)? {
            let mut elems = BTreeSet::new();
            match r(y) {
                Ok(x) if self.apply(name, x)? == y => {
                    elems.insert(x);
                }
                Ok(_) | Err(NatError::Exhausted { .. }) => {}
                Err(err) => return Err(err.into()),
            }
            return Ok(PointSet { elems, exact: true });
        }
        if e.cap.preimage_bound.is_some() {
            let elems = self.fibers(name)?.all(y)?.into_iter().collect();
            return Ok(PointSet { elems, exact: true });
        }
        let mut elems = BTreeSet::new();
        match e.cap.fibers {
            Some(FiberForm::PackFirst) | Some(FiberForm::PackSecond) => {
                let fib = self.fibers(name)?;
                for i in 0.. {
                    match fib.nth(y, i)? {
                        Some(x) if x < self.window => {
                            elems.insert(x);
                        }
                        _ => break,
                    }
                }
            }
            _ => {
                let f = self.f(name)?;
                for x in 0..self.window {
                    if f(x)? == y {
                        elems.insert(x);
                    }
                }
            }
        }
        Ok(PointSet { elems, exact: false })
    }

    fn step(&self, l: &Letter, xs: &BTreeSet<u64>) -> RResult<PointSet> {
        let mut out = PointSet { elems: BTreeSet::new(), exact: true };
        for &x in xs {
            if l.inv {
                let p = self.preimage(&l.map, x)?;
                out.exact &= p.exact;
                out.elems.extend(p.elems);
            } else {
                out.elems.insert(self.apply(&l.map, x)?);
            }
        }
        Ok(out)
    }

    /// `x·σ`.
    pub fn image(&self, rel: &RelTerm, x: u64) -> RResult<PointSet> {
        let mut cur = PointSet { elems: BTreeSet::from([x]), exact: true };
        for l in &rel.letters {
            let next = self.step(l, &cur.elems)?;
            cur = PointSet { elems: next.elems, exact: cur.exact && next.exact };
        }
        Ok(cur)
    }

    /// A chain `x = p₀, p₁, …, pₘ = y` witnessing `y ∈ x·σ`.
    pub fn find_path(&self, rel: &RelTerm, x: u64, y: u64) -> RResult<Option<Vec<u64>>> {
        let mut layers: Vec<BTreeMap<u64, u64>> = vec![BTreeMap::from([(x, x)])];
        for l in &rel.letters {
            let mut next = BTreeMap::new();
            for &p in layers.last().unwrap().keys() {
                let targets =
                    if l.inv { self.preimage(&l.map, p)?.elems } else { BTreeSet::from([self.apply(&l.map, p)?]) };
                for t in targets {
                    next.entry(t).or_insert(p);
                }
            }
            layers.push(next);
        }
        if !layers.last().unwrap().contains_key(&y) {
            return Ok(None);
        }
        let mut path = vec![y];
        let mut cur = y;
        for layer in layers.iter().skip(1).rev() {
            cur = layer[&cur];
            path.push(cur);
        }
        path.reverse();
        Ok(Some(path))
    }

    /// Check a chain letter by letter.
    pub fn path_valid(&self, rel: &RelTerm, path: &[u64]) -> RResult<bool> {
        if path.len() != rel.letters.len() + 1 {
            return Ok(false);
        }
        for (l, w) in rel.letters.iter().zip(path.windows(2)) {
            let ok = if l.inv { self.apply(&l.map, w[1])? == w[0] } else { self.apply(&l.map, w[0])? == w[1] };
            if !ok {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Whether `y ∈ x·σ`, with `true` in the second slot when the answer does
    /// not depend on the window. Tries the converse direction when the forward
    /// evaluation is cut.
    pub fn related(&self, rel: &RelTerm, x: u64, y: u64) -> RResult<(bool, bool)> {
        let fwd = self.image(rel, x)?;
        if fwd.elems.contains(&y) {
            return Ok((true, true));
        }
        if fwd.exact {
            return Ok((false, true));
        }
        let back = self.image(&rel.converse(), y)?;
        if back.elems.contains(&x) {
            return Ok((true, true));
        }
        Ok((false, back.exact))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use natmap_core::{alpha_hat_capability, beta_hat_capability, canonical_alpha_hat, canonical_beta_hat};

    #[test]
    fn enumeration_order() {
        let names = vec!["a".to_string(), "b".to_string()];
        let terms: Vec<String> = sigma_enum(&names, 1).map(|t| t.to_string()).collect();
        assert_eq!(terms, vec!["a a⁻¹", "a b⁻¹", "b a⁻¹", "b b⁻¹"]);
        let primes: Vec<String> = sigma_prime_enum(&names[..1], 2).map(|t| t.to_string()).collect();
        assert_eq!(primes, vec!["a⁻¹ a", "a⁻¹ a a⁻¹ a"]);
    }

    #[test]
    fn hat_term_is_empty() {
        let maps = BTreeMap::from([
            ("a".to_string(), Entry::new(canonical_alpha_hat(), alpha_hat_capability())),
            ("b".to_string(), Entry::new(canonical_beta_hat(), beta_hat_capability())),
        ]);
        let env = Env::new(&maps, 64);
        let t = RelTerm::new([("a".to_string(), false), ("b".to_string(), true)]);
        for x in 0..20 {
            let s = env.image(&t, x).unwrap();
            assert!(s.exact && s.elems.is_empty());
        }
    }
}
