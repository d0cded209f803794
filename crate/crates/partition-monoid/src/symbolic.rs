//! Partitions of `ℕ ∪ ℕ′` given by block oracles with finite blocks, and
//! the pair `(α, β)` built on the split of ℕ into residues mod 5.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{PResult, PartitionError};
use crate::finite::{random_partition, random_pb, FinitePartition};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Vtx {
    Top(u64),
    Bot(u64),
}

impl Vtx {
    pub fn index(self) -> u64 {
        match self {
            Vtx::Top(x) | Vtx::Bot(x) => x,
        }
    }

    pub fn flip(self) -> Vtx {
        match self {
            Vtx::Top(x) => Vtx::Bot(x),
            Vtx::Bot(x) => Vtx::Top(x),
        }
    }
}

impl fmt::Display for Vtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Vtx::Top(x) => write!(f, "{x}"),
            Vtx::Bot(x) => write!(f, "{x}'"),
        }
    }
}

/// `a_x = 5x`, `b_x = 5x+1`, `c_x = 5x+2`, `d_x = 5x+3`, `e_x = 5x+4`.
pub fn five_split() -> [fn(u64) -> u64; 5] {
    [|x| 5 * x, |x| 5 * x + 1, |x| 5 * x + 2, |x| 5 * x + 3, |x| 5 * x + 4]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SymbolicPartition {
    Identity,
    /// `head` on the first `head.n` points, then `pattern` repeated.
    Tiled {
        head: Option<FinitePartition>,
        pattern: FinitePartition,
    },
    Alpha,
    Beta,
    Gamma {
        theta: Box<SymbolicPartition>,
        phi: Box<SymbolicPartition>,
    },
    Star {
        inner: Box<SymbolicPartition>,
    },
}

fn from_finite(p: &FinitePartition, offset: u64, v: Vtx) -> Vec<Vtx> {
    let local = (v.index() - offset) as i64 + 1;
    let key = if matches!(v, Vtx::Top(_)) { local } else { -local };
    p.block_of(key)
        .expect("covering partition")
        .iter()
        .map(|&w| if w > 0 { Vtx::Top(offset + w as u64 - 1) } else { Vtx::Bot(offset + (-w) as u64 - 1) })
        .collect()
}

fn max_block(p: &FinitePartition) -> usize {
    p.blocks().iter().map(Vec::len).max().unwrap_or(1)
}

fn sorted(mut b: Vec<Vtx>) -> Vec<Vtx> {
    b.sort();
    b.dedup();
    b
}

impl SymbolicPartition {
    pub fn gamma(theta: SymbolicPartition, phi: SymbolicPartition) -> Self {
        SymbolicPartition::Gamma { theta: Box::new(theta), phi: Box::new(phi) }
    }

    pub fn tiled(head: Option<FinitePartition>, pattern: FinitePartition) -> Self {
        SymbolicPartition::Tiled { head, pattern }
    }

    /// The involution. Starring twice gives back the same value.
    pub fn star(&self) -> Self {
        match self {
            SymbolicPartition::Identity => SymbolicPartition::Identity,
            SymbolicPartition::Star { inner } => (**inner).clone(),
            other => SymbolicPartition::Star { inner: Box::new(other.clone()) },
        }
    }

    /// The block containing `v`, sorted.
    pub fn block(&self, v: Vtx) -> Vec<Vtx> {
        let [a, b, c, d, e] = five_split();
        let b = match self {
            SymbolicPartition::Identity => vec![Vtx::Top(v.index()), Vtx::Bot(v.index())],
            SymbolicPartition::Tiled { head, pattern } => {
                let h = head.as_ref().map_or(0, |p| p.n() as u64);
                match head {
                    Some(p) if v.index() < h => from_finite(p, 0, v),
                    _ => {
                        let k = pattern.n() as u64;
                        let offset = h + (v.index() - h) / k * k;
                        from_finite(pattern, offset, v)
                    }
                }
            }
            SymbolicPartition::Alpha => match v {
                Vtx::Top(x) => vec![v, Vtx::Bot(a(x))],
                Vtx::Bot(y) => match (y % 5, y / 5) {
                    (0, x) => vec![Vtx::Top(x), v],
                    (1, x) | (2, x) => vec![Vtx::Bot(b(x)), Vtx::Bot(c(x))],
                    _ => vec![v],
                },
            },
            SymbolicPartition::Beta => match v {
                Vtx::Top(x) => vec![v, Vtx::Bot(e(x))],
                Vtx::Bot(y) => match (y % 5, y / 5) {
                    (4, x) => vec![Vtx::Top(x), v],
                    (2, x) | (3, x) => vec![Vtx::Bot(c(x)), Vtx::Bot(d(x))],
                    _ => vec![v],
                },
            },
            SymbolicPartition::Gamma { theta, phi } => {
                let lambda = |w: Vtx| match w {
                    Vtx::Top(u) => Vtx::Top(a(u)),
                    Vtx::Bot(u) => Vtx::Top(b(u)),
                };
                let rho = |w: Vtx| match w {
                    Vtx::Top(u) => Vtx::Top(e(u)),
                    Vtx::Bot(u) => Vtx::Top(d(u)),
                };
                match v {
                    Vtx::Bot(x) => vec![Vtx::Top(c(x)), v],
                    Vtx::Top(y) => match (y % 5, y / 5) {
                        (0, x) => theta.block(Vtx::Top(x)).into_iter().map(lambda).collect(),
                        (1, x) => theta.block(Vtx::Bot(x)).into_iter().map(lambda).collect(),
                        (2, x) => vec![v, Vtx::Bot(x)],
                        (3, x) => phi.block(Vtx::Bot(x)).into_iter().map(rho).collect(),
                        (_, x) => phi.block(Vtx::Top(x)).into_iter().map(rho).collect(),
                    },
                }
            }
            SymbolicPartition::Star { inner } => inner.block(v.flip()).into_iter().map(Vtx::flip).collect(),
        };
        sorted(b)
    }

    /// An upper bound on block sizes.
    pub fn size_bound(&self) -> usize {
        match self {
            SymbolicPartition::Identity | SymbolicPartition::Alpha | SymbolicPartition::Beta => 2,
            SymbolicPartition::Tiled { head, pattern } => max_block(pattern).max(head.as_ref().map_or(1, max_block)),
            SymbolicPartition::Gamma { theta, phi } => theta.size_bound().max(phi.size_bound()).max(2),
            SymbolicPartition::Star { inner } => inner.size_bound(),
        }
    }

    pub fn is_pb(&self) -> bool {
        self.size_bound() <= 2
    }

    /// Checks on `[0, window)` that every vertex lies in its own block and
    /// that every member of a block reports the same block.
    pub fn check_consistency(&self, window: u64) -> PResult<()> {
        for x in 0..window {
            for v in [Vtx::Top(x), Vtx::Bot(x)] {
                let b = self.block(v);
                if !b.contains(&v) {
                    return Err(PartitionError::Invalid(format!("{v} missing from its own block")));
                }
                if b.len() > self.size_bound() {
                    return Err(PartitionError::Invalid(format!("block of {v} exceeds the declared bound")));
                }
                for &w in &b {
                    if self.block(w) != b {
                        return Err(PartitionError::Invalid(format!("{v} and {w} disagree on their block")));
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub vertex: Vtx,
    pub expected: Vec<Vtx>,
    pub found: Vec<Vtx>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductReport {
    pub window: u64,
    pub checked: usize,
    pub mismatches: Vec<Mismatch>,
}

impl ProductReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Layer {
    Upper(u64),
    Middle(u64),
    Lower(u64),
}

/// The block of `v` in `l·r`, by search in the product graph. Fails when
/// the component grows past `cap` vertices.
fn product_block(l: &SymbolicPartition, r: &SymbolicPartition, v: Vtx, cap: usize) -> PResult<Vec<Vtx>> {
    let start = match v {
        Vtx::Top(x) => Layer::Upper(x),
        Vtx::Bot(x) => Layer::Lower(x),
    };
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(node) = queue.pop_front() {
        let mut next = Vec::new();
        match node {
            Layer::Upper(x) => next.extend(l.block(Vtx::Top(x)).into_iter().map(lower_of_l)),
            Layer::Middle(x) => {
                next.extend(l.block(Vtx::Bot(x)).into_iter().map(lower_of_l));
                next.extend(r.block(Vtx::Top(x)).into_iter().map(upper_of_r));
            }
            Layer::Lower(x) => next.extend(r.block(Vtx::Bot(x)).into_iter().map(upper_of_r)),
        }
        for w in next {
            if seen.insert(w) {
                if seen.len() > cap {
                    return Err(PartitionError::CapExceeded { vertex: v.to_string(), cap });
                }
                queue.push_back(w);
            }
        }
    }
    Ok(seen
        .into_iter()
        .filter_map(|n| match n {
            Layer::Upper(x) => Some(Vtx::Top(x)),
            Layer::Lower(x) => Some(Vtx::Bot(x)),
            Layer::Middle(_) => None,
        })
        .collect())
}

fn lower_of_l(w: Vtx) -> Layer {
    match w {
        Vtx::Top(x) => Layer::Upper(x),
        Vtx::Bot(x) => Layer::Middle(x),
    }
}

fn upper_of_r(w: Vtx) -> Layer {
    match w {
        Vtx::Top(x) => Layer::Middle(x),
        Vtx::Bot(x) => Layer::Lower(x),
    }
}

/// Compares blocks of `l·r` with blocks of `target` for every vertex with
/// index below `window`. Without an explicit cap, each search may visit
/// three times the target block size plus four vertices.
pub fn verify_product(
    l: &SymbolicPartition,
    r: &SymbolicPartition,
    target: &SymbolicPartition,
    window: u64,
    cap: Option<usize>,
) -> PResult<ProductReport> {
    let mut report = ProductReport { window, checked: 0, mismatches: Vec::new() };
    for x in 0..window {
        for v in [Vtx::Top(x), Vtx::Bot(x)] {
            let expected = target.block(v);
            let found = product_block(l, r, v, cap.unwrap_or(3 * expected.len() + 4))?;
            report.checked += 1;
            if found != expected {
                report.mismatches.push(Mismatch { vertex: v, expected, found });
            }
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagonalReport {
    pub gamma: SymbolicPartition,
    /// `αγ` against `θ`, or `γ*α*` against `θ*` for the left transfer.
    pub alpha_gamma: ProductReport,
    /// `βγ` against `φ`, or `γ*β*` against `φ*` for the left transfer.
    pub beta_gamma: ProductReport,
}

impl DiagonalReport {
    pub fn passed(&self) -> bool {
        self.alpha_gamma.passed() && self.beta_gamma.passed()
    }
}

/// Builds `γ(θ, φ)` and checks `αγ = θ` and `βγ = φ` on the window.
pub fn verify_diagonal_witness(
    theta: &SymbolicPartition,
    phi: &SymbolicPartition,
    window: u64,
    cap: Option<usize>,
) -> PResult<DiagonalReport> {
    let gamma = SymbolicPartition::gamma(theta.clone(), phi.clone());
    let alpha_gamma = verify_product(&SymbolicPartition::Alpha, &gamma, theta, window, cap)?;
    let beta_gamma = verify_product(&SymbolicPartition::Beta, &gamma, phi, window, cap)?;
    Ok(DiagonalReport { gamma, alpha_gamma, beta_gamma })
}

/// The starred form: checks `γ*α* = θ*` and `γ*β* = φ*` on the window.
pub fn verify_left_transfer(
    theta: &SymbolicPartition,
    phi: &SymbolicPartition,
    window: u64,
    cap: Option<usize>,
) -> PResult<DiagonalReport> {
    let gamma = SymbolicPartition::gamma(theta.clone(), phi.clone());
    let gs = gamma.star();
    let alpha_gamma = verify_product(&gs, &SymbolicPartition::Alpha.star(), &theta.star(), window, cap)?;
    let beta_gamma = verify_product(&gs, &SymbolicPartition::Beta.star(), &phi.star(), window, cap)?;
    Ok(DiagonalReport { gamma, alpha_gamma, beta_gamma })
}

/// A random periodic partition with a random head, drawn from the partial
/// Brauer elements when `pb` is set.
pub fn random_tiled<R: Rng>(rng: &mut R, pb: bool) -> SymbolicPartition {
    let draw = |rng: &mut R, n: usize| if pb { random_pb(rng, n) } else { random_partition(rng, n) };
    let h = rng.gen_range(0..=4);
    let head = (h > 0).then(|| draw(rng, h));
    let k = rng.gen_range(1..=4);
    let pattern = draw(rng, k);
    SymbolicPartition::tiled(head, pattern)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_consistent() {
        let g = SymbolicPartition::gamma(SymbolicPartition::Identity, SymbolicPartition::Alpha);
        g.check_consistency(64).unwrap();
        SymbolicPartition::Alpha.check_consistency(64).unwrap();
        SymbolicPartition::Beta.check_consistency(64).unwrap();
    }

    #[test]
    fn cap_exceeded() {
        let err = verify_diagonal_witness(&SymbolicPartition::Identity, &SymbolicPartition::Identity, 4, Some(3));
        assert!(matches!(err, Err(PartitionError::CapExceeded { cap: 3, .. })));
    }
}
