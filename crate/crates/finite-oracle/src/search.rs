//! Least diameters over generating sets, and the executable forms of the
//! zero and ideal bounds.

use serde::{Deserialize, Serialize};

use crate::cong::{diameter, is_universal, Diameter, Side};
use crate::error::{OResult, OracleError};
use crate::semigroup::FiniteSemigroup;

/// Largest semigroup searched exhaustively.
pub const EXHAUSTIVE_GUARD: usize = 10;

/// Largest semigroup for the search over subsets `V` with pairs `V × V`.
pub const SUBSET_GUARD: usize = 14;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchResult {
    pub pairs: Vec<(usize, usize)>,
    pub diameter: Diameter,
    /// Every pair set up to `max_pairs` was examined.
    pub exact: bool,
    pub max_pairs: usize,
    pub explored: usize,
}

fn all_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect()
}

fn floor(s: &FiniteSemigroup) -> Diameter {
    Diameter::Finite(u32::from(s.len() > 1))
}

struct Exhaustive<'a> {
    s: &'a FiniteSemigroup,
    side: Side,
    cands: Vec<(usize, usize)>,
    best: Option<(Diameter, Vec<(usize, usize)>)>,
    explored: usize,
}

impl Exhaustive<'_> {
    fn visit(&mut self, chosen: &mut Vec<(usize, usize)>, from: usize, left: usize) {
        if self.best.as_ref().is_some_and(|b| b.0 == floor(self.s)) {
            return;
        }
        self.explored += 1;
        let d = diameter(self.s, chosen, self.side);
        if self.best.as_ref().is_none_or(|b| d < b.0) {
            self.best = Some((d, chosen.clone()));
        }
        if left == 0 {
            return;
        }
        for k in from..self.cands.len() {
            chosen.push(self.cands[k]);
            self.visit(chosen, k + 1, left - 1);
            chosen.pop();
        }
    }
}

/// The least `D(U, S)` over sets `U` of at most `max_pairs` unordered pairs
/// of distinct elements, smaller sets first. Beyond [`EXHAUSTIVE_GUARD`]
/// elements a beam of the given width is used instead, and the result is
/// only an upper bound.
pub fn search_min_diameter(
    s: &FiniteSemigroup,
    side: Side,
    max_pairs: usize,
    beam: Option<usize>,
) -> OResult<SearchResult> {
    if s.len() <= EXHAUSTIVE_GUARD {
        let cands = all_pairs(s.len());
        let mut ex = Exhaustive { s, side, cands, best: None, explored: 0 };
        for size in 0..=max_pairs {
            ex.visit(&mut Vec::new(), 0, size);
        }
        let (diameter, pairs) = ex.best.expect("empty set visited");
        return Ok(SearchResult { pairs, diameter, exact: true, max_pairs, explored: ex.explored });
    }
    let Some(width) = beam else {
        return Err(OracleError::GuardExceeded { size: s.len(), guard: EXHAUSTIVE_GUARD });
    };
    let cands = all_pairs(s.len());
    let score = |u: &[(usize, usize)]| {
        let d = crate::cong::distances(s, u, side);
        let unrelated = d.iter().flatten().filter(|x| x.is_none()).count();
        let total: u64 = d.iter().flatten().flatten().map(|&x| u64::from(x)).sum();
        (crate::cong::diameter_of(&d), unrelated, total)
    };
    let mut frontier: Vec<(usize, Vec<(usize, usize)>)> = vec![(0, Vec::new())];
    let mut best = (score(&[]).0, Vec::new());
    let mut explored = 1;
    for _ in 0..max_pairs {
        let mut next = Vec::new();
        for (from, u) in &frontier {
            for (k, &p) in cands.iter().enumerate().skip(*from) {
                let mut v = u.clone();
                v.push(p);
                let sc = score(&v);
                explored += 1;
                if sc.0 < best.0 {
                    best = (sc.0, v.clone());
                }
                next.push((sc, k + 1, v));
            }
        }
        next.sort_by_key(|a| a.0);
        next.truncate(width);
        frontier = next.into_iter().map(|(_, k, v)| (k, v)).collect();
    }
    Ok(SearchResult { pairs: best.1, diameter: best.0, exact: false, max_pairs, explored })
}

/// The least `D(V × V, S)` over subsets `V`, which equals the diameter of
/// `S` on the given side.
pub fn exact_diameter(s: &FiniteSemigroup, side: Side) -> OResult<(Vec<usize>, Diameter)> {
    let n = s.len();
    if n > SUBSET_GUARD {
        return Err(OracleError::GuardExceeded { size: n, guard: SUBSET_GUARD });
    }
    let mut best: Option<(Diameter, Vec<usize>)> = None;
    let mut masks: Vec<u32> = (0..1u32 << n).collect();
    masks.sort_by_key(|m| m.count_ones());
    for m in masks {
        let v: Vec<usize> = (0..n).filter(|&i| m >> i & 1 == 1).collect();
        let d = diameter(s, &square(&v), side);
        if best.as_ref().is_none_or(|b| d < b.0) {
            best = Some((d, v));
            if d == floor(s) {
                break;
            }
        }
    }
    let (d, v) = best.expect("at least the empty set");
    Ok((v, d))
}

/// Unordered pairs of distinct elements of `v`.
pub fn square(v: &[usize]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (i, &a) in v.iter().enumerate() {
        for &b in &v[i + 1..] {
            out.push((a, b));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroCheck {
    pub side: Side,
    pub zero: usize,
    pub universal: bool,
    pub diameter: Diameter,
}

impl ZeroCheck {
    pub fn holds(&self) -> bool {
        self.universal && self.diameter <= Diameter::Finite(2)
    }
}

/// For a monoid: every left zero `z` gives `U = {(1, z)}` on the right, and
/// every right zero gives the same on the left. Empty for non-monoids.
pub fn zero_checks(s: &FiniteSemigroup) -> Vec<ZeroCheck> {
    let Some(one) = s.identity else { return Vec::new() };
    let mut out = Vec::new();
    for (side, zeros) in [(Side::Right, s.left_zeros()), (Side::Left, s.right_zeros())] {
        for z in zeros {
            let u = [(one, z)];
            out.push(ZeroCheck {
                side,
                zero: z,
                universal: is_universal(s, &u, side),
                diameter: diameter(s, &u, side),
            });
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealCheck {
    pub side: Side,
    pub ideal: Vec<usize>,
    /// The generating set of the ideal, as elements of `S`.
    pub ideal_pairs: Vec<(usize, usize)>,
    pub ideal_diameter: Diameter,
    /// `V = U ∪ {1}` as elements of `S`.
    pub lifted: Vec<usize>,
    pub lifted_diameter: Diameter,
    pub exact_ideal: Diameter,
    pub exact_monoid: Diameter,
}

impl IdealCheck {
    /// `D(V, S) ≤ D(U, I) + 2` and the same between the exact values.
    pub fn holds(&self) -> bool {
        let plus2 = |d: Diameter| match d {
            Diameter::Finite(x) => Diameter::Finite(x + 2),
            Diameter::Infinite => Diameter::Infinite,
        };
        self.lifted_diameter <= plus2(self.ideal_diameter) && self.exact_monoid <= plus2(self.exact_ideal)
    }
}

/// Lifts a generating set of a one-sided ideal `I` of the monoid `S` to
/// `S` by adding the identity. `ideal_pairs` index into `ideal`; when
/// `None`, the smallest set found by [`search_min_diameter`] with
/// `max_pairs` is used.
pub fn ideal_check(
    s: &FiniteSemigroup,
    ideal: &[usize],
    side: Side,
    ideal_pairs: Option<&[(usize, usize)]>,
    max_pairs: usize,
) -> OResult<IdealCheck> {
    let Some(one) = s.identity else {
        return Err(OracleError::Invalid("not a monoid".into()));
    };
    let is_ideal = match side {
        Side::Right => s.is_right_ideal(ideal),
        Side::Left => s.is_left_ideal(ideal),
    };
    if !is_ideal {
        return Err(OracleError::Invalid(format!("not a {side:?} ideal")));
    }
    let sub = s.restrict(ideal).expect("ideals are closed");
    let local: Vec<(usize, usize)> = match ideal_pairs {
        Some(u) => u.to_vec(),
        None => search_min_diameter(&sub, side, max_pairs, Some(8))?.pairs,
    };
    let ideal_diameter = diameter(&sub, &local, side);
    let mut lifted: Vec<usize> = local.iter().flat_map(|&(a, b)| [ideal[a], ideal[b]]).collect();
    if lifted.is_empty() {
        lifted.push(ideal[0]);
    }
    lifted.push(one);
    lifted.sort_unstable();
    lifted.dedup();
    let lifted_diameter = diameter(s, &square(&lifted), side);
    Ok(IdealCheck {
        side,
        ideal: ideal.to_vec(),
        ideal_pairs: local.iter().map(|&(a, b)| (ideal[a], ideal[b])).collect(),
        ideal_diameter,
        lifted,
        lifted_diameter,
        exact_ideal: exact_diameter(&sub, side)?.1,
        exact_monoid: exact_diameter(s, side)?.1,
    })
}
