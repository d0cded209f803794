//! One-sided congruences generated by pairs, and the distances they induce.
//!
//! On the right, one step joins `us` and `vs` for a pair `(u, v)` and some
//! `s ∈ S¹`; on the left it joins `su` and `sv`.

use std::collections::VecDeque;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::semigroup::FiniteSemigroup;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Right,
    Left,
}

impl std::str::FromStr for Side {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "right" => Ok(Side::Right),
            "left" => Ok(Side::Left),
            other => Err(format!("unknown side {other:?}")),
        }
    }
}

/// One step: `(u, v)` from the generating set (possibly reversed) and the
/// multiplier, `None` standing for the adjoined identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub u: usize,
    pub v: usize,
    pub s: Option<usize>,
}

fn act(s: &FiniteSemigroup, side: Side, x: usize, m: Option<usize>) -> usize {
    match (m, side) {
        (None, _) => x,
        (Some(m), Side::Right) => s.mul(x, m),
        (Some(m), Side::Left) => s.mul(m, x),
    }
}

fn multipliers(s: &FiniteSemigroup) -> impl Iterator<Item = Option<usize>> {
    std::iter::once(None).chain((0..s.len()).map(Some))
}

/// Adjacency lists of the one-step graph, each edge tagged with its step.
pub fn one_step_graph(s: &FiniteSemigroup, pairs: &[(usize, usize)], side: Side) -> Vec<Vec<(usize, Step)>> {
    let mut adj: Vec<Vec<(usize, Step)>> = vec![Vec::new(); s.len()];
    for &(u, v) in pairs {
        for m in multipliers(s) {
            let (a, b) = (act(s, side, u, m), act(s, side, v, m));
            if a != b {
                adj[a].push((b, Step { u, v, s: m }));
                adj[b].push((a, Step { u: v, v: u, s: m }));
            }
        }
    }
    for row in &mut adj {
        row.sort_by_key(|e| e.0);
        row.dedup_by_key(|e| e.0);
    }
    adj
}

/// Class label per element of the congruence generated by `pairs`.
pub fn cong_closure(s: &FiniteSemigroup, pairs: &[(usize, usize)], side: Side) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..s.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for &(u, v) in pairs {
        for m in multipliers(s) {
            let (a, b) = (find(&mut parent, act(s, side, u, m)), find(&mut parent, act(s, side, v, m)));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    (0..s.len()).map(|x| find(&mut parent, x)).collect()
}

pub fn right_cong_closure(s: &FiniteSemigroup, pairs: &[(usize, usize)]) -> Vec<usize> {
    cong_closure(s, pairs, Side::Right)
}

pub fn left_cong_closure(s: &FiniteSemigroup, pairs: &[(usize, usize)]) -> Vec<usize> {
    cong_closure(s, pairs, Side::Left)
}

fn bfs(adj: &[Vec<(usize, Step)>], from: usize) -> (Vec<Option<u32>>, Vec<Option<(usize, Step)>>) {
    let mut dist = vec![None; adj.len()];
    let mut back = vec![None; adj.len()];
    dist[from] = Some(0);
    let mut q = VecDeque::from([from]);
    while let Some(x) = q.pop_front() {
        let d = dist[x].expect("queued");
        for &(y, step) in &adj[x] {
            if dist[y].is_none() {
                dist[y] = Some(d + 1);
                back[y] = Some((x, step));
                q.push_back(y);
            }
        }
    }
    (dist, back)
}

/// `d[a][b]`: least length of a sequence from `a` to `b`, `None` when they
/// are not related.
pub fn distances(s: &FiniteSemigroup, pairs: &[(usize, usize)], side: Side) -> Vec<Vec<Option<u32>>> {
    let adj = one_step_graph(s, pairs, side);
    (0..s.len()).map(|a| bfs(&adj, a).0).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Diameter {
    Finite(u32),
    Infinite,
}

impl std::fmt::Display for Diameter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Diameter::Finite(d) => write!(f, "{d}"),
            Diameter::Infinite => write!(f, "inf"),
        }
    }
}

pub fn diameter_of(d: &[Vec<Option<u32>>]) -> Diameter {
    let mut best = 0;
    for row in d {
        for x in row {
            match x {
                Some(x) => best = best.max(*x),
                None => return Diameter::Infinite,
            }
        }
    }
    Diameter::Finite(best)
}

/// `D(U, S)` on the given side; infinite unless `U` generates the
/// universal relation.
pub fn diameter(s: &FiniteSemigroup, pairs: &[(usize, usize)], side: Side) -> Diameter {
    diameter_of(&distances(s, pairs, side))
}

pub fn is_universal(s: &FiniteSemigroup, pairs: &[(usize, usize)], side: Side) -> bool {
    let labels = cong_closure(s, pairs, side);
    labels.iter().all(|&l| l == labels[0])
}

/// A shortest sequence of steps from `a` to `b`.
pub fn sequence(s: &FiniteSemigroup, pairs: &[(usize, usize)], side: Side, a: usize, b: usize) -> Option<Vec<Step>> {
    let adj = one_step_graph(s, pairs, side);
    let (dist, back) = bfs(&adj, a);
    dist[b]?;
    let mut steps = Vec::new();
    let mut cur = b;
    while cur != a {
        let (prev, step) = back[cur].expect("reached");
        steps.push(step);
        cur = prev;
    }
    steps.reverse();
    Some(steps)
}

/// Checks each step of a sequence against the table: step `i` must read
/// `x_i = u s` and `x_{i+1} = v s` with `(u, v)` or `(v, u)` in `pairs`.
pub fn check_sequence(
    s: &FiniteSemigroup,
    pairs: &[(usize, usize)],
    side: Side,
    a: usize,
    b: usize,
    steps: &[Step],
) -> bool {
    let mut cur = a;
    for st in steps {
        if !pairs.contains(&(st.u, st.v)) && !pairs.contains(&(st.v, st.u)) {
            return false;
        }
        if act(s, side, st.u, st.s) != cur {
            return false;
        }
        cur = act(s, side, st.v, st.s);
    }
    cur == b
}

/// All-pairs distances by repeated relaxation over the raw step relation,
/// sharing nothing with the breadth-first search.
pub fn naive_distances(s: &FiniteSemigroup, pairs: &[(usize, usize)], side: Side) -> Vec<Vec<Option<u32>>> {
    let n = s.len();
    let mut d = vec![vec![None; n]; n];
    for (x, row) in d.iter_mut().enumerate() {
        row[x] = Some(0);
    }
    for &(u, v) in pairs {
        for m in multipliers(s) {
            let (a, b) = (act(s, side, u, m), act(s, side, v, m));
            if a != b {
                d[a][b] = Some(1);
                d[b][a] = Some(1);
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            let Some(ik) = d[i][k] else { continue };
            for j in 0..n {
                if let Some(kj) = d[k][j] {
                    if d[i][j].is_none_or(|x| ik + kj < x) {
                        d[i][j] = Some(ik + kj);
                    }
                }
            }
        }
    }
    d
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossCheckReport {
    pub trials: usize,
    pub sequences_checked: usize,
    pub bad_sequences: usize,
    pub distance_mismatches: usize,
}

impl CrossCheckReport {
    pub fn passed(&self) -> bool {
        self.bad_sequences == 0 && self.distance_mismatches == 0
    }
}

/// Rebuilds sequences for random related pairs, checks every step in the
/// table, and compares the search distances with [`naive_distances`].
pub fn cross_check<R: Rng>(
    s: &FiniteSemigroup,
    pairs: &[(usize, usize)],
    side: Side,
    trials: usize,
    rng: &mut R,
) -> CrossCheckReport {
    let fast = distances(s, pairs, side);
    let slow = naive_distances(s, pairs, side);
    let mut report = CrossCheckReport { trials, ..Default::default() };
    report.distance_mismatches = fast.iter().flatten().zip(slow.iter().flatten()).filter(|(x, y)| x != y).count();
    for _ in 0..trials {
        let a = rng.gen_range(0..s.len());
        let b = rng.gen_range(0..s.len());
        let Some(d) = fast[a][b] else { continue };
        let steps = sequence(s, pairs, side, a, b).expect("related");
        report.sequences_checked += 1;
        if steps.len() != d as usize || !check_sequence(s, pairs, side, a, b, &steps) {
            report.bad_sequences += 1;
        }
    }
    report
}

/// Symmetry, identity of indiscernibles and the triangle inequality, with
/// unrelated pairs at infinite distance.
pub fn is_metric(d: &[Vec<Option<u32>>]) -> bool {
    let n = d.len();
    let inf = |x: Option<u32>| x.map_or(u64::MAX / 4, u64::from);
    for a in 0..n {
        for b in 0..n {
            if d[a][b] != d[b][a] || (d[a][b] == Some(0)) != (a == b) {
                return false;
            }
            for c in 0..n {
                if inf(d[a][c]) > inf(d[a][b]) + inf(d[b][c]) {
                    return false;
                }
            }
        }
    }
    true
}
