//! Partitions of `{1..n} ∪ {1′..n′}`. Vertices are written as nonzero
//! integers: `k` is the top vertex `k` and `-k` the bottom vertex `k′`.

use std::collections::BTreeMap;

use petgraph::unionfind::UnionFind;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{PResult, PartitionError};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawPartition")]
pub struct FinitePartition {
    n: usize,
    blocks: Vec<Vec<i64>>,
}

#[derive(Deserialize)]
struct RawPartition {
    n: usize,
    blocks: Vec<Vec<i64>>,
}

impl TryFrom<RawPartition> for FinitePartition {
    type Error = PartitionError;

    fn try_from(r: RawPartition) -> PResult<Self> {
        FinitePartition::new(r.n, r.blocks)
    }
}

/// Position of a vertex in `0..2n`: tops first, then bottoms.
fn slot(n: usize, v: i64) -> usize {
    if v > 0 {
        v as usize - 1
    } else {
        n + (-v) as usize - 1
    }
}

fn vertex(n: usize, i: usize) -> i64 {
    if i < n {
        i as i64 + 1
    } else {
        -((i - n) as i64 + 1)
    }
}

impl FinitePartition {
    pub fn new(n: usize, blocks: Vec<Vec<i64>>) -> PResult<Self> {
        if n == 0 {
            return Err(PartitionError::Invalid("n must be at least 1".into()));
        }
        let mut seen = vec![false; 2 * n];
        for b in &blocks {
            if b.is_empty() {
                return Err(PartitionError::Invalid("empty block".into()));
            }
            for &v in b {
                if v == 0 || v.unsigned_abs() as usize > n {
                    return Err(PartitionError::Invalid(format!("vertex {v} outside 1..{n}")));
                }
                let s = slot(n, v);
                if seen[s] {
                    return Err(PartitionError::Invalid(format!("vertex {v} in two blocks")));
                }
                seen[s] = true;
            }
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(PartitionError::Invalid(format!("vertex {} is not covered", vertex(n, i))));
        }
        Ok(Self::canonical(n, blocks))
    }

    fn canonical(n: usize, mut blocks: Vec<Vec<i64>>) -> Self {
        for b in &mut blocks {
            b.sort_by_key(|&v| slot(n, v));
        }
        blocks.sort_by_key(|b| slot(n, b[0]));
        FinitePartition { n, blocks }
    }

    /// Build from a block label per slot `0..2n`.
    pub fn from_labels(n: usize, labels: &[usize]) -> Self {
        let mut by: BTreeMap<usize, Vec<i64>> = BTreeMap::new();
        for (i, &l) in labels.iter().enumerate() {
            by.entry(l).or_default().push(vertex(n, i));
        }
        Self::canonical(n, by.into_values().collect())
    }

    pub fn identity(n: usize) -> Self {
        let blocks = (1..=n as i64).map(|k| vec![k, -k]).collect();
        Self::canonical(n, blocks)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<i64>] {
        &self.blocks
    }

    /// Block index per slot `0..2n`.
    pub fn labels(&self) -> Vec<usize> {
        let mut out = vec![0; 2 * self.n];
        for (k, b) in self.blocks.iter().enumerate() {
            for &v in b {
                out[slot(self.n, v)] = k;
            }
        }
        out
    }

    /// The block containing vertex `v`.
    pub fn block_of(&self, v: i64) -> Option<&[i64]> {
        self.blocks.iter().find(|b| b.contains(&v)).map(Vec::as_slice)
    }

    /// Connected components of the product graph, restricted to the outer rows.
    pub fn product(&self, other: &Self) -> PResult<Self> {
        let n = self.n;
        if other.n != n {
            return Err(PartitionError::SizeMismatch(n, other.n));
        }
        // 0..n top, n..2n bottom, 2n..3n middle
        let mut uf = UnionFind::<usize>::new(3 * n);
        let lower = |v: i64| if v > 0 { v as usize - 1 } else { 2 * n + (-v) as usize - 1 };
        let upper = |v: i64| if v > 0 { 2 * n + v as usize - 1 } else { n + (-v) as usize - 1 };
        for b in &self.blocks {
            for w in b.windows(2) {
                uf.union(lower(w[0]), lower(w[1]));
            }
        }
        for b in &other.blocks {
            for w in b.windows(2) {
                uf.union(upper(w[0]), upper(w[1]));
            }
        }
        let labels: Vec<usize> = (0..2 * n).map(|i| uf.find_mut(i)).collect();
        Ok(Self::from_labels(n, &labels))
    }

    /// Swap the rows.
    pub fn star(&self) -> Self {
        let blocks = self.blocks.iter().map(|b| b.iter().map(|v| -v).collect()).collect();
        Self::canonical(self.n, blocks)
    }

    /// Whether every block has at most two vertices.
    pub fn is_pb(&self) -> bool {
        self.blocks.iter().all(|b| b.len() <= 2)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("partition serializes")
    }
}

/// A uniform-ish random partition: each vertex joins an earlier block or
/// opens a new one.
pub fn random_partition<R: Rng>(rng: &mut R, n: usize) -> FinitePartition {
    let mut labels = Vec::with_capacity(2 * n);
    let mut open = 0;
    for _ in 0..2 * n {
        let l = rng.gen_range(0..=open);
        if l == open {
            open += 1;
        }
        labels.push(l);
    }
    let mut order: Vec<usize> = (0..2 * n).collect();
    order.shuffle(rng);
    let shuffled: Vec<usize> = order.iter().map(|&i| labels[i]).collect();
    FinitePartition::from_labels(n, &shuffled)
}

/// A random partial Brauer element: a random matching on a random subset.
pub fn random_pb<R: Rng>(rng: &mut R, n: usize) -> FinitePartition {
    let mut slots: Vec<usize> = (0..2 * n).collect();
    slots.shuffle(rng);
    let pairs = rng.gen_range(0..=n);
    let mut labels = vec![0; 2 * n];
    for (k, &s) in slots.iter().enumerate() {
        labels[s] = if k < 2 * pairs { k / 2 } else { k };
    }
    FinitePartition::from_labels(n, &labels)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_order() {
        let p = FinitePartition::new(2, vec![vec![-2], vec![-1, 2, 1]]).unwrap();
        assert_eq!(p.blocks(), &[vec![1, 2, -1], vec![-2]]);
    }

    #[test]
    fn rejects_bad_blocks() {
        assert!(FinitePartition::new(2, vec![vec![1, -1], vec![2]]).is_err());
        assert!(FinitePartition::new(1, vec![vec![1, -1, 1]]).is_err());
        assert!(FinitePartition::new(1, vec![vec![1, -1], vec![]]).is_err());
        assert!(FinitePartition::new(1, vec![vec![2, -1]]).is_err());
    }
}
