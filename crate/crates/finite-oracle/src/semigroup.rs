//! Finite semigroups as multiplication tables, built from generators by
//! closure.

use std::collections::HashMap;
use std::fmt::Debug;
use std::hash::Hash;

use partition_monoid::FinitePartition;
use serde::{Deserialize, Serialize};

use crate::error::{OResult, OracleError};

/// Anything with an associative product. Products read left to right.
pub trait Element: Clone + Eq + Hash + Debug {
    fn mul(&self, other: &Self) -> Self;
    fn label(&self) -> String;
}

/// A self-map of `{0..n-1}` as its image list; `a.mul(b)` applies `a` first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Transformation(pub Vec<u32>);

impl Transformation {
    pub fn identity(n: usize) -> Self {
        Transformation((0..n as u32).collect())
    }

    pub fn constant(n: usize, c: u32) -> Self {
        Transformation(vec![c; n])
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }
}

impl Element for Transformation {
    fn mul(&self, other: &Self) -> Self {
        Transformation(self.0.iter().map(|&x| other.0[x as usize]).collect())
    }

    fn label(&self) -> String {
        format!("{:?}", self.0)
    }
}

impl Element for FinitePartition {
    fn mul(&self, other: &Self) -> Self {
        self.product(other).expect("generators share a degree")
    }

    fn label(&self) -> String {
        self.to_json()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteSemigroup {
    pub labels: Vec<String>,
    pub table: Vec<Vec<usize>>,
    pub identity: Option<usize>,
}

/// Largest size for which associativity is checked exhaustively.
pub const ASSOC_CHECK: usize = 60;

impl FiniteSemigroup {
    /// From a multiplication table. Associativity is checked when the table
    /// is small enough.
    pub fn from_table(table: Vec<Vec<usize>>) -> OResult<Self> {
        let n = table.len();
        if n == 0 {
            return Err(OracleError::Invalid("empty table".into()));
        }
        if table.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
            return Err(OracleError::Invalid("table is not square over its elements".into()));
        }
        let labels = (0..n).map(|i| format!("s{i}")).collect();
        let s = FiniteSemigroup { identity: find_identity(&table), labels, table };
        if n <= ASSOC_CHECK {
            s.check_associative()?;
        }
        Ok(s)
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn is_monoid(&self) -> bool {
        self.identity.is_some()
    }

    pub fn check_associative(&self) -> OResult<()> {
        let n = self.len();
        for a in 0..n {
            for b in 0..n {
                let ab = self.table[a][b];
                for c in 0..n {
                    if self.table[ab][c] != self.table[a][self.table[b][c]] {
                        return Err(OracleError::NotAssociative(a, b, c));
                    }
                }
            }
        }
        Ok(())
    }

    /// `S¹`: the same table when `S` is a monoid, else a new identity as
    /// the last element.
    pub fn with_identity(&self) -> Self {
        if self.is_monoid() {
            return self.clone();
        }
        let n = self.len();
        let mut table: Vec<Vec<usize>> =
            self.table.iter().enumerate().map(|(a, r)| r.iter().copied().chain([a]).collect()).collect();
        let mut last: Vec<usize> = (0..n).collect();
        last.push(n);
        table.push(last);
        let mut labels = self.labels.clone();
        labels.push("1".into());
        FiniteSemigroup { labels, table, identity: Some(n) }
    }

    /// Elements `z` with `zs = z` for all `s`.
    pub fn left_zeros(&self) -> Vec<usize> {
        (0..self.len()).filter(|&z| self.table[z].iter().all(|&p| p == z)).collect()
    }

    /// Elements `z` with `sz = z` for all `s`.
    pub fn right_zeros(&self) -> Vec<usize> {
        (0..self.len()).filter(|&z| (0..self.len()).all(|s| self.table[s][z] == z)).collect()
    }

    /// Whether `I·S ⊆ I`.
    pub fn is_right_ideal(&self, ideal: &[usize]) -> bool {
        let mut member = vec![false; self.len()];
        ideal.iter().for_each(|&i| member[i] = true);
        !ideal.is_empty() && ideal.iter().all(|&i| self.table[i].iter().all(|&p| member[p]))
    }

    /// Whether `S·I ⊆ I`.
    pub fn is_left_ideal(&self, ideal: &[usize]) -> bool {
        let mut member = vec![false; self.len()];
        ideal.iter().for_each(|&i| member[i] = true);
        !ideal.is_empty() && ideal.iter().all(|&i| (0..self.len()).all(|s| member[self.table[s][i]]))
    }

    /// The right ideal `aS¹`.
    pub fn principal_right_ideal(&self, a: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self.table[a].clone();
        out.push(a);
        out.sort_unstable();
        out.dedup();
        out
    }

    /// The subsemigroup on `members`, reindexed in the given order, or
    /// `None` when `members` is not closed.
    pub fn restrict(&self, members: &[usize]) -> Option<Self> {
        let pos: HashMap<usize, usize> = members.iter().enumerate().map(|(k, &m)| (m, k)).collect();
        let mut table = Vec::with_capacity(members.len());
        for &a in members {
            let row: Option<Vec<usize>> = members.iter().map(|&b| pos.get(&self.table[a][b]).copied()).collect();
            table.push(row?);
        }
        let labels = members.iter().map(|&m| self.labels[m].clone()).collect();
        Some(FiniteSemigroup { identity: find_identity(&table), labels, table })
    }

    /// The opposite semigroup, whose right notions are the left notions here.
    pub fn opposite(&self) -> Self {
        let n = self.len();
        let table = (0..n).map(|a| (0..n).map(|b| self.table[b][a]).collect()).collect();
        FiniteSemigroup { labels: self.labels.clone(), table, identity: self.identity }
    }
}

fn find_identity(table: &[Vec<usize>]) -> Option<usize> {
    let n = table.len();
    (0..n).find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
}

/// Closure of `gens` under the product, breadth first. Fails once more than
/// `cap` elements appear.
pub fn generate<E: Element>(gens: &[E], cap: usize) -> OResult<FiniteSemigroup> {
    if gens.is_empty() {
        return Err(OracleError::Invalid("no generators".into()));
    }
    let mut elems: Vec<E> = Vec::new();
    let mut index: HashMap<E, usize> = HashMap::new();
    for g in gens {
        if !index.contains_key(g) {
            index.insert(g.clone(), elems.len());
            elems.push(g.clone());
        }
    }
    let mut head = 0;
    while head < elems.len() {
        for g in gens {
            let p = elems[head].mul(g);
            if !index.contains_key(&p) {
                if elems.len() == cap {
                    return Err(OracleError::CapExceeded { cap });
                }
                index.insert(p.clone(), elems.len());
                elems.push(p);
            }
        }
        head += 1;
    }
    let table: Vec<Vec<usize>> = elems.iter().map(|a| elems.iter().map(|b| index[&a.mul(b)]).collect()).collect();
    let labels = elems.iter().map(Element::label).collect();
    let s = FiniteSemigroup { identity: find_identity(&table), labels, table };
    if s.len() <= ASSOC_CHECK {
        s.check_associative()?;
    }
    Ok(s)
}

/// Generators read from JSON.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GenSpec {
    Transformation { gens: Vec<Vec<u32>> },
    Partition { gens: Vec<FinitePartition> },
    Table { table: Vec<Vec<usize>> },
}

impl GenSpec {
    pub fn build(&self, cap: usize) -> OResult<FiniteSemigroup> {
        match self {
            GenSpec::Transformation { gens } => {
                let n = gens.first().map_or(0, Vec::len);
                if gens.iter().any(|g| g.len() != n || g.iter().any(|&x| x as usize >= n)) {
                    return Err(OracleError::Invalid("transformations must share a degree".into()));
                }
                let gens: Vec<Transformation> = gens.iter().cloned().map(Transformation).collect();
                generate(&gens, cap)
            }
            GenSpec::Partition { gens } => {
                let n = gens.first().map_or(0, FinitePartition::n);
                if gens.iter().any(|g| g.n() != n) {
                    return Err(OracleError::Invalid("partitions must share a degree".into()));
                }
                generate(gens, cap)
            }
            GenSpec::Table { table } => FiniteSemigroup::from_table(table.clone()),
        }
    }
}

/// The full transformation monoid on two points.
pub fn t2() -> FiniteSemigroup {
    let gens = [
        Transformation::identity(2),
        Transformation(vec![1, 0]),
        Transformation::constant(2, 0),
        Transformation::constant(2, 1),
    ];
    generate(&gens, 16).expect("four elements")
}

pub fn s3() -> FiniteSemigroup {
    generate(&[Transformation(vec![1, 0, 2]), Transformation(vec![0, 2, 1])], 16).expect("six elements")
}

/// `n` right zeros: `ab = b`.
pub fn right_zero(n: usize) -> FiniteSemigroup {
    FiniteSemigroup::from_table((0..n).map(|_| (0..n).collect()).collect()).expect("band")
}

/// `n` left zeros: `ab = a`.
pub fn left_zero(n: usize) -> FiniteSemigroup {
    FiniteSemigroup::from_table((0..n).map(|a| vec![a; n]).collect()).expect("band")
}

/// The cyclic group of order `n`, generated by an `n`-cycle.
pub fn cyclic(n: usize) -> FiniteSemigroup {
    let cycle = Transformation((0..n as u32).map(|x| (x + 1) % n as u32).collect());
    generate(&[cycle], n + 1).expect("n elements")
}
