//! The `MapExpr` term language. Composition reads left to right:
//! `Compose { f, g }` is the map `x ↦ g(f(x))`, so products of maps follow
//! the right-action convention `x(αβ) = (xα)β`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{NatError, Result};
use crate::pairing::{try_pack, unpack};
use crate::registry;

/// A compiled, evaluable map.
pub type MapFn = Arc<dyn Fn(u64) -> Result<u64> + Send + Sync>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op")]
pub enum MapExpr {
    Id,
    Const {
        c: u64,
    },
    /// `x = q·m + r ↦ a_r·q + b_r`.
    AffineMod {
        m: u64,
        rules: Vec<(u64, u64)>,
    },
    /// `x = q·m + r ↦ branches[r](q)`.
    PiecewiseMod {
        m: u64,
        branches: Vec<MapExpr>,
    },
    Compose {
        f: Box<MapExpr>,
        g: Box<MapExpr>,
    },
    PackPair {
        f: Box<MapExpr>,
        g: Box<MapExpr>,
    },
    UnpackFirst,
    UnpackSecond,
    Patch {
        f: Box<MapExpr>,
        overrides: Vec<(u64, u64)>,
    },
    Opaque {
        generator: String,
        params: Value,
    },
}

impl MapExpr {
    pub fn constant(c: u64) -> Self {
        MapExpr::Const { c }
    }

    /// `x ↦ a·x + b`.
    pub fn affine(a: u64, b: u64) -> Self {
        MapExpr::AffineMod { m: 1, rules: vec![(a, b)] }
    }

    /// `x ↦ ⌊x/k⌋`.
    pub fn floor_div(k: u64) -> Self {
        MapExpr::AffineMod { m: k, rules: vec![(1, 0); k as usize] }
    }

    /// First `self`, then `g`.
    pub fn then(self, g: MapExpr) -> Self {
        MapExpr::Compose { f: Box::new(self), g: Box::new(g) }
    }

    pub fn compose(f: MapExpr, g: MapExpr) -> Self {
        f.then(g)
    }

    pub fn pack_pair(f: MapExpr, g: MapExpr) -> Self {
        MapExpr::PackPair { f: Box::new(f), g: Box::new(g) }
    }

    pub fn piecewise(branches: Vec<MapExpr>) -> Self {
        MapExpr::PiecewiseMod { m: branches.len() as u64, branches }
    }

    /// Override finitely many points. Later entries win; the stored table is sorted.
    pub fn patch(f: MapExpr, overrides: impl IntoIterator<Item = (u64, u64)>) -> Self {
        let table: std::collections::BTreeMap<u64, u64> = overrides.into_iter().collect();
        if table.is_empty() {
            return f;
        }
        MapExpr::Patch { f: Box::new(f), overrides: table.into_iter().collect() }
    }

    pub fn opaque(generator: &str, params: Value) -> Self {
        MapExpr::Opaque { generator: generator.to_string(), params }
    }

    /// Structural checks that do not require evaluation.
    pub fn validate(&self) -> Result<()> {
        match self {
            MapExpr::AffineMod { m, rules } => {
                if *m == 0 || rules.len() as u64 != *m {
                    return Err(NatError::MalformedTerm(format!(
                        "AffineMod needs m >= 1 and exactly m rules (m = {m}, got {})",
                        rules.len()
                    )));
                }
                Ok(())
            }
            MapExpr::PiecewiseMod { m, branches } => {
                if *m == 0 || branches.len() as u64 != *m {
                    return Err(NatError::MalformedTerm(format!(
                        "PiecewiseMod needs m >= 1 and exactly m branches (m = {m}, got {})",
                        branches.len()
                    )));
                }
                branches.iter().try_for_each(MapExpr::validate)
            }
            MapExpr::Compose { f, g } | MapExpr::PackPair { f, g } => {
                f.validate()?;
                g.validate()
            }
            MapExpr::Patch { f, overrides } => {
                let mut keys: Vec<_> = overrides.iter().map(|p| p.0).collect();
                keys.sort_unstable();
                keys.dedup();
                if keys.len() != overrides.len() {
                    return Err(NatError::MalformedTerm("Patch has a repeated key".into()));
                }
                f.validate()
            }
            _ => Ok(()),
        }
    }

    pub fn compile(&self) -> Result<MapFn> {
        self.validate()?;
        self.compile_unchecked()
    }

    fn compile_unchecked(&self) -> Result<MapFn> {
        Ok(match self {
            MapExpr::Id => Arc::new(Ok),
            MapExpr::Const { c } => {
                let c = *c;
                Arc::new(move |_| Ok(c))
            }
            MapExpr::AffineMod { m, rules } => {
                let m = *m;
                let rules = rules.clone();
                Arc::new(move |x| {
                    let (a, b) = rules[(x % m) as usize];
                    a.checked_mul(x / m).and_then(|v| v.checked_add(b)).ok_or(NatError::Overflow("AffineMod"))
                })
            }
            MapExpr::PiecewiseMod { m, branches } => {
                let m = *m;
                let fs = branches.iter().map(MapExpr::compile_unchecked).collect::<Result<Vec<_>>>()?;
                Arc::new(move |x| fs[(x % m) as usize](x / m))
            }
            MapExpr::Compose { f, g } => {
                let (f, g) = (f.compile_unchecked()?, g.compile_unchecked()?);
                Arc::new(move |x| g(f(x)?))
            }
            MapExpr::PackPair { f, g } => {
                let (f, g) = (f.compile_unchecked()?, g.compile_unchecked()?);
                Arc::new(move |x| try_pack(f(x)?, g(x)?))
            }
            MapExpr::UnpackFirst => Arc::new(|x| Ok(unpack(x).0)),
            MapExpr::UnpackSecond => Arc::new(|x| Ok(unpack(x).1)),
            MapExpr::Patch { f, overrides } => {
                let f = f.compile_unchecked()?;
                let table: HashMap<u64, u64> = overrides.iter().copied().collect();
                Arc::new(move |x| match table.get(&x) {
                    Some(v) => Ok(*v),
                    None => f(x),
                })
            }
            MapExpr::Opaque { generator, params } => registry::resolve(generator, params)?,
        })
    }

    /// Evaluate at a single point. Compiles the term each call; batch callers
    /// should use [`MapExpr::compile`].
    pub fn eval(&self, x: u64) -> Result<u64> {
        self.compile()?(x)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("MapExpr serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let e: MapExpr = serde_json::from_str(s).map_err(|err| NatError::MalformedTerm(err.to_string()))?;
        e.validate()?;
        Ok(e)
    }

    /// Number of nodes, counting Opaque leaves as one.
    pub fn size(&self) -> usize {
        match self {
            MapExpr::PiecewiseMod { branches, .. } => 1 + branches.iter().map(MapExpr::size).sum::<usize>(),
            MapExpr::Compose { f, g } | MapExpr::PackPair { f, g } => 1 + f.size() + g.size(),
            MapExpr::Patch { f, .. } => 1 + f.size(),
            _ => 1,
        }
    }
}

impl fmt::Display for MapExpr {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapExpr::Id => write!(out, "id"),
            MapExpr::Const { c } => write!(out, "c{c}"),
            MapExpr::AffineMod { m: 1, rules } => write!(out, "{}x+{}", rules[0].0, rules[0].1),
            MapExpr::AffineMod { m, rules } => write!(out, "aff{m}{rules:?}"),
            MapExpr::PiecewiseMod { m, branches } => {
                write!(out, "pw{m}[")?;
                for (i, b) in branches.iter().enumerate() {
                    if i > 0 {
                        write!(out, ", ")?;
                    }
                    write!(out, "{b}")?;
                }
                write!(out, "]")
            }
            MapExpr::Compose { f, g } => write!(out, "({f} ; {g})"),
            MapExpr::PackPair { f, g } => write!(out, "<{f}, {g}>"),
            MapExpr::UnpackFirst => write!(out, "fst"),
            MapExpr::UnpackSecond => write!(out, "snd"),
            MapExpr::Patch { f, overrides } => write!(out, "{f}{overrides:?}"),
            MapExpr::Opaque { generator, .. } => write!(out, "#{generator}"),
        }
    }
}

/// Evaluate `e` at `x`.
pub fn evaluate(e: &MapExpr, x: u64) -> Result<u64> {
    e.eval(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grammar_examples() {
        assert_eq!(evaluate(&MapExpr::Id, 7).unwrap(), 7);
        assert_eq!(evaluate(&MapExpr::affine(2, 0), 5).unwrap(), 10);
        let pw = MapExpr::piecewise(vec![MapExpr::affine(1, 1), MapExpr::affine(3, 0)]);
        assert_eq!(evaluate(&pw, 5).unwrap(), 6);
        assert_eq!(evaluate(&pw, 4).unwrap(), 3);
    }

    #[test]
    fn compose_reads_left_to_right() {
        // x ↦ 2x, then x ↦ x+1
        let e = MapExpr::affine(2, 0).then(MapExpr::affine(1, 1));
        assert_eq!(e.eval(3).unwrap(), 7);
    }

    #[test]
    fn malformed_terms_rejected() {
        let bad = MapExpr::AffineMod { m: 2, rules: vec![(1, 0)] };
        assert!(bad.compile().is_err());
        let bad = MapExpr::Patch { f: Box::new(MapExpr::Id), overrides: vec![(1, 2), (1, 3)] };
        assert!(bad.compile().is_err());
        assert!(MapExpr::opaque("nope", Value::Null).eval(0).is_err());
    }

    #[test]
    fn json_shape() {
        let pw = MapExpr::piecewise(vec![MapExpr::Id, MapExpr::constant(4)]);
        assert_eq!(pw.to_json(), r#"{"op":"PiecewiseMod","m":2,"branches":[{"op":"Id"},{"op":"Const","c":4}]}"#);
        assert_eq!(MapExpr::from_json(&pw.to_json()).unwrap(), pw);
    }

    #[test]
    fn overflow_is_reported() {
        let big = MapExpr::affine(u64::MAX, 0);
        assert_eq!(big.eval(2), Err(NatError::Overflow("AffineMod")));
    }
}
