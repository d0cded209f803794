//! Finite assertions a certificate is made of, and their evaluation.

use std::collections::{HashMap, HashSet};

use natmap_core::{Cardinality, MapExpr, SetExpr};
use semigroup_classes::{member_check, ClassTag, Element};
use serde::{Deserialize, Serialize};

use crate::error::RResult;
use crate::rel::{Env, RelTerm};

/// Complement points a colarge set must leave in the upper half of the window.
pub const COLARGE_MIN: u64 = 8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "claim")]
pub enum Claim {
    /// `x·f = y`
    Maps {
        f: String,
        x: u64,
        y: u64,
    },
    /// `x·f = y·g`
    Agree {
        f: String,
        x: u64,
        g: String,
        y: u64,
    },
    /// `x·f ≠ y·g`
    Differ {
        f: String,
        x: u64,
        g: String,
        y: u64,
    },
    Distinct {
        points: Vec<u64>,
    },
    /// `aᵢ = aⱼ` exactly when `bᵢ = bⱼ`.
    Pattern {
        a: Vec<u64>,
        b: Vec<u64>,
    },
    /// `y ∈ x·σ`, witnessed by a chain of intermediate points.
    Related {
        rel: RelTerm,
        x: u64,
        y: u64,
        path: Vec<u64>,
    },
    /// `y ∉ x·σ`
    Unrelated {
        rel: RelTerm,
        x: u64,
        y: u64,
    },
    /// `y ∉ im f`, read off the capability's image set.
    Missed {
        f: String,
        y: u64,
    },
    InClass {
        f: String,
        class: ClassTag,
    },
    /// `im f` misses exactly `missing`.
    FiniteComplement {
        f: String,
        missing: Vec<u64>,
    },
    /// No point of `set` is sent into `values`.
    FiberAvoids {
        f: String,
        values: Vec<u64>,
        set: SetExpr,
    },
    /// `ℕ ∖ set` is infinite.
    Colarge {
        set: SetExpr,
    },
    /// `im f ∪ im g ⊇ [0, upto)`.
    Covers {
        f: String,
        g: String,
        upto: u64,
    },
    /// `im f ∩ im g = ∅`.
    Disjoint {
        f: String,
        g: String,
    },
    /// The table entry `name` is the term `expr`.
    Defined {
        name: String,
        expr: MapExpr,
    },
    /// A word for which no related pair was found; never holds.
    Unpaired {
        rel: RelTerm,
    },
}

/// What a verdict rests on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Basis {
    /// Finitely many evaluations decide it.
    Exact,
    /// Decided from a capability claim, cross-checked on the window.
    Certified,
    /// Checked on `[0, n)` only.
    Window(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Outcome {
    pub holds: bool,
    pub basis: Basis,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checked {
    pub claim: Claim,
    pub outcome: Outcome,
}

fn exact(holds: bool) -> Outcome {
    Outcome { holds, basis: Basis::Exact }
}

fn window(holds: bool, n: u64) -> Outcome {
    Outcome { holds, basis: Basis::Window(n) }
}

/// Points of `ℕ ∖ set` in `[n/2, n)`.
pub fn upper_complement(set: &SetExpr, n: u64) -> RResult<u64> {
    let member = set.compile()?;
    let mut c = 0;
    for v in n / 2..n {
        if !member(v)? {
            c += 1;
        }
    }
    Ok(c)
}

pub fn evaluate(env: &Env, claim: &Claim) -> RResult<Outcome> {
    let n = env.window;
    Ok(match claim {
        Claim::Maps { f, x, y } => exact(env.apply(f, *x)? == *y),
        Claim::Agree { f, x, g, y } => exact(env.apply(f, *x)? == env.apply(g, *y)?),
        Claim::Differ { f, x, g, y } => exact(env.apply(f, *x)? != env.apply(g, *y)?),
        Claim::Distinct { points } => {
            let set: HashSet<_> = points.iter().collect();
            exact(set.len() == points.len())
        }
        Claim::Pattern { a, b } => {
            let ok = a.len() == b.len() && (0..a.len()).all(|i| (0..a.len()).all(|j| (a[i] == a[j]) == (b[i] == b[j])));
            exact(ok)
        }
        Claim::Related { rel, x, y, path } => {
            let ok = path.first() == Some(x) && path.last() == Some(y) && env.path_valid(rel, path)?;
            exact(ok)
        }
        Claim::Unrelated { rel, x, y } => {
            let (related, decided) = env.related(rel, *x, *y)?;
            if decided {
                exact(!related)
            } else {
                window(!related, n)
            }
        }
        Claim::Missed { f, y } => {
            let e = env.entry(f)?;
            let claimed = match e.cap.image_member(*y)? {
                Some(member) => !member,
                None => match &e.cap.complement {
                    Some(Cardinality::Finite { elems }) => elems.contains(y),
                    _ => false,
                },
            };
            // a hit inside the window refutes the capability
            let fx = env.f(f)?;
            let mut hit = false;
            for x in 0..n {
                if fx(x)? == *y {
                    hit = true;
                    break;
                }
            }
            Outcome { holds: claimed && !hit, basis: Basis::Certified }
        }
        Claim::InClass { f, class } => {
            let e = env.entry(f)?;
            let v = member_check(&Element::total(e.map.clone()), &e.cap, *class, n)?;
            Outcome { holds: v.is_yes(), basis: Basis::Certified }
        }
        Claim::FiniteComplement { f, missing } => {
            let e = env.entry(f)?;
            let claimed = e.cap.complement == Some(Cardinality::Finite { elems: missing.clone() });
            let mut ok = claimed;
            if ok {
                for v in 0..n {
                    let inside = env.in_image(f, v)?;
                    if inside == Some(missing.contains(&v)) {
                        ok = false;
                        break;
                    }
                }
            }
            Outcome { holds: ok, basis: Basis::Certified }
        }
        Claim::FiberAvoids { f, values, set } => {
            let member = set.compile()?;
            let fx = env.f(f)?;
            let mut ok = true;
            for x in 0..n {
                if values.contains(&fx(x)?) && member(x)? {
                    ok = false;
                    break;
                }
            }
            window(ok, n)
        }
        Claim::Colarge { set } => window(upper_complement(set, n)? >= COLARGE_MIN, n),
        Claim::Covers { f, g, upto } => {
            let mut ok = true;
            for v in 0..*upto {
                let hit = env.in_image(f, v)? == Some(true) || env.in_image(g, v)? == Some(true);
                if !hit {
                    ok = false;
                    break;
                }
            }
            Outcome { holds: ok, basis: Basis::Window(*upto) }
        }
        Claim::Disjoint { f, g } => {
            let fx = env.f(f)?;
            let mut ok = true;
            for x in 0..n {
                if env.in_image(g, fx(x)?)? != Some(false) {
                    ok = false;
                    break;
                }
            }
            window(ok, n)
        }
        Claim::Defined { name, expr } => exact(&env.entry(name)?.map == expr),
        Claim::Unpaired { .. } => exact(false),
    })
}

/// Evaluate a list, sharing one environment.
pub fn evaluate_all(env: &Env, claims: &[Claim]) -> RResult<Vec<Checked>> {
    let mut memo: HashMap<String, Outcome> = HashMap::new();
    claims
        .iter()
        .map(|c| {
            let key = serde_json::to_string(c).expect("claims serialize");
            let outcome = match memo.get(&key) {
                Some(o) => *o,
                None => {
                    let o = evaluate(env, c)?;
                    memo.insert(key, o);
                    o
                }
            };
            Ok(Checked { claim: c.clone(), outcome })
        })
        .collect()
}
