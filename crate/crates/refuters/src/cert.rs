//! Refutation certificates: the constructed maps, the finite choice data,
//! and the list of finite claims that the data must satisfy.
//!
//! The claim list is never trusted. [`obligations`] derives it again from
//! the target, the generator names and the choice data, so a certificate
//! cannot drop a case. Replay then re-evaluates every claim.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use natmap_core::{MapExpr, SetExpr};
use right_witness::{verify_sequence, DerivationSequence, Gen, Side};
use semigroup_classes::ClassTag;
use serde::{Deserialize, Serialize};

use crate::claim::{evaluate_all, Basis, Checked, Claim, Outcome};
use crate::error::{RResult, RefuteError};
use crate::rel::{sigma_enum, sigma_prime_enum, Entry, Env, RelTerm};

pub const THETA: &str = "theta";
pub const PHI: &str = "phi";
pub const ONE: &str = "one";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Target {
    RightIdeal,
    LeftIdeal,
    RightCong,
    LeftCong,
    RightBl2,
    RightInj3,
    LeftSurj2,
    LeftSurj3,
}

impl Target {
    pub const ALL: [Target; 8] = [
        Target::RightIdeal,
        Target::LeftIdeal,
        Target::RightCong,
        Target::LeftCong,
        Target::RightBl2,
        Target::RightInj3,
        Target::LeftSurj2,
        Target::LeftSurj3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Target::RightIdeal => "right-ideal",
            Target::LeftIdeal => "left-ideal",
            Target::RightCong => "right-cong",
            Target::LeftCong => "left-cong",
            Target::RightBl2 => "right-bl2",
            Target::RightInj3 => "right-inj3",
            Target::LeftSurj2 => "left-surj2",
            Target::LeftSurj3 => "left-surj3",
        }
    }

    /// The side of the congruence, for targets about sequences.
    pub fn side(self) -> Option<Side> {
        match self {
            Target::RightIdeal | Target::LeftIdeal => None,
            Target::RightCong | Target::RightBl2 | Target::RightInj3 => Some(Side::Right),
            Target::LeftCong | Target::LeftSurj2 | Target::LeftSurj3 => Some(Side::Left),
        }
    }

    /// Depth fixed by the target, if any.
    pub fn fixed_depth(self) -> Option<u64> {
        match self {
            Target::RightIdeal | Target::LeftIdeal => Some(0),
            Target::RightBl2 | Target::LeftSurj2 => Some(2),
            Target::RightInj3 | Target::LeftSurj3 => Some(3),
            Target::RightCong | Target::LeftCong => None,
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Target {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Target::ALL.into_iter().find(|t| t.name() == s).ok_or_else(|| format!("unknown target `{s}`"))
    }
}

/// A related pair with the chain through the word.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelPair {
    pub x: u64,
    pub y: u64,
    pub path: Vec<u64>,
}

/// One intersecting pair of generators and the points chosen for it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Meet {
    pub pair: usize,
    pub x: u64,
    pub y: u64,
    pub w: u64,
    pub zpre: u64,
    pub z: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InjTuple {
    pub gens: [usize; 6],
    pub x: u64,
    pub t: u64,
    pub y: u64,
    pub s: u64,
}

/// How a surjective generator is placed relative to `Sym`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum GenKind {
    Sym,
    Collision { a: u64, b: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VEntry {
    pub mu: usize,
    pub lambda: usize,
    pub y: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pick {
    pub alpha: usize,
    pub beta: usize,
    pub v: usize,
    pub z: u64,
    pub x: u64,
}

/// Which side of `zβ₂⁻¹α₂ = zα₃⁻¹β₃θα₁⁻¹β₁` contains `v` at `u`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Holds {
    Lhs,
    Rhs,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurjTuple {
    pub gens: [usize; 6],
    pub holds: Holds,
    pub u: u64,
    pub v: u64,
    pub path: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "target", rename_all = "kebab-case")]
pub enum Proof {
    RightIdeal { pairs: Vec<(u64, u64)>, fresh: u64 },
    LeftIdeal { missing: Vec<u64>, fresh: u64 },
    RightCong { complements: Vec<Vec<u64>>, pairs: Vec<Option<RelPair>> },
    LeftCong { pairs: Vec<(u64, u64)> },
    RightBl2 { meets: Vec<Meet>, disjoint: Vec<usize> },
    RightInj3 { complements: Vec<Option<Vec<u64>>>, tuples: Vec<InjTuple> },
    LeftSurj2 { kinds: Vec<GenKind>, v: Vec<VEntry>, picks: Vec<Pick> },
    LeftSurj3 { kinds: Vec<GenKind>, tuples: Vec<SurjTuple>, moved: u64 },
}

impl Proof {
    pub fn target(&self) -> Target {
        match self {
            Proof::RightIdeal { .. } => Target::RightIdeal,
            Proof::LeftIdeal { .. } => Target::LeftIdeal,
            Proof::RightCong { .. } => Target::RightCong,
            Proof::LeftCong { .. } => Target::LeftCong,
            Proof::RightBl2 { .. } => Target::RightBl2,
            Proof::RightInj3 { .. } => Target::RightInj3,
            Proof::LeftSurj2 { .. } => Target::LeftSurj2,
            Proof::LeftSurj3 { .. } => Target::LeftSurj3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RefutationCertificate {
    pub target: Target,
    pub depth: u64,
    pub window: u64,
    /// Names of the candidate generating set, in order.
    pub generators: Vec<String>,
    /// Names of the constructed elements: one for ideals, two otherwise.
    pub constructed: Vec<String>,
    pub maps: BTreeMap<String, Entry>,
    pub proof: Proof,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub checked: Vec<Checked>,
}

impl RefutationCertificate {
    /// Whether every recorded claim holds.
    pub fn passed(&self) -> bool {
        !self.checked.is_empty() && self.checked.iter().all(|c| c.outcome.holds)
    }

    pub fn windowed_claims(&self) -> usize {
        self.checked.iter().filter(|c| matches!(c.outcome.basis, Basis::Window(_))).count()
    }

    /// The statement the certificate supports.
    pub fn conclusion(&self) -> String {
        match self.target {
            Target::RightIdeal => "S ≠ US¹".into(),
            Target::LeftIdeal => "S ≠ S¹U".into(),
            t => {
                let side = if t.side() == Some(Side::Right) { "r" } else { "l" };
                format!("D_{side}(S,U) > {}", self.depth)
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> RResult<Self> {
        serde_json::from_str(s).map_err(|e| RefuteError::Malformed(e.to_string()))
    }

    pub fn failing(&self) -> Vec<&Checked> {
        self.checked.iter().filter(|c| !c.outcome.holds).collect()
    }
}

pub fn gen_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("u{i}")).collect()
}

fn claim_maps(f: &str, x: u64, y: u64) -> Claim {
    Claim::Maps { f: f.into(), x, y }
}

fn agree(f: &str, x: u64, g: &str, y: u64) -> Claim {
    Claim::Agree { f: f.into(), x, g: g.into(), y }
}

fn differ(f: &str, x: u64, g: &str, y: u64) -> Claim {
    Claim::Differ { f: f.into(), x, g: g.into(), y }
}

fn in_class(f: &str, class: ClassTag) -> Claim {
    Claim::InClass { f: f.into(), class }
}

fn malformed(msg: impl Into<String>) -> RefuteError {
    RefuteError::Malformed(msg.into())
}

/// Ordered pairs of distinct generator indices.
pub fn distinct_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).collect()
}

/// Index tuples in `U⁶` whose first and last entries satisfy `ok`, lexicographically.
pub fn tuples6(n: usize, ok: impl Fn(usize) -> bool) -> Vec<[usize; 6]> {
    let mut out = Vec::new();
    let mut idx = [0usize; 6];
    if n == 0 {
        return out;
    }
    loop {
        if ok(idx[0]) && ok(idx[5]) {
            out.push(idx);
        }
        let mut pos = 6;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < n {
                break;
            }
            idx[pos] = 0;
        }
    }
}

fn kind_claims(name: &str, kind: &GenKind, out: &mut Vec<Claim>) {
    match kind {
        GenKind::Sym => out.push(in_class(name, ClassTag::Sym)),
        GenKind::Collision { a, b } => {
            out.push(Claim::Distinct { points: vec![*a, *b] });
            out.push(agree(name, *a, name, *b));
        }
    }
}

/// Name of the table entry for `μ⁻¹λ`.
pub fn v_name(mu: usize, lambda: usize) -> String {
    format!("v{mu}.{lambda}")
}

/// `μ⁻¹λ` as a map, through the retract of the bijection `μ`.
pub fn v_expr(maps: &BTreeMap<String, Entry>, mu: &str, lambda: &str) -> RResult<MapExpr> {
    let m = maps.get(mu).ok_or_else(|| malformed(format!("unknown map `{mu}`")))?;
    let l = maps.get(lambda).ok_or_else(|| malformed(format!("unknown map `{lambda}`")))?;
    let r = m.cap.retract.clone().ok_or_else(|| RefuteError::MissingCapability(format!("`{mu}` has no inverse")))?;
    Ok(r.then(l.map.clone()))
}

/// `∪ y_φ φ⁻¹` over the entries of `V`.
pub fn surj2_avoid(maps: &BTreeMap<String, Entry>, gens: &[String], v: &[VEntry]) -> RResult<SetExpr> {
    let mut parts = Vec::new();
    for e in v {
        let expr = v_expr(maps, &gens[e.mu], &gens[e.lambda])?;
        parts.push(SetExpr::preimage(expr, SetExpr::finite([e.y])));
    }
    Ok(SetExpr::union(parts))
}

/// `β₂⁻¹α₂` for a tuple.
pub fn surj_lhs(gens: &[String], p: &[usize; 6]) -> RelTerm {
    RelTerm::new([(gens[p[3]].clone(), true), (gens[p[2]].clone(), false)])
}

/// `α₃⁻¹β₃θα₁⁻¹β₁` for a tuple.
pub fn surj_rhs(gens: &[String], p: &[usize; 6]) -> RelTerm {
    RelTerm::new([
        (gens[p[4]].clone(), true),
        (gens[p[5]].clone(), false),
        (THETA.to_string(), false),
        (gens[p[0]].clone(), true),
        (gens[p[1]].clone(), false),
    ])
}

/// The claims the certificate must carry, derived from its data alone.
pub fn obligations(c: &RefutationCertificate) -> RResult<Vec<Claim>> {
    if c.proof.target() != c.target {
        return Err(malformed(format!("proof data is for {}, target is {}", c.proof.target(), c.target)));
    }
    if let Some(d) = c.target.fixed_depth() {
        if c.depth != d {
            return Err(malformed(format!("{} has depth {d}, certificate says {}", c.target, c.depth)));
        }
    }
    let want_constructed: Vec<String> = match c.target {
        Target::RightIdeal | Target::LeftIdeal => vec![THETA.into()],
        Target::LeftSurj2 | Target::LeftSurj3 => vec![THETA.into(), ONE.into()],
        _ => vec![THETA.into(), PHI.into()],
    };
    if c.constructed != want_constructed {
        return Err(malformed("unexpected constructed names"));
    }
    for name in c.generators.iter().chain(&c.constructed) {
        if !c.maps.contains_key(name) {
            return Err(malformed(format!("no map for `{name}`")));
        }
    }
    let g = &c.generators;
    let n = g.len();
    let mut out = Vec::new();
    match &c.proof {
        Proof::RightIdeal { pairs, fresh } => {
            if pairs.len() != n {
                return Err(malformed("one collision per generator expected"));
            }
            for (name, &(x, y)) in g.iter().zip(pairs) {
                out.push(Claim::Distinct { points: vec![x, y] });
                out.push(agree(name, x, name, y));
                out.push(differ(THETA, x, THETA, y));
            }
            out.push(Claim::Distinct { points: vec![*fresh, fresh + 1] });
            out.push(agree(THETA, *fresh, THETA, fresh + 1));
        }
        Proof::LeftIdeal { missing, fresh } => {
            if missing.len() != n {
                return Err(malformed("one missing point per generator expected"));
            }
            for (name, &m) in g.iter().zip(missing) {
                out.push(Claim::Missed { f: name.clone(), y: m });
                out.push(claim_maps(THETA, m, m));
            }
            out.push(Claim::Missed { f: THETA.into(), y: *fresh });
        }
        Proof::RightCong { complements, pairs } => {
            if complements.len() != n {
                return Err(malformed("one complement per generator expected"));
            }
            for (name, comp) in g.iter().zip(complements) {
                out.push(in_class(name, ClassTag::F));
                out.push(Claim::FiniteComplement { f: name.clone(), missing: comp.clone() });
            }
            let terms: Vec<RelTerm> = sigma_enum(g, c.depth as usize).collect();
            if terms.len() != pairs.len() {
                return Err(malformed(format!("{} words but {} pairs", terms.len(), pairs.len())));
            }
            for (rel, p) in terms.into_iter().zip(pairs) {
                match p {
                    Some(p) => {
                        out.push(Claim::Related { rel, x: p.x, y: p.y, path: p.path.clone() });
                        out.push(differ(THETA, p.x, PHI, p.y));
                    }
                    None => out.push(Claim::Unpaired { rel }),
                }
            }
            let pivot = pairs.iter().flatten().next().map_or(0, |p| p.x);
            out.push(differ(THETA, pivot, PHI, pivot));
            out.push(in_class(THETA, ClassTag::Sym));
            out.push(in_class(PHI, ClassTag::Sym));
        }
        Proof::LeftCong { pairs } => {
            for name in g {
                out.push(in_class(name, ClassTag::F));
            }
            let terms: Vec<RelTerm> = sigma_prime_enum(g, c.depth as usize).collect();
            if terms.len() != pairs.len() {
                return Err(malformed(format!("{} words but {} pairs", terms.len(), pairs.len())));
            }
            for (rel, &(x, y)) in terms.into_iter().zip(pairs) {
                out.push(Claim::Unrelated { rel, x, y });
                out.push(claim_maps(THETA, x, x));
                out.push(claim_maps(PHI, x, y));
            }
            let pivot = pairs.first().map_or(0, |p| p.0);
            out.push(differ(THETA, pivot, PHI, pivot));
            out.push(in_class(THETA, ClassTag::Sym));
            out.push(in_class(PHI, ClassTag::Sym));
        }
        Proof::RightBl2 { meets, disjoint } => {
            let pairs = distinct_pairs(n);
            let mut seen: BTreeSet<usize> = BTreeSet::new();
            for i in meets.iter().map(|m| m.pair).chain(disjoint.iter().copied()) {
                if i >= pairs.len() || !seen.insert(i) {
                    return Err(malformed("pair index out of range or repeated"));
                }
            }
            if seen.len() != pairs.len() {
                return Err(malformed("some generator pair is not classified"));
            }
            if meets.is_empty() {
                return Err(malformed("no intersecting pair"));
            }
            for name in g {
                out.push(in_class(name, ClassTag::Inj));
            }
            for &i in disjoint {
                let (a, b) = pairs[i];
                out.push(Claim::Disjoint { f: g[a].clone(), g: g[b].clone() });
            }
            for m in meets {
                let (a, b) = pairs[m.pair];
                out.push(agree(&g[a], m.x, &g[b], m.y));
                out.push(claim_maps(THETA, m.zpre, m.z));
                out.push(agree(PHI, m.w, THETA, m.x));
                out.push(claim_maps(PHI, m.y, m.z));
            }
            let ws: Vec<u64> = meets.iter().map(|m| m.w).collect();
            let xs: Vec<u64> = meets.iter().map(|m| m.x).collect();
            let ys: Vec<u64> = meets.iter().map(|m| m.y).collect();
            let zs: Vec<u64> = meets.iter().map(|m| m.z).collect();
            out.push(Claim::Pattern { a: ws.clone(), b: xs.clone() });
            out.push(Claim::Pattern { a: zs, b: ys.clone() });
            let mut a_set: Vec<u64> = ws.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
            a_set.extend(ys.iter().copied().collect::<BTreeSet<_>>());
            out.push(Claim::Distinct { points: a_set });
            for mj in meets {
                for mk in meets {
                    let (gk, dk) = pairs[mk.pair];
                    out.push(differ(&g[dk], mj.w, &g[gk], mj.y));
                }
            }
            for mi in meets {
                for mj in meets {
                    out.push(differ(THETA, mi.zpre, THETA, mj.x));
                }
            }
            out.push(differ(THETA, meets[0].y, PHI, meets[0].y));
            out.push(in_class(THETA, ClassTag::BL));
            out.push(in_class(PHI, ClassTag::BL));
            out.push(Claim::Covers { f: THETA.into(), g: PHI.into(), upto: c.window });
        }
        Proof::RightInj3 { complements, tuples } => {
            if complements.len() != n {
                return Err(malformed("one classification per generator expected"));
            }
            for (name, comp) in g.iter().zip(complements) {
                out.push(in_class(name, ClassTag::Inj));
                match comp {
                    Some(m) => out.push(Claim::FiniteComplement { f: name.clone(), missing: m.clone() }),
                    None => out.push(in_class(name, ClassTag::BL)),
                }
            }
            let p = tuples6(n, |i| complements[i].is_some());
            if p.len() != tuples.len() || p.iter().zip(tuples).any(|(a, t)| *a != t.gens) {
                return Err(malformed("tuple list differs from P"));
            }
            let mut pts = Vec::new();
            for t in tuples {
                let [a1, b1, a2, b2, a3, b3] = t.gens.map(|i| g[i].as_str());
                out.push(agree(a1, t.x, b1, t.t));
                out.push(agree(b3, t.y, a3, t.s));
                out.push(differ(a2, t.t, b2, t.s));
                out.push(claim_maps(THETA, t.x, t.x));
                out.push(claim_maps(PHI, t.y, t.x));
                pts.push(t.x);
                pts.push(t.y);
            }
            out.push(Claim::Distinct { points: pts });
            let pivot = tuples.first().map_or(0, |t| t.y);
            out.push(differ(THETA, pivot, PHI, pivot));
            out.push(in_class(THETA, ClassTag::Sym));
            out.push(in_class(PHI, ClassTag::Sym));
        }
        Proof::LeftSurj2 { kinds, v, picks } => {
            if kinds.len() != n {
                return Err(malformed("one classification per generator expected"));
            }
            for (name, k) in g.iter().zip(kinds) {
                out.push(in_class(name, ClassTag::Surj));
                kind_claims(name, k, &mut out);
            }
            let want: Vec<(usize, usize)> =
                (0..n).filter(|&i| kinds[i] == GenKind::Sym).flat_map(|mu| (0..n).map(move |l| (mu, l))).collect();
            if want.len() != v.len() || want.iter().zip(v).any(|(&(mu, l), e)| e.mu != mu || e.lambda != l) {
                return Err(malformed("V differs from the Sym generators times U"));
            }
            for e in v {
                let expr = v_expr(&c.maps, &g[e.mu], &g[e.lambda])?;
                out.push(Claim::Defined { name: v_name(e.mu, e.lambda), expr });
            }
            let order: Vec<(usize, usize, usize)> =
                (0..n).flat_map(|a| (0..n).flat_map(move |b| (0..v.len()).map(move |k| (a, b, k)))).collect();
            if order.len() != picks.len()
                || order.iter().zip(picks).any(|(&(a, b, k), p)| p.alpha != a || p.beta != b || p.v != k)
            {
                return Err(malformed("picks differ from U × U × V"));
            }
            for p in picks {
                out.push(claim_maps(&g[p.beta], p.z, v[p.v].y));
                out.push(claim_maps(&g[p.alpha], p.z, p.x));
            }
            let avoid = surj2_avoid(&c.maps, g, v)?;
            let mut xs: Vec<u64> = picks.iter().map(|p| p.x).collect();
            xs.sort_unstable();
            xs.dedup();
            out.push(Claim::Colarge { set: avoid.clone() });
            out.push(Claim::FiberAvoids { f: THETA.into(), values: xs, set: avoid });
            out.push(in_class(THETA, ClassTag::DBL));
        }
        Proof::LeftSurj3 { kinds, tuples, moved } => {
            if kinds.len() != n {
                return Err(malformed("one classification per generator expected"));
            }
            for (name, k) in g.iter().zip(kinds) {
                out.push(in_class(name, ClassTag::Surj));
                kind_claims(name, k, &mut out);
            }
            let p = tuples6(n, |i| kinds[i] == GenKind::Sym);
            if p.len() != tuples.len() || p.iter().zip(tuples).any(|(a, t)| *a != t.gens) {
                return Err(malformed("tuple list differs from P"));
            }
            for t in tuples {
                let (lhs, rhs) = (surj_lhs(g, &t.gens), surj_rhs(g, &t.gens));
                let (yes, no) = match t.holds {
                    Holds::Lhs => (lhs, rhs),
                    Holds::Rhs => (rhs, lhs),
                };
                out.push(Claim::Related { rel: yes, x: t.u, y: t.v, path: t.path.clone() });
                out.push(Claim::Unrelated { rel: no, x: t.u, y: t.v });
            }
            out.push(differ(THETA, *moved, ONE, *moved));
            out.push(in_class(THETA, ClassTag::Sym));
        }
    }
    Ok(out)
}

/// Derive and evaluate the obligations, filling in `checked`.
pub fn seal(mut c: RefutationCertificate) -> RResult<RefutationCertificate> {
    let claims = obligations(&c)?;
    let env = Env::new(&c.maps, c.window);
    c.checked = evaluate_all(&env, &claims)?;
    Ok(c)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplayReport {
    pub claims: usize,
    /// Claims whose recomputed outcome differs from the recorded one.
    pub discrepancies: Vec<usize>,
    /// Claims that do not hold on recomputation.
    pub failing: Vec<usize>,
    pub windowed: usize,
}

impl ReplayReport {
    pub fn passed(&self) -> bool {
        self.claims > 0 && self.discrepancies.is_empty() && self.failing.is_empty()
    }
}

/// Check a certificate using only its serialized content.
pub fn replay(c: &RefutationCertificate) -> RResult<ReplayReport> {
    let claims = obligations(c)?;
    let recorded: Vec<&Claim> = c.checked.iter().map(|k| &k.claim).collect();
    if recorded.len() != claims.len() || recorded.iter().zip(&claims).any(|(a, b)| *a != b) {
        return Err(malformed("recorded claims differ from the obligations"));
    }
    let env = Env::new(&c.maps, c.window);
    let fresh = evaluate_all(&env, &claims)?;
    let mut report = ReplayReport { claims: claims.len(), discrepancies: vec![], failing: vec![], windowed: 0 };
    for (i, (now, then)) in fresh.iter().zip(&c.checked).enumerate() {
        let o: Outcome = now.outcome;
        if o != then.outcome {
            report.discrepancies.push(i);
        }
        if !o.holds {
            report.failing.push(i);
        }
        if matches!(o.basis, Basis::Window(_)) {
            report.windowed += 1;
        }
    }
    Ok(report)
}

pub fn replay_json(s: &str) -> RResult<ReplayReport> {
    replay(&RefutationCertificate::from_json(s)?)
}

fn same_element(g: &Gen, e: &Entry) -> bool {
    match g {
        Gen::One => e.map == MapExpr::Id,
        _ => g.as_map() == Some(&e.map),
    }
}

/// Whether `seq` joins the constructed pair over the certificate's
/// generators within its depth, ignoring the certificate's own claims.
pub fn check_conflict(c: &RefutationCertificate, seq: &DerivationSequence, window: u64) -> RResult<()> {
    let Some(side) = c.target.side() else { return Ok(()) };
    if seq.side != side || seq.len() as u64 > c.depth {
        return Ok(());
    }
    let (t, p) = (&c.maps[&c.constructed[0]], &c.maps[&c.constructed[1]]);
    let ends =
        (same_element(&seq.a, t) && same_element(&seq.b, p)) || (same_element(&seq.a, p) && same_element(&seq.b, t));
    if !ends {
        return Ok(());
    }
    let gens: Vec<&Entry> = c.generators.iter().map(|n| &c.maps[n]).collect();
    let from_u = |x: &Gen| gens.iter().any(|e| same_element(x, e));
    if !seq.steps.iter().all(|s| from_u(&s.u) && from_u(&s.v)) {
        return Ok(());
    }
    let verified = verify_sequence(seq, window).map(|r| r.passed()).unwrap_or(false);
    if verified {
        return Err(RefuteError::Conflict(format!(
            "a verified sequence of length {} joins the pair that the certificate separates at depth {}",
            seq.len(),
            c.depth
        )));
    }
    Ok(())
}

/// A certificate and a witness sequence may not both stand: the certificate
/// must replay, and no verified sequence within its depth may join its pair.
pub fn soundness_gate(c: &RefutationCertificate, seq: &DerivationSequence, window: u64) -> RResult<()> {
    let report = replay(c)?;
    if !report.passed() {
        return Err(RefuteError::Replay(format!(
            "{} failing claims, {} discrepancies",
            report.failing.len(),
            report.discrepancies.len()
        )));
    }
    check_conflict(c, seq, window)
}
