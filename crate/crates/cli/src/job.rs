//! Fully resolved inputs of each command, and running them.

use finite_oracle::{
    diameter, distances, exact_diameter, is_metric, naive_distances, search_min_diameter, square, Diameter,
    FiniteSemigroup, GenSpec, OracleError, SUBSET_GUARD,
};
use left_witness::{
    witness_left_dbl, witness_left_dbl1, witness_left_i_zero, witness_left_surj, witness_left_t,
    witness_left_t_not_inj, LeftMap,
};
use natmap_core::{Capability, MapExpr};
use partition_monoid::{
    parse_ascii, render_ascii, verify_diagonal_witness, verify_left_transfer, FinitePartition, PartitionError,
    SymbolicPartition,
};
use refuters::{refute, replay, Entry, RefuteError, RefuteOpts, Target};
use right_witness::{
    verify_sequence, witness_right_bl, witness_right_bl1, witness_right_f, witness_right_i_zero, witness_right_inj,
    witness_right_t, witness_right_t_not_surj, CertMap, DerivationSequence, Gen, Opts, Side, WitnessError,
};
use semigroup_classes::{member_check, ClassTag, Element};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::report::{CResult, CliError, Executed, Verification};
use crate::samples::Operand;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Job {
    Witness(WitnessJob),
    Refute(RefuteJob),
    Oracle(OracleJob),
    Partition(PartitionJob),
}

impl Job {
    pub fn execute(&self) -> CResult<Executed> {
        match self {
            Job::Witness(j) => j.execute(),
            Job::Refute(j) => j.execute(),
            Job::Oracle(j) => j.execute(),
            Job::Partition(j) => j.execute(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessJob {
    pub side: Side,
    pub class: ClassTag,
    pub window: u64,
    pub budget: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub theta: Operand,
    pub phi: Operand,
}

fn witness_error(e: WitnessError) -> CliError {
    match e {
        WitnessError::Verification { .. } => CliError::Verify(e.to_string()),
        other => CliError::Capability(other.to_string()),
    }
}

fn cert(o: &Operand) -> CResult<CertMap> {
    let e = o.entry()?;
    Ok(CertMap::new(e.map.clone(), e.cap.clone()))
}

fn left(o: &Operand) -> CResult<LeftMap> {
    let e = o.entry()?;
    Ok(LeftMap::new(e.map.clone(), e.cap.clone()))
}

fn gen_of(o: &Operand) -> Gen {
    match o {
        Operand::Total(e) if e.map == MapExpr::Id => Gen::One,
        Operand::Total(e) => Gen::map(e.map.clone()),
        Operand::Partial { partial } => Gen::partial(partial.clone()),
    }
}

fn same_end(g: &Gen, o: &Operand) -> bool {
    let norm = |g: &Gen| match g {
        Gen::Total { map } if *map == MapExpr::Id => Gen::One,
        other => other.clone(),
    };
    norm(g) == gen_of(o)
}

/// Largest window for membership checks.
pub const MEMBER_WINDOW: u64 = 1024;

/// The class the multipliers of a sequence for `class` are drawn from.
pub fn multiplier_class(side: Side, class: ClassTag) -> ClassTag {
    match (side, class) {
        (Side::Right, ClassTag::Sym | ClassTag::SymBL) => ClassTag::Inj,
        (Side::Left, ClassTag::SymDBL) => ClassTag::Surj,
        (_, c) => c,
    }
}

fn verdict(e: &Element, cap: &Capability, tag: ClassTag, n: u64) -> (bool, Value) {
    match member_check(e, cap, tag, n) {
        Ok(v) => (!v.is_no(), serde_json::to_value(&v).expect("verdict serializes")),
        Err(err) => (false, Value::String(err.to_string())),
    }
}

/// No endpoint and no certified multiplier is shown to lie outside its class.
pub fn check_membership(seq: &DerivationSequence, job: &WitnessJob) -> Verification {
    let n = job.window.min(MEMBER_WINDOW);
    let mut ok = true;
    let mut detail = serde_json::Map::new();
    for (what, op) in [("theta", &job.theta), ("phi", &job.phi)] {
        let (e, cap) = match op {
            Operand::Total(en) => (Element::total(en.map.clone()), en.cap.clone()),
            Operand::Partial { partial } => (Element::partial(partial.clone()), Capability::default()),
        };
        let (good, v) = verdict(&e, &cap, job.class, n);
        ok &= good;
        detail.insert(what.into(), v);
    }
    let tag = multiplier_class(job.side, job.class);
    for (i, st) in seq.steps.iter().enumerate() {
        if let (Some(m), Some(cap)) = (st.s.as_map(), &st.s_cap) {
            let (good, v) = verdict(&Element::total(m.clone()), cap, tag, n);
            ok &= good;
            detail.insert(format!("step {}", i + 1), v);
        }
    }
    Verification::new("membership", ok, detail)
}

impl WitnessJob {
    pub fn construct(&self) -> CResult<DerivationSequence> {
        use ClassTag::*;
        let opts = Opts { window: self.window, budget: self.budget, ..Opts::default() };
        let (t, p, n) = (&self.theta, &self.phi, self.window);
        let seq = match (self.side, self.class) {
            (Side::Right, T) => Ok(witness_right_t(&t.entry()?.map, &p.entry()?.map)),
            (Side::Right, F) => witness_right_f(&cert(t)?, &cert(p)?),
            (Side::Right, TNotSurj) => witness_right_t_not_surj(&cert(t)?, &cert(p)?, &opts),
            (Side::Right, BL) => witness_right_bl(&cert(t)?, &cert(p)?, &opts),
            (Side::Right, BL1) => witness_right_bl1(&cert(t)?, &cert(p)?, &opts),
            (Side::Right, Inj | SymBL | Sym) => witness_right_inj(&cert(t)?, &cert(p)?, &opts),
            (Side::Right, I) => Ok(witness_right_i_zero(t.partial()?, p.partial()?)),
            (Side::Left, T) => Ok(witness_left_t(&t.entry()?.map, &p.entry()?.map)),
            (Side::Left, TNotInj) => witness_left_t_not_inj(&left(t)?, &left(p)?, n),
            (Side::Left, DBL) => witness_left_dbl(&left(t)?, &left(p)?, n),
            (Side::Left, DBL1) => witness_left_dbl1(&left(t)?, &left(p)?, n),
            (Side::Left, Surj | SymDBL) => witness_left_surj(&left(t)?, &left(p)?, n),
            (Side::Left, I) => Ok(witness_left_i_zero(t.partial()?, p.partial()?)),
            (side, class) => {
                return Err(CliError::Capability(format!("no {side:?} witness for class {class}").to_lowercase()))
            }
        };
        seq.map_err(witness_error)
    }

    fn execute(&self) -> CResult<Executed> {
        let seq = self.construct()?;
        Ok(Executed {
            outputs: json!({ "length": seq.len(), "sequence": seq }),
            verification: check_sequence(&seq, self),
        })
    }
}

/// Endpoints match the inputs, every equation holds on the window, and no
/// input or multiplier is caught outside its class.
pub fn check_sequence(seq: &DerivationSequence, job: &WitnessJob) -> Vec<Verification> {
    let ends = seq.side == job.side && same_end(&seq.a, &job.theta) && same_end(&seq.b, &job.phi);
    let window = match verify_sequence(seq, job.window) {
        Ok(r) => Verification::new("sequence", r.passed(), r),
        Err(e) => Verification::new("sequence", false, e.to_string()),
    };
    vec![Verification::new("endpoints", ends, json!({ "side": seq.side })), window, check_membership(seq, job)]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RefuteJob {
    pub target: Target,
    pub depth: u64,
    pub window: u64,
    pub block: u64,
    pub budget: u64,
    /// Where the generators came from: a file, a fixture label or a seed.
    pub source: String,
    pub gens: Vec<Entry>,
}

fn refute_error(e: RefuteError) -> CliError {
    match e {
        RefuteError::Replay(_) | RefuteError::Conflict(_) | RefuteError::Malformed(_) => {
            CliError::Verify(e.to_string())
        }
        other => CliError::Capability(other.to_string()),
    }
}

impl RefuteJob {
    fn execute(&self) -> CResult<Executed> {
        let opts = RefuteOpts { window: self.window, block: self.block, budget: self.budget };
        let c = refute(self.target, &self.gens, self.depth, &opts).map_err(refute_error)?;
        let v = match replay(&c) {
            Ok(r) => Verification::new("replay", r.passed(), r),
            Err(e) => Verification::new("replay", false, e.to_string()),
        };
        Ok(Executed { outputs: json!({ "conclusion": c.conclusion(), "certificate": c }), verification: vec![v] })
    }
}

/// Largest semigroup whose distances are cross-checked by relaxation.
pub const DIAM_GUARD: usize = 256;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum OracleJob {
    Gen { spec: GenSpec, cap: usize },
    Diam { spec: GenSpec, cap: usize, side: finite_oracle::Side, pairs: Vec<(usize, usize)> },
    Search { spec: GenSpec, cap: usize, side: finite_oracle::Side, max_pairs: usize, beam: Option<usize> },
}

fn oracle_error(e: OracleError) -> CliError {
    match e {
        OracleError::Invalid(_) | OracleError::NotAssociative(..) => CliError::Usage(e.to_string()),
        other => CliError::Capability(other.to_string()),
    }
}

fn build(spec: &GenSpec, cap: usize) -> CResult<FiniteSemigroup> {
    spec.build(cap).map_err(oracle_error)
}

fn check_pairs(s: &FiniteSemigroup, pairs: &[(usize, usize)]) -> CResult<()> {
    match pairs.iter().find(|&&(a, b)| a >= s.len() || b >= s.len()) {
        Some(p) => Err(CliError::Usage(format!("pair {p:?} outside a semigroup of {} elements", s.len()))),
        None => Ok(()),
    }
}

impl OracleJob {
    fn execute(&self) -> CResult<Executed> {
        match self {
            OracleJob::Gen { spec, cap } => {
                let s = build(spec, *cap)?;
                let assoc = s.check_associative().is_ok();
                let outputs = json!({
                    "size": s.len(),
                    "identity": s.identity,
                    "left_zeros": s.left_zeros(),
                    "right_zeros": s.right_zeros(),
                    "labels": s.labels,
                    "table": s.table,
                });
                Ok(Executed { outputs, verification: vec![Verification::new("associative", assoc, s.len())] })
            }
            OracleJob::Diam { spec, cap, side, pairs } => {
                let s = build(spec, *cap)?;
                check_pairs(&s, pairs)?;
                if s.len() > DIAM_GUARD {
                    return Err(CliError::Capability(format!("{} elements exceed {DIAM_GUARD}", s.len())));
                }
                let d = distances(&s, pairs, *side);
                let same = d == naive_distances(&s, pairs, *side);
                let outputs = json!({ "diameter": finite_oracle::diameter_of(&d), "distances": d });
                let verification = vec![
                    Verification::new("relaxation", same, s.len()),
                    Verification::new("metric", is_metric(&d), s.len()),
                ];
                Ok(Executed { outputs, verification })
            }
            OracleJob::Search { spec, cap, side, max_pairs, beam } => {
                let s = build(spec, *cap)?;
                let r = search_min_diameter(&s, *side, *max_pairs, *beam).map_err(oracle_error)?;
                let recomputed = diameter_of_naive(&s, &r.pairs, *side);
                let mut verification = vec![Verification::new("search", recomputed == r.diameter, recomputed)];
                let exact = if s.len() <= SUBSET_GUARD {
                    let (v, d) = exact_diameter(&s, *side).map_err(oracle_error)?;
                    let again = diameter(&s, &square(&v), *side);
                    verification.push(Verification::new("exact", again == d && d <= r.diameter, again));
                    Some(json!({ "subset": v, "diameter": d }))
                } else {
                    None
                };
                Ok(Executed { outputs: json!({ "search": r, "exact": exact }), verification })
            }
        }
    }
}

fn diameter_of_naive(s: &FiniteSemigroup, pairs: &[(usize, usize)], side: finite_oracle::Side) -> Diameter {
    finite_oracle::diameter_of(&naive_distances(s, pairs, side))
}

/// Default window for symbolic partitions.
pub const PARTITION_WINDOW: u64 = 256;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum PartitionJob {
    Mul {
        a: FinitePartition,
        b: FinitePartition,
    },
    Star {
        a: FinitePartition,
    },
    Render {
        a: FinitePartition,
    },
    Check {
        theta: SymbolicPartition,
        phi: SymbolicPartition,
        window: u64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
    },
}

fn partition_error(e: PartitionError) -> CliError {
    match e {
        PartitionError::CapExceeded { .. } | PartitionError::SizeOverflow { .. } => CliError::Capability(e.to_string()),
        other => CliError::Usage(other.to_string()),
    }
}

impl PartitionJob {
    fn execute(&self) -> CResult<Executed> {
        match self {
            PartitionJob::Mul { a, b } => {
                let ab = a.product(b).map_err(partition_error)?;
                let anti = b.star().product(&a.star()).map_err(partition_error)?;
                Ok(Executed {
                    outputs: json!({ "product": ab }),
                    verification: vec![Verification::new(
                        "involution",
                        anti == ab.star(),
                        json!({ "star": ab.star() }),
                    )],
                })
            }
            PartitionJob::Star { a } => {
                let s = a.star();
                Ok(Executed {
                    outputs: json!({ "star": s }),
                    verification: vec![Verification::new("involution", s.star() == *a, a.n())],
                })
            }
            PartitionJob::Render { a } => {
                let text = render_ascii(a).map_err(partition_error)?;
                let back = parse_ascii(&text).map_err(partition_error)?;
                Ok(Executed {
                    outputs: json!({ "diagram": text }),
                    verification: vec![Verification::new("parse", back == *a, a.n())],
                })
            }
            PartitionJob::Check { theta, phi, window, .. } => {
                let d = verify_diagonal_witness(theta, phi, *window, None).map_err(partition_error)?;
                let t = verify_left_transfer(theta, phi, *window, None).map_err(partition_error)?;
                let verification = vec![
                    Verification::new(
                        "diagonal",
                        d.passed(),
                        json!({ "alpha_gamma": d.alpha_gamma, "beta_gamma": d.beta_gamma }),
                    ),
                    Verification::new(
                        "left_transfer",
                        t.passed(),
                        json!({ "alpha_gamma": t.alpha_gamma, "beta_gamma": t.beta_gamma }),
                    ),
                ];
                Ok(Executed { outputs: json!({ "gamma": d.gamma }), verification })
            }
        }
    }
}
