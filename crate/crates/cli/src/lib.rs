//! The `semidiam` command line. Every command resolves its arguments into a
//! [`Job`] holding all terms, runs it, and prints a [`RunReport`] that
//! `check` can replay on its own.

pub mod args;
pub mod job;
pub mod report;
pub mod samples;

use std::path::Path;

use clap::Parser;
use partition_monoid::{parse_ascii, random_tiled, FinitePartition, SymbolicPartition};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use refuters::{fixtures, replay, Entry, RefutationCertificate, Target};
use right_witness::{verify_sequence, DerivationSequence, Side};
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use args::{Cli, Command, OracleCmd, PartitionCmd, SideArg};
pub use job::{Job, OracleJob, PartitionJob, RefuteJob, WitnessJob};
pub use report::{
    CResult, CliError, Executed, RunReport, Verification, EXIT_CAPABILITY, EXIT_OK, EXIT_USAGE, EXIT_VERIFY,
};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn error(e: &CliError) -> Self {
        Outcome { stdout: String::new(), stderr: format!("{e}\n"), code: e.code() }
    }
}

/// Run the command line `argv`, program name first.
pub fn run(argv: Vec<String>) -> Outcome {
    left_witness::register_generators();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { stdout: String::new(), stderr: text, code: EXIT_USAGE }
            } else {
                Outcome { stdout: text, stderr: String::new(), code: EXIT_OK }
            };
        }
    };
    let echo: Vec<String> = argv.into_iter().skip(1).collect();
    match dispatch(cli.cmd, echo) {
        Ok(o) => o,
        Err(e) => Outcome::error(&e),
    }
}

fn dispatch(cmd: Command, echo: Vec<String>) -> CResult<Outcome> {
    let job = match cmd {
        Command::Check(a) => return check_file(&a.file, a.window),
        Command::Refute(a) if a.check.is_some() => return check_file(a.check.as_deref().expect("checked"), 4096),
        Command::Witness(a) => Job::Witness(resolve_witness(a)?),
        Command::Refute(a) => Job::Refute(resolve_refute(a)?),
        Command::Oracle(OracleCmd::Diam { gens, side, pairs, csv }) => {
            let job = OracleJob::Diam {
                spec: read_json(&gens.gens)?,
                cap: gens.cap,
                side: oracle_side(side),
                pairs: parse_pairs(&pairs)?,
            };
            let report = RunReport::build(echo, Job::Oracle(job.clone()), Job::Oracle(job).execute());
            if let (Some(path), Some(d)) = (csv, report.outputs.get("distances")) {
                write_csv(&path, d)?;
            }
            return Ok(finish(&report));
        }
        Command::Oracle(o) => Job::Oracle(resolve_oracle(o)?),
        Command::Partition(PartitionCmd::Render { a, plain: true }) => {
            let job = Job::Partition(PartitionJob::Render { a: read_partition(&a)? });
            let report = RunReport::build(echo, job.clone(), job.execute());
            let mut out = finish(&report);
            if let Some(Value::String(d)) = report.outputs.get("diagram") {
                out.stdout = d.clone();
            }
            return Ok(out);
        }
        Command::Partition(p) => Job::Partition(resolve_partition(p)?),
    };
    let report = RunReport::build(echo, job.clone(), job.execute());
    Ok(finish(&report))
}

fn finish(report: &RunReport) -> Outcome {
    let stderr = match report.outputs.get("error") {
        Some(Value::String(e)) => format!("{e}\n"),
        _ if report.exit_status == EXIT_VERIFY => "verification failed\n".into(),
        _ => String::new(),
    };
    Outcome { stdout: report.to_json() + "\n", stderr, code: report.exit_status }
}

fn read_text(path: &Path) -> CResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn read_json<T: DeserializeOwned>(path: &Path) -> CResult<T> {
    serde_json::from_str(&read_text(path)?).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

/// JSON block list, or a diagram as printed by `partition render`.
fn read_partition(path: &Path) -> CResult<FinitePartition> {
    let text = read_text(path)?;
    if text.trim_start().starts_with('{') {
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    } else {
        parse_ascii(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }
}

fn witness_side(s: SideArg) -> Side {
    match s {
        SideArg::Right => Side::Right,
        SideArg::Left => Side::Left,
    }
}

fn oracle_side(s: SideArg) -> finite_oracle::Side {
    match s {
        SideArg::Right => finite_oracle::Side::Right,
        SideArg::Left => finite_oracle::Side::Left,
    }
}

fn resolve_witness(a: args::WitnessArgs) -> CResult<WitnessJob> {
    let (theta, phi) = match (a.theta, a.phi, a.seed) {
        (Some(t), Some(p), None) => (read_json(&t)?, read_json(&p)?),
        (None, None, Some(seed)) => samples::witness_pair(a.side == SideArg::Left, a.class, seed)?,
        _ => return Err(CliError::Usage("give --theta and --phi, or --seed".into())),
    };
    Ok(WitnessJob {
        side: witness_side(a.side),
        class: a.class,
        window: a.window,
        budget: a.budget,
        seed: a.seed,
        theta,
        phi,
    })
}

fn resolve_refute(a: args::RefuteArgs) -> CResult<RefuteJob> {
    let target: Target = a.target.ok_or_else(|| CliError::Usage("--target is required".into()))?;
    let depth = match (target.fixed_depth(), a.depth) {
        (Some(d), None) => d,
        (None, None) => 1,
        (_, Some(d)) => d,
    };
    let (source, gens): (String, Vec<Entry>) = match (a.gens, a.fixture, a.seed) {
        (Some(path), None, None) => (format!("file {}", path.display()), read_json(&path)?),
        (None, Some(label), None) => {
            let found = fixtures::crafted(target).into_iter().find(|(l, _)| *l == label);
            let (_, gens) = found.ok_or_else(|| {
                let known: Vec<&str> = fixtures::crafted(target).iter().map(|(l, _)| *l).collect();
                CliError::Usage(format!("no fixture {label:?} for {target}; known: {}", known.join(", ")))
            })?;
            (format!("fixture {label}"), gens)
        }
        (None, None, Some(seed)) => {
            let gens = fixtures::seeded(target, seed)
                .ok_or_else(|| CliError::Usage(format!("{target} has no seeded generator sets")))?;
            (format!("seed {seed}"), gens)
        }
        _ => return Err(CliError::Usage("give one of --gens, --fixture, --seed".into())),
    };
    Ok(RefuteJob { target, depth, window: a.window, block: a.block, budget: a.budget, source, gens })
}

fn parse_pairs(s: &str) -> CResult<Vec<(usize, usize)>> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            let (a, b) = p.split_once(':').ok_or_else(|| CliError::Usage(format!("bad pair {p:?}, expected a:b")))?;
            let n = |x: &str| x.trim().parse::<usize>().map_err(|_| CliError::Usage(format!("bad index {x:?}")));
            Ok((n(a)?, n(b)?))
        })
        .collect()
}

fn write_csv(path: &Path, d: &Value) -> CResult<()> {
    let io = |e: csv::Error| CliError::Usage(format!("{}: {e}", path.display()));
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    for row in d.as_array().into_iter().flatten() {
        let cells: Vec<String> = row
            .as_array()
            .into_iter()
            .flatten()
            .map(|x| x.as_u64().map(|v| v.to_string()).unwrap_or_default())
            .collect();
        w.write_record(&cells).map_err(io)?;
    }
    w.flush().map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn resolve_oracle(o: OracleCmd) -> CResult<OracleJob> {
    Ok(match o {
        OracleCmd::Gen(g) => OracleJob::Gen { spec: read_json(&g.gens)?, cap: g.cap },
        OracleCmd::Diam { gens, side, pairs, .. } => OracleJob::Diam {
            spec: read_json(&gens.gens)?,
            cap: gens.cap,
            side: oracle_side(side),
            pairs: parse_pairs(&pairs)?,
        },
        OracleCmd::Search { gens, side, max_pairs, beam } => {
            OracleJob::Search { spec: read_json(&gens.gens)?, cap: gens.cap, side: oracle_side(side), max_pairs, beam }
        }
    })
}

fn resolve_partition(p: PartitionCmd) -> CResult<PartitionJob> {
    Ok(match p {
        PartitionCmd::Mul { a, b } => PartitionJob::Mul { a: read_partition(&a)?, b: read_partition(&b)? },
        PartitionCmd::Star { a } => PartitionJob::Star { a: read_partition(&a)? },
        PartitionCmd::Render { a, .. } => PartitionJob::Render { a: read_partition(&a)? },
        PartitionCmd::Check { theta, phi, seed, pb, window } => {
            let (theta, phi): (SymbolicPartition, SymbolicPartition) = match (theta, phi, seed) {
                (Some(t), Some(p), None) => (read_json(&t)?, read_json(&p)?),
                (None, None, Some(seed)) => {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    (random_tiled(&mut rng, pb), random_tiled(&mut rng, pb))
                }
                _ => return Err(CliError::Usage("give --theta and --phi, or --seed".into())),
            };
            PartitionJob::Check { theta, phi, window, seed }
        }
    })
}

/// Replay a run report: run its inputs again and compare everything that
/// came out. Returns the fields that differ.
pub fn replay_report(r: &RunReport) -> Vec<&'static str> {
    let again = RunReport::build(r.command.clone(), r.inputs.clone(), r.inputs.execute());
    let mut diff = Vec::new();
    if again.outputs != r.outputs {
        diff.push("outputs");
    }
    if again.verification != r.verification {
        diff.push("verification");
    }
    if again.exit_status != r.exit_status {
        diff.push("exit_status");
    }
    if r.exit_status == EXIT_OK && !r.verification.iter().all(|v| v.passed) {
        diff.push("recorded verification");
    }
    diff
}

fn check_file(path: &Path, window: u64) -> CResult<Outcome> {
    let text = read_text(path)?;
    let value: Value = serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let field = |k: &str| value.get(k).is_some();
    let (summary, code) = if field("command") && field("inputs") {
        let r: RunReport =
            serde_json::from_value(value).map_err(|e| CliError::Verify(format!("malformed report: {e}")))?;
        let diff = replay_report(&r);
        let code = if diff.is_empty() { r.exit_status } else { EXIT_VERIFY };
        (
            json!({ "kind": "run_report", "replayed": diff.is_empty(), "differs": diff, "recorded_exit_status": r.exit_status }),
            code,
        )
    } else if field("proof") && field("target") {
        let c: RefutationCertificate =
            serde_json::from_value(value).map_err(|e| CliError::Verify(format!("malformed certificate: {e}")))?;
        let (passed, detail) = match replay(&c) {
            Ok(r) => (r.passed(), serde_json::to_value(&r).expect("report serializes")),
            Err(e) => (false, Value::String(e.to_string())),
        };
        let code = if passed { EXIT_OK } else { EXIT_VERIFY };
        (json!({ "kind": "certificate", "conclusion": c.conclusion(), "replayed": passed, "replay": detail }), code)
    } else if field("steps") && field("side") {
        let s: DerivationSequence =
            serde_json::from_value(value).map_err(|e| CliError::Verify(format!("malformed sequence: {e}")))?;
        let (passed, detail) = match verify_sequence(&s, window) {
            Ok(r) => (r.passed(), serde_json::to_value(&r).expect("report serializes")),
            Err(e) => (false, Value::String(e.to_string())),
        };
        let code = if passed { EXIT_OK } else { EXIT_VERIFY };
        (json!({ "kind": "sequence", "length": s.len(), "replayed": passed, "window": detail }), code)
    } else {
        return Err(CliError::Usage(format!("{}: not a report, certificate or sequence", path.display())));
    };
    let stderr = if code == EXIT_VERIFY { "verification failed\n".to_string() } else { String::new() };
    Ok(Outcome { stdout: serde_json::to_string_pretty(&summary).expect("summary serializes") + "\n", stderr, code })
}
