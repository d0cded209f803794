use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use refuters::Target;
use semigroup_classes::ClassTag;

#[derive(Debug, Parser)]
#[command(
    name = "semidiam",
    version,
    about = "Diameter witnesses, refutations and finite oracles for semigroups of maps"
)]
pub struct Cli {
    #[command(subcommand)]
    pub cmd: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build and verify a derivation sequence between two maps.
    Witness(WitnessArgs),
    /// Refute a candidate generating set and replay the certificate.
    Refute(RefuteArgs),
    /// Finite semigroups: closure, diameters and least diameters.
    #[command(subcommand)]
    Oracle(OracleCmd),
    /// Partition monoids: products, stars, diagrams and the diagonal witness.
    #[command(subcommand)]
    Partition(PartitionCmd),
    /// Replay a run report, a refutation certificate or a derivation sequence.
    Check(CheckArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Right,
    Left,
}

#[derive(Debug, Args)]
pub struct WitnessArgs {
    #[arg(long, value_enum)]
    pub side: SideArg,
    /// Class tag, e.g. T, F, H, BL, Inj, DBL, Surj, I.
    #[arg(long)]
    pub class: ClassTag,
    /// JSON file with the first map and its capability.
    #[arg(long, requires = "phi", conflicts_with = "seed")]
    pub theta: Option<PathBuf>,
    #[arg(long, requires = "theta")]
    pub phi: Option<PathBuf>,
    /// Sample both maps from this seed instead.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 4096)]
    pub window: u64,
    #[arg(long, default_value_t = 1 << 15)]
    pub budget: u64,
}

#[derive(Debug, Args)]
pub struct RefuteArgs {
    /// One of right-ideal, left-ideal, right-cong, left-cong, right-bl2,
    /// right-inj3, left-surj2, left-surj3.
    #[arg(long, required_unless_present = "check")]
    pub target: Option<Target>,
    /// Depth for the congruence targets; fixed for the others.
    #[arg(long)]
    pub depth: Option<u64>,
    /// JSON array of certified maps.
    #[arg(long, conflicts_with_all = ["fixture", "seed"])]
    pub gens: Option<PathBuf>,
    /// Label of a shipped generator set for the target.
    #[arg(long, conflicts_with = "seed")]
    pub fixture: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 256)]
    pub window: u64,
    #[arg(long, default_value_t = 1 << 20)]
    pub block: u64,
    #[arg(long, default_value_t = 1 << 12)]
    pub budget: u64,
    /// Replay a certificate file instead of refuting.
    #[arg(long, conflicts_with_all = ["target", "gens", "fixture", "seed"])]
    pub check: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GensArg {
    /// JSON generator spec: transformations, partitions or a table.
    #[arg(long)]
    pub gens: PathBuf,
    /// Largest semigroup the closure may build.
    #[arg(long, default_value_t = 4096)]
    pub cap: usize,
}

#[derive(Debug, Subcommand)]
pub enum OracleCmd {
    /// Close the generators and print the table.
    Gen(GensArg),
    /// Distances and diameter for a set of pairs.
    Diam {
        #[command(flatten)]
        gens: GensArg,
        #[arg(long, value_enum, default_value = "right")]
        side: SideArg,
        /// Pairs of element indices, e.g. `0:1,2:3`.
        #[arg(long, default_value = "")]
        pairs: String,
        /// Also write the distance matrix here, unrelated pairs left empty.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Least diameter over small pair sets, and the exact diameter.
    Search {
        #[command(flatten)]
        gens: GensArg,
        #[arg(long, value_enum, default_value = "right")]
        side: SideArg,
        #[arg(long, default_value_t = 2)]
        max_pairs: usize,
        /// Beam width for semigroups too large for exhaustive search.
        #[arg(long)]
        beam: Option<usize>,
    },
}

#[derive(Debug, Subcommand)]
pub enum PartitionCmd {
    /// Product of two partitions given as JSON or as diagrams.
    Mul {
        a: PathBuf,
        b: PathBuf,
    },
    Star {
        a: PathBuf,
    },
    Render {
        a: PathBuf,
        /// Print only the diagram.
        #[arg(long)]
        plain: bool,
    },
    /// Verify the diagonal witness for a pair of symbolic partitions.
    Check {
        #[arg(long, requires = "phi", conflicts_with = "seed")]
        theta: Option<PathBuf>,
        #[arg(long, requires = "theta")]
        phi: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Sample partial Brauer partitions.
        #[arg(long)]
        pb: bool,
        #[arg(long, default_value_t = crate::job::PARTITION_WINDOW)]
        window: u64,
    },
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    pub file: PathBuf,
    /// Window for a bare derivation sequence.
    #[arg(long, default_value_t = 4096)]
    pub window: u64,
}
