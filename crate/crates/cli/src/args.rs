use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Balancing-game toolkit: thresholds, sign constructions, colorings,
/// witnesses, window solving and play.
#[derive(Parser, Debug)]
#[command(name = "balgame", version, about)]
pub struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    /// Largest window volume the solver will allocate.
    #[arg(long, global = true, env = "BALGAME_WINDOW_BUDGET", default_value_t = 100_000_000)]
    pub window_budget: u128,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Critical thresholds M_crit(n) of the canonical family.
    Threshold(ThresholdArgs),
    /// Sign tables for the canonical family or its middle layer.
    Signs(SignsArgs),
    /// Chooser's starting translate t and subset S₀ at M_crit.
    Translate(TranslateArgs),
    /// Red/Blue coloring of the m-subsets of {1..2m}.
    Coloring(ColoringArgs),
    /// Translate witnesses at the vertices of a finite V-closed set.
    Witness(WitnessArgs),
    /// Maximal V-closed subset of a box window.
    Maximal(MaximalArgs),
    /// Automated play between a Chooser and a Pusher strategy.
    Simulate(SimulateArgs),
    /// Interactive play against the computer on stdin/stdout.
    Play(PlayArgs),
}

#[derive(Args, Debug)]
pub struct ThresholdArgs {
    /// Dimension; repeatable. Defaults to 2..=12.
    #[arg(long = "n", value_parser = clap::value_parser!(u32).range(2..=100))]
    pub n: Vec<u32>,
    /// Cross-check against the window solver for M around M_crit.
    #[arg(long)]
    pub verify: bool,
    /// Sweep half-width for --verify.
    #[arg(long, default_value_t = 2)]
    pub margin: i64,
    /// Allow --verify above n = 4.
    #[arg(long)]
    pub allow_large: bool,
}

#[derive(Args, Debug)]
#[command(group = clap::ArgGroup::new("which").args(["odd", "middle", "verify_fixtures"]).required(true).multiple(true))]
pub struct SignsArgs {
    /// Majority signs over the canonical family, odd n.
    #[arg(long, value_name = "N", conflicts_with = "middle")]
    pub odd: Option<usize>,
    /// Balanced signs over the middle layer, even n.
    #[arg(long, value_name = "N")]
    pub middle: Option<usize>,
    /// Recompute the signed sum; for bundled dimensions also check the reference table.
    #[arg(long)]
    pub verify: bool,
    /// Re-verify every bundled reference table.
    #[arg(long)]
    pub verify_fixtures: bool,
    /// Write the table here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct TranslateArgs {
    #[arg(long = "n", value_parser = clap::value_parser!(u32).range(2..=24))]
    pub n: u32,
}

#[derive(Args, Debug)]
pub struct ColoringArgs {
    /// Half the ground-set size.
    #[arg(long = "m", required_unless_present = "check")]
    pub m: Option<usize>,
    /// Write the design file here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Verify an existing design file instead of building one.
    #[arg(long, value_name = "FILE", conflicts_with = "m")]
    pub check: Option<PathBuf>,
    /// Allow m above 8.
    #[arg(long)]
    pub allow_large: bool,
}

#[derive(Args, Debug)]
pub struct WitnessArgs {
    /// Family file (`dim n` header, one member per line).
    #[arg(long, required_unless_present = "check")]
    pub family: Option<PathBuf>,
    /// Point-set file, one point per line.
    #[arg(long, required_unless_present = "check")]
    pub set: Option<PathBuf>,
    /// Only this vertex, e.g. `2,0`.
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<String>,
    /// Write the certificates as a JSON array.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Replay certificates from a JSON file written by --out.
    #[arg(long, value_name = "FILE", conflicts_with_all = ["family", "set"])]
    pub check: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct MaximalArgs {
    #[arg(long)]
    pub family: PathBuf,
    /// Box as `lo:hi,lo:hi,...`.
    #[arg(long, allow_hyphen_values = true)]
    pub window: String,
    /// Write the safe set here.
    #[arg(long)]
    pub dump: Option<PathBuf>,
    /// Strategy steps to include in the report.
    #[arg(long, default_value_t = 8)]
    pub sample: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum PusherKind {
    Random,
    Rank,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChooserKind {
    /// Play inside t + P(V) from the explicit construction.
    Translate,
    /// Stay inside the solved safe set.
    Safe,
    /// Maximize the smallest slack.
    Greedy,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[arg(long = "n", value_parser = clap::value_parser!(u32).range(2..=24))]
    pub n: u32,
    /// Uniform bound M of the region K_M; defaults to M_crit(n).
    #[arg(long = "M", allow_hyphen_values = true)]
    pub m: Option<i64>,
    #[arg(long, value_enum, default_value_t = PusherKind::Random)]
    pub pusher: PusherKind,
    #[arg(long, value_enum, default_value_t = ChooserKind::Translate)]
    pub chooser: ChooserKind,
    #[arg(long, default_value_t = 10_000)]
    pub rounds: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the full transcript as JSON.
    #[arg(long)]
    pub transcript: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Pusher,
    Chooser,
}

#[derive(Args, Debug)]
pub struct PlayArgs {
    #[arg(long = "n", value_parser = clap::value_parser!(u32).range(2..=12))]
    pub n: u32,
    #[arg(long = "M", allow_hyphen_values = true)]
    pub m: Option<i64>,
    /// Which side the human plays.
    #[arg(long, value_enum)]
    pub human: Side,
    #[arg(long, default_value_t = 50)]
    pub rounds: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}
