//! `clan`: two-stage community detection from the shell.
//!
//! Subcommands: `detect` (partition a graph, reassign small-community nodes
//! by their tokens), `evaluate` (score a detection run against ground truth),
//! `audit` (count tokens lost to unassigned nodes), `skew` (degree-skew
//! sweep comparing both methods), and `generate` (seeded attributed
//! block-model datasets).

mod audit;
mod common;
mod detect;
mod evaluate;
mod generate;
mod skew;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "clan",
    version,
    about = "Inclusive two-stage community detection"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Clan,
    Louvain,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Clan => "clan",
            Method::Louvain => "louvain",
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
    Gexf,
    Tsv,
}

#[derive(Subcommand)]
enum Command {
    /// Detect communities; writes communities.json, report.json, and an
    /// optional graph export
    Detect(DetectArgs),
    /// Score a detection run against ground-truth labels; writes report.json
    /// and an agreement export
    Evaluate(EvaluateArgs),
    /// Report tokens carried only by unassigned nodes; writes audit.json
    Audit(AuditArgs),
    /// Subsample to target degree-ratio slopes and compare both methods
    Skew(SkewArgs),
    /// Generate an attributed block-model dataset from a spec file
    Generate(GenerateArgs),
}

#[derive(Args)]
pub struct DetectArgs {
    /// Tab-separated edge list
    #[arg(long)]
    pub edges: PathBuf,
    /// JSON-lines token attributes (required for --method clan)
    #[arg(long)]
    pub attrs: Option<PathBuf>,
    /// Significance threshold; defaults to max(10, 1% of nodes)
    #[arg(long)]
    pub threshold: Option<usize>,
    /// Classifier smoothing
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, env = "CLAN_SEED", default_value_t = 42)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Method::Clan)]
    pub method: Method,
    /// Output directory
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Ignore edge multiplicities (every merged edge gets weight 1)
    #[arg(long)]
    pub unweighted: bool,
}

#[derive(Args)]
pub struct EvaluateArgs {
    /// Ground-truth CSV `id,label`
    #[arg(long)]
    pub labels: PathBuf,
    /// Token attributes; enables the discarded-token section of the report
    #[arg(long)]
    pub attrs: Option<PathBuf>,
    /// Edge list; required for dot/gexf agreement exports
    #[arg(long)]
    pub edges: Option<PathBuf>,
    /// Directory holding communities.json; outputs are written here too
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long)]
    pub unweighted: bool,
}

#[derive(Args)]
pub struct AuditArgs {
    #[arg(long)]
    pub attrs: PathBuf,
    /// Directory holding communities.json; audit.json is written here
    #[arg(long)]
    pub out: PathBuf,
    /// Audit only '#'-prefixed tokens
    #[arg(long)]
    pub hashtags_only: bool,
}

#[derive(Args)]
pub struct SkewArgs {
    #[arg(long)]
    pub edges: PathBuf,
    #[arg(long)]
    pub attrs: PathBuf,
    #[arg(long)]
    pub labels: PathBuf,
    /// Comma-separated target slopes, e.g. `-0.5,0,0.5`
    #[arg(
        long,
        value_delimiter = ',',
        required = true,
        allow_hyphen_values = true
    )]
    pub slopes: Vec<f64>,
    #[arg(long)]
    pub threshold: Option<usize>,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, env = "CLAN_SEED", default_value_t = 42)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub unweighted: bool,
}

#[derive(Args)]
pub struct GenerateArgs {
    /// Block-model spec (JSON)
    pub spec: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Detect(args) => detect::run(&args),
        Command::Evaluate(args) => evaluate::run(&args),
        Command::Audit(args) => audit::run(&args),
        Command::Skew(args) => skew::run(&args),
        Command::Generate(args) => generate::run(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
