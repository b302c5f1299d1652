use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod report;

#[derive(Parser, Debug)]
#[command(name = "pathmetric", version, about = "Path metrics, geodesic weights and effective resistance on weighted graphs")]
pub struct Cli {
    /// Print one JSON document instead of the human-readable report.
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Path metric for one pair or all pairs.
    Metric(MetricArgs),
    /// All geodesics between two vertices.
    Geodesics(GeodesicsArgs),
    /// Geodesic weight table and the maximal-weight check.
    GeodesicWeight(InputArgs),
    /// Effective resistance, optionally with the harmonic maximizer.
    Resistance(ResistanceArgs),
    /// Tree, block-graph and triangle-equality characterizations.
    Characterize(CharacterizeArgs),
    /// Ball or local-finiteness scan of a builtin infinite family.
    Family(FamilyArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphMode {
    Weight,
    Conductance,
}

#[derive(Args, Debug)]
pub struct InputArgs {
    /// Edge-list file: `a b value` per line, `#` comments, `vertex a` declarations.
    pub file: PathBuf,

    /// How to read edge values. Metric commands default to weight,
    /// resistance commands to conductance; the other reading is inverted.
    #[arg(long, value_enum)]
    pub mode: Option<GraphMode>,
}

#[derive(Args, Debug)]
pub struct MetricArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, requires = "target")]
    pub source: Option<String>,
    #[arg(long, requires = "source")]
    pub target: Option<String>,
    /// Full table (the default without --source/--target).
    #[arg(long, conflicts_with_all = ["source", "target"])]
    pub all_pairs: bool,
    /// Also compute exact values by exhaustive path enumeration.
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Args, Debug)]
pub struct GeodesicsArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub source: String,
    #[arg(long)]
    pub target: String,
    /// Stop after this many geodesics.
    #[arg(long, default_value_t = 64)]
    pub cap: usize,
}

#[derive(Args, Debug)]
pub struct ResistanceArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, num_args = 2, value_names = ["X", "Y"], conflicts_with = "matrix")]
    pub pair: Option<Vec<String>>,
    /// Full table (the default without --pair).
    #[arg(long)]
    pub matrix: bool,
    /// Also compute exact values by spanning-forest enumeration.
    #[arg(long)]
    pub oracle: bool,
    /// Print the unit-energy harmonic potential for --pair.
    #[arg(long, requires = "pair")]
    pub maximizer: bool,
}

#[derive(Args, Debug)]
pub struct CharacterizeArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub tree: bool,
    #[arg(long)]
    pub block: bool,
    #[arg(long, num_args = 3, value_names = ["X", "Y", "Z"])]
    pub triangle: Option<Vec<String>>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanMode {
    Ball,
    Elf,
}

#[derive(Args, Debug)]
pub struct FamilyArgs {
    /// unit-star, decaying-star, unit-ray or decaying-ray.
    pub name: String,
    #[arg(long, value_enum, default_value_t = ScanMode::Ball)]
    pub mode: ScanMode,
    /// Vertex descriptor such as `c`, `l3` or `x0`; defaults to the first vertex.
    #[arg(long)]
    pub center: Option<String>,
    #[arg(long, value_parser = positive_real)]
    pub radius: f64,
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    pub budget: u64,
    /// Defaults to the budget.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub threshold: Option<u64>,
}

fn positive_real(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("expected a positive real, got `{s}`")),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli.command) {
        Ok(report) => {
            if cli.json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.to_human());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
