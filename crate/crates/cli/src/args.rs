use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use dstar_core::scalar::parse_rational;
use dstar_core::Rational;

#[derive(Debug, Parser)]
#[command(name = "dstar", version, about = "Ramsey numbers of double stars: exact search, constructions and bounds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute r(S(n,m)) exactly, or a bracket if the budget runs out.
    Ramsey(RamseyArgs),
    /// Check a coloring for monochromatic S(n,m), or a graph against the
    /// degree/union conditions of the reduction.
    Verify(VerifyArgs),
    /// Build Burr colorings, blow-ups and random sparsified blow-ups.
    Construct(ConstructArgs),
    /// Evaluate the asymptotic bound functions, tabulate them, or draw figures.
    Bounds(BoundsArgs),
    /// Explore the valid-point region: frontier, families, c_inf, point checks.
    Validity(ValidityArgs),
}

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

#[derive(Debug, Args)]
pub struct RamseyArgs {
    /// Leaves at the larger center.
    pub n: usize,
    /// Leaves at the smaller center (m <= n).
    pub m: usize,
    /// Search node budget [default: $DSTAR_BUDGET, else 2000000000].
    #[arg(long)]
    pub budget: Option<u64>,
    /// Worker threads for the reduction search [default: available cores].
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub threads: Option<u32>,
    /// Where to write the lower-bound witness coloring [default: s<n>_<m>_witness.txt].
    #[arg(long)]
    pub witness: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("input").required(true).args(["coloring", "graph"])))]
pub struct VerifyArgs {
    /// Coloring file: the blue edges of K_p (text or graph6).
    #[arg(long)]
    pub coloring: Option<PathBuf>,
    /// Graph file checked against min degree >= p-n-1 and edge unions <= n+m+1.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Required with --coloring; with --graph, derived from the graph when omitted.
    pub n: Option<usize>,
    pub m: Option<usize>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Burr,
    Blowup,
    Sparsified,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GraphFormat {
    Text,
    Graph6,
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[arg(long, value_enum)]
    pub kind: Kind,
    /// Base graph: c5, lk7, or a graph file.
    #[arg(long)]
    pub base: Option<String>,
    /// Blob size.
    #[arg(long)]
    pub k: Option<usize>,
    /// Cross-blob edge density, as a/b or a decimal.
    #[arg(long, value_parser = rational)]
    pub p: Option<Rational>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Star parameters for --kind burr.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub m: Option<usize>,
    /// Output file; for burr, the stem of the two coloring files.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = GraphFormat::Text)]
    pub format: GraphFormat,
    /// Print the report as JSON instead of text.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("mode").required(true).args(["table", "eval", "figure"])))]
pub struct BoundsArgs {
    /// CSV of rhat_l, rhat_u, rhat*_l and their ratio over a grid.
    #[arg(long)]
    pub table: bool,
    #[arg(long, value_parser = rational, default_value = "1")]
    pub x_min: Rational,
    #[arg(long, value_parser = rational, default_value = "4")]
    pub x_max: Rational,
    #[arg(long, value_parser = rational, default_value = "1/1000")]
    pub step: Rational,
    /// Evaluate every bound at one x >= 1.
    #[arg(long, value_parser = rational)]
    pub eval: Option<Rational>,
    /// SVG chart: 1 valid and invalid regions, 2 the bound curves, 3 their ratio.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
    pub figure: Option<u8>,
    /// Output file [default: stdout].
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    C5,
    Lk7,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("mode").required(true).args(["frontier", "family", "cinf", "check"])))]
pub struct ValidityArgs {
    /// Pareto frontier of all graphs of this order (at most 10), as CSV plus witness files.
    #[arg(long)]
    pub frontier: Option<usize>,
    /// Family curve as CSV.
    #[arg(long, value_enum)]
    pub family: Option<FamilyArg>,
    /// Number of intervals the family curve's p in [0,1] is split into.
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u32).range(1..=1_000_000))]
    pub steps: u32,
    /// Upper bound on c_inf from the L(K7) family.
    #[arg(long)]
    pub cinf: bool,
    /// Classify a point (delta, eta).
    #[arg(long, num_args = 2, value_names = ["DELTA", "ETA"], value_parser = rational, allow_negative_numbers = true)]
    pub check: Option<Vec<Rational>>,
    /// Directory for the frontier CSV and witnesses, or the family CSV file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub threads: Option<u32>,
    #[arg(long)]
    pub json: bool,
}
