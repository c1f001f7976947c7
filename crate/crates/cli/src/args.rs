use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Rational64;

#[derive(Debug, Parser)]
#[command(
    name = "growtight",
    version,
    about = "Growth counting and growth-tightness checks for free groups and their quotients"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact ball counts and a growth-rate estimate.
    Growth(GrowthArgs),
    /// Four-point hyperbolicity constant of a finite graph.
    Delta(DeltaArgs),
    /// Tripod approximation and the projection, chain and neighbourhood
    /// lemmas over a finite graph.
    Tripod(TripodArgs),
    /// Greedy ρ-net of a quotient ball.
    Net(NetArgs),
    /// Voronoi cells, symmetric elements, twisted products and insertion.
    Orbit(OrbitArgs),
    /// Nonexpansion and injectivity of the embedding on net words.
    Embed(EmbedArgs),
    /// End-to-end growth comparison of a free group and a quotient.
    Tightness(TightnessArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct Output {
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GrowthArgs {
    /// Presentation file or `builtin:free:N`, `builtin:abelian:N`,
    /// `builtin:cyclic-product:o1,o2,...`.
    #[arg(long)]
    pub model: String,
    #[arg(long)]
    pub radius: usize,
    /// Fit window `lo,hi`; the top quarter of the table by default.
    #[arg(long, value_parser = parse_window)]
    pub window: Option<(usize, usize)>,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Args)]
pub struct DeltaArgs {
    /// Edge-list file, `builtin:tree:R` (ball of radius R in the rank-2
    /// free group) or `builtin:cycle:N`.
    #[arg(long)]
    pub space: String,
    /// `exhaustive` or `sample:N`.
    #[arg(long, default_value = "exhaustive", value_parser = parse_mode)]
    pub mode: ModeArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeArg {
    Exhaustive,
    Sample(u64),
}

#[derive(Debug, Args)]
pub struct TripodArgs {
    #[arg(long)]
    pub space: String,
    /// δ for the bounds; the exhaustive four-point constant by default.
    #[arg(long, value_parser = parse_rational)]
    pub delta: Option<Rational64>,
    /// Three point labels: report the tripod map of this triangle only.
    #[arg(long, num_args = 3, value_names = ["X", "Y", "Z"])]
    pub points: Option<Vec<String>>,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Args)]
pub struct NetArgs {
    #[arg(long)]
    pub model: String,
    #[arg(long, value_parser = parse_rational)]
    pub rho: Rational64,
    #[arg(long)]
    pub radius: usize,
    /// Re-check separation and covering exhaustively.
    #[arg(long)]
    pub certify: bool,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OrbitCheck {
    Cells,
    Symmetric,
    Twisted,
    Separation,
    Insert,
}

#[derive(Debug, Args)]
pub struct OrbitArgs {
    #[arg(long)]
    pub xi: String,
    #[arg(long, value_enum)]
    pub check: OrbitCheck,
    /// Word length: exhaustive bound for `cells` and `insert`, sampling
    /// bound otherwise.
    #[arg(long, default_value_t = 8)]
    pub max_len: usize,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Insertion exponents `lo..=hi` as `lo,hi`.
    #[arg(long, default_value = "4,8", value_parser = parse_window)]
    pub kappas: (usize, usize),
    /// Length bound on the left factor for `insert`.
    #[arg(long, default_value_t = 3)]
    pub max_alpha: usize,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Args)]
pub struct ConstantsArgs {
    #[arg(long)]
    pub kappa: Option<i64>,
    #[arg(long, value_parser = parse_rational)]
    pub lambda: Option<Rational64>,
    #[arg(long, value_parser = parse_rational)]
    pub rho: Option<Rational64>,
    /// Accept constants that fail the hypotheses; results are then marked
    /// as not guaranteed.
    #[arg(long)]
    pub scaled: bool,
}

#[derive(Debug, Args)]
pub struct QuotientArgs {
    /// Presentation file of the ambient free group.
    #[arg(long)]
    pub presentation: PathBuf,
    /// Relators generating the normal subgroup, separated by spaces or commas.
    #[arg(long = "normal-closure", num_args = 1.., value_delimiter = ',', required = true)]
    pub normal_closure: Vec<String>,
    /// Kernel element used for the embedding; the shortest one is searched
    /// for when absent.
    #[arg(long)]
    pub xi: Option<String>,
}

#[derive(Debug, Args)]
pub struct EmbedArgs {
    #[command(flatten)]
    pub quotient: QuotientArgs,
    #[command(flatten)]
    pub constants: ConstantsArgs,
    /// Radius of the quotient ball the net is built in.
    #[arg(long, default_value_t = 40)]
    pub net_radius: usize,
    #[arg(long, default_value_t = 3)]
    pub max_blocks: usize,
    /// λ-norm bound of the exhaustive enumeration.
    #[arg(long, value_parser = parse_rational)]
    pub max_norm: Option<Rational64>,
    /// Random net words instead of the exhaustive enumeration.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 500_000)]
    pub max_words: usize,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Args)]
pub struct TightnessArgs {
    #[command(flatten)]
    pub quotient: QuotientArgs,
    #[command(flatten)]
    pub constants: ConstantsArgs,
    #[arg(long = "radius-g", default_value_t = 12)]
    pub radius_g: usize,
    #[arg(long = "radius-q", default_value_t = 20)]
    pub radius_q: usize,
    #[arg(long, default_value_t = 200_000)]
    pub max_words: usize,
    #[command(flatten)]
    pub out: Output,
}

fn parse_window(s: &str) -> Result<(usize, usize), String> {
    let (lo, hi) = s.split_once(',').ok_or("expected lo,hi")?;
    let lo = lo.trim().parse().map_err(|e| format!("{e}"))?;
    let hi = hi.trim().parse().map_err(|e| format!("{e}"))?;
    if lo > hi {
        return Err("lo exceeds hi".into());
    }
    Ok((lo, hi))
}

fn parse_mode(s: &str) -> Result<ModeArg, String> {
    match s {
        "exhaustive" => Ok(ModeArg::Exhaustive),
        _ => s
            .strip_prefix("sample:")
            .and_then(|n| n.parse().ok())
            .map(ModeArg::Sample)
            .ok_or_else(|| format!("expected exhaustive or sample:N, got {s:?}")),
    }
}

fn parse_rational(s: &str) -> Result<Rational64, String> {
    s.trim().parse::<Rational64>().map_err(|e| format!("{s:?}: {e}"))
}
