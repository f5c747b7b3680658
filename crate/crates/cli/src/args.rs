use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "trotter",
    version,
    about = "Products of matrix exponentials over balanced words"
)]
pub struct Cli {
    /// Cap on worker threads (default: available parallelism).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List every word with n copies of each letter, in lexicographic order.
    Enumerate(EnumerateArgs),
    /// Swap distance and the area and sup metrics between two words.
    Metrics(MetricsArgs),
    /// Counting bounds on words far from the standard word.
    Bounds(BoundsArgs),
    /// Lie-Trotter error against its first-order bound.
    Trotter(TrotterArgs),
    /// Smallest n from which each large-n inequality holds.
    BoundSweep(SweepArgs),
    /// Proportion of products within a threshold of the exponential of the sum.
    Concentrate(ConcentrateArgs),
    /// All (or sampled) products for one n, with marker matrices.
    Cloud(CloudArgs),
    /// One random word per n and the distance of its product from the limit.
    AsRun(AsRunArgs),
    /// Compare the E12/E11 closed form with computed products on all words.
    AppendixCheck(AppendixArgs),
    /// Start the HTTP service.
    Serve(ServeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exhaustive,
    Sample,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    /// A = E12, B = E21.
    #[value(name = "e12-e21")]
    E12E21,
    /// A = E12, B = E11.
    #[value(name = "e12-e11")]
    E12E11,
    /// Two commuting diagonal matrices.
    CommutingDiagonal,
    /// B a polynomial in A.
    CommutingPolynomial,
    /// A = E12, B = E23 in dimension 3.
    QuasiCommuting,
    /// A = E11, B = E12.
    CommutatorProportional,
}

#[derive(Debug, Clone, Args)]
pub struct MatrixArgs {
    /// JSON file with the first matrix.
    #[arg(long)]
    pub a: Option<PathBuf>,
    /// JSON file with the second matrix.
    #[arg(long)]
    pub b: Option<PathBuf>,
    /// JSON file with one matrix; repeat for three or more (replaces --a/--b).
    #[arg(long = "matrix", conflicts_with_all = ["a", "b"])]
    pub matrices: Vec<PathBuf>,
    /// Built-in pair used when no matrix files are given.
    #[arg(long, value_enum, default_value = "e12-e21")]
    pub preset: Preset,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct EnumerateArgs {
    /// Copies of each letter in a word.
    #[arg(long)]
    pub n: usize,
    /// Number of distinct letters.
    #[arg(long, default_value_t = 2)]
    pub alphabet: usize,
    /// One word per line when omitted.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct MetricsArgs {
    /// First word, e.g. AABB.
    #[arg(long)]
    pub word1: String,
    /// Second word over the same letters.
    #[arg(long)]
    pub word2: String,
    /// `key=value` lines when omitted.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct BoundsArgs {
    /// Copies of each letter in a word.
    #[arg(long)]
    pub n: u64,
    #[arg(long, default_value_t = 2)]
    pub alphabet: usize,
    /// Threshold on the sup metric as M/n; every M in 1..=n when omitted.
    #[arg(long)]
    pub m: Option<u64>,
    /// Report the asymptotic proportion bound at deviation p/√n instead of counting.
    #[arg(long, conflicts_with_all = ["m", "eps"])]
    pub p: Option<f64>,
    /// Report the large-deviation estimate at level ε instead of counting.
    #[arg(long, conflicts_with = "m")]
    pub eps: Option<f64>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct TrotterArgs {
    #[command(flatten)]
    pub matrices: MatrixArgs,
    /// One or more n, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub n: Vec<usize>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub matrices: MatrixArgs,
    /// Largest n swept.
    #[arg(long, default_value_t = 64)]
    pub max_n: usize,
    /// Sampled words per n for the one-swap bound.
    #[arg(long, default_value_t = 8)]
    pub words_per_n: usize,
    /// Seed of the word sampler.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SelectionArgs {
    /// Copies of each letter in a word.
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum, default_value = "exhaustive")]
    pub mode: ModeArg,
    /// Number of sampled words in sample mode.
    #[arg(long, default_value_t = 10_000)]
    pub count: usize,
    /// Seed of the word sampler.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct ConcentrateArgs {
    #[command(flatten)]
    pub matrices: MatrixArgs,
    #[command(flatten)]
    pub selection: SelectionArgs,
    /// Distance threshold; √(ln n / n) when omitted.
    #[arg(long)]
    pub threshold: Option<f64>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CloudArgs {
    #[command(flatten)]
    pub matrices: MatrixArgs,
    #[command(flatten)]
    pub selection: SelectionArgs,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct AsRunArgs {
    #[command(flatten)]
    pub matrices: MatrixArgs,
    /// Values of n, comma separated and strictly increasing.
    #[arg(long, value_delimiter = ',', default_values_t = [2usize, 4, 8, 16, 32, 64, 128, 256, 512, 1024])]
    pub n: Vec<usize>,
    /// Seed of the word sampler.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct AppendixArgs {
    /// Copies of each letter in a word.
    #[arg(long, default_value_t = 6)]
    pub n: usize,
    /// Largest Frobenius discrepancy accepted.
    #[arg(long, default_value_t = 1e-12)]
    pub tolerance: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ServeArgs {
    #[arg(long, env = "TROTTER_PORT", default_value_t = 8080)]
    pub port: u16,
    /// Address to bind.
    #[arg(long, default_value = "127.0.0.1")]
    pub host: String,
}
