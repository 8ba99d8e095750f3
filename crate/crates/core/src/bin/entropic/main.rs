//! `entropic`: command-line front end for the entropy engines.
//!
//! Exit codes: 0 success, 2 usage or input error, 3 infeasible problem.

mod commands;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "entropic",
    version,
    about = "Entropy measures, entropic clustering and entropy-seeking exploration"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Shannon or Rényi entropy of a probability vector
    Entropy(EntropyArgs),
    /// Cluster a CSV dataset by minimizing within-cluster entropy
    Cluster(ClusterArgs),
    /// Write a synthetic labeled Gaussian-mixture dataset
    Generate(GenerateArgs),
    /// Train a table learner and write its entropy trace
    Learn(LearnArgs),
    /// Run the entropy-seeking surface explorer
    Explore(ExploreArgs),
}

#[derive(Debug, Args)]
struct EntropyArgs {
    /// Comma-separated probabilities summing to 1
    #[arg(
        long,
        value_delimiter = ',',
        required = true,
        allow_hyphen_values = true
    )]
    probs: Vec<f64>,
    /// Rényi order (omit for Shannon entropy)
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    /// Logarithm base: 2, e or 10
    #[arg(long, default_value = "2")]
    base: String,
}

#[derive(Debug, Args)]
struct ClusterArgs {
    /// Input CSV (comma-separated numbers)
    #[arg(short = 'f', long = "file")]
    file: std::path::PathBuf,
    /// Number of clusters
    #[arg(long)]
    k: usize,
    /// Generations of the genetic search
    #[arg(long, default_value_t = 10_000)]
    iterations: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Run seeds a..b (inclusive) instead of --seed; outputs get a _seed<S> suffix
    #[arg(long)]
    seeds: Option<String>,
    /// Equal-width bins per feature
    #[arg(long, default_value_t = 8)]
    bins: usize,
    /// "shannon" or a Rényi order
    #[arg(long, default_value = "shannon")]
    alpha: String,
    /// Zero-based column holding integer ground-truth labels
    #[arg(long = "labels-col")]
    labels_col: Option<usize>,
    /// Skip the first line of the CSV
    #[arg(long)]
    header: bool,
    /// Mix information-guided moves into the mutation
    #[arg(long = "guided-mutation")]
    guided_mutation: bool,
    #[arg(long, default_value_t = 32)]
    population: usize,
    #[arg(long, default_value_t = 3)]
    tournament: usize,
    #[arg(long = "mutation-moves", default_value_t = 1)]
    mutation_moves: usize,
    #[arg(long = "min-cluster-size", default_value_t = 2)]
    min_cluster_size: usize,
    /// Output prefix: writes <prefix>_assignments.csv and <prefix>_trace.csv
    #[arg(long, default_value = "cluster")]
    out: String,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["spec", "default300"])))]
struct GenerateArgs {
    /// JSON mixture description
    #[arg(long)]
    spec: Option<std::path::PathBuf>,
    /// Three 3-D Gaussians of 100 points each
    #[arg(long)]
    default300: bool,
    /// Uniform noise features appended to --default300 rows
    #[arg(long = "noise-dims", default_value_t = 0)]
    noise_dims: usize,
    /// Generator seed (defaults to 1 for --default300, to the spec's own seed otherwise)
    #[arg(long)]
    seed: Option<u64>,
    /// Output CSV: features then label, no header
    #[arg(long)]
    out: std::path::PathBuf,
}

#[derive(Debug, Args)]
struct LearnArgs {
    #[arg(long)]
    inputs: usize,
    #[arg(long)]
    outputs: usize,
    /// Comma-separated target index per input, or "identity"
    #[arg(long, default_value = "identity")]
    targets: String,
    /// Base learning rate
    #[arg(long, default_value_t = 0.5)]
    rho: f64,
    #[arg(long, default_value_t = 2000)]
    iters: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Rényi orders recorded in the trace
    #[arg(long, value_delimiter = ',', default_value = "0.5,2")]
    alphas: Vec<f64>,
    #[arg(long, default_value = "learn_trace.csv")]
    out: std::path::PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Policy {
    Entropy,
    Random,
}

#[derive(Debug, Args)]
struct ExploreArgs {
    /// Surface 1 (Gaussian bump) or 2 (modulated bump)
    #[arg(long, default_value = "1")]
    surface: String,
    #[arg(long, default_value_t = 100_000)]
    steps: u64,
    /// Random-walk steps before the entropy policy takes over
    #[arg(long, default_value_t = 1000)]
    warmup: u64,
    /// Height histogram bins over [0, 1]
    #[arg(long, default_value_t = 10)]
    bins: usize,
    /// Entropy scored by the policy: a Rényi order or "shannon"
    #[arg(long, default_value = "2")]
    alpha: String,
    /// Step sizes ex,ey
    #[arg(long, value_delimiter = ',', default_value = "0.1,0.1")]
    epsilon: Vec<f64>,
    /// x0,x1,y0,y1 (default [-2,2]² for surface 1, [-10,10]² for surface 2)
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    bounds: Option<Vec<f64>>,
    /// x,y starting point (default: center of the bounds)
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    start: Option<Vec<f64>>,
    #[arg(long, value_enum, default_value_t = Policy::Entropy)]
    policy: Policy,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Run seeds a..b (inclusive) instead of --seed; outputs get a _seed<S> suffix
    #[arg(long)]
    seeds: Option<String>,
    /// Output prefix: writes <prefix>_trace.csv and <prefix>_histogram.json
    #[arg(long, default_value = "explore")]
    out: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Entropy(a) => commands::entropy(a),
        Command::Cluster(a) => commands::cluster(a),
        Command::Generate(a) => commands::generate(a),
        Command::Learn(a) => commands::learn(a),
        Command::Explore(a) => commands::explore(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
