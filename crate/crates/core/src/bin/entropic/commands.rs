use std::fmt;
use std::fs;
use std::path::Path;

use rayon::prelude::*;

use entropic_core::dataio::{self, SyntheticSpec};
use entropic_core::entropy::{self, DiscreteDistribution, EntropyOrder, LogBase};
use entropic_core::explorer::{self, Bounds, ExploreConfig, Surface, SurfaceId};
use entropic_core::learning;
use entropic_core::selforg::{self, EntropyObjectiveConfig, GaConfig, SelfOrgError};

use super::{ClusterArgs, EntropyArgs, ExploreArgs, GenerateArgs, LearnArgs, Policy};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Infeasible(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Infeasible(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Infeasible(m) => f.write_str(m),
        }
    }
}

fn usage(e: impl fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

impl From<SelfOrgError> for CliError {
    fn from(e: SelfOrgError) -> Self {
        match e {
            SelfOrgError::Infeasible { .. } => CliError::Infeasible(e.to_string()),
            other => usage(other),
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn parse_seeds(range: Option<&str>, single: u64) -> Result<Vec<u64>> {
    let Some(range) = range else {
        return Ok(vec![single]);
    };
    let (a, b) = range
        .split_once("..")
        .ok_or_else(|| usage(format!("--seeds expects a..b, got {range:?}")))?;
    let a: u64 = a.trim().parse().map_err(usage)?;
    let b: u64 = b.trim().parse().map_err(usage)?;
    if a > b {
        return Err(usage(format!("empty seed range {range:?}")));
    }
    Ok((a..=b).collect())
}

fn seeded_prefix(prefix: &str, seed: u64, sweep: bool) -> String {
    if sweep {
        format!("{prefix}_seed{seed}")
    } else {
        prefix.to_string()
    }
}

fn pair(values: &[f64], flag: &str) -> Result<(f64, f64)> {
    match values {
        [a, b] => Ok((*a, *b)),
        _ => Err(usage(format!("{flag} expects two comma-separated numbers"))),
    }
}

pub fn entropy(args: EntropyArgs) -> Result<()> {
    let base: LogBase = args.base.parse().map_err(usage)?;
    let d = DiscreteDistribution::new(args.probs).map_err(usage)?;
    let value = match args.alpha {
        None => entropy::shannon_entropy(&d, base),
        Some(alpha) => entropy::renyi_entropy(&d, alpha, base).map_err(usage)?,
    };
    println!("{value:?}");
    Ok(())
}

pub fn cluster(args: ClusterArgs) -> Result<()> {
    let ds = dataio::load_csv(&args.file, args.header, args.labels_col)
        .map_err(|e| usage(format!("{}: {e}", args.file.display())))?;
    let order: EntropyOrder = args.alpha.parse().map_err(usage)?;
    let obj = EntropyObjectiveConfig {
        bins_per_dim: args.bins,
        order,
        base: LogBase::Two,
        min_cluster_size: args.min_cluster_size,
    };
    let seeds = parse_seeds(args.seeds.as_deref(), args.seed)?;
    let sweep = args.seeds.is_some();

    let runs: Vec<Result<String>> = seeds
        .par_iter()
        .map(|&seed| {
            let ga = GaConfig {
                population: args.population,
                iterations: args.iterations,
                mutation_moves_per_child: args.mutation_moves,
                tournament_size: args.tournament,
                seed,
                guided_mutation: args.guided_mutation,
            };
            let result = selforg::entropic_self_organize(&ds, args.k, &obj, &ga)?;
            let prefix = seeded_prefix(&args.out, seed, sweep);
            write_assignments(&result.partition, &format!("{prefix}_assignments.csv"))?;
            result
                .trace
                .write_csv_file(format!("{prefix}_trace.csv"))
                .map_err(usage)?;
            let mut summary = format!(
                "seed: {seed}\nobjective: {}\ninitial_objective: {}\niterations: {}\nduration_secs: {:.3}\n",
                result.objective,
                result.initial_objective,
                args.iterations,
                result.trace.metadata.duration_secs
            );
            if let Some(labels) = ds.labels() {
                match dataio::error_rate(&result.partition, labels) {
                    Ok(err) => summary.push_str(&format!("error_rate: {err}\n")),
                    // Exhaustive matching only covers small cluster counts.
                    Err(dataio::DataError::TooManyClusters(_)) => summary.push_str("error_rate: unavailable\n"),
                    Err(e) => return Err(usage(e)),
                }
            }
            Ok(summary)
        })
        .collect();
    for run in runs {
        print!("{}", run?);
    }
    Ok(())
}

fn write_assignments(p: &selforg::Partition, path: &str) -> Result<()> {
    let mut text = String::from("row_index,cluster\n");
    for (i, c) in p.assignment().iter().enumerate() {
        text.push_str(&format!("{i},{c}\n"));
    }
    fs::write(path, text).map_err(|e| usage(format!("{path}: {e}")))
}

pub fn generate(args: GenerateArgs) -> Result<()> {
    let spec = if args.default300 {
        SyntheticSpec::default300(args.noise_dims, args.seed.unwrap_or(1))
    } else {
        let path = args.spec.as_deref().expect("clap enforces one source");
        let text =
            fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        let mut spec = SyntheticSpec::from_json(&text).map_err(usage)?;
        if let Some(seed) = args.seed {
            spec.seed = seed;
        }
        spec
    };
    let ds = dataio::generate_synthetic(&spec).map_err(usage)?;
    dataio::save_csv(&ds, &args.out).map_err(|e| usage(format!("{}: {e}", args.out.display())))?;
    println!(
        "rows: {}\nfeatures: {}\nout: {}",
        ds.len(),
        ds.dim(),
        args.out.display()
    );
    Ok(())
}

pub fn learn(args: LearnArgs) -> Result<()> {
    let targets: Vec<usize> = if args.targets.trim() == "identity" {
        if args.inputs > args.outputs {
            return Err(usage(format!(
                "identity targets need inputs ({}) <= outputs ({})",
                args.inputs, args.outputs
            )));
        }
        (0..args.inputs).collect()
    } else {
        args.targets
            .split(',')
            .map(|t| t.trim().parse().map_err(usage))
            .collect::<Result<_>>()?
    };
    let state = learning::init_learner(args.inputs, args.outputs, targets, args.rho, args.seed)
        .map_err(usage)?;
    let (end, mut trace) = learning::train(state, args.iters, &args.alphas).map_err(usage)?;
    trace.metadata.seed = args.seed;
    trace.write_csv_file(&args.out).map_err(usage)?;
    let entropy = learning::mapping_entropy(&end, EntropyOrder::Shannon).map_err(usage)?;
    println!("final_loss: {}", learning::loss(&end));
    println!("final_normalized_entropy: {entropy}");
    println!("iterations: {}", end.t());
    match learning::converged_at(&trace) {
        Some(t) => println!("converged_at: {t}"),
        None => println!("converged_at: none"),
    }
    println!("duration_secs: {:.3}", trace.metadata.duration_secs);
    Ok(())
}

pub fn explore(args: ExploreArgs) -> Result<()> {
    let id: SurfaceId = args.surface.parse().map_err(usage)?;
    let bounds = match &args.bounds {
        Some(b) => match b.as_slice() {
            [x0, x1, y0, y1] => Bounds {
                x_min: *x0,
                x_max: *x1,
                y_min: *y0,
                y_max: *y1,
            },
            _ => return Err(usage("--bounds expects x0,x1,y0,y1")),
        },
        None => id.default_bounds(),
    };
    let surface = Surface::new(id, bounds).map_err(usage)?;
    let order: EntropyOrder = args.alpha.parse().map_err(usage)?;
    let epsilon = pair(&args.epsilon, "--epsilon")?;
    let start = match &args.start {
        Some(s) => pair(s, "--start")?,
        None => bounds.center(),
    };
    let warmup = match args.policy {
        Policy::Random => args.steps,
        Policy::Entropy => args.warmup,
    };
    let seeds = parse_seeds(args.seeds.as_deref(), args.seed)?;
    let sweep = args.seeds.is_some();

    let runs: Vec<Result<String>> = seeds
        .par_iter()
        .map(|&seed| {
            let cfg = ExploreConfig {
                surface,
                start,
                epsilon,
                bins: args.bins,
                order,
                warmup_steps: warmup,
                total_steps: args.steps,
                seed,
            };
            let out = explorer::run_exploration(&cfg).map_err(usage)?;
            let prefix = seeded_prefix(&args.out, seed, sweep);
            out.trace
                .write_csv_file(format!("{prefix}_trace.csv"))
                .map_err(usage)?;
            let report = out.histogram_report().map_err(usage)?;
            let json = serde_json::to_string_pretty(&report).map_err(usage)? + "\n";
            write_file(format!("{prefix}_histogram.json"), json)?;
            Ok(format!(
                "seed: {seed}\nwarmup_entropy: {}\nfinal_entropy: {}\nmax_entropy: {}\nduration_secs: {:.3}\n",
                out.entropy_at(args.warmup.min(args.steps)),
                out.final_entropy(),
                (args.bins as f64).log2(),
                out.trace.metadata.duration_secs
            ))
        })
        .collect();
    for run in runs {
        print!("{}", run?);
    }
    Ok(())
}

fn write_file(path: impl AsRef<Path>, contents: String) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, contents).map_err(|e| usage(format!("{}: {e}", path.display())))
}
