use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use seedpop_core::export::{self, bounds_label};
use seedpop_core::{
    analytic_seed_pool, compare_table, get_spec, materialize, render_table, run_experiment_with, BenchmarkId,
    BenchmarkSpec, DeConfig, Epsilon, Execution, ExperimentSpec, InitStrategy,
};

const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Parser)]
#[command(
    name = "seedpop",
    version,
    about = "Perturbation-seeded initial populations for Differential Evolution"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the built-in benchmarks.
    List {
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Print the analytic seed pool of a benchmark.
    Seed(SeedArgs),
    /// Run a multi-strategy NFC experiment.
    Run(RunArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Args)]
struct SeedArgs {
    #[arg(value_parser = parse_benchmark)]
    benchmark: BenchmarkId,
    #[arg(long, default_value_t = 0.0, value_parser = parse_epsilon)]
    epsilon: f64,
    /// Also materialize this many population members.
    #[arg(long)]
    count: Option<usize>,
    #[arg(long, default_value_t = 0)]
    rng_seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Args)]
struct RunArgs {
    #[arg(value_parser = parse_benchmark)]
    benchmark: BenchmarkId,
    /// Comma-separated list of `random`, `selected`, `semi:<fraction>`.
    #[arg(long, value_delimiter = ',', value_parser = parse_strategy, default_value = "random,selected")]
    strategies: Vec<InitStrategy>,
    #[arg(long, default_value_t = seedpop_core::harness::DEFAULT_RUNS)]
    runs: usize,
    #[arg(long, default_value_t = 0.0, value_parser = parse_epsilon)]
    epsilon: f64,
    #[arg(long, default_value_t = 0)]
    master_seed: u64,
    #[arg(long, default_value_t = 100)]
    popsize: usize,
    #[arg(long, default_value_t = 0.5)]
    weight_f: f64,
    #[arg(long, default_value_t = 0.9)]
    crossover_cr: f64,
    #[arg(long, default_value_t = 1_000_000)]
    max_nfc: u64,
    #[arg(long, default_value_t = 1e-6)]
    vtr_tol: f64,
    /// Worker threads; 0 uses every available core.
    #[arg(long, default_value_t = 0)]
    workers: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write per-run (nfc, best_value) traces next to `--out`.
    #[arg(long, requires = "out")]
    trace: bool,
}

fn parse_benchmark(s: &str) -> Result<BenchmarkId, String> {
    s.parse().map_err(|e: seedpop_core::Error| e.to_string())
}

fn parse_strategy(s: &str) -> Result<InitStrategy, String> {
    s.parse().map_err(|e: seedpop_core::Error| e.to_string())
}

fn parse_epsilon(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    Epsilon::new(v).map(f64::from).map_err(|e| e.to_string())
}

enum Failure {
    Usage(String),
    Io(String),
    Other(String),
}

impl From<seedpop_core::Error> for Failure {
    fn from(e: seedpop_core::Error) -> Self {
        match e {
            seedpop_core::Error::InvalidConfig(_)
            | seedpop_core::Error::InvalidExperiment(_)
            | seedpop_core::Error::InvalidStrategy(_)
            | seedpop_core::Error::InvalidEpsilon(..) => Failure::Usage(e.to_string()),
            other => Failure::Other(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::List { format } => cmd_list(format),
        Command::Seed(args) => cmd_seed(args),
        Command::Run(args) => cmd_run(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Io(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_IO)
        }
        Err(Failure::Other(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_FAILURE)
        }
    }
}

fn cmd_list(format: Format) -> Result<(), Failure> {
    let specs: Vec<&BenchmarkSpec> = BenchmarkId::ALL.iter().map(|&id| get_spec(id)).collect();
    let text = match format {
        Format::Json => export::specs_to_json(&specs)?,
        Format::Csv => export::specs_to_csv(&specs)?,
        Format::Table => {
            let mut out = format!("{:<14} {:>3}  {:<24} {:>10}\n", "id", "dim", "bounds", "optimum");
            for s in &specs {
                out.push_str(&format!(
                    "{:<14} {:>3}  {:<24} {:>10}\n",
                    s.id.name(),
                    s.dimension,
                    bounds_label(s),
                    s.optimum_value
                ));
            }
            out
        }
    };
    print!("{text}");
    Ok(())
}

fn cmd_seed(args: SeedArgs) -> Result<(), Failure> {
    let eps = Epsilon::new(args.epsilon)?;
    let pool = analytic_seed_pool(args.benchmark, eps);
    let points = match args.count {
        Some(n) => Some(materialize(&pool, n, &mut ChaCha8Rng::seed_from_u64(args.rng_seed))?),
        None => None,
    };
    match args.format {
        Format::Json => {
            let value = serde_json::json!({ "pool": pool, "points": points });
            println!(
                "{}",
                serde_json::to_string_pretty(&value).map_err(|e| Failure::Other(e.to_string()))?
            );
        }
        Format::Csv => {
            let mut out = String::from("kind,dimension,value,branch\n");
            for (d, cands) in pool.per_dimension_candidates.iter().enumerate() {
                for c in cands {
                    out.push_str(&format!("candidate,{d},{},{}\n", c.value, c.branch));
                }
            }
            for s in &pool.whole_point_seeds {
                out.push_str(&format!("seed,,\"{}\",{}\n", join(s.point.coords(), " "), s.branch));
            }
            for p in points.iter().flatten() {
                out.push_str(&format!("point,,\"{}\",\n", join(p.coords(), " ")));
            }
            print!("{out}");
        }
        Format::Table => {
            println!("{} at eps = {}", args.benchmark, args.epsilon);
            for (d, cands) in pool.per_dimension_candidates.iter().enumerate() {
                let listed: Vec<String> = cands.iter().map(|c| format!("{}({})", c.value, c.branch)).collect();
                println!("x{:<3} {} candidates: {}", d + 1, cands.len(), listed.join(" "));
            }
            for s in &pool.whole_point_seeds {
                println!("seed ({}) [{}]", join(s.point.coords(), ", "), s.branch);
            }
            if let Some(points) = &points {
                println!("{} materialized points:", points.len());
                for p in points {
                    println!("  ({})", join(p.coords(), ", "));
                }
            }
        }
    }
    Ok(())
}

fn join(v: &[f64], sep: &str) -> String {
    v.iter().map(f64::to_string).collect::<Vec<_>>().join(sep)
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))
}

fn trace_path(out: &Path) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    out.with_file_name(format!("{stem}.trace.csv"))
}

fn cmd_run(args: RunArgs) -> Result<(), Failure> {
    let spec = ExperimentSpec {
        benchmark: args.benchmark,
        strategies: args.strategies,
        runs: args.runs,
        de_config: DeConfig {
            population_size: args.popsize,
            differential_weight: args.weight_f,
            crossover_rate: args.crossover_cr,
            max_nfc: args.max_nfc,
            vtr_tolerance: args.vtr_tol,
        },
        epsilon: Epsilon::new(args.epsilon)?,
        master_seed: args.master_seed,
    };
    spec.validate()?;
    if let Some(out) = &args.out {
        // fail before the experiment rather than after it
        fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(out)
            .map_err(|e| Failure::Io(format!("cannot write {}: {e}", out.display())))?;
    }

    let report = run_experiment_with(&spec, Execution::Parallel(args.workers))?;
    let summary = render_table(&compare_table(&report));
    let artifact = match args.format {
        Format::Json => export::report_to_json(&report)?,
        Format::Csv => export::runs_to_csv(&report)?,
        Format::Table => summary.clone(),
    };
    match &args.out {
        Some(out) => {
            write_file(out, &artifact)?;
            if args.trace {
                write_file(&trace_path(out), &export::traces_to_csv(&report)?)?;
            }
            print!("{summary}");
        }
        None => print!("{artifact}"),
    }
    Ok(())
}
