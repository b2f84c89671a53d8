//! Repeated-run experiments comparing initialization strategies.

use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bench::BenchmarkId;
use crate::de::{run_de, DeConfig, RunResult};
use crate::error::{Error, Result};
use crate::popinit::{init_population, InitStrategy};
use crate::seeder::Epsilon;

pub const DEFAULT_RUNS: usize = 40;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub benchmark: BenchmarkId,
    pub strategies: Vec<InitStrategy>,
    pub runs: usize,
    pub de_config: DeConfig,
    pub epsilon: Epsilon,
    pub master_seed: u64,
}

impl ExperimentSpec {
    pub fn new(benchmark: BenchmarkId, strategies: Vec<InitStrategy>) -> Self {
        ExperimentSpec {
            benchmark,
            strategies,
            runs: DEFAULT_RUNS,
            de_config: DeConfig::default(),
            epsilon: Epsilon::ZERO,
            master_seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.runs == 0 {
            return Err(Error::InvalidExperiment("runs must be at least 1".into()));
        }
        if self.strategies.is_empty() {
            return Err(Error::InvalidExperiment("no strategies given".into()));
        }
        self.de_config.validate()
    }
}

/// NFC statistics over the successful runs of one strategy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NfcStats {
    pub mean: f64,
    pub median: f64,
    /// Sample standard deviation (n - 1 denominator); 0 for a single run.
    pub stddev: f64,
    pub min: u64,
    pub max: u64,
}

impl NfcStats {
    /// `None` when `nfcs` is empty.
    pub fn from_nfcs(nfcs: &[u64]) -> Option<Self> {
        if nfcs.is_empty() {
            return None;
        }
        let mut sorted = nfcs.to_vec();
        sorted.sort_unstable();
        let n = sorted.len();
        let mean = sorted.iter().map(|&v| v as f64).sum::<f64>() / n as f64;
        let median = if n % 2 == 1 {
            sorted[n / 2] as f64
        } else {
            (sorted[n / 2 - 1] as f64 + sorted[n / 2] as f64) / 2.0
        };
        let stddev = if n > 1 {
            (sorted.iter().map(|&v| (v as f64 - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
        } else {
            0.0
        };
        Some(NfcStats {
            mean,
            median,
            stddev,
            min: sorted[0],
            max: sorted[n - 1],
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategyReport {
    pub strategy: InitStrategy,
    pub name: String,
    pub stats: Option<NfcStats>,
    pub success_rate: f64,
    pub runs: Vec<RunResult>,
}

impl StrategyReport {
    fn from_runs(strategy: InitStrategy, runs: Vec<RunResult>) -> Self {
        let ok: Vec<u64> = runs.iter().filter(|r| r.success).map(|r| r.nfc).collect();
        StrategyReport {
            strategy,
            name: strategy.to_string(),
            stats: NfcStats::from_nfcs(&ok),
            success_rate: ok.len() as f64 / runs.len() as f64,
            runs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub spec: ExperimentSpec,
    pub per_strategy: Vec<StrategyReport>,
}

/// How runs are scheduled. The report does not depend on the choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    #[default]
    Sequential,
    /// Rayon pool with this many threads; 0 means one per available core.
    Parallel(usize),
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of run `run` of `strategy`. Depends only on the master seed, the
/// strategy's canonical id and the run index.
pub fn run_seed(master_seed: u64, strategy: &InitStrategy, run: usize) -> u64 {
    let h = splitmix64(master_seed);
    let h = splitmix64(h ^ strategy.canonical_id());
    splitmix64(h ^ run as u64)
}

/// One independent run: build the population, then run DE, from a single
/// stream seeded by [`run_seed`].
pub fn single_run(spec: &ExperimentSpec, strategy: InitStrategy, run: usize) -> Result<RunResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(run_seed(spec.master_seed, &strategy, run));
    let pop = init_population(
        strategy,
        spec.benchmark,
        spec.de_config.population_size,
        spec.epsilon,
        &mut rng,
    )?;
    run_de(spec.benchmark, &pop, &spec.de_config, &mut rng)
}

pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentReport> {
    run_experiment_with(spec, Execution::Sequential)
}

pub fn run_experiment_with(spec: &ExperimentSpec, execution: Execution) -> Result<ExperimentReport> {
    spec.validate()?;
    let jobs: Vec<(usize, usize)> = (0..spec.strategies.len())
        .flat_map(|s| (0..spec.runs).map(move |r| (s, r)))
        .collect();
    let job = |&(s, r): &(usize, usize)| single_run(spec, spec.strategies[s], r);

    let results: Vec<Result<RunResult>> = match execution {
        Execution::Sequential => jobs.iter().map(job).collect(),
        Execution::Parallel(workers) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(workers)
                .build()
                .map_err(|e| Error::InvalidExperiment(format!("cannot start worker pool: {e}")))?;
            pool.install(|| jobs.par_iter().map(job).collect())
        }
    };

    let total = results.len();
    let mut flat = Vec::with_capacity(total);
    for (completed, r) in results.into_iter().enumerate() {
        match r {
            Ok(run) => flat.push(run),
            Err(e) => {
                return Err(Error::Aborted {
                    completed,
                    total,
                    source: Box::new(e),
                })
            }
        }
    }

    let mut it = flat.into_iter();
    let per_strategy = spec
        .strategies
        .iter()
        .map(|&s| StrategyReport::from_runs(s, it.by_ref().take(spec.runs).collect()))
        .collect();
    Ok(ExperimentReport {
        spec: spec.clone(),
        per_strategy,
    })
}

/// One summary row per strategy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableRow {
    pub strategy: String,
    /// Mean NFC of the successful runs rounded to an integer, or "—".
    pub mean_nfc: String,
    pub success_rate: String,
}

pub const NO_SUCCESS: &str = "—";

pub fn compare_table(report: &ExperimentReport) -> Vec<TableRow> {
    report
        .per_strategy
        .iter()
        .map(|s| TableRow {
            strategy: s.name.clone(),
            mean_nfc: s
                .stats
                .map_or_else(|| NO_SUCCESS.to_string(), |st| format!("{:.0}", st.mean)),
            success_rate: format!("{:.2}", s.success_rate),
        })
        .collect()
}

/// Fixed-width rendering of [`compare_table`].
pub fn render_table(rows: &[TableRow]) -> String {
    let w = rows
        .iter()
        .map(|r| r.strategy.chars().count())
        .max()
        .unwrap_or(0)
        .max(8);
    let mut out = String::new();
    let _ = writeln!(out, "{:<w$}  {:>10}  {:>7}", "strategy", "mean NFC", "success");
    for r in rows {
        let _ = writeln!(out, "{:<w$}  {:>10}  {:>7}", r.strategy, r.mean_nfc, r.success_rate);
    }
    out
}
