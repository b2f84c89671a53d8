//! Seeded initial populations for Differential Evolution.
//!
//! The crate solves the perturbation-invariance equation
//! `F(x) = F(x + eps * e_m)` on a fixed set of benchmark objectives and
//! uses the solutions as "selected" population members. It then measures
//! how many function calls (NFC) a classical DE run needs from random,
//! selected and semi-random starts.
//!
//! Modules, bottom up:
//!
//! - [`bench`]: the seven objectives with their boxes and known optima.
//! - [`seeder`]: analytic and numeric seed pools, and their expansion into points.
//! - [`popinit`]: random, selected and semi-random initial populations.
//! - [`de`]: DE/rand/1/bin with counted evaluations and value-to-reach stopping.
//! - [`harness`]: seeded multi-run experiments and summary tables.
//! - [`export`]: JSON and CSV file formats.

pub mod bench;
pub mod de;
pub mod error;
pub mod export;
pub mod harness;
pub mod popinit;
pub mod seeder;

pub use bench::{evaluate, get_spec, in_bounds, BenchmarkId, BenchmarkSpec, Bounds, Point};
pub use de::{counted_evaluate, run_de, run_de_with, DeConfig, EvalCounter, Objective, RunResult, TracePoint};
pub use error::{Error, Result};
pub use harness::{
    compare_table, render_table, run_experiment, run_experiment_with, Execution, ExperimentReport, ExperimentSpec,
    NfcStats, StrategyReport, TableRow,
};
pub use popinit::{init_population, InitStrategy, Population};
pub use seeder::{
    analytic_seed_pool, materialize, numeric_perturbation_roots, numeric_seed_pool, Candidate, CandidateBranch,
    Epsilon, RootScan, ScanWarning, SeedPool, WholePointSeed,
};
