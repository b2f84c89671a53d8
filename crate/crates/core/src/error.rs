use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} coordinates, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("coordinate {index} is not finite ({value})")]
    NonFinite { index: usize, value: f64 },

    #[error("invalid epsilon {0}: {1}")]
    InvalidEpsilon(f64, &'static str),

    #[error("invalid root scan: {0}")]
    InvalidScan(String),

    #[error("seed pool for {0} has no candidates")]
    EmptyPool(String),

    #[error("invalid strategy: {0}")]
    InvalidStrategy(String),

    #[error("unknown benchmark {given:?}; valid ids: {valid}")]
    UnknownBenchmark { given: String, valid: String },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("population has {actual} members but the configuration expects {expected}")]
    PopulationSize { expected: usize, actual: usize },

    #[error("population member {index} lies outside the search box")]
    OutOfBounds { index: usize },

    #[error("invalid experiment: {0}")]
    InvalidExperiment(String),

    #[error("experiment aborted after {completed} of {total} runs: {source}")]
    Aborted {
        completed: usize,
        total: usize,
        source: Box<Error>,
    },

    #[error("serialization: {0}")]
    Serialization(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
