//! Classical Differential Evolution (DE/rand/1/bin) with exact accounting of
//! the number of function calls (NFC).
//!
//! Each generation builds one trial per target from the current population:
//! `v = x[r1] + F * (x[r2] - x[r3])`, binomial crossover with rate `CR`
//! and one guaranteed donor coordinate, then greedy replacement. Trial
//! coordinates that leave the box are redrawn uniformly inside it. The run
//! stops as soon as the best value reaches `optimum + vtr_tolerance`, even
//! in the middle of a generation, or when the next evaluation would exceed
//! `max_nfc`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bench::{BenchmarkId, BenchmarkSpec, Point};
use crate::error::{Error, Result};
use crate::popinit::Population;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeConfig {
    pub population_size: usize,
    pub differential_weight: f64,
    pub crossover_rate: f64,
    pub max_nfc: u64,
    pub vtr_tolerance: f64,
}

impl Default for DeConfig {
    fn default() -> Self {
        DeConfig {
            population_size: 100,
            differential_weight: 0.5,
            crossover_rate: 0.9,
            max_nfc: 1_000_000,
            vtr_tolerance: 1e-6,
        }
    }
}

impl DeConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if self.population_size < 4 {
            return bad(format!(
                "population size {} is below 4; mutation needs three members besides the target",
                self.population_size
            ));
        }
        if !(self.differential_weight > 0.0 && self.differential_weight <= 2.0) {
            return bad(format!(
                "differential weight {} is outside (0, 2]",
                self.differential_weight
            ));
        }
        if !(0.0..=1.0).contains(&self.crossover_rate) {
            return bad(format!("crossover rate {} is outside [0, 1]", self.crossover_rate));
        }
        if self.max_nfc < self.population_size as u64 {
            return bad(format!(
                "max_nfc {} cannot cover the initial population of {}",
                self.max_nfc, self.population_size
            ));
        }
        if !(self.vtr_tolerance > 0.0 && self.vtr_tolerance.is_finite()) {
            return bad(format!("vtr tolerance {} must be positive", self.vtr_tolerance));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub nfc: u64,
    pub best_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub nfc: u64,
    pub best_value: f64,
    pub best_point: Point,
    pub success: bool,
    /// Completed generations, not counting the initial evaluation.
    pub generations: u64,
    /// Best value after the initial evaluation, after every completed
    /// generation, and at the stopping point.
    pub trace: Vec<TracePoint>,
}

/// Something the engine can minimise. Implemented by [`BenchmarkId`];
/// wrappers can add instrumentation around an existing benchmark.
pub trait Objective {
    fn spec(&self) -> &BenchmarkSpec;
    /// Objective value at `x`, which has `spec().dimension` coordinates.
    fn value(&self, x: &[f64]) -> f64;
}

impl Objective for BenchmarkId {
    fn spec(&self) -> &BenchmarkSpec {
        crate::bench::get_spec(*self)
    }

    fn value(&self, x: &[f64]) -> f64 {
        BenchmarkId::value(*self, x)
    }
}

/// Counts objective evaluations.
#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct EvalCounter {
    calls: u64,
}

impl EvalCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn count(&self) -> u64 {
        self.calls
    }
}

/// Evaluates `x` and bumps `counter` by exactly one. The engine has no
/// other path to the objective.
pub fn counted_evaluate<O: Objective + ?Sized>(objective: &O, x: &Point, counter: &mut EvalCounter) -> f64 {
    counter.calls += 1;
    objective.value(x.coords())
}

/// Runs DE on a built-in benchmark.
pub fn run_de<R: Rng + ?Sized>(
    id: BenchmarkId,
    initial: &Population,
    config: &DeConfig,
    rng: &mut R,
) -> Result<RunResult> {
    if initial.benchmark != id {
        return Err(Error::InvalidConfig(format!(
            "population was built for {} but the run targets {id}",
            initial.benchmark
        )));
    }
    run_de_with(&id, &initial.members, config, rng)
}

/// Runs DE on any [`Objective`], starting from `initial`.
pub fn run_de_with<O, R>(objective: &O, initial: &[Point], config: &DeConfig, rng: &mut R) -> Result<RunResult>
where
    O: Objective + ?Sized,
    R: Rng + ?Sized,
{
    config.validate()?;
    let spec = objective.spec();
    if initial.len() != config.population_size {
        return Err(Error::PopulationSize {
            expected: config.population_size,
            actual: initial.len(),
        });
    }
    for (index, m) in initial.iter().enumerate() {
        spec.check_dimension(m.coords())?;
        if !spec.contains(m.coords()) {
            return Err(Error::OutOfBounds { index });
        }
    }

    let np = config.population_size;
    let dim = spec.dimension;
    let target = spec.optimum_value + config.vtr_tolerance;
    let mut counter = EvalCounter::new();

    let mut pop: Vec<Point> = initial.to_vec();
    let mut fitness: Vec<f64> = pop
        .iter()
        .map(|x| counted_evaluate(objective, x, &mut counter))
        .collect();
    let mut best = argmin(&fitness);
    let mut best_value = fitness[best];
    let mut best_point = pop[best].clone();
    let mut trace = vec![TracePoint {
        nfc: counter.count(),
        best_value,
    }];
    let mut generations = 0u64;

    let finish =
        |counter: &EvalCounter, best_value: f64, best_point: Point, generations, mut trace: Vec<TracePoint>| {
            let nfc = counter.count();
            if trace.last().map(|t| t.nfc) != Some(nfc) {
                trace.push(TracePoint { nfc, best_value });
            }
            RunResult {
                nfc,
                best_value,
                success: best_value <= target,
                best_point,
                generations,
                trace,
            }
        };

    if best_value <= target {
        return Ok(finish(&counter, best_value, best_point, generations, trace));
    }

    let mut next = pop.clone();
    let mut next_fitness = fitness.clone();
    let mut trial = vec![0.0; dim];
    loop {
        for i in 0..np {
            if counter.count() >= config.max_nfc {
                return Ok(finish(&counter, best_value, best_point, generations, trace));
            }
            let [r1, r2, r3] = distinct_others(rng, np, i);
            let j_rand = rng.random_range(0..dim);
            let (x1, x2, x3) = (pop[r1].coords(), pop[r2].coords(), pop[r3].coords());
            for (j, t) in trial.iter_mut().enumerate() {
                *t = if j == j_rand || rng.random::<f64>() < config.crossover_rate {
                    let v = x1[j] + config.differential_weight * (x2[j] - x3[j]);
                    let b = spec.bounds[j];
                    if b.contains(v) {
                        v
                    } else {
                        rng.random_range(b.lo..=b.hi)
                    }
                } else {
                    pop[i].coords()[j]
                };
            }
            let candidate = Point::from_finite(trial.clone());
            let value = counted_evaluate(objective, &candidate, &mut counter);
            if value <= fitness[i] {
                if value < best_value {
                    best_value = value;
                    best_point = candidate.clone();
                }
                next[i] = candidate;
                next_fitness[i] = value;
            } else {
                next[i] = pop[i].clone();
                next_fitness[i] = fitness[i];
            }
            if best_value <= target {
                return Ok(finish(&counter, best_value, best_point, generations, trace));
            }
        }
        std::mem::swap(&mut pop, &mut next);
        std::mem::swap(&mut fitness, &mut next_fitness);
        generations += 1;
        best = argmin(&fitness);
        debug_assert_eq!(fitness[best], best_value);
        trace.push(TracePoint {
            nfc: counter.count(),
            best_value,
        });
    }
}

fn argmin(values: &[f64]) -> usize {
    values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .expect("non-empty population")
}

/// Three distinct indices in `0..n`, none equal to `exclude`.
fn distinct_others<R: Rng + ?Sized>(rng: &mut R, n: usize, exclude: usize) -> [usize; 3] {
    let mut out = [exclude; 3];
    for k in 0..3 {
        loop {
            let r = rng.random_range(0..n);
            if r != exclude && !out[..k].contains(&r) {
                out[k] = r;
                break;
            }
        }
    }
    out
}
