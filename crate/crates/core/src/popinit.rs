//! Initial populations: complete random, selected, or a mix of both.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bench::{get_spec, BenchmarkId, Point};
use crate::error::{Error, Result};
use crate::seeder::{analytic_seed_pool, materialize, Epsilon};

pub const DEFAULT_SELECTED_FRACTION: f64 = 0.5;

/// How an initial population is built.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InitStrategy {
    #[default]
    Random,
    Selected,
    SemiRandom {
        selected_fraction: f64,
    },
}

impl InitStrategy {
    pub fn semi_random(selected_fraction: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&selected_fraction) {
            return Err(Error::InvalidStrategy(format!(
                "selected fraction {selected_fraction} is outside [0, 1]"
            )));
        }
        Ok(InitStrategy::SemiRandom { selected_fraction })
    }

    /// Number of selected members in a population of `size`.
    pub fn selected_count(&self, size: usize) -> usize {
        match *self {
            InitStrategy::Random => 0,
            InitStrategy::Selected => size,
            InitStrategy::SemiRandom { selected_fraction } => {
                ((selected_fraction * size as f64).round() as usize).min(size)
            }
        }
    }

    /// Identifier independent of where the strategy sits in a list.
    pub fn canonical_id(&self) -> u64 {
        match *self {
            InitStrategy::Random => 0,
            InitStrategy::Selected => 1,
            InitStrategy::SemiRandom { selected_fraction } => 2 ^ selected_fraction.to_bits().rotate_left(17),
        }
    }
}

impl fmt::Display for InitStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InitStrategy::Random => f.write_str("random"),
            InitStrategy::Selected => f.write_str("selected"),
            InitStrategy::SemiRandom { selected_fraction } => write!(f, "semi:{selected_fraction}"),
        }
    }
}

/// Parses `random`, `selected`, `semi` or `semi:<fraction>`.
impl FromStr for InitStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        match s.as_str() {
            "random" => return Ok(InitStrategy::Random),
            "selected" => return Ok(InitStrategy::Selected),
            "semi" => return InitStrategy::semi_random(DEFAULT_SELECTED_FRACTION),
            _ => {}
        }
        let fraction = s
            .strip_prefix("semi:")
            .ok_or_else(|| Error::InvalidStrategy(format!("{s:?}; expected random, selected or semi:<fraction>")))?;
        let fraction: f64 = fraction
            .parse()
            .map_err(|_| Error::InvalidStrategy(format!("{fraction:?} is not a number")))?;
        InitStrategy::semi_random(fraction)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Population {
    pub benchmark: BenchmarkId,
    pub members: Vec<Point>,
}

impl Population {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// `count` points drawn coordinate-wise uniformly from the closed box.
pub fn random_points<R: Rng + ?Sized>(id: BenchmarkId, count: usize, rng: &mut R) -> Vec<Point> {
    let spec = get_spec(id);
    (0..count)
        .map(|_| Point::from_finite(spec.bounds.iter().map(|b| rng.random_range(b.lo..=b.hi)).collect()))
        .collect()
}

/// Builds a population of exactly `size` in-bounds members.
///
/// Selected members come first, then random ones. The RNG is consumed in
/// that order, so `semi:0` reproduces `random` and `semi:1` reproduces
/// `selected` draw for draw.
pub fn init_population<R: Rng + ?Sized>(
    strategy: InitStrategy,
    id: BenchmarkId,
    size: usize,
    eps: Epsilon,
    rng: &mut R,
) -> Result<Population> {
    if size == 0 {
        return Err(Error::InvalidConfig("population size must be at least 1".into()));
    }
    let n_selected = strategy.selected_count(size);
    let mut members = if n_selected > 0 {
        materialize(&analytic_seed_pool(id, eps), n_selected, rng)?
    } else {
        Vec::with_capacity(size)
    };
    members.extend(random_points(id, size - n_selected, rng));
    Ok(Population { benchmark: id, members })
}
