//! The seven benchmark objectives, their search boxes and known optima.
//!
//! Every objective is a plain function of a coordinate slice. Dimensions are
//! fixed per benchmark so that reported NFC numbers stay comparable across
//! runs.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Identifier of one of the built-in benchmark objectives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BenchmarkId {
    Sphere,
    AxisParallel,
    Rosenbrock,
    Rastrigin,
    Branin,
    Michalewicz,
    Matyas,
}

impl BenchmarkId {
    pub const ALL: [BenchmarkId; 7] = [
        BenchmarkId::Sphere,
        BenchmarkId::AxisParallel,
        BenchmarkId::Rosenbrock,
        BenchmarkId::Rastrigin,
        BenchmarkId::Branin,
        BenchmarkId::Michalewicz,
        BenchmarkId::Matyas,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BenchmarkId::Sphere => "sphere",
            BenchmarkId::AxisParallel => "axis-parallel",
            BenchmarkId::Rosenbrock => "rosenbrock",
            BenchmarkId::Rastrigin => "rastrigin",
            BenchmarkId::Branin => "branin",
            BenchmarkId::Michalewicz => "michalewicz",
            BenchmarkId::Matyas => "matyas",
        }
    }

    pub fn spec(self) -> &'static BenchmarkSpec {
        get_spec(self)
    }

    /// Objective value without a dimension check.
    ///
    /// Callers must pass exactly `self.spec().dimension` coordinates; use
    /// [`evaluate`] for the checked entry point.
    pub fn value(self, x: &[f64]) -> f64 {
        match self {
            BenchmarkId::Sphere => x.iter().map(|v| v * v).sum(),
            BenchmarkId::AxisParallel => x.iter().enumerate().map(|(i, v)| (i + 1) as f64 * v * v).sum(),
            BenchmarkId::Rosenbrock => x
                .windows(2)
                .map(|w| {
                    let a = w[1] - w[0] * w[0];
                    let b = 1.0 - w[0];
                    100.0 * a * a + b * b
                })
                .sum(),
            BenchmarkId::Rastrigin => 100.0 + x.iter().map(|v| v * v - 10.0 * (2.0 * PI * v).cos()).sum::<f64>(),
            BenchmarkId::Branin => {
                let (x1, x2) = (x[0], x[1]);
                let c = branin::CONSTANTS;
                let u = x2 - c.b * x1 * x1 + c.c * x1 - c.d;
                c.a * u * u + c.e * (1.0 - c.f) * x1.cos() + c.e
            }
            BenchmarkId::Michalewicz => -x
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    let inner = ((i + 1) as f64 * v * v / PI).sin();
                    v.sin() * inner.powi(michalewicz::STEEPNESS)
                })
                .sum::<f64>(),
            BenchmarkId::Matyas => {
                let (x1, x2) = (x[0], x[1]);
                0.26 * (x1 * x1 + x2 * x2) - 0.48 * (x1 * x2)
            }
        }
    }
}

impl fmt::Display for BenchmarkId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BenchmarkId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let wanted = s.trim().to_ascii_lowercase().replace('_', "-");
        BenchmarkId::ALL
            .into_iter()
            .find(|id| id.name() == wanted || (wanted == "axis" && *id == BenchmarkId::AxisParallel))
            .ok_or_else(|| Error::UnknownBenchmark {
                given: s.to_string(),
                valid: BenchmarkId::ALL.map(BenchmarkId::name).join(", "),
            })
    }
}

/// Branin coefficients. The usual textbook values; they put the minimum
/// 0.397887 at (±π, ·) and (3π, 2.475).
pub mod branin {
    use std::f64::consts::PI;

    #[derive(Debug, Clone, Copy)]
    pub struct Constants {
        pub a: f64,
        pub b: f64,
        pub c: f64,
        pub d: f64,
        pub e: f64,
        pub f: f64,
    }

    pub const CONSTANTS: Constants = Constants {
        a: 1.0,
        b: 5.1 / (4.0 * PI * PI),
        c: 5.0 / PI,
        d: 6.0,
        e: 10.0,
        f: 1.0 / (8.0 * PI),
    };
}

pub mod michalewicz {
    pub const STEEPNESS: i32 = 20;

    /// Per-coordinate minimizers for the five-dimensional instance. The
    /// objective is separable, so each was located by a 1-D search.
    pub const MINIMIZER_5D: [f64; 5] = [
        2.202_905_519_093_851,
        std::f64::consts::FRAC_PI_2,
        1.284_991_570_547_740_6,
        1.923_058_469_857_846,
        1.720_469_772_266_010_7,
    ];
}

/// A candidate solution. Always finite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if let Some((index, &value)) = coords.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite { index, value });
        }
        Ok(Point(coords))
    }

    /// Builds a point the caller already knows to be finite.
    pub(crate) fn from_finite(coords: Vec<f64>) -> Self {
        debug_assert!(coords.iter().all(|v| v.is_finite()));
        Point(coords)
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dimension(&self) -> usize {
        self.0.len()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl AsRef<[f64]> for Point {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// Closed coordinate interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub lo: f64,
    pub hi: f64,
}

impl Bounds {
    pub const fn new(lo: f64, hi: f64) -> Self {
        Bounds { lo, hi }
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn clamp(&self, v: f64) -> f64 {
        v.clamp(self.lo, self.hi)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkSpec {
    pub id: BenchmarkId,
    pub dimension: usize,
    pub bounds: Vec<Bounds>,
    pub optimum_value: f64,
    pub optimizers: Vec<Point>,
}

impl BenchmarkSpec {
    /// How close `evaluate(optimizer)` gets to `optimum_value`.
    ///
    /// Branin's and Michalewicz's optima are only known to the printed
    /// digits (0.3979 and -4.687658), so their tolerances follow the
    /// rounding.
    pub fn optimum_tolerance(&self) -> f64 {
        match self.id {
            BenchmarkId::Branin => 1e-4,
            BenchmarkId::Michalewicz => 1e-6,
            _ => 1e-9,
        }
    }

    pub fn check_dimension(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                actual: x.len(),
            });
        }
        Ok(())
    }

    /// In-bounds test without a dimension check.
    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dimension && self.bounds.iter().zip(x).all(|(b, &v)| b.contains(v))
    }
}

fn uniform(
    id: BenchmarkId,
    dimension: usize,
    lo: f64,
    hi: f64,
    optimum_value: f64,
    optimizers: Vec<Vec<f64>>,
) -> BenchmarkSpec {
    BenchmarkSpec {
        id,
        dimension,
        bounds: vec![Bounds::new(lo, hi); dimension],
        optimum_value,
        optimizers: optimizers.into_iter().map(Point::from_finite).collect(),
    }
}

fn build_table() -> [BenchmarkSpec; 7] {
    [
        uniform(BenchmarkId::Sphere, 30, -5.12, 5.12, 0.0, vec![vec![0.0; 30]]),
        uniform(BenchmarkId::AxisParallel, 30, -5.12, 5.12, 0.0, vec![vec![0.0; 30]]),
        uniform(BenchmarkId::Rosenbrock, 30, -2.0, 2.0, 0.0, vec![vec![1.0; 30]]),
        uniform(BenchmarkId::Rastrigin, 10, -5.12, 5.12, 0.0, vec![vec![0.0; 10]]),
        BenchmarkSpec {
            id: BenchmarkId::Branin,
            dimension: 2,
            bounds: vec![Bounds::new(-5.0, 10.0), Bounds::new(0.0, 15.0)],
            optimum_value: 0.3979,
            optimizers: vec![
                Point::from_finite(vec![-PI, 12.275]),
                Point::from_finite(vec![PI, 2.275]),
                Point::from_finite(vec![9.42478, 2.475]),
            ],
        },
        uniform(
            BenchmarkId::Michalewicz,
            5,
            0.0,
            PI,
            -4.687658,
            vec![michalewicz::MINIMIZER_5D.to_vec()],
        ),
        uniform(BenchmarkId::Matyas, 2, -10.0, 10.0, 0.0, vec![vec![0.0, 0.0]]),
    ]
}

/// The immutable spec-table entry for `id`.
pub fn get_spec(id: BenchmarkId) -> &'static BenchmarkSpec {
    static TABLE: OnceLock<[BenchmarkSpec; 7]> = OnceLock::new();
    let table = TABLE.get_or_init(build_table);
    &table[BenchmarkId::ALL.iter().position(|&b| b == id).expect("id in table")]
}

/// Checked objective evaluation.
pub fn evaluate(id: BenchmarkId, x: &Point) -> Result<f64> {
    get_spec(id).check_dimension(x.coords())?;
    Ok(id.value(x.coords()))
}

/// Closed-box membership test.
pub fn in_bounds(spec: &BenchmarkSpec, x: &Point) -> Result<bool> {
    spec.check_dimension(x.coords())?;
    Ok(spec.contains(x.coords()))
}
