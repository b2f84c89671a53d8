//! Selected seeds from the perturbation-invariance equation
//! `F(x) = F(x + eps * e_m)`.
//!
//! Two routes are offered. [`analytic_seed_pool`] hard-codes the solved
//! forms for each benchmark. [`numeric_perturbation_roots`] solves the
//! one-dimensional equation `f(x + eps) = f(x)` by grid scan and bisection,
//! and [`numeric_seed_pool`] applies it term by term to the separable
//! benchmarks.

use std::f64::consts::PI;
use std::fmt;

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::bench::{branin, get_spec, BenchmarkId, BenchmarkSpec, Point};
use crate::error::{Error, Result};

/// Candidate values closer than this are considered identical.
pub const DEDUP_TOLERANCE: f64 = 1e-8;
/// Bisection stops once the bracket is narrower than this.
pub const BISECTION_TOLERANCE: f64 = 1e-12;
pub const DEFAULT_GRID_POINTS: usize = 10_001;
pub const DEFAULT_NUMERIC_EPSILON: f64 = 1e-6;
/// Padding jitter standard deviation, as a fraction of the coordinate range.
pub const JITTER_FRACTION: f64 = 1e-3;

/// Perturbation magnitude. Always finite and non-negative.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Epsilon(f64);

impl Epsilon {
    pub const ZERO: Epsilon = Epsilon(0.0);

    pub fn new(value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::InvalidEpsilon(value, "must be finite"));
        }
        if value < 0.0 {
            return Err(Error::InvalidEpsilon(value, "must be non-negative"));
        }
        Ok(Epsilon(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl Default for Epsilon {
    fn default() -> Self {
        Epsilon::ZERO
    }
}

impl TryFrom<f64> for Epsilon {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Epsilon::new(value)
    }
}

impl From<Epsilon> for f64 {
    fn from(e: Epsilon) -> f64 {
        e.0
    }
}

/// Which term of the objective a candidate was derived from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CandidateBranch {
    QuadraticTerm,
    TrigTerm,
}

impl CandidateBranch {
    pub fn description(self) -> &'static str {
        match self {
            CandidateBranch::QuadraticTerm => "root of the perturbed polynomial term",
            CandidateBranch::TrigTerm => "root of the perturbed trigonometric term",
        }
    }
}

impl fmt::Display for CandidateBranch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CandidateBranch::QuadraticTerm => "quadratic",
            CandidateBranch::TrigTerm => "trig",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub value: f64,
    pub branch: CandidateBranch,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WholePointSeed {
    pub point: Point,
    pub branch: CandidateBranch,
}

/// Selected candidates for one benchmark.
///
/// `per_dimension_candidates` is either empty or holds one candidate list
/// per coordinate, ordered quadratic branch first and ascending within a
/// branch. Duplicates are removed within a branch only, so the same value
/// may appear once per branch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedPool {
    pub benchmark: BenchmarkId,
    pub epsilon: Epsilon,
    pub per_dimension_candidates: Vec<Vec<Candidate>>,
    pub whole_point_seeds: Vec<WholePointSeed>,
}

impl SeedPool {
    fn empty(benchmark: BenchmarkId, epsilon: Epsilon) -> Self {
        SeedPool {
            benchmark,
            epsilon,
            per_dimension_candidates: Vec::new(),
            whole_point_seeds: Vec::new(),
        }
    }

    fn has_product(&self) -> bool {
        !self.per_dimension_candidates.is_empty() && self.per_dimension_candidates.iter().all(|c| !c.is_empty())
    }

    pub fn is_empty(&self) -> bool {
        self.whole_point_seeds.is_empty() && !self.has_product()
    }

    /// Size of the per-dimension Cartesian product, saturating at `usize::MAX`.
    pub fn product_size(&self) -> usize {
        if !self.has_product() {
            return 0;
        }
        self.per_dimension_candidates
            .iter()
            .fold(1usize, |acc, c| acc.saturating_mul(c.len()))
    }

    /// Sets the same candidate list on every coordinate, dropping values
    /// outside that coordinate's bounds.
    fn set_per_dimension(&mut self, spec: &BenchmarkSpec, candidates: &[Candidate]) {
        self.per_dimension_candidates = spec
            .bounds
            .iter()
            .map(|b| normalize(candidates.iter().copied().filter(|c| b.contains(c.value)).collect()))
            .collect();
    }

    fn push_whole(&mut self, spec: &BenchmarkSpec, coords: Vec<f64>, branch: CandidateBranch) {
        if !coords.iter().all(|v| v.is_finite()) || !spec.contains(&coords) {
            return;
        }
        let duplicate = self.whole_point_seeds.iter().any(|s| {
            s.branch == branch
                && s.point
                    .coords()
                    .iter()
                    .zip(&coords)
                    .all(|(a, b)| (a - b).abs() <= DEDUP_TOLERANCE)
        });
        if !duplicate {
            self.whole_point_seeds.push(WholePointSeed {
                point: Point::from_finite(coords),
                branch,
            });
        }
    }
}

/// Sort by (branch, value) and drop near-duplicates inside each branch.
fn normalize(mut candidates: Vec<Candidate>) -> Vec<Candidate> {
    candidates.retain(|c| c.value.is_finite());
    candidates.sort_by(|a, b| a.branch.cmp(&b.branch).then(a.value.total_cmp(&b.value)));
    let mut out: Vec<Candidate> = Vec::with_capacity(candidates.len());
    for c in candidates {
        match out.last() {
            Some(last) if last.branch == c.branch && (c.value - last.value).abs() <= DEDUP_TOLERANCE => {}
            _ => out.push(c),
        }
    }
    out
}

/// Integers `k` such that `offset + k * step` can land in `[lo, hi]`.
fn k_range(lo: f64, hi: f64, offset: f64, step: f64) -> std::ops::RangeInclusive<i64> {
    let a = ((lo - offset) / step).floor() as i64 - 1;
    let b = ((hi - offset) / step).ceil() as i64 + 1;
    a..=b
}

fn quadratic(value: f64) -> Candidate {
    Candidate {
        value,
        branch: CandidateBranch::QuadraticTerm,
    }
}

fn trig(value: f64) -> Candidate {
    Candidate {
        value,
        branch: CandidateBranch::TrigTerm,
    }
}

/// Closed-form solutions of the perturbation equation for `id`.
///
/// Deterministic. Every candidate lies inside the benchmark's closed box;
/// solutions that fall outside are dropped, never clamped.
pub fn analytic_seed_pool(id: BenchmarkId, eps: Epsilon) -> SeedPool {
    let spec = get_spec(id);
    let e = eps.value();
    let mut pool = SeedPool::empty(id, eps);
    match id {
        BenchmarkId::Sphere | BenchmarkId::AxisParallel => {
            pool.set_per_dimension(spec, &[quadratic(e / 2.0)]);
        }
        BenchmarkId::Rastrigin => {
            // quadratic part: x = eps/2; cosine part perturbed in its
            // argument: x = (±k·pi + eps) / (4·pi) = ±k/4 + eps/(4·pi).
            let mut cands = vec![quadratic(e / 2.0)];
            let reach = spec
                .bounds
                .iter()
                .map(|b| b.lo.abs().max(b.hi.abs()))
                .fold(0.0, f64::max);
            let k_max = (4.0 * reach).ceil() as i64 + 1;
            for k in 0..=k_max {
                let shift = e / (4.0 * PI);
                cands.push(trig(k as f64 / 4.0 + shift));
                cands.push(trig(-(k as f64) / 4.0 + shift));
            }
            pool.set_per_dimension(spec, &cands);
        }
        BenchmarkId::Michalewicz => {
            // sin(x) term: x = k·pi ± pi/2 + eps/2.
            let mut cands = Vec::new();
            for b in &spec.bounds {
                for k in k_range(b.lo, b.hi, e / 2.0, PI) {
                    cands.push(trig((k as f64 + 0.5) * PI + e / 2.0));
                    cands.push(trig((k as f64 - 0.5) * PI + e / 2.0));
                }
            }
            pool.set_per_dimension(spec, &cands);
        }
        BenchmarkId::Matyas => {
            let x2 = e / 2.0;
            let x1 = -(0.48 / 0.52) * x2 + 0.26 * e / 0.52;
            pool.push_whole(spec, vec![x1, x2], CandidateBranch::QuadraticTerm);
        }
        BenchmarkId::Rosenbrock => {
            // Only the eps = 0 limit of the chained constraint is real-valued.
            pool.push_whole(spec, vec![1.0; spec.dimension], CandidateBranch::QuadraticTerm);
        }
        BenchmarkId::Branin => {
            // cos(x1) term gives x1 = ±k·pi + eps/2; the squared term then
            // forces u = eps/2, i.e. x2 = b·x1² − c·x1 + d + eps/2.
            let c = branin::CONSTANTS;
            let b1 = spec.bounds[0];
            for k in k_range(b1.lo, b1.hi, e / 2.0, PI) {
                let x1 = k as f64 * PI + e / 2.0;
                if !b1.contains(x1) {
                    continue;
                }
                let x2 = c.b * x1 * x1 - c.c * x1 + c.d + e / 2.0;
                pool.push_whole(spec, vec![x1, x2], CandidateBranch::TrigTerm);
            }
            pool.whole_point_seeds
                .sort_by(|a, b| a.point.coords()[0].total_cmp(&b.point.coords()[0]));
        }
    }
    pool
}

/// Non-fatal conditions met while scanning for roots.
#[derive(Debug, Clone, PartialEq)]
pub enum ScanWarning {
    /// `f` was non-finite at or next to this grid point; the bracket was skipped.
    NonFinite { x: f64 },
    /// `f(x + eps) - f(x)` vanished on the whole grid.
    Degenerate,
    /// A sign change whose bisected root failed the residual check, as at a pole.
    Residual { x: f64, residual: f64 },
}

impl fmt::Display for ScanWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScanWarning::NonFinite { x } => write!(f, "non-finite objective near x = {x}; bracket skipped"),
            ScanWarning::Degenerate => f.write_str("difference is identically zero on the grid; no isolated roots"),
            ScanWarning::Residual { x, residual } => {
                write!(f, "sign change near x = {x} is not a root (residual {residual:e})")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RootScan {
    /// Sorted, deduplicated roots.
    pub roots: Vec<f64>,
    pub warnings: Vec<ScanWarning>,
}

fn residual_ok(f: &impl Fn(f64) -> f64, r: f64, eps: f64) -> (bool, f64) {
    let fr = f(r);
    let g = f(r + eps) - fr;
    (g.is_finite() && g.abs() <= 1e-9 * (1.0 + fr.abs()), g)
}

/// All roots of `g(x) = f(x + eps) - f(x)` on `[lo, hi]`.
///
/// Scans `grid_points` uniformly spaced points for sign changes of `g` and
/// bisects each bracket to [`BISECTION_TOLERANCE`]. Grid points where `g`
/// is exactly zero count as roots. The result is deduplicated at
/// [`DEDUP_TOLERANCE`], and every root satisfies
/// `|g(r)| <= 1e-9 * (1 + |f(r)|)`.
pub fn numeric_perturbation_roots(
    f: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    eps: Epsilon,
    grid_points: usize,
) -> Result<RootScan> {
    let e = eps.value();
    if e == 0.0 {
        return Err(Error::InvalidEpsilon(e, "the numeric solver needs eps > 0"));
    }
    if grid_points < 2 {
        return Err(Error::InvalidScan(format!(
            "need at least 2 grid points, got {grid_points}"
        )));
    }
    if !lo.is_finite() || !hi.is_finite() || lo >= hi {
        return Err(Error::InvalidScan(format!("invalid interval [{lo}, {hi}]")));
    }

    let g = |x: f64| f(x + e) - f(x);
    let step = (hi - lo) / (grid_points - 1) as f64;
    let xs: Vec<f64> = (0..grid_points)
        .map(|j| if j + 1 == grid_points { hi } else { lo + j as f64 * step })
        .collect();
    let gs: Vec<f64> = xs.iter().map(|&x| g(x)).collect();

    let mut scan = RootScan::default();
    if gs.iter().all(|&v| v == 0.0) {
        scan.warnings.push(ScanWarning::Degenerate);
        return Ok(scan);
    }

    let mut roots = Vec::new();
    for (j, &gj) in gs.iter().enumerate() {
        if !gj.is_finite() {
            scan.warnings.push(ScanWarning::NonFinite { x: xs[j] });
            continue;
        }
        if gj == 0.0 {
            roots.push(xs[j]);
            continue;
        }
        let Some(&gn) = gs.get(j + 1) else { continue };
        if !gn.is_finite() || gn == 0.0 || gj.signum() == gn.signum() {
            continue;
        }
        let r = bisect(&g, xs[j], xs[j + 1], gj);
        match residual_ok(&f, r, e) {
            (true, _) => roots.push(r),
            (false, residual) => scan.warnings.push(ScanWarning::Residual { x: r, residual }),
        }
    }

    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|b, a| (*b - *a).abs() <= DEDUP_TOLERANCE);
    scan.roots = roots;
    Ok(scan)
}

fn bisect(g: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, mut ga: f64) -> f64 {
    // 200 halvings take any finite bracket below the tolerance.
    for _ in 0..200 {
        if b - a <= BISECTION_TOLERANCE {
            break;
        }
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let gm = g(m);
        if gm == 0.0 {
            return m;
        }
        if gm.signum() == ga.signum() {
            a = m;
            ga = gm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

type Term = Box<dyn Fn(f64) -> f64>;

/// The separable one-dimensional terms of coordinate `index`, tagged with
/// the branch they feed. `None` for benchmarks whose coordinates are coupled.
pub fn separable_terms(id: BenchmarkId, index: usize) -> Option<Vec<(CandidateBranch, Term)>> {
    let weight = (index + 1) as f64;
    let terms: Vec<(CandidateBranch, Term)> = match id {
        BenchmarkId::Sphere => vec![(CandidateBranch::QuadraticTerm, Box::new(|x: f64| x * x))],
        BenchmarkId::AxisParallel => {
            vec![(CandidateBranch::QuadraticTerm, Box::new(move |x: f64| weight * x * x))]
        }
        BenchmarkId::Rastrigin => vec![
            (CandidateBranch::QuadraticTerm, Box::new(|x: f64| x * x)),
            (
                CandidateBranch::TrigTerm,
                Box::new(|x: f64| -10.0 * (2.0 * PI * x).cos()),
            ),
        ],
        BenchmarkId::Michalewicz => vec![(CandidateBranch::TrigTerm, Box::new(|x: f64| x.sin()))],
        BenchmarkId::Rosenbrock | BenchmarkId::Branin | BenchmarkId::Matyas => return None,
    };
    Some(terms)
}

/// Seed pool built by [`numeric_perturbation_roots`] on every separable
/// term. `eps` defaults to [`DEFAULT_NUMERIC_EPSILON`].
pub fn numeric_seed_pool(
    id: BenchmarkId,
    eps: Option<Epsilon>,
    grid_points: usize,
) -> Result<(SeedPool, Vec<ScanWarning>)> {
    let eps = match eps {
        Some(e) => e,
        None => Epsilon::new(DEFAULT_NUMERIC_EPSILON)?,
    };
    let spec = get_spec(id);
    let mut pool = SeedPool::empty(id, eps);
    let mut warnings = Vec::new();
    for (index, b) in spec.bounds.iter().enumerate() {
        let terms = separable_terms(id, index)
            .ok_or_else(|| Error::InvalidConfig(format!("{id} is not dimension-separable; use the analytic pool")))?;
        let mut cands = Vec::new();
        for (branch, term) in terms {
            let scan = numeric_perturbation_roots(term, b.lo, b.hi, eps, grid_points)?;
            warnings.extend(scan.warnings);
            cands.extend(scan.roots.into_iter().map(|value| Candidate { value, branch }));
        }
        pool.per_dimension_candidates
            .push(normalize(cands.into_iter().filter(|c| b.contains(c.value)).collect()));
    }
    Ok((pool, warnings))
}

/// Expands a pool into exactly `count` in-bounds points.
///
/// Order: whole-point seeds verbatim; then the per-dimension Cartesian
/// product in lexicographic candidate order if it fits in the remaining
/// slots, otherwise the all-first-candidate point followed by independent
/// uniform per-coordinate draws; finally jittered copies of the seeds
/// emitted so far. Exact seeds are never jittered.
pub fn materialize<R: Rng + ?Sized>(pool: &SeedPool, count: usize, rng: &mut R) -> Result<Vec<Point>> {
    if pool.is_empty() {
        return Err(Error::EmptyPool(pool.benchmark.to_string()));
    }
    let spec = get_spec(pool.benchmark);
    let mut out: Vec<Point> = pool
        .whole_point_seeds
        .iter()
        .take(count)
        .map(|s| s.point.clone())
        .collect();

    if pool.has_product() && out.len() < count {
        let remaining = count - out.len();
        let cands = &pool.per_dimension_candidates;
        if pool.product_size() <= remaining {
            let mut idx = vec![0usize; cands.len()];
            loop {
                out.push(Point::from_finite(
                    idx.iter().zip(cands).map(|(&i, c)| c[i].value).collect(),
                ));
                // odometer, last coordinate fastest
                let mut d = cands.len();
                loop {
                    if d == 0 {
                        break;
                    }
                    d -= 1;
                    idx[d] += 1;
                    if idx[d] < cands[d].len() {
                        break;
                    }
                    idx[d] = 0;
                }
                if idx.iter().all(|&i| i == 0) {
                    break;
                }
            }
        } else {
            out.push(Point::from_finite(cands.iter().map(|c| c[0].value).collect()));
            for _ in 1..remaining {
                out.push(Point::from_finite(
                    cands.iter().map(|c| c[rng.random_range(0..c.len())].value).collect(),
                ));
            }
        }
    }

    let originals = out.len();
    if originals == 0 {
        // Pools reaching here always have whole seeds or a product, so only
        // count == 0 lands here.
        return Ok(out);
    }
    let jitter: Vec<Normal<f64>> = spec
        .bounds
        .iter()
        .map(|b| Normal::new(0.0, JITTER_FRACTION * b.width()).expect("positive width"))
        .collect();
    let mut j = 0;
    while out.len() < count {
        let base = out[j % originals].coords();
        let coords = base
            .iter()
            .zip(&spec.bounds)
            .zip(&jitter)
            .map(|((&v, b), n)| b.clamp(v + n.sample(rng)))
            .collect();
        out.push(Point::from_finite(coords));
        j += 1;
    }
    Ok(out)
}
