mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{mean, Shadow};
use seedpop_core::{
    analytic_seed_pool, evaluate, get_spec, init_population, materialize, numeric_perturbation_roots, run_de_with,
    run_experiment, BenchmarkId, DeConfig, Epsilon, ExperimentSpec, InitStrategy, Point,
};

fn benchmark() -> impl Strategy<Value = BenchmarkId> {
    prop::sample::select(BenchmarkId::ALL.to_vec())
}

fn strategy() -> impl Strategy<Value = InitStrategy> {
    prop_oneof![
        Just(InitStrategy::Random),
        Just(InitStrategy::Selected),
        (0.0..=1.0f64).prop_map(|f| InitStrategy::SemiRandom { selected_fraction: f }),
    ]
}

fn uniform_point(id: BenchmarkId, rng: &mut impl Rng) -> Point {
    let spec = get_spec(id);
    Point::new(spec.bounds.iter().map(|b| rng.random_range(b.lo..=b.hi)).collect()).unwrap()
}

#[test]
fn floors_hold_on_uniform_samples() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for id in [
        BenchmarkId::Sphere,
        BenchmarkId::AxisParallel,
        BenchmarkId::Rastrigin,
        BenchmarkId::Matyas,
    ] {
        let opt = get_spec(id).optimum_value;
        for _ in 0..1000 {
            let x = uniform_point(id, &mut rng);
            assert!(evaluate(id, &x).unwrap() >= opt, "{id} at {x:?}");
        }
    }
}

proptest! {
    #[test]
    fn evaluate_is_pure(id in benchmark(), seed in any::<u64>()) {
        let x = uniform_point(id, &mut ChaCha8Rng::seed_from_u64(seed));
        let a = evaluate(id, &x).unwrap();
        let b = evaluate(id, &x).unwrap();
        prop_assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn symmetric_objectives(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for id in [BenchmarkId::Sphere, BenchmarkId::AxisParallel] {
            let x = uniform_point(id, &mut rng);
            let neg = Point::new(x.coords().iter().map(|v| -v).collect()).unwrap();
            prop_assert_eq!(evaluate(id, &x).unwrap(), evaluate(id, &neg).unwrap());
        }
        let x = uniform_point(BenchmarkId::Matyas, &mut rng);
        let swapped = Point::new(vec![x.coords()[1], x.coords()[0]]).unwrap();
        prop_assert_eq!(evaluate(BenchmarkId::Matyas, &x).unwrap(), evaluate(BenchmarkId::Matyas, &swapped).unwrap());
    }

    #[test]
    fn pools_stay_in_bounds(id in benchmark(), eps in 0.0..2.0f64) {
        let spec = get_spec(id);
        let pool = analytic_seed_pool(id, Epsilon::new(eps).unwrap());
        for (b, cands) in spec.bounds.iter().zip(&pool.per_dimension_candidates) {
            prop_assert!(cands.iter().all(|c| b.contains(c.value)));
        }
        prop_assert!(pool.whole_point_seeds.iter().all(|s| spec.contains(s.point.coords())));
    }

    #[test]
    fn materialize_is_deterministic_and_in_bounds(id in benchmark(), eps in 0.0..0.5f64, count in 1usize..150, seed in any::<u64>()) {
        let spec = get_spec(id);
        let pool = analytic_seed_pool(id, Epsilon::new(eps).unwrap());
        prop_assume!(!pool.is_empty());
        let a = materialize(&pool, count, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let b = materialize(&pool, count, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        prop_assert_eq!(a.len(), count);
        prop_assert!(a.iter().all(|p| spec.contains(p.coords())));
        prop_assert_eq!(a, b);
    }

    #[test]
    fn populations_are_exact(id in benchmark(), s in strategy(), size in 1usize..120, seed in any::<u64>()) {
        let spec = get_spec(id);
        let a = init_population(s, id, size, Epsilon::ZERO, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let b = init_population(s, id, size, Epsilon::ZERO, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        prop_assert_eq!(a.members.len(), size);
        prop_assert!(a.members.iter().all(|m| spec.contains(m.coords())));
        prop_assert_eq!(&a, &b);

        // the selected prefix is exactly what the seed pool produces
        let k = s.selected_count(size);
        if k > 0 {
            let expected = materialize(&analytic_seed_pool(id, Epsilon::ZERO), k, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
            prop_assert_eq!(&a.members[..k], &expected[..]);
        }
    }

    #[test]
    fn numeric_roots_satisfy_residual(a in 0.1..5.0f64, w in 0.5..6.0f64, shift in -1.0..1.0f64, eps in 1e-6..1e-2f64) {
        let f = move |x: f64| a * (x - shift).powi(2) + (w * x).sin();
        let scan = numeric_perturbation_roots(f, -3.0, 3.0, Epsilon::new(eps).unwrap(), 2001).unwrap();
        for w in scan.roots.windows(2) {
            prop_assert!(w[1] - w[0] > 1e-8);
        }
        for &r in &scan.roots {
            prop_assert!((f(r + eps) - f(r)).abs() <= 1e-9 * (1.0 + f(r).abs()));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn engine_invariants(id in benchmark(), s in strategy(), seed in any::<u64>(), f in 0.1..1.5f64, cr in 0.0..=1.0f64) {
        let config = DeConfig {
            population_size: 20,
            differential_weight: f,
            crossover_rate: cr,
            max_nfc: 3_000,
            ..DeConfig::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pop = init_population(s, id, 20, Epsilon::ZERO, &mut rng).unwrap();
        let shadow = Shadow::new(id);
        let res = run_de_with(&shadow, &pop.members, &config, &mut rng.clone()).unwrap();

        prop_assert_eq!(res.nfc, shadow.calls.get());
        prop_assert_eq!(shadow.out_of_bounds.get(), 0);
        prop_assert!(res.nfc <= config.max_nfc);
        prop_assert!(res.nfc >= 20 + res.generations * 20 && res.nfc <= 20 + (res.generations + 1) * 20);
        prop_assert!(res.trace.windows(2).all(|w| w[1].best_value <= w[0].best_value && w[1].nfc > w[0].nfc));
        let log = shadow.log.borrow();
        prop_assert_eq!(res.best_value, log.iter().copied().fold(f64::INFINITY, f64::min));
        prop_assert_eq!(evaluate(id, &res.best_point).unwrap(), res.best_value);
        let target = get_spec(id).optimum_value + config.vtr_tolerance;
        prop_assert_eq!(res.success, res.best_value <= target);
        if res.success {
            // stopped on the first evaluation that reached the target
            let first = log.iter().position(|&v| v <= target).unwrap();
            prop_assert_eq!(res.nfc as usize, (first + 1).max(20));
        }

        let again = run_de_with(&id, &pop.members, &config, &mut rng).unwrap();
        prop_assert_eq!(res, again);
    }
}

#[test]
fn aggregation_matches_independent_recomputation() {
    let spec = ExperimentSpec {
        runs: 7,
        master_seed: 11,
        ..ExperimentSpec::new(
            BenchmarkId::Matyas,
            vec![InitStrategy::Random, InitStrategy::semi_random(0.2).unwrap()],
        )
    };
    let report = run_experiment(&spec).unwrap();
    for s in &report.per_strategy {
        let nfcs: Vec<f64> = s.runs.iter().filter(|r| r.success).map(|r| r.nfc as f64).collect();
        let st = s.stats.unwrap();
        let m = mean(&nfcs);
        let var = nfcs.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (nfcs.len() - 1) as f64;
        let mut sorted = nfcs.clone();
        sorted.sort_by(f64::total_cmp);
        let median = sorted[sorted.len() / 2];
        assert!((st.mean - m).abs() <= 1e-9);
        assert!((st.stddev - var.sqrt()).abs() <= 1e-9);
        assert!((st.median - median).abs() <= 1e-9);
        assert_eq!(st.min as f64, sorted[0]);
        assert_eq!(st.max as f64, *sorted.last().unwrap());
        assert_eq!(s.success_rate, nfcs.len() as f64 / s.runs.len() as f64);
    }
}

#[test]
fn removing_a_strategy_leaves_the_others_unchanged() {
    let all = vec![
        InitStrategy::Random,
        InitStrategy::semi_random(0.5).unwrap(),
        InitStrategy::Selected,
    ];
    let base = ExperimentSpec {
        runs: 4,
        master_seed: 3,
        de_config: DeConfig {
            max_nfc: 5_000,
            ..DeConfig::default()
        },
        ..ExperimentSpec::new(BenchmarkId::Rastrigin, all.clone())
    };
    let full = run_experiment(&base).unwrap();
    let reduced = run_experiment(&ExperimentSpec {
        strategies: vec![all[2], all[0]],
        ..base.clone()
    })
    .unwrap();
    assert_eq!(reduced.per_strategy[0].runs, full.per_strategy[2].runs);
    assert_eq!(reduced.per_strategy[1].runs, full.per_strategy[0].runs);
}
