use isa_core::harness::{self, summarize_values};
use isa_core::isa::{
    attraction_percentage, normalized_powers, repair, select_target_with, sound_intensity,
    DEFAULT_EPSILON_R,
};
use isa_core::{
    run_isa, Benchmark, Bounds, Direction, IsaParams, Objective, SignMode, Swarm, TargetRule,
};
use proptest::collection::vec;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn direction() -> impl Strategy<Value = Direction> {
    prop_oneof![Just(Direction::Minimise), Just(Direction::Maximise)]
}

fn rule() -> impl Strategy<Value = TargetRule> {
    prop_oneof![Just(TargetRule::Louder), Just(TargetRule::Any)]
}

fn low_dim() -> impl Strategy<Value = Benchmark> {
    prop::sample::select(vec![
        Benchmark::F7,
        Benchmark::F14,
        Benchmark::F15,
        Benchmark::F16,
        Benchmark::F17,
        Benchmark::F18,
        Benchmark::F19,
        Benchmark::F22,
    ])
}

fn swarm_params() -> impl Strategy<Value = IsaParams> {
    (
        0.0..=100.0f64,
        2usize..8,
        1usize..10,
        any::<u64>(),
        rule(),
        any::<bool>(),
    )
        .prop_map(
            |(rho, population_size, iterations, seed, target_rule, literal)| IsaParams {
                rho,
                population_size,
                iterations,
                seed,
                target_rule,
                sign_mode: if literal {
                    SignMode::Literal
                } else {
                    SignMode::Attract
                },
                ..IsaParams::default()
            },
        )
}

fn tiny_report() -> harness::ExperimentReport {
    let mut config = harness::ExperimentConfig::new(vec!["F16".into()]);
    config.runs = 1;
    config.fixed_budget = true;
    config.tuning = None;
    config.template.iterations = 1;
    config.template.population_size = 2;
    harness::run_experiment(&config, &isa_core::Registry::new()).unwrap()
}

proptest! {
    #[test]
    fn powers_sum_to_one(f in vec(-1e6..1e6f64, 2..50), dir in direction()) {
        let p = normalized_powers(&f, dir);
        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        prop_assert!(p.iter().all(|v| (0.0..=1.0).contains(v)));
    }

    #[test]
    fn intensity_decreases_with_distance(p in 1e-6..1.0f64, r in 0.0..1e3f64, dr in 1e-3..1e2f64) {
        prop_assert!(sound_intensity(p, r, DEFAULT_EPSILON_R) > sound_intensity(p, r + dr, DEFAULT_EPSILON_R));
    }

    #[test]
    fn target_is_invariant_under_power_scaling(
        pos in vec(vec(-10.0..10.0f64, 3), 2..15),
        raw in vec(0.0..1.0f64, 15),
        c in 1e-3..1e3f64,
        rule in rule(),
        pick in any::<prop::sample::Index>(),
    ) {
        let powers = &raw[..pos.len()];
        let scaled: Vec<f64> = powers.iter().map(|p| p * c).collect();
        let i = pick.index(pos.len());
        let t = select_target_with(rule, i, &pos, powers, DEFAULT_EPSILON_R);
        prop_assert_ne!(t, i);
        prop_assert_eq!(t, select_target_with(rule, i, &pos, &scaled, DEFAULT_EPSILON_R));
    }

    #[test]
    fn attraction_percentage_stays_in_range(
        fi in -1e3..1e3f64, fj in -1e3..1e3f64, dir in direction(), rho in 0.0..=100.0f64, u in 0.0..1.0f64,
    ) {
        let per = attraction_percentage(fi, fj, dir, rho, u);
        prop_assert!(per >= 0.0 && per <= 2.0 * rho + 1e-9, "{per}");
    }

    #[test]
    fn repair_keeps_points_inside(
        spec in vec((-1e3..1e3f64, 1e-6..1e3f64), 1..8),
        t in vec(-1.0..2.0f64, 8),
        seed in any::<u64>(),
    ) {
        let intervals: Vec<(f64, f64)> = spec.iter().map(|&(lo, w)| (lo, lo + w)).collect();
        let bounds = Bounds::new(intervals.clone()).unwrap();
        let x: Vec<f64> = intervals.iter().zip(&t).map(|(&(lo, hi), s)| lo + s * (hi - lo)).collect();
        let y = repair(&x, &bounds, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert!(bounds.contains(&y));
        for ((a, b), &(lo, hi)) in x.iter().zip(&y).zip(&intervals) {
            if (lo..=hi).contains(a) {
                prop_assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn trajectories_never_get_worse(b in low_dim(), params in swarm_params()) {
        let record = run_isa(&Objective::from(b), &params).unwrap();
        prop_assert_eq!(record.trajectory.len(), params.iterations);
        prop_assert!(record.trajectory.windows(2).all(|w| w[1] <= w[0]));
        prop_assert_eq!(*record.trajectory.last().unwrap(), record.best_fitness);
        prop_assert!(b.spec().bounds.contains(&record.best_position));
    }

    #[test]
    fn runs_are_reproducible(b in low_dim(), params in swarm_params()) {
        let objective = Objective::from(b);
        let a = run_isa(&objective, &params).unwrap().without_timing();
        let c = run_isa(&objective, &params).unwrap().without_timing();
        prop_assert_eq!(a, c);
    }

    #[test]
    fn agents_stay_inside_the_domain(b in low_dim(), params in swarm_params()) {
        let objective = Objective::from(b);
        let mut swarm = Swarm::new(&objective, &params).unwrap();
        for _ in 0..params.iterations {
            swarm.iterate().unwrap();
            prop_assert!(swarm.agents().iter().all(|a| objective.bounds().contains(&a.position)));
        }
    }

    #[test]
    fn intensity_count_is_quadratic(n in prop::sample::select(vec![2usize, 5, 10, 50]), iters in 1usize..4, rule in rule()) {
        let objective = Objective::from(Benchmark::F16);
        let params = IsaParams { population_size: n, iterations: iters, target_rule: rule, ..IsaParams::default() };
        let mut swarm = Swarm::new(&objective, &params).unwrap();
        for _ in 0..iters {
            swarm.iterate().unwrap();
        }
        prop_assert_eq!(swarm.intensity_evaluations(), (iters * n * (n - 1)) as u64);
    }

    #[test]
    fn summary_ignores_run_order(mut v in vec(-1e6..1e6f64, 1..40), dir in direction(), seed in any::<u64>()) {
        let before = summarize_values(&v, dir).unwrap();
        use rand::seq::SliceRandom;
        v.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let after = summarize_values(&v, dir).unwrap();
        prop_assert_eq!(before.median, after.median);
        prop_assert_eq!(before.best, after.best);
        prop_assert_eq!(before.worst, after.worst);
        prop_assert!((before.mean - after.mean).abs() <= 1e-9 * before.mean.abs().max(1.0));
        prop_assert!(before.best <= before.median && before.median <= before.worst || dir == Direction::Maximise);
    }

    #[test]
    fn csv_round_trips_exactly(v in vec(prop::num::f64::NORMAL | prop::num::f64::ZERO, 1..10)) {
        let mut report = tiny_report();
        let stats = summarize_values(&v, Direction::Minimise).unwrap();
        report.functions[0].stats = stats.clone();
        let rows = harness::parse_csv(&report.to_csv().unwrap()).unwrap();
        prop_assert_eq!(&rows[0].stats, &stats);
    }
}
