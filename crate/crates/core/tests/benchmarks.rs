use isa_core::{Benchmark, Direction, Objective, Registry};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn eval(b: Benchmark, x: &[f64]) -> f64 {
    Objective::from(b)
        .evaluate(x, &mut ChaCha8Rng::seed_from_u64(0))
        .unwrap()
}

// Compass search, halving the step whenever no axis move improves.
fn refine(b: Benchmark, start: &[f64]) -> (Vec<f64>, f64) {
    let mut x = start.to_vec();
    let mut fx = eval(b, &x);
    let mut step = 0.5;
    while step > 1e-12 {
        let mut moved = false;
        for d in 0..x.len() {
            for s in [step, -step] {
                let mut y = x.clone();
                y[d] += s;
                let fy = eval(b, &y);
                if fy < fx {
                    (x, fx) = (y, fy);
                    moved = true;
                }
            }
        }
        if !moved {
            step /= 2.0;
        }
    }
    (x, fx)
}

#[test]
fn optimizer_points_reach_known_optima() {
    for b in Benchmark::ALL {
        if let (Some(opt), Some(x)) = (b.known_optimum(), b.optimizer()) {
            let v = eval(b, &x);
            assert!((v - opt).abs() <= 1e-3, "{b}: {v} vs {opt}");
        }
    }
}

#[test]
fn origin_optima_are_exact() {
    for b in [
        Benchmark::F1,
        Benchmark::F2,
        Benchmark::F3,
        Benchmark::F4,
        Benchmark::F6,
        Benchmark::F9,
        Benchmark::F11,
    ] {
        assert_eq!(eval(b, &[0.0; 30]), 0.0, "{b}");
    }
    assert_eq!(eval(Benchmark::F5, &[1.0; 30]), 0.0);
    assert!(eval(Benchmark::F10, &[0.0; 30]).abs() < 1e-14);
}

#[test]
fn stored_optima_are_not_above_refined_minima() {
    // rounding is towards -inf, so a perfect run never reports below the optimum
    for b in [
        Benchmark::F14,
        Benchmark::F15,
        Benchmark::F16,
        Benchmark::F19,
        Benchmark::F20,
        Benchmark::F21,
        Benchmark::F22,
        Benchmark::F23,
    ] {
        let (_, refined) = refine(b, &b.optimizer().unwrap());
        let stored = b.known_optimum().unwrap();
        assert!(
            stored <= refined && refined - stored < 1e-6,
            "{b}: stored {stored}, refined {refined}"
        );
    }
}

#[test]
fn shekel_minima_from_a_cold_start() {
    for (b, expected) in [
        (Benchmark::F21, -10.1532),
        (Benchmark::F22, -10.4029),
        (Benchmark::F23, -10.5364),
    ] {
        let (x, v) = refine(b, &[4.0; 4]);
        assert!((v - expected).abs() < 1e-3, "{b}: {v}");
        assert!(x.iter().all(|c| (c - 4.0).abs() < 0.01), "{b}: {x:?}");
    }
}

#[test]
fn schwefel_matches_a_dense_grid() {
    let per_coord = (0..=1_000_000)
        .map(|k| -500.0 + k as f64 * 1e-3)
        .map(|x: f64| -x * x.abs().sqrt().sin())
        .fold(f64::INFINITY, f64::min);
    let v = eval(Benchmark::F8, &[420.9687; 30]);
    assert!(
        (v - 30.0 * per_coord).abs() < 1e-3,
        "{v} vs {}",
        30.0 * per_coord
    );
    assert!((v + 12569.5).abs() < 0.1);
}

#[test]
fn quartic_noise_depends_only_on_the_stream() {
    let x = [0.5; 30];
    let a = Objective::from(Benchmark::F7)
        .evaluate(&x, &mut ChaCha8Rng::seed_from_u64(3))
        .unwrap();
    let b = Objective::from(Benchmark::F7)
        .evaluate(&x, &mut ChaCha8Rng::seed_from_u64(3))
        .unwrap();
    let c = Objective::from(Benchmark::F7)
        .evaluate(&x, &mut ChaCha8Rng::seed_from_u64(4))
        .unwrap();
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn catalog_covers_all_functions() {
    let registry = Registry::new();
    let ids: Vec<_> = registry.ids().collect();
    assert_eq!(ids.len(), 23);
    for b in Benchmark::ALL {
        let spec = registry.spec_of(b.id()).unwrap();
        assert_eq!(spec.dimension, b.dimension());
        assert_eq!(spec.direction, Direction::Minimise);
        assert_eq!(spec.bounds.dimension(), spec.dimension);
    }
}

fn point_in(b: Benchmark) -> impl Strategy<Value = Vec<f64>> {
    let bounds = b.spec().bounds;
    bounds
        .intervals()
        .iter()
        .map(|&(lo, hi)| lo..=hi)
        .collect::<Vec<_>>()
}

proptest! {
    #[test]
    fn rastrigin_ackley_griewank_are_non_negative(
        x9 in point_in(Benchmark::F9),
        x10 in point_in(Benchmark::F10),
        x11 in point_in(Benchmark::F11),
    ) {
        prop_assert!(eval(Benchmark::F9, &x9) >= 0.0);
        prop_assert!(eval(Benchmark::F10, &x10) >= -1e-14);
        prop_assert!(eval(Benchmark::F11, &x11) >= 0.0);
    }

    #[test]
    fn sphere_is_symmetric(x in point_in(Benchmark::F1)) {
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        prop_assert_eq!(eval(Benchmark::F1, &x), eval(Benchmark::F1, &neg));
    }

    #[test]
    fn deterministic_functions_ignore_the_stream(idx in 0usize..23, seed in any::<u64>()) {
        let b = Benchmark::ALL[idx];
        prop_assume!(b != Benchmark::F7);
        let x = b.spec().bounds.sample(&mut ChaCha8Rng::seed_from_u64(seed));
        let objective = Objective::from(b);
        let v1 = objective.evaluate(&x, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let v2 = objective.evaluate(&x, &mut ChaCha8Rng::seed_from_u64(!seed)).unwrap();
        prop_assert_eq!(v1.to_bits(), v2.to_bits());
    }

    #[test]
    fn no_point_beats_a_known_optimum(idx in 0usize..23, seed in any::<u64>()) {
        let b = Benchmark::ALL[idx];
        if let Some(opt) = b.known_optimum() {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let x = b.spec().bounds.sample(&mut rng);
            prop_assert!(eval(b, &x) >= opt - 1e-9);
        }
    }
}
