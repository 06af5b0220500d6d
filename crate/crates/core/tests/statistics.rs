mod common;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tomorank::calibration::{nu_bootstrap, nu_oracle, nu_theory};
use tomorank::experiments::{oracle_errors, simulate_estimate};
use tomorank::inversion::trace_norm_factor;
use tomorank::seed::derive_seed;
use tomorank::states::diag_state;
use tomorank::QubitCount;

fn q(n: usize) -> QubitCount {
    QubitCount::new(n).unwrap()
}

#[test]
fn linear_estimator_is_unbiased() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let rho = common::random_density(4, 4, &mut rng);
    let reps = 500;
    let samples: Vec<_> = (0..reps)
        .map(|j| {
            simulate_estimate(&rho, 50, derive_seed(100, j))
                .unwrap()
                .matrix
        })
        .collect();
    for i in 0..4 {
        for k in 0..4 {
            for part in [
                |z: num_complex::Complex64| z.re,
                |z: num_complex::Complex64| z.im,
            ] {
                let xs: Vec<f64> = samples.iter().map(|s| part(s.get(i, k))).collect();
                let mean = xs.iter().sum::<f64>() / reps as f64;
                let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (reps as f64 - 1.0);
                let se = (var / reps as f64).sqrt();
                let truth = part(rho.matrix().get(i, k));
                assert!(
                    (mean - truth).abs() <= 5.0 * se + 1e-12,
                    "entry ({i},{k}): mean {mean}, truth {truth}, se {se}"
                );
            }
        }
    }
}

#[test]
fn bootstrap_tracks_monte_carlo_oracle() {
    let rho = diag_state(q(3), 2).unwrap();
    let m = 100;
    let errors = oracle_errors(&rho, m, 200, 7).unwrap();
    let mc = errors.iter().map(|e| e * e).sum::<f64>() / errors.len() as f64;
    let est = simulate_estimate(&rho, m, 8).unwrap();
    let boot = nu_bootstrap(&est, m, 20, 9).unwrap().value;
    assert!(
        boot > mc / 3.0 && boot < mc * 3.0,
        "bootstrap {boot}, Monte Carlo {mc}"
    );
}

#[test]
fn bootstrap_ignores_thread_count() {
    let est = simulate_estimate(&diag_state(q(2), 2).unwrap(), 40, 3).unwrap();
    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let a = single.install(|| nu_bootstrap(&est, 40, 8, 11).unwrap());
    let b = nu_bootstrap(&est, 40, 8, 11).unwrap();
    assert_eq!(a, b);
}

#[test]
fn theory_penalty_exceeds_observed_oracle() {
    let n = q(4);
    let theory = nu_theory(n, 50, 0.0, 1.0).unwrap();
    for d in 1..=4 {
        let rho = diag_state(n, d).unwrap();
        for j in 0..20 {
            let est = simulate_estimate(&rho, 50, derive_seed(d as u64, j)).unwrap();
            assert!(nu_oracle(&est, &rho).unwrap() < theory);
        }
    }
}

#[test]
fn oracle_penalty_decreases_with_m() {
    let rho = diag_state(q(4), 3).unwrap();
    let mean_sq = |m| {
        let e = oracle_errors(&rho, m, 20, 21).unwrap();
        e.iter().map(|x| x * x).sum::<f64>() / e.len() as f64
    };
    assert!(mean_sq(100) < mean_sq(50));
}

#[test]
fn trace_norm_bounded_by_frobenius() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for i in 0..50 {
        let n = 1 + i % 3;
        let h = common::random_hermitian(1 << n, &mut rng);
        let lhs = h.trace_norm().unwrap();
        let rhs = trace_norm_factor(q(n)) * h.frobenius_norm();
        assert!(lhs <= rhs * (1.0 + 1e-12), "{lhs} > {rhs}");
    }
}
