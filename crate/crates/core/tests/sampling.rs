use logfreq::sampling::{
    check_avdonin_growth, check_easy_inequality, construct_lambda, convergence_factor,
    eval_g_sampling, eval_s, g_derivative_at_node, FrequencySet, PulseTrain, Reconstructor,
    SamplingConfig, Zone,
};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn config() -> SamplingConfig {
    SamplingConfig::new(5.0, 0.2).unwrap()
}

fn pulse(rng: &mut ChaCha8Rng, length: f64) -> PulseTrain {
    let tau = rng.random_range(0.3..0.7) * length;
    let reach = 0.9 * length - tau;
    let count = rng.random_range(1..=4);
    PulseTrain {
        tau,
        beta: rng.random_range(5.0..25.0),
        shifts: (0..count)
            .map(|_| rng.random_range(-reach..reach))
            .collect(),
        coeffs: (0..count)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect(),
    }
}

fn selected(seed: u64) -> (PulseTrain, FrequencySet) {
    let cfg = config();
    let input = pulse(&mut ChaCha8Rng::seed_from_u64(seed), cfg.length());
    let freq = construct_lambda(|x| input.transform(x).norm(), cfg, 4 * cfg.k0()).unwrap();
    (input, freq)
}

#[test]
fn harmonic_generating_function_is_a_sine() {
    let cfg = config();
    let freq = FrequencySet::harmonic(cfg, 4 * cfg.k0());
    let w = cfg.width();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let z = Complex64::new(rng.random_range(-3.0..3.0), rng.random_range(-0.5..0.5));
        let ratio = eval_s(&freq, z, 100_000).unwrap() / (z * w).sin();
        assert!((ratio - 1.0 / w).norm() < 1e-6, "z {z}: {ratio}");
    }
}

#[test]
fn generating_function_vanishes_on_its_zeros() {
    let (_, freq) = selected(1);
    let k_prod = 100_000;
    assert_eq!(
        eval_s(&freq, Complex64::new(0.0, 0.0), k_prod).unwrap(),
        Complex64::new(0.0, 0.0)
    );
    for e in freq.entries.iter().filter(|e| e.zone == Zone::Wing) {
        assert_eq!(
            eval_s(&freq, Complex64::new(e.lambda, 0.0), k_prod)
                .unwrap()
                .norm(),
            0.0
        );
    }
    assert!(eval_s(&freq, Complex64::new(1.0, 0.0), 10).is_err());
}

#[test]
fn kernels_are_lagrange_interpolants_with_convergence_factor() {
    let (_, freq) = selected(2);
    let rec = Reconstructor::new(freq.clone(), 10.0);
    let k_prod = rec.product_len();
    let eta = freq.config.eta();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for j in (0..freq.len()).step_by(7) {
        let lambda = freq.entries[j].lambda;
        let slope = g_derivative_at_node(&freq, j, k_prod);
        for _ in 0..5 {
            let x = rng.random_range(-10.0..10.0);
            let g = eval_g_sampling(&freq, Complex64::new(x, 0.0), k_prod).unwrap();
            let expected = convergence_factor(eta, x - lambda) * g / (slope * (x - lambda));
            let got = rec.kernel(j, x);
            assert!(
                (got - expected).norm() <= 1e-8 * expected.norm().max(1.0),
                "j {j} x {x}"
            );
        }
        for (i, e) in freq.entries.iter().enumerate() {
            let value = rec.kernel(j, e.lambda);
            let target = if i == j { 1.0 } else { 0.0 };
            assert!((value - target).norm() < 1e-12, "j {j} at node {i}");
        }
    }
}

#[test]
fn selection_windows_are_disjoint() {
    let cfg = config();
    let k_max = 4 * cfg.k0() as i64;
    let mut centres: Vec<f64> = (-k_max..=k_max).map(|k| cfg.window_centre(k)).collect();
    centres.sort_by(f64::total_cmp);
    for pair in centres.windows(2) {
        assert!(pair[1] - pair[0] >= 2.0 * cfg.window_radius() - 1e-15);
    }
    let (_, freq) = selected(3);
    for e in freq.entries.iter().filter(|e| !e.fallback) {
        assert!((e.lambda - cfg.window_centre(e.k)).abs() < cfg.window_radius());
    }
}

proptest! {
    #[test]
    fn convergence_factor_shape(eta in 0.05f64..0.95, y in -200.0f64..200.0) {
        let h = convergence_factor(eta, y);
        prop_assert!((0.0..=1.0).contains(&h));
        prop_assert_eq!(h, convergence_factor(eta, -y));
        if y != 0.0 {
            prop_assert!(h <= (2.0 / (eta * y)).powi(2) * (1.0 + 1e-12));
        }
    }
}

#[test]
fn convergence_factor_values() {
    assert_eq!(convergence_factor(0.2, 0.0), 1.0);
    for m in 1..=5 {
        assert!(convergence_factor(0.2, 2.0 * PI * m as f64 / 0.2) < 1e-28);
    }
}

#[test]
fn random_selections_are_separated() {
    for seed in 0..20 {
        let (_, freq) = selected(100 + seed);
        let floor = 1.0 / (4.0 * freq.config.width());
        assert!(
            freq.min_separation() >= floor,
            "seed {seed}: {}",
            freq.min_separation()
        );
        assert!(freq.max_kadec_offset() <= 0.25, "seed {seed}");
    }
}

#[test]
fn zero_transform_gives_trivial_inequality() {
    let cfg = config();
    let freq = construct_lambda(|_| 0.0, cfg, 4 * cfg.k0()).unwrap();
    let check = check_easy_inequality(|_| Complex64::new(0.0, 0.0), &freq, 1000).unwrap();
    assert_eq!((check.lhs, check.rhs, check.holds), (0.0, 0.0, true));
}

#[test]
fn easy_inequality_refuses_a_foreign_selection() {
    let (input, freq) = selected(4);
    let other = |x: f64| input.transform(x) * 2.0;
    assert!(check_easy_inequality(other, &freq, 1000).is_err());
    assert!(
        check_easy_inequality(|x| input.transform(x), &freq, 2 * freq.max_index())
            .unwrap()
            .holds
    );
}

#[test]
fn growth_constants_are_moderate() {
    let (_, freq) = selected(6);
    let grid: Vec<f64> = (-200..=200).map(|j| 0.25 * j as f64).collect();
    let report = check_avdonin_growth(&freq, &grid);
    assert!(report.kappa <= 10.0, "{report:?}");
    assert!(report.derivative_kappa <= 10.0, "{report:?}");
    assert!(report.lower > 0.0 && report.upper.is_finite());
}

#[test]
fn pulse_transform_is_even_for_a_centred_pulse() {
    let centred = PulseTrain {
        tau: 2.0,
        beta: 10.0,
        shifts: vec![0.0],
        coeffs: vec![Complex64::new(1.0, 0.0)],
    };
    assert_eq!(centred.support_radius(), 2.0);
    for x in [0.0, 0.5, 3.0, 7.5, 40.0] {
        let (a, b) = (centred.transform(x), centred.transform(-x));
        assert!((a - b).norm() <= 1e-14 * a.norm().max(1.0));
        assert!(a.im.abs() <= 1e-14 * a.norm().max(1.0));
    }
}

#[test]
fn rejects_bad_configuration() {
    assert!(SamplingConfig::new(5.0, 0.0).is_err());
    assert!(SamplingConfig::new(0.5, 0.2).is_err());
    let cfg = config();
    assert!(construct_lambda(|_| 0.0, cfg, cfg.k0()).is_err());
}
