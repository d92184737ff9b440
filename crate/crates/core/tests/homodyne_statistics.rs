use std::f64::consts::{FRAC_PI_2, PI};

use parity_radar::homodyne::{measure_dwell, sample_dwell_shots, DwellStream, HomodyneSetup};
use parity_radar::reconstruction::estimate_signed_amplitude;
use parity_radar::CoherentAmplitude;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SHOTS: u64 = 100_000;

/// Expected (mean, variance) of e − d, expanded by hand from |b ± i c|²/2.
fn skellam(a: f64, lo: f64, theta: f64, eta: f64) -> (f64, f64) {
    let e = eta * (a * a + lo * lo - 2.0 * a * lo * theta.sin()) / 2.0;
    let d = eta * (a * a + lo * lo + 2.0 * a * lo * theta.sin()) / 2.0;
    (e - d, e + d)
}

#[test]
fn mean_and_variance_contracts() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for k in 0..20 {
        let a: f64 = rng.random_range(0.1..5.0);
        let lo = a * rng.random_range(10.0..60.0);
        let theta = rng.random_range(-PI..PI);
        let eta = rng.random_range(0.3..1.0);
        let setup = HomodyneSetup::new(lo, theta, eta, SHOTS).unwrap();
        let stats = measure_dwell(CoherentAmplitude::real(a), &setup, DwellStream::new(77, k));
        let (mean, var) = skellam(a, lo, theta, eta);
        assert!((mean - (-2.0 * eta * a * lo * theta.sin())).abs() < 1e-9 * var);
        let se = (var / SHOTS as f64).sqrt();
        assert!(
            (stats.mean_difference - mean).abs() < 4.0 * se,
            "tuple {k}: {} vs {mean} (se {se})",
            stats.mean_difference
        );
        assert!(
            (stats.var_difference / var - 1.0).abs() < 0.05,
            "tuple {k}: {} vs {var}",
            stats.var_difference
        );
    }
}

#[test]
fn zero_signal_averages_to_zero() {
    let setup = HomodyneSetup::ideal(1e4, FRAC_PI_2, SHOTS).unwrap();
    let stats = measure_dwell(CoherentAmplitude::VACUUM, &setup, DwellStream::new(5, 0));
    assert!(stats.mean_difference.abs() < 3.0 * (1e4 / SHOTS as f64).sqrt());
}

#[test]
fn efficiency_thins_both_detectors() {
    let signal = CoherentAmplitude::real(2.0);
    let full = HomodyneSetup::new(30.0, 0.4, 1.0, SHOTS).unwrap();
    let half = HomodyneSetup::new(30.0, 0.4, 0.5, SHOTS).unwrap();
    let mean_counts = |setup: &HomodyneSetup| {
        let shots = sample_dwell_shots(signal, setup, DwellStream::new(9, 1));
        let e = shots.iter().map(|s| s.count_e as f64).sum::<f64>() / shots.len() as f64;
        let d = shots.iter().map(|s| s.count_d as f64).sum::<f64>() / shots.len() as f64;
        (e, d)
    };
    let (e1, d1) = mean_counts(&full);
    let (e2, d2) = mean_counts(&half);
    let (m_e, m_d) = (
        (4.0 + 900.0 - 120.0 * 0.4f64.sin()) / 2.0,
        (4.0 + 900.0 + 120.0 * 0.4f64.sin()) / 2.0,
    );
    for (got, expect) in [(e1, m_e), (d1, m_d), (e2, 0.5 * m_e), (d2, 0.5 * m_d)] {
        let se = (expect / SHOTS as f64).sqrt();
        assert!((got - expect).abs() < 4.0 * se, "{got} vs {expect}");
    }
}

fn amplitude_spread(n_lo: f64, dark: f64, shots: u64, seeds: u64) -> f64 {
    let setup = HomodyneSetup::ideal(n_lo, FRAC_PI_2, shots)
        .unwrap()
        .with_dark_rate(dark)
        .unwrap();
    let est: Vec<f64> = (0..seeds)
        .map(|s| {
            let stats = measure_dwell(CoherentAmplitude::real(1.0), &setup, DwellStream::new(s, 3));
            estimate_signed_amplitude(&stats, &setup).unwrap()
        })
        .collect();
    let m = est.iter().sum::<f64>() / est.len() as f64;
    (est.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (est.len() - 1) as f64).sqrt()
}

#[test]
fn lo_gain_lifts_signal_above_a_dark_count_floor() {
    // dark counts dominate: var(a) ≈ 2D/(4 n_LO shots)
    let d = 1e5;
    let s1 = amplitude_spread(100.0, d, 64, 400);
    let s4 = amplitude_spread(400.0, d, 64, 400);
    let predict = |n_lo: f64| ((n_lo + 2.0 * d + 1.0) / (4.0 * n_lo * 64.0)).sqrt();
    assert!(
        (s1 / predict(100.0) - 1.0).abs() < 0.12,
        "{s1} vs {}",
        predict(100.0)
    );
    assert!((s1 / s4 - 2.0).abs() < 0.25, "ratio {}", s1 / s4);
}

#[test]
fn without_dark_counts_the_lo_does_not_change_amplitude_noise() {
    // pure shot noise: var(a) = (n_LO + a²)/(4 n_LO shots), flat in n_LO
    let s1 = amplitude_spread(1e3, 0.0, 64, 400);
    let s4 = amplitude_spread(4e3, 0.0, 64, 400);
    let predict = (1.0f64 / (4.0 * 64.0)).sqrt();
    assert!((s1 / predict - 1.0).abs() < 0.12);
    assert!((s1 / s4 - 1.0).abs() < 0.2, "ratio {}", s1 / s4);
}

#[test]
fn shots_average_down_as_root_n() {
    let s16 = amplitude_spread(1e4, 0.0, 16, 400);
    let s256 = amplitude_spread(1e4, 0.0, 256, 400);
    assert!((s16 / s256 - 4.0).abs() < 0.5, "{}", s16 / s256);
}
