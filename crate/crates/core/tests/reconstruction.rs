use std::f64::consts::{FRAC_PI_2, PI};

use parity_radar::homodyne::{acquire, sample_dwell_shots, Detection, DwellStream, HomodyneSetup};
use parity_radar::interferometer::{propagate, InterferometerConfig};
use parity_radar::optics::parity_expectation;
use parity_radar::reconstruction::{
    fringe_fwhm, per_shot_parity, reconstruct_parity_b, scan_fringe, Averaging, FringeScan,
};
use parity_radar::CoherentAmplitude;

#[test]
fn noiseless_chain_matches_parity_oracle() {
    let cfg = InterferometerConfig::new(0.03, 0.0).unwrap();
    let setup = HomodyneSetup::ideal(1e4, FRAC_PI_2, 1).unwrap();
    for n_bar in [0.5, 3.0, 10.0, 17.0, 30.0] {
        for i in 0..50 {
            let phi = -PI + 2.0 * PI * i as f64 / 49.0;
            let range = phi / cfg.wavenumber() + 0.03 * 1000.0;
            let ports = propagate(CoherentAmplitude::real(f64::sqrt(n_bar)), &cfg, range);
            let s = reconstruct_parity_b(
                &acquire(ports.port_b, &setup, Detection::Expectation),
                &setup,
                phi,
            )
            .unwrap();
            let oracle = parity_expectation(CoherentAmplitude::real(
                f64::sqrt(n_bar) * (phi / 2.0).sin(),
            ));
            assert!((s.signal_value - oracle).abs() < 1e-10, "{n_bar} {phi}");
        }
    }
}

#[test]
fn fwhm_scales_as_inverse_root_n() {
    let setup = HomodyneSetup::ideal(1e6, FRAC_PI_2, 1).unwrap();
    let ns = [25.0, 100.0, 400.0, 1600.0];
    let widths: Vec<f64> = ns
        .iter()
        .map(|&n: &f64| {
            let s = 1.0 / n.sqrt();
            fringe_fwhm(
                &scan_fringe(&FringeScan::noiseless(
                    n,
                    setup,
                    -5.0 * s,
                    5.0 * s,
                    s / 50.0,
                ))
                .unwrap(),
            )
            .unwrap()
        })
        .collect();
    for (n, w) in ns.iter().zip(&widths) {
        let exact = 4.0 * (f64::ln(2.0) / (2.0 * n)).sqrt().asin();
        assert!((w / exact - 1.0).abs() < 1e-4);
    }
    let lx: Vec<f64> = ns.iter().map(|n| n.ln()).collect();
    let ly: Vec<f64> = widths.iter().map(|w| w.ln()).collect();
    let slope = (ly[3] - ly[0]) / (lx[3] - lx[0]);
    assert!((slope + 0.5).abs() < 0.02, "{slope}");
}

/// `E exp(−Y²/2c)` for `Y ~ N(μ, σ²)`.
fn gaussian_parity(mu: f64, sigma2: f64, c: f64) -> f64 {
    (c / (c + sigma2)).sqrt() * (-mu * mu / (2.0 * (c + sigma2))).exp()
}

#[test]
fn per_shot_averaging_follows_the_gaussian_smoothing_prediction() {
    // per-shot Y has variance ≈ n_LO, so the per-shot estimator tends to
    // √S/√2 while the mean-first one tends to S; they cross at S = 1/2
    let n_lo = 1e4;
    let n_bar = 100.0_f64;
    let setup = HomodyneSetup::ideal(n_lo, FRAC_PI_2, 20_000).unwrap();
    for (k, phi) in [0.0, 0.05, 0.1, 0.2, 0.4].into_iter().enumerate() {
        let a = n_bar.sqrt() * (phi / 2.0f64).sin();
        let exact = (-2.0 * a * a).exp();
        let shots = sample_dwell_shots(
            CoherentAmplitude::real(a),
            &setup,
            DwellStream::new(31, k as u64),
        );
        let per_shot = per_shot_parity(&shots, &setup).unwrap();
        let mu = -2.0 * a * n_lo.sqrt();
        let predicted = gaussian_parity(mu, n_lo + a * a, n_lo);
        assert!(
            (per_shot - predicted).abs() < 0.01,
            "phi {phi}: {per_shot} vs {predicted}"
        );
        let gap = per_shot - exact;
        if exact > 0.6 {
            assert!(gap < -0.05, "phi {phi}: gap {gap}");
        } else if exact < 0.4 {
            assert!(gap > 0.0, "phi {phi}: gap {gap}");
        }
    }
}

#[test]
fn mean_first_is_consistent_where_per_shot_is_not() {
    let setup = HomodyneSetup::ideal(1e6, FRAC_PI_2, 1000).unwrap();
    let base = FringeScan::noiseless(100.0, setup, -0.2, 0.2, 0.1).sampled(4);
    let exact: Vec<f64> = (0..5)
        .map(|i| (-200.0 * ((-0.2 + 0.1 * i as f64) / 2.0).sin().powi(2)).exp())
        .collect();
    let mean_first = scan_fringe(&base).unwrap();
    let per_shot = scan_fringe(&base.with_averaging(Averaging::PerShot)).unwrap();
    for (i, s) in exact.iter().enumerate() {
        assert!((mean_first.values()[i] - s).abs() < 0.05);
        // per-shot Y has variance n_LO, so it settles on √(S/2) instead
        let smoothed = (s / 2.0).sqrt();
        assert!(
            (per_shot.values()[i] - smoothed).abs() < 0.05,
            "{i}: {}",
            per_shot.values()[i]
        );
    }
    assert!((per_shot.values()[2] - exact[2]).abs() > 0.25);
}

#[test]
fn sampled_port_b_converges() {
    let setup = HomodyneSetup::ideal(1e6, FRAC_PI_2, 100_000).unwrap();
    let a = 10.0 * 0.05f64.sin();
    let exact = (-2.0 * a * a).exp();
    for seed in 0..5 {
        let stats = acquire(
            CoherentAmplitude::real(a),
            &setup,
            Detection::Sampled(DwellStream::new(seed, 0)),
        );
        let s = reconstruct_parity_b(&stats, &setup, 0.1).unwrap();
        assert!((s.signal_value - exact).abs() < 0.01);
    }
}
