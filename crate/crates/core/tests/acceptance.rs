// Acceptance checks, one PASS/FAIL line per criterion.

use std::f64::consts::{FRAC_PI_2, LN_2, PI, TAU};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use parity_radar::angular::{
    angular_resolution, classical_angular_resolution, estimate_angle, receive_plane_wave,
    BaselineGeometry, Orientation,
};
use parity_radar::harness::{run_resolution_sweep, run_track, Config, PhotonSource, Scenario};
use parity_radar::homodyne::{acquire, measure_dwell, Detection, DwellStream, HomodyneSetup};
use parity_radar::interferometer::{propagate, InterferometerConfig, SPEED_OF_LIGHT};
use parity_radar::optics::parity_expectation;
use parity_radar::reconstruction::{
    classical_fringe, classical_resolution, fringe_fwhm, range_resolution, reconstruct_parity_b,
    scan_fringe, FringeScan,
};
use parity_radar::CoherentAmplitude;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn std_dev(xs: &[f64]) -> f64 {
    let m = xs.iter().sum::<f64>() / xs.len() as f64;
    (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
}

fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let mx = lx.iter().sum::<f64>() / lx.len() as f64;
    let my = ly.iter().sum::<f64>() / ly.len() as f64;
    lx.iter()
        .zip(&ly)
        .map(|(x, y)| (x - mx) * (y - my))
        .sum::<f64>()
        / lx.iter().map(|x| (x - mx).powi(2)).sum::<f64>()
}

/// Σ (−1)ⁿ Poisson(n; n̄), summed in the log domain.
fn fock_parity(n_bar: f64) -> f64 {
    let terms = (n_bar + 20.0 * n_bar.sqrt() + 50.0).ceil() as u64;
    let mut log_p = -n_bar;
    let mut sum = log_p.exp();
    for n in 1..=terms {
        log_p += n_bar.ln() - (n as f64).ln();
        sum += if n % 2 == 0 {
            log_p.exp()
        } else {
            -log_p.exp()
        };
    }
    sum
}

fn parity_oracle() -> Outcome {
    let worst = [0.5, 1.0, 4.0, 9.0, 25.0]
        .iter()
        .map(|&n: &f64| {
            (parity_expectation(CoherentAmplitude::real(n.sqrt())) - fock_parity(n)).abs()
        })
        .fold(0.0, f64::max);
    check(
        worst <= 1e-10,
        format!("max |parity - Fock sum| = {worst:.2e}"),
    )
}

fn homodyne_mean() -> Outcome {
    let setup = HomodyneSetup::new(100.0, FRAC_PI_2, 1.0, 100_000).map_err(|e| e.to_string())?;
    let stats = measure_dwell(CoherentAmplitude::real(1.0), &setup, DwellStream::new(1, 0));
    let se = (10001.0f64 / 1e5).sqrt();
    let z = (stats.mean_difference + 200.0) / se;
    let rel = stats.var_difference / 10001.0 - 1.0;
    check(
        z.abs() < 4.0 && rel.abs() < 0.05,
        format!(
            "mean {:.3} ({z:+.2} SE), variance {:.1} ({:+.2}%)",
            stats.mean_difference,
            stats.var_difference,
            100.0 * rel
        ),
    )
}

fn reconstruction_chain() -> Outcome {
    let cfg = InterferometerConfig::new(0.03, 0.0).unwrap();
    let setup = HomodyneSetup::ideal(1e6, FRAC_PI_2, 1).unwrap();
    let mut worst = 0.0f64;
    for n_bar in [1.0, 5.0, 12.0, 20.0, 30.0] {
        for i in 0..50 {
            let phi = -PI + TAU * i as f64 / 49.0;
            let ports = propagate(
                CoherentAmplitude::real(f64::sqrt(n_bar)),
                &cfg,
                30.0 + phi / cfg.wavenumber(),
            );
            let s = reconstruct_parity_b(
                &acquire(ports.port_b, &setup, Detection::Expectation),
                &setup,
                phi,
            )
            .unwrap();
            worst = worst
                .max((s.signal_value - (-2.0 * n_bar * (phi / 2.0).sin().powi(2)).exp()).abs());
        }
    }
    let setup = setup.with_shots(100_000);
    let a = 10.0 * 0.05f64.sin();
    let exact = (-2.0 * a * a).exp();
    let good = (0..100)
        .filter(|&seed| {
            let stats = acquire(
                CoherentAmplitude::real(a),
                &setup,
                Detection::Sampled(DwellStream::new(seed, 0)),
            );
            (reconstruct_parity_b(&stats, &setup, 0.1)
                .unwrap()
                .signal_value
                - exact)
                .abs()
                < 0.01
        })
        .count();
    check(
        worst < 1e-10 && good >= 99,
        format!("noiseless max err {worst:.2e}, {good}/100 seeds within 0.01 of S = {exact:.5}"),
    )
}

fn fringe_narrowing() -> Outcome {
    let setup = HomodyneSetup::ideal(1e6, FRAC_PI_2, 1).unwrap();
    let g = scan_fringe(&FringeScan::noiseless(100.0, setup, -0.5, 0.5, 1e-4))
        .map_err(|e| e.to_string())?;
    let fwhm = fringe_fwhm(&g).map_err(|e| e.to_string())?;
    let phases: Vec<f64> = (0..=2000).map(|i| -PI + TAU * i as f64 / 2000.0).collect();
    let classical = fringe_fwhm(&classical_fringe(100.0, &phases).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    let ratio = classical / fwhm;
    let cfg = InterferometerConfig::new(0.03, 0.0).unwrap();
    let factor = classical_resolution(&cfg) / range_resolution(100.0, &cfg).unwrap();
    check(
        (fwhm / 0.23548 - 1.0).abs() < 0.02
            && (classical - PI).abs() < 1e-3
            && (ratio / 13.3 - 1.0).abs() < 0.05
            && (factor / 62.83 - 1.0).abs() < 0.01,
        format!("FWHM {fwhm:.5} rad, classical {classical:.4} rad, ratio {ratio:.2}, resolution lambda/{factor:.2}"),
    )
}

fn resolution_scaling() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cfg = Config {
        sweep_n_bar: vec![25.0, 100.0, 400.0, 1600.0],
        noiseless: true,
        ..Config::default()
    };
    let out = run_resolution_sweep(&cfg, dir.path(), false).map_err(|e| e.to_string())?;
    let slope = out.metadata["fwhm_loglog_slope"]
        .as_f64()
        .unwrap_or(f64::NAN);
    let check_slope = {
        let widths: Vec<f64> = cfg
            .sweep_n_bar
            .iter()
            .map(|n| 4.0 * (LN_2 / (2.0 * n)).sqrt().asin())
            .collect();
        loglog_slope(&cfg.sweep_n_bar, &widths)
    };
    check(
        (slope + 0.5).abs() <= 0.02,
        format!("fitted slope {slope:.4} (closed-form widths give {check_slope:.4})"),
    )
}

fn angle_spread(n_bar: f64, l_over_lambda: f64) -> f64 {
    let geom = BaselineGeometry::new(l_over_lambda * 0.03, 0.03, Orientation::Altitudinal).unwrap();
    let setup = HomodyneSetup::ideal(1e6, FRAC_PI_2, 1).unwrap();
    let est: Vec<f64> = (0..200)
        .map(|seed| {
            let det = Detection::Sampled(DwellStream::new(seed, 0));
            let d = receive_plane_wave(
                CoherentAmplitude::real(n_bar.sqrt()),
                &geom,
                2e-4,
                &setup,
                det,
            );
            estimate_angle(&d, &geom, n_bar, Some(2e-4)).unwrap().theta
        })
        .collect();
    std_dev(&est)
}

fn angle_estimation() -> Outcome {
    let geom = BaselineGeometry::new(3.0, 0.03, Orientation::Altitudinal).unwrap();
    let setup = HomodyneSetup::ideal(1e6, FRAC_PI_2, 1).unwrap();
    let mut worst = 0.0f64;
    for i in 0..41 {
        let theta = -0.004 + 2e-4 * i as f64;
        let d = receive_plane_wave(
            CoherentAmplitude::real(10.0),
            &geom,
            theta,
            &setup,
            Detection::Expectation,
        );
        let est = estimate_angle(&d, &geom, 100.0, Some(theta)).map_err(|e| e.to_string())?;
        worst = worst.max((est.theta - theta).abs());
    }
    let ns = [25.0, 100.0, 400.0];
    let by_n: Vec<f64> = ns.iter().map(|&n| angle_spread(n, 100.0)).collect();
    let ls = [10.0, 31.6, 100.0];
    let by_l: Vec<f64> = ls.iter().map(|&l| angle_spread(100.0, l)).collect();
    let (sn, sl) = (loglog_slope(&ns, &by_n), loglog_slope(&ls, &by_l));
    let sigma = angular_resolution(&geom, 100.0).unwrap();
    let formula = (0.03 / 3.0) / (TAU * 10.0);
    let factor = classical_angular_resolution(&geom) / sigma;
    check(
        worst < 1e-9
            && (sn + 0.5).abs() <= 0.05
            && (sl + 1.0).abs() <= 0.05
            && (sigma / formula - 1.0).abs() < 1e-12
            && (factor / (TAU * 10.0) - 1.0).abs() < 0.01,
        format!(
            "round-trip err {worst:.1e} rad, slope vs n {sn:.3}, slope vs L {sl:.3}, sigma_theta {sigma:.4e} rad, factor {factor:.2}"
        ),
    )
}

fn tracking() -> Outcome {
    let base = Scenario {
        photons: PhotonSource::Fixed { n_bar: 100.0 },
        dwells: 200,
        ..Scenario::default()
    };
    let mut errs = Vec::new();
    for seed in 0..50 {
        let t = run_track(&Scenario { seed, ..base }).map_err(|e| e.to_string())?;
        errs.extend(t.iter().map(|p| p.range_m - p.true_range_m));
    }
    let sd = std_dev(&errs);
    let target = base.wavelength / (TAU * 10.0);

    let mut unlocked = 0;
    let mut far = 0;
    let mut unambiguous = 0;
    for (k, slew) in [0.1, 0.2, 0.3, 0.4, 0.49].into_iter().enumerate() {
        let s = Scenario {
            radial_velocity: slew * base.wavelength / TAU / base.dwell_period,
            timing_sigma: 0.9 * base.wavelength / (2.0 * SPEED_OF_LIGHT),
            seed: 500 + k as u64,
            ..base
        };
        for p in run_track(&s).map_err(|e| e.to_string())? {
            unlocked += usize::from(!p.locked);
            if !p.ambiguous {
                unambiguous += 1;
                far += usize::from((p.range_m - p.true_range_m).abs() >= 0.5 * base.wavelength);
            }
        }
    }
    check(
        (sd / target - 1.0).abs() < 0.25 && unlocked == 0 && far == 0 && unambiguous > 0,
        format!(
            "std(R) {sd:.3e} m vs {target:.3e} m ({:+.1}%), {unlocked} unlocked dwells, {far}/{unambiguous} unambiguous fixes off by >= lambda/2",
            100.0 * (sd / target - 1.0)
        ),
    )
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cfg = dir.path().join("track.toml");
    std::fs::write(&cfg, "dwells = 100\nradial_velocity = 1.0\nseed = 42\n")
        .map_err(|e| e.to_string())?;
    let mut csvs = Vec::new();
    for run in ["first", "second"] {
        let out = dir.path().join(run);
        let status = Command::new(env!("CARGO_BIN_EXE_parity-radar"))
            .arg("track")
            .arg("--config")
            .arg(&cfg)
            .arg("--out")
            .arg(&out)
            .output()
            .map_err(|e| e.to_string())?;
        if !status.status.success() {
            return Err(String::from_utf8_lossy(&status.stderr).into_owned());
        }
        csvs.push(std::fs::read(out.join("track.csv")).map_err(|e| e.to_string())?);
    }
    check(
        csvs[0] == csvs[1] && !csvs[0].is_empty(),
        format!(
            "two runs, {} bytes each, identical: {}",
            csvs[0].len(),
            csvs[0] == csvs[1]
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("parity oracle", parity_oracle, Duration::from_secs(1)),
        ("homodyne mean", homodyne_mean, Duration::from_secs(5)),
        (
            "reconstruction chain",
            reconstruction_chain,
            Duration::from_secs(60),
        ),
        ("fringe narrowing", fringe_narrowing, Duration::from_secs(5)),
        (
            "resolution scaling",
            resolution_scaling,
            Duration::from_secs(10),
        ),
        (
            "angle estimation",
            angle_estimation,
            Duration::from_secs(60),
        ),
        ("tracking", tracking, Duration::from_secs(120)),
        ("determinism", determinism, Duration::from_secs(60)),
    ];
    let mut failed = 0;
    for (i, (name, run, budget)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) => (took <= budget, d),
            Err(d) => (false, d),
        };
        failed += usize::from(!ok);
        println!(
            "{} criterion {}: {name}: {detail} [{:.2} s, budget {} s]",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            took.as_secs_f64(),
            budget.as_secs()
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
