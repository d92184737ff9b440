//! File-producing experiments behind the command-line subcommands.

use std::f64::consts::{LN_2, PI};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use super::config::Config;
use super::output::{write_csv, write_envelope, SvgPlot};
use super::track::{run_track, TrackPoint};
use crate::angular::{
    angular_resolution, classical_angular_resolution, direction_phase, estimate_angle,
    estimate_azimuth, is_ambiguous, receive_from_direction, Orientation,
};
use crate::error::{Error, Result};
use crate::homodyne::{Detection, DwellStream};
use crate::interferometer::InterferometerConfig;
use crate::optics::CoherentAmplitude;
use crate::reconstruction::{
    classical_fringe, classical_resolution, fringe_fwhm, range_resolution, scan_fringe, Channel,
    FringeScan,
};

/// Files written by one experiment.
#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub csv: PathBuf,
    pub json: PathBuf,
    pub svg: Option<PathBuf>,
    pub metadata: serde_json::Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub phase_rad: f64,
    pub signal: f64,
    pub port: &'static str,
    pub shots: u64,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AngleScanRow {
    pub theta_rad: f64,
    pub phase_rad: f64,
    pub signal: f64,
    pub port: &'static str,
    pub shots: u64,
    pub seed: Option<u64>,
    pub theta_hat_rad: Option<f64>,
    pub sigma_theta_rad: f64,
    pub ambiguous: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResolutionRow {
    pub n_bar: f64,
    pub fwhm_rad: f64,
    /// `1/√n̄`
    pub sigma_rad: f64,
    pub classical_fwhm_rad: f64,
    pub fwhm_ratio: f64,
    pub range_resolution_m: f64,
    pub classical_resolution_m: f64,
    pub angular_resolution_rad: f64,
    pub classical_angular_resolution_rad: f64,
}

fn prepare(out: &Path) -> Result<()> {
    std::fs::create_dir_all(out).map_err(|source| Error::Io {
        path: out.to_path_buf(),
        source,
    })
}

fn seed_of(cfg: &Config) -> Option<u64> {
    (!cfg.noiseless).then_some(cfg.seed)
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

/// Parity interferogram with its classical companion.
pub fn run_fringe_scan(cfg: &Config, out: &Path, svg: bool) -> Result<ExperimentOutput> {
    let scan = cfg.fringe_scan()?;
    let icfg = InterferometerConfig::new(cfg.wavelength, cfg.gamma)?;
    let g = scan_fringe(&scan)?;
    let classical = classical_fringe(cfg.n_bar, g.phases())?;
    prepare(out)?;

    let row = |(phase_rad, signal): (f64, f64), port: &'static str| ScanRow {
        phase_rad,
        signal,
        port,
        shots: cfg.shots,
        seed: seed_of(cfg),
    };
    let mut rows: Vec<ScanRow> = g.points().map(|p| row(p, scan.channel.label())).collect();
    if scan.channel != Channel::Classical {
        rows.extend(
            classical
                .points()
                .map(|p| row(p, Channel::Classical.label())),
        );
    }

    let fwhm = fringe_fwhm(&g).ok();
    let classical_fwhm = fringe_fwhm(&classical).ok();
    let metadata = json!({
        "n_bar": cfg.n_bar,
        "n_lo": cfg.n_lo,
        "shots": cfg.shots,
        "seed": seed_of(cfg),
        "channel": scan.channel.label(),
        "units": {"phase_rad": "rad", "signal": "dimensionless"},
        "fwhm_rad": fwhm,
        "gaussian_fwhm_rad": 2.0 * (2.0 * LN_2).sqrt() / cfg.n_bar.sqrt(),
        "classical_fwhm_rad": classical_fwhm,
        "fwhm_ratio": fwhm.zip(classical_fwhm).map(|(q, c)| c / q),
        "range_resolution_m": range_resolution(cfg.n_bar, &icfg)?,
        "classical_resolution_m": classical_resolution(&icfg),
    });

    let csv = out.join("fringe_scan.csv");
    let json = out.join("fringe_scan.json");
    let columns = write_csv(&csv, &rows)?;
    write_envelope(&json, cfg, columns, &csv, &metadata)?;
    let svg = if svg {
        let plot = SvgPlot::new(
            &format!("Parity vs classical fringe, n = {}", cfg.n_bar),
            "working phase (rad)",
            "normalized signal",
        )
        .series(
            &format!("parity ({})", scan.channel.label()),
            "crimson",
            g.points().collect(),
        )
        .series(
            "classical (1 + cos)/2",
            "steelblue",
            classical.points().collect(),
        );
        Some(plot.write(&out.join("fringe_scan.svg"))?)
    } else {
        None
    };
    Ok(ExperimentOutput {
        csv,
        json,
        svg,
        metadata,
    })
}

/// Receiver readouts and angle estimates across a range of arrival angles.
///
/// The bright-port LO is tuned to the true baseline phase and the true angle
/// serves as the coarse fringe-order cue.
pub fn run_angle_scan(cfg: &Config, out: &Path, svg: bool) -> Result<ExperimentOutput> {
    let geom = cfg.geometry()?;
    let thetas = cfg.theta_setpoints()?;
    let setup = cfg.homodyne()?;
    if !(cfg.n_bar > 0.0) {
        return Err(Error::invalid("n_bar", "must be > 0"));
    }
    let alpha = CoherentAmplitude::real(cfg.n_bar.sqrt());
    let direction = |theta: f64| match geom.orientation {
        Orientation::Altitudinal => (theta, 0.0),
        Orientation::Azimuthal => (cfg.initial_altitude, theta),
    };
    let sigma = angular_resolution(&geom, cfg.n_bar * cfg.shots as f64)?;
    let per_point: Vec<[AngleScanRow; 2]> = thetas
        .par_iter()
        .enumerate()
        .map(|(i, &theta)| -> Result<[AngleScanRow; 2]> {
            let (alt, az) = direction(theta);
            let phi = direction_phase(&geom, alt, az);
            let detection = if cfg.noiseless {
                Detection::Expectation
            } else {
                Detection::Sampled(DwellStream::new(cfg.seed, i as u64))
            };
            let dwell = receive_from_direction(alpha, &geom, alt, az, &setup, detection, phi);
            let est = match geom.orientation {
                Orientation::Altitudinal => estimate_angle(&dwell, &geom, cfg.n_bar, Some(theta)),
                Orientation::Azimuthal => {
                    estimate_azimuth(&dwell, &geom, cfg.n_bar, alt, Some(theta))
                }
            };
            let (theta_hat, bright, dark) = match est {
                Ok(e) => (
                    Some(e.theta),
                    e.port_signals.0.signal_value,
                    e.port_signals.1.signal_value,
                ),
                Err(Error::UnphysicalAngle { .. }) => (None, f64::NAN, f64::NAN),
                Err(e) => return Err(e),
            };
            let row = |signal, port| AngleScanRow {
                theta_rad: theta,
                phase_rad: phi,
                signal,
                port,
                shots: cfg.shots,
                seed: seed_of(cfg),
                theta_hat_rad: theta_hat,
                sigma_theta_rad: sigma,
                ambiguous: phi.abs() > PI
                    || (geom.orientation == Orientation::Altitudinal && is_ambiguous(&geom, theta)),
            };
            Ok([row(dark, "B"), row(bright, "A")])
        })
        .collect::<Result<_>>()?;
    prepare(out)?;
    let mut rows: Vec<AngleScanRow> = per_point.iter().map(|r| r[0].clone()).collect();
    rows.extend(per_point.iter().map(|r| r[1].clone()));

    let metadata = json!({
        "n_bar": cfg.n_bar,
        "n_lo": cfg.n_lo,
        "shots": cfg.shots,
        "seed": seed_of(cfg),
        "baseline_m": geom.baseline,
        "kl_rad": geom.kl(),
        "orientation": geom.orientation,
        "units": {"theta_rad": "rad", "phase_rad": "rad", "sigma_theta_rad": "rad"},
        "sigma_theta_rad": sigma,
        "classical_angular_resolution_rad": classical_angular_resolution(&geom),
        "improvement": classical_angular_resolution(&geom) / sigma,
    });
    let csv = out.join("angle_scan.csv");
    let json = out.join("angle_scan.json");
    let columns = write_csv(&csv, &rows)?;
    write_envelope(&json, cfg, columns, &csv, &metadata)?;
    let svg = if svg {
        let dark: Vec<(f64, f64)> = per_point
            .iter()
            .map(|r| (r[0].theta_rad, r[0].signal))
            .collect();
        let bright: Vec<(f64, f64)> = per_point
            .iter()
            .map(|r| (r[1].theta_rad, r[1].signal))
            .collect();
        let plot = SvgPlot::new("Receiver parity vs arrival angle", "angle (rad)", "parity")
            .series("dark port", "crimson", dark)
            .series("bright port", "darkorange", bright);
        Some(plot.write(&out.join("angle_scan.svg"))?)
    } else {
        None
    };
    Ok(ExperimentOutput {
        csv,
        json,
        svg,
        metadata,
    })
}

/// Fringe width and resolution formulas across `sweep_n_bar`.
pub fn run_resolution_sweep(cfg: &Config, out: &Path, svg: bool) -> Result<ExperimentOutput> {
    if cfg.sweep_n_bar.len() < 2 || cfg.sweep_n_bar.iter().any(|n| !(n.is_finite() && *n > 0.0)) {
        return Err(Error::invalid(
            "sweep_n_bar",
            "needs at least two positive photon numbers",
        ));
    }
    let icfg = InterferometerConfig::new(cfg.wavelength, cfg.gamma)?;
    let geom = cfg.geometry()?;
    let setup = cfg.homodyne()?;
    let rows = cfg
        .sweep_n_bar
        .iter()
        .enumerate()
        .map(|(i, &n)| -> Result<ResolutionRow> {
            let sigma = 1.0 / n.sqrt();
            let half = (6.0 * sigma).min(PI);
            let scan = FringeScan::noiseless(n, setup, -half, half, sigma / 100.0);
            let scan = if cfg.noiseless {
                scan
            } else {
                scan.sampled(DwellStream::new(cfg.seed, i as u64).fork(9).seed)
            };
            let fwhm = fringe_fwhm(&scan_fringe(&scan)?)?;
            Ok(ResolutionRow {
                n_bar: n,
                fwhm_rad: fwhm,
                sigma_rad: sigma,
                classical_fwhm_rad: PI,
                fwhm_ratio: PI / fwhm,
                range_resolution_m: range_resolution(n, &icfg)?,
                classical_resolution_m: classical_resolution(&icfg),
                angular_resolution_rad: angular_resolution(&geom, n)?,
                classical_angular_resolution_rad: classical_angular_resolution(&geom),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    prepare(out)?;
    let ns: Vec<f64> = rows.iter().map(|r| r.n_bar).collect();
    let widths: Vec<f64> = rows.iter().map(|r| r.fwhm_rad).collect();
    let metadata = json!({
        "n_lo": cfg.n_lo,
        "shots": cfg.shots,
        "seed": seed_of(cfg),
        "units": {"fwhm_rad": "rad", "range_resolution_m": "m", "angular_resolution_rad": "rad"},
        "fwhm_loglog_slope": loglog_slope(&ns, &widths),
    });
    let csv = out.join("resolution_sweep.csv");
    let json = out.join("resolution_sweep.json");
    let columns = write_csv(&csv, &rows)?;
    write_envelope(&json, cfg, columns, &csv, &metadata)?;
    let svg = if svg {
        let plot = SvgPlot::new("Parity fringe width", "ln n", "ln FWHM (rad)")
            .series(
                "measured",
                "crimson",
                ns.iter()
                    .zip(&widths)
                    .map(|(n, w)| (n.ln(), w.ln()))
                    .collect(),
            )
            .series(
                "2√(2 ln 2)/√n",
                "gray",
                ns.iter()
                    .map(|n| (n.ln(), (2.0 * (2.0 * LN_2).sqrt() / n.sqrt()).ln()))
                    .collect(),
            );
        Some(plot.write(&out.join("resolution_sweep.svg"))?)
    } else {
        None
    };
    Ok(ExperimentOutput {
        csv,
        json,
        svg,
        metadata,
    })
}

fn std_dev(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = xs.iter().sum::<f64>() / xs.len() as f64;
    (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
}

/// Closed-loop track of the configured scenario.
pub fn run_track_experiment(cfg: &Config, out: &Path, svg: bool) -> Result<ExperimentOutput> {
    let scenario = cfg.scenario()?;
    let track: Vec<TrackPoint> = run_track(&scenario)?;
    prepare(out)?;
    let errors: Vec<f64> = track.iter().map(|p| p.range_m - p.true_range_m).collect();
    let locked = track.iter().filter(|p| p.locked).count();
    let metadata = json!({
        "dwells": track.len(),
        "seed": seed_of(cfg),
        "units": {"time_s": "s", "range_m": "m", "velocity_mps": "m/s", "acceleration_mps2": "m/s^2", "altitude_rad": "rad", "azimuth_rad": "rad"},
        "range_error_std_m": std_dev(&errors),
        "range_sigma_m": track.first().map(|p| p.range_sigma_m),
        "lock_fraction": locked as f64 / track.len() as f64,
        "max_abs_range_error_m": errors.iter().fold(0.0f64, |m, e| m.max(e.abs())),
    });
    let csv = out.join("track.csv");
    let json = out.join("track.json");
    let columns = write_csv(&csv, &track)?;
    write_envelope(&json, cfg, columns, &csv, &metadata)?;
    let svg = if svg {
        let plot = SvgPlot::new("Range error", "time (s)", "range error (m)")
            .series(
                "estimate − truth",
                "crimson",
                track
                    .iter()
                    .zip(&errors)
                    .map(|(p, e)| (p.time_s, *e))
                    .collect(),
            )
            .series(
                "+σ",
                "gray",
                track.iter().map(|p| (p.time_s, p.range_sigma_m)).collect(),
            )
            .series(
                "−σ",
                "gray",
                track.iter().map(|p| (p.time_s, -p.range_sigma_m)).collect(),
            );
        Some(plot.write(&out.join("track.svg"))?)
    } else {
        None
    };
    Ok(ExperimentOutput {
        csv,
        json,
        svg,
        metadata,
    })
}
