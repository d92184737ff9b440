//! The per-dwell tracking loop.
//!
//! Each dwell freezes the target, reads both interferometer ports, feeds
//! the port-B phase estimate to the sweet-spot controller, pins the fringe
//! with a chirp time of flight, and measures altitude and azimuth on two
//! receiver baselines. Random draws of dwell `k` come from
//! `DwellStream::new(seed, k)` forked per lane, so a track is reproducible.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use super::differentiate::differentiate;
use super::scenario::{evolve_target, Scenario};
use crate::angular::{
    direction_phase, estimate_angle, estimate_azimuth, receive_from_direction, BaselineGeometry,
    Orientation,
};
use crate::error::Result;
use crate::homodyne::{acquire, Detection, DwellStream};
use crate::interferometer::{range_phase, working_phase, PortPair};
use crate::reconstruction::{
    combine_ports, estimate_signal_amplitude, estimate_signed_amplitude, range_resolution,
    reconstruct_parity_a, reconstruct_parity_b, ChirpRanger, SignProbe, SweetSpotController,
};

const LANE_PORT_B: u64 = 0;
const LANE_PORT_A: u64 = 1;
const LANE_PROBE_PLUS: u64 = 2;
const LANE_PROBE_MINUS: u64 = 3;
const LANE_CHIRP: u64 = 4;
const LANE_ACQUIRE: u64 = 5;
const LANE_ALTITUDE: u64 = 6;
const LANE_AZIMUTH: u64 = 7;

/// One dwell of a track. Units are in the field names.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrackPoint {
    pub dwell: usize,
    pub time_s: f64,
    pub n_bar: f64,
    pub true_range_m: f64,
    pub range_m: f64,
    pub range_sigma_m: f64,
    pub velocity_mps: f64,
    pub acceleration_mps2: f64,
    pub true_altitude_rad: f64,
    pub altitude_rad: f64,
    pub altitude_sigma_rad: f64,
    pub altitude_rate_radps: f64,
    pub true_azimuth_rad: f64,
    pub azimuth_rad: f64,
    pub azimuth_sigma_rad: f64,
    pub azimuth_rate_radps: f64,
    /// True working phase φ = φ_T − φ_R during the dwell.
    pub working_phase_rad: f64,
    pub phase_estimate_rad: f64,
    pub reference_phase_rad: f64,
    pub fringe_index: i64,
    pub ambiguous: bool,
    pub locked: bool,
    pub parity_a: f64,
    pub parity_b: f64,
    pub parity: f64,
}

fn detection(s: &Scenario, stream: DwellStream, lane: u64) -> Detection {
    if s.noiseless {
        Detection::Expectation
    } else {
        Detection::Sampled(stream.fork(lane))
    }
}

fn time_of_flight(
    s: &Scenario,
    chirp: &ChirpRanger,
    range: f64,
    stream: DwellStream,
    lane: u64,
) -> f64 {
    if s.noiseless {
        ChirpRanger {
            timing_sigma: 0.0,
            ..*chirp
        }
        .simulate_time_of_flight(range, &mut stream.fork(lane).rng())
    } else {
        chirp.simulate_time_of_flight(range, &mut stream.fork(lane).rng())
    }
}

/// Runs the full tracking loop for `s.dwells` dwells.
pub fn run_track(s: &Scenario) -> Result<Vec<TrackPoint>> {
    s.validate()?;
    let base_cfg = s.interferometer()?;
    let setup = s.homodyne()?;
    let setup_b = setup.with_lo_phase(FRAC_PI_2);
    let chirp = ChirpRanger::new(s.wavelength, s.timing_sigma)?;
    let alt_geom = BaselineGeometry::new(s.baseline, s.wavelength, Orientation::Altitudinal)?;
    let az_geom = BaselineGeometry::new(s.baseline, s.wavelength, Orientation::Azimuthal)?;

    let first = evolve_target(s, 0.0)?;
    let n0 = s.return_amplitude(first.range)?.mean_photon_number();
    let mut controller = SweetSpotController::new(s.gain, n0.max(f64::MIN_POSITIVE))?
        .with_probe_offset(s.probe_offset)?;

    // acquisition: reference arm set from a coarse chirp fix
    let stream0 = DwellStream::new(s.seed, 0);
    let tof0 = time_of_flight(s, &chirp, first.range, stream0, LANE_ACQUIRE);
    let mut reference = range_phase(&base_cfg, chirp.coarse_range(tof0)?);
    // angles are cued by the scenario's initial direction
    let mut prev_alt = first.altitude;
    let mut prev_az = first.azimuth;

    let mut points = Vec::with_capacity(s.dwells);
    for k in 0..s.dwells {
        let t = s.time(k);
        let target = evolve_target(s, t)?;
        let stream = DwellStream::new(s.seed, k as u64);
        let alpha = s.return_amplitude(target.range)?;
        let n_bar = alpha.mean_photon_number();
        controller.set_n_bar(n_bar.max(f64::MIN_POSITIVE))?;

        let cfg = base_cfg.with_reference_phase(reference);
        let phi = working_phase(&cfg, target.range);
        let ports = PortPair::at_phase(alpha, phi);

        let stats_b = acquire(ports.port_b, &setup_b, detection(s, stream, LANE_PORT_B));
        let guess = controller.predicted_working_phase();
        let setup_a = setup.with_lo_phase(0.5 * guess);
        let stats_a = acquire(ports.port_a, &setup_a, detection(s, stream, LANE_PORT_A));
        let sample_b = reconstruct_parity_b(&stats_b, &setup_b, 0.0)?;
        let sample_a = reconstruct_parity_a(&stats_a, &setup_a, guess)?;

        let amp = estimate_signed_amplitude(&stats_b, &setup_b)?;
        let probe = if s.dither_probe {
            let (rp, rm) = controller.probe_setpoints(reference);
            let side = |r: f64, lane: u64| -> Result<f64> {
                let p = PortPair::at_phase(
                    alpha,
                    working_phase(&base_cfg.with_reference_phase(r), target.range),
                );
                estimate_signal_amplitude(
                    &acquire(p.port_b, &setup_b, detection(s, stream, lane)),
                    &setup_b,
                )
            };
            SignProbe::Dither {
                plus: side(rp, LANE_PROBE_PLUS)?,
                minus: side(rm, LANE_PROBE_MINUS)?,
            }
        } else {
            SignProbe::Quadrature(amp)
        };
        let step = controller.step(reference, amp.abs(), probe);
        let phase_estimate = step.phase_estimate;

        let tof = time_of_flight(s, &chirp, target.range, stream, LANE_CHIRP);
        let fix = chirp.resolve(tof, reference + phase_estimate)?;
        let n_dwell = n_bar * s.shots as f64;

        // cycle slip: the phase fix disagrees with the coarse range by more
        // than jitter and phase noise allow
        let slip_tolerance =
            base_cfg.wavenumber() * chirp.max_coarse_error() + 4.0 / n_dwell.max(1.0).sqrt();
        let slipped = !fix.ambiguous
            && range_phase(&base_cfg, fix.coarse_range - fix.range).abs() > slip_tolerance;
        let locked = !step.saturated && !slipped && phase_estimate.abs() <= s.lock_threshold;
        let range = if slipped { fix.coarse_range } else { fix.range };

        let range_sigma = range_resolution(n_dwell.max(f64::MIN_POSITIVE), &cfg)?;

        let alt_guess = direction_phase(&alt_geom, prev_alt, prev_az);
        let alt_dwell = receive_from_direction(
            alpha,
            &alt_geom,
            target.altitude,
            target.azimuth,
            &setup,
            detection(s, stream, LANE_ALTITUDE),
            alt_guess,
        );
        let alt = estimate_angle(&alt_dwell, &alt_geom, n_bar, Some(prev_alt))?;
        let az_guess = direction_phase(&az_geom, alt.theta, prev_az);
        let az_dwell = receive_from_direction(
            alpha,
            &az_geom,
            target.altitude,
            target.azimuth,
            &setup,
            detection(s, stream, LANE_AZIMUTH),
            az_guess,
        );
        let az = estimate_azimuth(&az_dwell, &az_geom, n_bar, alt.theta, Some(prev_az))?;
        prev_alt = alt.theta;
        prev_az = az.theta;
        let shots_scale = (s.shots as f64).sqrt();

        points.push(TrackPoint {
            dwell: k,
            time_s: t,
            n_bar,
            true_range_m: target.range,
            range_m: range,
            range_sigma_m: range_sigma,
            velocity_mps: f64::NAN,
            acceleration_mps2: f64::NAN,
            true_altitude_rad: target.altitude,
            altitude_rad: alt.theta,
            altitude_sigma_rad: alt.sigma_theta / shots_scale,
            altitude_rate_radps: f64::NAN,
            true_azimuth_rad: target.azimuth,
            azimuth_rad: az.theta,
            azimuth_sigma_rad: az.sigma_theta / shots_scale,
            azimuth_rate_radps: f64::NAN,
            working_phase_rad: phi,
            phase_estimate_rad: phase_estimate,
            reference_phase_rad: reference,
            fringe_index: fix.fringe_index,
            ambiguous: fix.ambiguous,
            locked,
            parity_a: sample_a.signal_value,
            parity_b: sample_b.signal_value,
            parity: combine_ports(&sample_a, &sample_b),
        });

        if locked {
            reference = step.reference_after;
        } else {
            reference = range_phase(&base_cfg, range);
            controller.reset();
        }
    }
    fill_derivatives(&mut points, s.diff_window)?;
    Ok(points)
}

fn fill_derivatives(points: &mut [TrackPoint], window: usize) -> Result<()> {
    let len = points.len();
    if len < 3 {
        return Ok(());
    }
    let window = window.min(if len % 2 == 1 { len } else { len - 1 });
    let t: Vec<f64> = points.iter().map(|p| p.time_s).collect();
    let column = |f: fn(&TrackPoint) -> f64| points.iter().map(f).collect::<Vec<f64>>();
    let range = differentiate(&t, &column(|p| p.range_m), window)?;
    let alt = differentiate(&t, &column(|p| p.altitude_rad), window)?;
    let az = differentiate(&t, &column(|p| p.azimuth_rad), window)?;
    for (i, p) in points.iter_mut().enumerate() {
        p.velocity_mps = range.velocity[i];
        p.acceleration_mps2 = range.acceleration[i];
        p.altitude_rate_radps = alt.velocity[i];
        p.azimuth_rate_radps = az.velocity[i];
    }
    Ok(())
}
