//! Two-receiver baseline for angle of arrival.
//!
//! A plane wave from direction θ reaches two cavities a distance `L` apart
//! with path difference `L·sin θ`, i.e. relative phase `φ = kL·sin θ`. Each
//! cavity takes half the power (`α/√2`); the guided modes are recombined on
//! a 50-50 beamsplitter and give `α·cos(φ/2)` and `α·sin(φ/2)`, the same
//! port pair as the ranging interferometer with the roles of the two output
//! labels swapped. The dark port is read out like ranging port B, the
//! bright port like ranging port A.
//!
//! Directions use altitude Θ and azimuth Φ with unit vector
//! `u = (cos Θ cos Φ, cos Θ sin Φ, sin Θ)`, boresight along `x`. A baseline
//! rotated by ψ about the boresight points along `(0, sin ψ, cos ψ)`:
//! ψ = 0 measures altitude, ψ = π/2 azimuth.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{ensure_positive, Error, Result};
use crate::homodyne::{acquire, Detection, DwellStatistics, HomodyneSetup};
use crate::interferometer::PortPair;
use crate::optics::CoherentAmplitude;
use crate::reconstruction::{
    combine_ports, estimate_signed_amplitude, reconstruct_parity_a, reconstruct_parity_b,
    ParitySample,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Altitudinal,
    Azimuthal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BaselineGeometry {
    /// Receiver separation L, m.
    pub baseline: f64,
    pub wavelength: f64,
    pub orientation: Orientation,
    /// Extra rotation of the pair about the boresight, rad.
    pub rotation: f64,
}

impl BaselineGeometry {
    pub fn new(baseline: f64, wavelength: f64, orientation: Orientation) -> Result<Self> {
        ensure_positive("baseline", baseline)?;
        ensure_positive("wavelength", wavelength)?;
        Ok(Self {
            baseline,
            wavelength,
            orientation,
            rotation: 0.0,
        })
    }

    pub fn with_rotation(mut self, rotation: f64) -> Self {
        self.rotation = rotation;
        self
    }

    /// `kL`, rad.
    pub fn kl(&self) -> f64 {
        TAU * self.baseline / self.wavelength
    }

    /// Total rotation ψ of the baseline about the boresight.
    pub fn psi(&self) -> f64 {
        let base = match self.orientation {
            Orientation::Altitudinal => 0.0,
            Orientation::Azimuthal => FRAC_PI_2,
        };
        base + self.rotation
    }

    /// Component of the arrival direction along the baseline.
    pub fn projection(&self, altitude: f64, azimuth: f64) -> f64 {
        let (sp, cp) = self.psi().sin_cos();
        altitude.cos() * azimuth.sin() * sp + altitude.sin() * cp
    }
}

/// `φ = kL·sin θ` for θ measured in the plane of the baseline.
pub fn baseline_phase(geom: &BaselineGeometry, theta: f64) -> f64 {
    geom.kl() * theta.sin()
}

/// `φ = kL·(b·u)` for an arbitrary direction.
pub fn direction_phase(geom: &BaselineGeometry, altitude: f64, azimuth: f64) -> f64 {
    geom.kl() * geom.projection(altitude, azimuth)
}

/// Phase wraps past ±π: the fringe order is no longer zero.
pub fn is_ambiguous(geom: &BaselineGeometry, theta: f64) -> bool {
    baseline_phase(geom, theta).abs() > PI
}

/// Parity-limited angular resolution `λ/(2πL√n̄)`.
pub fn angular_resolution(geom: &BaselineGeometry, n_bar: f64) -> Result<f64> {
    ensure_positive("n_bar", n_bar)?;
    Ok(geom.wavelength / (TAU * geom.baseline * n_bar.sqrt()))
}

/// Classical angular resolution `λ/L`.
pub fn classical_angular_resolution(geom: &BaselineGeometry) -> f64 {
    geom.wavelength / geom.baseline
}

/// Output ports of the receiver for relative cavity phase `phi`.
///
/// `port_a` is the bright port, `port_b` the dark one.
pub fn receiver_ports(alpha: CoherentAmplitude, phi: f64) -> PortPair {
    let half = alpha.scale(std::f64::consts::FRAC_1_SQRT_2);
    let upper: num_complex::Complex64 = half.into();
    let lower = upper * num_complex::Complex64::cis(phi);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    // strip the common e^{iφ/2} and the −i on the difference port
    let common = num_complex::Complex64::cis(-0.5 * phi);
    let sum = (upper + lower) * s * common;
    let diff = (lower - upper) * s * common * num_complex::Complex64::new(0.0, -1.0);
    PortPair {
        port_a: sum.into(),
        port_b: diff.into(),
    }
}

/// Homodyne records of both receiver ports for one dwell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReceiverDwell {
    pub bright: DwellStatistics,
    pub dark: DwellStatistics,
    /// LO phase `guess/2` on the bright port.
    pub bright_setup: HomodyneSetup,
    /// LO phase `π/2` on the dark port.
    pub dark_setup: HomodyneSetup,
    /// Phase guess the bright-port LO was tuned to.
    pub phase_guess: f64,
}

/// Receiver dwell at relative cavity phase `phi`.
pub fn receive_at_phase(
    alpha: CoherentAmplitude,
    phi: f64,
    setup: &HomodyneSetup,
    detection: Detection,
    phase_guess: f64,
) -> ReceiverDwell {
    let ports = receiver_ports(alpha, phi);
    let dark_setup = setup.with_lo_phase(FRAC_PI_2);
    let bright_setup = setup.with_lo_phase(0.5 * phase_guess);
    ReceiverDwell {
        dark: acquire(ports.port_b, &dark_setup, detection.fork(0)),
        bright: acquire(ports.port_a, &bright_setup, detection.fork(1)),
        bright_setup,
        dark_setup,
        phase_guess,
    }
}

/// Receiver dwell for a plane wave at in-plane angle `theta`.
pub fn receive_plane_wave(
    alpha: CoherentAmplitude,
    geom: &BaselineGeometry,
    theta: f64,
    setup: &HomodyneSetup,
    detection: Detection,
) -> ReceiverDwell {
    let phi = baseline_phase(geom, theta);
    receive_at_phase(alpha, phi, setup, detection, 0.0)
}

/// Receiver dwell for a plane wave from `(altitude, azimuth)`.
pub fn receive_from_direction(
    alpha: CoherentAmplitude,
    geom: &BaselineGeometry,
    altitude: f64,
    azimuth: f64,
    setup: &HomodyneSetup,
    detection: Detection,
    phase_guess: f64,
) -> ReceiverDwell {
    receive_at_phase(
        alpha,
        direction_phase(geom, altitude, azimuth),
        setup,
        detection,
        phase_guess,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngleEstimate {
    pub theta: f64,
    /// `λ/(2πL√n̄)`, projected for azimuth.
    pub sigma_theta: f64,
    /// Unwrapped baseline phase estimate, rad.
    pub phase_estimate: f64,
    pub fringe_order: i64,
    pub ambiguous: bool,
    /// (bright, dark) port readouts.
    pub port_signals: (ParitySample, ParitySample),
}

impl AngleEstimate {
    pub fn combined_signal(&self) -> f64 {
        combine_ports(&self.port_signals.0, &self.port_signals.1)
    }
}

struct PhaseFix {
    phase: f64,
    order: i64,
    signals: (ParitySample, ParitySample),
}

fn baseline_phase_estimate(
    dwell: &ReceiverDwell,
    n_bar: f64,
    prior_phase: Option<f64>,
) -> Result<PhaseFix> {
    ensure_positive("n_bar", n_bar)?;
    let a = estimate_signed_amplitude(&dwell.dark, &dwell.dark_setup)?;
    let local = 2.0 * (a / n_bar.sqrt()).clamp(-1.0, 1.0).asin();
    let phase = prior_phase.map_or(local, |p| unwrap_near(local, p));
    let dark = reconstruct_parity_b(&dwell.dark, &dwell.dark_setup, local)?;
    let bright = reconstruct_parity_a(&dwell.bright, &dwell.bright_setup, dwell.phase_guess)?;
    Ok(PhaseFix {
        phase,
        order: (phase / TAU).round() as i64,
        signals: (bright, dark),
    })
}

/// The dark-port amplitude `∝ sin(φ/2)` fixes φ only up to `φ → 2π − φ`
/// and multiples of 4π; picks the candidate closest to `prior`.
fn unwrap_near(local: f64, prior: f64) -> f64 {
    let period = 2.0 * TAU;
    [local, TAU - local]
        .into_iter()
        .map(|c| c + period * ((prior - c) / period).round())
        .min_by(|x, y| (x - prior).abs().total_cmp(&(y - prior).abs()))
        .unwrap_or(local)
}

fn unphysical(phase: f64, kl: f64) -> Error {
    Error::UnphysicalAngle { phase, kl }
}

/// In-plane angle `θ̂ = asin(φ̂/kL)` from a receiver dwell.
///
/// `prior` is a coarse angle used only to pick the fringe order; without it
/// the phase is taken in `[−π, π]`.
pub fn estimate_angle(
    dwell: &ReceiverDwell,
    geom: &BaselineGeometry,
    n_bar: f64,
    prior: Option<f64>,
) -> Result<AngleEstimate> {
    let kl = geom.kl();
    let fix = baseline_phase_estimate(dwell, n_bar, prior.map(|t| baseline_phase(geom, t)))?;
    if fix.phase.abs() > kl {
        return Err(unphysical(fix.phase, kl));
    }
    Ok(AngleEstimate {
        theta: (fix.phase / kl).asin(),
        sigma_theta: angular_resolution(geom, n_bar)?,
        phase_estimate: fix.phase,
        fringe_order: fix.order,
        ambiguous: fix.order != 0,
        port_signals: fix.signals,
    })
}

/// Azimuth from a dwell of a rotated baseline, given the altitude.
///
/// Solves `b·u = φ̂/kL` for Φ; with ψ = π/2 this is
/// `Φ̂ = asin(φ̂/(kL cos Θ))`.
pub fn estimate_azimuth(
    dwell: &ReceiverDwell,
    geom: &BaselineGeometry,
    n_bar: f64,
    altitude: f64,
    prior: Option<f64>,
) -> Result<AngleEstimate> {
    let kl = geom.kl();
    let (sp, cp) = geom.psi().sin_cos();
    let scale = altitude.cos() * sp;
    if scale.abs() < 1e-12 {
        return Err(Error::invalid(
            "orientation",
            "baseline has no azimuthal component",
        ));
    }
    let prior_phase = prior.map(|phi| direction_phase(geom, altitude, phi));
    let fix = baseline_phase_estimate(dwell, n_bar, prior_phase)?;
    let s = (fix.phase / kl - altitude.sin() * cp) / scale;
    if s.abs() > 1.0 {
        return Err(unphysical(fix.phase, kl * scale.abs()));
    }
    Ok(AngleEstimate {
        theta: s.asin(),
        sigma_theta: angular_resolution(geom, n_bar)? / scale.abs(),
        phase_estimate: fix.phase,
        fringe_order: fix.order,
        ambiguous: fix.order != 0,
        port_signals: fix.signals,
    })
}
