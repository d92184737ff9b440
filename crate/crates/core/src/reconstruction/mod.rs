//! From homodyne dwell statistics to the super-resolving parity signal.
//!
//! With `Y` the efficiency-corrected mean photocount difference of a dwell,
//! the parity of the measured port is read out as `exp(−Y²/(2n̄_LO))`:
//!
//! - port B, LO phase `π/2`: `Y_B = −2|α_φ|√n̄_LO`, so the readout is
//!   `exp(−2|α_φ|²) = exp(−2n̄ sin²(φ/2))`;
//! - port A, LO phase `φ̃/2` for a phase guess `φ̃`:
//!   `Y_A = −2α cos(φ/2) √n̄_LO sin(φ̃/2)`, which for `φ̃ = φ` gives
//!   `exp(−n̄ sin²φ / 2)`, again narrow around the sweet spot `φ ≅ 0`.
//!
//! The two port readouts of a dwell are averaged.

mod chirp;
mod feedback;
mod interferogram;

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

pub use chirp::{ChirpRanger, RangeFix};
pub use feedback::{ControlStep, SignProbe, SweetSpotController, DEFAULT_GAIN};
pub use interferogram::{
    classical_fringe, fringe_fwhm, scan_fringe, Channel, FringeScan, Interferogram,
    InterferogramMeta,
};

use crate::error::{Error, Result};
use crate::homodyne::{DwellStatistics, HomodyneSetup, ShotRecord};
use crate::interferometer::InterferometerConfig;

/// `|sin ϑ_LO|` below which amplitude inversion is refused.
pub const MIN_SIN_LO_PHASE: f64 = 1e-6;
/// Tolerance on the LO phase a readout requires.
pub const LO_PHASE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Port {
    A,
    B,
}

impl Port {
    pub fn label(&self) -> &'static str {
        match self {
            Port::A => "A",
            Port::B => "B",
        }
    }
}

/// One reconstructed parity value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParitySample {
    /// Working phase (or phase guess) the dwell was taken at, rad.
    pub phase_setpoint: f64,
    /// Reconstructed parity; in `(0, 1]` without noise.
    pub signal_value: f64,
    pub port: Port,
}

/// Averaging order for turning shots into a parity value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Averaging {
    /// Average `Y` over the dwell, then transform once (consistent).
    #[default]
    MeanFirst,
    /// Transform every shot, then average (biased; kept for comparison).
    PerShot,
}

fn check_efficiency(setup: &HomodyneSetup) -> Result<()> {
    if setup.efficiency > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(
            "efficiency",
            "must be > 0 to normalize the photocount difference",
        ))
    }
}

fn check_sin(setup: &HomodyneSetup) -> Result<f64> {
    let s = setup.lo_phase.sin();
    if s.abs() < MIN_SIN_LO_PHASE {
        Err(Error::DegenerateLoPhase {
            phase: setup.lo_phase,
        })
    } else {
        Ok(s)
    }
}

fn check_lo_phase(setup: &HomodyneSetup, expected: f64) -> Result<()> {
    if (setup.lo_phase - expected).abs() <= LO_PHASE_TOLERANCE {
        Ok(())
    } else {
        Err(Error::LoPhaseMismatch {
            expected,
            actual: setup.lo_phase,
        })
    }
}

fn check_lo(setup: &HomodyneSetup) -> Result<()> {
    if setup.lo_photon_number() > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(
            "lo_amplitude",
            "parity readout needs a nonzero local oscillator",
        ))
    }
}

/// `Y`: mean photocount difference divided by the detector efficiency.
pub fn normalized_difference(stats: &DwellStatistics, setup: &HomodyneSetup) -> Result<f64> {
    check_efficiency(setup)?;
    Ok(stats.mean_difference / setup.efficiency)
}

/// Signed signal amplitude `−Y/(2√n̄_LO sin ϑ)`, unclamped.
///
/// The sign is the sign of the real signal amplitude relative to the LO
/// reference; [`estimate_signal_amplitude`] is its clamped magnitude form.
pub fn estimate_signed_amplitude(stats: &DwellStatistics, setup: &HomodyneSetup) -> Result<f64> {
    let s = check_sin(setup)?;
    check_lo(setup)?;
    let y = normalized_difference(stats, setup)?;
    Ok(-y / (2.0 * setup.lo_amplitude * s))
}

/// `|α_φ| = max(0, −Y/(2√n̄_LO sin ϑ))`.
pub fn estimate_signal_amplitude(stats: &DwellStatistics, setup: &HomodyneSetup) -> Result<f64> {
    estimate_signed_amplitude(stats, setup).map(|a| a.max(0.0))
}

fn parity_from_difference(y: f64, lo_photon_number: f64) -> f64 {
    (-(y * y) / (2.0 * lo_photon_number)).exp()
}

/// Port-B parity readout `exp(−Y_B²/(2n̄_LO))`; the LO must sit at `π/2`.
pub fn reconstruct_parity_b(
    stats: &DwellStatistics,
    setup: &HomodyneSetup,
    phase_setpoint: f64,
) -> Result<ParitySample> {
    check_lo_phase(setup, FRAC_PI_2)?;
    check_lo(setup)?;
    let y = normalized_difference(stats, setup)?;
    Ok(ParitySample {
        phase_setpoint,
        signal_value: parity_from_difference(y, setup.lo_photon_number()),
        port: Port::B,
    })
}

/// Port-A parity readout `exp(−Y_A²/(2n̄_LO))` with the LO at `phase_guess/2`.
///
/// No division by `sin ϑ` happens here, so the sweet spot `phase_guess = 0`
/// is allowed.
pub fn reconstruct_parity_a(
    stats: &DwellStatistics,
    setup: &HomodyneSetup,
    phase_guess: f64,
) -> Result<ParitySample> {
    check_lo_phase(setup, 0.5 * phase_guess)?;
    check_lo(setup)?;
    let y = normalized_difference(stats, setup)?;
    Ok(ParitySample {
        phase_setpoint: phase_guess,
        signal_value: parity_from_difference(y, setup.lo_photon_number()),
        port: Port::A,
    })
}

/// Mean of `exp(−Y_k²/(2n̄_LO))` over individual shots.
pub fn per_shot_parity(shots: &[ShotRecord], setup: &HomodyneSetup) -> Result<f64> {
    check_efficiency(setup)?;
    check_lo(setup)?;
    if shots.is_empty() {
        return Err(Error::invalid("shots", "empty shot list"));
    }
    let n_lo = setup.lo_photon_number();
    let sum: f64 = shots
        .iter()
        .map(|s| parity_from_difference(s.difference as f64 / setup.efficiency, n_lo))
        .sum();
    Ok(sum / shots.len() as f64)
}

/// Average of the two port readouts of one dwell.
pub fn combine_ports(sa: &ParitySample, sb: &ParitySample) -> f64 {
    0.5 * (sa.signal_value + sb.signal_value)
}

/// Photon number implied by a parity value: `|α|² = −ln S / 2`.
pub fn amplitude_from_parity(signal_value: f64) -> f64 {
    (-0.5 * signal_value.clamp(f64::MIN_POSITIVE, 1.0).ln()).sqrt()
}

/// Working phase magnitude `2·asin(min(1, |a|/√n̄))` from a port-B amplitude.
pub fn phase_from_amplitude(amplitude: f64, mean_photon_number: f64) -> f64 {
    2.0 * (amplitude.abs() / mean_photon_number.sqrt())
        .min(1.0)
        .asin()
}

/// Signed working phase `2·asin(a/√n̄)` from a signed port-B amplitude.
pub fn signed_phase_from_amplitude(amplitude: f64, mean_photon_number: f64) -> f64 {
    phase_from_amplitude(amplitude, mean_photon_number).copysign(amplitude)
}

/// Parity-limited range resolution `λ/(2π√n̄)`.
pub fn range_resolution(mean_photon_number: f64, cfg: &InterferometerConfig) -> Result<f64> {
    if !(mean_photon_number > 0.0) {
        return Err(Error::invalid("mean_photon_number", "must be > 0"));
    }
    Ok(cfg.wavelength / (std::f64::consts::TAU * mean_photon_number.sqrt()))
}

/// Classical (Rayleigh) range resolution: one wavelength.
pub fn classical_resolution(cfg: &InterferometerConfig) -> f64 {
    cfg.wavelength
}
