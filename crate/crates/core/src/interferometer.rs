//! The unfolded (Mach–Zehnder) equivalent of the monostatic Michelson radar.
//!
//! A coherent input `|β⟩` meets vacuum at the first beamsplitter; the target
//! arm picks up the range phase `φ_T = 2πR/λ` and Beer's-law loss
//! `e^{-ΓR}` in intensity, the reference arm carries a tunable phase `φ_R`
//! and no loss. With the i-on-reflection factors folded into unobservable
//! global phases the output is
//!
//! ```text
//! |α cos(φ/2)⟩_A |α sin(φ/2)⟩_B,   α = e^{-ΓR/2} β,   φ = φ_T − φ_R
//! ```
//!
//! Port B is the dark port at `φ = 0`; port A carries the light.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{ensure_nonnegative, ensure_positive, Result};
use crate::optics::CoherentAmplitude;

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Planck constant, J·s.
pub const PLANCK: f64 = 6.626_070_15e-34;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterferometerConfig {
    /// Carrier wavelength λ, m.
    pub wavelength: f64,
    /// Linear intensity attenuation coefficient Γ of the target arm, 1/m.
    pub gamma: f64,
    /// Reference-arm phase φ_R, rad.
    pub reference_phase: f64,
}

impl InterferometerConfig {
    pub fn new(wavelength: f64, gamma: f64) -> Result<Self> {
        ensure_positive("wavelength", wavelength)?;
        ensure_nonnegative("gamma", gamma)?;
        Ok(Self {
            wavelength,
            gamma,
            reference_phase: 0.0,
        })
    }

    pub fn with_reference_phase(mut self, reference_phase: f64) -> Self {
        self.reference_phase = reference_phase;
        self
    }

    /// Wavenumber `k = 2π/λ`.
    pub fn wavenumber(&self) -> f64 {
        TAU / self.wavelength
    }
}

/// The two output-port amplitudes of the interferometer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PortPair {
    pub port_a: CoherentAmplitude,
    pub port_b: CoherentAmplitude,
}

impl PortPair {
    /// Splits `alpha` over the ports for working phase `phi`, without loss.
    pub fn at_phase(alpha: CoherentAmplitude, phi: f64) -> Self {
        let (s, c) = (0.5 * phi).sin_cos();
        Self {
            port_a: alpha.scale(c),
            port_b: alpha.scale(s),
        }
    }

    pub fn total_photon_number(&self) -> f64 {
        self.port_a.mean_photon_number() + self.port_b.mean_photon_number()
    }
}

/// Target-arm phase `φ_T = 2πR/λ`.
pub fn range_phase(cfg: &InterferometerConfig, range: f64) -> f64 {
    cfg.wavenumber() * range
}

/// Working phase `φ = φ_T − φ_R` that the output ports depend on.
pub fn working_phase(cfg: &InterferometerConfig, range: f64) -> f64 {
    range_phase(cfg, range) - cfg.reference_phase
}

/// Beer's-law attenuation of the target-arm amplitude: `α = e^{-ΓR/2} β`.
pub fn attenuate(
    beta: CoherentAmplitude,
    cfg: &InterferometerConfig,
    range: f64,
) -> CoherentAmplitude {
    debug_assert!(range >= 0.0, "negative range {range}");
    beta.scale((-0.5 * cfg.gamma * range).exp())
}

/// Output ports for input `β` and a target at `range`.
pub fn propagate(beta: CoherentAmplitude, cfg: &InterferometerConfig, range: f64) -> PortPair {
    PortPair::at_phase(attenuate(beta, cfg, range), working_phase(cfg, range))
}

/// Intensity difference `|a|² − |b|² = n̄ cos φ` of plain intensity
/// differencing between the two ports (the classical fringe).
pub fn classical_difference(mean_photon_number: f64, phi: f64) -> f64 {
    mean_photon_number * phi.cos()
}

/// Received power for a two-way spherical-spreading link, W.
///
/// ```text
/// P_rx = P_tx · G_tx · A_target/(4πR²) · A_rx/(4πR²)
/// G_tx = 4π·A_tx/λ²,   A_rx = A_tx
/// ```
///
/// The transmitter gain is that of a uniformly illuminated aperture of area
/// `a_tx`; the target re-radiates isotropically whatever its area
/// intercepts; the same aperture collects the return. Attenuation is not
/// included; apply [`attenuate`] separately.
pub fn link_budget(
    p_tx: f64,
    range: f64,
    a_tx: f64,
    a_target: f64,
    cfg: &InterferometerConfig,
) -> Result<f64> {
    ensure_positive("p_tx", p_tx)?;
    ensure_positive("range", range)?;
    ensure_positive("a_tx", a_tx)?;
    ensure_positive("a_target", a_target)?;
    let gain = 4.0 * PI * a_tx / (cfg.wavelength * cfg.wavelength);
    let spread = 4.0 * PI * range * range;
    Ok(p_tx * gain * (a_target / spread) * (a_tx / spread))
}

/// Photon energy `hc/λ`, J.
pub fn photon_energy(wavelength: f64) -> f64 {
    PLANCK * SPEED_OF_LIGHT / wavelength
}

/// Mean photon number collected at power `p_rx` over `dwell` seconds.
pub fn photons_per_dwell(p_rx: f64, dwell: f64, cfg: &InterferometerConfig) -> f64 {
    debug_assert!(p_rx >= 0.0 && dwell >= 0.0);
    p_rx * dwell / photon_energy(cfg.wavelength)
}
