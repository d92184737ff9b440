//! Sweet-spot feedback on the reference-arm phase.
//!
//! Each dwell yields a port-B amplitude estimate `â`; its magnitude gives
//! `|φ̂| = 2·asin(min(1, â/√n̄))`. The parity readout is even in `φ`, so the
//! sign comes from a separate probe. The controller then applies the
//! proportional correction `φ_R ← φ_R + g·φ̂`, which drives the working phase
//! `φ = φ_T − φ_R` toward zero.

use serde::{Deserialize, Serialize};

use super::{amplitude_from_parity, phase_from_amplitude, ParitySample};
use crate::error::{ensure_positive, Error, Result};

pub const DEFAULT_GAIN: f64 = 0.5;
pub const DEFAULT_PROBE_OFFSET: f64 = 0.1;

/// Source of the sign of the working phase.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SignProbe {
    /// Two-point dither: port-B amplitude magnitudes measured with the
    /// reference arm at `φ_R + δ` (`plus`) and `φ_R − δ` (`minus`). The side
    /// with the smaller amplitude is closer to the sweet spot.
    Dither { plus: f64, minus: f64 },
    /// Signed port-B quadrature amplitude of the main dwell.
    Quadrature(f64),
}

impl SignProbe {
    pub fn sign(&self) -> f64 {
        let s = match *self {
            SignProbe::Dither { plus, minus } => minus - plus,
            SignProbe::Quadrature(a) => a,
        };
        if s > 0.0 {
            1.0
        } else if s < 0.0 {
            -1.0
        } else {
            0.0
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ControlStep {
    /// Reference phase the dwell was taken at.
    pub reference_before: f64,
    /// Signed working-phase estimate `φ̂`.
    pub phase_estimate: f64,
    /// Reference phase after the correction.
    pub reference_after: f64,
    /// `â/√n̄ ≥ 1`: the amplitude inversion hit its ceiling.
    pub saturated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweetSpotController {
    gain: f64,
    probe_offset: f64,
    n_bar: f64,
    history: Vec<ControlStep>,
}

impl SweetSpotController {
    pub fn new(gain: f64, n_bar: f64) -> Result<Self> {
        if !(gain > 0.0 && gain <= 1.0) {
            return Err(Error::invalid(
                "gain",
                format!("must lie in (0, 1], got {gain}"),
            ));
        }
        ensure_positive("n_bar", n_bar)?;
        Ok(Self {
            gain,
            probe_offset: DEFAULT_PROBE_OFFSET,
            n_bar,
            history: Vec::new(),
        })
    }

    pub fn with_probe_offset(mut self, probe_offset: f64) -> Result<Self> {
        ensure_positive("probe_offset", probe_offset)?;
        self.probe_offset = probe_offset;
        Ok(self)
    }

    /// Updates the return photon number used for the amplitude inversion.
    pub fn set_n_bar(&mut self, n_bar: f64) -> Result<()> {
        ensure_positive("n_bar", n_bar)?;
        self.n_bar = n_bar;
        Ok(())
    }

    pub fn gain(&self) -> f64 {
        self.gain
    }

    pub fn probe_offset(&self) -> f64 {
        self.probe_offset
    }

    /// Reference phases for the `plus` and `minus` dither dwells.
    pub fn probe_setpoints(&self, reference_phase: f64) -> (f64, f64) {
        (
            reference_phase + self.probe_offset,
            reference_phase - self.probe_offset,
        )
    }

    /// One feedback update from the port-B amplitude magnitude of a dwell.
    pub fn step(&mut self, reference_phase: f64, amplitude: f64, probe: SignProbe) -> ControlStep {
        let ratio = amplitude.abs() / self.n_bar.sqrt();
        let phase_estimate = probe.sign() * phase_from_amplitude(amplitude, self.n_bar);
        let step = ControlStep {
            reference_before: reference_phase,
            phase_estimate,
            reference_after: reference_phase + self.gain * phase_estimate,
            saturated: ratio >= 1.0,
        };
        self.history.push(step);
        step
    }

    /// As [`step`](Self::step), with the amplitude read off a port-B parity
    /// value.
    pub fn step_from_parity(
        &mut self,
        reference_phase: f64,
        sample: &ParitySample,
        probe: SignProbe,
    ) -> ControlStep {
        self.step(
            reference_phase,
            amplitude_from_parity(sample.signal_value),
            probe,
        )
    }

    pub fn history(&self) -> &[ControlStep] {
        &self.history
    }

    /// Expected working phase at the next dwell if the target holds still:
    /// what is left of the last estimate after the correction.
    pub fn predicted_working_phase(&self) -> f64 {
        self.history.last().map_or(0.0, |s| {
            s.phase_estimate - (s.reference_after - s.reference_before)
        })
    }

    /// Forgets the loop state, e.g. after reacquisition.
    pub fn reset(&mut self) {
        self.history.clear();
    }
}
