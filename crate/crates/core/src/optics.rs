//! Coherent states, their Wigner function and photon-number parity.
//!
//! Everything here is a pure function of `Copy` value types. The parity
//! expectation of a coherent state is the anchor the rest of the crate is
//! checked against: `<Π> = exp(-2|α|²) = (π/2)·W(0; α)`.

use std::f64::consts::{FRAC_2_PI, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Complex amplitude `α` of a single-mode coherent state `|α⟩`.
///
/// `|α|²` is the mean photon number; `arg α` the optical phase.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CoherentAmplitude {
    pub re: f64,
    pub im: f64,
}

impl CoherentAmplitude {
    pub const VACUUM: Self = Self { re: 0.0, im: 0.0 };

    pub const fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }

    /// Real amplitude `α = x` (source phase taken as zero).
    pub const fn real(x: f64) -> Self {
        Self { re: x, im: 0.0 }
    }

    /// `α = √n̄ · e^{iθ}`.
    pub fn from_photon_number(mean_photon_number: f64, phase: f64) -> Self {
        let r = mean_photon_number.max(0.0).sqrt();
        Self::new(r * phase.cos(), r * phase.sin())
    }

    pub fn mean_photon_number(&self) -> f64 {
        self.re * self.re + self.im * self.im
    }

    pub fn magnitude(&self) -> f64 {
        self.re.hypot(self.im)
    }

    /// Phase in `(-π, π]`.
    pub fn phase(&self) -> f64 {
        let p = self.im.atan2(self.re);
        if p <= -PI {
            PI
        } else {
            p
        }
    }

    pub fn scale(self, factor: f64) -> Self {
        Self::new(self.re * factor, self.im * factor)
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

impl From<Complex64> for CoherentAmplitude {
    fn from(z: Complex64) -> Self {
        Self::new(z.re, z.im)
    }
}

impl From<CoherentAmplitude> for Complex64 {
    fn from(a: CoherentAmplitude) -> Self {
        Complex64::new(a.re, a.im)
    }
}

/// Complex phase-space coordinate `γ` at which a Wigner function is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PhaseSpacePoint {
    pub re: f64,
    pub im: f64,
}

impl PhaseSpacePoint {
    pub const ORIGIN: Self = Self { re: 0.0, im: 0.0 };

    pub const fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }
}

pub fn mean_photon_number(a: CoherentAmplitude) -> f64 {
    a.mean_photon_number()
}

/// `ln W(γ; α) = ln(2/π) − 2|γ − α|²`.
pub fn log_wigner_coherent(p: PhaseSpacePoint, a: CoherentAmplitude) -> f64 {
    let dr = p.re - a.re;
    let di = p.im - a.im;
    FRAC_2_PI.ln() - 2.0 * (dr * dr + di * di)
}

/// Wigner function of `|α⟩` at `γ`: `(2/π)·exp(−2|γ − α|²)`.
///
/// Normalized so that it integrates to one over the complex plane with
/// measure `d²γ = d(Re γ) d(Im γ)`; peak value `2/π` at `γ = α`.
pub fn wigner_coherent(p: PhaseSpacePoint, a: CoherentAmplitude) -> f64 {
    log_wigner_coherent(p, a).exp()
}

/// `ln <Π> = −2|α|²`. Finite for every finite `α`, including where the
/// parity itself underflows.
pub fn log_parity(a: CoherentAmplitude) -> f64 {
    -2.0 * a.mean_photon_number()
}

/// Photon-number parity expectation `<(−1)^n̂> = exp(−2|α|²)` of `|α⟩`.
///
/// Equal to `(π/2)·W(0; α)`. Evaluated through [`log_parity`], so beyond
/// `n̄ ≈ 372` it returns exactly `0.0` instead of a subnormal or NaN.
pub fn parity_expectation(a: CoherentAmplitude) -> f64 {
    log_parity(a).exp()
}
