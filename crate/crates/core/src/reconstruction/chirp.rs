//! Which-fringe disambiguation from a chirped time-of-flight measurement.
//!
//! The parity phase fixes range only modulo λ. A coarse round-trip time
//! gives `R_c = c·t/2`; the fringe index closest to it is
//! `round(R_c/λ − φ̂_T/2π)` and the absolute range `λ·(index + φ̂_T/2π)`.

use std::f64::consts::TAU;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_nonnegative, ensure_positive, Error, Result};
use crate::interferometer::SPEED_OF_LIGHT;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChirpRanger {
    pub wavelength: f64,
    /// Standard deviation σ_t of the round-trip timing error, s.
    pub timing_sigma: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RangeFix {
    /// Absolute range, m.
    pub range: f64,
    pub fringe_index: i64,
    /// `c·t/2`, m.
    pub coarse_range: f64,
    /// Coarse timing too poor to pin the fringe.
    pub ambiguous: bool,
}

impl ChirpRanger {
    pub fn new(wavelength: f64, timing_sigma: f64) -> Result<Self> {
        ensure_positive("wavelength", wavelength)?;
        ensure_nonnegative("timing_sigma", timing_sigma)?;
        Ok(Self {
            wavelength,
            timing_sigma,
        })
    }

    /// `R_c = c·t/2`.
    pub fn coarse_range(&self, time_of_flight: f64) -> Result<f64> {
        ensure_nonnegative("time_of_flight", time_of_flight)?;
        Ok(0.5 * SPEED_OF_LIGHT * time_of_flight)
    }

    /// Range error σ_t·c/2 of the coarse fix, m.
    pub fn coarse_sigma(&self) -> f64 {
        0.5 * SPEED_OF_LIGHT * self.timing_sigma
    }

    /// Largest coarse range error the bounded jitter can produce, `√3·σ_R`, m.
    pub fn max_coarse_error(&self) -> f64 {
        3f64.sqrt() * self.coarse_sigma()
    }

    /// `σ_t > λ/(2c)`.
    pub fn is_ambiguous(&self) -> bool {
        self.timing_sigma > self.wavelength / (2.0 * SPEED_OF_LIGHT)
    }

    /// Combines a round-trip time with the total interferometric phase
    /// `φ̂_T` (reference phase plus working-phase estimate), rad.
    pub fn resolve(&self, time_of_flight: f64, phase_estimate: f64) -> Result<RangeFix> {
        if !phase_estimate.is_finite() {
            return Err(Error::invalid("phase_estimate", "must be finite"));
        }
        let coarse_range = self.coarse_range(time_of_flight)?;
        let frac = phase_estimate / TAU;
        let fringe_index = (coarse_range / self.wavelength - frac).round();
        Ok(RangeFix {
            range: self.wavelength * (fringe_index + frac),
            fringe_index: fringe_index as i64,
            coarse_range,
            ambiguous: self.is_ambiguous(),
        })
    }

    /// Round-trip time `2R/c` plus timing jitter, uniform with standard
    /// deviation σ_t (bounded by `±√3·σ_t`), clipped at zero.
    pub fn simulate_time_of_flight<R: Rng + ?Sized>(&self, range: f64, rng: &mut R) -> f64 {
        let t = 2.0 * range / SPEED_OF_LIGHT;
        if self.timing_sigma == 0.0 {
            return t;
        }
        let half = 3f64.sqrt() * self.timing_sigma;
        (t + rng.random_range(-half..half)).max(0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_time_is_zero_range() {
        let c = ChirpRanger::new(0.03, 1e-11).unwrap();
        let fix = c.resolve(0.0, 0.0).unwrap();
        assert_eq!(fix.range, 0.0);
        assert_eq!(fix.fringe_index, 0);
    }

    #[test]
    fn exact_round_trip() {
        let lambda = 0.03;
        let c = ChirpRanger::new(lambda, 0.0).unwrap();
        for r in [0.0101, 1.0, 1234.5678, 9.9e4] {
            let t = 2.0 * r / SPEED_OF_LIGHT;
            let phase = TAU * r / lambda;
            let fix = c.resolve(t, phase).unwrap();
            assert!((fix.range - r).abs() < 1e-9 * r.max(1.0), "{r}: {fix:?}");
            // a phase known only modulo 2π gives the same range
            let wrapped = c.resolve(t, phase.rem_euclid(TAU) - 7.0 * TAU).unwrap();
            assert!((wrapped.range - r).abs() < 1e-9 * r.max(1.0));
        }
    }

    #[test]
    fn phase_error_passes_through() {
        let lambda = 0.03;
        let c = ChirpRanger::new(lambda, 0.0).unwrap();
        let r = 500.0;
        let fix = c
            .resolve(2.0 * r / SPEED_OF_LIGHT, TAU * r / lambda + 0.1)
            .unwrap();
        assert!((fix.range - r - 0.1 * lambda / TAU).abs() < 1e-9);
    }

    #[test]
    fn ambiguity_threshold() {
        let lambda = 0.03;
        let limit = lambda / (2.0 * SPEED_OF_LIGHT);
        assert!(!ChirpRanger::new(lambda, limit).unwrap().is_ambiguous());
        assert!(ChirpRanger::new(lambda, 1.0001 * limit)
            .unwrap()
            .is_ambiguous());
        // σ_t·c/2 = 0.6λ
        let sigma = 1.2 * lambda / SPEED_OF_LIGHT;
        let c = ChirpRanger::new(lambda, sigma).unwrap();
        assert!((c.coarse_sigma() - 0.6 * lambda).abs() < 1e-15);
        assert!(c.is_ambiguous());
        assert!(c.resolve(1e-6, 0.0).unwrap().ambiguous);
    }

    #[test]
    fn jitter_is_bounded_and_has_the_right_spread() {
        let c = ChirpRanger::new(0.03, 2e-11).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let r = 1e4;
        let t0 = 2.0 * r / SPEED_OF_LIGHT;
        let n = 100_000;
        let errs: Vec<f64> = (0..n)
            .map(|_| c.simulate_time_of_flight(r, &mut rng) - t0)
            .collect();
        let bound = 3f64.sqrt() * 2e-11;
        assert!(errs.iter().all(|e| e.abs() <= bound * (1.0 + 1e-9)));
        let mean = errs.iter().sum::<f64>() / n as f64;
        let sd = (errs.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt();
        assert!((sd / 2e-11 - 1.0).abs() < 0.02, "{sd}");
    }

    #[test]
    fn unambiguous_fixes_stay_within_half_a_wavelength() {
        let lambda = 0.03;
        let c = ChirpRanger::new(lambda, lambda / (2.0 * SPEED_OF_LIGHT)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for k in 0..10_000 {
            let r = 1000.0 + 0.0137 * k as f64;
            let t = c.simulate_time_of_flight(r, &mut rng);
            let fix = c.resolve(t, TAU * r / lambda).unwrap();
            assert!(!fix.ambiguous);
            assert!((fix.range - r).abs() < 1e-6, "{r}: {fix:?}");
        }
    }

    #[test]
    fn validation() {
        assert!(ChirpRanger::new(0.0, 0.0).is_err());
        assert!(ChirpRanger::new(0.03, -1.0).is_err());
        let c = ChirpRanger::new(0.03, 0.0).unwrap();
        assert!(c.resolve(-1.0, 0.0).is_err());
        assert!(c.resolve(1.0, f64::NAN).is_err());
    }
}
