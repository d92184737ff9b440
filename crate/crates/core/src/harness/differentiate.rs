//! Velocity and acceleration by a sliding least-squares quadratic fit.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Derivatives {
    pub velocity: Vec<f64>,
    pub acceleration: Vec<f64>,
}

/// Fits `x ≈ c₀ + c₁(t − tᵢ) + c₂(t − tᵢ)²` over `window` samples around
/// each `tᵢ` and reports `c₁` and `2c₂`. Near the ends the window is shifted
/// inward, giving one-sided stencils. Timestamps need not be uniform.
pub fn differentiate(times: &[f64], values: &[f64], window: usize) -> Result<Derivatives> {
    let len = times.len();
    if values.len() != len {
        return Err(Error::invalid(
            "values",
            format!("{} values for {len} timestamps", values.len()),
        ));
    }
    if window < 3 || window.is_multiple_of(2) || window > len {
        return Err(Error::DifferentiationWindow { window, len });
    }
    if times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::invalid("times", "must be strictly increasing"));
    }
    let half = window / 2;
    let mut velocity = Vec::with_capacity(len);
    let mut acceleration = Vec::with_capacity(len);
    for i in 0..len {
        let start = i.saturating_sub(half).min(len - window);
        let t0 = times[i];
        // scale time to O(1) for conditioning
        let scale = times[start + window - 1] - times[start];
        let design = DMatrix::from_fn(window, 3, |r, c| {
            ((times[start + r] - t0) / scale).powi(c as i32)
        });
        let rhs = DVector::from_column_slice(&values[start..start + window]);
        let coef = design
            .svd(true, true)
            .solve(&rhs, 1e-14)
            .map_err(|e| Error::invalid("times", e.to_string()))?;
        velocity.push(coef[1] / scale);
        acceleration.push(2.0 * coef[2] / (scale * scale));
    }
    Ok(Derivatives {
        velocity,
        acceleration,
    })
}
