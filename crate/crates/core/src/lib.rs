//! Simulation and estimation for super-resolving coherent-state radar.
//!
//! A coherent radar return is propagated through the unfolded two-arm
//! interferometer of a monostatic radar, read out with balanced homodyne
//! detection at photocount level, and turned into a photon-number parity
//! signal whose central fringe is a factor `2π√n̄` narrower than the
//! classical fringe. The same readout is reused on a two-receiver baseline
//! for altitude and azimuth, and a tracking harness chains it all together
//! with sweet-spot feedback, chirp time-of-flight fringe disambiguation and
//! Savitzky–Golay differentiation.
//!
//! Layers, bottom-up:
//!
//! - [`optics`]: coherent amplitudes, the coherent-state Wigner function and
//!   the closed-form parity expectation.
//! - [`interferometer`]: range phase, Beer's-law attenuation, output ports,
//!   link budget.
//! - [`homodyne`]: balanced homodyne photocount simulation with
//!   order-independent random substreams.
//! - [`reconstruction`]: parity readout at both ports, fringe scans, FWHM,
//!   sweet-spot controller and chirp ranging.
//! - [`angular`]: baseline phase and angle-of-arrival estimation.
//! - [`harness`]: scenarios, tracking, differentiation, config and output
//!   files.
//!
//! See the `examples/` directory of this crate for one runnable program per
//! capability.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

#[cfg(test)]
#[macro_use]
mod testutil;

pub mod angular;
pub mod error;
pub mod harness;
pub mod homodyne;
pub mod interferometer;
pub mod optics;
pub mod reconstruction;

pub use error::{Error, Result};
pub use optics::{CoherentAmplitude, PhaseSpacePoint};
