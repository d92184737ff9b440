//! Flat TOML configuration shared by every experiment.
//!
//! Every key is optional; unknown keys are rejected.
//!
//! ```toml
//! seed = 7
//! n_bar = 100.0
//! n_lo = 1e6
//! phase_step = 0.001
//! ```

use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::scenario::{PhotonSource, Scenario};
use crate::angular::{BaselineGeometry, Orientation};
use crate::error::{ensure_positive, Error, Result};
use crate::homodyne::HomodyneSetup;
use crate::reconstruction::{Averaging, Channel, FringeScan};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SignProbeMode {
    /// Sign of the port-B homodyne quadrature.
    #[default]
    Quadrature,
    /// Two extra port-B dwells at `φ_R ± δ`.
    Dither,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub seed: u64,
    pub noiseless: bool,

    /// m
    pub wavelength: f64,
    /// 1/m
    pub gamma: f64,

    /// Mean return photons per shot; ignored when `link_budget` is set.
    pub n_bar: f64,
    pub link_budget: bool,
    /// W
    pub transmit_power: f64,
    /// s
    pub dwell_time: f64,
    /// m²
    pub tx_aperture: f64,
    /// m²
    pub target_area: f64,

    pub n_lo: f64,
    pub shots: u64,
    pub efficiency: f64,
    /// Mean dark counts per detector per shot.
    pub dark_rate: f64,

    /// m
    pub initial_range: f64,
    /// m/s
    pub radial_velocity: f64,
    /// m/s²
    pub radial_acceleration: f64,
    /// rad
    pub initial_altitude: f64,
    /// rad
    pub initial_azimuth: f64,
    /// rad/s
    pub altitude_rate: f64,
    /// rad/s
    pub azimuth_rate: f64,
    /// s
    pub dwell_period: f64,
    pub dwells: usize,
    /// Receiver separation L, m.
    pub baseline: f64,

    pub gain: f64,
    /// rad
    pub probe_offset: f64,
    pub sign_probe: SignProbeMode,
    /// s
    pub timing_sigma: f64,
    /// rad
    pub lock_threshold: f64,
    pub diff_window: usize,

    /// rad
    pub phase_start: f64,
    pub phase_stop: f64,
    pub phase_step: f64,
    pub channel: Channel,
    pub averaging: Averaging,

    /// rad
    pub theta_start: f64,
    pub theta_stop: f64,
    pub theta_step: f64,
    pub orientation: Orientation,
    /// rad
    pub rotation: f64,

    pub sweep_n_bar: Vec<f64>,
}

impl Default for Config {
    fn default() -> Self {
        let s = Scenario::default();
        Self {
            seed: s.seed,
            noiseless: s.noiseless,
            wavelength: s.wavelength,
            gamma: s.gamma,
            n_bar: 100.0,
            link_budget: false,
            transmit_power: 1e3,
            dwell_time: 1e-3,
            tx_aperture: 1.0,
            target_area: 1.0,
            n_lo: s.n_lo,
            shots: s.shots,
            efficiency: s.efficiency,
            dark_rate: s.dark_rate,
            initial_range: s.initial_range,
            radial_velocity: s.radial_velocity,
            radial_acceleration: s.radial_acceleration,
            initial_altitude: s.initial_altitude,
            initial_azimuth: s.initial_azimuth,
            altitude_rate: s.altitude_rate,
            azimuth_rate: s.azimuth_rate,
            dwell_period: s.dwell_period,
            dwells: s.dwells,
            baseline: s.baseline,
            gain: s.gain,
            probe_offset: s.probe_offset,
            sign_probe: SignProbeMode::Quadrature,
            timing_sigma: s.timing_sigma,
            lock_threshold: s.lock_threshold,
            diff_window: s.diff_window,
            phase_start: -PI,
            phase_stop: PI,
            phase_step: 1e-3,
            channel: Channel::B,
            averaging: Averaging::MeanFirst,
            theta_start: -0.01,
            theta_stop: 0.01,
            theta_step: 1e-4,
            orientation: Orientation::Altitudinal,
            rotation: 0.0,
            sweep_n_bar: vec![25.0, 100.0, 400.0, 1600.0],
        }
    }
}

impl Config {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn scenario(&self) -> Result<Scenario> {
        let photons = if self.link_budget {
            PhotonSource::LinkBudget {
                transmit_power: self.transmit_power,
                dwell_time: self.dwell_time,
                tx_aperture: self.tx_aperture,
                target_area: self.target_area,
            }
        } else {
            PhotonSource::Fixed { n_bar: self.n_bar }
        };
        let s = Scenario {
            initial_range: self.initial_range,
            radial_velocity: self.radial_velocity,
            radial_acceleration: self.radial_acceleration,
            initial_altitude: self.initial_altitude,
            initial_azimuth: self.initial_azimuth,
            altitude_rate: self.altitude_rate,
            azimuth_rate: self.azimuth_rate,
            wavelength: self.wavelength,
            gamma: self.gamma,
            photons,
            n_lo: self.n_lo,
            shots: self.shots,
            efficiency: self.efficiency,
            dark_rate: self.dark_rate,
            dwell_period: self.dwell_period,
            dwells: self.dwells,
            baseline: self.baseline,
            seed: self.seed,
            noiseless: self.noiseless,
            gain: self.gain,
            probe_offset: self.probe_offset,
            dither_probe: self.sign_probe == SignProbeMode::Dither,
            timing_sigma: self.timing_sigma,
            lock_threshold: self.lock_threshold,
            diff_window: self.diff_window,
        };
        s.validate()?;
        Ok(s)
    }

    /// Homodyne setup with the LO phase left at zero.
    pub fn homodyne(&self) -> Result<HomodyneSetup> {
        HomodyneSetup::new(self.n_lo.sqrt(), 0.0, self.efficiency, self.shots)?
            .with_dark_rate(self.dark_rate)
    }

    pub fn fringe_scan(&self) -> Result<FringeScan> {
        ensure_positive("n_bar", self.n_bar)?;
        let scan = FringeScan::noiseless(
            self.n_bar,
            self.homodyne()?,
            self.phase_start,
            self.phase_stop,
            self.phase_step,
        )
        .with_channel(self.channel)
        .with_averaging(self.averaging);
        let scan = if self.noiseless {
            scan
        } else {
            scan.sampled(self.seed)
        };
        scan.setpoints()?;
        Ok(scan)
    }

    pub fn geometry(&self) -> Result<BaselineGeometry> {
        Ok(
            BaselineGeometry::new(self.baseline, self.wavelength, self.orientation)?
                .with_rotation(self.rotation),
        )
    }

    /// Angle setpoints `theta_start, … ≤ theta_stop`.
    pub fn theta_setpoints(&self) -> Result<Vec<f64>> {
        ensure_positive("theta_step", self.theta_step)?;
        if !(self.theta_stop > self.theta_start) {
            return Err(Error::invalid(
                "theta range",
                format!("empty range [{}, {}]", self.theta_start, self.theta_stop),
            ));
        }
        if self.theta_start < -PI / 2.0 || self.theta_stop > PI / 2.0 {
            return Err(Error::invalid("theta range", "must lie within [-π/2, π/2]"));
        }
        let n =
            ((self.theta_stop - self.theta_start) / self.theta_step + 1e-9).floor() as usize + 1;
        Ok((0..n)
            .map(|i| self.theta_start + i as f64 * self.theta_step)
            .collect())
    }
}
