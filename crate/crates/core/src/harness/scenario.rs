use serde::{Deserialize, Serialize};

use crate::error::{ensure_nonnegative, ensure_positive, Error, Result};
use crate::homodyne::HomodyneSetup;
use crate::interferometer::{attenuate, link_budget, photons_per_dwell, InterferometerConfig};
use crate::optics::CoherentAmplitude;
use crate::reconstruction::DEFAULT_GAIN;

/// Where the return photon number of a dwell comes from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PhotonSource {
    /// Mean return photons per shot at the detector.
    Fixed { n_bar: f64 },
    /// Two-way link budget and Beer's-law loss at the current range; the
    /// dwell's photons are shared evenly over its shots.
    LinkBudget {
        transmit_power: f64,
        dwell_time: f64,
        tx_aperture: f64,
        target_area: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub initial_range: f64,
    pub radial_velocity: f64,
    pub radial_acceleration: f64,
    pub initial_altitude: f64,
    pub initial_azimuth: f64,
    pub altitude_rate: f64,
    pub azimuth_rate: f64,
    pub wavelength: f64,
    pub gamma: f64,
    pub photons: PhotonSource,
    pub n_lo: f64,
    pub shots: u64,
    pub efficiency: f64,
    pub dark_rate: f64,
    pub dwell_period: f64,
    pub dwells: usize,
    pub baseline: f64,
    pub seed: u64,
    /// Expectation values instead of sampled photocounts, no timing jitter.
    pub noiseless: bool,
    pub gain: f64,
    pub probe_offset: f64,
    pub dither_probe: bool,
    /// Chirp timing standard deviation σ_t, s.
    pub timing_sigma: f64,
    /// `|φ̂|` above which a dwell counts as out of lock, rad.
    pub lock_threshold: f64,
    pub diff_window: usize,
}

impl Default for Scenario {
    fn default() -> Self {
        Self {
            initial_range: 1e4,
            radial_velocity: 0.0,
            radial_acceleration: 0.0,
            initial_altitude: 0.0,
            initial_azimuth: 0.0,
            altitude_rate: 0.0,
            azimuth_rate: 0.0,
            wavelength: 0.03,
            gamma: 0.0,
            photons: PhotonSource::Fixed { n_bar: 100.0 },
            n_lo: 1e6,
            shots: 1,
            efficiency: 1.0,
            dark_rate: 0.0,
            dwell_period: 1e-3,
            dwells: 200,
            baseline: 3.0,
            seed: 1,
            noiseless: false,
            gain: DEFAULT_GAIN,
            probe_offset: 0.1,
            dither_probe: false,
            timing_sigma: 1e-11,
            lock_threshold: 2.5,
            diff_window: 11,
        }
    }
}

/// True target position at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TargetState {
    pub range: f64,
    pub altitude: f64,
    pub azimuth: f64,
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        ensure_positive("initial_range", self.initial_range)?;
        ensure_positive("wavelength", self.wavelength)?;
        ensure_nonnegative("gamma", self.gamma)?;
        match self.photons {
            PhotonSource::Fixed { n_bar } => ensure_positive("n_bar", n_bar)?,
            PhotonSource::LinkBudget {
                transmit_power,
                dwell_time,
                tx_aperture,
                target_area,
            } => {
                ensure_positive("transmit_power", transmit_power)?;
                ensure_positive("dwell_time", dwell_time)?;
                ensure_positive("tx_aperture", tx_aperture)?;
                ensure_positive("target_area", target_area)?;
            }
        }
        ensure_positive("n_lo", self.n_lo)?;
        if self.shots == 0 {
            return Err(Error::invalid("shots", "must be >= 1"));
        }
        if !(self.efficiency > 0.0 && self.efficiency <= 1.0) {
            return Err(Error::invalid("efficiency", "must lie in (0, 1]"));
        }
        ensure_nonnegative("dark_rate", self.dark_rate)?;
        ensure_positive("dwell_period", self.dwell_period)?;
        if self.dwells == 0 {
            return Err(Error::invalid("dwells", "must be >= 1"));
        }
        ensure_positive("baseline", self.baseline)?;
        if !(self.gain > 0.0 && self.gain <= 1.0) {
            return Err(Error::invalid("gain", "must lie in (0, 1]"));
        }
        ensure_positive("probe_offset", self.probe_offset)?;
        ensure_nonnegative("timing_sigma", self.timing_sigma)?;
        ensure_positive("lock_threshold", self.lock_threshold)?;
        if self.diff_window < 3 || self.diff_window.is_multiple_of(2) {
            return Err(Error::invalid("diff_window", "must be odd and >= 3"));
        }
        for (name, v) in [
            ("radial_velocity", self.radial_velocity),
            ("radial_acceleration", self.radial_acceleration),
            ("initial_altitude", self.initial_altitude),
            ("initial_azimuth", self.initial_azimuth),
            ("altitude_rate", self.altitude_rate),
            ("azimuth_rate", self.azimuth_rate),
        ] {
            if !v.is_finite() {
                return Err(Error::invalid(name, "must be finite"));
            }
        }
        Ok(())
    }

    pub fn interferometer(&self) -> Result<InterferometerConfig> {
        InterferometerConfig::new(self.wavelength, self.gamma)
    }

    /// Homodyne setup with the LO phase left at zero; readouts set it.
    pub fn homodyne(&self) -> Result<HomodyneSetup> {
        HomodyneSetup::new(self.n_lo.sqrt(), 0.0, self.efficiency, self.shots)?
            .with_dark_rate(self.dark_rate)
    }

    /// Return amplitude per shot at the detector for a target at `range`.
    pub fn return_amplitude(&self, range: f64) -> Result<CoherentAmplitude> {
        match self.photons {
            PhotonSource::Fixed { n_bar } => Ok(CoherentAmplitude::real(n_bar.sqrt())),
            PhotonSource::LinkBudget {
                transmit_power,
                dwell_time,
                tx_aperture,
                target_area,
            } => {
                let cfg = self.interferometer()?;
                let p_rx = link_budget(transmit_power, range, tx_aperture, target_area, &cfg)?;
                let per_shot = photons_per_dwell(p_rx, dwell_time, &cfg) / self.shots as f64;
                Ok(attenuate(
                    CoherentAmplitude::real(per_shot.sqrt()),
                    &cfg,
                    range,
                ))
            }
        }
    }

    pub fn time(&self, dwell: usize) -> f64 {
        dwell as f64 * self.dwell_period
    }
}

/// Ballistic target at time `t`: `R₀ + v·t + a·t²/2`, angles linear in `t`.
pub fn evolve_target(s: &Scenario, t: f64) -> Result<TargetState> {
    ensure_nonnegative("t", t)?;
    let range = s.initial_range + s.radial_velocity * t + 0.5 * s.radial_acceleration * t * t;
    if !(range > 0.0) {
        return Err(Error::NonPositiveRange { range, time: t });
    }
    Ok(TargetState {
        range,
        altitude: s.initial_altitude + s.altitude_rate * t,
        azimuth: s.initial_azimuth + s.azimuth_rate * t,
    })
}
