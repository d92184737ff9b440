use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{per_shot_parity, reconstruct_parity_a, reconstruct_parity_b, Averaging};
use crate::error::{ensure_nonnegative, ensure_positive, Error, Result};
use crate::homodyne::{acquire, sample_dwell_shots, Detection, DwellStream, HomodyneSetup};
use crate::interferometer::PortPair;
use crate::optics::CoherentAmplitude;

/// Which trace an interferogram holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Channel {
    A,
    B,
    /// Average of the port A and port B readouts.
    Combined,
    /// Normalized intensity differencing, `(1 + cos φ)/2`.
    Classical,
}

impl Channel {
    pub fn label(&self) -> &'static str {
        match self {
            Channel::A => "A",
            Channel::B => "B",
            Channel::Combined => "AB",
            Channel::Classical => "classical",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "A" | "a" => Some(Channel::A),
            "B" | "b" => Some(Channel::B),
            "AB" | "ab" | "combined" => Some(Channel::Combined),
            "classical" => Some(Channel::Classical),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterferogramMeta {
    pub n_bar: f64,
    pub n_lo: f64,
    pub shots: u64,
    /// `None` for expectation-value traces.
    pub seed: Option<u64>,
    pub channel: Channel,
}

/// Signal versus working phase, phases strictly increasing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Interferogram {
    phases: Vec<f64>,
    values: Vec<f64>,
    pub meta: InterferogramMeta,
}

impl Interferogram {
    pub fn new(points: Vec<(f64, f64)>, meta: InterferogramMeta) -> Result<Self> {
        if points.windows(2).any(|w| !(w[1].0 > w[0].0)) {
            return Err(Error::invalid("phases", "must be strictly increasing"));
        }
        let (phases, values) = points.into_iter().unzip();
        Ok(Self {
            phases,
            values,
            meta,
        })
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.phases.iter().copied().zip(self.values.iter().copied())
    }

    /// Index and value of the largest sample.
    pub fn peak(&self) -> Option<(usize, f64)> {
        self.values
            .iter()
            .copied()
            .enumerate()
            .fold(None, |best, (i, v)| match best {
                Some((_, b)) if b >= v => best,
                _ => Some((i, v)),
            })
    }
}

/// A sweep of the working phase at fixed return photon number.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FringeScan {
    /// Mean return photon number per shot at the detector.
    pub n_bar: f64,
    /// LO amplitude, efficiency, shots and dark counts; the LO phase is set
    /// per port by the scan.
    pub setup: HomodyneSetup,
    pub phase_start: f64,
    pub phase_stop: f64,
    pub step: f64,
    pub channel: Channel,
    /// `None` evaluates expectation values; `Some(seed)` samples photocounts.
    pub seed: Option<u64>,
    pub averaging: Averaging,
}

impl FringeScan {
    /// Noiseless port-B scan.
    pub fn noiseless(
        n_bar: f64,
        setup: HomodyneSetup,
        phase_start: f64,
        phase_stop: f64,
        step: f64,
    ) -> Self {
        Self {
            n_bar,
            setup,
            phase_start,
            phase_stop,
            step,
            channel: Channel::B,
            seed: None,
            averaging: Averaging::MeanFirst,
        }
    }

    pub fn with_channel(mut self, channel: Channel) -> Self {
        self.channel = channel;
        self
    }

    pub fn sampled(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn with_averaging(mut self, averaging: Averaging) -> Self {
        self.averaging = averaging;
        self
    }

    /// Phase setpoints `start, start + step, …` up to and including `stop`.
    pub fn setpoints(&self) -> Result<Vec<f64>> {
        ensure_positive("step", self.step)?;
        if !(self.phase_start.is_finite() && self.phase_stop.is_finite()) {
            return Err(Error::invalid("phase range", "bounds must be finite"));
        }
        if !(self.phase_stop > self.phase_start) {
            return Err(Error::invalid(
                "phase range",
                format!("empty range [{}, {}]", self.phase_start, self.phase_stop),
            ));
        }
        let n = ((self.phase_stop - self.phase_start) / self.step + 1e-9).floor() as usize + 1;
        Ok((0..n)
            .map(|i| self.phase_start + i as f64 * self.step)
            .collect())
    }

    fn meta(&self) -> InterferogramMeta {
        InterferogramMeta {
            n_bar: self.n_bar,
            n_lo: self.setup.lo_photon_number(),
            shots: self.setup.shots,
            seed: self.seed,
            channel: self.channel,
        }
    }

    fn port_readout(&self, phi: f64, index: usize, channel: Channel) -> Result<f64> {
        let ports = PortPair::at_phase(CoherentAmplitude::real(self.n_bar.sqrt()), phi);
        let (signal, setup, lane) = match channel {
            Channel::B => (
                ports.port_b,
                self.setup.with_lo_phase(std::f64::consts::FRAC_PI_2),
                0,
            ),
            Channel::A => (ports.port_a, self.setup.with_lo_phase(0.5 * phi), 1),
            _ => unreachable!("single-port readout"),
        };
        let detection = match self.seed {
            None => Detection::Expectation,
            Some(seed) => Detection::Sampled(DwellStream::new(seed, index as u64).fork(lane)),
        };
        if let (Averaging::PerShot, Detection::Sampled(stream)) = (self.averaging, detection) {
            return per_shot_parity(&sample_dwell_shots(signal, &setup, stream), &setup);
        }
        let stats = acquire(signal, &setup, detection);
        let sample = match channel {
            Channel::B => reconstruct_parity_b(&stats, &setup, phi)?,
            _ => reconstruct_parity_a(&stats, &setup, phi)?,
        };
        Ok(sample.signal_value)
    }

    fn value_at(&self, phi: f64, index: usize) -> Result<f64> {
        match self.channel {
            Channel::A | Channel::B => self.port_readout(phi, index, self.channel),
            Channel::Combined => {
                let a = self.port_readout(phi, index, Channel::A)?;
                let b = self.port_readout(phi, index, Channel::B)?;
                Ok(0.5 * (a + b))
            }
            Channel::Classical => Ok(0.5 * (1.0 + phi.cos())),
        }
    }
}

/// Runs a fringe scan; setpoints are independent and evaluated in parallel.
pub fn scan_fringe(scan: &FringeScan) -> Result<Interferogram> {
    ensure_nonnegative("n_bar", scan.n_bar)?;
    let phases = scan.setpoints()?;
    let values = phases
        .par_iter()
        .enumerate()
        .map(|(i, &phi)| scan.value_at(phi, i))
        .collect::<Result<Vec<_>>>()?;
    Interferogram::new(phases.into_iter().zip(values).collect(), scan.meta())
}

/// Normalized classical intensity-differencing fringe `(1 + cos φ)/2`
/// sampled at `phases`.
pub fn classical_fringe(n_bar: f64, phases: &[f64]) -> Result<Interferogram> {
    Interferogram::new(
        phases.iter().map(|&p| (p, 0.5 * (1.0 + p.cos()))).collect(),
        InterferogramMeta {
            n_bar,
            n_lo: 0.0,
            shots: 0,
            seed: None,
            channel: Channel::Classical,
        },
    )
}

/// Full width at half maximum of the highest peak, by linear interpolation
/// between the samples that bracket each half-maximum crossing.
pub fn fringe_fwhm(g: &Interferogram) -> Result<f64> {
    let (ip, peak) = g.peak().ok_or(Error::NoHalfMaximum)?;
    if !(peak > 0.0) {
        return Err(Error::NoHalfMaximum);
    }
    let half = 0.5 * peak;
    let (p, v) = (g.phases(), g.values());
    let crossing =
        |lo: usize, hi: usize| p[lo] + (half - v[lo]) / (v[hi] - v[lo]) * (p[hi] - p[lo]);

    let left = (1..=ip)
        .rev()
        .find(|&j| v[j - 1] < half)
        .map(|j| crossing(j - 1, j));
    let right = (ip..p.len().saturating_sub(1))
        .find(|&j| v[j + 1] < half)
        .map(|j| crossing(j, j + 1));
    match (left, right) {
        (Some(l), Some(r)) => Ok(r - l),
        _ => Err(Error::NoHalfMaximum),
    }
}
