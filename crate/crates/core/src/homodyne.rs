//! Balanced homodyne detection of one interferometer output port.
//!
//! The signal mode `b` and a local oscillator `|δ e^{iϑ}⟩` in mode `c` meet
//! on a 50-50 beamsplitter (`e = (b + ic)/√2`, `d = (c + ib)/√2`); detectors
//! D and E count photons and the difference `n_E − n_D` is recorded. Both
//! beamsplitter outputs of two coherent inputs are coherent, so the counts
//! are independent Poisson variables and their difference is Skellam:
//!
//! ```text
//! E[n_E − n_D] = −2η·|b||δ| sin ϑ        (real b)
//! Var[n_E − n_D] = E[n_E] + E[n_D]
//! ```
//!
//! Randomness is addressed, not streamed: shot `k` of dwell `j` under master
//! seed `s` always draws from the same ChaCha substream, so a dwell can be
//! sampled in parallel and still reproduce bit for bit.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_nonnegative, Error, Result};
use crate::optics::CoherentAmplitude;

/// Dwells shorter than this are sampled on the calling thread.
const PARALLEL_THRESHOLD: u64 = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HomodyneSetup {
    /// `|δ_LO|`; the LO mean photon number is its square.
    pub lo_amplitude: f64,
    /// `ϑ_LO`, rad.
    pub lo_phase: f64,
    /// Detector quantum efficiency η.
    pub efficiency: f64,
    /// Homodyne shots per dwell.
    pub shots: u64,
    /// Mean dark counts per detector per shot.
    pub dark_rate: f64,
}

impl HomodyneSetup {
    pub fn new(lo_amplitude: f64, lo_phase: f64, efficiency: f64, shots: u64) -> Result<Self> {
        ensure_nonnegative("lo_amplitude", lo_amplitude)?;
        if !lo_phase.is_finite() {
            return Err(Error::invalid("lo_phase", "must be finite"));
        }
        if !(0.0..=1.0).contains(&efficiency) {
            return Err(Error::invalid(
                "efficiency",
                format!("must lie in [0, 1], got {efficiency}"),
            ));
        }
        if shots == 0 {
            return Err(Error::invalid("shots", "must be at least 1"));
        }
        Ok(Self {
            lo_amplitude,
            lo_phase,
            efficiency,
            shots,
            dark_rate: 0.0,
        })
    }

    /// Ideal detectors, LO given by its photon number.
    pub fn ideal(lo_photon_number: f64, lo_phase: f64, shots: u64) -> Result<Self> {
        ensure_nonnegative("lo_photon_number", lo_photon_number)?;
        Self::new(lo_photon_number.sqrt(), lo_phase, 1.0, shots)
    }

    pub fn with_dark_rate(mut self, dark_rate: f64) -> Result<Self> {
        ensure_nonnegative("dark_rate", dark_rate)?;
        self.dark_rate = dark_rate;
        Ok(self)
    }

    pub fn with_lo_phase(mut self, lo_phase: f64) -> Self {
        self.lo_phase = lo_phase;
        self
    }

    pub fn with_shots(mut self, shots: u64) -> Self {
        self.shots = shots.max(1);
        self
    }

    /// `n̄_LO = |δ_LO|²`.
    pub fn lo_photon_number(&self) -> f64 {
        self.lo_amplitude * self.lo_amplitude
    }

    fn local_oscillator(&self) -> Complex64 {
        Complex64::from_polar(self.lo_amplitude, self.lo_phase)
    }
}

/// Outcome of one homodyne shot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShotRecord {
    pub count_d: u64,
    pub count_e: u64,
    /// `count_e − count_d`.
    pub difference: i64,
}

impl ShotRecord {
    pub fn new(count_d: u64, count_e: u64) -> Self {
        Self {
            count_d,
            count_e,
            difference: count_e as i64 - count_d as i64,
        }
    }
}

/// Sample mean and variance of the photocount difference over a dwell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DwellStatistics {
    pub mean_difference: f64,
    /// Unbiased sample variance; `0` for a single shot.
    pub var_difference: f64,
    pub shots: u64,
}

impl DwellStatistics {
    /// Expectation values in place of samples: mean `E[n_E − n_D]`,
    /// variance `E[n_E] + E[n_D]`.
    pub fn expected(signal: CoherentAmplitude, setup: &HomodyneSetup) -> Self {
        let m = detector_means(signal, setup);
        Self {
            mean_difference: m.difference(),
            var_difference: m.e + m.d,
            shots: setup.shots,
        }
    }

    pub fn from_shots(shots: &[ShotRecord]) -> Self {
        assert!(!shots.is_empty(), "a dwell needs at least one shot");
        let mut acc = Moments::default();
        for s in shots {
            acc.push(s.difference);
        }
        acc.finish()
    }

    /// Standard error of `mean_difference`.
    pub fn standard_error(&self) -> f64 {
        (self.var_difference / self.shots as f64).sqrt()
    }
}

/// Exact integer first and second moments; addition is associative, so any
/// reduction order gives the same statistics.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: u64,
    sum: i128,
    sum_sq: i128,
}

impl Moments {
    fn push(&mut self, x: i64) {
        self.n += 1;
        self.sum += x as i128;
        self.sum_sq += (x as i128) * (x as i128);
    }

    fn merge(self, o: Self) -> Self {
        Self {
            n: self.n + o.n,
            sum: self.sum + o.sum,
            sum_sq: self.sum_sq + o.sum_sq,
        }
    }

    fn finish(self) -> DwellStatistics {
        let n = self.n as i128;
        let mean = self.sum as f64 / self.n as f64;
        let var = if self.n > 1 {
            (n * self.sum_sq - self.sum * self.sum) as f64 / (self.n as f64 * (self.n - 1) as f64)
        } else {
            0.0
        };
        DwellStatistics {
            mean_difference: mean,
            var_difference: var,
            shots: self.n,
        }
    }
}

/// Mean photocounts at detectors E and D for one shot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorMeans {
    pub e: f64,
    pub d: f64,
}

impl DetectorMeans {
    pub fn difference(&self) -> f64 {
        self.e - self.d
    }
}

/// Mean photocounts at E and D, including efficiency and dark counts.
///
/// For a real signal amplitude `a`:
/// `E = η(a² + |δ|² − 2a|δ| sin ϑ)/2`, `D = η(a² + |δ|² + 2a|δ| sin ϑ)/2`.
pub fn detector_means(signal: CoherentAmplitude, setup: &HomodyneSetup) -> DetectorMeans {
    let b: Complex64 = signal.into();
    let c = setup.local_oscillator();
    let i = Complex64::i();
    let e = (b + i * c).norm_sqr() / 2.0;
    let d = (c + i * b).norm_sqr() / 2.0;
    DetectorMeans {
        e: setup.efficiency * e + setup.dark_rate,
        d: setup.efficiency * d + setup.dark_rate,
    }
}

/// Addresses the random substream of one dwell.
///
/// `fork` derives independent child streams (one per port, probe, chirp...)
/// from a dwell without consuming randomness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DwellStream {
    pub seed: u64,
    pub dwell: u64,
}

impl DwellStream {
    pub const fn new(seed: u64, dwell: u64) -> Self {
        Self { seed, dwell }
    }

    fn key(&self) -> u64 {
        splitmix64(splitmix64(self.seed) ^ self.dwell.wrapping_mul(0xD1B5_4A32_D192_ED03))
    }

    pub fn fork(&self, lane: u64) -> Self {
        Self {
            seed: self.key(),
            dwell: lane,
        }
    }

    /// Generator for auxiliary draws of this dwell (e.g. timing jitter).
    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.key())
    }

    /// Generator for shot `shot`; independent of every other shot.
    pub fn shot_rng(&self, shot: u64) -> ChaCha8Rng {
        let mut r = self.rng();
        r.set_stream(shot);
        r
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Poisson sampler that also accepts a zero mean.
#[derive(Debug, Clone, Copy)]
struct Counter(Option<Poisson<f64>>);

impl Counter {
    fn new(mean: f64) -> Self {
        Self(if mean > 0.0 {
            Poisson::new(mean).ok()
        } else {
            None
        })
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        self.0.map_or(0, |p| p.sample(rng) as u64)
    }
}

#[derive(Debug, Clone, Copy)]
struct ShotSampler {
    d: Counter,
    e: Counter,
}

impl ShotSampler {
    fn new(signal: CoherentAmplitude, setup: &HomodyneSetup) -> Self {
        let m = detector_means(signal, setup);
        Self {
            d: Counter::new(m.d),
            e: Counter::new(m.e),
        }
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> ShotRecord {
        let count_d = self.d.sample(rng);
        let count_e = self.e.sample(rng);
        ShotRecord::new(count_d, count_e)
    }
}

/// Draws one shot: independent Poisson counts at D and E.
pub fn sample_shot<R: Rng + ?Sized>(
    signal: CoherentAmplitude,
    setup: &HomodyneSetup,
    rng: &mut R,
) -> ShotRecord {
    ShotSampler::new(signal, setup).sample(rng)
}

/// Every shot of a dwell, in shot order.
pub fn sample_dwell_shots(
    signal: CoherentAmplitude,
    setup: &HomodyneSetup,
    stream: DwellStream,
) -> Vec<ShotRecord> {
    let sampler = ShotSampler::new(signal, setup);
    let base = stream.rng();
    let draw = |k: u64| {
        let mut r = base.clone();
        r.set_stream(k);
        sampler.sample(&mut r)
    };
    if setup.shots < PARALLEL_THRESHOLD {
        (0..setup.shots).map(draw).collect()
    } else {
        (0..setup.shots).into_par_iter().map(draw).collect()
    }
}

/// Samples `setup.shots` shots and aggregates them.
///
/// Deterministic in `stream`; shots are reduced in parallel with exact
/// integer sums, so the thread count never changes the result.
pub fn measure_dwell(
    signal: CoherentAmplitude,
    setup: &HomodyneSetup,
    stream: DwellStream,
) -> DwellStatistics {
    let sampler = ShotSampler::new(signal, setup);
    let base = stream.rng();
    let draw = |k: u64| {
        let mut r = base.clone();
        r.set_stream(k);
        sampler.sample(&mut r).difference
    };
    let moments = if setup.shots < PARALLEL_THRESHOLD {
        let mut m = Moments::default();
        (0..setup.shots).for_each(|k| m.push(draw(k)));
        m
    } else {
        (0..setup.shots)
            .into_par_iter()
            .fold(Moments::default, |mut m, k| {
                m.push(draw(k));
                m
            })
            .reduce(Moments::default, Moments::merge)
    };
    moments.finish()
}

/// How a dwell is turned into statistics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Detection {
    /// Noiseless expectation values.
    Expectation,
    /// Photocount sampling from the given stream.
    Sampled(DwellStream),
}

impl Detection {
    pub fn fork(&self, lane: u64) -> Self {
        match self {
            Detection::Expectation => Detection::Expectation,
            Detection::Sampled(s) => Detection::Sampled(s.fork(lane)),
        }
    }
}

pub fn acquire(
    signal: CoherentAmplitude,
    setup: &HomodyneSetup,
    detection: Detection,
) -> DwellStatistics {
    match detection {
        Detection::Expectation => DwellStatistics::expected(signal, setup),
        Detection::Sampled(stream) => measure_dwell(signal, setup, stream),
    }
}
