//! Seeded synthetic test signals.
//!
//! Randomness comes from `ChaCha20Rng::seed_from_u64(seed)`; Gaussian samples
//! use `rand_distr::StandardNormal`. Every generator is a pure function of its
//! arguments.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use dispent_core::{mean, population_sd, Signal};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::Error;

/// Sampling rate of the quasi-periodic and logistic-map signals, Hz.
pub const SYNTH_SAMPLE_RATE: f64 = 150.0;
/// Duration of the quasi-periodic and logistic-map signals, s.
pub const SYNTH_DURATION: f64 = 100.0;
/// Samples in the quasi-periodic and logistic-map signals.
pub const SYNTH_LEN: usize = 15_000;
/// Noise starts this many seconds into the quasi-periodic signal.
pub const NOISE_ONSET: f64 = 20.0;
pub const LOGISTIC_ALPHA_START: f64 = 3.5;
pub const LOGISTIC_ALPHA_END: f64 = 3.99;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenKind {
    Wgn,
    Pink,
    QuasiPeriodic,
    LogisticSweep,
}

impl GenKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            GenKind::Wgn => "wgn",
            GenKind::Pink => "pink",
            GenKind::QuasiPeriodic => "quasiperiodic",
            GenKind::LogisticSweep => "logistic",
        }
    }
}

impl fmt::Display for GenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GenKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "wgn" | "white" => Ok(GenKind::Wgn),
            "pink" | "1/f" => Ok(GenKind::Pink),
            "quasiperiodic" | "quasi" => Ok(GenKind::QuasiPeriodic),
            "logistic" => Ok(GenKind::LogisticSweep),
            other => Err(Error::Usage(format!("unknown signal kind `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenSpec {
    pub kind: GenKind,
    /// Ignored by the fixed-length kinds.
    pub length: usize,
    /// Attached to the noise kinds when given; the fixed-length kinds always
    /// use [`SYNTH_SAMPLE_RATE`].
    pub sample_rate: Option<f64>,
    pub seed: u64,
}

pub fn generate(spec: &GenSpec) -> Result<Signal, Error> {
    let signal = match spec.kind {
        GenKind::Wgn => gen_wgn(spec.length, spec.seed)?,
        GenKind::Pink => gen_pink(spec.length, spec.seed)?,
        GenKind::QuasiPeriodic => return Ok(gen_quasiperiodic(spec.seed)),
        GenKind::LogisticSweep => return Ok(gen_logistic_sweep(spec.seed)),
    };
    match spec.sample_rate {
        Some(fs) => Ok(Signal::with_sample_rate(signal.into_samples(), fs)?),
        None => Ok(signal),
    }
}

fn normals(rng: &mut ChaCha20Rng, n: usize) -> impl Iterator<Item = f64> + '_ {
    (0..n).map(|_| StandardNormal.sample(rng))
}

/// I.i.d. standard normal samples.
pub fn gen_wgn(length: usize, seed: u64) -> Result<Signal, Error> {
    if length < 1 {
        return Err(Error::Usage("WGN length must be >= 1".into()));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    Ok(Signal::new(normals(&mut rng, length).collect())?)
}

/// 1/f noise by spectral shaping: a white complex Gaussian spectrum is scaled
/// by `1/sqrt(f)` with the DC bin zeroed, made Hermitian, inverse transformed
/// and standardized to zero mean and unit variance.
pub fn gen_pink(length: usize, seed: u64) -> Result<Signal, Error> {
    if length < 2 {
        return Err(Error::Usage("1/f noise length must be >= 2".into()));
    }
    let n = length;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut spectrum = vec![Complex::new(0.0, 0.0); n];
    let half = n / 2;
    for k in 1..=half {
        let scale = 1.0 / (k as f64).sqrt();
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        if 2 * k == n {
            // Nyquist bin of an even-length transform is its own mirror.
            spectrum[k] = Complex::new(re * scale, 0.0);
        } else {
            spectrum[k] = Complex::new(re, im) * scale;
            spectrum[n - k] = spectrum[k].conj();
        }
    }
    FftPlanner::<f64>::new()
        .plan_fft_inverse(n)
        .process(&mut spectrum);
    let raw: Vec<f64> = spectrum.iter().map(|c| c.re).collect();
    let (mu, sd) = (mean(&raw), population_sd(&raw));
    Ok(Signal::new(raw.iter().map(|v| (v - mu) / sd).collect())?)
}

/// The noise-free quasi-periodic waveform at time `t` seconds: a sum of 0.5 Hz
/// and 1 Hz cosines under a slow envelope `1 + 0.5 sin(2 pi 0.05 t)`, scaled to
/// unit peak amplitude.
pub fn quasiperiodic_carrier(t: f64) -> f64 {
    let envelope = 1.0 + 0.5 * (2.0 * PI * 0.05 * t).sin();
    envelope * ((2.0 * PI * 0.5 * t).cos() + (2.0 * PI * t).cos()) / 3.0
}

/// Standard deviation of the additive noise at time `t`: zero before the
/// onset, then rising linearly to 1 at the end of the record.
pub fn quasiperiodic_noise_sd(t: f64) -> f64 {
    if t < NOISE_ONSET {
        0.0
    } else {
        (t - NOISE_ONSET) / (SYNTH_DURATION - NOISE_ONSET)
    }
}

/// 100 s at 150 Hz of the amplitude-modulated carrier; clean for the first
/// 20 s, then with additive WGN of linearly growing SD.
pub fn gen_quasiperiodic(seed: u64) -> Signal {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let samples = (0..SYNTH_LEN)
        .map(|i| {
            let t = i as f64 / SYNTH_SAMPLE_RATE;
            let clean = quasiperiodic_carrier(t);
            if t < NOISE_ONSET {
                clean
            } else {
                let n: f64 = StandardNormal.sample(&mut rng);
                clean + quasiperiodic_noise_sd(t) * n
            }
        })
        .collect();
    Signal::with_sample_rate(samples, SYNTH_SAMPLE_RATE).expect("finite by construction")
}

/// Map parameter used for sample `k` of the sweep.
pub fn logistic_alpha(k: usize) -> f64 {
    LOGISTIC_ALPHA_START
        + (LOGISTIC_ALPHA_END - LOGISTIC_ALPHA_START) * k as f64 / (SYNTH_LEN - 1) as f64
}

/// Logistic map `u_k = a_k u_{k-1} (1 - u_{k-1})` from `u_0 = 0.5`, with `a_k`
/// rising linearly from 3.5 to 3.99 across 15000 samples (100 s at 150 Hz).
///
/// The sweep is deterministic; `seed` is accepted only so every generator
/// shares one signature and is echoed in output provenance.
pub fn gen_logistic_sweep(_seed: u64) -> Signal {
    let mut u = 0.5;
    let samples = (0..SYNTH_LEN)
        .map(|k| {
            u = logistic_alpha(k) * u * (1.0 - u);
            assert!(u > 0.0 && u < 1.0, "logistic map left (0, 1) at sample {k}");
            u
        })
        .collect();
    Signal::with_sample_rate(samples, SYNTH_SAMPLE_RATE).expect("finite by construction")
}

/// `n` iterates of the logistic map at fixed `alpha` after discarding
/// `transient` iterates from `u0`.
pub fn logistic_orbit(alpha: f64, u0: f64, transient: usize, n: usize) -> Vec<f64> {
    let mut u = u0;
    for _ in 0..transient {
        u = alpha * u * (1.0 - u);
    }
    (0..n)
        .map(|_| {
            u = alpha * u * (1.0 - u);
            u
        })
        .collect()
}
