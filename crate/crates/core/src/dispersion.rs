//! Dispersion patterns and dispersion entropy.
//!
//! A series is mapped into (0, 1) with the normal CDF, quantized into `c`
//! classes, embedded with dimension `m` and delay `d`, and each embedding
//! vector is read as a base-`c` pattern code. Dispersion entropy is the
//! Shannon entropy of the pattern frequencies.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::{map_ncdf, Error, MappingParams, Result};

/// Dense counting is used up to this many possible patterns; beyond it codes
/// are sorted and run-length counted.
const DENSE_PATTERN_LIMIT: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DispersionParams {
    m: usize,
    c: usize,
    d: usize,
    patterns: u64,
}

impl DispersionParams {
    /// Embedding dimension `m >= 2`, class count `c >= 2`, delay `d >= 1`.
    pub fn new(m: usize, c: usize, d: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidParameter(
                "embedding dimension m must be >= 2",
            ));
        }
        if c < 2 {
            return Err(Error::InvalidParameter("class count c must be >= 2"));
        }
        if c > u32::MAX as usize {
            return Err(Error::InvalidParameter("class count c is too large"));
        }
        if d < 1 {
            return Err(Error::InvalidParameter("time delay d must be >= 1"));
        }
        let patterns = u32::try_from(m)
            .ok()
            .and_then(|m| (c as u64).checked_pow(m))
            .ok_or(Error::InvalidParameter("c^m does not fit in 64 bits"))?;
        Ok(Self { m, c, d, patterns })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn c(&self) -> usize {
        self.c
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Number of possible dispersion patterns, `c^m`.
    pub fn pattern_count(&self) -> u64 {
        self.patterns
    }

    /// Span of one embedding vector, `(m - 1) * d + 1` samples.
    pub fn span(&self) -> usize {
        (self.m - 1) * self.d + 1
    }

    /// Maximum entropy `ln(c^m)`, used for normalization.
    pub fn max_entropy(&self) -> f64 {
        self.m as f64 * libm::log(self.c as f64)
    }

    /// Warns when `c^m` is not smaller than the series length the estimator
    /// will see. For MDE pass `floor(L / tau_max)`; for DisEn and RCMDE pass `L`.
    pub fn check_length(&self, effective_len: usize) -> Option<ParamWarning> {
        (self.patterns >= effective_len as u64).then_some(ParamWarning::TooManyPatterns {
            patterns: self.patterns,
            length: effective_len,
        })
    }
}

/// Non-fatal parameter advice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParamWarning {
    TooManyPatterns { patterns: u64, length: usize },
}

impl fmt::Display for ParamWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamWarning::TooManyPatterns { patterns, length } => write!(
                f,
                "c^m = {patterns} is not smaller than the effective series length {length}; \
                 pattern frequencies will be unreliable"
            ),
        }
    }
}

/// Class label for one mapped value: `round(c * y + 0.5)` with ties rounded
/// away from zero, clamped into `1..=c`.
#[inline]
pub fn class_of(y: f64, c: usize) -> u32 {
    let z = libm::round(c as f64 * y + 0.5);
    if z < 1.0 {
        1
    } else if z > c as f64 {
        c as u32
    } else {
        z as u32
    }
}

/// Assigns each mapped value to a class in `1..=c`.
pub fn classify(y: &[f64], c: usize) -> Vec<u32> {
    y.iter().map(|&v| class_of(v, c)).collect()
}

/// Counts of dispersion patterns over all embedding vectors of a classified
/// series.
///
/// Patterns are stored by code: the base-`c` number whose digits are the class
/// labels minus one, most significant digit first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternHistogram {
    m: usize,
    c: usize,
    counts: Vec<(u64, u64)>,
    total: u64,
}

impl PatternHistogram {
    /// Number of embedding vectors, `N - (m - 1) d`.
    pub fn total_vectors(&self) -> u64 {
        self.total
    }

    /// Number of distinct patterns observed.
    pub fn distinct(&self) -> usize {
        self.counts.len()
    }

    /// `(code, count)` pairs with nonzero count, ascending by code.
    pub fn counts(&self) -> &[(u64, u64)] {
        &self.counts
    }

    pub fn count_of(&self, pattern: &[u32]) -> u64 {
        encode(pattern, self.c)
            .and_then(|code| self.counts.binary_search_by_key(&code, |e| e.0).ok())
            .map_or(0, |i| self.counts[i].1)
    }

    pub fn probability(&self, pattern: &[u32]) -> f64 {
        self.count_of(pattern) as f64 / self.total as f64
    }

    /// `(pattern, relative frequency)` for every observed pattern.
    pub fn iter(&self) -> impl Iterator<Item = (Vec<u32>, f64)> + '_ {
        let total = self.total as f64;
        self.counts
            .iter()
            .map(move |&(code, n)| (decode(code, self.m, self.c), n as f64 / total))
    }

    pub fn distribution(&self) -> PatternDistribution {
        let total = self.total as f64;
        PatternDistribution {
            m: self.m,
            c: self.c,
            probs: self
                .counts
                .iter()
                .map(|&(code, n)| (code, n as f64 / total))
                .collect(),
        }
    }

    /// Shannon entropy (natural log) of the pattern frequencies.
    pub fn entropy(&self) -> f64 {
        let total = self.total as f64;
        shannon(self.counts.iter().map(|&(_, n)| n as f64 / total))
    }
}

/// A probability distribution over dispersion patterns, e.g. the average of
/// several [`PatternHistogram`]s.
#[derive(Debug, Clone, PartialEq)]
pub struct PatternDistribution {
    m: usize,
    c: usize,
    probs: Vec<(u64, f64)>,
}

impl PatternDistribution {
    /// Entry-wise mean of the histograms' relative frequencies, summed in the
    /// order given. All histograms must share `m` and `c`.
    pub fn mean_of(histograms: &[PatternHistogram]) -> Option<Self> {
        let first = histograms.first()?;
        let mut acc: BTreeMap<u64, f64> = BTreeMap::new();
        for h in histograms {
            debug_assert!(h.m == first.m && h.c == first.c);
            let total = h.total as f64;
            for &(code, n) in &h.counts {
                *acc.entry(code).or_insert(0.0) += n as f64 / total;
            }
        }
        let k = histograms.len() as f64;
        Some(Self {
            m: first.m,
            c: first.c,
            probs: acc.into_iter().map(|(code, p)| (code, p / k)).collect(),
        })
    }

    /// `(code, probability)` pairs with nonzero probability, ascending by code.
    pub fn probs(&self) -> &[(u64, f64)] {
        &self.probs
    }

    pub fn probability(&self, pattern: &[u32]) -> f64 {
        encode(pattern, self.c)
            .and_then(|code| self.probs.binary_search_by_key(&code, |e| e.0).ok())
            .map_or(0.0, |i| self.probs[i].1)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Vec<u32>, f64)> + '_ {
        self.probs
            .iter()
            .map(move |&(code, p)| (decode(code, self.m, self.c), p))
    }

    pub fn total_probability(&self) -> f64 {
        self.probs.iter().map(|e| e.1).sum()
    }

    pub fn entropy(&self) -> f64 {
        shannon(self.probs.iter().map(|e| e.1))
    }
}

/// `-sum p ln p`, skipping zero terms.
pub(crate) fn shannon(probs: impl Iterator<Item = f64>) -> f64 {
    let s: f64 = probs.filter(|&p| p > 0.0).map(|p| p * libm::log(p)).sum();
    if s == 0.0 {
        0.0
    } else {
        -s
    }
}

fn encode(pattern: &[u32], c: usize) -> Option<u64> {
    pattern.iter().try_fold(0u64, |acc, &v| {
        if v == 0 || v as usize > c {
            None
        } else {
            Some(acc * c as u64 + (v - 1) as u64)
        }
    })
}

fn decode(mut code: u64, m: usize, c: usize) -> Vec<u32> {
    let mut digits = vec![0u32; m];
    for slot in digits.iter_mut().rev() {
        *slot = (code % c as u64) as u32 + 1;
        code /= c as u64;
    }
    digits
}

/// Counts the dispersion patterns of a classified series.
pub fn dispersion_histogram(z: &[u32], params: &DispersionParams) -> Result<PatternHistogram> {
    let span = params.span();
    if z.len() < span {
        return Err(Error::TooShort {
            len: z.len(),
            required: span,
        });
    }
    let (m, c, d) = (params.m, params.c as u64, params.d);
    let total = z.len() - span + 1;
    let codes = (0..total).map(|i| (0..m).fold(0u64, |acc, k| acc * c + (z[i + k * d] - 1) as u64));

    let counts = if params.patterns <= DENSE_PATTERN_LIMIT {
        let mut dense = vec![0u64; params.patterns as usize];
        for code in codes {
            dense[code as usize] += 1;
        }
        dense
            .into_iter()
            .enumerate()
            .filter(|&(_, n)| n > 0)
            .map(|(code, n)| (code as u64, n))
            .collect()
    } else {
        let mut sorted: Vec<u64> = codes.collect();
        sorted.sort_unstable();
        let mut runs: Vec<(u64, u64)> = Vec::new();
        for code in sorted {
            match runs.last_mut() {
                Some(last) if last.0 == code => last.1 += 1,
                _ => runs.push((code, 1)),
            }
        }
        runs
    };

    Ok(PatternHistogram {
        m,
        c: params.c,
        counts,
        total: total as u64,
    })
}

/// Maps, classifies and counts in one pass without materializing the
/// intermediate series.
pub(crate) fn histogram_of(
    x: &[f64],
    params: &DispersionParams,
    mapping: &MappingParams,
) -> Result<PatternHistogram> {
    if x.is_empty() {
        return Err(Error::EmptySignal);
    }
    let z: Vec<u32> = x
        .iter()
        .map(|&v| class_of(mapping.map(v), params.c))
        .collect();
    dispersion_histogram(&z, params)
}

/// Dispersion entropy of `x`. With `normalize` the value is divided by
/// `ln(c^m)` and lies in `[0, 1]`.
pub fn disen(
    x: &[f64],
    params: &DispersionParams,
    mapping: &MappingParams,
    normalize: bool,
) -> Result<f64> {
    let y = map_ncdf(x, mapping)?;
    let z = classify(&y, params.c);
    let h = dispersion_histogram(&z, params)?;
    let e = h.entropy();
    Ok(if normalize {
        e / params.max_entropy()
    } else {
        e
    })
}
