//! Normal-CDF mapping of samples into (0, 1).

use alloc::vec::Vec;

use crate::{mean, population_sd, Error, Result};

/// Mean and standard deviation of the normal CDF used by the mapping.
///
/// For the multiscale methods these are taken from the original signal and
/// kept fixed at every scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MappingParams {
    mu: f64,
    sigma: f64,
}

impl MappingParams {
    pub fn new(mu: f64, sigma: f64) -> Result<Self> {
        if !mu.is_finite() {
            return Err(Error::InvalidParameter("mapping mean must be finite"));
        }
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::SigmaZero);
        }
        Ok(Self { mu, sigma })
    }

    /// Mean and population SD of `x`. A constant signal yields [`Error::SigmaZero`].
    pub fn from_signal(x: &[f64]) -> Result<Self> {
        let first = *x.first().ok_or(Error::EmptySignal)?;
        if x.iter().all(|&v| v == first) {
            return Err(Error::SigmaZero);
        }
        Self::new(mean(x), population_sd(x))
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    #[inline]
    pub fn map(&self, x: f64) -> f64 {
        normal_cdf((x - self.mu) / self.sigma)
    }
}

/// Standard normal CDF, evaluated through `erfc` so both tails keep full
/// relative precision.
#[inline]
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z * core::f64::consts::FRAC_1_SQRT_2)
}

/// Maps every sample through the normal CDF with the given mean and SD.
///
/// Values are in (0, 1) mathematically; in double precision samples more than
/// about 8.3 SDs above the mean round to exactly 1.0.
pub fn map_ncdf(x: &[f64], mapping: &MappingParams) -> Result<Vec<f64>> {
    if x.is_empty() {
        return Err(Error::EmptySignal);
    }
    Ok(x.iter().map(|&v| mapping.map(v)).collect())
}
