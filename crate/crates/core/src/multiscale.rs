//! Multiscale pipelines: MDE, RCMDE, MSE and RCMSE.
//!
//! The normal-CDF mapping (for the dispersion methods) and the tolerance `r`
//! (for the sample-entropy methods) are derived once from the original signal
//! and held fixed at every scale. Each scale is computed independently of the
//! others, so scales can be evaluated in any order or in parallel.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::dispersion::histogram_of;
use crate::sample::match_counts;
use crate::{
    coarse_grain, coarse_grain_shifted, DispersionParams, Error, MappingParams, MatchCounts,
    PatternDistribution, Result, SampEnParams,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Mde,
    Rcmde,
    Mse,
    Rcmse,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Mde, Method::Rcmde, Method::Mse, Method::Rcmse];

    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Mde => "mde",
            Method::Rcmde => "rcmde",
            Method::Mse => "mse",
            Method::Rcmse => "rcmse",
        }
    }

    pub fn is_dispersion(&self) -> bool {
        matches!(self, Method::Mde | Method::Rcmde)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mde" => Ok(Method::Mde),
            "rcmde" => Ok(Method::Rcmde),
            "mse" => Ok(Method::Mse),
            "rcmse" => Ok(Method::Rcmse),
            _ => Err(Error::InvalidParameter("unknown multiscale method")),
        }
    }
}

/// Parameters a profile was computed with.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProfileParams {
    Dispersion {
        params: DispersionParams,
        mapping: MappingParams,
    },
    Sample {
        params: SampEnParams,
    },
}

/// Entropy per scale `tau = 1..=tau_max`; `None` marks an undefined scale.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaleProfile {
    pub method: Method,
    pub values: Vec<Option<f64>>,
    pub params: ProfileParams,
}

impl ScaleProfile {
    pub fn tau_max(&self) -> usize {
        self.values.len()
    }

    /// Value at 1-based scale `tau`.
    pub fn at(&self, tau: usize) -> Option<f64> {
        tau.checked_sub(1)
            .and_then(|i| self.values.get(i))
            .copied()
            .flatten()
    }

    pub fn undefined_count(&self) -> usize {
        self.values.iter().filter(|v| v.is_none()).count()
    }
}

/// Parameters shared by all four methods; the irrelevant half is ignored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MethodConfig {
    pub m: usize,
    pub c: usize,
    pub d: usize,
    pub r_factor: f64,
}

impl Default for MethodConfig {
    fn default() -> Self {
        Self {
            m: 2,
            c: 6,
            d: 1,
            r_factor: 0.15,
        }
    }
}

/// Runs `method` on `u` with parameters derived from `config`.
pub fn run(
    method: Method,
    u: &[f64],
    config: &MethodConfig,
    tau_max: usize,
) -> Result<ScaleProfile> {
    match method {
        Method::Mde | Method::Rcmde => {
            let params = DispersionParams::new(config.m, config.c, config.d)?;
            if method == Method::Mde {
                mde(u, &params, tau_max)
            } else {
                rcmde(u, &params, tau_max)
            }
        }
        Method::Mse | Method::Rcmse => {
            check_scales(u, tau_max)?;
            let params = SampEnParams::from_signal(u, config.m, config.r_factor)?;
            if method == Method::Mse {
                mse(u, &params, tau_max)
            } else {
                rcmse(u, &params, tau_max)
            }
        }
    }
}

fn check_scales(u: &[f64], tau_max: usize) -> Result<()> {
    if tau_max < 1 {
        return Err(Error::InvalidParameter("tau_max must be >= 1"));
    }
    if u.len() < tau_max {
        return Err(Error::TooShort {
            len: u.len(),
            required: tau_max,
        });
    }
    Ok(())
}

/// Converts a too-short outcome into an undefined value.
fn undefined_if_short<T>(r: Result<T>) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::TooShort { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Multiscale dispersion entropy with the mapping taken from `u`.
pub fn mde(u: &[f64], params: &DispersionParams, tau_max: usize) -> Result<ScaleProfile> {
    check_scales(u, tau_max)?;
    let mapping = MappingParams::from_signal(u)?;
    mde_with_mapping(u, params, &mapping, tau_max)
}

pub fn mde_with_mapping(
    u: &[f64],
    params: &DispersionParams,
    mapping: &MappingParams,
    tau_max: usize,
) -> Result<ScaleProfile> {
    check_scales(u, tau_max)?;
    let values = (1..=tau_max)
        .map(|tau| mde_scale(u, params, mapping, tau))
        .collect::<Result<_>>()?;
    Ok(ScaleProfile {
        method: Method::Mde,
        values,
        params: ProfileParams::Dispersion {
            params: *params,
            mapping: *mapping,
        },
    })
}

/// Normalized DisEn of the scale-`tau` coarse-graining.
pub fn mde_scale(
    u: &[f64],
    params: &DispersionParams,
    mapping: &MappingParams,
    tau: usize,
) -> Result<Option<f64>> {
    let Some(cg) = undefined_if_short(coarse_grain(u, tau))? else {
        return Ok(None);
    };
    let h = undefined_if_short(histogram_of(&cg.series, params, mapping))?;
    Ok(h.map(|h| h.entropy() / params.max_entropy()))
}

/// Refined composite MDE with the mapping taken from `u`.
pub fn rcmde(u: &[f64], params: &DispersionParams, tau_max: usize) -> Result<ScaleProfile> {
    check_scales(u, tau_max)?;
    let mapping = MappingParams::from_signal(u)?;
    rcmde_with_mapping(u, params, &mapping, tau_max)
}

pub fn rcmde_with_mapping(
    u: &[f64],
    params: &DispersionParams,
    mapping: &MappingParams,
    tau_max: usize,
) -> Result<ScaleProfile> {
    check_scales(u, tau_max)?;
    let values = (1..=tau_max)
        .map(|tau| {
            Ok(rcmde_distribution(u, params, mapping, tau)?
                .map(|p| p.entropy() / params.max_entropy()))
        })
        .collect::<Result<_>>()?;
    Ok(ScaleProfile {
        method: Method::Rcmde,
        values,
        params: ProfileParams::Dispersion {
            params: *params,
            mapping: *mapping,
        },
    })
}

/// Pattern frequencies averaged over the `tau` shifted coarse-grainings.
///
/// Shifts too short to hold one embedding vector are left out of the average;
/// `None` when no shift qualifies.
pub fn rcmde_distribution(
    u: &[f64],
    params: &DispersionParams,
    mapping: &MappingParams,
    tau: usize,
) -> Result<Option<PatternDistribution>> {
    let mut histograms = Vec::with_capacity(tau);
    for k in 1..=tau {
        let Some(cg) = undefined_if_short(coarse_grain_shifted(u, tau, k))? else {
            continue;
        };
        if let Some(h) = undefined_if_short(histogram_of(&cg.series, params, mapping))? {
            histograms.push(h);
        }
    }
    Ok(PatternDistribution::mean_of(&histograms))
}

/// Multiscale sample entropy with a fixed tolerance.
pub fn mse(u: &[f64], params: &SampEnParams, tau_max: usize) -> Result<ScaleProfile> {
    check_scales(u, tau_max)?;
    let values = (1..=tau_max)
        .map(|tau| mse_scale(u, params, tau))
        .collect::<Result<_>>()?;
    Ok(ScaleProfile {
        method: Method::Mse,
        values,
        params: ProfileParams::Sample { params: *params },
    })
}

pub fn mse_scale(u: &[f64], params: &SampEnParams, tau: usize) -> Result<Option<f64>> {
    let Some(cg) = undefined_if_short(coarse_grain(u, tau))? else {
        return Ok(None);
    };
    Ok(undefined_if_short(match_counts(&cg.series, params))?.and_then(|c| c.entropy()))
}

/// Refined composite MSE: match counts are summed over the `tau` shifted
/// coarse-grainings before taking the log ratio.
pub fn rcmse(u: &[f64], params: &SampEnParams, tau_max: usize) -> Result<ScaleProfile> {
    check_scales(u, tau_max)?;
    let values = (1..=tau_max)
        .map(|tau| Ok(rcmse_counts(u, params, tau)?.entropy()))
        .collect::<Result<_>>()?;
    Ok(ScaleProfile {
        method: Method::Rcmse,
        values,
        params: ProfileParams::Sample { params: *params },
    })
}

/// Summed match counts over all shifts at scale `tau`; shifts too short for
/// two templates contribute nothing.
pub fn rcmse_counts(u: &[f64], params: &SampEnParams, tau: usize) -> Result<MatchCounts> {
    let mut total = MatchCounts::default();
    for k in 1..=tau {
        let Some(cg) = undefined_if_short(coarse_grain_shifted(u, tau, k))? else {
            continue;
        };
        if let Some(c) = undefined_if_short(match_counts(&cg.series, params))? {
            total = total + c;
        }
    }
    Ok(total)
}
