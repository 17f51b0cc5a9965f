use alloc::vec::Vec;

use crate::{mean, population_sd, Error, Result, ScaleProfile};

/// Coefficient of variation, population SD over mean.
pub fn cv(values: &[f64]) -> Result<f64> {
    if values.len() < 2 {
        return Err(Error::TooFewPoints {
            required: 2,
            got: values.len(),
        });
    }
    let mu = mean(values);
    if mu == 0.0 {
        return Err(Error::ZeroMean);
    }
    Ok(population_sd(values) / mu)
}

/// Unwraps a column of per-scale values, failing if any is undefined.
pub fn defined_values(values: &[Option<f64>]) -> Result<Vec<f64>> {
    let count = values.iter().filter(|v| v.is_none()).count();
    if count > 0 {
        return Err(Error::UndefinedEntries { count });
    }
    Ok(values.iter().flatten().copied().collect())
}

/// Mean and SD of one scale across realizations, over defined entries only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaleSummary {
    pub tau: usize,
    pub mean: Option<f64>,
    pub sd: Option<f64>,
    pub defined: usize,
    pub skipped: usize,
}

/// Per-scale mean and SD across `profiles`, which must share `tau_max`.
pub fn summarize_scales(profiles: &[ScaleProfile]) -> Result<Vec<ScaleSummary>> {
    let Some(first) = profiles.first() else {
        return Ok(Vec::new());
    };
    let tau_max = first.tau_max();
    if let Some(bad) = profiles.iter().find(|p| p.tau_max() != tau_max) {
        return Err(Error::ShapeMismatch {
            expected: tau_max,
            found: bad.tau_max(),
        });
    }
    Ok((1..=tau_max)
        .map(|tau| {
            let vals: Vec<f64> = profiles.iter().filter_map(|p| p.at(tau)).collect();
            let defined = vals.len();
            ScaleSummary {
                tau,
                mean: (defined > 0).then(|| mean(&vals)),
                sd: (defined > 0).then(|| population_sd(&vals)),
                defined,
                skipped: profiles.len() - defined,
            }
        })
        .collect())
}
