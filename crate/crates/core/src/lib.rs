//! Dispersion entropy, sample entropy and their multiscale variants.
//!
//! The crate is `no_std` (it needs `alloc`) and has no IO. Everything here is a
//! pure function of its inputs, so callers are free to evaluate scales, windows
//! or realizations concurrently.
//!
//! The single-scale estimators live in [`dispersion`] and [`sample`]; the
//! multiscale pipelines (MDE, RCMDE, MSE, RCMSE) in [`multiscale`]; windowed
//! analysis and group statistics in [`analysis`].

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod coarse;
pub mod dispersion;
mod error;
pub mod multiscale;
pub mod ncdf;
pub mod sample;
mod signal;

pub use coarse::{coarse_grain, coarse_grain_shifted, CoarseGrained};
pub use dispersion::{
    classify, disen, dispersion_histogram, DispersionParams, ParamWarning, PatternDistribution,
    PatternHistogram,
};
pub use error::{Error, Result};
pub use multiscale::{mde, mse, rcmde, rcmse, Method, MethodConfig, ProfileParams, ScaleProfile};
pub use ncdf::{map_ncdf, normal_cdf, MappingParams};
pub use sample::{sampen, MatchCounts, SampEnParams};
pub use signal::{mean, population_sd, Signal};
