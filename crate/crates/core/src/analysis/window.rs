use alloc::vec::Vec;

use crate::{Error, Result, ScaleProfile};

/// Window length in samples and fractional overlap between neighbours.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowSpec {
    window_len: usize,
    overlap: f64,
    step: usize,
}

impl WindowSpec {
    /// The hop between windows is `round(window_len * (1 - overlap))`.
    pub fn new(window_len: usize, overlap: f64) -> Result<Self> {
        if window_len < 2 {
            return Err(Error::InvalidParameter("window length must be >= 2"));
        }
        if !(0.0..1.0).contains(&overlap) {
            return Err(Error::InvalidParameter("overlap must be in [0, 1)"));
        }
        let step = libm::round(window_len as f64 * (1.0 - overlap)) as usize;
        if step < 1 {
            return Err(Error::InvalidParameter("overlap leaves a zero-length step"));
        }
        Ok(Self {
            window_len,
            overlap,
            step,
        })
    }

    pub fn window_len(&self) -> usize {
        self.window_len
    }

    pub fn overlap(&self) -> f64 {
        self.overlap
    }

    pub fn step(&self) -> usize {
        self.step
    }

    /// Start offsets of every full window in a series of length `len`.
    pub fn starts(&self, len: usize) -> Result<Vec<usize>> {
        if len < self.window_len {
            return Err(Error::TooShort {
                len,
                required: self.window_len,
            });
        }
        let count = (len - self.window_len) / self.step + 1;
        Ok((0..count).map(|i| i * self.step).collect())
    }
}

/// All full windows of `u`, each paired with its start offset.
pub fn moving_window<'a>(u: &'a [f64], spec: &WindowSpec) -> Result<Vec<(usize, &'a [f64])>> {
    Ok(spec
        .starts(u.len())?
        .into_iter()
        .map(|s| (s, &u[s..s + spec.window_len]))
        .collect())
}

/// One scale profile per window.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowProfile {
    pub starts: Vec<usize>,
    pub profiles: Vec<ScaleProfile>,
}

/// Evaluates `f` on every window in order. Each window is treated as a signal
/// of its own, so mapping parameters and tolerances come from the window.
pub fn window_profile<F>(u: &[f64], spec: &WindowSpec, mut f: F) -> Result<WindowProfile>
where
    F: FnMut(&[f64]) -> Result<ScaleProfile>,
{
    let windows = moving_window(u, spec)?;
    let mut starts = Vec::with_capacity(windows.len());
    let mut profiles = Vec::with_capacity(windows.len());
    for (start, w) in windows {
        starts.push(start);
        profiles.push(f(w)?);
    }
    Ok(WindowProfile { starts, profiles })
}
