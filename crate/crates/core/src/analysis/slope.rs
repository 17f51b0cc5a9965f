use alloc::vec::Vec;

use crate::{Error, Result, ScaleProfile};

/// Ordinary least-squares slope of `ys` against `xs`.
pub fn least_squares_slope(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(Error::ShapeMismatch {
            expected: xs.len(),
            found: ys.len(),
        });
    }
    if xs.len() < 2 {
        return Err(Error::TooFewPoints {
            required: 2,
            got: xs.len(),
        });
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    if sxx == 0.0 {
        return Err(Error::InvalidParameter("abscissae are all equal"));
    }
    Ok(sxy / sxx)
}

/// Least-squares slope of entropy against scale over `tau_lo..=tau_hi`.
pub fn slope_fit(profile: &ScaleProfile, tau_lo: usize, tau_hi: usize) -> Result<f64> {
    if tau_lo < 1 || tau_lo >= tau_hi {
        return Err(Error::InvalidParameter("need 1 <= tau_lo < tau_hi"));
    }
    if tau_hi > profile.tau_max() {
        return Err(Error::InvalidParameter(
            "tau_hi exceeds the profile's tau_max",
        ));
    }
    let slice = &profile.values[tau_lo - 1..tau_hi];
    let undefined = slice.iter().filter(|v| v.is_none()).count();
    if undefined > 0 {
        return Err(Error::UndefinedEntries { count: undefined });
    }
    let xs: Vec<f64> = (tau_lo..=tau_hi).map(|t| t as f64).collect();
    let ys: Vec<f64> = slice.iter().flatten().copied().collect();
    least_squares_slope(&xs, &ys)
}

/// Ranks with ties given their average rank, 1-based.
fn ranks(v: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
    let mut out = alloc::vec![0.0; v.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            out[k] = avg;
        }
        i = j + 1;
    }
    out
}

/// Spearman rank correlation (Pearson correlation of average ranks).
pub fn spearman(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(Error::ShapeMismatch {
            expected: xs.len(),
            found: ys.len(),
        });
    }
    if xs.len() < 2 {
        return Err(Error::TooFewPoints {
            required: 2,
            got: xs.len(),
        });
    }
    let (rx, ry) = (ranks(xs), ranks(ys));
    let n = rx.len() as f64;
    let (mx, my) = (rx.iter().sum::<f64>() / n, ry.iter().sum::<f64>() / n);
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in rx.iter().zip(&ry) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::InvalidParameter(
            "constant input has no rank correlation",
        ));
    }
    Ok(sxy / libm::sqrt(sxx * syy))
}
