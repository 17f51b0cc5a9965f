//! Sample entropy.
//!
//! Templates are the `N - m` vectors starting at `0..N-m`, for both lengths
//! `m` and `m + 1`. Two templates match when their Chebyshev distance is at
//! most `r`; a template never matches itself.

use crate::{population_sd, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampEnParams {
    m: usize,
    r: f64,
}

impl SampEnParams {
    pub fn new(m: usize, r: f64) -> Result<Self> {
        if m < 1 {
            return Err(Error::InvalidParameter("template length m must be >= 1"));
        }
        if !(r.is_finite() && r >= 0.0) {
            return Err(Error::InvalidParameter(
                "tolerance r must be finite and >= 0",
            ));
        }
        Ok(Self { m, r })
    }

    /// Tolerance `r = factor * SD(x)` (population SD).
    ///
    /// The multiscale methods take `x` to be the original signal and reuse `r`
    /// at every scale.
    pub fn from_signal(x: &[f64], m: usize, factor: f64) -> Result<Self> {
        if x.is_empty() {
            return Err(Error::EmptySignal);
        }
        if !(factor.is_finite() && factor >= 0.0) {
            return Err(Error::InvalidParameter(
                "tolerance factor must be finite and >= 0",
            ));
        }
        Self::new(m, factor * population_sd(x))
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn r(&self) -> f64 {
        self.r
    }
}

/// Matching template pairs (unordered, self-matches excluded).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MatchCounts {
    /// Pairs matching over `m` points.
    pub b: u64,
    /// Pairs matching over `m + 1` points.
    pub a: u64,
}

impl MatchCounts {
    /// `-ln(A / B)`, or `None` when either count is zero.
    pub fn entropy(&self) -> Option<f64> {
        if self.a == 0 || self.b == 0 {
            return None;
        }
        let v = -libm::log(self.a as f64 / self.b as f64);
        // -ln(1) is -0.0
        Some(if v == 0.0 { 0.0 } else { v })
    }
}

impl core::ops::Add for MatchCounts {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        Self {
            b: self.b + rhs.b,
            a: self.a + rhs.a,
        }
    }
}

impl core::iter::Sum for MatchCounts {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::default(), |acc, c| acc + c)
    }
}

/// Counts matching template pairs; O(N^2).
pub fn match_counts(x: &[f64], params: &SampEnParams) -> Result<MatchCounts> {
    let m = params.m;
    let n = x.len();
    if n <= m + 1 {
        return Err(Error::TooShort {
            len: n,
            required: m + 2,
        });
    }
    let r = params.r;
    let templates = n - m;
    let mut counts = MatchCounts::default();
    for i in 0..templates - 1 {
        let head = &x[i..=i + m];
        for j in i + 1..templates {
            let other = &x[j..=j + m];
            if head[..m]
                .iter()
                .zip(&other[..m])
                .all(|(p, q)| (p - q).abs() <= r)
            {
                counts.b += 1;
                if (head[m] - other[m]).abs() <= r {
                    counts.a += 1;
                }
            }
        }
    }
    Ok(counts)
}

/// Sample entropy; `Ok(None)` when no template pairs match.
pub fn sampen(x: &[f64], params: &SampEnParams) -> Result<Option<f64>> {
    Ok(match_counts(x, params)?.entropy())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_signal_is_zero() {
        let p = SampEnParams::new(2, 0.0).unwrap();
        assert_eq!(sampen(&[4.0; 30], &p), Ok(Some(0.0)));
        let p = SampEnParams::new(2, 1.5).unwrap();
        assert_eq!(sampen(&[4.0; 30], &p), Ok(Some(0.0)));
    }

    #[test]
    fn no_matches_is_undefined() {
        let p = SampEnParams::new(2, 0.01).unwrap();
        let x = [0.0, 100.0, 0.0, 100.0, 3.0, -50.0];
        assert_eq!(sampen(&x, &p), Ok(None));
        let c = match_counts(&x, &p).unwrap();
        assert_eq!(c, MatchCounts { b: 1, a: 0 });
    }

    #[test]
    fn tie_at_tolerance_counts_as_match() {
        let p = SampEnParams::new(1, 1.0).unwrap();
        let c = match_counts(&[0.0, 1.0, 2.0], &p).unwrap();
        // templates (first two) 0 and 1 differ by exactly r; continuation 1 vs 2 too.
        assert_eq!(c, MatchCounts { b: 1, a: 1 });
    }

    #[test]
    fn too_short() {
        let p = SampEnParams::new(2, 0.2).unwrap();
        assert_eq!(
            sampen(&[1.0, 2.0, 3.0], &p),
            Err(Error::TooShort {
                len: 3,
                required: 4
            })
        );
    }

    #[test]
    fn param_validation() {
        assert!(SampEnParams::new(0, 0.1).is_err());
        assert!(SampEnParams::new(2, -0.1).is_err());
        assert!(SampEnParams::new(2, f64::NAN).is_err());
        let p = SampEnParams::from_signal(&[1.0, 3.0], 2, 0.15).unwrap();
        assert!((p.r() - 0.15).abs() < 1e-15);
    }

    #[test]
    fn counts_sum() {
        let total: MatchCounts = [MatchCounts { b: 3, a: 1 }, MatchCounts { b: 2, a: 0 }]
            .into_iter()
            .sum();
        assert_eq!(total, MatchCounts { b: 5, a: 1 });
        assert_eq!(MatchCounts { b: 5, a: 0 }.entropy(), None);
        assert_eq!(MatchCounts { b: 0, a: 0 }.entropy(), None);
    }
}
