//! Coarse-graining: means of consecutive non-overlapping segments.

use alloc::vec::Vec;

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct CoarseGrained {
    pub series: Vec<f64>,
    pub tau: usize,
    /// 1-based offset of the first segment.
    pub shift: usize,
}

/// Segment means over `u[j*tau .. (j+1)*tau]` for every complete segment.
pub fn coarse_grain(u: &[f64], tau: usize) -> Result<CoarseGrained> {
    coarse_grain_shifted(u, tau, 1)
}

/// Segment means starting at the 1-based offset `k` (`1 <= k <= tau`).
/// A trailing partial segment is dropped.
pub fn coarse_grain_shifted(u: &[f64], tau: usize, k: usize) -> Result<CoarseGrained> {
    if tau < 1 {
        return Err(Error::InvalidParameter("scale factor tau must be >= 1"));
    }
    if k < 1 || k > tau {
        return Err(Error::InvalidParameter("shift k must be in 1..=tau"));
    }
    let required = k + tau - 1;
    if u.len() < required {
        return Err(Error::TooShort {
            len: u.len(),
            required,
        });
    }
    let scale = tau as f64;
    let series = u[k - 1..]
        .chunks_exact(tau)
        .map(|seg| seg.iter().sum::<f64>() / scale)
        .collect();
    Ok(CoarseGrained {
        series,
        tau,
        shift: k,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_scale() {
        let u = [0.3, -1.7, 2.25, 1e-9];
        assert_eq!(coarse_grain(&u, 1).unwrap().series, u);
    }

    #[test]
    fn segment_means() {
        assert_eq!(
            coarse_grain(&[1.0, 3.0, 2.0, 4.0], 2).unwrap().series,
            [2.0, 3.0]
        );
        let u: Vec<f64> = (0..10).map(f64::from).collect();
        assert_eq!(coarse_grain(&u, 3).unwrap().series.len(), 3);
    }

    #[test]
    fn shifted_windows() {
        let u = [1.0, 2.0, 3.0, 4.0, 5.0];
        let cg = coarse_grain_shifted(&u, 2, 2).unwrap();
        assert_eq!(cg.series, [2.5, 4.5]);
        assert_eq!(cg.shift, 2);
        assert_eq!(
            coarse_grain_shifted(&u, 2, 1).unwrap(),
            coarse_grain(&u, 2).unwrap()
        );
    }

    #[test]
    fn every_shift_in_range_exists() {
        let u: Vec<f64> = (0..23).map(|i| f64::from(i * i % 7)).collect();
        for tau in 1..=6 {
            let shifts: Vec<_> = (1..=tau)
                .map(|k| coarse_grain_shifted(&u, tau, k).unwrap())
                .collect();
            assert_eq!(shifts.len(), tau);
            for (k, cg) in shifts.iter().enumerate() {
                assert_eq!(cg.series.len(), (u.len() - k) / tau);
            }
            assert!(coarse_grain_shifted(&u, tau, tau + 1).is_err());
            assert!(coarse_grain_shifted(&u, tau, 0).is_err());
        }
    }

    #[test]
    fn too_short() {
        assert_eq!(
            coarse_grain(&[1.0, 2.0], 3),
            Err(Error::TooShort {
                len: 2,
                required: 3
            })
        );
        assert_eq!(
            coarse_grain_shifted(&[1.0, 2.0, 3.0], 3, 2),
            Err(Error::TooShort {
                len: 3,
                required: 4
            })
        );
        assert!(coarse_grain(&[1.0], 0).is_err());
    }
}
