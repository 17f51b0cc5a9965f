//! Two-sample t-tests and Benjamini-Hochberg adjustment.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TTestVariant {
    /// Student's test with pooled variance, `df = na + nb - 2`.
    #[default]
    Pooled,
    /// Unequal variances with Welch-Satterthwaite degrees of freedom.
    Welch,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TTest {
    pub t: f64,
    pub df: f64,
    /// Two-sided p-value.
    pub p: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Significance {
    None,
    /// Adjusted p in [0.01, 0.05).
    Significant,
    /// Adjusted p below 0.01.
    VerySignificant,
}

impl Significance {
    pub fn from_adjusted(p: f64) -> Self {
        if p < 0.01 {
            Significance::VerySignificant
        } else if p < 0.05 {
            Significance::Significant
        } else {
            Significance::None
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Significance::None => "none",
            Significance::Significant => "significant",
            Significance::VerySignificant => "very_significant",
        }
    }
}

impl fmt::Display for Significance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StatResult {
    pub tau: usize,
    pub t: f64,
    pub df: f64,
    pub p: f64,
    pub adjusted_p: f64,
    pub significance: Significance,
}

fn mean_var(x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let m = x.iter().sum::<f64>() / n;
    let ss: f64 = x.iter().map(|v| (v - m) * (v - m)).sum();
    (m, ss / (n - 1.0))
}

/// Two-sample, two-sided t-test of `a` against `b`.
pub fn ttest2(a: &[f64], b: &[f64], variant: TTestVariant) -> Result<TTest> {
    for g in [a, b] {
        if g.len() < 2 {
            return Err(Error::TooFewPoints {
                required: 2,
                got: g.len(),
            });
        }
    }
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (ma, va) = mean_var(a);
    let (mb, vb) = mean_var(b);
    let (se, df) = match variant {
        TTestVariant::Pooled => {
            let df = na + nb - 2.0;
            let pooled = ((na - 1.0) * va + (nb - 1.0) * vb) / df;
            (libm::sqrt(pooled * (1.0 / na + 1.0 / nb)), df)
        }
        TTestVariant::Welch => {
            let (qa, qb) = (va / na, vb / nb);
            let df = (qa + qb) * (qa + qb) / (qa * qa / (na - 1.0) + qb * qb / (nb - 1.0));
            (libm::sqrt(qa + qb), df)
        }
    };
    let diff = ma - mb;
    if se == 0.0 {
        if diff == 0.0 {
            return Err(Error::DegenerateVariance);
        }
        let df = if df.is_finite() { df } else { na + nb - 2.0 };
        return Ok(TTest {
            t: if diff > 0.0 {
                f64::INFINITY
            } else {
                f64::NEG_INFINITY
            },
            df,
            p: 0.0,
        });
    }
    let t = diff / se;
    Ok(TTest {
        t,
        df,
        p: student_t_two_sided(t, df),
    })
}

/// `P(|T| >= |t|)` for Student's t with `df` degrees of freedom.
pub fn student_t_two_sided(t: f64, df: f64) -> f64 {
    if t.is_infinite() {
        return 0.0;
    }
    let x = df / (df + t * t);
    regularized_incomplete_beta(x, df / 2.0, 0.5).clamp(0.0, 1.0)
}

/// Regularized incomplete beta `I_x(a, b)` by Lentz's continued fraction.
pub fn regularized_incomplete_beta(x: f64, a: f64, b: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let ln_beta = libm::lgamma(a) + libm::lgamma(b) - libm::lgamma(a + b);
    let front = libm::exp(a * libm::log(x) + b * libm::log1p(-x) - ln_beta);
    if x < (a + 1.0) / (a + b + 2.0) {
        front * beta_continued_fraction(x, a, b) / a
    } else {
        1.0 - front * beta_continued_fraction(1.0 - x, b, a) / b
    }
}

fn beta_continued_fraction(x: f64, a: f64, b: f64) -> f64 {
    const TINY: f64 = 1e-300;
    const EPS: f64 = 1e-16;
    let (qab, qap, qam) = (a + b, a + 1.0, a - 1.0);
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=1000 {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

/// Benjamini-Hochberg step-up adjusted p-values, in input order.
pub fn fdr_bh(p_values: &[f64]) -> Result<Vec<f64>> {
    if p_values.iter().any(|p| !(0.0..=1.0).contains(p)) {
        return Err(Error::InvalidParameter("p-values must lie in [0, 1]"));
    }
    let m = p_values.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| p_values[i].total_cmp(&p_values[j]));
    let mut adjusted = vec![0.0; m];
    let mut running = 1.0f64;
    for (rank, &i) in order.iter().enumerate().rev() {
        // m / rank >= 1 survives rounding, so candidate >= p
        let candidate = (p_values[i] * (m as f64 / (rank + 1) as f64)).min(1.0);
        running = running.min(candidate);
        adjusted[i] = running;
    }
    Ok(adjusted)
}

/// Per-scale comparison of two groups; one adjustment family across scales.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaleComparison {
    pub results: Vec<StatResult>,
    /// Scales where some subject's value is undefined.
    pub excluded_undefined: Vec<usize>,
    /// Scales where both groups are constant and equal.
    pub excluded_degenerate: Vec<usize>,
}

/// Tests every scale column of two subject-by-scale matrices.
pub fn compare_scales(
    group_a: &[Vec<Option<f64>>],
    group_b: &[Vec<Option<f64>>],
    variant: TTestVariant,
) -> Result<ScaleComparison> {
    let cols = group_a.first().map_or(0, Vec::len);
    for row in group_a.iter().chain(group_b) {
        if row.len() != cols {
            return Err(Error::ShapeMismatch {
                expected: cols,
                found: row.len(),
            });
        }
    }
    for g in [group_a, group_b] {
        if g.len() < 2 {
            return Err(Error::TooFewPoints {
                required: 2,
                got: g.len(),
            });
        }
    }

    let mut tested: Vec<(usize, TTest)> = Vec::new();
    let mut excluded_undefined = Vec::new();
    let mut excluded_degenerate = Vec::new();
    for col in 0..cols {
        let tau = col + 1;
        let a: Option<Vec<f64>> = group_a.iter().map(|r| r[col]).collect();
        let b: Option<Vec<f64>> = group_b.iter().map(|r| r[col]).collect();
        let (Some(a), Some(b)) = (a, b) else {
            excluded_undefined.push(tau);
            continue;
        };
        match ttest2(&a, &b, variant) {
            Ok(t) => tested.push((tau, t)),
            Err(Error::DegenerateVariance) => excluded_degenerate.push(tau),
            Err(e) => return Err(e),
        }
    }

    let raw: Vec<f64> = tested.iter().map(|(_, t)| t.p).collect();
    let adjusted = fdr_bh(&raw)?;
    let results = tested
        .into_iter()
        .zip(adjusted)
        .map(|((tau, t), adjusted_p)| StatResult {
            tau,
            t: t.t,
            df: t.df,
            p: t.p,
            adjusted_p,
            significance: Significance::from_adjusted(adjusted_p),
        })
        .collect();
    Ok(ScaleComparison {
        results,
        excluded_undefined,
        excluded_degenerate,
    })
}
