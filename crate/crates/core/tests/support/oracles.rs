//! Brute-force reference implementations. These deliberately avoid the
//! library's code paths: patterns are compared as explicit vectors, series
//! are built from 1-based index formulas and the normal CDF comes from a
//! positive-term erf series.

#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn uniform(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.random::<f64>()).collect()
}

pub fn gaussian(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let u1: f64 = 1.0 - rng.random::<f64>();
            let u2: f64 = rng.random();
            (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
        })
        .collect()
}

pub fn mean_sd(x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mu = x.iter().sum::<f64>() / n;
    let var = x.iter().map(|v| (v - mu).powi(2)).sum::<f64>() / n;
    (mu, var.sqrt())
}

/// erf(x) = 2/sqrt(pi) e^{-x^2} sum_n 2^n x^{2n+1} / (1*3*...*(2n+1)), x >= 0.
/// Every term is positive, so there is no cancellation.
fn erf_series(x: f64) -> f64 {
    let mut term = x;
    let mut sum = x;
    let mut n = 0.0;
    while term > sum * 1e-18 {
        n += 1.0;
        term *= 2.0 * x * x / (2.0 * n + 1.0);
        sum += term;
    }
    2.0 / std::f64::consts::PI.sqrt() * (-x * x).exp() * sum
}

pub fn ncdf(x: f64, mu: f64, sigma: f64) -> f64 {
    let z = (x - mu) / sigma;
    let e = erf_series(z.abs() / std::f64::consts::SQRT_2);
    if z >= 0.0 {
        0.5 + 0.5 * e
    } else {
        0.5 - 0.5 * e
    }
}

/// `round(c*y + 0.5)` with halves rounded up equals `floor(c*y + 1)` for y >= 0.
pub fn classes(x: &[f64], mu: f64, sigma: f64, c: usize) -> Vec<u32> {
    x.iter()
        .map(|&v| {
            let z = (c as f64 * ncdf(v, mu, sigma) + 1.0).floor();
            z.clamp(1.0, c as f64) as u32
        })
        .collect()
}

/// Every one of the c^m patterns, enumerated as an odometer.
pub fn all_patterns(m: usize, c: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut digits = vec![1u32; m];
    loop {
        out.push(digits.clone());
        let mut i = m;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if (digits[i] as usize) < c {
                digits[i] += 1;
                break;
            }
            digits[i] = 1;
        }
    }
}

/// Pattern -> relative frequency, counting each pattern by a full scan.
pub fn pattern_probs(z: &[u32], m: usize, c: usize, d: usize) -> BTreeMap<Vec<u32>, f64> {
    let total = z.len() - (m - 1) * d;
    let mut probs = BTreeMap::new();
    for pattern in all_patterns(m, c) {
        let n = (0..total)
            .filter(|&i| (0..m).all(|k| z[i + k * d] == pattern[k]))
            .count();
        if n > 0 {
            probs.insert(pattern, n as f64 / total as f64);
        }
    }
    probs
}

pub fn shannon<'a>(probs: impl IntoIterator<Item = &'a f64>) -> f64 {
    -probs
        .into_iter()
        .filter(|p| **p > 0.0)
        .map(|p| p * p.ln())
        .sum::<f64>()
}

pub fn disen(x: &[f64], m: usize, c: usize, d: usize, mu: f64, sigma: f64) -> f64 {
    let z = classes(x, mu, sigma, c);
    shannon(pattern_probs(&z, m, c, d).values()) / (c as f64).powi(m as i32).ln()
}

/// x_{k,j} = (1/tau) * sum_{b = k + tau(j-1)}^{k + tau j - 1} u_b, 1-based.
pub fn shifted_series(u: &[f64], tau: usize, k: usize) -> Vec<f64> {
    let mut out = Vec::new();
    let mut j = 1;
    while k + tau * j - 1 <= u.len() {
        let lo = k + tau * (j - 1);
        let hi = k + tau * j - 1;
        let s: f64 = (lo..=hi).map(|b| u[b - 1]).sum();
        out.push(s / tau as f64);
        j += 1;
    }
    out
}

pub fn rcmde(u: &[f64], m: usize, c: usize, d: usize, tau: usize) -> f64 {
    let (mu, sigma) = mean_sd(u);
    let mut avg: BTreeMap<Vec<u32>, f64> = BTreeMap::new();
    let mut used = 0;
    for k in 1..=tau {
        let x = shifted_series(u, tau, k);
        if x.len() < (m - 1) * d + 1 {
            continue;
        }
        used += 1;
        let z = classes(&x, mu, sigma, c);
        for (pattern, p) in pattern_probs(&z, m, c, d) {
            *avg.entry(pattern).or_default() += p;
        }
    }
    let probs: Vec<f64> = avg.values().map(|p| p / used as f64).collect();
    shannon(&probs) / (c as f64).powi(m as i32).ln()
}

fn chebyshev(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(p, q)| (p - q).abs())
        .fold(0.0, f64::max)
}

/// (B, A): template pairs within r for lengths m and m+1, N-m templates each.
pub fn sampen_counts(x: &[f64], m: usize, r: f64) -> (u64, u64) {
    let n = x.len();
    let short: Vec<&[f64]> = (0..n - m).map(|i| &x[i..i + m]).collect();
    let long: Vec<&[f64]> = (0..n - m).map(|i| &x[i..i + m + 1]).collect();
    let (mut b, mut a) = (0, 0);
    for i in 0..n - m {
        for j in 0..n - m {
            if i == j {
                continue;
            }
            if chebyshev(short[i], short[j]) <= r {
                b += 1;
            }
            if chebyshev(long[i], long[j]) <= r {
                a += 1;
            }
        }
    }
    // ordered pairs were counted twice
    (b / 2, a / 2)
}

pub fn sampen(x: &[f64], m: usize, r: f64) -> Option<f64> {
    let (b, a) = sampen_counts(x, m, r);
    (a > 0 && b > 0).then(|| -(a as f64 / b as f64).ln())
}

/// Pooled two-sample t statistic and degrees of freedom from textbook formulas.
pub fn pooled_t(a: &[f64], b: &[f64]) -> (f64, f64) {
    let var = |x: &[f64]| {
        let m = x.iter().sum::<f64>() / x.len() as f64;
        (
            m,
            x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (x.len() - 1) as f64,
        )
    };
    let (ma, va) = var(a);
    let (mb, vb) = var(b);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let sp2 = ((na - 1.0) * va + (nb - 1.0) * vb) / (na + nb - 2.0);
    (
        (ma - mb) / (sp2 * (1.0 / na + 1.0 / nb)).sqrt(),
        na + nb - 2.0,
    )
}

/// Two-sided Student-t p-value through statrs' incomplete beta.
pub fn t_two_sided(t: f64, df: f64) -> f64 {
    statrs::function::beta::beta_reg(df / 2.0, 0.5, df / (df + t * t))
}

/// Two-sided p for even df from the finite series
/// P(|T| < t) = sin(th) * sum_{k=0}^{df/2-1} prod_{i<=k} (2i-1)/(2i) cos^{2k}(th).
pub fn t_two_sided_even_df(t: f64, df: u32) -> f64 {
    assert!(df.is_multiple_of(2));
    let th = (t.abs() / (df as f64).sqrt()).atan();
    let (s, c2) = (th.sin(), th.cos().powi(2));
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..df / 2 {
        term *= (2 * k - 1) as f64 / (2 * k) as f64 * c2;
        sum += term;
    }
    1.0 - s * sum
}

/// Benjamini-Hochberg by the definition: adj_i = min_{j: p_j >= p_i} min(1, p_j m / rank_j).
pub fn bh(p: &[f64]) -> Vec<f64> {
    let m = p.len();
    let mut sorted: Vec<f64> = p.to_vec();
    sorted.sort_by(f64::total_cmp);
    p.iter()
        .map(|&pi| {
            sorted
                .iter()
                .enumerate()
                .filter(|(_, &pj)| pj >= pi)
                .map(|(r, &pj)| (pj * m as f64 / (r + 1) as f64).min(1.0))
                .fold(1.0, f64::min)
        })
        .collect()
}
