//! Wall-time benchmark of the four multiscale methods on seeded WGN.
//!
//! Timed regions run strictly one after another on the calling thread. Each
//! record holds the median over `repetitions` timed runs, taken after
//! `warmup` untimed runs.

use std::fmt;
use std::hint::black_box;
use std::str::FromStr;
use std::time::Instant;

use dispent_core::analysis::least_squares_slope;
use dispent_core::multiscale::{run, MethodConfig};
use dispent_core::Method;
use serde::{Deserialize, Serialize};

use crate::generate::gen_wgn;
use crate::{Error, Result};

/// Lengths used for the runtime table.
pub const TABLE_LENGTHS: [usize; 7] = [100, 300, 1_000, 3_000, 10_000, 30_000, 100_000];

/// A method with its embedding dimension, written `method:m` (e.g. `mse:2`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BenchMethod {
    pub method: Method,
    pub m: usize,
}

impl fmt::Display for BenchMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.method, self.m)
    }
}

impl FromStr for BenchMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, m) = s.split_once(':').unwrap_or((s, "2"));
        let method = name
            .parse()
            .map_err(|_| Error::Usage(format!("unknown method `{name}`")))?;
        let m = m
            .parse()
            .map_err(|_| Error::Usage(format!("bad embedding dimension in `{s}`")))?;
        Ok(Self { method, m })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchPlan {
    lengths: Vec<usize>,
    methods: Vec<BenchMethod>,
    pub tau_max: usize,
    pub repetitions: usize,
    pub warmup: usize,
    pub c: usize,
    pub d: usize,
    pub r_factor: f64,
}

impl BenchPlan {
    /// Lengths must be strictly increasing; at least one repetition.
    pub fn new(lengths: Vec<usize>, methods: Vec<BenchMethod>, repetitions: usize) -> Result<Self> {
        if lengths.is_empty() || methods.is_empty() {
            return Err(Error::Usage("benchmark needs lengths and methods".into()));
        }
        if lengths.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Usage(
                "benchmark lengths must be strictly increasing".into(),
            ));
        }
        if repetitions < 1 {
            return Err(Error::Usage("repetitions must be >= 1".into()));
        }
        let defaults = MethodConfig::default();
        Ok(Self {
            lengths,
            methods,
            tau_max: 20,
            repetitions,
            warmup: 1,
            c: defaults.c,
            d: defaults.d,
            r_factor: defaults.r_factor,
        })
    }

    pub fn lengths(&self) -> &[usize] {
        &self.lengths
    }

    pub fn methods(&self) -> &[BenchMethod] {
        &self.methods
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    #[serde(with = "method_name")]
    pub method: Method,
    pub m: usize,
    pub n_samples: usize,
    pub tau_max: usize,
    pub wall_time_s: f64,
    pub undefined_scales: usize,
    pub seed: u64,
}

mod method_name {
    use dispent_core::Method;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &Method, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(m.as_str())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Method, D::Error> {
        let name = String::deserialize(d)?;
        name.parse()
            .map_err(|_| de::Error::custom(format!("unknown method `{name}`")))
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of the WGN input for one (length, repetition) cell.
pub fn input_seed(seed: u64, length: usize, repetition: usize) -> u64 {
    splitmix64(splitmix64(seed ^ splitmix64(length as u64)) ^ repetition as u64)
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Runs every (method, length) cell of the plan.
pub fn run_bench(plan: &BenchPlan, seed: u64) -> Result<Vec<BenchRecord>> {
    let mut records = Vec::new();
    for bm in &plan.methods {
        let config = MethodConfig {
            m: bm.m,
            c: plan.c,
            d: plan.d,
            r_factor: plan.r_factor,
        };
        for &n in &plan.lengths {
            let inputs = (0..plan.repetitions)
                .map(|rep| gen_wgn(n, input_seed(seed, n, rep)))
                .collect::<Result<Vec<_>>>()?;
            for _ in 0..plan.warmup {
                black_box(run(bm.method, &inputs[0], &config, plan.tau_max)?);
            }
            let mut times = Vec::with_capacity(plan.repetitions);
            let mut undefined = 0;
            for input in &inputs {
                let start = Instant::now();
                let profile = run(bm.method, black_box(input), &config, plan.tau_max)?;
                times.push(start.elapsed().as_secs_f64());
                undefined = undefined.max(black_box(profile).undefined_count());
            }
            records.push(BenchRecord {
                method: bm.method,
                m: bm.m,
                n_samples: n,
                tau_max: plan.tau_max,
                wall_time_s: median(times),
                undefined_scales: undefined,
                seed,
            });
        }
    }
    Ok(records)
}

/// Least-squares slope of `ln(wall time)` against `ln(N)` for one method and
/// embedding dimension.
pub fn scaling_exponent(records: &[BenchRecord], method: Method, m: usize) -> Result<f64> {
    let pts: Vec<(f64, f64)> = records
        .iter()
        .filter(|r| r.method == method && r.m == m && r.wall_time_s > 0.0)
        .map(|r| ((r.n_samples as f64).ln(), r.wall_time_s.ln()))
        .collect();
    if pts.len() < 3 {
        return Err(dispent_core::Error::TooFewPoints {
            required: 3,
            got: pts.len(),
        }
        .into());
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) = pts.into_iter().unzip();
    Ok(least_squares_slope(&xs, &ys)?)
}

pub fn write_csv<W: std::io::Write>(out: W, records: &[BenchRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Best-effort description of the machine for the JSON report.
pub fn environment() -> serde_json::Value {
    let cpu = std::fs::read_to_string("/proc/cpuinfo")
        .ok()
        .and_then(|s| {
            s.lines()
                .find(|l| l.starts_with("model name"))
                .and_then(|l| l.split_once(':'))
                .map(|(_, v)| v.trim().to_string())
        })
        .unwrap_or_else(|| std::env::consts::ARCH.to_string());
    serde_json::json!({
        "cpu": cpu,
        "os": std::env::consts::OS,
        "arch": std::env::consts::ARCH,
        "debug_assertions": cfg!(debug_assertions),
        "crate_version": env!("CARGO_PKG_VERSION"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic(method: Method, f: impl Fn(f64) -> f64) -> Vec<BenchRecord> {
        [1_000usize, 3_000, 10_000, 30_000]
            .iter()
            .map(|&n| BenchRecord {
                method,
                m: 2,
                n_samples: n,
                tau_max: 20,
                wall_time_s: f(n as f64),
                undefined_scales: 0,
                seed: 0,
            })
            .collect()
    }

    #[test]
    fn exponent_of_linear_and_quadratic_costs() {
        let lin = synthetic(Method::Mde, |n| 3e-7 * n);
        assert!((scaling_exponent(&lin, Method::Mde, 2).unwrap() - 1.0).abs() < 1e-9);
        let quad = synthetic(Method::Mse, |n| 2e-9 * n * n);
        assert!((scaling_exponent(&quad, Method::Mse, 2).unwrap() - 2.0).abs() < 1e-9);
        assert!(scaling_exponent(&quad, Method::Mde, 2).is_err());
        assert!(scaling_exponent(&quad[..2], Method::Mse, 2).is_err());
    }

    #[test]
    fn plan_validation() {
        let m = vec!["mde:2".parse().unwrap()];
        assert!(BenchPlan::new(vec![300, 100], m.clone(), 5).is_err());
        assert!(BenchPlan::new(vec![100, 100], m.clone(), 5).is_err());
        assert!(BenchPlan::new(vec![100], m.clone(), 0).is_err());
        assert!(BenchPlan::new(vec![], m, 1).is_err());
    }

    #[test]
    fn method_spec_parsing() {
        let bm: BenchMethod = "rcmse:3".parse().unwrap();
        assert_eq!((bm.method, bm.m), (Method::Rcmse, 3));
        assert_eq!("mde".parse::<BenchMethod>().unwrap().m, 2);
        assert!("foo:2".parse::<BenchMethod>().is_err());
        assert!("mse:x".parse::<BenchMethod>().is_err());
        assert_eq!(bm.to_string(), "rcmse:3");
    }

    #[test]
    fn csv_header_and_roundtrip() {
        let recs = synthetic(Method::Rcmde, |n| n * 1e-6);
        let mut buf = Vec::new();
        write_csv(&mut buf, &recs).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with(
            "method,m,n_samples,tau_max,wall_time_s,undefined_scales,seed\nrcmde,2,1000,"
        ));
        let back: Vec<BenchRecord> = csv::Reader::from_reader(text.as_bytes())
            .deserialize()
            .collect::<Result<_, _>>()
            .unwrap();
        assert_eq!(back, recs);
    }

    #[test]
    fn medians() {
        assert_eq!(median(vec![3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(vec![4.0, 1.0, 2.0, 3.0]), 2.5);
    }

    #[test]
    fn input_seeds_differ_per_cell() {
        let a = input_seed(7, 100, 0);
        assert_ne!(a, input_seed(7, 100, 1));
        assert_ne!(a, input_seed(7, 300, 0));
        assert_ne!(a, input_seed(8, 100, 0));
        assert_eq!(a, input_seed(7, 100, 0));
    }
}
