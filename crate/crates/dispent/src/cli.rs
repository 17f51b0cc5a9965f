//! `dispent` subcommands.
//!
//! Every output records the parameters and seed needed to reproduce it: CSV
//! files carry `#` comment lines, JSON output a `params` object, and `profile`
//! and `window` also write `<out>.params.json` next to `--out`.

use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use dispent_core::analysis::{compare_scales, TTestVariant, WindowProfile, WindowSpec};
use dispent_core::multiscale::{run as run_method, MethodConfig};
use dispent_core::{
    disen, sampen, DispersionParams, MappingParams, Method, ProfileParams, SampEnParams,
    ScaleProfile, Signal,
};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::bench::{self, BenchMethod, BenchPlan, TABLE_LENGTHS};
use crate::generate::{generate, GenKind, GenSpec};
use crate::io::{self as fmt_io, json_value};
use crate::{Error, Result};

/// Environment variable capping the worker-thread count.
pub const THREADS_ENV: &str = "DISPENT_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "dispent",
    version,
    about = "Multiscale dispersion and sample entropy"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a seeded synthetic signal as CSV.
    Gen(GenArgs),
    /// Single-scale DisEn or SampEn of a signal.
    Entropy(EntropyArgs),
    /// Entropy at scales 1..=tau-max.
    Profile(ProfileArgs),
    /// Scale profile of every moving window.
    Window(WindowArgs),
    /// Per-scale two-sample t-tests with Benjamini-Hochberg adjustment.
    Stats(StatsArgs),
    /// Wall-time benchmark on seeded WGN.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SingleScale {
    Disen,
    Sampen,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MultiScale {
    Mde,
    Rcmde,
    Mse,
    Rcmse,
}

impl From<MultiScale> for Method {
    fn from(m: MultiScale) -> Self {
        match m {
            MultiScale::Mde => Method::Mde,
            MultiScale::Rcmde => Method::Rcmde,
            MultiScale::Mse => Method::Mse,
            MultiScale::Rcmse => Method::Rcmse,
        }
    }
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// wgn, pink, quasiperiodic or logistic
    pub kind: GenKind,
    /// Length of the noise kinds; the other kinds are always 15000 samples.
    #[arg(long, default_value_t = 20_000)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Attach a sample rate (adds a time column) to the noise kinds.
    #[arg(long)]
    pub sample_rate: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct EntropyParams {
    /// Embedding dimension (DisEn) or template length (SampEn).
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    /// Number of classes.
    #[arg(long, default_value_t = 6)]
    pub c: usize,
    /// Time delay.
    #[arg(long, default_value_t = 1)]
    pub d: usize,
    /// SampEn tolerance as a fraction of the signal's SD.
    #[arg(long, default_value_t = 0.15)]
    pub r_factor: f64,
}

impl EntropyParams {
    fn config(&self) -> MethodConfig {
        MethodConfig {
            m: self.m,
            c: self.c,
            d: self.d,
            r_factor: self.r_factor,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct EntropyArgs {
    /// Signal CSV, or `-` for standard input.
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = SingleScale::Disen)]
    pub method: SingleScale,
    #[command(flatten)]
    pub params: EntropyParams,
    /// Report DisEn in nats instead of normalized by ln(c^m).
    #[arg(long)]
    pub raw: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ProfileArgs {
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = MultiScale::Rcmde)]
    pub method: MultiScale,
    #[command(flatten)]
    pub params: EntropyParams,
    #[arg(long, default_value_t = 20)]
    pub tau_max: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct WindowArgs {
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = MultiScale::Rcmde)]
    pub method: MultiScale,
    #[command(flatten)]
    pub params: EntropyParams,
    #[arg(long, default_value_t = 20)]
    pub tau_max: usize,
    /// Window length in samples.
    #[arg(long)]
    pub window: usize,
    /// Fraction of each window shared with the next, in [0, 1).
    #[arg(long, default_value_t = 0.0)]
    pub overlap: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    /// Subjects-by-scales matrix of group A.
    pub group_a: PathBuf,
    pub group_b: PathBuf,
    /// Welch's unequal-variance test instead of the pooled test.
    #[arg(long)]
    pub welch: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_values_t = TABLE_LENGTHS)]
    pub lengths: Vec<usize>,
    /// Comma-separated `method:m` entries.
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "mse:2,rcmse:2,mde:2,rcmde:2"
    )]
    pub methods: Vec<BenchMethod>,
    #[arg(long, default_value_t = 20)]
    pub tau_max: usize,
    #[arg(long, default_value_t = 5)]
    pub repetitions: usize,
    #[arg(long, default_value_t = 1)]
    pub warmup: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Sizes the global rayon pool from `DISPENT_THREADS`, if set.
pub fn configure_threads() -> Result<()> {
    let Ok(v) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = v.trim().parse().ok().filter(|&n| n >= 1).ok_or_else(|| {
        Error::Usage(format!(
            "{THREADS_ENV} must be a positive integer, got `{v}`"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Usage(e.to_string()))
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Gen(a) => cmd_gen(&a),
        Command::Entropy(a) => cmd_entropy(&a),
        Command::Profile(a) => cmd_profile(&a),
        Command::Window(a) => cmd_window(&a),
        Command::Stats(a) => cmd_stats(&a),
        Command::Bench(a) => cmd_bench(&a),
    }
}

fn open_output(out: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn read_input(path: &Path) -> Result<Signal> {
    if path.as_os_str() == "-" {
        let mut buf = Vec::new();
        io::stdin().lock().read_to_end(&mut buf)?;
        fmt_io::read_signal(buf.as_slice())
    } else {
        fmt_io::read_signal(File::open(path)?)
    }
}

/// `<out>.params.json` next to an output file.
pub fn sidecar_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".params.json");
    PathBuf::from(s)
}

fn write_json(mut w: impl Write, v: &Value) -> Result<()> {
    serde_json::to_writer_pretty(&mut w, v)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

/// `key=value` comment lines for a CSV header.
fn comments(params: &Value) -> Vec<String> {
    let mut lines = vec![format!("dispent {}", env!("CARGO_PKG_VERSION"))];
    if let Value::Object(map) = params {
        lines.extend(map.iter().map(|(k, v)| match v {
            Value::String(s) => format!("{k}={s}"),
            other => format!("{k}={other}"),
        }));
    }
    lines
}

fn warn(msg: impl std::fmt::Display) {
    eprintln!("warning: {msg}");
}

pub fn cmd_gen(a: &GenArgs) -> Result<()> {
    let spec = GenSpec {
        kind: a.kind,
        length: a.n,
        sample_rate: a.sample_rate,
        seed: a.seed,
    };
    let signal = generate(&spec)?;
    let mut header = vec![
        format!("dispent {}", env!("CARGO_PKG_VERSION")),
        format!("gen kind={} seed={} n={}", a.kind, a.seed, signal.len()),
    ];
    if let Some(fs) = signal.sample_rate() {
        header.push(format!("sample_rate={fs}"));
    }
    let mut w = open_output(a.out.as_deref())?;
    fmt_io::write_signal(&mut w, &signal, &header)?;
    w.flush()?;
    Ok(())
}

fn input_name(p: &Path) -> String {
    p.display().to_string()
}

pub fn cmd_entropy(a: &EntropyArgs) -> Result<()> {
    let x = read_input(&a.input)?;
    let p = &a.params;
    let (name, value, params) = match a.method {
        SingleScale::Disen => {
            let dp = DispersionParams::new(p.m, p.c, p.d)?;
            let mapping = MappingParams::from_signal(&x)?;
            if let Some(w) = dp.check_length(x.len().saturating_sub(dp.span() - 1)) {
                warn(w);
            }
            let v = disen(&x, &dp, &mapping, !a.raw)?;
            let params = json!({
                "input": input_name(&a.input),
                "method": "disen",
                "m": p.m,
                "c": p.c,
                "d": p.d,
                "mu": mapping.mu(),
                "sigma": mapping.sigma(),
                "normalized": !a.raw,
                "n_samples": x.len(),
            });
            ("disen", Some(v), params)
        }
        SingleScale::Sampen => {
            let sp = SampEnParams::from_signal(&x, p.m, p.r_factor)?;
            let v = sampen(&x, &sp)?;
            if v.is_none() {
                warn("no matching templates; sample entropy is undefined");
            }
            let params = json!({
                "input": input_name(&a.input),
                "method": "sampen",
                "m": p.m,
                "r_factor": p.r_factor,
                "r": sp.r(),
                "n_samples": x.len(),
            });
            ("sampen", v, params)
        }
    };
    let mut w = open_output(a.output.out.as_deref())?;
    match a.output.format {
        Format::Csv => {
            for c in comments(&params) {
                writeln!(w, "# {c}")?;
            }
            writeln!(w, "method,value")?;
            writeln!(w, "{name},{}", fmt_io::fmt_value(value))?;
            w.flush()?;
        }
        Format::Json => write_json(w, &json!({ "params": params, "value": json_value(value) }))?,
    }
    Ok(())
}

/// Parameter record for a profile, including the values derived from the
/// input (mapping mean and SD, or tolerance `r`).
fn profile_params(
    profile: &ScaleProfile,
    config: &MethodConfig,
    tau_max: usize,
    input: &str,
) -> Value {
    let mut v = json!({
        "input": input,
        "method": profile.method.as_str(),
        "m": config.m,
        "tau_max": tau_max,
    });
    let map = v.as_object_mut().expect("object literal");
    match profile.params {
        ProfileParams::Dispersion { params, mapping } => {
            map.insert("c".into(), json!(params.c()));
            map.insert("d".into(), json!(params.d()));
            map.insert("mu".into(), json!(mapping.mu()));
            map.insert("sigma".into(), json!(mapping.sigma()));
        }
        ProfileParams::Sample { params } => {
            map.insert("r_factor".into(), json!(config.r_factor));
            map.insert("r".into(), json!(params.r()));
        }
    }
    v
}

/// Prints the advisory warnings for one profile of a series of length `len`.
fn profile_warnings(profile: &ScaleProfile, len: usize, label: &str) {
    if let ProfileParams::Dispersion { params, .. } = profile.params {
        let tau = profile.tau_max();
        let effective = (len / tau).saturating_sub(params.span() - 1);
        if let Some(w) = params.check_length(effective) {
            warn(format_args!("{label}scale {tau}: {w}"));
        }
    }
    let undefined: Vec<usize> = (1..=profile.tau_max())
        .filter(|&t| profile.at(t).is_none())
        .collect();
    if !undefined.is_empty() {
        warn(format_args!("{label}undefined at scales {undefined:?}"));
    }
}

pub fn cmd_profile(a: &ProfileArgs) -> Result<()> {
    let x = read_input(&a.input)?;
    let config = a.params.config();
    let profile = run_method(a.method.into(), &x, &config, a.tau_max)?;
    profile_warnings(&profile, x.len(), "");
    let params = profile_params(&profile, &config, a.tau_max, &input_name(&a.input));

    let w = open_output(a.output.out.as_deref())?;
    match a.output.format {
        Format::Csv => {
            let mut w = w;
            fmt_io::write_profile_csv(&mut w, &profile, &comments(&params))?;
            w.flush()?;
        }
        Format::Json => {
            let values: Vec<Value> = profile.values.iter().map(|v| json_value(*v)).collect();
            write_json(w, &json!({ "params": params, "values": values }))?;
        }
    }
    if let Some(out) = &a.output.out {
        write_json(File::create(sidecar_path(out))?, &params)?;
    }
    Ok(())
}

/// Profiles every window in parallel; results keep window order.
pub fn window_profiles(
    x: &[f64],
    spec: &WindowSpec,
    method: Method,
    config: &MethodConfig,
    tau_max: usize,
) -> Result<WindowProfile> {
    let windows = dispent_core::analysis::moving_window(x, spec)?;
    let profiles = windows
        .par_iter()
        .map(|(_, w)| run_method(method, w, config, tau_max))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(WindowProfile {
        starts: windows.iter().map(|(s, _)| *s).collect(),
        profiles,
    })
}

pub fn cmd_window(a: &WindowArgs) -> Result<()> {
    let x = read_input(&a.input)?;
    let config = a.params.config();
    let spec = WindowSpec::new(a.window, a.overlap)?;
    let result = window_profiles(&x, &spec, a.method.into(), &config, a.tau_max)?;
    if let Some(first) = result.profiles.first() {
        if let ProfileParams::Dispersion { params, .. } = first.params {
            let effective = (a.window / a.tau_max).saturating_sub(params.span() - 1);
            if let Some(w) = params.check_length(effective) {
                warn(format_args!("scale {}: {w}", a.tau_max));
            }
        }
    }
    let undefined: usize = result
        .profiles
        .iter()
        .map(ScaleProfile::undefined_count)
        .sum();
    if undefined > 0 {
        warn(format_args!("{undefined} undefined (window, scale) cells"));
    }

    let method: Method = a.method.into();
    let mut params = json!({
        "input": input_name(&a.input),
        "method": method.as_str(),
        "m": config.m,
        "tau_max": a.tau_max,
        "window": a.window,
        "overlap": a.overlap,
        "step": spec.step(),
        "windows": result.starts.len(),
        "parameters_per_window": true,
    });
    let map = params.as_object_mut().expect("object literal");
    if method.is_dispersion() {
        map.insert("c".into(), json!(config.c));
        map.insert("d".into(), json!(config.d));
    } else {
        map.insert("r_factor".into(), json!(config.r_factor));
    }

    let mut w = open_output(a.output.out.as_deref())?;
    match a.output.format {
        Format::Csv => {
            fmt_io::write_window_csv(&mut w, &result, &comments(&params))?;
            w.flush()?;
        }
        Format::Json => {
            let rows: Vec<Value> = result
                .starts
                .iter()
                .zip(&result.profiles)
                .enumerate()
                .map(|(i, (start, p))| {
                    let values: Vec<Value> = p.values.iter().map(|v| json_value(*v)).collect();
                    json!({ "window": i, "start": start, "values": values })
                })
                .collect();
            write_json(w, &json!({ "params": params, "windows": rows }))?;
        }
    }
    if let Some(out) = &a.output.out {
        write_json(File::create(sidecar_path(out))?, &params)?;
    }
    Ok(())
}

pub fn cmd_stats(a: &StatsArgs) -> Result<()> {
    let ga = fmt_io::read_matrix(File::open(&a.group_a)?)?;
    let gb = fmt_io::read_matrix(File::open(&a.group_b)?)?;
    let variant = if a.welch {
        TTestVariant::Welch
    } else {
        TTestVariant::Pooled
    };
    let cmp = compare_scales(&ga, &gb, variant)?;
    if !cmp.excluded_undefined.is_empty() {
        warn(format_args!(
            "scales with undefined values skipped: {:?}",
            cmp.excluded_undefined
        ));
    }
    if !cmp.excluded_degenerate.is_empty() {
        warn(format_args!(
            "zero-variance scales skipped: {:?}",
            cmp.excluded_degenerate
        ));
    }
    let params = json!({
        "group_a": input_name(&a.group_a),
        "group_b": input_name(&a.group_b),
        "n_a": ga.len(),
        "n_b": gb.len(),
        "test": if a.welch { "welch" } else { "pooled" },
        "adjustment": "benjamini-hochberg",
    });
    let mut w = open_output(a.output.out.as_deref())?;
    match a.output.format {
        Format::Csv => {
            fmt_io::write_stats_csv(&mut w, &cmp, &comments(&params))?;
            w.flush()?;
        }
        Format::Json => write_json(w, &fmt_io::stats_json(&cmp, params))?,
    }
    Ok(())
}

pub fn cmd_bench(a: &BenchArgs) -> Result<()> {
    let mut plan = BenchPlan::new(a.lengths.clone(), a.methods.clone(), a.repetitions)?;
    plan.tau_max = a.tau_max;
    plan.warmup = a.warmup;
    let records = bench::run_bench(&plan, a.seed)?;
    let methods: Vec<String> = plan.methods().iter().map(ToString::to_string).collect();
    let params = json!({
        "seed": a.seed,
        "lengths": plan.lengths(),
        "methods": methods,
        "tau_max": plan.tau_max,
        "repetitions": plan.repetitions,
        "warmup": plan.warmup,
        "c": plan.c,
        "d": plan.d,
        "r_factor": plan.r_factor,
        "input": "wgn",
    });
    let mut w = open_output(a.output.out.as_deref())?;
    match a.output.format {
        Format::Csv => {
            for c in comments(&params) {
                writeln!(w, "# {c}")?;
            }
            bench::write_csv(&mut w, &records)?;
        }
        Format::Json => {
            let exponents: Vec<Value> = plan
                .methods()
                .iter()
                .filter_map(|bm| {
                    bench::scaling_exponent(&records, bm.method, bm.m)
                        .ok()
                        .map(|e| json!({ "method": bm.to_string(), "exponent": e }))
                })
                .collect();
            write_json(
                w,
                &json!({
                    "params": params,
                    "environment": bench::environment(),
                    "records": records,
                    "scaling_exponents": exponents,
                }),
            )?;
        }
    }
    Ok(())
}
