//! CSV and JSON file formats.
//!
//! Every CSV this crate writes starts with `#` comment lines recording the
//! parameters needed to reproduce it; readers skip such lines. Undefined
//! entropy values are written as the literal `undefined`.

use std::io::{Read, Write};

use dispent_core::analysis::{ScaleComparison, WindowProfile};
use dispent_core::{ScaleProfile, Signal};

use crate::{Error, Result};

pub const UNDEFINED: &str = "undefined";

/// Formats a per-scale value; `{}` on f64 round-trips exactly.
pub fn fmt_value(v: Option<f64>) -> String {
    match v {
        Some(x) => x.to_string(),
        None => UNDEFINED.to_string(),
    }
}

pub fn json_value(v: Option<f64>) -> serde_json::Value {
    match v {
        Some(x) => serde_json::json!(x),
        None => serde_json::json!(UNDEFINED),
    }
}

fn parse_cell(cell: &str, line: u64) -> Result<f64> {
    let cell = cell.trim();
    if cell.is_empty() {
        return Err(Error::Parse {
            line,
            message: "missing value".into(),
        });
    }
    match cell.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        Ok(_) => Err(Error::Parse {
            line,
            message: format!("non-finite value `{cell}`"),
        }),
        Err(_) => Err(Error::Parse {
            line,
            message: format!("not a number: `{cell}`"),
        }),
    }
}

fn reader<R: Read>(input: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(input)
}

fn is_header(record: &csv::StringRecord) -> bool {
    record
        .iter()
        .any(|f| !f.is_empty() && f.parse::<f64>().is_err() && f != UNDEFINED)
}

/// Reads a signal from a single numeric column, or from a `t,value` pair
/// when a header names the columns. With a time column the sample rate is
/// taken from the first time step.
pub fn read_signal<R: Read>(input: R) -> Result<Signal> {
    let mut rdr = reader(input);
    let mut value_col = 0;
    let mut time_col = None;
    let mut width = 1;
    let mut samples = Vec::new();
    let mut times = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line());
        if i == 0 && is_header(&rec) {
            width = rec.len();
            let names: Vec<String> = rec.iter().map(|s| s.to_ascii_lowercase()).collect();
            value_col = match names.iter().position(|n| n == "value") {
                Some(c) => c,
                None if width == 1 => 0,
                None if width == 2 => 1,
                None => {
                    return Err(Error::Parse {
                        line,
                        message: "cannot tell which column holds the signal".into(),
                    })
                }
            };
            time_col = names
                .iter()
                .position(|n| n == "t" || n == "time")
                .filter(|&c| c != value_col);
            continue;
        }
        if rec.len() != width {
            return Err(Error::Parse {
                line,
                message: format!("expected {width} column(s), found {}", rec.len()),
            });
        }
        samples.push(parse_cell(&rec[value_col], line)?);
        if let Some(c) = time_col {
            times.push(parse_cell(&rec[c], line)?);
        }
    }
    if times.len() >= 2 && times[1] > times[0] {
        Ok(Signal::with_sample_rate(
            samples,
            1.0 / (times[1] - times[0]),
        )?)
    } else {
        Ok(Signal::new(samples)?)
    }
}

/// Writes one sample per line, with a `t,value` header when the signal has a
/// sample rate.
pub fn write_signal<W: Write>(mut out: W, signal: &Signal, comments: &[String]) -> Result<()> {
    for c in comments {
        writeln!(out, "# {c}")?;
    }
    match signal.sample_rate() {
        Some(fs) => {
            writeln!(out, "t,value")?;
            for (i, v) in signal.iter().enumerate() {
                writeln!(out, "{},{}", i as f64 / fs, v)?;
            }
        }
        None => {
            for v in signal.iter() {
                writeln!(out, "{v}")?;
            }
        }
    }
    Ok(())
}

pub fn write_profile_csv<W: Write>(
    mut out: W,
    profile: &ScaleProfile,
    comments: &[String],
) -> Result<()> {
    for c in comments {
        writeln!(out, "# {c}")?;
    }
    writeln!(out, "tau,value")?;
    for (i, v) in profile.values.iter().enumerate() {
        writeln!(out, "{},{}", i + 1, fmt_value(*v))?;
    }
    Ok(())
}

/// Reads a `tau,value` profile back into per-scale values.
pub fn read_profile_values<R: Read>(input: R) -> Result<Vec<Option<f64>>> {
    read_matrix(input)?
        .into_iter()
        .map(|row| {
            row.get(1).copied().ok_or_else(|| Error::Parse {
                line: 0,
                message: "profile rows need tau,value".into(),
            })
        })
        .collect()
}

/// Rows = windows, columns = scales.
pub fn write_window_csv<W: Write>(
    mut out: W,
    windows: &WindowProfile,
    comments: &[String],
) -> Result<()> {
    for c in comments {
        writeln!(out, "# {c}")?;
    }
    let tau_max = windows.profiles.first().map_or(0, |p| p.tau_max());
    let mut header = String::from("window,start");
    for tau in 1..=tau_max {
        header.push_str(&format!(",tau_{tau}"));
    }
    writeln!(out, "{header}")?;
    for (i, (start, p)) in windows.starts.iter().zip(&windows.profiles).enumerate() {
        let cells: Vec<String> = p.values.iter().map(|v| fmt_value(*v)).collect();
        writeln!(out, "{i},{start},{}", cells.join(","))?;
    }
    Ok(())
}

/// Reads a numeric matrix whose cells may be `undefined`. When a header row
/// is present and names columns `tau_*`, only those columns are kept, so the
/// output of `window` can be fed straight back in.
pub fn read_matrix<R: Read>(input: R) -> Result<Vec<Vec<Option<f64>>>> {
    let mut rdr = reader(input);
    let mut keep: Option<Vec<usize>> = None;
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line());
        if i == 0 && is_header(&rec) {
            let taus: Vec<usize> = rec
                .iter()
                .enumerate()
                .filter(|(_, n)| n.to_ascii_lowercase().starts_with("tau_"))
                .map(|(c, _)| c)
                .collect();
            if !taus.is_empty() {
                keep = Some(taus);
            }
            continue;
        }
        let cols: Vec<usize> = keep.clone().unwrap_or_else(|| (0..rec.len()).collect());
        let row = cols
            .iter()
            .map(|&c| {
                let cell = rec.get(c).ok_or_else(|| Error::Parse {
                    line,
                    message: format!("missing column {}", c + 1),
                })?;
                if cell == UNDEFINED {
                    Ok(None)
                } else {
                    parse_cell(cell, line).map(Some)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    Ok(rows)
}

pub fn write_stats_csv<W: Write>(
    mut out: W,
    cmp: &ScaleComparison,
    comments: &[String],
) -> Result<()> {
    for c in comments {
        writeln!(out, "# {c}")?;
    }
    if !cmp.excluded_undefined.is_empty() {
        writeln!(
            out,
            "# excluded (undefined values): {:?}",
            cmp.excluded_undefined
        )?;
    }
    if !cmp.excluded_degenerate.is_empty() {
        writeln!(
            out,
            "# excluded (zero variance): {:?}",
            cmp.excluded_degenerate
        )?;
    }
    writeln!(out, "tau,t,df,p,adjusted_p,significance")?;
    for r in &cmp.results {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.tau, r.t, r.df, r.p, r.adjusted_p, r.significance
        )?;
    }
    Ok(())
}

pub fn stats_json(cmp: &ScaleComparison, params: serde_json::Value) -> serde_json::Value {
    let results: Vec<_> = cmp
        .results
        .iter()
        .map(|r| {
            serde_json::json!({
                "tau": r.tau,
                "t": finite_or_string(r.t),
                "df": r.df,
                "p": r.p,
                "adjusted_p": r.adjusted_p,
                "significance": r.significance.as_str(),
            })
        })
        .collect();
    serde_json::json!({
        "params": params,
        "results": results,
        "excluded_undefined": cmp.excluded_undefined,
        "excluded_degenerate": cmp.excluded_degenerate,
    })
}

/// JSON has no infinities.
fn finite_or_string(x: f64) -> serde_json::Value {
    if x.is_finite() {
        serde_json::json!(x)
    } else {
        serde_json::json!(x.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_column_with_comments() {
        let s = read_signal("# seed=3\n1.5\n-2\n\n3e-3\n".as_bytes()).unwrap();
        assert_eq!(s.samples(), &[1.5, -2.0, 3e-3]);
        assert_eq!(s.sample_rate(), None);
    }

    #[test]
    fn time_value_pairs() {
        let s = read_signal("t,value\n0,1\n0.5,2\n1,3\n".as_bytes()).unwrap();
        assert_eq!(s.samples(), &[1.0, 2.0, 3.0]);
        assert_eq!(s.sample_rate(), Some(2.0));
        let s = read_signal("value\n4\n5\n".as_bytes()).unwrap();
        assert_eq!(s.samples(), &[4.0, 5.0]);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = read_signal("1\n2\nNaN\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        let err = read_signal("t,value\n0,1\n0.1,\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        let err = read_signal("1\nabc\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        assert!(read_signal("".as_bytes()).is_err());
    }

    #[test]
    fn matrix_with_undefined_and_tau_columns() {
        let m =
            read_matrix("window,start,tau_1,tau_2\n0,0,0.5,undefined\n1,10,0.25,1\n".as_bytes())
                .unwrap();
        assert_eq!(m, vec![vec![Some(0.5), None], vec![Some(0.25), Some(1.0)]]);
        let m = read_matrix("1,2\n3,undefined\n".as_bytes()).unwrap();
        assert_eq!(m, vec![vec![Some(1.0), Some(2.0)], vec![Some(3.0), None]]);
    }

    #[test]
    fn signal_roundtrip_is_exact() {
        let samples = vec![0.1, -1.0 / 3.0, 1e-300, 12345.678901234567];
        let sig = Signal::with_sample_rate(samples.clone(), 150.0).unwrap();
        let mut buf = Vec::new();
        write_signal(&mut buf, &sig, &["kind=test".into()]).unwrap();
        let back = read_signal(buf.as_slice()).unwrap();
        assert_eq!(back.samples(), samples.as_slice());
        assert!((back.sample_rate().unwrap() - 150.0).abs() < 1e-9);
    }
}
