//! Waveform and analysis CSV formats.
//!
//! Waveforms: optional `#` comment lines, then the header `t,va,vb,vc`, then
//! one row per sample. Numbers are written in shortest round-trip form so
//! the same input always produces the same bytes.

use std::fmt::Write as _;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::numdiff::TimeSeries;
use crate::signals::abc_channels;

pub const WAVEFORM_HEADER: &str = "t,va,vb,vc";

pub const ANALYSIS_HEADER: &str =
    "t,v,rho,w1,w2,w3,w,xi,kappa,tau,eta,rocof1,rocof2,rocof3,rotation_defined";

/// Appends `x` in shortest round-trip decimal form, switching to exponent
/// notation outside `[1e-5, 1e16)` so tiny values stay short.
pub fn push_float(out: &mut String, x: f64) {
    // -0 is normalized so output does not depend on the sign of rounding noise
    let a = x.abs();
    let r = if x == 0.0 {
        out.push('0');
        Ok(())
    } else if (1e-5..1e16).contains(&a) {
        write!(out, "{x}")
    } else {
        write!(out, "{x:e}")
    };
    r.expect("writing to a String cannot fail");
}

pub fn write_waveform<W: Write>(mut w: W, series: &TimeSeries) -> Result<()> {
    if series.channels().len() != 3 {
        return Err(Error::WrongChannelCount {
            expected: 3,
            got: series.channels().len(),
        });
    }
    let mut line = String::with_capacity(96);
    writeln!(w, "{WAVEFORM_HEADER}")?;
    for (t, row) in series.times().iter().zip(series.samples()) {
        line.clear();
        push_float(&mut line, *t);
        for &x in row {
            line.push(',');
            push_float(&mut line, x);
        }
        line.push('\n');
        w.write_all(line.as_bytes())?;
    }
    w.flush()?;
    Ok(())
}

fn parse_field(s: &str, line: usize, col: &str) -> Result<f64> {
    let x: f64 = s
        .trim()
        .parse()
        .map_err(|_| Error::MalformedCsv(format!("line {line}: `{s}` in column {col} is not a number")))?;
    if !x.is_finite() {
        return Err(Error::MalformedCsv(format!("line {line}: non-finite value in column {col}")));
    }
    Ok(x)
}

/// Reads a waveform CSV into a uniformly spaced series.
pub fn read_waveform<R: BufRead>(r: R) -> Result<TimeSeries> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .flexible(true)
        .from_reader(r);

    let mut times = Vec::new();
    let mut rows = Vec::new();
    let mut saw_header = false;
    let names = ["t", "va", "vb", "vc"];
    for rec in rdr.records() {
        let rec = rec.map_err(|e| match e.kind() {
            csv::ErrorKind::Io(_) => Error::Io(std::io::Error::other(e.to_string())),
            _ => Error::MalformedCsv(e.to_string()),
        })?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        if !saw_header {
            let header: Vec<&str> = rec.iter().collect();
            if header != names {
                return Err(Error::MalformedCsv(format!(
                    "line {line}: expected header `{WAVEFORM_HEADER}`, got `{}`",
                    header.join(",")
                )));
            }
            saw_header = true;
            continue;
        }
        if rec.len() != 4 {
            return Err(Error::MalformedCsv(format!(
                "line {line}: expected 4 fields, got {}",
                rec.len()
            )));
        }
        times.push(parse_field(&rec[0], line, "t")?);
        rows.push(
            (1..4)
                .map(|c| parse_field(&rec[c], line, names[c]))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    if !saw_header {
        return Err(Error::MalformedCsv("missing header".into()));
    }
    if times.len() < 2 {
        return Err(Error::MalformedCsv(format!("need at least 2 data rows, got {}", times.len())));
    }
    TimeSeries::from_times(abc_channels(), times, rows)
}

/// One output row; `None` fields are written as empty cells.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AnalysisRow {
    pub t: f64,
    pub v: f64,
    pub rho: Option<f64>,
    pub w_vec: Option<[f64; 3]>,
    pub w: Option<f64>,
    pub xi: Option<f64>,
    pub kappa: Option<f64>,
    pub tau: Option<f64>,
    pub eta: Option<f64>,
    pub rocof: Option<[f64; 3]>,
    pub rotation_defined: bool,
}

impl AnalysisRow {
    pub fn write_to(&self, out: &mut String) {
        let opt = |out: &mut String, x: Option<f64>| {
            out.push(',');
            if let Some(x) = x {
                push_float(out, x);
            }
        };
        push_float(out, self.t);
        out.push(',');
        push_float(out, self.v);
        opt(out, self.rho);
        for k in 0..3 {
            opt(out, self.w_vec.map(|w| w[k]));
        }
        opt(out, self.w);
        opt(out, self.xi);
        opt(out, self.kappa);
        opt(out, self.tau);
        opt(out, self.eta);
        for k in 0..3 {
            opt(out, self.rocof.map(|w| w[k]));
        }
        out.push(',');
        out.push(if self.rotation_defined { '1' } else { '0' });
    }
}

pub fn write_analysis<W: Write>(mut w: W, rows: &[AnalysisRow], degenerate_speed_rows: usize) -> Result<()> {
    writeln!(w, "{ANALYSIS_HEADER}")?;
    let mut line = String::with_capacity(256);
    for row in rows {
        line.clear();
        row.write_to(&mut line);
        line.push('\n');
        w.write_all(line.as_bytes())?;
    }
    writeln!(w, "# degenerate_speed_rows={degenerate_speed_rows}")?;
    w.flush()?;
    Ok(())
}

/// Parses an analysis CSV back into rows. Used by tests and tooling.
pub fn read_analysis<R: BufRead>(r: R) -> Result<Vec<AnalysisRow>> {
    let mut out = Vec::new();
    let mut saw_header = false;
    for (k, line) in r.lines().enumerate() {
        let line = line?;
        if line.starts_with('#') || line.is_empty() {
            continue;
        }
        if !saw_header {
            if line != ANALYSIS_HEADER {
                return Err(Error::MalformedCsv(format!("unexpected analysis header `{line}`")));
            }
            saw_header = true;
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 15 {
            return Err(Error::MalformedCsv(format!("line {}: expected 15 fields", k + 1)));
        }
        let get = |i: usize| -> Result<Option<f64>> {
            if f[i].is_empty() {
                Ok(None)
            } else {
                parse_field(f[i], k + 1, "analysis").map(Some)
            }
        };
        let triple = |i: usize| -> Result<Option<[f64; 3]>> {
            Ok(match (get(i)?, get(i + 1)?, get(i + 2)?) {
                (Some(a), Some(b), Some(c)) => Some([a, b, c]),
                _ => None,
            })
        };
        out.push(AnalysisRow {
            t: get(0)?.ok_or_else(|| Error::MalformedCsv("empty t".into()))?,
            v: get(1)?.ok_or_else(|| Error::MalformedCsv("empty v".into()))?,
            rho: get(2)?,
            w_vec: triple(3)?,
            w: get(6)?,
            xi: get(7)?,
            kappa: get(8)?,
            tau: get(9)?,
            eta: get(10)?,
            rocof: triple(11)?,
            rotation_defined: f[14] == "1",
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series() -> TimeSeries {
        TimeSeries::uniform(
            abc_channels(),
            0.0,
            1e-4,
            (0..6).map(|k| vec![k as f64 * 0.1, -1.5, 1.0 / 3.0]).collect(),
        )
        .unwrap()
    }

    #[test]
    fn waveform_round_trip_is_exact() {
        let s = series();
        let mut buf = Vec::new();
        write_waveform(&mut buf, &s).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("t,va,vb,vc\n0,0,-1.5,0.3333333333333333\n"));
        assert!(!text.contains('\r'));
        let back = read_waveform(&buf[..]).unwrap();
        assert_eq!(back.times(), s.times());
        assert_eq!(back.samples(), s.samples());
    }

    #[test]
    fn comments_before_header() {
        let text = "# exported\n# by hand\nt,va,vb,vc\n0,1,2,3\n0.5,1,2,3\n1,1,2,3\n";
        let s = read_waveform(text.as_bytes()).unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s.dt(), 0.5);
    }

    #[test]
    fn wrong_header() {
        let text = "time,a,b,c\n0,1,2,3\n1,1,2,3\n";
        assert!(matches!(read_waveform(text.as_bytes()), Err(Error::MalformedCsv(_))));
    }

    #[test]
    fn non_uniform_time() {
        let text = "t,va,vb,vc\n0,1,2,3\n1,1,2,3\n2.5,1,2,3\n";
        assert!(matches!(read_waveform(text.as_bytes()), Err(Error::MalformedCsv(_))));
    }

    #[test]
    fn bad_number() {
        let text = "t,va,vb,vc\n0,1,x,3\n1,1,2,3\n";
        assert!(matches!(read_waveform(text.as_bytes()), Err(Error::MalformedCsv(_))));
        let text = "t,va,vb,vc\n0,1,NaN,3\n1,1,2,3\n";
        assert!(matches!(read_waveform(text.as_bytes()), Err(Error::MalformedCsv(_))));
    }

    #[test]
    fn analysis_rows_use_empty_cells() {
        let row = AnalysisRow {
            t: 0.25,
            v: 5.0,
            rho: Some(0.0),
            w_vec: Some([0.0; 3]),
            w: Some(0.0),
            kappa: Some(0.0),
            rocof: Some([0.0; 3]),
            ..Default::default()
        };
        let mut s = String::new();
        row.write_to(&mut s);
        assert_eq!(s, "0.25,5,0,0,0,0,0,,0,,,0,0,0,0");
        assert!(!s.contains("NaN"));

        let mut buf = Vec::new();
        write_analysis(&mut buf, &[row], 2).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.ends_with("# degenerate_speed_rows=2\n"));
        assert_eq!(read_analysis(&buf[..]).unwrap(), vec![row]);
    }

    #[test]
    fn negative_zero_is_normalized() {
        let mut s = String::new();
        push_float(&mut s, -0.0);
        assert_eq!(s, "0");
    }

    #[test]
    fn float_format_round_trips() {
        for x in [2.1895242820459382e-13, 1e-5, 0.00030000000000000003, 314.159, -7e20, 1.0 / 3.0] {
            let mut s = String::new();
            push_float(&mut s, x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
            assert!(s.len() < 26, "{s}");
        }
    }
}
