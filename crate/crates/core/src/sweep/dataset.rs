//! Sweep results and their CSV form.
//!
//! Floats are written with 17 significant digits so that parsing a file gives
//! back the exact values. Divergent bounds are `inf`, degenerate cells `nan`.
//! Lines starting with `#` after the rows form a free-text footer.

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::qfi_engine::GeneratorTag;

pub const CSV_HEADER: &str = "theta1,theta2,phi1,phi2,spin_times_2,generator,qfi,crb,engine";

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub theta1: f64,
    pub theta2: f64,
    pub phi1: f64,
    pub phi2: f64,
    pub spin_times_2: u32,
    pub generator: GeneratorTag,
    pub qfi: f64,
    pub crb: f64,
    /// Which engine produced the value: `numeric`, `analytic`, or `both`.
    pub engine: String,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SweepDataset {
    pub rows: Vec<SweepRow>,
    /// Footer lines, without the leading `#`.
    pub footer: Vec<String>,
    /// Largest `|F_analytic - F_numeric|` when both engines ran.
    pub max_deviation: Option<f64>,
}

pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v == f64::INFINITY {
        "inf".into()
    } else if v == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{v:.16e}")
    }
}

pub fn parse_float(s: &str) -> Result<f64> {
    match s.trim() {
        "nan" => Ok(f64::NAN),
        "inf" => Ok(f64::INFINITY),
        "-inf" => Ok(f64::NEG_INFINITY),
        t => t.parse::<f64>().map_err(|_| Error::Parse(format!("bad number '{t}'"))),
    }
}

impl SweepDataset {
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.rows.len() * 160);
        out.push_str(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                format_float(r.theta1),
                format_float(r.theta2),
                format_float(r.phi1),
                format_float(r.phi2),
                r.spin_times_2,
                r.generator,
                format_float(r.qfi),
                format_float(r.crb),
                r.engine
            );
        }
        for line in &self.footer {
            let _ = writeln!(out, "# {line}");
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        f.write_all(self.to_csv().as_bytes())?;
        f.flush()?;
        Ok(())
    }

    pub fn parse_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        match lines.next() {
            Some(h) if h.trim() == CSV_HEADER => {}
            other => return Err(Error::Parse(format!("unexpected CSV header {other:?}"))),
        }
        let mut ds = SweepDataset::default();
        for (i, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                let rest = rest.strip_prefix(' ').unwrap_or(rest);
                if let Some(v) = rest.strip_prefix("max_abs_qfi_deviation=") {
                    ds.max_deviation = Some(parse_float(v)?);
                }
                ds.footer.push(rest.to_string());
                continue;
            }
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 9 {
                return Err(Error::Parse(format!("line {}: expected 9 fields, got {}", i + 2, f.len())));
            }
            ds.rows.push(SweepRow {
                theta1: parse_float(f[0])?,
                theta2: parse_float(f[1])?,
                phi1: parse_float(f[2])?,
                phi2: parse_float(f[3])?,
                spin_times_2: f[4].trim().parse().map_err(|_| Error::Parse(format!("bad spin '{}'", f[4])))?,
                generator: f[5].parse()?,
                qfi: parse_float(f[6])?,
                crb: parse_float(f[7])?,
                engine: f[8].trim().to_string(),
            });
        }
        Ok(ds)
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        Self::parse_csv(&std::fs::read_to_string(path)?)
    }

    /// Rows for one spin, in file order.
    pub fn rows_for(&self, twice_s: u32) -> impl Iterator<Item = &SweepRow> {
        self.rows.iter().filter(move |r| r.spin_times_2 == twice_s)
    }

    /// Distinct spins in order of first appearance.
    pub fn spins(&self) -> Vec<u32> {
        let mut out: Vec<u32> = Vec::new();
        for r in &self.rows {
            if !out.contains(&r.spin_times_2) {
                out.push(r.spin_times_2);
            }
        }
        out
    }

    /// Row with the smallest finite bound for a spin.
    pub fn minimum(&self, twice_s: u32) -> Option<&SweepRow> {
        self.rows_for(twice_s).filter(|r| r.crb.is_finite()).min_by(|a, b| a.crb.total_cmp(&b.crb))
    }
}
