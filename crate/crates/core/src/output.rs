//! CSV and manifest files.
//!
//! Numbers are written with 17 significant digits (`{:.16e}`), enough to
//! round-trip every `f64`, so identical runs give identical bytes.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use crate::config::{fmt_float, SimConfig};
use crate::correlations::CorrelationRecord;
use crate::error::{Error, Result};
use crate::pipeline::{ConvergenceReport, RunOutput, SweepAxis, SweepPoint};

pub const CSV_HEADER: &str =
    "t,discord,concurrence,mutual_info,classical_corr,n_total,n_atoms,trace_dev,min_eig";
pub const CONVERGENCE_HEADER: &str = "n,max_delta,converged,truncated_delta";

pub fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

fn record_fields(r: &CorrelationRecord) -> [f64; 9] {
    [
        r.t,
        r.discord,
        r.concurrence,
        r.mutual_info,
        r.classical_corr,
        r.n_total,
        r.n_atoms,
        r.trace_dev,
        r.min_eig,
    ]
}

fn join(fields: &[f64]) -> String {
    fields
        .iter()
        .map(|&v| fmt17(v))
        .collect::<Vec<_>>()
        .join(",")
}

pub fn write_records<W: Write>(mut w: W, records: &[CorrelationRecord]) -> io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for r in records {
        writeln!(w, "{}", join(&record_fields(r)))?;
    }
    w.flush()
}

pub fn records_csv(records: &[CorrelationRecord]) -> String {
    let mut buf = Vec::new();
    write_records(&mut buf, records).expect("writing to memory");
    String::from_utf8(buf).expect("ASCII output")
}

/// Terminal record of every sweep point, one row per axis value.
pub fn write_summary<W: Write>(mut w: W, axis: SweepAxis, points: &[SweepPoint]) -> io::Result<()> {
    writeln!(w, "{axis},steady_reached,{CSV_HEADER}")?;
    for p in points {
        writeln!(
            w,
            "{},{},{}",
            fmt17(p.value),
            p.output.steady_reached,
            join(&record_fields(p.output.terminal()))
        )?;
    }
    w.flush()
}

/// One row per consecutive pair, keyed by the smaller cutoff.
pub fn write_convergence<W: Write>(mut w: W, report: &ConvergenceReport) -> io::Result<()> {
    writeln!(w, "{CONVERGENCE_HEADER}")?;
    for (p, (&d, &td)) in report
        .max_deltas
        .iter()
        .zip(&report.truncated_deltas)
        .enumerate()
    {
        writeln!(
            w,
            "{},{},{},{}",
            report.n_values[p],
            fmt17(d),
            report.converged(p),
            fmt17(td)
        )?;
    }
    w.flush()
}

/// Header and numeric rows of a CSV written by this module. Boolean cells
/// read as 1 or 0.
pub fn parse_csv(text: &str) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut lines = text.lines();
    let header: Vec<String> = lines
        .next()
        .ok_or_else(|| Error::ConfigSyntax("empty CSV".into()))?
        .split(',')
        .map(str::to_string)
        .collect();
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let row = line
            .split(',')
            .map(|cell| match cell {
                "true" => Ok(1.0),
                "false" => Ok(0.0),
                _ => cell.parse::<f64>(),
            })
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::ConfigSyntax(format!("CSV line {}: {e}", i + 2)))?;
        if row.len() != header.len() {
            return Err(Error::ConfigSyntax(format!(
                "CSV line {} has {} cells, header has {}",
                i + 2,
                row.len(),
                header.len()
            )));
        }
        rows.push(row);
    }
    Ok((header, rows))
}

/// Sidecar file of a run: the resolved config at top level, so the manifest
/// is itself a valid config, plus a `[manifest]` table describing the run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub config: SimConfig,
    pub version: String,
    pub wall_time_s: f64,
    pub samples: usize,
    pub terminal: CorrelationRecord,
    pub steady_reached: bool,
    pub steady_max_change: f64,
    pub stopped_early: bool,
    pub max_residual_offx: f64,
    /// Named thresholds a caller judged the run against.
    pub thresholds: BTreeMap<String, f64>,
}

impl RunManifest {
    pub fn new(output: &RunOutput, wall_time_s: f64) -> Self {
        Self {
            config: output.config.clone(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            wall_time_s,
            samples: output.records.len(),
            terminal: *output.terminal(),
            steady_reached: output.steady_reached,
            steady_max_change: output.steady_max_change,
            stopped_early: output.summary.stopped_early,
            max_residual_offx: output.max_residual_offx,
            thresholds: BTreeMap::new(),
        }
    }

    pub fn to_toml_string(&self) -> String {
        let mut s = self.config.to_toml_string();
        let float = |v: f64| {
            if v.is_finite() {
                fmt_float(v)
            } else if v.is_nan() {
                "nan".to_string()
            } else if v > 0.0 {
                "inf".to_string()
            } else {
                "-inf".to_string()
            }
        };
        writeln!(s, "\n[manifest]").unwrap();
        writeln!(s, "version = \"{}\"", self.version).unwrap();
        writeln!(s, "wall_time_s = {}", float(self.wall_time_s)).unwrap();
        writeln!(s, "samples = {}", self.samples).unwrap();
        writeln!(s, "steady_reached = {}", self.steady_reached).unwrap();
        writeln!(s, "steady_max_change = {}", float(self.steady_max_change)).unwrap();
        writeln!(s, "stopped_early = {}", self.stopped_early).unwrap();
        writeln!(s, "max_residual_offx = {}", float(self.max_residual_offx)).unwrap();
        writeln!(s, "\n[manifest.terminal]").unwrap();
        let names = CSV_HEADER.split(',');
        for (name, v) in names.zip(record_fields(&self.terminal)) {
            writeln!(s, "{name} = {}", float(v)).unwrap();
        }
        writeln!(s, "herm_dev = {}", float(self.terminal.herm_dev)).unwrap();
        if !self.thresholds.is_empty() {
            writeln!(s, "\n[manifest.thresholds]").unwrap();
            for (k, v) in &self.thresholds {
                writeln!(s, "{k} = {}", float(*v)).unwrap();
            }
        }
        s
    }

    pub fn write(&self, path: &Path) -> io::Result<()> {
        std::fs::write(path, self.to_toml_string())
    }
}

/// `run.csv` → `run.manifest.toml`
pub fn manifest_path(csv: &Path) -> PathBuf {
    csv.with_extension("manifest.toml")
}
