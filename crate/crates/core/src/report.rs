//! CSV and JSON output for reports and rate bundles.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::harness::{KorovkinReport, RateBundle};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(invalid(format!("unknown format '{other}' (expected csv or json)"))),
        }
    }
}

pub const REPORT_COLUMNS: [&str; 12] = [
    "experiment",
    "operator",
    "method",
    "param",
    "norm_e0",
    "norm_e1",
    "norm_e2",
    "dstar",
    "gamma_t",
    "omega_at_gamma",
    "bound_rhs",
    "n_used",
];

pub const RATE_COLUMNS: [&str; 9] = ["t", "gamma_t", "omega", "e0_norm", "M", "rhs", "k_bound", "dstar", "verified"];

#[derive(Serialize)]
struct FlatRow<'a> {
    experiment: &'a str,
    operator: &'a str,
    method: &'a str,
    param: f64,
    norm_e0: Option<f64>,
    norm_e1: Option<f64>,
    norm_e2: Option<f64>,
    dstar: Option<f64>,
    gamma_t: Option<f64>,
    omega_at_gamma: Option<f64>,
    bound_rhs: Option<f64>,
    n_used: Option<usize>,
}

fn csv_err(e: csv::Error) -> Error {
    Error::InternalConsistency(format!("csv: {e}"))
}

fn write_csv<T: Serialize, W: Write>(header: &[&str], rows: impl Iterator<Item = T>, out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(header).map_err(csv_err)?;
    for row in rows {
        w.serialize(row).map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::InternalConsistency(e.to_string()))
}

/// Writes reports to `out`. CSV flattens every report into one table;
/// JSON writes the list of reports.
pub fn write_reports<W: Write>(reports: &[KorovkinReport], format: Format, mut out: W) -> Result<()> {
    match format {
        Format::Csv => {
            let rows = reports.iter().flat_map(|r| {
                r.rows.iter().map(move |row| FlatRow {
                    experiment: &r.experiment,
                    operator: &r.operator,
                    method: &r.method,
                    param: row.param,
                    norm_e0: row.norm_e0,
                    norm_e1: row.norm_e1,
                    norm_e2: row.norm_e2,
                    dstar: row.dstar,
                    gamma_t: row.gamma_t,
                    omega_at_gamma: row.omega_at_gamma,
                    bound_rhs: row.bound_rhs,
                    n_used: row.n_used,
                })
            });
            write_csv(&REPORT_COLUMNS, rows, out)
        }
        Format::Json => write_json(reports, &mut out),
    }
}

pub fn write_rate_bundles<W: Write>(bundles: &[RateBundle], format: Format, mut out: W) -> Result<()> {
    match format {
        Format::Csv => write_csv(&RATE_COLUMNS, bundles.iter(), out),
        Format::Json => write_json(bundles, &mut out),
    }
}

fn write_json<T: Serialize + ?Sized, W: Write>(value: &T, out: &mut W) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value).map_err(|e| Error::InternalConsistency(format!("json: {e}")))?;
    writeln!(out).map_err(|e| Error::InternalConsistency(e.to_string()))
}

fn io_at(path: &Path) -> impl Fn(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Like the `write_*` functions but targeting a file, with I/O failures
/// reported against `path`.
pub fn emit_report(reports: &[KorovkinReport], format: Format, path: &Path) -> Result<()> {
    emit(path, |w| write_reports(reports, format, w))
}

pub fn emit_rate_bundles(bundles: &[RateBundle], format: Format, path: &Path) -> Result<()> {
    emit(path, |w| write_rate_bundles(bundles, format, w))
}

fn emit(path: &Path, body: impl FnOnce(&mut Vec<u8>) -> Result<()>) -> Result<()> {
    let mut buf = Vec::new();
    body(&mut buf)?;
    let file = File::create(path).map_err(io_at(path))?;
    let mut w = BufWriter::new(file);
    w.write_all(&buf).map_err(io_at(path))?;
    w.flush().map_err(io_at(path))
}

pub fn read_reports_json(path: &Path) -> Result<Vec<KorovkinReport>> {
    let text = std::fs::read_to_string(path).map_err(io_at(path))?;
    serde_json::from_str(&text).map_err(|e| Error::Format {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}
