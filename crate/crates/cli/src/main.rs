mod config;

use std::io::{self, Write};
use std::path::Path;
use std::process::ExitCode;
use std::sync::Arc;

use clap::Parser;
use fuzzy_korovkin::function::{catalog, metric_dstar};
use fuzzy_korovkin::harness::{self, KorovkinReport};
use fuzzy_korovkin::operators::{lift_fuzzy, OperatorRegistry};
use fuzzy_korovkin::report::{self, Format};
use fuzzy_korovkin::validate;
use fuzzy_korovkin::{Error, Result};
use serde::Serialize;

use config::{Cli, CommandKind, RunConfig};

const EXIT_INVALID: u8 = 2;
const EXIT_TRUNCATION: u8 = 3;
const EXIT_IO: u8 = 4;
const EXIT_INTERNAL: u8 = 5;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidArgument(_) | Error::Format { .. } | Error::DegenerateDelta(_) => EXIT_INVALID,
        Error::TruncationFailure { .. } => EXIT_TRUNCATION,
        Error::Io { .. } => EXIT_IO,
        Error::InternalConsistency(_) => EXIT_INTERNAL,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match config::resolve(&cli).and_then(|c| dispatch(&c)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn dispatch(c: &RunConfig) -> Result<ExitCode> {
    let registry = OperatorRegistry::default();
    let base = registry.get(&c.operator)?;
    let family = lift_fuzzy(Arc::clone(&base));
    let setup = c.setup()?;
    match c.command {
        CommandKind::KorovkinClassical => {
            let r = harness::run_classical(base.as_ref(), &c.n_list, &setup.grid)?;
            write_reports(c, &[r])?;
        }
        CommandKind::KorovkinPsum => {
            let f = catalog::by_name(c.function_or_default())?;
            let r = harness::run_summability(&family, &f, &c.t_list, &setup)?;
            write_reports(c, &[r])?;
        }
        CommandKind::Example1 => {
            let f = catalog::by_name(c.function_or_default())?;
            let r = harness::example1(&family, &f, &c.n_list, &c.t_list, &setup)?;
            write_reports(c, &r)?;
        }
        CommandKind::Rate => {
            let f = catalog::by_name(c.function_or_default())?;
            let bundles = harness::run_rate(&family, &f, &c.t_list, &setup)?;
            match &c.out {
                Some(p) => report::emit_rate_bundles(&bundles, c.format, p)?,
                None => report::write_rate_bundles(&bundles, c.format, stdout_sink()?)?,
            }
            let ok = bundles.iter().filter(|b| b.verified).count();
            eprintln!("{ok}/{} bundles verified", bundles.len());
        }
        CommandKind::Metrics => {
            let all = catalog::all();
            let mut rows = Vec::new();
            for f in &all {
                if c.function.as_deref().is_some_and(|name| name != f.name()) {
                    continue;
                }
                for g in &all {
                    rows.push(MetricRow {
                        f: f.name().into(),
                        g: g.name().into(),
                        dstar: metric_dstar(f, g, &setup.grid, &setup.alpha)?,
                    });
                }
            }
            write_table(c, &rows)?;
        }
        CommandKind::Validate => {
            let mut checks = validate::metric_axioms(c.samples, c.seed, &setup.alpha)?;
            checks.push(validate::modulus_agreement(&[0.01, 0.1, 0.5], &setup.grid, &setup.alpha)?);
            let points: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
            checks.push(validate::endpoint_consistency(
                &family,
                &catalog::all(),
                &[1, 8, 27, 100],
                &points,
                &setup.alpha,
            )?);
            checks.push(validate::positivity_transport(&family, 100, c.seed, &setup.alpha)?);
            write_table(c, &checks)?;
            if let Some(bad) = checks.iter().find(|k| !k.passed) {
                eprintln!("error: property '{}' failed (worst defect {:e})", bad.property, bad.worst);
                return Ok(ExitCode::from(EXIT_INTERNAL));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct MetricRow {
    f: String,
    g: String,
    dstar: f64,
}

fn stdout_sink() -> Result<io::StdoutLock<'static>> {
    Ok(io::stdout().lock())
}

fn write_reports(c: &RunConfig, reports: &[KorovkinReport]) -> Result<()> {
    match &c.out {
        Some(p) => report::emit_report(reports, c.format, p),
        None => report::write_reports(reports, c.format, stdout_sink()?),
    }
}

fn write_table<T: Serialize>(c: &RunConfig, rows: &[T]) -> Result<()> {
    let mut buf = Vec::new();
    let internal = |e: String| Error::InternalConsistency(e);
    match c.format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut buf);
            for r in rows {
                w.serialize(r).map_err(|e| internal(e.to_string()))?;
            }
            w.flush().map_err(|e| internal(e.to_string()))?;
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut buf, rows).map_err(|e| internal(e.to_string()))?;
            buf.push(b'\n');
        }
    }
    match &c.out {
        Some(p) => write_file(p, &buf),
        None => io::stdout().lock().write_all(&buf).map_err(|source| Error::Io {
            path: "<stdout>".into(),
            source,
        }),
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}
