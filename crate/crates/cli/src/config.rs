use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use fuzzy_korovkin::function::catalog;
use fuzzy_korovkin::harness::{default_n_list, Setup};
use fuzzy_korovkin::operators::OperatorRegistry;
use fuzzy_korovkin::report::Format;
use fuzzy_korovkin::{AlphaGrid, DomainGrid, Error, PowerSeriesMethod, Result, TruncationPolicy};

#[derive(Debug, Parser)]
#[command(
    name = "fuzzy-korovkin",
    version,
    about = "Korovkin-type experiments for fuzzy positive linear operators under power-series summability"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Randomized checks of the fuzzy-number invariants and metric axioms
    Validate(Flags),
    /// D* between catalog functions
    Metrics(Flags),
    /// Korovkin norms ‖T_n(e_i) − e_i‖ for each n
    KorovkinClassical(Flags),
    /// Summed Korovkin norms and D* for each t
    KorovkinPsum(Flags),
    /// Rate bound bundles for each t
    Rate(Flags),
    /// Classical failure table followed by the summed table for the perturbed family
    Example1(Flags),
}

// Flags are plain strings so that range checks produce our own messages and
// every subcommand accepts the same set.
#[derive(Debug, Clone, PartialEq, Eq, Args)]
pub struct Flags {
    /// Operator family
    #[arg(long, default_value = "perturbed-bernstein")]
    pub operator: String,
    /// Catalog function (e0, e1, e2, f1, f2); `metrics` compares it with every entry, or all pairs if omitted
    #[arg(long)]
    pub function: Option<String>,
    /// Summability method: `abel` or `weights:<file>`
    #[arg(long, default_value = "abel")]
    pub method: String,
    /// Comma-separated t values in (0, 1)
    #[arg(long, default_value = "0.9,0.99,0.999")]
    pub t: String,
    /// Operator indices: comma-separated numbers and inclusive ranges `a..b` [default: 1..100,125,216,...,1000]
    #[arg(long)]
    pub n: Option<String>,
    /// Number of α-levels (>= 2)
    #[arg(long, default_value = "101")]
    pub alpha_levels: String,
    /// Number of domain grid points (>= 3)
    #[arg(long, default_value = "1001")]
    pub domain_points: String,
    /// Truncation tolerance (> 0)
    #[arg(long, default_value = "1e-8")]
    pub tol: String,
    /// Largest series index before giving up
    #[arg(long, default_value = "2000000")]
    pub n_cap: String,
    /// Output format: csv or json
    #[arg(long, default_value = "csv")]
    pub format: String,
    /// Output file (stdout if omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Samples for `validate`
    #[arg(long, default_value = "1000")]
    pub samples: String,
    /// Random seed for `validate`
    #[arg(long, default_value = "1")]
    pub seed: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Validate,
    Metrics,
    KorovkinClassical,
    KorovkinPsum,
    Rate,
    Example1,
}

/// Validated run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: CommandKind,
    pub operator: String,
    pub function: Option<String>,
    pub method: PowerSeriesMethod,
    pub t_list: Vec<f64>,
    pub n_list: Vec<usize>,
    pub alpha_levels: usize,
    pub domain_points: usize,
    pub tol: f64,
    pub n_cap: usize,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub samples: usize,
    pub seed: u64,
}

impl RunConfig {
    pub fn setup(&self) -> Result<Setup> {
        Ok(Setup {
            grid: DomainGrid::unit(self.domain_points)?,
            alpha: AlphaGrid::uniform(self.alpha_levels - 1)?,
            method: self.method.clone(),
            policy: TruncationPolicy::new(self.tol, self.n_cap)?,
        })
    }

    pub fn function_or_default(&self) -> &str {
        self.function.as_deref().unwrap_or("f1")
    }
}

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

fn number<T: std::str::FromStr>(flag: &str, s: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| bad(format!("--{flag}: '{s}' is not a valid number")))
}

pub fn parse_t_list(s: &str) -> Result<Vec<f64>> {
    let mut ts = Vec::new();
    for part in s.split(',') {
        let t: f64 = number("t", part)?;
        if !(t > 0.0 && t < 1.0) {
            return Err(bad(format!("--t: t must lie in (0, 1), got {t}")));
        }
        ts.push(t);
    }
    if ts.windows(2).any(|w| w[0] >= w[1]) {
        return Err(bad("--t: values must be strictly increasing"));
    }
    Ok(ts)
}

/// `1..10,27,64` → sorted, deduplicated indices; ranges are inclusive.
pub fn parse_n_list(s: &str) -> Result<Vec<usize>> {
    let mut ns = Vec::new();
    for part in s.split(',') {
        match part.split_once("..") {
            Some((a, b)) => {
                let a: usize = number("n", a)?;
                let b: usize = number("n", b)?;
                if a > b {
                    return Err(bad(format!("--n: empty range {part}")));
                }
                ns.extend(a..=b);
            }
            None => ns.push(number("n", part)?),
        }
    }
    if ns.contains(&0) {
        return Err(bad("--n: operator indices start at 1"));
    }
    ns.sort_unstable();
    ns.dedup();
    Ok(ns)
}

impl Command {
    fn split(&self) -> (CommandKind, &Flags) {
        match self {
            Command::Validate(f) => (CommandKind::Validate, f),
            Command::Metrics(f) => (CommandKind::Metrics, f),
            Command::KorovkinClassical(f) => (CommandKind::KorovkinClassical, f),
            Command::KorovkinPsum(f) => (CommandKind::KorovkinPsum, f),
            Command::Rate(f) => (CommandKind::Rate, f),
            Command::Example1(f) => (CommandKind::Example1, f),
        }
    }
}

pub fn resolve(cli: &Cli) -> Result<RunConfig> {
    let (command, f) = cli.command.split();
    OperatorRegistry::default().get(&f.operator)?;
    if let Some(name) = &f.function {
        catalog::by_name(name)?;
    }
    let alpha_levels: usize = number("alpha-levels", &f.alpha_levels)?;
    if alpha_levels < 2 {
        return Err(bad(format!("--alpha-levels must be >= 2, got {alpha_levels}")));
    }
    let domain_points: usize = number("domain-points", &f.domain_points)?;
    if domain_points < 3 {
        return Err(bad(format!("--domain-points must be >= 3, got {domain_points}")));
    }
    let tol: f64 = number("tol", &f.tol)?;
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(bad(format!("--tol must be > 0, got {tol}")));
    }
    let n_cap: usize = number("n-cap", &f.n_cap)?;
    if n_cap == 0 {
        return Err(bad("--n-cap must be >= 1"));
    }
    let samples: usize = number("samples", &f.samples)?;
    if samples == 0 {
        return Err(bad("--samples must be >= 1"));
    }
    Ok(RunConfig {
        command,
        operator: f.operator.clone(),
        function: f.function.clone(),
        method: PowerSeriesMethod::parse(&f.method)?,
        t_list: parse_t_list(&f.t)?,
        n_list: match &f.n {
            Some(s) => parse_n_list(s)?,
            None => default_n_list(),
        },
        alpha_levels,
        domain_points,
        tol,
        n_cap,
        format: f.format.parse()?,
        out: f.out.clone(),
        samples,
        seed: number("seed", &f.seed)?,
    })
}
