//! Experiments: classical Korovkin tables, summed Korovkin norms, D* and
//! the rate bound.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::function::{dstar_tables, fuzzy_sup_norm, modulus_of_table, DomainGrid, FuzzyFunction};
use crate::fuzzy::AlphaGrid;
use crate::operators::{korovkin_norms, test_function, FuzzyOperatorFamily, OperatorFamily, NESTING_TOL};
use crate::summability::{sweep, Probe, PowerSeriesMethod, TruncationPolicy};

/// Slack allowed when checking measured D* against the rate bound.
pub const VERIFY_SLACK: f64 = 1e-9;

/// One row of a report. `param` is `n` for classical rows and `t` for
/// summability rows; cells that the experiment does not compute are `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub param: f64,
    pub norm_e0: Option<f64>,
    pub norm_e1: Option<f64>,
    pub norm_e2: Option<f64>,
    pub dstar: Option<f64>,
    pub gamma_t: Option<f64>,
    pub omega_at_gamma: Option<f64>,
    pub bound_rhs: Option<f64>,
    pub n_used: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KorovkinReport {
    pub experiment: String,
    pub operator: String,
    pub method: String,
    pub rows: Vec<ReportRow>,
}

/// Both sides of the rate inequality at one `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateBundle {
    pub t: f64,
    pub gamma_t: f64,
    pub omega: f64,
    pub e0_norm: f64,
    #[serde(rename = "M")]
    pub m: f64,
    /// `e0_norm·ω + 2ω + M·e0_norm`.
    pub rhs: f64,
    /// `K·(e0_norm·ω + ω + e0_norm)` with `K = max(M, 2)`.
    pub k_bound: f64,
    pub dstar: f64,
    pub verified: bool,
}

/// Everything measured for one `t` of a summability run.
#[derive(Debug, Clone, PartialEq)]
pub struct SummabilityPoint {
    pub t: f64,
    pub norms: [f64; 3],
    pub dstar: f64,
    pub gamma_t: f64,
    /// `None` when `γ(t) = 0` and the modulus is undefined.
    pub omega: Option<f64>,
    pub m: f64,
    pub n_used: usize,
}

impl SummabilityPoint {
    pub fn rate_bundle(&self, function: &str) -> Result<RateBundle> {
        let omega = self.omega.ok_or_else(|| {
            Error::DegenerateDelta(format!(
                "gamma(t) = 0 at t = {} but '{function}' is not constant",
                self.t
            ))
        })?;
        let e0 = self.norms[0];
        let rhs = e0 * omega + 2.0 * omega + self.m * e0;
        let k = self.m.max(2.0);
        Ok(RateBundle {
            t: self.t,
            gamma_t: self.gamma_t,
            omega,
            e0_norm: e0,
            m: self.m,
            rhs,
            k_bound: k * (e0 * omega + omega + e0),
            dstar: self.dstar,
            verified: self.dstar <= rhs + VERIFY_SLACK,
        })
    }

    fn row(&self) -> ReportRow {
        let rhs = self
            .omega
            .map(|w| self.norms[0] * w + 2.0 * w + self.m * self.norms[0]);
        ReportRow {
            param: self.t,
            norm_e0: Some(self.norms[0]),
            norm_e1: Some(self.norms[1]),
            norm_e2: Some(self.norms[2]),
            dstar: Some(self.dstar),
            gamma_t: Some(self.gamma_t),
            omega_at_gamma: self.omega,
            bound_rhs: rhs,
            n_used: Some(self.n_used),
        }
    }
}

/// Default `t` grid.
pub fn default_t_list() -> Vec<f64> {
    vec![0.9, 0.99, 0.999]
}

/// `{1..100} ∪ {m³ : m ≤ 10}`, sorted.
pub fn default_n_list() -> Vec<usize> {
    let mut n: Vec<usize> = (1..=100).chain((1..=10).map(|m| m * m * m)).collect();
    n.sort_unstable();
    n.dedup();
    n
}

/// Grids and stopping rule shared by the summability experiments.
#[derive(Debug, Clone)]
pub struct Setup {
    pub grid: DomainGrid,
    pub alpha: AlphaGrid,
    pub method: PowerSeriesMethod,
    pub policy: TruncationPolicy,
}

impl Default for Setup {
    fn default() -> Self {
        Setup {
            grid: DomainGrid::unit(crate::function::DEFAULT_DOMAIN_POINTS).expect("default grid"),
            alpha: AlphaGrid::default(),
            method: PowerSeriesMethod::Abel,
            policy: TruncationPolicy::default(),
        }
    }
}

pub fn run_classical(base: &dyn OperatorFamily, n_list: &[usize], grid: &DomainGrid) -> Result<KorovkinReport> {
    if n_list.is_empty() {
        return Err(invalid("n list is empty"));
    }
    let rows = n_list
        .iter()
        .map(|&n| {
            let [e0, e1, e2] = korovkin_norms(base, n, grid)?;
            Ok(ReportRow {
                param: n as f64,
                norm_e0: Some(e0),
                norm_e1: Some(e1),
                norm_e2: Some(e2),
                dstar: None,
                gamma_t: None,
                omega_at_gamma: None,
                bound_rhs: None,
                n_used: None,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(KorovkinReport {
        experiment: "korovkin-classical".into(),
        operator: base.name().into(),
        method: "none".into(),
        rows,
    })
}

fn check_t_list(t_list: &[f64]) -> Result<()> {
    if t_list.is_empty() {
        return Err(invalid("t list is empty"));
    }
    if let Some(t) = t_list.iter().find(|t| !(**t > 0.0 && **t < 1.0)) {
        return Err(invalid(format!("t must lie in (0, 1), got {t}")));
    }
    if t_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(invalid("t list must be strictly increasing"));
    }
    Ok(())
}

/// One sweep per `t` over the probes `e0, e1, e2, (z − x)²` and the
/// components of `f`, reduced to norms, D*, γ, ω and M.
pub fn summability_points(
    family: &FuzzyOperatorFamily,
    f: &FuzzyFunction,
    t_list: &[f64],
    setup: &Setup,
) -> Result<Vec<SummabilityPoint>> {
    check_t_list(t_list)?;
    f.check_domain(&setup.grid)?;
    let base = family.base().as_ref();
    let grid = &setup.grid;
    let points = grid.points();
    let target = f.tabulate(grid, &setup.alpha)?;
    let m = fuzzy_sup_norm(f, grid, &setup.alpha)?;
    let constant = modulus_of_table(&target, grid.d(), grid) == 0.0;

    let tests: Vec<_> = (0..3).map(test_function).collect();
    let mut probes: Vec<Probe<'_>> = tests.iter().map(|g| Probe::Scalar(g)).collect();
    probes.push(Probe::CentralSquare);
    probes.extend(f.components().iter().map(|c| Probe::Scalar(c.as_ref())));

    // |T̄_n(g; x)| ≤ ‖T̄_n‖·‖g‖ bounds every term of every probe.
    let mut policy = setup.policy.clone();
    if policy.bound_hint.is_none() {
        if let Some(nb) = base.norm_bound() {
            let d = grid.d();
            let mut g_max = d * d;
            for c in f.components() {
                g_max = g_max.max(crate::function::sup_norm(c.as_ref(), grid));
            }
            policy.bound_hint = Some(nb * g_max.max(1.0));
        }
    }

    t_list
        .iter()
        .map(|&t| {
            let r = sweep(base, &probes, points, t, &setup.method, &policy)?;
            let mut norms = [0.0_f64; 3];
            for (i, norm) in norms.iter_mut().enumerate() {
                *norm = points
                    .iter()
                    .zip(&r.values[i])
                    .fold(0.0, |acc, (&x, &v)| acc.max((v - tests[i](x)).abs()));
            }
            let gamma_sq = r.values[3].iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
            let gamma_t = gamma_sq.sqrt();
            let comps = &r.values[4..];
            let summed = (0..points.len())
                .map(|ix| {
                    let values: Vec<f64> = comps.iter().map(|row| row[ix]).collect();
                    f.assemble(&values, &setup.alpha, NESTING_TOL)
                })
                .collect::<Result<Vec<_>>>()?;
            let dstar = dstar_tables(&summed, &target)?;
            let omega = if gamma_t > 0.0 {
                Some(modulus_of_table(&target, gamma_t, grid))
            } else if constant {
                Some(0.0)
            } else {
                None
            };
            Ok(SummabilityPoint {
                t,
                norms,
                dstar,
                gamma_t,
                omega,
                m,
                n_used: r.n_used,
            })
        })
        .collect()
}

pub fn summability_report(
    family: &FuzzyOperatorFamily,
    f: &FuzzyFunction,
    method: &PowerSeriesMethod,
    points: &[SummabilityPoint],
) -> KorovkinReport {
    KorovkinReport {
        experiment: format!("korovkin-psum:{}", f.name()),
        operator: family.name().into(),
        method: method.name().into(),
        rows: points.iter().map(SummabilityPoint::row).collect(),
    }
}

pub fn run_summability(
    family: &FuzzyOperatorFamily,
    f: &FuzzyFunction,
    t_list: &[f64],
    setup: &Setup,
) -> Result<KorovkinReport> {
    let points = summability_points(family, f, t_list, setup)?;
    Ok(summability_report(family, f, &setup.method, &points))
}

pub fn run_rate(
    family: &FuzzyOperatorFamily,
    f: &FuzzyFunction,
    t_list: &[f64],
    setup: &Setup,
) -> Result<Vec<RateBundle>> {
    summability_points(family, f, t_list, setup)?
        .iter()
        .map(|p| p.rate_bundle(f.name()))
        .collect()
}

/// Classical failure and summability success for the perturbed family:
/// the classical table over `n_list`, then the summed table for `f`.
pub fn example1(
    family: &FuzzyOperatorFamily,
    f: &FuzzyFunction,
    n_list: &[usize],
    t_list: &[f64],
    setup: &Setup,
) -> Result<Vec<KorovkinReport>> {
    let mut classical = run_classical(family.base().as_ref(), n_list, &setup.grid)?;
    classical.experiment = "example1-classical".into();
    let mut psum = run_summability(family, f, t_list, setup)?;
    psum.experiment = format!("example1-psum:{}", f.name());
    Ok(vec![classical, psum])
}
