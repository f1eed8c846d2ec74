//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Each exported function has a plain Rust counterpart returning
//! `Result<_, String>` so it can be tested natively; the wrappers only convert
//! errors into JavaScript exceptions.

use std::sync::Arc;

use fuzzy_korovkin::function::catalog;
use fuzzy_korovkin::harness::{summability_points, Setup};
use fuzzy_korovkin::operators::{lift_fuzzy, OperatorRegistry};
use fuzzy_korovkin::summability::cube_series;
use fuzzy_korovkin::{AlphaGrid, DomainGrid, Side};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Largest domain grid the summability panel accepts; larger grids make the
/// page unresponsive near t = 1.
pub const MAX_DEMO_POINTS: usize = 201;

fn err(e: impl ToString) -> String {
    e.to_string()
}

/// `[t₀, s₀, t₁, s₁, …]` with `s = cube_series(t)` on `samples` points of
/// `[t_min, t_max]`.
pub fn cube_curve(t_min: f64, t_max: f64, samples: usize) -> Result<Vec<f64>, String> {
    if !(0.0 < t_min && t_min < t_max && t_max < 1.0) {
        return Err(format!("need 0 < t_min < t_max < 1, got [{t_min}, {t_max}]"));
    }
    if samples < 2 {
        return Err("need at least 2 samples".into());
    }
    let mut out = Vec::with_capacity(2 * samples);
    for i in 0..samples {
        let t = t_min + (t_max - t_min) * i as f64 / (samples - 1) as f64;
        out.push(t);
        out.push(cube_series(t, 1e-12).map_err(err)?);
    }
    Ok(out)
}

/// Cut endpoints of `f(x)` and `T_n(f; x)` over a grid of `points` on
/// `[0, 1]`, at α ∈ {0, 0.5, 1}.
#[derive(Debug, Serialize)]
pub struct FuzzyBands {
    pub x: Vec<f64>,
    pub alphas: Vec<f64>,
    /// `target[level] = (lower values, upper values)`.
    pub target: Vec<(Vec<f64>, Vec<f64>)>,
    pub output: Vec<(Vec<f64>, Vec<f64>)>,
}

pub fn fuzzy_bands(operator: &str, function: &str, n: usize, points: usize) -> Result<FuzzyBands, String> {
    if !(3..=2001).contains(&points) {
        return Err(format!("points must lie in 3..=2001, got {points}"));
    }
    let base = OperatorRegistry::default().get(operator).map_err(err)?;
    let fam = lift_fuzzy(base);
    let f = catalog::by_name(function).map_err(err)?;
    let alpha = AlphaGrid::uniform(2).map_err(err)?;
    let grid = DomainGrid::unit(points).map_err(err)?;
    let levels = alpha.len();
    let mut target = vec![(Vec::new(), Vec::new()); levels];
    let mut output = vec![(Vec::new(), Vec::new()); levels];
    for &x in grid.points() {
        let a = f.eval(x, &alpha).map_err(err)?;
        let b = fam.apply(n, &f, x, &alpha).map_err(err)?;
        for k in 0..levels {
            target[k].0.push(a.endpoint(k, Side::Lower));
            target[k].1.push(a.endpoint(k, Side::Upper));
            output[k].0.push(b.endpoint(k, Side::Lower));
            output[k].1.push(b.endpoint(k, Side::Upper));
        }
    }
    Ok(FuzzyBands {
        x: grid.points().to_vec(),
        alphas: alpha.levels().to_vec(),
        target,
        output,
    })
}

#[derive(Debug, Serialize)]
pub struct NormsRow {
    pub t: f64,
    pub norm_e0: f64,
    pub norm_e1: f64,
    pub norm_e2: f64,
    pub dstar: f64,
    pub gamma_t: f64,
    pub omega: Option<f64>,
    pub rhs: Option<f64>,
    pub n_used: usize,
}

pub fn summed_norms(operator: &str, function: &str, ts: &[f64], points: usize) -> Result<Vec<NormsRow>, String> {
    if !(3..=MAX_DEMO_POINTS).contains(&points) {
        return Err(format!("points must lie in 3..={MAX_DEMO_POINTS}, got {points}"));
    }
    let base = OperatorRegistry::default().get(operator).map_err(err)?;
    let fam = lift_fuzzy(Arc::clone(&base));
    let f = catalog::by_name(function).map_err(err)?;
    let setup = Setup {
        grid: DomainGrid::unit(points).map_err(err)?,
        alpha: AlphaGrid::uniform(20).map_err(err)?,
        ..Setup::default()
    };
    let pts = summability_points(&fam, &f, ts, &setup).map_err(err)?;
    Ok(pts
        .iter()
        .map(|p| NormsRow {
            t: p.t,
            norm_e0: p.norms[0],
            norm_e1: p.norms[1],
            norm_e2: p.norms[2],
            dstar: p.dstar,
            gamma_t: p.gamma_t,
            omega: p.omega,
            rhs: p.rate_bundle(f.name()).ok().map(|b| b.rhs),
            n_used: p.n_used,
        })
        .collect())
}

fn js<T: Serialize>(r: Result<T, String>) -> Result<String, JsValue> {
    let v = r.map_err(|e| JsValue::from_str(&e))?;
    serde_json::to_string(&v).map_err(|e| JsValue::from_str(&e.to_string()))
}

#[wasm_bindgen(js_name = cubeCurve)]
pub fn cube_curve_js(t_min: f64, t_max: f64, samples: usize) -> Result<Vec<f64>, JsValue> {
    cube_curve(t_min, t_max, samples).map_err(|e| JsValue::from_str(&e))
}

/// JSON-encoded [`FuzzyBands`].
#[wasm_bindgen(js_name = fuzzyBands)]
pub fn fuzzy_bands_js(operator: &str, function: &str, n: usize, points: usize) -> Result<String, JsValue> {
    js(fuzzy_bands(operator, function, n, points))
}

/// JSON-encoded list of [`NormsRow`].
#[wasm_bindgen(js_name = summedNorms)]
pub fn summed_norms_js(operator: &str, function: &str, ts: Vec<f64>, points: usize) -> Result<String, JsValue> {
    js(summed_norms(operator, function, &ts, points))
}
