//! Browser bindings: kernel and metric sweeps along the inward normal, and a
//! grid of peak-function moduli. Each binding wraps a plain function that
//! returns `Result<_, String>` so the same code runs in native tests.

use levirank::bergman::KernelMethod;
use levirank::geometry::DomainSpec;
use levirank::harness::{default_directions, detect_levi_flatness, fit_metric_exponents, ExperimentConfig};
use levirank::linalg::{c, ComplexVector};
use levirank::normalization::{normalize_chart, peak_function};
use levirank::Error;
use serde_json::json;
use wasm_bindgen::prelude::*;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// `[re₁, im₁, re₂, im₂, …]`
fn point(coords: &[f64]) -> Result<ComplexVector, String> {
    if coords.is_empty() || coords.len() % 2 != 0 {
        return Err("point needs an (re, im) pair per coordinate".into());
    }
    Ok(ComplexVector::from_iterator(coords.len() / 2, coords.chunks(2).map(|p| c(p[0], p[1]))))
}

fn method(name: &str) -> Result<Option<KernelMethod>, String> {
    match name {
        "" | "auto" => Ok(None),
        "oracle" => Ok(Some(KernelMethod::Oracle)),
        "series" => Ok(Some(KernelMethod::ReinhardtSeries)),
        "gram" => Ok(Some(KernelMethod::QuadratureGram)),
        other => Err(format!("unknown method {other:?}")),
    }
}

#[derive(Clone, Debug)]
pub struct Sweep {
    pub delta_min: f64,
    pub delta_max: f64,
    pub count: usize,
    pub method: String,
    pub degree: usize,
}

fn config(domain_json: &str, coords: &[f64], sweep: &Sweep) -> Result<ExperimentConfig, String> {
    let spec = DomainSpec::from_json(domain_json).map_err(err)?;
    let mut cfg = ExperimentConfig::new(spec);
    cfg.points = vec![coords.chunks(2).map(|p| [p[0], p[1]]).collect()];
    cfg.delta_min = sweep.delta_min;
    cfg.delta_max = sweep.delta_max;
    cfg.delta_count = sweep.count;
    cfg.method = method(&sweep.method)?;
    cfg.degree = sweep.degree;
    Ok(cfg)
}

/// Kernel values along the normal, the fitted exponent and the flatness verdict.
pub fn kernel_sweep_json(domain_json: &str, coords: &[f64], sweep: &Sweep) -> Result<String, String> {
    let p = point(coords)?;
    let cfg = config(domain_json, coords, sweep)?;
    let domain = cfg.validate().map_err(err)?;
    let report = detect_levi_flatness(&domain, &p, &cfg).map_err(err)?;
    serde_json::to_string(&report).map_err(err)
}

/// Squared Bergman metric, `M(z, X)` and Kobayashi bounds for the default directions.
pub fn metric_sweep_json(domain_json: &str, coords: &[f64], sweep: &Sweep, kobayashi: bool) -> Result<String, String> {
    let p = point(coords)?;
    let cfg = config(domain_json, coords, sweep)?;
    let domain = cfg.validate().map_err(err)?;
    let dirs = default_directions(&domain, &p).map_err(err)?;
    let report = fit_metric_exponents(&domain, &p, &dirs, &cfg, kobayashi).map_err(err)?;
    serde_json::to_string(&report).map_err(err)
}

/// `|h|` on an `n × n` grid of the coordinate line `z_axis = p_axis + x + iy`,
/// `|x|, |y| ≤ half_width`, row by row from the top. `NaN` outside the
/// domain or the certified peak region.
pub fn peak_grid_values(
    domain_json: &str,
    coords: &[f64],
    axis: usize,
    half_width: f64,
    n: usize,
) -> Result<Vec<f64>, String> {
    let p = point(coords)?;
    if axis >= p.len() {
        return Err(format!("axis {axis} out of range for dimension {}", p.len()));
    }
    if n < 2 || !(half_width > 0.0) {
        return Err("need n >= 2 and a positive half width".into());
    }
    let domain = DomainSpec::from_json(domain_json).and_then(|s| s.build()).map_err(err)?;
    let chart = normalize_chart(&domain, &p).map_err(err)?;
    let step = 2.0 * half_width / (n - 1) as f64;
    let mut out = Vec::with_capacity(n * n);
    for row in 0..n {
        for col in 0..n {
            let mut z = p.clone();
            z[axis] += c(-half_width + col as f64 * step, half_width - row as f64 * step);
            let v = if domain.contains(&z) {
                match peak_function(&chart, &z) {
                    Ok(h) => h.norm(),
                    Err(Error::OutOfChart { .. }) => f64::NAN,
                    Err(e) => return Err(err(e)),
                }
            } else {
                f64::NAN
            };
            out.push(v);
        }
    }
    Ok(out)
}

/// Certified radius of the peak region and the chart eigenvalues.
pub fn chart_summary_json(domain_json: &str, coords: &[f64]) -> Result<String, String> {
    let p = point(coords)?;
    let domain = DomainSpec::from_json(domain_json).and_then(|s| s.build()).map_err(err)?;
    let chart = normalize_chart(&domain, &p).map_err(err)?;
    Ok(json!({
        "lambda": chart.lambda,
        "levi_rank": chart.levi_rank,
        "leaf_dimension": chart.leaf_dimension,
        "valid_radius": chart.valid_radius,
        "peak_radius": chart.peak_radius,
    })
    .to_string())
}

#[wasm_bindgen]
pub fn kernel_sweep(
    domain_json: &str,
    coords: &[f64],
    delta_min: f64,
    delta_max: f64,
    count: usize,
    method: &str,
    degree: usize,
) -> Result<String, JsError> {
    let sweep = Sweep { delta_min, delta_max, count, method: method.into(), degree };
    kernel_sweep_json(domain_json, coords, &sweep).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn metric_sweep(
    domain_json: &str,
    coords: &[f64],
    delta_min: f64,
    delta_max: f64,
    count: usize,
    method: &str,
    degree: usize,
    kobayashi: bool,
) -> Result<String, JsError> {
    let sweep = Sweep { delta_min, delta_max, count, method: method.into(), degree };
    metric_sweep_json(domain_json, coords, &sweep, kobayashi).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn peak_grid(domain_json: &str, coords: &[f64], axis: usize, half_width: f64, n: usize) -> Result<Vec<f64>, JsError> {
    peak_grid_values(domain_json, coords, axis, half_width, n).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn chart_summary(domain_json: &str, coords: &[f64]) -> Result<String, JsError> {
    chart_summary_json(domain_json, coords).map_err(|e| JsError::new(&e))
}
