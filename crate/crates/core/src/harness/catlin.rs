//! Kernel size against the product `Π β_j^{−2}` of the barrier box radii.

use serde::Serialize;

use crate::barrier::{build_barrier_family, delta_max, BarrierConstants, SamplePlan};
use crate::bergman::bergman_kernel;
use crate::error::Result;
use crate::geometry::DomainModel;
use crate::linalg::ComplexVector;
use crate::normalization::normalize_chart;
use crate::sampling::par_map;

use super::config::ExperimentConfig;
use super::sweep::probe_ray;

#[derive(Clone, Debug, Serialize)]
pub struct CatlinRow {
    pub delta: f64,
    pub kernel: f64,
    pub prediction: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CatlinReport {
    pub rows: Vec<CatlinRow>,
    /// `max ratio / min ratio`.
    pub band: f64,
    /// Smallest `C` with every ratio in `[1/C, C]`.
    pub constant: f64,
    /// Deltas without a certified barrier.
    pub gaps: Vec<f64>,
    pub constants: Option<BarrierConstants>,
    pub levi_rank: usize,
    pub method: String,
}

/// `(sδ)^{−2}·(s²δ)^{−r}·s^{−2l}` with `s` the β scale.
pub fn catlin_prediction(delta: f64, n: usize, rank: usize, scale: f64) -> f64 {
    (scale * delta).powi(-2) * delta.powi(-(rank as i32)) * scale.powi(-2 * (n as i32 - 1))
}

/// Needs a barrier certified at each δ of the sweep; δ where certification
/// fails are listed as gaps and left out of the band.
pub fn catlin_consistency(domain: &DomainModel, p: &ComplexVector, config: &ExperimentConfig) -> Result<CatlinReport> {
    let chart = normalize_chart(domain, p)?;
    let n = domain.dimension();
    let cap = delta_max(&chart);
    let plan = SamplePlan { seed: config.seed, ..SamplePlan::default() };
    let (inside, mut gaps): (Vec<f64>, Vec<f64>) = config.deltas().into_iter().partition(|&d| d <= cap);
    let mut certified = Vec::new();
    let mut constants = None;
    match build_barrier_family(&chart, &inside, config.barrier_budget, &plan) {
        Ok(family) => {
            constants = family.first().map(|b| b.constants);
            certified = inside;
        }
        Err(_) => {
            for d in inside {
                match build_barrier_family(&chart, &[d], config.barrier_budget, &plan) {
                    Ok(_) => certified.push(d),
                    Err(_) => gaps.push(d),
                }
            }
        }
    }
    let ev = config.evaluator(domain)?;
    let zs = probe_ray(domain, p, &certified)?;
    let kernels = par_map(&zs, |z| bergman_kernel(domain, z, &ev)).into_iter().collect::<Result<Vec<_>>>()?;
    let rows: Vec<CatlinRow> = certified
        .iter()
        .zip(kernels)
        .map(|(&delta, kernel)| {
            let prediction = catlin_prediction(delta, n, chart.levi_rank, config.beta_scale);
            CatlinRow { delta, kernel, prediction, ratio: kernel / prediction }
        })
        .collect();
    let lo = rows.iter().map(|r| r.ratio).fold(f64::INFINITY, f64::min);
    let hi = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    Ok(CatlinReport {
        band: hi / lo,
        constant: hi.max(1.0 / lo),
        rows,
        gaps,
        constants,
        levi_rank: chart.levi_rank,
        method: ev.method.label().to_string(),
    })
}
