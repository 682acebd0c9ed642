//! Barrier certification across a δ-sweep.

use serde::Serialize;

use crate::barrier::{build_barrier_family, derivative_scaling, verify_barrier, CertificationReport, DerivativeScaling, SamplePlan};
use crate::error::Result;
use crate::geometry::DomainModel;
use crate::linalg::ComplexVector;
use crate::normalization::normalize_chart;

/// Largest allowed deviation of a derivative slope from its prediction.
pub const SLOPE_TOL: f64 = 0.1;

#[derive(Clone, Debug, Serialize)]
pub struct BarrierSweep {
    pub reports: Vec<CertificationReport>,
    pub scaling: Vec<DerivativeScaling>,
    /// `max c₀ / min c₀` across the sweep.
    pub c0_spread: f64,
    pub lambda: Vec<f64>,
}

impl BarrierSweep {
    pub fn pass(&self) -> bool {
        self.reports.iter().all(|r| r.pass()) && self.scaling.iter().all(|s| s.consistent(SLOPE_TOL))
    }
}

pub fn barrier_sweep(domain: &DomainModel, p: &ComplexVector, deltas: &[f64], budget: usize, plan: &SamplePlan) -> Result<BarrierSweep> {
    let chart = normalize_chart(domain, p)?;
    let family = build_barrier_family(&chart, deltas, budget, plan)?;
    let reports = family.iter().map(|bf| verify_barrier(bf, plan)).collect::<Result<Vec<_>>>()?;
    let c0: Vec<f64> = reports.iter().map(|r| r.lower_bound.c0).collect();
    let hi = c0.iter().cloned().fold(0.0, f64::max);
    let lo = c0.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(BarrierSweep {
        scaling: derivative_scaling(&reports),
        reports,
        c0_spread: hi / lo,
        lambda: chart.lambda.clone(),
    })
}
