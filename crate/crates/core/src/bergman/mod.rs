//! Bergman kernel on the diagonal and the Bergman metric.

mod gram;
mod series;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use gram::{graded_indices, GramSystem, QuadraturePlan, MAX_CONDITION};
pub use series::{series_kernel, SeriesValue};

use crate::error::{Error, Result};
use crate::geometry::{outward_normal, DomainModel};
use crate::linalg::{c, hermitian_form, max_abs, min_hermitian_eigenvalue, norm, ComplexMatrix, ComplexVector};

/// Largest accepted series remainder relative to the value.
pub const SERIES_TAIL_TOL: f64 = 1e-6;
const DEFAULT_SERIES_CAP: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelMethod {
    Oracle,
    ReinhardtSeries,
    QuadratureGram,
}

impl KernelMethod {
    pub fn label(&self) -> &'static str {
        match self {
            KernelMethod::Oracle => "oracle",
            KernelMethod::ReinhardtSeries => "series",
            KernelMethod::QuadratureGram => "gram",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct KernelEvaluator {
    pub method: KernelMethod,
    /// Per-coordinate exponent cap (series) or total degree (quadrature).
    pub degree_cap: usize,
    pub quadrature_plan: Option<QuadraturePlan>,
    pub conditioning: Option<f64>,
    #[serde(skip)]
    gram: Option<Arc<GramSystem>>,
    #[serde(skip)]
    domain_name: Option<String>,
}

impl KernelEvaluator {
    pub fn oracle() -> Self {
        KernelEvaluator {
            method: KernelMethod::Oracle,
            degree_cap: 0,
            quadrature_plan: None,
            conditioning: None,
            gram: None,
            domain_name: None,
        }
    }

    pub fn series() -> Self {
        Self::series_with_cap(DEFAULT_SERIES_CAP)
    }

    pub fn series_with_cap(cap: usize) -> Self {
        KernelEvaluator {
            method: KernelMethod::ReinhardtSeries,
            degree_cap: cap,
            ..Self::oracle()
        }
    }

    /// Orthonormalizes the polynomials of degree `≤ degree` on `domain`.
    pub fn gram(domain: &DomainModel, degree: usize) -> Result<Self> {
        Self::gram_with_plan(domain, degree, &QuadraturePlan::for_degree(degree))
    }

    pub fn gram_with_plan(domain: &DomainModel, degree: usize, plan: &QuadraturePlan) -> Result<Self> {
        let system = GramSystem::build(domain, degree, plan)?;
        Ok(KernelEvaluator {
            method: KernelMethod::QuadratureGram,
            degree_cap: degree,
            quadrature_plan: Some(plan.clone()),
            conditioning: Some(system.condition),
            gram: Some(Arc::new(system)),
            domain_name: Some(domain.name().to_string()),
        })
    }

    /// Smallest boundary distance at which the quadrature evaluator is
    /// trusted: a tenth of the smallest boundary radius about the centre,
    /// or none for the other methods.
    pub fn delta_min(&self) -> Option<f64> {
        self.gram.as_ref().map(|g| 0.1 * g.min_radius)
    }

    pub fn gram_system(&self) -> Option<&GramSystem> {
        self.gram.as_deref()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct KernelValue {
    pub kernel: f64,
    /// `∂²log K/∂z_j∂z̄_k`.
    #[serde(skip)]
    pub log_levi: ComplexMatrix,
    pub method: KernelMethod,
    /// Estimated series remainder.
    pub tail: Option<f64>,
}

/// `K(z, z)` with its log-Hessian.
pub fn evaluate_kernel(domain: &DomainModel, z: &ComplexVector, ev: &KernelEvaluator) -> Result<KernelValue> {
    domain.check_dim(z)?;
    if !domain.contains(z) {
        return Err(Error::arg("point is not inside the domain"));
    }
    match ev.method {
        KernelMethod::Oracle => {
            let forms = domain
                .closed_forms()
                .ok_or_else(|| Error::arg("domain has no closed-form kernel"))?;
            let kernel = forms.kernel(z).ok_or_else(|| Error::arg("domain has no closed-form kernel"))?;
            let log_levi = forms
                .kernel_log_levi(z)
                .ok_or_else(|| Error::arg("domain has no closed-form kernel"))?;
            Ok(KernelValue { kernel, log_levi, method: ev.method, tail: None })
        }
        KernelMethod::ReinhardtSeries => {
            let norms = domain
                .monomial_norms()
                .ok_or_else(|| Error::arg("series method needs a Reinhardt domain"))?;
            let v = series_kernel(norms, z, ev.degree_cap)?;
            if v.tail > SERIES_TAIL_TOL * v.kernel {
                return Err(Error::numerical(
                    "series not converged",
                    format!("tail {:e} for K = {:e}; raise the degree cap", v.tail, v.kernel),
                ));
            }
            Ok(KernelValue { kernel: v.kernel, log_levi: v.log_levi, method: ev.method, tail: Some(v.tail) })
        }
        KernelMethod::QuadratureGram => {
            let g = ev.gram.as_ref().ok_or_else(|| Error::arg("evaluator has no Gram system"))?;
            if ev.domain_name.as_deref() != Some(domain.name()) || g.dimension != domain.dimension() {
                return Err(Error::arg("evaluator was built for a different domain"));
            }
            let (kernel, log_levi) = g.evaluate(z);
            Ok(KernelValue { kernel, log_levi, method: ev.method, tail: None })
        }
    }
}

pub fn bergman_kernel(domain: &DomainModel, z: &ComplexVector, ev: &KernelEvaluator) -> Result<f64> {
    Ok(evaluate_kernel(domain, z, ev)?.kernel)
}

/// `∂²log K/∂z_j∂z̄_k` at `z`.
pub fn bergman_log_levi(domain: &DomainModel, z: &ComplexVector, ev: &KernelEvaluator) -> Result<ComplexMatrix> {
    Ok(evaluate_kernel(domain, z, ev)?.log_levi)
}

fn indefinite(ev: &KernelEvaluator, value: f64) -> Error {
    Error::Conditioning {
        condition: ev.conditioning.unwrap_or(f64::NAN).max(value.abs().recip()),
        suggested_degree: ev.degree_cap.saturating_sub(1),
    }
}

/// `(Σ ∂²log K/∂z_j∂z̄_k X_j X̄_k)^{1/2}`.
pub fn bergman_metric(domain: &DomainModel, z: &ComplexVector, x: &ComplexVector, ev: &KernelEvaluator) -> Result<f64> {
    domain.check_dim(x)?;
    if norm(x) == 0.0 {
        return Err(Error::arg("direction must be nonzero"));
    }
    let levi = bergman_log_levi(domain, z, ev)?;
    metric_from_levi(&levi, x, ev)
}

pub(crate) fn metric_from_levi(levi: &ComplexMatrix, x: &ComplexVector, ev: &KernelEvaluator) -> Result<f64> {
    let low = min_hermitian_eigenvalue(levi);
    if low <= -1e-10 * max_abs(levi) {
        return Err(indefinite(ev, low / max_abs(levi)));
    }
    let q = hermitian_form(levi, x, x).re;
    if !(q > 0.0) {
        return Err(indefinite(ev, q));
    }
    Ok(q.sqrt())
}

#[derive(Clone, Debug, Serialize)]
pub struct LocalizationReport {
    pub deltas: Vec<f64>,
    /// `K_{Ω∩U}(p_δ)/K_Ω(p_δ)` for the evaluated deltas.
    pub ratios: Vec<f64>,
    pub min: f64,
    pub max: f64,
    pub warnings: Vec<String>,
}

/// Ratios of the kernels of `local = Ω∩U` and `omega = Ω` along the inward
/// normal probes `p_δ = p − δν(p)`. The sweep stops at the first evaluator
/// failure, with a warning.
pub fn kernel_localization_ratio(
    omega: &DomainModel,
    omega_ev: &KernelEvaluator,
    local: &DomainModel,
    local_ev: &KernelEvaluator,
    p: &ComplexVector,
    deltas: &[f64],
) -> Result<LocalizationReport> {
    let nu = outward_normal(omega, p)?;
    let mut report = LocalizationReport {
        deltas: Vec::new(),
        ratios: Vec::new(),
        min: f64::INFINITY,
        max: f64::NEG_INFINITY,
        warnings: Vec::new(),
    };
    for &d in deltas {
        let z = p - &nu * c(d, 0.0);
        let r = bergman_kernel(local, &z, local_ev).and_then(|kl| Ok(kl / bergman_kernel(omega, &z, omega_ev)?));
        match r {
            Ok(r) => {
                report.deltas.push(d);
                report.ratios.push(r);
                report.min = report.min.min(r);
                report.max = report.max.max(r);
            }
            Err(e) => {
                report.warnings.push(format!("sweep truncated at delta = {d:e}: {e}"));
                break;
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::catalog_domain;
    use crate::linalg::{cvec, real_vector};
    use std::f64::consts::PI;

    #[test]
    fn disc_metric_at_origin() {
        let d = catalog_domain("ball", 1, &[]).unwrap();
        let m = bergman_metric(&d, &real_vector(&[0.0]), &real_vector(&[1.0]), &KernelEvaluator::series()).unwrap();
        assert!((m - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn ball_metric_at_origin() {
        let d = catalog_domain("ball", 2, &[]).unwrap();
        let z = real_vector(&[0.0, 0.0]);
        let x = real_vector(&[1.0, 0.0]);
        for ev in [KernelEvaluator::oracle(), KernelEvaluator::series()] {
            assert!((bergman_metric(&d, &z, &x, &ev).unwrap() - 3f64.sqrt()).abs() < 1e-13);
        }
    }

    #[test]
    fn series_needs_reinhardt_and_interior() {
        let d = catalog_domain("ball", 2, &[]).unwrap();
        assert!(bergman_kernel(&d, &real_vector(&[1.0, 0.0]), &KernelEvaluator::series()).is_err());
        let e = catalog_domain("ellipsoid", 2, &[2.0, 1.0]).unwrap();
        assert!(bergman_kernel(&e, &real_vector(&[0.1, 0.0]), &KernelEvaluator::oracle()).is_err());
        assert!(bergman_kernel(&e, &real_vector(&[0.1, 0.0]), &KernelEvaluator::series()).is_ok());
    }

    #[test]
    fn annulus_uses_laurent_terms() {
        let d = catalog_domain("annulus_polydisc", 1, &[0.5]).unwrap();
        let z = cvec(&[c(0.0, 0.7)]);
        let k = bergman_kernel(&d, &z, &KernelEvaluator::series()).unwrap();
        // direct sum over k ∈ ℤ of r^{2k}/‖z^k‖²
        let r2: f64 = 0.49;
        let mut s = 1.0 / (2.0 * PI * 2f64.ln()) / r2;
        for k in (-200i32..200).filter(|&k| k != -1) {
            let m = (k + 1) as f64;
            s += r2.powi(k) * m / (PI * (1.0 - 0.25f64.powf(m)));
        }
        assert!((k / s - 1.0).abs() < 1e-10, "{k} vs {s}");
    }
}
