//! δ-sweeps along the inward normal and exponent fits.

use serde::Serialize;

use crate::bergman::{bergman_log_levi, bergman_kernel, KernelEvaluator};
use crate::error::{Error, Result};
use crate::geometry::{outward_normal, DomainModel};
use crate::kobayashi::{best_sibony_lower, comparability_m, kobayashi_upper, DiscFamily};
use crate::linalg::{c, hermitian_form, norm, ComplexVector};
use crate::normalization::certify_constant_rank;
use crate::sampling::par_map;

use super::config::ExperimentConfig;
use super::fit::loglog;

/// Largest log-log residual for which a fit counts as stable.
pub const STABLE_RESIDUAL: f64 = 0.05;
/// Kobayashi bands wider than this ratio are reported as inconclusive.
pub const BAND_LIMIT: f64 = 10.0;

fn pairs(v: &ComplexVector) -> Vec<[f64; 2]> {
    v.iter().map(|w| [w.re, w.im]).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct ExponentFit {
    pub probe: Vec<[f64; 2]>,
    pub deltas: Vec<f64>,
    pub values: Vec<f64>,
    pub slope: f64,
    pub intercept: f64,
    /// Slope over every probe, before trimming to the stable sub-range.
    pub full_slope: f64,
    /// Number of leading (largest) deltas left out of the fit.
    pub trimmed: usize,
    pub predicted: f64,
    pub residual: f64,
    pub stable: bool,
    pub method: String,
    /// Smallest δ the evaluator is trusted at, when it has one.
    pub floor: Option<f64>,
}

impl ExponentFit {
    /// Drops the largest deltas one at a time, down to half the sweep,
    /// until the log-log residual is at most [`STABLE_RESIDUAL`].
    fn new(p: &ComplexVector, deltas: Vec<f64>, values: Vec<f64>, predicted: f64, method: &str, floor: Option<f64>) -> Self {
        let full = loglog(&deltas, &values);
        let min_points = (deltas.len().div_ceil(2)).max(3).min(deltas.len());
        let mut trimmed = 0;
        let mut fit = full;
        while fit.max_residual > STABLE_RESIDUAL && deltas.len() - trimmed > min_points {
            trimmed += 1;
            fit = loglog(&deltas[trimmed..], &values[trimmed..]);
        }
        ExponentFit {
            probe: pairs(p),
            deltas,
            values,
            slope: fit.slope,
            intercept: fit.intercept,
            full_slope: full.slope,
            trimmed,
            predicted,
            residual: fit.max_residual,
            stable: fit.max_residual <= STABLE_RESIDUAL,
            method: method.to_string(),
            floor,
        }
    }

    pub fn deviation(&self) -> f64 {
        (self.slope - self.predicted).abs()
    }
}

/// `p − δν(p)` for each δ, all required to lie in the domain.
pub fn probe_ray(domain: &DomainModel, p: &ComplexVector, deltas: &[f64]) -> Result<Vec<ComplexVector>> {
    let nu = outward_normal(domain, p)?;
    deltas
        .iter()
        .map(|&d| {
            let z = p - &nu * c(d, 0.0);
            if domain.contains(&z) {
                Ok(z)
            } else {
                Err(Error::OutOfRange(format!("probe at delta {d:e} is not inside the domain")))
            }
        })
        .collect()
}

/// Deltas at or above the evaluator's floor, with the floor.
fn trusted_deltas(ev: &KernelEvaluator, deltas: &[f64]) -> Result<(Vec<f64>, Option<f64>)> {
    let floor = ev.delta_min();
    let kept: Vec<f64> = deltas.iter().copied().filter(|&d| floor.is_none_or(|f| d >= f)).collect();
    if kept.len() < 3 {
        return Err(Error::Precondition(format!(
            "only {} deltas above the evaluator floor {floor:?}",
            kept.len()
        )));
    }
    Ok((kept, floor))
}

/// Fits `log K(p − δν)` against `log δ`; the prediction is `−(n − l + 1)`
/// with `l` the Levi nullity at `p`.
pub fn fit_kernel_exponent(domain: &DomainModel, p: &ComplexVector, config: &ExperimentConfig) -> Result<ExponentFit> {
    let data = certify_constant_rank(domain, p)?;
    let n = domain.dimension();
    let l = data.nullity();
    let ev = config.evaluator(domain)?;
    let (deltas, floor) = trusted_deltas(&ev, &config.deltas())?;
    let zs = probe_ray(domain, p, &deltas)?;
    let values = par_map(&zs, |z| bergman_kernel(domain, z, &ev)).into_iter().collect::<Result<Vec<_>>>()?;
    Ok(ExponentFit::new(p, deltas, values, -((n - l + 1) as f64), ev.method.label(), floor))
}

#[derive(Clone, Debug, Serialize)]
pub struct MetricDirection {
    pub label: String,
    pub vector: ComplexVector,
    pub expected_slope: f64,
}

/// Complex normal, one strictly pseudoconvex tangential direction and one
/// null tangential direction, as far as the Levi form at `p` has them.
pub fn default_directions(domain: &DomainModel, p: &ComplexVector) -> Result<Vec<MetricDirection>> {
    let data = certify_constant_rank(domain, p)?;
    let mut out = vec![MetricDirection {
        label: "normal".into(),
        vector: outward_normal(domain, p)?,
        expected_slope: -2.0,
    }];
    if data.rank > 0 {
        out.push(MetricDirection {
            label: "tangential".into(),
            vector: data.eigenvectors.column(0).into_owned(),
            expected_slope: -1.0,
        });
    }
    if data.nullity() > 0 {
        out.push(MetricDirection {
            label: "null".into(),
            vector: data.nullspace_basis.column(0).into_owned(),
            expected_slope: 0.0,
        });
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct KobayashiBand {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    /// Largest `upper/lower` over the sweep.
    pub max_ratio: f64,
    pub inconclusive: bool,
    pub sandwich_violations: usize,
    /// Fit of `upper²`, absent when inconclusive.
    pub fit: Option<ExponentFit>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MetricFit {
    pub direction: MetricDirection,
    /// Fit of the squared Bergman metric.
    pub bergman: ExponentFit,
    /// `M(z, X)` at each probe.
    pub comparability: Vec<f64>,
    pub kobayashi: Option<KobayashiBand>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MetricReport {
    pub fits: Vec<MetricFit>,
    /// Fitted constant of the `|X|²` term.
    pub c3: f64,
    /// `max/min` of `F²/(M + C₃|X|²)` over all directions and probes.
    pub comparability_band: f64,
}

/// Squared Bergman metric sweeps with `M(z, X)` and, if `with_kobayashi`,
/// the Kobayashi band from Möbius witnesses and polynomial discs.
pub fn fit_metric_exponents(
    domain: &DomainModel,
    p: &ComplexVector,
    directions: &[MetricDirection],
    config: &ExperimentConfig,
    with_kobayashi: bool,
) -> Result<MetricReport> {
    certify_constant_rank(domain, p)?;
    let ev = config.evaluator(domain)?;
    let (deltas, floor) = trusted_deltas(&ev, &config.deltas())?;
    let zs = probe_ray(domain, p, &deltas)?;
    let levis = par_map(&zs, |z| bergman_log_levi(domain, z, &ev)).into_iter().collect::<Result<Vec<_>>>()?;
    let fam = DiscFamily::new(config.disc_degree);
    let mut fits = Vec::new();
    for dir in directions {
        let x = &dir.vector;
        let values: Vec<f64> = levis.iter().map(|m| hermitian_form(m, x, x).re).collect();
        if values.iter().any(|v| !(*v > 0.0)) {
            return Err(Error::Conditioning { condition: f64::INFINITY, suggested_degree: ev.degree_cap });
        }
        let bergman = ExponentFit::new(p, deltas.clone(), values, dir.expected_slope, ev.method.label(), floor);
        let comparability = zs.iter().map(|z| comparability_m(domain, z, x)).collect::<Result<Vec<_>>>()?;
        let kobayashi = if with_kobayashi {
            let bounds = par_map(&zs, |z| -> Result<(f64, f64)> {
                Ok((best_sibony_lower(domain, z, x)?, kobayashi_upper(domain, z, x, &fam)?.upper))
            })
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
            let (lower, upper): (Vec<f64>, Vec<f64>) = bounds.into_iter().unzip();
            let max_ratio = lower.iter().zip(&upper).map(|(l, u)| u / l).fold(0.0, f64::max);
            let sandwich_violations = lower.iter().zip(&upper).filter(|(l, u)| **l > **u + 1e-9).count();
            let inconclusive = !(max_ratio <= BAND_LIMIT);
            let fit = (!inconclusive).then(|| {
                let sq: Vec<f64> = upper.iter().map(|u| u * u).collect();
                ExponentFit::new(p, deltas.clone(), sq, dir.expected_slope, "disc", None)
            });
            Some(KobayashiBand { lower, upper, max_ratio, inconclusive, sandwich_violations, fit })
        } else {
            None
        };
        fits.push(MetricFit { direction: dir.clone(), bergman, comparability, kobayashi });
    }
    let samples: Vec<(f64, f64, f64)> = fits
        .iter()
        .flat_map(|f| {
            let x2 = norm(&f.direction.vector).powi(2);
            f.bergman.values.iter().zip(&f.comparability).map(move |(v, m)| (*v, *m, x2))
        })
        .collect();
    let (c3, comparability_band) = fit_c3(&samples);
    Ok(MetricReport { fits, c3, comparability_band })
}

/// `C₃` minimizing `max/min` of `F²/(M + C₃|X|²)`, on a logarithmic grid.
pub fn fit_c3(samples: &[(f64, f64, f64)]) -> (f64, f64) {
    let band = |c3: f64| {
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for (f2, m, x2) in samples {
            let r = f2 / (m + c3 * x2);
            lo = lo.min(r);
            hi = hi.max(r);
        }
        hi / lo
    };
    let mut best = (1.0, band(1.0));
    for k in -400..=400 {
        let c3 = 10f64.powf(k as f64 / 100.0);
        let b = band(c3);
        if b < best.1 {
            best = (c3, b);
        }
    }
    best
}
