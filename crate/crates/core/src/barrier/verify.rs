//! Sampling certification of the barrier properties.

use nalgebra::Cholesky;
use rand::Rng;
use serde::Serialize;

use super::boxes::{omega_coefficients, FrequencyBox};
use super::function::{BarrierConstants, BarrierFunction};
use crate::error::{Error, Result};
use crate::harness::ols;
use crate::linalg::{c, max_abs, min_hermitian_eigenvalue, real_gradient, real_hessian, ComplexMatrix, ComplexVector};
use crate::sampling;

/// Relative tolerance for plurisubharmonicity.
pub const PSH_TOL: f64 = 1e-9;
const MAX_TRIES: usize = 400;

#[derive(Clone, Debug, Serialize)]
pub struct SamplePlan {
    /// Samples of `Ω̃_p` (the chart image).
    pub global: usize,
    /// Samples of `P_{δ,a} ∩ Ω̃_p`.
    pub local: usize,
    pub q_samples: usize,
    pub derivative_samples: usize,
    pub seed: u64,
}

impl Default for SamplePlan {
    fn default() -> Self {
        SamplePlan {
            global: 2_000,
            local: 8_000,
            q_samples: 1_000,
            derivative_samples: 200,
            seed: 0xba_441e,
        }
    }
}

impl SamplePlan {
    pub fn total(&self) -> usize {
        self.global + self.local
    }
}

/// Points of `Ω̃_p` drawn for properties (1) and (2).
pub struct Samples {
    pub points: Vec<ComplexVector>,
}

fn draw_inside<R: Rng>(
    bf: &BarrierFunction,
    rng: &mut R,
    count: usize,
    mut draw: impl FnMut(&mut R) -> ComplexVector,
) -> Result<Vec<ComplexVector>> {
    let mut out = Vec::with_capacity(count);
    let mut tries = 0;
    while out.len() < count {
        tries += 1;
        if tries > MAX_TRIES * count.max(1) {
            return Err(Error::numerical(
                "could not sample the chart image",
                format!("{} of {count} points after {tries} draws", out.len()),
            ));
        }
        let z = draw(rng);
        if bf.chart.contains(&z) {
            out.push(z);
        }
    }
    Ok(out)
}

impl Samples {
    /// Global samples in the chart ball and local samples in `P_{δ,a}`.
    pub fn draw(bf: &BarrierFunction, a: f64, plan: &SamplePlan) -> Result<Self> {
        let mut rng = sampling::rng(plan.seed);
        let n = bf.dimension();
        let r = bf.chart.valid_radius;
        let mut points = draw_inside(bf, &mut rng, plan.global, |g| sampling::in_ball(g, n, r))?;
        let pbox = bf.p_box(a)?;
        points.extend(draw_inside(bf, &mut rng, plan.local, |g| pbox.sample(g))?);
        Ok(Samples { points })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GlobalReport {
    pub samples: usize,
    pub min_value: f64,
    pub max_value: f64,
    /// Smallest `λ_min(L_g)/max(1, |L_g|)` over the samples.
    pub min_scaled_eigenvalue: f64,
    pub worst_point: Vec<[f64; 2]>,
    pub bounds_pass: bool,
    pub psh_pass: bool,
}

impl GlobalReport {
    pub fn pass(&self) -> bool {
        self.bounds_pass && self.psh_pass
    }

    pub(crate) fn describe(&self, k: &BarrierConstants) -> String {
        format!(
            "g in [{:e}, {:e}], scaled min eigenvalue {:e} at {:?} with {:?}",
            self.min_value, self.max_value, self.min_scaled_eigenvalue, self.worst_point, k
        )
    }
}

fn pairs(z: &ComplexVector) -> Vec<[f64; 2]> {
    z.iter().map(|x| [x.re, x.im]).collect()
}

/// Properties (1) and (2) on the given samples.
pub fn check_global(bf: &BarrierFunction, samples: &Samples) -> Result<GlobalReport> {
    let evals = sampling::par_map(&samples.points, |z| {
        bf.eval(z).map(|j| {
            let scale = max_abs(&j.levi).max(1.0);
            (j.value, min_hermitian_eigenvalue(&j.levi) / scale)
        })
    });
    let mut report = GlobalReport {
        samples: samples.points.len(),
        min_value: f64::INFINITY,
        max_value: f64::NEG_INFINITY,
        min_scaled_eigenvalue: f64::INFINITY,
        worst_point: Vec::new(),
        bounds_pass: true,
        psh_pass: true,
    };
    for (z, e) in samples.points.iter().zip(evals) {
        let (v, ev) = e?;
        report.min_value = report.min_value.min(v);
        report.max_value = report.max_value.max(v);
        if ev < report.min_scaled_eigenvalue {
            report.min_scaled_eigenvalue = ev;
            report.worst_point = pairs(z);
        }
    }
    report.bounds_pass = report.min_value >= 0.0 && report.max_value <= 1.0;
    report.psh_pass = report.min_scaled_eigenvalue >= -PSH_TOL;
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct LowerBoundReport {
    pub samples: usize,
    /// `min_ζ min_Y L_g(ζ,Y)/W(ζ,Y)` over `Q_{δ,c}`.
    pub c0: f64,
    pub worst_point: Vec<[f64; 2]>,
    /// Whether every sample of `Q_{δ,c}` lay in `Ω̃_p ∩ P_{δ,ab}`.
    pub box_inside: bool,
}

impl LowerBoundReport {
    pub fn pass(&self) -> bool {
        self.box_inside && self.c0 > 0.0
    }
}

/// Hermitian matrix of `|⟨∂ρ,Y⟩|²/δ² + Σ'|Y_j|²/δ + Σ''|Y_j|²`.
pub fn lower_bound_weight(gradient: &ComplexVector, delta: f64, l: usize) -> Result<ComplexMatrix> {
    let n = gradient.len();
    let w = omega_coefficients(n, delta, l)?;
    let mut m = gradient * gradient.adjoint() * c(1.0 / (delta * delta), 0.0);
    for j in 1..n {
        m[(j, j)] += c(w[j], 0.0);
    }
    Ok(m)
}

/// Smallest generalized eigenvalue of `(L, W)` for positive definite `W`.
pub fn generalized_min_eigenvalue(l: &ComplexMatrix, w: &ComplexMatrix) -> Result<f64> {
    let chol = Cholesky::new(w.clone())
        .ok_or_else(|| Error::numerical("weight matrix is not positive definite", format!("{w}")))?;
    let lower = chol.l();
    let inv = lower
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::numerical("singular Cholesky factor", ""))?;
    let m = &inv * l * inv.adjoint();
    Ok(min_hermitian_eigenvalue(&((&m + m.adjoint()) * c(0.5, 0.0))))
}

/// Property (3) on `count` samples of the box `q`.
pub fn check_lower_bound(bf: &BarrierFunction, q: &FrequencyBox, count: usize, seed: u64) -> Result<LowerBoundReport> {
    let mut rng = sampling::rng(seed ^ 0x0b0c);
    let pts: Vec<ComplexVector> = (0..count).map(|_| q.sample(&mut rng)).collect();
    let outer = bf.p_box(bf.constants.a * bf.constants.b)?;
    let l = bf.leaf_dimension();
    let vals = sampling::par_map(&pts, |z| -> Result<Option<f64>> {
        if !bf.chart.contains(z) || !outer.contains(z) {
            return Ok(None);
        }
        let jet = bf.eval(z)?;
        let rho = bf.chart.defining_jet(z)?;
        let w = lower_bound_weight(&rho.gradient, bf.delta, l)?;
        generalized_min_eigenvalue(&jet.levi, &w).map(Some)
    });
    let mut report = LowerBoundReport {
        samples: count,
        c0: f64::INFINITY,
        worst_point: Vec::new(),
        box_inside: true,
    };
    for (z, v) in pts.iter().zip(vals) {
        match v? {
            None => {
                report.box_inside = false;
                report.worst_point = pairs(z);
            }
            Some(v) if v < report.c0 => {
                report.c0 = v;
                if report.box_inside {
                    report.worst_point = pairs(z);
                }
            }
            Some(_) => {}
        }
    }
    if !report.box_inside {
        report.c0 = report.c0.min(0.0);
    }
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Axis {
    Re,
    Im,
}

#[derive(Clone, Debug, Serialize)]
pub struct DerivativeBound {
    /// Multi-index over the complex coordinates; every derivative is taken
    /// along the real (or every one along the imaginary) axis.
    pub alpha: Vec<u32>,
    pub axis: Axis,
    pub max_abs: f64,
    /// `α₁ + ½ Σ' α_j`.
    pub expected_exponent: f64,
    /// `max_abs · δ^{expected_exponent}`.
    pub constant: f64,
}

fn multi_indices(n: usize, max_order: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![0u32; n]];
    let mut frontier = out.clone();
    for _ in 0..max_order {
        let mut next = Vec::new();
        for a in &frontier {
            let start = a.iter().rposition(|&k| k > 0).unwrap_or(0);
            for j in start..n {
                let mut b = a.clone();
                b[j] += 1;
                next.push(b);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out.remove(0);
    out
}

fn expected_exponent(alpha: &[u32], n: usize, l: usize) -> f64 {
    let tangential: u32 = alpha[1..n - l].iter().sum();
    alpha[0] as f64 + 0.5 * tangential as f64
}

/// `|D^α g|` for `|α| ≤ 3` on samples of `P_{δ,ab} ∩ Ω̃_p`. First and second
/// derivatives are analytic; third derivatives are central differences of
/// the analytic Hessian with steps matched to the box scales.
pub fn derivative_bounds(bf: &BarrierFunction, count: usize, seed: u64) -> Result<Vec<DerivativeBound>> {
    let n = bf.dimension();
    let l = bf.leaf_dimension();
    let k = &bf.constants;
    let pbox = bf.p_box(k.a * k.b)?;
    let radii = pbox.radii();
    // draw in the unit polydisc and scale, so sample sets correspond across δ
    let mut rng = sampling::rng(seed ^ 0xde41);
    let mut pts = Vec::with_capacity(count);
    let mut tries = 0;
    while pts.len() < count && tries < MAX_TRIES * count.max(1) {
        tries += 1;
        let z = ComplexVector::from_iterator(n, (0..n).map(|j| sampling::in_disc(&mut rng, 1.0) * radii[j]));
        if bf.chart.contains(&z) {
            pts.push(z);
        }
    }
    if pts.len() < count {
        return Err(Error::numerical("could not sample P-box", format!("{} points", pts.len())));
    }
    let steps: Vec<f64> = (0..n)
        .map(|j| {
            if j == 0 {
                1e-3 * bf.delta / k.m
            } else if j < n - l {
                1e-3 * (bf.delta / k.m).sqrt()
            } else {
                1e-3 * k.a
            }
        })
        .collect();
    let indices = multi_indices(n, 3);
    let hessian = |z: &ComplexVector| -> Result<nalgebra::DMatrix<f64>> {
        let j = bf.eval(z)?;
        Ok(real_hessian(&j.levi, &j.holo))
    };
    let per_point = sampling::par_map(&pts, |z| -> Result<Vec<f64>> {
        let jet = bf.eval(z)?;
        let g = real_gradient(&jet.gradient);
        let h = real_hessian(&jet.levi, &jet.holo);
        let mut third = std::collections::HashMap::new();
        let mut out = Vec::new();
        for axis in [Axis::Re, Axis::Im] {
            let off = if axis == Axis::Re { 0 } else { n };
            for alpha in &indices {
                let mut idx = Vec::new();
                for (j, &a) in alpha.iter().enumerate() {
                    idx.extend(std::iter::repeat(j).take(a as usize));
                }
                let v = match idx.len() {
                    1 => g[idx[0] + off],
                    2 => h[(idx[0] + off, idx[1] + off)],
                    _ => {
                        let d = idx[0];
                        if !third.contains_key(&(d + off)) {
                            let mut zp = z.clone();
                            let mut zm = z.clone();
                            let step = if axis == Axis::Re { c(steps[d], 0.0) } else { c(0.0, steps[d]) };
                            zp[d] += step;
                            zm[d] -= step;
                            let diff = (hessian(&zp)? - hessian(&zm)?) / (2.0 * steps[d]);
                            third.insert(d + off, diff);
                        }
                        third[&(d + off)][(idx[1] + off, idx[2] + off)]
                    }
                };
                out.push(v.abs());
            }
        }
        Ok(out)
    });
    let mut maxima = vec![0.0f64; 2 * indices.len()];
    for row in per_point {
        for (m, v) in maxima.iter_mut().zip(row?) {
            *m = m.max(v);
        }
    }
    let mut out = Vec::new();
    for (ai, axis) in [Axis::Re, Axis::Im].into_iter().enumerate() {
        for (k, alpha) in indices.iter().enumerate() {
            let e = expected_exponent(alpha, n, l);
            let m = maxima[ai * indices.len() + k];
            out.push(DerivativeBound {
                alpha: alpha.clone(),
                axis,
                max_abs: m,
                expected_exponent: e,
                constant: m * bf.delta.powf(e),
            });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct CertificationReport {
    pub delta: f64,
    pub constants: BarrierConstants,
    pub attempts: usize,
    pub bounds: GlobalReport,
    pub lower_bound: LowerBoundReport,
    pub derivatives: Vec<DerivativeBound>,
}

impl CertificationReport {
    pub fn property1(&self) -> bool {
        self.bounds.bounds_pass
    }

    pub fn property2(&self) -> bool {
        self.bounds.psh_pass
    }

    pub fn property3(&self) -> bool {
        self.lower_bound.pass()
    }

    pub fn pass(&self) -> bool {
        self.property1() && self.property2() && self.property3()
    }
}

/// Runs all four property checks.
pub fn verify_barrier(bf: &BarrierFunction, plan: &SamplePlan) -> Result<CertificationReport> {
    let samples = Samples::draw(bf, bf.constants.a, plan)?;
    let bounds = check_global(bf, &samples)?;
    let lower_bound = check_lower_bound(bf, &bf.q_box()?, plan.q_samples, plan.seed)?;
    let derivatives = derivative_bounds(bf, plan.derivative_samples, plan.seed)?;
    Ok(CertificationReport {
        delta: bf.delta,
        constants: bf.constants,
        attempts: bf.attempts,
        bounds,
        lower_bound,
        derivatives,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DerivativeScaling {
    pub alpha: Vec<u32>,
    pub axis: Axis,
    pub fitted_slope: f64,
    pub expected_slope: f64,
}

impl DerivativeScaling {
    pub fn deviation(&self) -> f64 {
        (self.fitted_slope - self.expected_slope).abs()
    }

    /// Real-axis derivatives must follow the predicted power within `tol`;
    /// imaginary-axis derivatives may grow more slowly (the bound is an
    /// upper bound and `g` depends on `Im ζ₁` only weakly) but not faster.
    pub fn consistent(&self, tol: f64) -> bool {
        match self.axis {
            Axis::Re => self.deviation() <= tol,
            Axis::Im => self.fitted_slope >= self.expected_slope - tol,
        }
    }
}

/// Log-log slopes of `max |D^α g|` against `δ` across reports built with the
/// same constants. Multi-indices whose derivative vanishes identically are
/// skipped.
pub fn derivative_scaling(reports: &[CertificationReport]) -> Vec<DerivativeScaling> {
    let mut out = Vec::new();
    if reports.len() < 2 {
        return out;
    }
    for (k, first) in reports[0].derivatives.iter().enumerate() {
        let ys: Vec<f64> = reports.iter().map(|r| r.derivatives[k].max_abs).collect();
        let peak = ys.iter().cloned().fold(0.0, f64::max);
        if ys.iter().any(|&y| y <= 1e-12 * peak.max(1e-300)) || peak == 0.0 {
            continue;
        }
        let xs: Vec<f64> = reports.iter().map(|r| r.delta.ln()).collect();
        let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
        out.push(DerivativeScaling {
            alpha: first.alpha.clone(),
            axis: first.axis,
            fitted_slope: ols(&xs, &ly).slope,
            expected_slope: -first.expected_exponent,
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{cvec, hermitian_form};

    #[test]
    fn multi_index_count() {
        // C(n+3, 3) − 1
        assert_eq!(multi_indices(2, 3).len(), 9);
        assert_eq!(multi_indices(3, 3).len(), 19);
    }

    #[test]
    fn generalized_eigenvalue_is_a_lower_bound() {
        let g = cvec(&[c(0.5, 0.1), c(0.05, 0.0)]);
        let w = lower_bound_weight(&g, 0.01, 0).unwrap();
        let lm = ComplexMatrix::from_row_slice(2, 2, &[c(3e3, 0.0), c(10.0, 5.0), c(10.0, -5.0), c(80.0, 0.0)]);
        let c0 = generalized_min_eigenvalue(&lm, &w).unwrap();
        let mut rng = sampling::rng(4);
        let mut best = f64::INFINITY;
        for _ in 0..20_000 {
            let y = sampling::unit_vector(&mut rng, 2);
            let yc = y.map(|x| x.conj());
            let r = hermitian_form(&lm, &y, &y).re / hermitian_form(&w, &y, &y).re;
            assert!(r >= c0 * (1.0 - 1e-9));
            best = best.min(r).min(hermitian_form(&lm, &yc, &yc).re / hermitian_form(&w, &yc, &yc).re);
        }
        assert!(best < c0 * 1.05);
    }
}
