//! The barrier `g_{p,δ}` and the search for its constants.

use serde::Serialize;

use super::boxes::{omega_coefficients, FrequencyBox};
use super::cutoffs::CutoffPair;
use super::verify::{check_global, check_lower_bound, SamplePlan, Samples};
use crate::error::{Error, Result};
use crate::geometry::Jet;
use crate::linalg::{c, ComplexVector};
use crate::normalization::NormalizedChart;

const A_STEPS: usize = 7;
const M_START: f64 = 8.0;
const M_STEPS: usize = 10;
const C2_GRID: [f64; 3] = [4.0, 32.0, 256.0];
const B_GRID: [f64; 3] = [1.0, 0.5, 0.25];
/// Samples used to reject a candidate before the full plan.
const PILOT_FRACTION: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BarrierConstants {
    pub a: f64,
    pub b: f64,
    pub m: f64,
    pub c1: f64,
    pub c2: f64,
}

impl BarrierConstants {
    /// Scale `c = ab/2` of the boxes `Q_{δ,c}`.
    pub fn c(&self) -> f64 {
        0.5 * self.a * self.b
    }
}

/// `g_{p,δ}(ζ) = (χ₂(φ_δ(ζ) e^{Mρ(ζ)/δ}) + C₂|ζ|²)/C₁` on a normalized chart.
#[derive(Clone, Debug, Serialize)]
pub struct BarrierFunction {
    #[serde(skip)]
    pub chart: NormalizedChart,
    pub delta: f64,
    pub constants: BarrierConstants,
    pub cutoffs: CutoffPair,
    /// Search candidates tried before this one was accepted.
    pub attempts: usize,
}

/// Largest `δ` for which barriers are built on `chart`.
pub fn delta_max(chart: &NormalizedChart) -> f64 {
    chart.valid_radius * chart.valid_radius
}

fn omega_jet(zeta: &ComplexVector, w: &[f64]) -> Jet {
    let n = zeta.len();
    let mut jet = Jet::zeros(n);
    for j in 0..n {
        jet.value += w[j] * zeta[j].norm_sqr();
        jet.gradient[j] = zeta[j].conj() * w[j];
        jet.levi[(j, j)] = c(w[j], 0.0);
    }
    jet
}

impl BarrierFunction {
    pub fn new(chart: NormalizedChart, delta: f64, constants: BarrierConstants) -> Result<Self> {
        if !(delta > 0.0) {
            return Err(Error::arg("delta must be positive"));
        }
        if delta > delta_max(&chart) {
            return Err(Error::OutOfRange(format!(
                "delta = {delta:e} exceeds the certified chart range {:e}",
                delta_max(&chart)
            )));
        }
        Ok(BarrierFunction {
            chart,
            delta,
            constants,
            cutoffs: CutoffPair::new(),
            attempts: 0,
        })
    }

    pub fn dimension(&self) -> usize {
        self.chart.dimension
    }

    pub fn leaf_dimension(&self) -> usize {
        self.chart.leaf_dimension
    }

    /// `φ_δ` as a jet.
    pub fn cutoff_jet(&self, zeta: &ComplexVector) -> Result<Jet> {
        let w = omega_coefficients(self.dimension(), self.delta, self.leaf_dimension())?;
        let a2 = self.constants.a * self.constants.a;
        let t = omega_jet(zeta, &w).scaled(1.0 / a2);
        let d = CutoffPair::chi1(t.value);
        Ok(t.compose([d[0], d[1], d[2]]))
    }

    /// `G_{p,δ} = φ_δ e^{Mρ/δ}`.
    pub fn peak_jet(&self, zeta: &ComplexVector) -> Result<Jet> {
        let phi = self.cutoff_jet(zeta)?;
        if phi.value == 0.0 && phi.gradient.iter().all(|x| *x == c(0.0, 0.0)) {
            return Ok(Jet::zeros(self.dimension()));
        }
        let rho = self.chart.defining_jet(zeta)?;
        let e = rho.scaled(self.constants.m / self.delta);
        let v = e.value.exp();
        Ok(phi.product(&e.compose([v, v, v])))
    }

    /// Value, gradient and complex Hessian of `g_{p,δ}` at `ζ`.
    pub fn eval(&self, zeta: &ComplexVector) -> Result<Jet> {
        let g = self.peak_jet(zeta)?;
        let d = CutoffPair::chi2(g.value);
        let hat = g.compose([d[0], d[1], d[2]]);
        let q = omega_jet(zeta, &vec![1.0; self.dimension()]);
        let k = &self.constants;
        Ok(hat.plus(&q.scaled(k.c2)).scaled(1.0 / k.c1))
    }

    pub fn value(&self, zeta: &ComplexVector) -> Result<f64> {
        Ok(self.eval(zeta)?.value)
    }

    pub fn p_box(&self, scale: f64) -> Result<FrequencyBox> {
        FrequencyBox::p_box(self.dimension(), self.leaf_dimension(), self.delta, scale)
    }

    pub fn q_box(&self) -> Result<FrequencyBox> {
        FrequencyBox::q_box(self.dimension(), self.leaf_dimension(), self.delta, self.constants.c())
    }
}

/// Builds `g_{p,δ}` on `chart`, searching `a` (halving from 1), `M`
/// (doubling from 8), then `C₂` and `b` on fixed grids until properties
/// (1)–(3) certify on the default sample plan. `C₁ = χ₂(1) + C₂R²` with `R`
/// the chart radius, so `g ≤ 1` holds by construction.
pub fn build_barrier(chart: &NormalizedChart, delta: f64, search_budget: usize) -> Result<BarrierFunction> {
    build_barrier_with(chart, delta, search_budget, &SamplePlan::default())
}

pub fn build_barrier_with(
    chart: &NormalizedChart,
    delta: f64,
    search_budget: usize,
    plan: &SamplePlan,
) -> Result<BarrierFunction> {
    Ok(build_barrier_family(chart, &[delta], search_budget, plan)?.remove(0))
}

struct Candidate {
    bf: BarrierFunction,
    full: Samples,
    pilot: Samples,
}

/// One set of constants certified simultaneously at every `δ` in `deltas`.
pub fn build_barrier_family(
    chart: &NormalizedChart,
    deltas: &[f64],
    search_budget: usize,
    plan: &SamplePlan,
) -> Result<Vec<BarrierFunction>> {
    if search_budget == 0 {
        return Err(Error::arg("search budget must be at least 1"));
    }
    if deltas.is_empty() {
        return Err(Error::arg("no delta given"));
    }
    let r2 = chart.valid_radius * chart.valid_radius;
    let probe = BarrierConstants { a: 1.0, b: 1.0, m: M_START, c1: 1.0, c2: 0.0 };
    let templates = deltas
        .iter()
        .map(|&d| BarrierFunction::new(chart.clone(), d, probe))
        .collect::<Result<Vec<_>>>()?;
    let pilot_plan = SamplePlan {
        global: plan.global / PILOT_FRACTION,
        local: plan.local / PILOT_FRACTION,
        q_samples: plan.q_samples / PILOT_FRACTION,
        ..plan.clone()
    };
    let mut attempts = 0;
    let mut worst = String::from("no candidate evaluated");
    let mut a = 1.0;
    for _ in 0..A_STEPS {
        let mut cands = templates
            .iter()
            .map(|t| {
                Ok(Candidate {
                    bf: t.clone(),
                    full: Samples::draw(t, a, plan)?,
                    pilot: Samples::draw(t, a, &pilot_plan)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let mut m = M_START;
        for _ in 0..M_STEPS {
            for &k2 in &C2_GRID {
                let c2 = k2 / (a * a);
                let base = BarrierConstants { a, b: 0.0, m, c1: 0.25 + c2 * r2, c2 };
                // properties (1) and (2) do not involve b
                let mut global_ok = true;
                for cand in cands.iter_mut() {
                    cand.bf.constants = base;
                    let res = check_global(&cand.bf, &cand.pilot)
                        .and_then(|r| if r.pass() { check_global(&cand.bf, &cand.full) } else { Ok(r) });
                    match res {
                        Ok(r) if r.pass() => {}
                        Ok(r) => {
                            worst = format!("delta {:e}: {}", cand.bf.delta, r.describe(&base));
                            global_ok = false;
                        }
                        Err(e) => {
                            worst = format!("delta {:e}: {e} at {base:?}", cand.bf.delta);
                            global_ok = false;
                        }
                    }
                    if !global_ok {
                        break;
                    }
                }
                for &kb in &B_GRID {
                    attempts += 1;
                    if global_ok {
                        let mut ok = true;
                        for cand in cands.iter_mut() {
                            cand.bf.constants.b = kb / (2.0 * a * m);
                            let bq = cand.bf.q_box()?;
                            let res = check_lower_bound(&cand.bf, &bq, pilot_plan.q_samples, plan.seed)
                                .and_then(|r| {
                                    if r.pass() {
                                        check_lower_bound(&cand.bf, &bq, plan.q_samples, plan.seed)
                                    } else {
                                        Ok(r)
                                    }
                                });
                            match res {
                                Ok(r) if r.pass() => {}
                                Ok(r) => {
                                    worst = format!("lower bound c0 = {:e} at delta {:e}, {:?}", r.c0, cand.bf.delta, cand.bf.constants);
                                    ok = false;
                                }
                                Err(e) => {
                                    worst = format!("{e} at delta {:e}, {:?}", cand.bf.delta, cand.bf.constants);
                                    ok = false;
                                }
                            }
                            if !ok {
                                break;
                            }
                        }
                        if ok {
                            return Ok(cands
                                .into_iter()
                                .map(|c| {
                                    let mut bf = c.bf;
                                    bf.attempts = attempts;
                                    bf
                                })
                                .collect());
                        }
                    }
                    if attempts >= search_budget {
                        return Err(Error::CertificationFailure { attempts, worst });
                    }
                }
            }
            m *= 2.0;
        }
        a *= 0.5;
    }
    Err(Error::CertificationFailure { attempts, worst })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::real_vector;

    fn flat(delta: f64) -> BarrierFunction {
        let chart = NormalizedChart::model(2, &[]).unwrap();
        let k = BarrierConstants { a: 0.5, b: 0.1, m: 32.0, c1: 2.25, c2: 8.0 };
        BarrierFunction::new(chart, delta, k).unwrap()
    }

    #[test]
    fn outside_cutoff_support_only_quadratic_term_remains() {
        let bf = flat(0.01);
        let z = real_vector(&[-0.02, 0.1]);
        let v = bf.value(&z).unwrap();
        assert!((v - 8.0 * 0.0104 / 2.25).abs() < 1e-15);
    }

    #[test]
    fn peak_value_at_q_centre() {
        let bf = flat(0.01);
        let cc = bf.constants.c();
        let z = real_vector(&[-cc * 0.01, 0.0]);
        let g = bf.peak_jet(&z).unwrap();
        assert!((g.value - (-cc * 32.0f64).exp()).abs() < 1e-14);
    }

    #[test]
    fn jet_matches_finite_differences() {
        let chart = NormalizedChart::model(3, &[0.5]).unwrap();
        let k = BarrierConstants { a: 0.5, b: 0.1, m: 16.0, c1: 1.0, c2: 2.0 };
        let bf = BarrierFunction::new(chart, 0.04, k).unwrap();
        let z = crate::linalg::cvec(&[c(-0.004, 0.003), c(0.02, -0.03), c(0.1, 0.05)]);
        let jet = bf.eval(&z).unwrap();
        let h = 1e-7;
        for j in 0..3 {
            let mut zp = z.clone();
            zp[j] += c(h, 0.0);
            let mut zm = z.clone();
            zm[j] -= c(h, 0.0);
            let dx = (bf.value(&zp).unwrap() - bf.value(&zm).unwrap()) / (2.0 * h);
            assert!((dx - 2.0 * jet.gradient[j].re).abs() < 1e-5 * (1.0 + dx.abs()), "j={j}");
        }
    }
}
