//! Upper bounds for the Kobayashi metric from polynomial analytic discs.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::DomainModel;
use crate::linalg::{c, norm, ComplexVector};

const MARGIN: f64 = 1e-10;
const INNER_RADII: [f64; 2] = [0.5, 0.9];
const SHRINK: f64 = 0.99;
const MAX_SHRINKS: usize = 200;
/// Temperature of the smoothed maximum, relative to the spread of ρ.
const SOFTMAX_T: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscFamily {
    /// Polynomial degree `d` of `f(t) = z + tλX + Σ_{k=2}^d a_k t^k`.
    pub degree: usize,
    /// Circle samples used during the search.
    pub constraint_samples: usize,
    /// Circle samples used to certify the final disc.
    pub verify_samples: usize,
    /// Gradient steps per feasibility problem.
    pub optimizer_budget: usize,
}

impl DiscFamily {
    pub fn new(degree: usize) -> Self {
        DiscFamily {
            degree: degree.max(1),
            constraint_samples: 256,
            verify_samples: 4096,
            optimizer_budget: 200,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DiscBound {
    /// `|X|/λ*`.
    pub upper: f64,
    /// Certified `λ*` for the unit direction `X/|X|`.
    pub lambda: f64,
    pub degree: usize,
    /// `a_2, …, a_d` as `[re, im]` pairs per coordinate.
    pub coefficients: Vec<Vec<[f64; 2]>>,
    /// Largest `ρ` on the verification circle.
    pub max_rho: f64,
}

struct Disc<'a> {
    domain: &'a DomainModel,
    z: &'a ComplexVector,
    e: &'a ComplexVector,
}

impl Disc<'_> {
    fn point(&self, lambda: f64, a: &[ComplexVector], t: Complex64) -> ComplexVector {
        let mut w = self.z + self.e * (t * lambda);
        let mut tk = t;
        for ak in a {
            tk *= t;
            w += ak * tk;
        }
        w
    }

    fn rho(&self, w: &ComplexVector) -> f64 {
        if self.domain.bounding_box().contains(w) {
            self.domain.rho(w)
        } else {
            f64::INFINITY
        }
    }

    fn circle(count: usize, r: f64) -> Vec<Complex64> {
        (0..count)
            .map(|k| Complex64::from_polar(r, 2.0 * PI * k as f64 / count as f64))
            .collect()
    }

    fn max_rho(&self, lambda: f64, a: &[ComplexVector], ts: &[Complex64]) -> f64 {
        ts.iter().map(|&t| self.rho(&self.point(lambda, a, t))).fold(f64::NEG_INFINITY, f64::max)
    }

    fn feasible(&self, lambda: f64, a: &[ComplexVector], ts: &[Complex64]) -> bool {
        self.max_rho(lambda, a, ts) <= -MARGIN
    }

    /// Boundary samples with a first-order allowance for the gaps between
    /// them, plus interior circles.
    fn certify(&self, lambda: f64, a: &[ComplexVector], count: usize) -> Option<f64> {
        let ts = Self::circle(count, 1.0);
        let gap = PI / count as f64;
        let mut worst = f64::NEG_INFINITY;
        for &t in &ts {
            let w = self.point(lambda, a, t);
            if !self.domain.bounding_box().contains(&w) {
                return None;
            }
            let jet = self.domain.defining().jet(&w);
            // f'(t)·it is the θ-derivative of f(e^{iθ})
            let mut df = self.e * c(lambda, 0.0);
            let mut tk = c(1.0, 0.0);
            for (k, ak) in a.iter().enumerate() {
                tk *= t;
                df += ak * (tk * (k + 2) as f64);
            }
            let dtheta: Complex64 = jet
                .gradient
                .iter()
                .zip(df.iter())
                .map(|(g, d)| g * d * c(0.0, 1.0) * t)
                .sum();
            let slope = 2.0 * dtheta.re.abs();
            worst = worst.max(jet.value + slope * gap);
        }
        if worst > -MARGIN {
            return None;
        }
        for r in INNER_RADII {
            if !self.feasible(lambda, a, &Self::circle(count / 4, r)) {
                return None;
            }
        }
        Some(worst)
    }

    /// Minimizes a smoothed maximum of `ρ` over the circle samples in the
    /// coefficients `a`, stopping once the disc is feasible.
    fn optimize(&self, lambda: f64, a: &mut [ComplexVector], ts: &[Complex64], budget: usize) -> bool {
        if a.is_empty() {
            return self.feasible(lambda, a, ts);
        }
        let objective = |a: &[ComplexVector]| -> (f64, f64) {
            let vals: Vec<f64> = ts.iter().map(|&t| self.rho(&self.point(lambda, a, t))).collect();
            let mx = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let tau = SOFTMAX_T * (1.0 + mx.abs());
            let s: f64 = vals.iter().map(|v| ((v - mx) / tau).exp()).sum();
            (mx + tau * s.ln(), mx)
        };
        let mut step = 1e-2;
        let (mut fval, mut mx) = objective(a);
        for _ in 0..budget {
            if mx <= -MARGIN {
                return true;
            }
            if !fval.is_finite() {
                return false;
            }
            // gradient of the smoothed max in (Re a, Im a), as complex numbers
            let vals: Vec<(f64, ComplexVector)> = ts
                .iter()
                .map(|&t| {
                    let jet = self.domain.defining().jet(&self.point(lambda, a, t));
                    (jet.value, jet.gradient)
                })
                .collect();
            let tau = SOFTMAX_T * (1.0 + mx.abs());
            let weights: Vec<f64> = vals.iter().map(|(v, _)| ((v - mx) / tau).exp()).collect();
            let total: f64 = weights.iter().sum();
            let mut grad: Vec<ComplexVector> = a.iter().map(|ak| ComplexVector::zeros(ak.len())).collect();
            for ((&t, (_, g)), w) in ts.iter().zip(&vals).zip(&weights) {
                let mut tk = t;
                for gk in grad.iter_mut() {
                    tk *= t;
                    for j in 0..g.len() {
                        // d/dRe a = 2Re(∂ρ t^k), d/dIm a = −2Im(∂ρ t^k)
                        let v = g[j] * tk;
                        gk[j] += c(2.0 * v.re, -2.0 * v.im) * (w / total);
                    }
                }
            }
            let gnorm: f64 = grad.iter().map(|g| norm(g).powi(2)).sum::<f64>().sqrt();
            if gnorm == 0.0 {
                return false;
            }
            let mut improved = false;
            for _ in 0..30 {
                let trial: Vec<ComplexVector> =
                    a.iter().zip(&grad).map(|(ak, gk)| ak - gk * c(step / gnorm, 0.0)).collect();
                let (f2, m2) = objective(&trial);
                if f2 < fval {
                    a.clone_from_slice(&trial);
                    fval = f2;
                    mx = m2;
                    step *= 2.0;
                    improved = true;
                    break;
                }
                step *= 0.5;
            }
            if !improved {
                return mx <= -MARGIN;
            }
        }
        mx <= -MARGIN
    }
}

/// `|X|/λ*` for the largest certified `λ*` such that a disc of the family
/// with `f(0) = z`, `f'(0) = λ*X/|X|` stays in the domain. Degrees are
/// raised one at a time, each warm-started from the previous optimum, so the
/// bound does not increase with the degree.
pub fn kobayashi_upper(domain: &DomainModel, z: &ComplexVector, x: &ComplexVector, fam: &DiscFamily) -> Result<DiscBound> {
    domain.check_dim(z)?;
    domain.check_dim(x)?;
    if !domain.contains(z) {
        return Err(Error::arg("point is not inside the domain"));
    }
    let xn = norm(x);
    if xn == 0.0 {
        return Err(Error::arg("direction must be nonzero"));
    }
    // f(e^{iθ}t) is again a disc, so the direction's phase can be fixed;
    // this makes the bound exactly homogeneous in X
    let k = (0..x.len()).fold(0, |k, j| if x[j].norm() > x[k].norm() { j } else { k });
    let e = x * (x[k].conj() / (x[k].norm() * xn));
    let disc = Disc { domain, z, e: &e };
    let n = z.len();
    let ts = Disc::circle(fam.constraint_samples.max(8), 1.0);
    // Cauchy estimate: |f'(0)| ≤ sup|f − z| ≤ reach
    let bb = domain.bounding_box();
    let reach = (0..2 * n)
        .map(|i| {
            let v = if i < n { z[i].re } else { z[i - n].im };
            (bb.upper[i] - v).abs().max((v - bb.lower[i]).abs()).powi(2)
        })
        .sum::<f64>()
        .sqrt();
    let mut a: Vec<ComplexVector> = Vec::new();
    let tiny = 1e-12 * reach;
    if !disc.feasible(tiny, &a, &ts) {
        return Err(Error::Infeasible(format!("no disc of radius {tiny:e} fits at z")));
    }
    let mut lo = tiny;
    for d in 1..=fam.degree {
        if d >= 2 {
            a.push(ComplexVector::zeros(n));
        }
        let mut hi = reach;
        let mut best = a.clone();
        let mut cur = a.clone();
        for _ in 0..200 {
            if hi - lo <= 1e-12 * hi {
                break;
            }
            let mid = 0.5 * (lo + hi);
            cur.clone_from(&best);
            if disc.optimize(mid, &mut cur, &ts, fam.optimizer_budget) {
                lo = mid;
                best.clone_from(&cur);
            } else {
                hi = mid;
            }
            if d >= 2 && hi - lo <= 1e-7 * hi {
                break;
            }
        }
        a = best;
    }
    let mut lambda = lo;
    for _ in 0..MAX_SHRINKS {
        if let Some(max_rho) = disc.certify(lambda, &a, fam.verify_samples.max(16)) {
            return Ok(DiscBound {
                upper: xn / lambda,
                lambda,
                degree: fam.degree,
                coefficients: a.iter().map(|ak| ak.iter().map(|v| [v.re, v.im]).collect()).collect(),
                max_rho,
            });
        }
        lambda *= SHRINK;
    }
    Err(Error::Infeasible("disc certification failed after repeated shrinking".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::catalog_domain;
    use crate::linalg::real_vector;

    #[test]
    fn disc_identity() {
        let d = catalog_domain("ball", 1, &[]).unwrap();
        let b = kobayashi_upper(&d, &real_vector(&[0.0]), &real_vector(&[1.0]), &DiscFamily::new(1)).unwrap();
        assert!((b.upper - 1.0).abs() < 1e-9);
    }

    #[test]
    fn bidisc_diagonal() {
        let d = catalog_domain("polydisc", 2, &[]).unwrap();
        let b = kobayashi_upper(&d, &real_vector(&[0.0, 0.0]), &real_vector(&[1.0, 1.0]), &DiscFamily::new(1)).unwrap();
        // diagonal disc t ↦ (t, t)
        assert!((b.upper - 1.0).abs() < 1e-9, "{}", b.upper);
    }

    #[test]
    fn higher_degree_does_not_increase() {
        let d = catalog_domain("ball", 2, &[]).unwrap();
        let z = real_vector(&[0.5, 0.1]);
        let x = real_vector(&[0.3, 1.0]);
        let mut last = f64::INFINITY;
        for deg in 1..=3 {
            let b = kobayashi_upper(&d, &z, &x, &DiscFamily::new(deg)).unwrap();
            assert!(b.upper <= last * (1.0 + 1e-9), "degree {deg}: {} > {last}", b.upper);
            last = b.upper;
        }
    }
}
