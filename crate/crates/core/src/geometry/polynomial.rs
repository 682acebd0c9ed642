//! Polynomial defining functions in `z, z̄` and a finite-difference wrapper
//! for defining functions given only by values.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{DefiningFunction, Jet};
use crate::error::{Error, Result};
use crate::linalg::{c, from_real, to_real, wirtinger_gradient, wirtinger_hessian, ComplexVector};

/// One term `coeff · z^α z̄^β` of a custom defining function.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolynomialTerm {
    pub coeff: f64,
    pub alpha: Vec<u32>,
    pub beta: Vec<u32>,
}

/// `ρ = Re Σ c z^α z̄^β`. Stored symmetrized, so every term's conjugate
/// partner is present and the sum is real without taking a real part.
#[derive(Clone, Debug, PartialEq)]
pub struct PolynomialDefining {
    dim: usize,
    terms: Vec<(f64, Vec<u32>, Vec<u32>)>,
}

impl PolynomialDefining {
    pub fn new(dim: usize, terms: &[PolynomialTerm]) -> Result<Self> {
        if dim == 0 {
            return Err(Error::arg("dimension must be positive"));
        }
        if terms.is_empty() {
            return Err(Error::arg("defining polynomial has no terms"));
        }
        let mut sym = Vec::with_capacity(2 * terms.len());
        for t in terms {
            if t.alpha.len() != dim || t.beta.len() != dim {
                return Err(Error::arg(format!(
                    "multi-index length differs from dimension {dim}"
                )));
            }
            if !t.coeff.is_finite() {
                return Err(Error::arg("non-finite polynomial coefficient"));
            }
            sym.push((0.5 * t.coeff, t.alpha.clone(), t.beta.clone()));
            sym.push((0.5 * t.coeff, t.beta.clone(), t.alpha.clone()));
        }
        Ok(PolynomialDefining { dim, terms: sym })
    }

    pub fn degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|(_, a, b)| a.iter().sum::<u32>() + b.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }
}

fn monomial(z: &[Complex64], e: &[u32]) -> Complex64 {
    z.iter().zip(e).fold(c(1.0, 0.0), |acc, (x, &k)| acc * x.powu(k))
}

/// `∂/∂z_j z^e` as `(coefficient, reduced exponent)`; `None` when zero.
fn lower(e: &[u32], j: usize) -> Option<(f64, Vec<u32>)> {
    if e[j] == 0 {
        return None;
    }
    let mut r = e.to_vec();
    r[j] -= 1;
    Some((e[j] as f64, r))
}

impl DefiningFunction for PolynomialDefining {
    fn dimension(&self) -> usize {
        self.dim
    }

    fn value(&self, z: &ComplexVector) -> f64 {
        let zs = z.as_slice();
        let zb: Vec<Complex64> = zs.iter().map(|x| x.conj()).collect();
        self.terms
            .iter()
            .map(|(k, a, b)| *k * monomial(zs, a) * monomial(&zb, b))
            .sum::<Complex64>()
            .re
    }

    fn jet(&self, z: &ComplexVector) -> Jet {
        let n = self.dim;
        let zs = z.as_slice();
        let zb: Vec<Complex64> = zs.iter().map(|x| x.conj()).collect();
        let mut jet = Jet::zeros(n);
        for (k, a, b) in &self.terms {
            let za = monomial(zs, a);
            let zbb = monomial(&zb, b);
            jet.value += (*k * za * zbb).re;
            for j in 0..n {
                if let Some((ca, a1)) = lower(a, j) {
                    let d = monomial(zs, &a1);
                    jet.gradient[j] += *k * ca * d * zbb;
                    for m in 0..n {
                        if let Some((cb, b1)) = lower(b, m) {
                            jet.levi[(j, m)] += *k * ca * cb * d * monomial(&zb, &b1);
                        }
                        if let Some((c2, a2)) = lower(&a1, m) {
                            jet.holo[(j, m)] += *k * ca * c2 * monomial(zs, &a2) * zbb;
                        }
                    }
                }
            }
        }
        jet
    }
}

/// Defining function known only through its values; derivatives by central
/// differences with one Richardson extrapolation step.
#[derive(Clone)]
pub struct FiniteDifference {
    dim: usize,
    f: Arc<dyn Fn(&ComplexVector) -> f64 + Send + Sync>,
    /// Step for the gradient.
    pub step: f64,
    /// Step for the Hessian (second differences need a larger step).
    pub hessian_step: f64,
}

impl fmt::Debug for FiniteDifference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteDifference")
            .field("dim", &self.dim)
            .field("step", &self.step)
            .field("hessian_step", &self.hessian_step)
            .finish()
    }
}

impl FiniteDifference {
    pub fn new(dim: usize, f: impl Fn(&ComplexVector) -> f64 + Send + Sync + 'static) -> Self {
        FiniteDifference {
            dim,
            f: Arc::new(f),
            step: 1e-5,
            hessian_step: 1e-3,
        }
    }

    fn eval(&self, x: &DVector<f64>) -> f64 {
        (self.f)(&from_real(x))
    }

    fn gradient_at(&self, x: &DVector<f64>, h: f64) -> DVector<f64> {
        let m = x.len();
        let mut g = DVector::zeros(m);
        let mut y = x.clone();
        for i in 0..m {
            y[i] = x[i] + h;
            let fp = self.eval(&y);
            y[i] = x[i] - h;
            let fm = self.eval(&y);
            y[i] = x[i];
            g[i] = (fp - fm) / (2.0 * h);
        }
        g
    }

    fn hessian_at(&self, x: &DVector<f64>, h: f64) -> DMatrix<f64> {
        let m = x.len();
        let f0 = self.eval(x);
        let mut hess = DMatrix::zeros(m, m);
        let mut y = x.clone();
        for i in 0..m {
            y[i] = x[i] + h;
            let fp = self.eval(&y);
            y[i] = x[i] - h;
            let fm = self.eval(&y);
            y[i] = x[i];
            hess[(i, i)] = (fp - 2.0 * f0 + fm) / (h * h);
            for j in 0..i {
                let mut s = 0.0;
                for (si, sj) in [(1.0, 1.0), (-1.0, -1.0), (1.0, -1.0), (-1.0, 1.0)] {
                    y[i] = x[i] + si * h;
                    y[j] = x[j] + sj * h;
                    s += si * sj * self.eval(&y);
                }
                y[i] = x[i];
                y[j] = x[j];
                let v = s / (4.0 * h * h);
                hess[(i, j)] = v;
                hess[(j, i)] = v;
            }
        }
        hess
    }
}

impl DefiningFunction for FiniteDifference {
    fn dimension(&self) -> usize {
        self.dim
    }

    fn value(&self, z: &ComplexVector) -> f64 {
        (self.f)(z)
    }

    fn jet(&self, z: &ComplexVector) -> Jet {
        let x = to_real(z);
        let (h, hh) = (self.step, self.hessian_step);
        let g = (self.gradient_at(&x, 0.5 * h) * 4.0 - self.gradient_at(&x, h)) / 3.0;
        let hess = (self.hessian_at(&x, 0.5 * hh) * 4.0 - self.hessian_at(&x, hh)) / 3.0;
        let (levi, holo) = wirtinger_hessian(&hess);
        Jet {
            value: (self.f)(z),
            gradient: wirtinger_gradient(&g),
            levi,
            holo,
        }
    }
}
