//! Monomial series `K(z) = Σ_α |z^α|²/‖z^α‖²` on Reinhardt domains.

use std::ops::Range;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::MonomialNorms;
use crate::linalg::{c, ComplexMatrix, ComplexVector};

/// Relative size below which a subtree of the series is dropped.
const SERIES_EPS: f64 = 1e-17;
const TERM_BUDGET: usize = 50_000_000;

/// `F(x) = Σ x^α/N_α` in `x_j = |z_j|²` with first and second derivatives.
#[derive(Clone, Debug, Default)]
struct Sums {
    f: f64,
    fj: Vec<f64>,
    fjk: Vec<f64>,
}

impl Sums {
    fn zeros(m: usize) -> Self {
        Sums { f: 0.0, fj: vec![0.0; m], fjk: vec![0.0; m * m] }
    }

    fn add(&mut self, o: &Sums) {
        self.f += o.f;
        for (a, b) in self.fj.iter_mut().zip(&o.fj) {
            *a += b;
        }
        for (a, b) in self.fjk.iter_mut().zip(&o.fjk) {
            *a += b;
        }
    }

    fn magnitude(&self) -> f64 {
        self.f.abs() + self.fj.iter().map(|v| v.abs()).sum::<f64>() + self.fjk.iter().map(|v| v.abs()).sum::<f64>()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SeriesValue {
    pub kernel: f64,
    /// `∂²log K/∂z_j∂z̄_k`.
    #[serde(skip)]
    pub log_levi: ComplexMatrix,
    /// Estimated truncated remainder of `K`.
    pub tail: f64,
    pub terms: usize,
    /// Largest `|α_j|` reached in any coordinate.
    pub max_exponent: i64,
}

struct Walker<'a> {
    norms: &'a dyn MonomialNorms,
    n: usize,
    block: Range<usize>,
    lx: Vec<f64>,
    cap: i64,
    alpha: Vec<i64>,
    totals: Sums,
    tail: f64,
    terms: usize,
    max_exponent: i64,
}

/// `k·ln x` with `0·ln 0 = 0`.
fn klog(k: i64, lx: f64) -> f64 {
    if k == 0 {
        0.0
    } else {
        k as f64 * lx
    }
}

impl<'a> Walker<'a> {
    fn m(&self) -> usize {
        self.block.len()
    }

    fn term(&mut self) -> Result<Sums> {
        self.terms += 1;
        if self.terms > TERM_BUDGET {
            return Err(Error::numerical("series term budget exhausted", format!("{} terms", self.terms)));
        }
        let m = self.m();
        let mut s = Sums::zeros(m);
        let mut full = vec![0i64; self.n];
        full[self.block.clone()].copy_from_slice(&self.alpha);
        let Some(log_n) = self.norms.log_norm_sq(&full) else {
            return Ok(s);
        };
        // exponent of x^{α − shift}/N_α, avoiding ∞ − ∞ at x_j = 0
        let expo = |shift: &[(usize, i64)]| -> f64 {
            let mut e = -log_n;
            for i in 0..m {
                let d: i64 = shift.iter().filter(|(j, _)| *j == i).map(|(_, k)| k).sum();
                e += klog(self.alpha[i] - d, self.lx[i]);
            }
            e
        };
        s.f = expo(&[]).exp();
        for j in 0..m {
            let aj = self.alpha[j];
            if aj == 0 {
                continue;
            }
            s.fj[j] = aj as f64 * expo(&[(j, 1)]).exp();
            for k in 0..m {
                let ak = self.alpha[k] - if k == j { 1 } else { 0 };
                if ak == 0 {
                    continue;
                }
                s.fjk[j * m + k] = (aj * ak) as f64 * expo(&[(j, 1), (k, 1)]).exp();
            }
        }
        Ok(s)
    }

    fn small(&self, s: &Sums) -> bool {
        let t = &self.totals;
        s.f.abs() <= SERIES_EPS * t.f.abs()
            && s.fj.iter().zip(&t.fj).all(|(a, b)| a.abs() <= SERIES_EPS * b.abs().max(t.f.abs()))
            && s.fjk.iter().zip(&t.fjk).all(|(a, b)| a.abs() <= SERIES_EPS * b.abs().max(t.f.abs()))
    }

    fn subtree(&mut self, i: usize) -> Result<Sums> {
        if i == self.m() {
            let s = self.term()?;
            self.totals.add(&s);
            return Ok(s);
        }
        let mut acc = Sums::zeros(self.m());
        let directions: &[i64] = if self.norms.allows_negative(self.block.start + i) { &[1, -1] } else { &[1] };
        for &dir in directions {
            let mut k: i64 = if dir > 0 { 0 } else { -1 };
            let mut prev = f64::INFINITY;
            loop {
                if k.abs() > self.cap {
                    self.tail += prev;
                    break;
                }
                self.alpha[i] = k;
                self.max_exponent = self.max_exponent.max(k.abs());
                let s = self.subtree(i + 1)?;
                let mag = s.magnitude();
                acc.add(&s);
                // terms are unimodal in k: stop once decreasing and negligible
                if k.abs() >= 3 && mag <= prev && self.small(&s) {
                    let r = if prev > 0.0 { mag / prev } else { 0.0 };
                    if r < 1.0 {
                        self.tail += s.f * r / (1.0 - r);
                    }
                    break;
                }
                prev = mag;
                k += dir;
            }
        }
        self.alpha[i] = 0;
        Ok(acc)
    }
}

/// Series kernel and log-Hessian. Blocks across which the norms factor are
/// summed separately and multiplied.
pub fn series_kernel(norms: &dyn MonomialNorms, z: &ComplexVector, cap: usize) -> Result<SeriesValue> {
    let n = norms.dimension();
    if z.len() != n {
        return Err(Error::arg("dimension mismatch"));
    }
    let zero = vec![0i64; n];
    let log_vol = norms
        .log_norm_sq(&zero)
        .ok_or_else(|| Error::arg("domain has infinite volume"))?;
    let blocks = norms.blocks();
    let mut log_k = (blocks.len() as f64 - 1.0) * log_vol;
    let mut levi = ComplexMatrix::zeros(n, n);
    let mut rel_tail = 0.0;
    let mut terms = 0;
    let mut max_exponent = 0;
    for block in blocks {
        let m = block.len();
        let lx: Vec<f64> = block.clone().map(|j| z[j].norm_sqr().ln()).collect();
        let mut w = Walker {
            norms,
            n,
            block: block.clone(),
            lx,
            cap: cap as i64,
            alpha: vec![0; m],
            totals: Sums::zeros(m),
            tail: 0.0,
            terms: 0,
            max_exponent: 0,
        };
        let s = w.subtree(0)?;
        if !(s.f > 0.0) || !s.f.is_finite() {
            return Err(Error::numerical("series diverged", format!("F = {:e}", s.f)));
        }
        log_k += s.f.ln();
        rel_tail += w.tail / s.f;
        terms += w.terms;
        max_exponent = max_exponent.max(w.max_exponent);
        let zb: Vec<_> = block.clone().map(|j| z[j]).collect();
        for a in 0..m {
            for b in 0..m {
                let d = if a == b { s.fj[a] } else { 0.0 };
                let kk = zb[a].conj() * zb[b] * s.fjk[a * m + b] + c(d, 0.0);
                let grad = zb[a].conj() * s.fj[a] * (zb[b] * s.fj[b]);
                levi[(block.start + a, block.start + b)] = (kk * s.f - grad) / (s.f * s.f);
            }
        }
    }
    let kernel = log_k.exp();
    Ok(SeriesValue {
        kernel,
        log_levi: levi,
        tail: rel_tail * kernel,
        terms,
        max_exponent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::catalog_domain;
    use crate::linalg::{cvec, real_vector};
    use std::f64::consts::PI;

    #[test]
    fn disc_at_origin() {
        let d = catalog_domain("ball", 1, &[]).unwrap();
        let v = series_kernel(d.monomial_norms().unwrap(), &real_vector(&[0.0]), 1000).unwrap();
        assert!((v.kernel - 1.0 / PI).abs() < 1e-15);
        // log K = log(1/π) − 2 log(1 − |z|²): Hessian 2
        assert!((v.log_levi[(0, 0)].re - 2.0).abs() < 1e-14);
    }

    #[test]
    fn ball_matches_closed_form_near_boundary() {
        let d = catalog_domain("ball", 2, &[]).unwrap();
        let z = cvec(&[c(0.6, 0.3), c(0.1, -0.2)]);
        let v = series_kernel(d.monomial_norms().unwrap(), &z, 100_000).unwrap();
        let exact = d.closed_forms().unwrap().kernel(&z).unwrap();
        assert!((v.kernel / exact - 1.0).abs() < 1e-12, "{} vs {}", v.kernel, exact);
        let h = d.closed_forms().unwrap().kernel_log_levi(&z).unwrap();
        assert!((&v.log_levi - h).norm() < 1e-10);
        assert!(v.tail <= 1e-6 * v.kernel);
    }

    #[test]
    fn truncation_is_monotone() {
        let d = catalog_domain("polydisc", 2, &[]).unwrap();
        let z = real_vector(&[0.9, 0.5]);
        let mut last = 0.0;
        for cap in [5, 10, 20, 40, 1000] {
            let v = series_kernel(d.monomial_norms().unwrap(), &z, cap).unwrap();
            assert!(v.kernel >= last);
            last = v.kernel;
        }
    }
}
