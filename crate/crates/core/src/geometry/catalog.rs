//! Model domains: products of balls, ellipsoids, discs and annuli.
//!
//! All of them are Reinhardt domains, so monomials are orthogonal and their
//! norms are known in closed form. The defining function of a product is the
//! maximum of the factor defining functions, which is smooth away from the
//! corners where two factors are active at once.

use std::f64::consts::PI;
use std::sync::Arc;

use super::{
    AffineLeaf, BoundingBox, ClosedForms, DefiningFunction, DomainModel, DomainSpec, Jet,
    LeafCharts, MonomialNorms,
};
use crate::error::{Error, Result};
use crate::linalg::{c, ComplexMatrix, ComplexVector};
use crate::special::ln_factorial;

#[derive(Clone, Debug, PartialEq)]
pub enum Factor {
    /// `Σ a_j |w_j|² < 1`; the unit ball when all `a_j = 1`, the disc when
    /// one-dimensional.
    Ellipsoid { coeffs: Vec<f64> },
    /// `inner < |w| < outer` in ℂ.
    Annulus { inner: f64, outer: f64 },
}

impl Factor {
    pub fn ball(dim: usize) -> Self {
        Factor::Ellipsoid { coeffs: vec![1.0; dim] }
    }

    pub fn disc() -> Self {
        Factor::ball(1)
    }

    pub fn dim(&self) -> usize {
        match self {
            Factor::Ellipsoid { coeffs } => coeffs.len(),
            Factor::Annulus { .. } => 1,
        }
    }

    fn is_unit_ball(&self) -> bool {
        matches!(self, Factor::Ellipsoid { coeffs } if coeffs.iter().all(|&a| a == 1.0))
    }

    /// Radius when the factor is a round ball (all coefficients equal).
    fn ball_radius(&self) -> Option<f64> {
        match self {
            Factor::Ellipsoid { coeffs } if coeffs.iter().all(|&a| a == coeffs[0]) => {
                Some(1.0 / coeffs[0].sqrt())
            }
            _ => None,
        }
    }

    fn rho(&self, w: &[num_complex::Complex64]) -> f64 {
        match self {
            Factor::Ellipsoid { coeffs } => {
                coeffs.iter().zip(w).map(|(a, z)| a * z.norm_sqr()).sum::<f64>() - 1.0
            }
            Factor::Annulus { inner, outer } => {
                let r2 = w[0].norm_sqr();
                (r2 - outer * outer).max(inner * inner - r2)
            }
        }
    }

    fn extents(&self) -> Vec<f64> {
        match self {
            Factor::Ellipsoid { coeffs } => coeffs.iter().map(|a| 1.0 / a.sqrt()).collect(),
            Factor::Annulus { outer, .. } => vec![*outer],
        }
    }

    fn distance(&self, w: &[num_complex::Complex64]) -> Option<f64> {
        match self {
            Factor::Ellipsoid { .. } => {
                let r = self.ball_radius()?;
                Some(r - block_norm(w))
            }
            Factor::Annulus { inner, outer } => {
                let a = w[0].norm();
                Some((outer - a).min(a - inner))
            }
        }
    }

    fn log_norm_sq(&self, alpha: &[i64]) -> Option<f64> {
        match self {
            Factor::Ellipsoid { coeffs } => {
                if alpha.iter().any(|&a| a < 0) {
                    return None;
                }
                let m = coeffs.len() as u64;
                let total: u64 = alpha.iter().map(|&a| a as u64).sum();
                let mut acc = m as f64 * PI.ln() - ln_factorial(m + total);
                for (&a, &coef) in alpha.iter().zip(coeffs) {
                    acc += ln_factorial(a as u64) - (a as f64 + 1.0) * coef.ln();
                }
                Some(acc)
            }
            Factor::Annulus { inner, outer } => {
                let k = alpha[0];
                let ratio = inner / outer;
                if k == -1 {
                    return Some((2.0 * PI * (outer / inner).ln()).ln());
                }
                let m = k + 1;
                if m > 0 {
                    let e = 2.0 * m as f64;
                    Some(
                        PI.ln() + e * outer.ln() + (-(ratio.powf(e))).ln_1p()
                            - (m as f64).ln(),
                    )
                } else {
                    let m = -m;
                    let e = 2.0 * m as f64;
                    Some(
                        PI.ln() - e * inner.ln() + (-(ratio.powf(e))).ln_1p()
                            - (m as f64).ln(),
                    )
                }
            }
        }
    }
}

fn block_norm(w: &[num_complex::Complex64]) -> f64 {
    w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Product `F_1 × … × F_m` of Reinhardt factors acting on consecutive blocks
/// of coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct ReinhardtProduct {
    factors: Vec<Factor>,
    offsets: Vec<usize>,
    dim: usize,
}

impl ReinhardtProduct {
    pub fn new(factors: Vec<Factor>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::arg("a product needs at least one factor"));
        }
        let mut offsets = Vec::with_capacity(factors.len());
        let mut dim = 0;
        for f in &factors {
            match f {
                Factor::Ellipsoid { coeffs } => {
                    if coeffs.is_empty() || coeffs.iter().any(|&a| !(a > 0.0 && a.is_finite())) {
                        return Err(Error::arg("ellipsoid coefficients must be positive"));
                    }
                }
                Factor::Annulus { inner, outer } => {
                    if !(*inner > 0.0 && inner < outer && outer.is_finite()) {
                        return Err(Error::arg("annulus needs 0 < inner < outer"));
                    }
                }
            }
            offsets.push(dim);
            dim += f.dim();
        }
        Ok(ReinhardtProduct { factors, offsets, dim })
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    fn block<'a>(&self, k: usize, z: &'a ComplexVector) -> &'a [num_complex::Complex64] {
        let o = self.offsets[k];
        &z.as_slice()[o..o + self.factors[k].dim()]
    }

    /// Index of the factor whose defining function is largest at `z`.
    pub fn active_factor(&self, z: &ComplexVector) -> usize {
        let mut best = 0;
        let mut best_val = f64::NEG_INFINITY;
        for k in 0..self.factors.len() {
            let v = self.factors[k].rho(self.block(k, z));
            if v > best_val {
                best_val = v;
                best = k;
            }
        }
        best
    }

    fn nearest_factor(&self, z: &ComplexVector) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64)> = None;
        for k in 0..self.factors.len() {
            let d = self.factors[k].distance(self.block(k, z))?;
            if best.is_none_or(|(_, b)| d < b) {
                best = Some((k, d));
            }
        }
        best
    }

    pub fn extents(&self) -> Vec<f64> {
        self.factors.iter().flat_map(|f| f.extents()).collect()
    }

    pub fn into_domain(self, name: &str, spec: Option<DomainSpec>) -> Result<DomainModel> {
        let n = self.dim;
        let bounds = BoundingBox::symmetric(&self.extents());
        let mut center = ComplexVector::zeros(n);
        // annulus factors do not contain the origin
        for (k, f) in self.factors.iter().enumerate() {
            if let Factor::Annulus { inner, outer } = f {
                center[self.offsets[k]] = c(0.5 * (inner + outer), 0.0);
            }
        }
        let shared = Arc::new(self);
        let mut model = DomainModel::new(name, shared.clone(), bounds, center)?
            .with_closed_forms(shared.clone())
            .with_monomial_norms(shared.clone())
            .with_leaf_charts(shared);
        if let Some(spec) = spec {
            model = model.with_spec(spec);
        }
        Ok(model)
    }
}

impl DefiningFunction for ReinhardtProduct {
    fn dimension(&self) -> usize {
        self.dim
    }

    fn value(&self, z: &ComplexVector) -> f64 {
        (0..self.factors.len())
            .map(|k| self.factors[k].rho(self.block(k, z)))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    fn jet(&self, z: &ComplexVector) -> Jet {
        let k = self.active_factor(z);
        let o = self.offsets[k];
        let mut jet = Jet::zeros(self.dim);
        jet.value = self.factors[k].rho(self.block(k, z));
        match &self.factors[k] {
            Factor::Ellipsoid { coeffs } => {
                for (i, a) in coeffs.iter().enumerate() {
                    jet.gradient[o + i] = z[o + i].conj() * *a;
                    jet.levi[(o + i, o + i)] = c(*a, 0.0);
                }
            }
            Factor::Annulus { inner, outer } => {
                let r2 = z[o].norm_sqr();
                let sign = if r2 - outer * outer >= inner * inner - r2 { 1.0 } else { -1.0 };
                jet.gradient[o] = z[o].conj() * sign;
                jet.levi[(o, o)] = c(sign, 0.0);
            }
        }
        jet
    }
}

impl ClosedForms for ReinhardtProduct {
    fn distance(&self, z: &ComplexVector) -> Option<f64> {
        self.nearest_factor(z).map(|(_, d)| d)
    }

    fn distance_jet(&self, z: &ComplexVector) -> Option<Jet> {
        let (k, d) = self.nearest_factor(z)?;
        let o = self.offsets[k];
        let w = self.block(k, z);
        let r = block_norm(w);
        if r == 0.0 {
            return None;
        }
        // +1 when δ = R − |w|, −1 for the inner circle of an annulus
        let sign = match &self.factors[k] {
            Factor::Annulus { inner, .. } if (r - inner) <= d + 1e-15 => -1.0,
            _ => 1.0,
        };
        let mut jet = Jet::zeros(self.dim);
        jet.value = d;
        for i in 0..w.len() {
            jet.gradient[o + i] = -w[i].conj() * (sign / (2.0 * r));
            for j in 0..w.len() {
                let delta = if i == j { 1.0 / (2.0 * r) } else { 0.0 };
                let levi = c(delta, 0.0) - w[i].conj() * w[j] / (4.0 * r * r * r);
                jet.levi[(o + i, o + j)] = -levi * sign;
                jet.holo[(o + i, o + j)] = w[i].conj() * w[j].conj() * (sign / (4.0 * r * r * r));
            }
        }
        Some(jet)
    }

    fn kernel(&self, z: &ComplexVector) -> Option<f64> {
        if !self.factors.iter().all(Factor::is_unit_ball) {
            return None;
        }
        let mut k = 1.0;
        for f in 0..self.factors.len() {
            let m = self.factors[f].dim() as u64;
            let w = self.block(f, z);
            let s = 1.0 - w.iter().map(|x| x.norm_sqr()).sum::<f64>();
            k *= ln_factorial(m).exp() / PI.powi(m as i32) / s.powi(m as i32 + 1);
        }
        Some(k)
    }

    fn kernel_log_levi(&self, z: &ComplexVector) -> Option<ComplexMatrix> {
        if !self.factors.iter().all(Factor::is_unit_ball) {
            return None;
        }
        let mut h = ComplexMatrix::zeros(self.dim, self.dim);
        for f in 0..self.factors.len() {
            let m = self.factors[f].dim();
            let o = self.offsets[f];
            let w = self.block(f, z);
            let s = 1.0 - w.iter().map(|x| x.norm_sqr()).sum::<f64>();
            let scale = (m + 1) as f64;
            for i in 0..m {
                for j in 0..m {
                    let delta = if i == j { 1.0 / s } else { 0.0 };
                    h[(o + i, o + j)] = (c(delta, 0.0) + w[i].conj() * w[j] / (s * s)) * scale;
                }
            }
        }
        Some(h)
    }
}

impl MonomialNorms for ReinhardtProduct {
    fn dimension(&self) -> usize {
        self.dim
    }

    fn log_norm_sq(&self, alpha: &[i64]) -> Option<f64> {
        let mut acc = 0.0;
        for (k, f) in self.factors.iter().enumerate() {
            let o = self.offsets[k];
            acc += f.log_norm_sq(&alpha[o..o + f.dim()])?;
        }
        Some(acc)
    }

    fn allows_negative(&self, j: usize) -> bool {
        let k = self.offsets.iter().rposition(|&o| o <= j).unwrap_or(0);
        matches!(self.factors[k], Factor::Annulus { .. })
    }

    fn blocks(&self) -> Vec<std::ops::Range<usize>> {
        self.offsets
            .iter()
            .zip(&self.factors)
            .map(|(&o, f)| o..o + f.dim())
            .collect()
    }
}

impl LeafCharts for ReinhardtProduct {
    /// On the face where factor `k` is active the leaves are
    /// `{w_k = const} × (other factors)` when factor `k` is strongly
    /// pseudoconvex (or one-dimensional).
    fn leaf_through(&self, p: &ComplexVector) -> Option<AffineLeaf> {
        let k = self.active_factor(p);
        let o = self.offsets[k];
        let dk = self.factors[k].dim();
        let l = self.dim - dk;
        let mut dirs = ComplexMatrix::zeros(self.dim, l);
        let mut col = 0;
        for j in 0..self.dim {
            if j < o || j >= o + dk {
                dirs[(j, col)] = c(1.0, 0.0);
                col += 1;
            }
        }
        Some(AffineLeaf {
            base: p.clone(),
            directions: dirs,
        })
    }
}

/// Builds one of the catalog domains: `ball`, `polydisc`, `product_disc_ball`
/// (the disc times the ball of dimension n−1), `ellipsoid` (with one
/// positive coefficient per coordinate in `params`) or `annulus_polydisc`
/// (`{params[0] < |z₁| < 1}` times the polydisc of dimension n−1).
pub fn catalog_domain(name: &str, dimension: usize, params: &[f64]) -> Result<DomainModel> {
    if dimension == 0 {
        return Err(Error::arg("dimension must be positive"));
    }
    let no_params = |what: &str| -> Result<()> {
        if params.is_empty() {
            Ok(())
        } else {
            Err(Error::arg(format!("{what} takes no parameters")))
        }
    };
    let factors = match name {
        "ball" => {
            no_params("ball")?;
            vec![Factor::ball(dimension)]
        }
        "polydisc" => {
            no_params("polydisc")?;
            vec![Factor::disc(); dimension]
        }
        "product_disc_ball" => {
            no_params("product_disc_ball")?;
            if dimension < 2 {
                return Err(Error::arg("product_disc_ball needs dimension >= 2"));
            }
            vec![Factor::disc(), Factor::ball(dimension - 1)]
        }
        "ellipsoid" => {
            if params.len() != dimension {
                return Err(Error::arg(format!(
                    "ellipsoid needs {dimension} coefficients, got {}",
                    params.len()
                )));
            }
            vec![Factor::Ellipsoid {
                coeffs: params.to_vec(),
            }]
        }
        "annulus_polydisc" => {
            let inner = match params {
                [r] if *r > 0.0 && *r < 1.0 => *r,
                _ => return Err(Error::arg("annulus_polydisc needs one inner radius in (0, 1)")),
            };
            let mut f = vec![Factor::Annulus { inner, outer: 1.0 }];
            f.extend(vec![Factor::disc(); dimension - 1]);
            f
        }
        other => return Err(Error::arg(format!("unknown catalog domain '{other}'"))),
    };
    let spec = DomainSpec::catalog(name, dimension, params);
    ReinhardtProduct::new(factors)?.into_domain(name, Some(spec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::cvec;
    use approx::assert_relative_eq;

    #[test]
    fn ball_kernel_oracle_at_origin() {
        let d = catalog_domain("ball", 2, &[]).unwrap();
        let k = d.closed_forms().unwrap().kernel(&ComplexVector::zeros(2)).unwrap();
        assert_relative_eq!(k, 2.0 / (PI * PI), max_relative = 1e-15);
    }

    #[test]
    fn polydisc_kernel_oracle_is_product() {
        let d = catalog_domain("polydisc", 2, &[]).unwrap();
        let z = cvec(&[c(0.3, 0.1), c(-0.2, 0.5)]);
        let k = d.closed_forms().unwrap().kernel(&z).unwrap();
        let disc = |w: num_complex::Complex64| 1.0 / (PI * (1.0 - w.norm_sqr()).powi(2));
        assert_relative_eq!(k, disc(z[0]) * disc(z[1]), max_relative = 1e-14);
    }

    #[test]
    fn ellipsoid_has_no_kernel_oracle() {
        let d = catalog_domain("ellipsoid", 2, &[2.0, 1.0]).unwrap();
        assert!(d.closed_forms().unwrap().kernel(&ComplexVector::zeros(2)).is_none());
        let z = cvec(&[c(0.5, 0.0), c(0.3, 0.0)]);
        assert_relative_eq!(d.rho(&z), 2.0 * 0.25 + 0.09 - 1.0, max_relative = 1e-15);
    }

    #[test]
    fn bad_catalog_requests_are_rejected() {
        assert!(catalog_domain("torus", 2, &[]).is_err());
        assert!(catalog_domain("ellipsoid", 2, &[1.0, -1.0]).is_err());
        assert!(catalog_domain("ellipsoid", 2, &[1.0]).is_err());
        assert!(catalog_domain("ball", 2, &[1.0]).is_err());
        assert!(catalog_domain("product_disc_ball", 1, &[]).is_err());
    }

    #[test]
    fn disc_monomial_norms() {
        let d = catalog_domain("polydisc", 1, &[]).unwrap();
        let norms = d.monomial_norms().unwrap();
        for k in 0..6 {
            let v = norms.log_norm_sq(&[k]).unwrap().exp();
            assert_relative_eq!(v, PI / (k as f64 + 1.0), max_relative = 1e-14);
        }
    }

    #[test]
    fn annulus_norms_match_radial_integral() {
        let a = ReinhardtProduct::new(vec![Factor::Annulus { inner: 0.5, outer: 1.0 }]).unwrap();
        for k in [-3i64, -2, -1, 0, 2] {
            // 2π ∫ r^{2k+1} dr by Simpson
            let m = 2000;
            let h = 0.5 / m as f64;
            let f = |r: f64| r.powi(2 * k as i32 + 1);
            let mut s = f(0.5) + f(1.0);
            for i in 1..m {
                let r = 0.5 + i as f64 * h;
                s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(r);
            }
            let expected = 2.0 * PI * s * h / 3.0;
            assert_relative_eq!(a.log_norm_sq(&[k]).unwrap().exp(), expected, max_relative = 1e-10);
        }
    }
}
