//! Lower bounds for the Kobayashi metric through the Sibony metric.

use std::ops::Range;

use serde::Serialize;

use crate::barrier::LogPshWitness;
use crate::error::{Error, Result};
use crate::geometry::DomainModel;
use crate::linalg::{c, hermitian_form, norm, ComplexMatrix, ComplexVector};

const CENTER_TOL: f64 = 1e-12;

/// A function `u` with `u(z) = 0`, `0 ≤ u ≤ 1` and `log u` psh on the
/// domain, known through its Levi matrix at `z`.
pub trait SibonyWitness {
    fn center(&self) -> &ComplexVector;
    fn levi_at_center(&self) -> ComplexMatrix;
}

impl SibonyWitness for LogPshWitness {
    fn center(&self) -> &ComplexVector {
        &self.center
    }
    fn levi_at_center(&self) -> ComplexMatrix {
        LogPshWitness::levi_at_center(self)
    }
}

/// `u(w) = |φ_a(A(w_B − c))|²`, where `w_B` is a coordinate block, `A` a
/// positive diagonal scaling taking a region containing the projection of
/// the domain onto the block into the unit ball, and `φ_a` the ball
/// automorphism sending `a = A(z_B − c)` to 0.
#[derive(Clone, Debug, Serialize)]
pub struct MobiusWitness {
    pub center: ComplexVector,
    pub block: Range<usize>,
    pub ball_center: ComplexVector,
    pub scaling: Vec<f64>,
}

impl MobiusWitness {
    pub fn new(center: ComplexVector, block: Range<usize>, ball_center: ComplexVector, scaling: Vec<f64>) -> Result<Self> {
        if block.end > center.len() || block.len() != ball_center.len() || block.len() != scaling.len() {
            return Err(Error::arg("witness block does not match the point"));
        }
        let w = MobiusWitness { center, block, ball_center, scaling };
        if w.ball_point().iter().map(|v| v.norm_sqr()).sum::<f64>() >= 1.0 {
            return Err(Error::arg("point is outside the witness ball"));
        }
        Ok(w)
    }

    fn ball_point(&self) -> Vec<num_complex::Complex64> {
        self.block
            .clone()
            .zip(self.ball_center.iter().zip(&self.scaling))
            .map(|(j, (c0, s))| (self.center[j] - c0) * s)
            .collect()
    }

    pub fn value(&self, w: &ComplexVector) -> f64 {
        let a = ComplexVector::from_vec(self.ball_point());
        let x = ComplexVector::from_iterator(
            a.len(),
            self.block
                .clone()
                .zip(self.ball_center.iter().zip(&self.scaling))
                .map(|(j, (c0, s))| (w[j] - c0) * s),
        );
        let s = a.norm_squared();
        if s == 0.0 {
            return x.norm_squared();
        }
        // |φ_a(x)|² = 1 − (1−|a|²)(1−|x|²)/|1−⟨x,a⟩|²
        let ip: num_complex::Complex64 = x.iter().zip(a.iter()).map(|(p, q)| p * q.conj()).sum();
        1.0 - (1.0 - s) * (1.0 - x.norm_squared()) / (c(1.0, 0.0) - ip).norm_sqr()
    }
}

impl SibonyWitness for MobiusWitness {
    fn center(&self) -> &ComplexVector {
        &self.center
    }

    /// `B^T conj(B)` with `B = Dφ_a(a)·A`; `|Dφ_a(a)v|² = |Pv|²/(1−|a|²)² + |Qv|²/(1−|a|²)`.
    fn levi_at_center(&self) -> ComplexMatrix {
        let a = ComplexVector::from_vec(self.ball_point());
        let m = a.len();
        let s = a.norm_squared();
        let proj = if s > 0.0 { &a * a.adjoint() / c(s, 0.0) } else { ComplexMatrix::zeros(m, m) };
        let q = ComplexMatrix::identity(m, m) - &proj;
        let mut b = proj / c(1.0 - s, 0.0) + q / c((1.0 - s).sqrt(), 0.0);
        for (k, sk) in self.scaling.iter().enumerate() {
            let mut col = b.column_mut(k);
            col *= c(*sk, 0.0);
        }
        let block = b.transpose() * b.map(|v| v.conj());
        let n = self.center.len();
        let mut out = ComplexMatrix::zeros(n, n);
        out.view_mut((self.block.start, self.block.start), (m, m)).copy_from(&block);
        out
    }
}

/// `(L_u(z, X))^{1/2}` for a witness centred at `z`.
pub fn sibony_lower(domain: &DomainModel, z: &ComplexVector, x: &ComplexVector, witness: &dyn SibonyWitness) -> Result<f64> {
    domain.check_dim(z)?;
    domain.check_dim(x)?;
    if witness.center().len() != z.len() || norm(&(witness.center() - z)) > CENTER_TOL * (1.0 + norm(z)) {
        return Err(Error::arg("witness is not centred at the requested point"));
    }
    let l = hermitian_form(&witness.levi_at_center(), x, x).re;
    Ok(l.max(0.0).sqrt())
}

/// Möbius witnesses at `z`: one per factor of a catalog product, plus one
/// from a ball enclosing the bounding box.
pub fn mobius_witnesses(domain: &DomainModel, z: &ComplexVector) -> Result<Vec<MobiusWitness>> {
    domain.check_dim(z)?;
    if !domain.contains(z) {
        return Err(Error::arg("point is not inside the domain"));
    }
    let n = z.len();
    let mut out = Vec::new();
    let blocks: Vec<(Range<usize>, Vec<f64>)> = match domain.spec() {
        Some(spec) if spec.defining_fn.is_none() => match spec.name.as_str() {
            "ball" => vec![(0..n, vec![1.0; n])],
            "polydisc" | "annulus_polydisc" => (0..n).map(|j| (j..j + 1, vec![1.0])).collect(),
            "product_disc_ball" => vec![(0..1, vec![1.0]), (1..n, vec![1.0; n - 1])],
            "ellipsoid" => vec![(0..n, spec.params.iter().map(|a| a.sqrt()).collect())],
            _ => Vec::new(),
        },
        _ => Vec::new(),
    };
    for (block, scaling) in blocks {
        let m = block.len();
        out.push(MobiusWitness::new(z.clone(), block, ComplexVector::zeros(m), scaling)?);
    }
    let bb = domain.bounding_box();
    let mid = ComplexVector::from_iterator(n, (0..n).map(|j| c(0.5 * (bb.lower[j] + bb.upper[j]), 0.5 * (bb.lower[n + j] + bb.upper[n + j]))));
    let r = bb.enclosing_radius(&mid);
    out.push(MobiusWitness::new(z.clone(), 0..n, mid, vec![1.0 / r; n])?);
    Ok(out)
}

/// Largest Möbius-witness lower bound at `(z, X)`.
pub fn best_sibony_lower(domain: &DomainModel, z: &ComplexVector, x: &ComplexVector) -> Result<f64> {
    let mut best = 0.0f64;
    for w in mobius_witnesses(domain, z)? {
        best = best.max(sibony_lower(domain, z, x, &w)?);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::catalog_domain;
    use crate::linalg::{cvec, real_vector};

    #[test]
    fn disc_origin_is_exact() {
        let d = catalog_domain("ball", 1, &[]).unwrap();
        let v = best_sibony_lower(&d, &real_vector(&[0.0]), &real_vector(&[1.0])).unwrap();
        assert!((v - 1.0).abs() < 1e-15);
    }

    #[test]
    fn disc_matches_poincare() {
        let d = catalog_domain("ball", 1, &[]).unwrap();
        let z = cvec(&[c(0.3, -0.4)]);
        let v = best_sibony_lower(&d, &z, &real_vector(&[1.0])).unwrap();
        assert!((v - 1.0 / (1.0 - 0.25)).abs() < 1e-14);
    }

    #[test]
    fn levi_matches_finite_differences() {
        let z = cvec(&[c(0.2, 0.1), c(-0.3, 0.25)]);
        let w = MobiusWitness::new(z.clone(), 0..2, ComplexVector::zeros(2), vec![1.0, 1.3]).unwrap();
        assert!(w.value(&z).abs() < 1e-15);
        let x = cvec(&[c(0.7, -0.2), c(0.1, 0.5)]);
        // L_u(X) = ∂_t∂_t̄ u(z + tX) = ¼Δ in t
        let h = 1e-4;
        let f = |s: f64, t: f64| w.value(&(&z + &x * c(s, t)));
        let lap = (f(h, 0.0) + f(-h, 0.0) + f(0.0, h) + f(0.0, -h) - 4.0 * f(0.0, 0.0)) / (h * h);
        let l = hermitian_form(&w.levi_at_center(), &x, &x).re;
        assert!((0.25 * lap - l).abs() < 1e-6 * l, "{} vs {l}", 0.25 * lap);
    }

    #[test]
    fn off_centre_witness_is_rejected() {
        let d = catalog_domain("ball", 2, &[]).unwrap();
        let w = MobiusWitness::new(real_vector(&[0.1, 0.0]), 0..2, ComplexVector::zeros(2), vec![1.0; 2]).unwrap();
        let r = sibony_lower(&d, &real_vector(&[0.0, 0.0]), &real_vector(&[1.0, 0.0]), &w);
        assert!(matches!(r, Err(Error::Argument(_))));
    }
}
