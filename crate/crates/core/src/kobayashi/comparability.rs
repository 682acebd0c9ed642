//! `M(z, X) = |L_δ(z, X)|/δ(z) + |⟨∂δ(z), X⟩|²/δ(z)²`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::geometry::distance_to_boundary;
use crate::geometry::DomainModel;
use crate::linalg::{from_real, hermitian_form, pairing, to_real, wirtinger_gradient, wirtinger_hessian, ComplexVector};

const FD_STEP: f64 = 1e-4;

fn collar(e: Error) -> Error {
    Error::OutOfRange(format!("outside the collar where the boundary distance is smooth: {e}"))
}

/// `(δ, ∂δ, ∂∂̄δ)` from the closed form when available, otherwise from
/// central differences of the projected distance with step `1e-4·δ`.
fn distance_derivatives(domain: &DomainModel, z: &ComplexVector) -> Result<(f64, ComplexVector, crate::linalg::ComplexMatrix)> {
    if let Some(jet) = domain.closed_forms().and_then(|f| f.distance_jet(z)) {
        return Ok((jet.value, jet.gradient, jet.levi));
    }
    let delta = distance_to_boundary(domain, z).map_err(collar)?;
    let h = FD_STEP * delta;
    let x = to_real(z);
    let dim = x.len();
    let f = |v: &DVector<f64>| distance_to_boundary(domain, &from_real(v)).map_err(collar);
    let shifted = |i: usize, si: f64, j: usize, sj: f64| {
        let mut v = x.clone();
        v[i] += si * h;
        v[j] += sj * h;
        f(&v)
    };
    let mut g = DVector::zeros(dim);
    let mut hess = DMatrix::zeros(dim, dim);
    for i in 0..dim {
        let p = shifted(i, 1.0, i, 0.0)?;
        let m = shifted(i, -1.0, i, 0.0)?;
        g[i] = (p - m) / (2.0 * h);
        hess[(i, i)] = (p - 2.0 * delta + m) / (h * h);
        for j in 0..i {
            let v = (shifted(i, 1.0, j, 1.0)? - shifted(i, 1.0, j, -1.0)? - shifted(i, -1.0, j, 1.0)?
                + shifted(i, -1.0, j, -1.0)?)
                / (4.0 * h * h);
            hess[(i, j)] = v;
            hess[(j, i)] = v;
        }
    }
    let (levi, _) = wirtinger_hessian(&hess);
    Ok((delta, wirtinger_gradient(&g), levi))
}

pub fn comparability_m(domain: &DomainModel, z: &ComplexVector, x: &ComplexVector) -> Result<f64> {
    domain.check_dim(z)?;
    domain.check_dim(x)?;
    if !domain.contains(z) {
        return Err(Error::arg("point is not inside the domain"));
    }
    let (delta, grad, levi) = distance_derivatives(domain, z)?;
    if !(delta > 0.0) {
        return Err(Error::OutOfRange(format!("boundary distance {delta:e} is not positive")));
    }
    let l = hermitian_form(&levi, x, x).re;
    Ok(l.abs() / delta + pairing(&grad, x).norm_sqr() / (delta * delta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::catalog_domain;
    use crate::harness::{geometric_deltas, loglog};
    use crate::linalg::real_vector;

    #[test]
    fn bidisc_flat_direction_vanishes() {
        let d = catalog_domain("polydisc", 2, &[]).unwrap();
        let m = comparability_m(&d, &real_vector(&[0.99, 0.0]), &real_vector(&[0.0, 1.0])).unwrap();
        assert!(m.abs() < 1e-8);
    }

    #[test]
    fn normal_and_tangential_slopes() {
        let bidisc = catalog_domain("polydisc", 2, &[]).unwrap();
        let ball = catalog_domain("ball", 2, &[]).unwrap();
        let ds = geometric_deltas(1e-3, 1e-1, 12);
        let normal: Vec<f64> = ds
            .iter()
            .map(|&dl| comparability_m(&bidisc, &real_vector(&[1.0 - dl, 0.0]), &real_vector(&[1.0, 0.0])).unwrap())
            .collect();
        let tangential: Vec<f64> = ds
            .iter()
            .map(|&dl| comparability_m(&ball, &real_vector(&[1.0 - dl, 0.0]), &real_vector(&[0.0, 1.0])).unwrap())
            .collect();
        let s1 = loglog(&ds, &normal).slope;
        let s2 = loglog(&ds, &tangential).slope;
        assert!((s1 + 2.0).abs() <= 0.05, "{s1}");
        assert!((s2 + 1.0).abs() <= 0.05, "{s2}");
    }

    #[test]
    fn finite_differences_agree_with_closed_form() {
        let ball = catalog_domain("ball", 2, &[]).unwrap();
        let bare = ball.pullback_affine(nalgebra::DMatrix::identity(2, 2).map(|v: f64| crate::linalg::c(v, 0.0)), ComplexVector::zeros(2)).unwrap();
        assert!(bare.closed_forms().is_none());
        let z = real_vector(&[0.8, 0.1]);
        let x = crate::linalg::cvec(&[crate::linalg::c(0.3, 0.2), crate::linalg::c(-0.5, 0.4)]);
        let exact = comparability_m(&ball, &z, &x).unwrap();
        let fd = comparability_m(&bare, &z, &x).unwrap();
        assert!((exact - fd).abs() < 1e-5 * exact, "{exact} vs {fd}");
    }
}
