//! Levi form, tangential basis and numerical Levi rank.

use num_complex::Complex64;
use serde::Serialize;

use super::DomainModel;
use crate::error::{Error, Result};
use crate::linalg::{
    complete_unitary, hermitian_eigen, hermitian_form, max_abs, norm, ComplexMatrix,
    ComplexVector,
};

pub const DEFAULT_RANK_TOL: f64 = 1e-8;

/// Largest `|ρ(p)|` accepted for a point treated as lying on the boundary.
const ON_BOUNDARY: f64 = 1e-10;
const MIN_GRADIENT: f64 = 1e-10;

/// `Σ_{jk} ∂²ρ/∂z_j∂z̄_k X_j conj(Y_k)`.
pub fn levi_form(
    domain: &DomainModel,
    z: &ComplexVector,
    x: &ComplexVector,
    y: &ComplexVector,
) -> Result<Complex64> {
    domain.check_dim(x)?;
    domain.check_dim(y)?;
    let jet = domain.jet(z)?;
    Ok(hermitian_form(&jet.levi, x, y))
}

/// Orthonormal basis (columns) of `{v : Σ ∂_jρ v_j = 0}`.
pub fn tangential_basis(gradient: &ComplexVector) -> ComplexMatrix {
    let n = gradient.len();
    let nu = gradient.map(|g| g.conj()) / Complex64::new(norm(gradient), 0.0);
    let u = complete_unitary(&ComplexMatrix::from_columns(&[nu]));
    u.columns(1, n - 1).into_owned()
}

#[derive(Clone, Debug, Serialize)]
pub struct LeviData {
    pub base_point: ComplexVector,
    /// `∂ρ(p)`
    pub gradient: ComplexVector,
    /// n × (n−1), orthonormal columns.
    pub tangential_basis: ComplexMatrix,
    /// `(n−1) × (n−1)` Hermitian; entry `(a, b)` is `L(T_b, T_a)` so that
    /// `c^H A c = L(Tc, Tc)`.
    pub levi_matrix: ComplexMatrix,
    /// Descending.
    pub eigenvalues: Vec<f64>,
    /// Eigenvectors of `levi_matrix` mapped to ambient coordinates, in the
    /// order of `eigenvalues`.
    pub eigenvectors: ComplexMatrix,
    pub rank: usize,
    /// Ambient vectors spanning the numerical nullspace.
    pub nullspace_basis: ComplexMatrix,
    pub rank_tolerance: f64,
}

impl LeviData {
    pub fn nullity(&self) -> usize {
        self.eigenvalues.len() - self.rank
    }

    /// Ambient vectors of the positive eigenspaces.
    pub fn positive_basis(&self) -> ComplexMatrix {
        self.eigenvectors.columns(0, self.rank).into_owned()
    }
}

/// Levi data at a boundary point. Eigenvalues at or below `tol` times the
/// largest entry of the complex Hessian count as zero (absolute `tol` if the
/// Hessian vanishes).
pub fn levi_rank(domain: &DomainModel, p: &ComplexVector, tol: f64) -> Result<LeviData> {
    if !(tol > 0.0) {
        return Err(Error::arg("rank tolerance must be positive"));
    }
    let jet = domain.jet(p)?;
    let gnorm = norm(&jet.gradient);
    if gnorm < MIN_GRADIENT {
        return Err(Error::DegenerateBoundary { gradient_norm: gnorm });
    }
    if jet.value.abs() > ON_BOUNDARY * gnorm.max(1.0) {
        return Err(Error::arg(format!(
            "point is not on the boundary (rho = {:e}); project it first",
            jet.value
        )));
    }
    let t = tangential_basis(&jet.gradient);
    let a = t.adjoint() * jet.levi.map(|x| x.conj()) * &t;
    let scale = max_abs(&jet.levi);
    let threshold = if scale > 0.0 { tol * scale } else { tol };
    let (values, vecs) = hermitian_eigen(&a);
    let rank = values.iter().filter(|&&v| v > threshold).count();
    let ambient = &t * vecs;
    let nullspace = ambient.columns(rank, values.len() - rank).into_owned();
    Ok(LeviData {
        base_point: p.clone(),
        gradient: jet.gradient,
        tangential_basis: t,
        levi_matrix: a,
        eigenvalues: values,
        eigenvectors: ambient,
        rank,
        nullspace_basis: nullspace,
        rank_tolerance: threshold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::catalog_domain;
    use crate::linalg::{c, cvec, pairing, real_vector};

    #[test]
    fn ball_has_full_rank() {
        let d = catalog_domain("ball", 3, &[]).unwrap();
        let data = levi_rank(&d, &real_vector(&[1.0, 0.0, 0.0]), 1e-8).unwrap();
        assert_eq!(data.rank, 2);
        for v in data.tangential_basis.column_iter() {
            assert!(pairing(&data.gradient, &v.into_owned()).norm() < 1e-12);
        }
    }

    #[test]
    fn bidisc_face_is_flat() {
        let d = catalog_domain("polydisc", 2, &[]).unwrap();
        let data = levi_rank(&d, &real_vector(&[1.0, 0.3]), 1e-8).unwrap();
        assert_eq!(data.rank, 0);
        assert_eq!(data.nullity(), 1);
    }

    #[test]
    fn ellipsoid_levi_form_reads_coefficient() {
        let d = catalog_domain("ellipsoid", 2, &[2.0, 3.0]).unwrap();
        let z = cvec(&[c(0.1, 0.2), c(0.0, 0.1)]);
        let e2 = real_vector(&[0.0, 1.0]);
        let v = levi_form(&d, &z, &e2, &e2).unwrap();
        assert!((v - c(3.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn off_boundary_point_is_rejected() {
        let d = catalog_domain("ball", 2, &[]).unwrap();
        assert!(matches!(
            levi_rank(&d, &real_vector(&[0.5, 0.0]), 1e-8),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn null_vectors_are_annihilated() {
        let d = catalog_domain("product_disc_ball", 3, &[]).unwrap();
        let s = 0.5f64.sqrt();
        let p = cvec(&[c(0.2, 0.0), c(s, 0.0), c(0.0, s)]);
        let data = levi_rank(&d, &p, 1e-8).unwrap();
        assert_eq!(data.rank, 1);
        let jet = d.jet(&p).unwrap();
        for v in data.nullspace_basis.column_iter() {
            let v = v.into_owned();
            assert!(hermitian_form(&jet.levi, &v, &v).norm() < data.rank_tolerance);
        }
    }
}
