//! Complex linear algebra helpers and conversions between Wirtinger and
//! real-coordinate derivative data.
//!
//! Real coordinates are ordered `[x_1, …, x_n, y_1, …, y_n]` with
//! `z_j = x_j + i y_j`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

pub type ComplexVector = DVector<Complex64>;
pub type ComplexMatrix = DMatrix<Complex64>;

pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Builds a complex vector from real parts only.
pub fn real_vector(xs: &[f64]) -> ComplexVector {
    ComplexVector::from_iterator(xs.len(), xs.iter().map(|&x| c(x, 0.0)))
}

pub fn cvec(zs: &[Complex64]) -> ComplexVector {
    ComplexVector::from_column_slice(zs)
}

/// Bilinear pairing `⟨a, v⟩ = Σ a_j v_j` (no conjugation), used for `⟨∂ρ, X⟩`.
pub fn pairing(a: &ComplexVector, v: &ComplexVector) -> Complex64 {
    a.iter().zip(v.iter()).map(|(x, y)| x * y).sum()
}

/// Hermitian form `Σ_{jk} m_jk x_j conj(y_k)`.
pub fn hermitian_form(m: &ComplexMatrix, x: &ComplexVector, y: &ComplexVector) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..x.len() {
        for k in 0..y.len() {
            acc += m[(j, k)] * x[j] * y[k].conj();
        }
    }
    acc
}

pub fn norm(v: &ComplexVector) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn max_abs(m: &ComplexMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Largest deviation from Hermitian symmetry.
pub fn hermitian_defect(m: &ComplexMatrix) -> f64 {
    let mut worst = 0.0f64;
    for j in 0..m.nrows() {
        for k in 0..m.ncols() {
            worst = worst.max((m[(j, k)] - m[(k, j)].conj()).norm());
        }
    }
    worst
}

/// Eigen-decomposition of a Hermitian matrix with eigenvalues sorted in
/// descending order; column `k` of the returned matrix belongs to value `k`.
pub fn hermitian_eigen(m: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), ComplexMatrix::zeros(0, 0));
    }
    // symmetrize so round-off does not leak into the solver
    let sym = (m + m.adjoint()) * c(0.5, 0.0);
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

pub fn min_hermitian_eigenvalue(m: &ComplexMatrix) -> f64 {
    hermitian_eigen(m).0.last().copied().unwrap_or(0.0)
}

/// Completes orthonormal columns `basis` (n × k) to a unitary n × n matrix
/// whose first k columns are `basis`.
pub fn complete_unitary(basis: &ComplexMatrix) -> ComplexMatrix {
    let n = basis.nrows();
    let mut cols: Vec<ComplexVector> = basis.column_iter().map(|c| c.into_owned()).collect();
    while cols.len() < n {
        let mut best: Option<(f64, ComplexVector)> = None;
        for e in 0..n {
            let mut v = ComplexVector::zeros(n);
            v[e] = c(1.0, 0.0);
            for _ in 0..2 {
                for q in &cols {
                    let proj = q.dotc(&v);
                    v -= q * proj;
                }
            }
            let nv = norm(&v);
            if best.as_ref().is_none_or(|(b, _)| nv > *b) {
                best = Some((nv, v / c(nv, 0.0)));
            }
        }
        cols.push(best.expect("n > 0").1);
    }
    ComplexMatrix::from_columns(&cols)
}

/// Real gradient `[f_x, f_y]` from the Wirtinger gradient `∂f/∂z_j`.
pub fn real_gradient(dz: &ComplexVector) -> DVector<f64> {
    let n = dz.len();
    let mut g = DVector::zeros(2 * n);
    for j in 0..n {
        g[j] = 2.0 * dz[j].re;
        g[n + j] = -2.0 * dz[j].im;
    }
    g
}

/// Wirtinger gradient from the real gradient.
pub fn wirtinger_gradient(g: &DVector<f64>) -> ComplexVector {
    let n = g.len() / 2;
    ComplexVector::from_iterator(n, (0..n).map(|j| c(0.5 * g[j], -0.5 * g[n + j])))
}

/// Real Hessian from the Levi block `∂²f/∂z_j∂z̄_k` and the holomorphic block
/// `∂²f/∂z_j∂z_k`.
pub fn real_hessian(levi: &ComplexMatrix, holo: &ComplexMatrix) -> DMatrix<f64> {
    let n = levi.nrows();
    let mut h = DMatrix::zeros(2 * n, 2 * n);
    for j in 0..n {
        for k in 0..n {
            let m = levi[(j, k)];
            let q = holo[(j, k)];
            h[(j, k)] = 2.0 * (m.re + q.re);
            h[(n + j, n + k)] = 2.0 * (m.re - q.re);
            h[(j, n + k)] = 2.0 * (m.im - q.im);
            h[(n + j, k)] = -2.0 * (m.im + q.im);
        }
    }
    h
}

/// Inverse of [`real_hessian`]: returns `(levi, holo)`.
pub fn wirtinger_hessian(h: &DMatrix<f64>) -> (ComplexMatrix, ComplexMatrix) {
    let n = h.nrows() / 2;
    let mut levi = ComplexMatrix::zeros(n, n);
    let mut holo = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        for k in 0..n {
            let xx = h[(j, k)];
            let yy = h[(n + j, n + k)];
            let xy = h[(j, n + k)];
            let yx = h[(n + j, k)];
            levi[(j, k)] = c(0.25 * (xx + yy), 0.25 * (xy - yx));
            holo[(j, k)] = c(0.25 * (xx - yy), -0.25 * (xy + yx));
        }
    }
    (levi, holo)
}

pub fn to_real(z: &ComplexVector) -> DVector<f64> {
    let n = z.len();
    let mut x = DVector::zeros(2 * n);
    for j in 0..n {
        x[j] = z[j].re;
        x[n + j] = z[j].im;
    }
    x
}

pub fn from_real(x: &DVector<f64>) -> ComplexVector {
    let n = x.len() / 2;
    ComplexVector::from_iterator(n, (0..n).map(|j| c(x[j], x[n + j])))
}

/// Real direction (length 2n) of the complex vector `v` in real coordinates.
pub fn real_direction(v: &ComplexVector) -> DVector<f64> {
    to_real(v)
}
