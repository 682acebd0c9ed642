//! Normalized boundary charts `ζ = Φ_p(z)` and the local weak peak function.
//!
//! The chart is built in three holomorphic steps: a unitary change of
//! coordinates centred at `p` whose first axis is the outward normal,
//! followed by the positive Levi eigendirections and then the leaf
//! directions; the quadratic shear `ζ₁ = ξ₁ + 2Σ c_jk ξ_j ξ_k` over the
//! positive block; and nothing else, since catalog leaves are affine.
//!
//! In the chart the boundary is the graph `Re ξ₁ = T(Im ξ₁, ξ̃)` and the
//! normalized defining function is `Re ξ₁ − T`, pulled back through the
//! shear. `T` is found by a one-dimensional Newton solve, its derivatives by
//! implicit differentiation.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{levi_rank, project_to_boundary, DomainModel, Jet, LeviData, DEFAULT_RANK_TOL};
use crate::linalg::{
    c, complete_unitary, norm, real_gradient, real_hessian, wirtinger_gradient,
    wirtinger_hessian, ComplexMatrix, ComplexVector,
};
use crate::sampling;

const RANK_PROBES: usize = 20;
const RANK_PROBE_RADIUS: f64 = 1e-2;
const MIXED_BLOCK_TOL: f64 = 1e-6;
const SHELL_SAMPLES: usize = 1000;
const SEED: u64 = 0x00c4_a27e;

#[derive(Clone, Debug)]
enum Surface {
    /// Boundary of a domain, through the graph construction.
    Domain(DomainModel),
    /// Exact quadric `Re ζ₁ + Σ λ_j |ζ_j|²`.
    Model,
}

#[derive(Clone, Debug, Serialize)]
pub struct NormalizedChart {
    #[serde(skip)]
    surface: Surface,
    pub dimension: usize,
    pub base_point: ComplexVector,
    /// Columns: outward normal, positive Levi directions, leaf directions.
    pub unitary: ComplexMatrix,
    /// Symmetric, over the positive block.
    pub shear_coeffs: ComplexMatrix,
    pub lambda: Vec<f64>,
    pub levi_rank: usize,
    pub leaf_dimension: usize,
    /// `2|∂ρ(p)|`, the factor between `ρ` and the graph form at `p`.
    pub normal_scale: f64,
    pub mixed_block_norm: f64,
    pub valid_radius: f64,
    pub residual_constant: f64,
    /// Radius `ε₀` of the certified peak region.
    pub peak_radius: f64,
}

/// Result of solving for the graph height and its derivatives.
struct Graph {
    height: f64,
    /// Derivatives in the real coordinates of `ξ` other than `Re ξ₁`.
    grad: DVector<f64>,
    hess: DMatrix<f64>,
}

impl NormalizedChart {
    /// The quadric model `{Re ζ₁ + Σ λ_j|ζ_j|² < 0}` in ℂⁿ with `l = n − 1 − len(λ)`
    /// flat directions; its own normalized chart at the origin.
    pub fn model(dimension: usize, lambda: &[f64]) -> Result<Self> {
        if dimension == 0 || lambda.len() >= dimension {
            return Err(Error::arg("model needs 1 + len(lambda) <= dimension"));
        }
        if lambda.iter().any(|&x| !(x > 0.0)) {
            return Err(Error::arg("lambda must be positive"));
        }
        let r = lambda.len();
        let mut chart = NormalizedChart {
            surface: Surface::Model,
            dimension,
            base_point: ComplexVector::zeros(dimension),
            unitary: ComplexMatrix::identity(dimension, dimension),
            shear_coeffs: ComplexMatrix::zeros(r, r),
            lambda: lambda.to_vec(),
            levi_rank: r,
            leaf_dimension: dimension - 1 - r,
            normal_scale: 1.0,
            mixed_block_norm: 0.0,
            valid_radius: 0.5,
            residual_constant: 0.0,
            peak_radius: 0.5,
        };
        chart.peak_radius = chart.certify_peak_radius()?;
        Ok(chart)
    }

    pub fn domain(&self) -> Option<&DomainModel> {
        match &self.surface {
            Surface::Domain(d) => Some(d),
            Surface::Model => None,
        }
    }

    pub fn is_model(&self) -> bool {
        matches!(self.surface, Surface::Model)
    }

    /// Number `n − l` of non-flat coordinates (normal plus positive).
    pub fn nonflat(&self) -> usize {
        1 + self.levi_rank
    }

    fn shear_value(&self, w: &ComplexVector) -> Complex64 {
        let r = self.levi_rank;
        let mut acc = c(0.0, 0.0);
        for j in 0..r {
            for k in 0..r {
                acc += self.shear_coeffs[(j, k)] * w[1 + j] * w[1 + k];
            }
        }
        acc * 2.0
    }

    pub fn xi_from_zeta(&self, zeta: &ComplexVector) -> ComplexVector {
        let mut xi = zeta.clone();
        xi[0] -= self.shear_value(zeta);
        xi
    }

    pub fn zeta_from_xi(&self, xi: &ComplexVector) -> ComplexVector {
        let mut zeta = xi.clone();
        zeta[0] += self.shear_value(xi);
        zeta
    }

    /// `Φ_p(z)`.
    pub fn to_chart(&self, z: &ComplexVector) -> ComplexVector {
        let xi = self.unitary.adjoint() * (z - &self.base_point);
        self.zeta_from_xi(&xi)
    }

    /// `Φ_p⁻¹(ζ)`.
    pub fn from_chart(&self, zeta: &ComplexVector) -> ComplexVector {
        &self.base_point + &self.unitary * self.xi_from_zeta(zeta)
    }

    /// Complex Jacobian `∂ζ/∂z` at `z`.
    pub fn jacobian(&self, z: &ComplexVector) -> ComplexMatrix {
        let xi = self.unitary.adjoint() * (z - &self.base_point);
        let mut s = ComplexMatrix::identity(self.dimension, self.dimension);
        let r = self.levi_rank;
        for k in 0..r {
            let mut acc = c(0.0, 0.0);
            for j in 0..r {
                acc += self.shear_coeffs[(k, j)] * xi[1 + j];
            }
            s[(0, 1 + k)] = acc * 4.0;
        }
        s * self.unitary.adjoint()
    }

    /// `∂ξ/∂ζ` at `ζ` (Jacobian of the inverse shear).
    fn inverse_shear_jacobian(&self, zeta: &ComplexVector) -> ComplexMatrix {
        let mut j = ComplexMatrix::identity(self.dimension, self.dimension);
        let r = self.levi_rank;
        for k in 0..r {
            let mut acc = c(0.0, 0.0);
            for m in 0..r {
                acc += self.shear_coeffs[(k, m)] * zeta[1 + m];
            }
            j[(0, 1 + k)] = -acc * 4.0;
        }
        j
    }

    /// Membership of `ζ` in the chart image `Φ_p(Ω ∩ U)`, `U` the preimage of
    /// the ball of radius `valid_radius`.
    pub fn contains(&self, zeta: &ComplexVector) -> bool {
        if norm(zeta) >= self.valid_radius {
            return false;
        }
        match &self.surface {
            Surface::Domain(d) => d.contains(&self.from_chart(zeta)),
            Surface::Model => self.model_value(zeta) < 0.0,
        }
    }

    /// `Re ζ₁ + Σ λ_j |ζ_j|²`.
    pub fn model_value(&self, zeta: &ComplexVector) -> f64 {
        zeta[0].re
            + self
                .lambda
                .iter()
                .enumerate()
                .map(|(j, l)| l * zeta[1 + j].norm_sqr())
                .sum::<f64>()
    }

    fn xi_jet_inputs(&self, d: &DomainModel, xi: &ComplexVector) -> Jet {
        let z = &self.base_point + &self.unitary * xi;
        let j = d.defining().jet(&z);
        let v = &self.unitary;
        Jet {
            value: j.value,
            gradient: v.transpose() * &j.gradient,
            levi: v.transpose() * &j.levi * v.map(|x| x.conj()),
            holo: v.transpose() * &j.holo * v,
        }
    }

    /// Solves `u(x, y, w̃) = 0` for `x` near 0 and differentiates implicitly.
    fn graph(&self, d: &DomainModel, y: f64, rest: &ComplexVector, want_hessian: bool) -> Option<Graph> {
        let n = self.dimension;
        let mut xi = rest.clone();
        let mut x = 0.0;
        let mut converged = false;
        for _ in 0..60 {
            xi[0] = c(x, y);
            let jet = self.xi_jet_inputs(d, &xi);
            let ux = 2.0 * jet.gradient[0].re;
            if !(ux > 0.0) || !jet.value.is_finite() {
                return None;
            }
            let dx = -jet.value / ux;
            x += dx;
            if dx.abs() < 1e-15 * (1.0 + x.abs()) || jet.value.abs() < 1e-16 {
                converged = true;
                break;
            }
            if x.abs() > 1e3 {
                return None;
            }
        }
        if !converged {
            return None;
        }
        xi[0] = c(x, y);
        let jet = self.xi_jet_inputs(d, &xi);
        let g = real_gradient(&jet.gradient);
        if !(g[0] > 0.0) {
            return None;
        }
        let m = 2 * n;
        let idx: Vec<usize> = (1..m).collect();
        let gs = DVector::from_iterator(m - 1, idx.iter().map(|&i| g[i]));
        let ts = -&gs / g[0];
        let hess = if want_hessian {
            let h = real_hessian(&jet.levi, &jet.holo);
            let hss = DMatrix::from_fn(m - 1, m - 1, |a, b| h[(idx[a], idx[b])]);
            let hs0 = DVector::from_iterator(m - 1, idx.iter().map(|&i| h[(i, 0)]));
            let h00 = h[(0, 0)];
            -(hss + &hs0 * ts.transpose() + &ts * hs0.transpose() + &ts * ts.transpose() * h00)
                / g[0]
        } else {
            DMatrix::zeros(0, 0)
        };
        Some(Graph { height: x, grad: ts, hess })
    }

    /// Jet in `ξ` of `ρ̂(ξ) = Re ξ₁ − T(Im ξ₁, ξ̃)`.
    fn xi_jet(&self, d: &DomainModel, xi: &ComplexVector) -> Option<Jet> {
        let n = self.dimension;
        let graph = self.graph(d, xi[0].im, xi, true)?;
        let m = 2 * n;
        let mut g = DVector::zeros(m);
        g[0] = 1.0;
        for a in 1..m {
            g[a] = -graph.grad[a - 1];
        }
        let mut h = DMatrix::zeros(m, m);
        for a in 1..m {
            for b in 1..m {
                h[(a, b)] = -graph.hess[(a - 1, b - 1)];
            }
        }
        let (levi, holo) = wirtinger_hessian(&h);
        Some(Jet {
            value: xi[0].re - graph.height,
            gradient: wirtinger_gradient(&g),
            levi,
            holo,
        })
    }

    /// Value of the normalized defining function at `ζ`.
    pub fn defining_value(&self, zeta: &ComplexVector) -> Result<f64> {
        match &self.surface {
            Surface::Model => Ok(self.model_value(zeta)),
            Surface::Domain(d) => {
                let xi = self.xi_from_zeta(zeta);
                let graph = self
                    .graph(d, xi[0].im, &xi, false)
                    .ok_or_else(|| self.out_of_chart(zeta))?;
                Ok(xi[0].re - graph.height)
            }
        }
    }

    /// Jet of the normalized defining function at `ζ`.
    pub fn defining_jet(&self, zeta: &ComplexVector) -> Result<Jet> {
        match &self.surface {
            Surface::Model => {
                let n = self.dimension;
                let mut jet = Jet::zeros(n);
                jet.value = self.model_value(zeta);
                jet.gradient[0] = c(0.5, 0.0);
                for (j, l) in self.lambda.iter().enumerate() {
                    jet.gradient[1 + j] = zeta[1 + j].conj() * *l;
                    jet.levi[(1 + j, 1 + j)] = c(*l, 0.0);
                }
                Ok(jet)
            }
            Surface::Domain(d) => {
                let xi = self.xi_from_zeta(zeta);
                let jx = self.xi_jet(d, &xi).ok_or_else(|| self.out_of_chart(zeta))?;
                let j = self.inverse_shear_jacobian(zeta);
                let mut holo = j.transpose() * &jx.holo * &j;
                let r = self.levi_rank;
                for a in 0..r {
                    for b in 0..r {
                        holo[(1 + a, 1 + b)] -= jx.gradient[0] * self.shear_coeffs[(a, b)] * 4.0;
                    }
                }
                Ok(Jet {
                    value: jx.value,
                    gradient: j.transpose() * &jx.gradient,
                    levi: j.transpose() * &jx.levi * j.map(|x| x.conj()),
                    holo,
                })
            }
        }
    }

    fn out_of_chart(&self, zeta: &ComplexVector) -> Error {
        Error::OutOfChart {
            radius: norm(zeta),
            limit: self.valid_radius,
        }
    }

    /// `|ρ_N(ζ) − Re ζ₁ − Σ λ_j|ζ_j|²|`.
    pub fn residual(&self, zeta: &ComplexVector) -> Result<f64> {
        Ok((self.defining_value(zeta)? - self.model_value(zeta)).abs())
    }

    /// Size of the admissible error terms `|ζ'|²|ζ''| + |ζ'|³ + |Im ζ₁|·|ζ|`.
    pub fn error_scale(&self, zeta: &ComplexVector) -> f64 {
        let r = self.levi_rank;
        let p: f64 = (1..=r).map(|j| zeta[j].norm_sqr()).sum::<f64>().sqrt();
        let q: f64 = (1 + r..self.dimension).map(|j| zeta[j].norm_sqr()).sum::<f64>().sqrt();
        p * p * q + p * p * p + zeta[0].im.abs() * norm(zeta)
    }

    /// Log-log slope of the largest residual over the positive directions
    /// on the given shells, or `None` when there are no positive directions.
    pub fn residual_decay(&self, shells: &[f64]) -> Result<Option<f64>> {
        let r = self.levi_rank;
        if r == 0 || shells.len() < 2 {
            return Ok(None);
        }
        let mut rng = sampling::rng(SEED ^ 0xdeca);
        let dirs: Vec<ComplexVector> = (0..200).map(|_| sampling::unit_vector(&mut rng, r)).collect();
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for &s in shells {
            let mut worst = 0.0f64;
            for d in &dirs {
                let mut zeta = ComplexVector::zeros(self.dimension);
                for j in 0..r {
                    zeta[1 + j] = d[j] * s;
                }
                worst = worst.max(self.residual(&zeta)?);
            }
            xs.push(s.ln());
            ys.push(worst.max(f64::MIN_POSITIVE).ln());
        }
        Ok(Some(crate::harness::ols(&xs, &ys).slope))
    }

    /// Largest dyadic radius on whose shells the residual bound holds, with
    /// the fitted constant.
    fn certify_residual(&self) -> Result<(f64, f64)> {
        let mut rng = sampling::rng(SEED);
        let n = self.dimension;
        let shells: Vec<f64> = (1..=7).map(|k| 0.5f64.powi(k)).collect();
        let mut ratios = Vec::new();
        for &s in &shells {
            let mut worst = Some(0.0f64);
            for _ in 0..SHELL_SAMPLES {
                let zeta = sampling::unit_vector(&mut rng, n) * c(s, 0.0);
                match self.residual(&zeta) {
                    Ok(res) => {
                        let e = self.error_scale(&zeta);
                        let ratio = if e > 1e-300 { res / e } else if res < 1e-14 { 0.0 } else { f64::INFINITY };
                        worst = worst.map(|w| w.max(ratio));
                    }
                    Err(_) => worst = None,
                }
            }
            ratios.push(worst);
        }
        let small: Vec<f64> = ratios[ratios.len() - 3..].iter().flatten().copied().collect();
        if small.len() < 3 || small.iter().any(|r| !r.is_finite()) {
            return Err(Error::numerical(
                "normal form does not hold near the base point",
                format!("shell ratios {ratios:?}"),
            ));
        }
        let constant = 2.0 * small.iter().fold(0.0f64, |a, &b| a.max(b));
        let mut radius = shells[shells.len() - 1];
        for (k, &s) in shells.iter().enumerate().rev() {
            match ratios[k] {
                Some(r) if r <= constant => radius = s,
                _ => break,
            }
        }
        Ok((radius, constant))
    }

    /// Largest dyadic `ε` such that sampled chart images of interior points in
    /// `B(0, ε)` satisfy `Re ζ₁ < |Im ζ₁|`.
    fn certify_peak_radius(&self) -> Result<f64> {
        let mut rng = sampling::rng(SEED ^ 0x9ea4);
        let n = self.dimension;
        let mut eps = self.valid_radius;
        for _ in 0..20 {
            let mut found = 0;
            let mut ok = true;
            let mut tries = 0;
            while found < SHELL_SAMPLES && tries < 200 * SHELL_SAMPLES {
                tries += 1;
                let zeta = sampling::in_ball(&mut rng, n, eps);
                if !self.contains(&zeta) {
                    continue;
                }
                found += 1;
                if zeta[0].re - zeta[0].im.abs() >= 0.0 {
                    ok = false;
                    break;
                }
            }
            if ok && found > 0 {
                return Ok(eps);
            }
            eps *= 0.5;
        }
        Err(Error::numerical("no peak region found", format!("last radius {eps:e}")))
    }
}

/// Levi data at `p` after checking that the rank is the same at 20 nearby
/// boundary points.
pub fn certify_constant_rank(domain: &DomainModel, p: &ComplexVector) -> Result<LeviData> {
    let n = domain.dimension();
    let data = levi_rank(domain, p, DEFAULT_RANK_TOL)?;
    let r = data.rank;
    let mut rng = sampling::rng(SEED ^ 0x7a2c);
    let mut ranks = vec![r];
    let t = &data.tangential_basis;
    for _ in 0..RANK_PROBES {
        let v = t * sampling::unit_vector(&mut rng, n - 1);
        let w = sampling::unit_vector(&mut rng, n);
        let q = p + (v * c(1.0, 0.0) + w * c(0.1, 0.0)) * c(RANK_PROBE_RADIUS * rng.gen::<f64>(), 0.0);
        let proj = project_to_boundary(domain, &q)?;
        let rank = levi_rank(domain, &proj.point, DEFAULT_RANK_TOL)?.rank;
        ranks.push(rank);
    }
    if ranks.iter().any(|&k| k != r) {
        return Err(Error::RankDrift { ranks });
    }
    Ok(data)
}

/// Normalized chart of `domain` at the boundary point `p`.
pub fn normalize_chart(domain: &DomainModel, p: &ComplexVector) -> Result<NormalizedChart> {
    let n = domain.dimension();
    let data = certify_constant_rank(domain, p)?;
    let r = data.rank;
    let l = n - 1 - r;

    let grad_norm = norm(&data.gradient);
    let nu = data.gradient.map(|g| g.conj() / grad_norm);
    let mut cols = vec![nu];
    for k in 0..r {
        cols.push(data.eigenvectors.column(k).into_owned());
    }
    if l > 0 {
        let charts = domain.leaf_charts().ok_or_else(|| {
            Error::Precondition("Levi-degenerate point needs leaf charts from the domain".into())
        })?;
        let leaf = charts
            .leaf_through(p)
            .ok_or_else(|| Error::Precondition("no leaf chart through the base point".into()))?;
        if leaf.directions.ncols() != l {
            return Err(Error::RankDrift { ranks: vec![r, n - 1 - leaf.directions.ncols()] });
        }
        for col in leaf.directions.column_iter() {
            cols.push(col.into_owned());
        }
    }
    let basis = ComplexMatrix::from_columns(&cols);
    let defect = (basis.adjoint() * &basis - ComplexMatrix::identity(n, n)).norm();
    if defect > 1e-8 {
        return Err(Error::PseudoconvexityViolation { norm: defect });
    }
    let unitary = complete_unitary(&basis);

    let mut chart = NormalizedChart {
        surface: Surface::Domain(domain.clone()),
        dimension: n,
        base_point: p.clone(),
        unitary,
        shear_coeffs: ComplexMatrix::zeros(r, r),
        lambda: Vec::new(),
        levi_rank: r,
        leaf_dimension: l,
        normal_scale: 2.0 * grad_norm,
        mixed_block_norm: 0.0,
        valid_radius: 0.5,
        residual_constant: 0.0,
        peak_radius: 0.5,
    };
    let d = domain.clone();
    let jet0 = chart
        .xi_jet(&d, &ComplexVector::zeros(n))
        .ok_or_else(|| Error::numerical("graph form failed at the base point", ""))?;
    chart.lambda = (1..=r).map(|j| jet0.levi[(j, j)].re).collect();
    let mut mixed = 0.0f64;
    for a in 1..n {
        for b in (1 + r)..n {
            mixed = mixed.max(jet0.levi[(a, b)].norm());
        }
    }
    chart.mixed_block_norm = mixed;
    if mixed > MIXED_BLOCK_TOL {
        return Err(Error::PseudoconvexityViolation { norm: mixed });
    }
    if chart.lambda.iter().any(|&x| !(x > 0.0)) {
        return Err(Error::PseudoconvexityViolation {
            norm: chart.lambda.iter().fold(0.0f64, |a, &b| a.min(b)).abs(),
        });
    }
    for a in 0..r {
        for b in 0..r {
            chart.shear_coeffs[(a, b)] = jet0.holo[(1 + a, 1 + b)] * 0.5;
        }
    }
    let (radius, constant) = chart.certify_residual()?;
    chart.valid_radius = radius;
    chart.residual_constant = constant;
    chart.peak_radius = chart.certify_peak_radius()?;
    Ok(chart)
}

/// `h(Φ_p(z)) = exp(−(−ζ₁)^{2/3})`, principal branch.
pub fn peak_function(chart: &NormalizedChart, z: &ComplexVector) -> Result<Complex64> {
    if z.len() != chart.dimension {
        return Err(Error::arg("dimension mismatch"));
    }
    let zeta = chart.to_chart(z);
    let r = norm(&zeta);
    if r >= chart.peak_radius {
        return Err(Error::OutOfChart {
            radius: r,
            limit: chart.peak_radius,
        });
    }
    Ok(peak_of_zeta(zeta[0]))
}

pub fn peak_of_zeta(zeta1: Complex64) -> Complex64 {
    let w = -zeta1;
    if w == c(0.0, 0.0) {
        return c(1.0, 0.0);
    }
    (-(w.ln() * (2.0 / 3.0)).exp()).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::catalog_domain;
    use crate::linalg::real_vector;
    use approx::assert_relative_eq;

    #[test]
    fn ball_chart_lambda_is_half() {
        let d = catalog_domain("ball", 2, &[]).unwrap();
        let chart = normalize_chart(&d, &real_vector(&[1.0, 0.0])).unwrap();
        assert_eq!(chart.levi_rank, 1);
        assert_relative_eq!(chart.lambda[0], 0.5, max_relative = 1e-10);
        assert!(norm(&chart.to_chart(&real_vector(&[1.0, 0.0]))) < 1e-12);
    }

    #[test]
    fn chart_round_trips() {
        let d = catalog_domain("ellipsoid", 2, &[2.0, 1.0]).unwrap();
        let p = real_vector(&[0.5f64.sqrt(), 0.0]);
        let chart = normalize_chart(&d, &p).unwrap();
        let z = ComplexVector::from_vec(vec![c(0.6, 0.05), c(0.1, -0.2)]);
        let back = chart.from_chart(&chart.to_chart(&z));
        assert!((back - z).norm() < 1e-13);
    }

    #[test]
    fn bidisc_face_has_no_positive_directions() {
        let d = catalog_domain("polydisc", 2, &[]).unwrap();
        let chart = normalize_chart(&d, &real_vector(&[1.0, 0.3])).unwrap();
        assert!(chart.lambda.is_empty());
        assert_eq!(chart.leaf_dimension, 1);
    }

    #[test]
    fn normalized_jet_matches_differences() {
        let d = catalog_domain("ellipsoid", 2, &[2.0, 1.0]).unwrap();
        let chart = normalize_chart(&d, &real_vector(&[0.5f64.sqrt(), 0.0])).unwrap();
        let zeta = ComplexVector::from_vec(vec![c(-0.01, 0.02), c(0.05, 0.03)]);
        let jet = chart.defining_jet(&zeta).unwrap();
        let h = 1e-4;
        let x = crate::linalg::to_real(&zeta);
        let f = |v: &DVector<f64>| chart.defining_value(&crate::linalg::from_real(v)).unwrap();
        let m = x.len();
        let mut hess = DMatrix::zeros(m, m);
        let mut grad = DVector::zeros(m);
        for i in 0..m {
            let mut e = DVector::zeros(m);
            e[i] = h;
            grad[i] = (f(&(&x + &e)) - f(&(&x - &e))) / (2.0 * h);
            for j in 0..m {
                let mut e2 = DVector::zeros(m);
                e2[j] = h;
                hess[(i, j)] = (f(&(&x + &e + &e2)) - f(&(&x + &e - &e2)) - f(&(&x - &e + &e2))
                    + f(&(&x - &e - &e2)))
                    / (4.0 * h * h);
            }
        }
        assert!((real_gradient(&jet.gradient) - grad).norm() < 1e-7);
        assert!((real_hessian(&jet.levi, &jet.holo) - hess).norm() < 1e-5);
    }

    #[test]
    fn peak_function_basics() {
        assert_relative_eq!(peak_of_zeta(c(0.0, 0.0)).re, 1.0);
        let v = peak_of_zeta(c(-1.0, 0.0));
        assert_relative_eq!(v.re, (-1.0f64).exp(), max_relative = 1e-15);
        assert!(v.im.abs() < 1e-15);
    }
}
