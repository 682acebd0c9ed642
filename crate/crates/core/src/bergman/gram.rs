//! Orthonormalized polynomials on star-shaped domains.
//!
//! Inner products of the monomials `((z−c)/s)^α` are integrated in polar
//! coordinates about the centre `c`: the radial integral of
//! `r^{|α|+|β|+2n−1}` up to the boundary radius `R(θ)` is exact, and the
//! sphere `S^{2n−1}` is parametrized by `z_j = u_j e^{iφ_j}` with `u` on the
//! positive orthant of the real sphere (composite Gauss–Legendre in the
//! hyperspherical angles, trapezoid rule in the phases).

use std::f64::consts::{FRAC_PI_2, PI};
use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;
use nalgebra::{Cholesky, Dyn};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::DomainModel;
use crate::linalg::{c, hermitian_eigen, ComplexMatrix, ComplexVector};
use crate::sampling;

pub const MAX_CONDITION: f64 = 1e12;
const REGULARIZATION: f64 = 1e-14;
const RAY_SCAN: usize = 64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadraturePlan {
    /// Panels per hyperspherical angle on `[0, π/2]`.
    pub angle_panels: usize,
    /// Gauss–Legendre nodes per panel.
    pub angle_nodes: usize,
    /// Trapezoid nodes per phase.
    pub phase_nodes: usize,
}

impl QuadraturePlan {
    pub fn for_degree(degree: usize) -> Self {
        QuadraturePlan {
            angle_panels: 8,
            angle_nodes: 12,
            phase_nodes: degree + 8,
        }
    }

    /// Directions and weights on `S^{2n−1}`; the weights sum to its area.
    pub fn sphere_rule(&self, n: usize) -> Vec<(ComplexVector, f64)> {
        let gl = GaussLegendre::new(NonZeroUsize::new(self.angle_nodes.max(1)).unwrap());
        let h = FRAC_PI_2 / self.angle_panels as f64;
        let mut angle_rule = Vec::new();
        for p in 0..self.angle_panels {
            let a = p as f64 * h;
            for (x, w) in gl.iter() {
                angle_rule.push((a + 0.5 * h * (x + 1.0), 0.5 * h * w));
            }
        }
        // points u on the positive orthant of S^{n−1} with the weight Π u_j dσ
        let mut orthant: Vec<(Vec<f64>, f64)> = vec![(Vec::new(), 1.0)];
        let mut prefix: Vec<f64> = vec![1.0];
        for k in 0..n.saturating_sub(1) {
            let mut next = Vec::new();
            let mut next_prefix = Vec::new();
            for ((u, w), s) in orthant.iter().zip(&prefix) {
                for &(eta, we) in &angle_rule {
                    let mut v = u.clone();
                    v.push(s * eta.cos());
                    let jac = eta.sin().powi((n - 2 - k) as i32);
                    next.push((v, w * we * jac));
                    next_prefix.push(s * eta.sin());
                }
            }
            orthant = next;
            prefix = next_prefix;
        }
        for ((u, w), s) in orthant.iter_mut().zip(&prefix) {
            u.push(*s);
            *w *= u.iter().product::<f64>();
        }
        let m = self.phase_nodes.max(1);
        let dphi = 2.0 * PI / m as f64;
        let mut out = Vec::with_capacity(orthant.len() * m.pow(n as u32));
        for (u, w) in &orthant {
            let mut idx = vec![0usize; n];
            loop {
                let dir = ComplexVector::from_iterator(
                    n,
                    (0..n).map(|j| num_complex::Complex64::from_polar(u[j], idx[j] as f64 * dphi)),
                );
                out.push((dir, w * dphi.powi(n as i32)));
                let mut j = 0;
                while j < n {
                    idx[j] += 1;
                    if idx[j] < m {
                        break;
                    }
                    idx[j] = 0;
                    j += 1;
                }
                if j == n {
                    break;
                }
            }
        }
        out
    }
}

/// Graded multi-indices with `|α| ≤ degree`.
pub fn graded_indices(n: usize, degree: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for d in 0..=degree {
        let mut cur = vec![0u32; n];
        fill(&mut out, &mut cur, 0, d as u32);
    }
    out
}

fn fill(out: &mut Vec<Vec<u32>>, cur: &mut Vec<u32>, i: usize, left: u32) {
    let n = cur.len();
    if i == n - 1 {
        cur[i] = left;
        out.push(cur.clone());
        return;
    }
    for k in (0..=left).rev() {
        cur[i] = k;
        fill(out, cur, i + 1, left - k);
    }
}

/// Boundary radius along `c + tθ`, requiring the ray to leave once.
fn boundary_radius(domain: &DomainModel, dir: &ComplexVector, reach: f64) -> Result<f64> {
    let centre = domain.center();
    let inside = |t: f64| {
        let z = centre + dir * c(t, 0.0);
        domain.bounding_box().contains(&z) && domain.contains(&z)
    };
    let step = reach / RAY_SCAN as f64;
    let mut lo = 0.0;
    let mut hi = None;
    for k in 1..=RAY_SCAN {
        let t = k as f64 * step;
        if !inside(t) {
            hi = Some(t);
            break;
        }
        lo = t;
    }
    let mut hi = hi.ok_or_else(|| Error::Precondition("domain is unbounded along a ray".into()))?;
    let exit = hi;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if inside(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut t = exit;
    while t < reach {
        t += step;
        if inside(t) {
            return Err(Error::Precondition(
                "domain is not star-shaped about its centre".into(),
            ));
        }
    }
    Ok(0.5 * (lo + hi))
}

#[derive(Clone, Debug)]
pub struct GramSystem {
    pub dimension: usize,
    pub degree: usize,
    pub center: ComplexVector,
    pub scale: f64,
    pub indices: Vec<Vec<u32>>,
    pub condition: f64,
    pub plan: QuadraturePlan,
    /// Smallest boundary radius seen from the centre.
    pub min_radius: f64,
    chol: Cholesky<num_complex::Complex64, Dyn>,
}

impl GramSystem {
    pub fn build(domain: &DomainModel, degree: usize, plan: &QuadraturePlan) -> Result<Self> {
        let n = domain.dimension();
        let indices = graded_indices(n, degree);
        let dirs = plan.sphere_rule(n);
        let reach = 2.0 * domain.bounding_box().enclosing_radius(domain.center());
        let radii: Vec<Result<f64>> = sampling::par_map(&dirs, |(d, _)| boundary_radius(domain, d, reach));
        let radii: Vec<f64> = radii.into_iter().collect::<Result<_>>()?;
        let scale = radii.iter().cloned().fold(0.0, f64::max);
        let min_radius = radii.iter().cloned().fold(f64::INFINITY, f64::min);
        let b = indices.len();
        let degs: Vec<usize> = indices.iter().map(|a| a.iter().sum::<u32>() as usize).collect();
        let inv_deg: Vec<f64> = (0..=2 * degree).map(|d| 1.0 / (d + 2 * n) as f64).collect();
        let items: Vec<usize> = (0..dirs.len()).collect();
        let chunk = 2048;
        let chunks: Vec<&[usize]> = items.chunks(chunk).collect();
        let partial = sampling::par_map(&chunks, |ch| {
            let mut g = ComplexMatrix::zeros(b, b);
            let mut v = vec![c(0.0, 0.0); b];
            for &k in ch.iter() {
                let (dir, w) = &dirs[k];
                let rr = radii[k] / scale;
                for (a, alpha) in indices.iter().enumerate() {
                    let mut p = c(1.0, 0.0);
                    for (j, &e) in alpha.iter().enumerate() {
                        p *= dir[j].powu(e);
                    }
                    v[a] = p * rr.powi(degs[a] as i32);
                }
                let base = w * rr.powi(2 * n as i32);
                for a in 0..b {
                    let va = v[a] * base;
                    for bb in a..b {
                        g[(a, bb)] += va * v[bb].conj() * inv_deg[degs[a] + degs[bb]];
                    }
                }
            }
            g
        });
        let mut g = ComplexMatrix::zeros(b, b);
        for p in partial {
            g += p;
        }
        let vol_scale = scale.powi(2 * n as i32);
        for a in 0..b {
            for bb in a..b {
                g[(a, bb)] *= vol_scale;
                g[(bb, a)] = g[(a, bb)].conj();
            }
        }
        let trace: f64 = (0..b).map(|a| g[(a, a)].re).sum();
        for a in 0..b {
            g[(a, a)] += c(REGULARIZATION * trace, 0.0);
        }
        let (eig, _) = hermitian_eigen(&g);
        let condition = eig[0] / eig[eig.len() - 1].max(f64::MIN_POSITIVE);
        if !(condition <= MAX_CONDITION) {
            let per_degree = condition.log10() / degree.max(1) as f64;
            let suggested = (MAX_CONDITION.log10() / per_degree).floor() as usize;
            return Err(Error::Conditioning { condition, suggested_degree: suggested.min(degree.saturating_sub(1)) });
        }
        let chol = Cholesky::new(g).ok_or_else(|| Error::Conditioning {
            condition,
            suggested_degree: degree.saturating_sub(1),
        })?;
        Ok(GramSystem {
            dimension: n,
            degree,
            center: domain.center().clone(),
            scale,
            indices,
            condition,
            plan: plan.clone(),
            min_radius,
            chol,
        })
    }

    fn basis(&self, z: &ComplexVector) -> (ComplexVector, ComplexMatrix) {
        let n = self.dimension;
        let w = (z - &self.center) / c(self.scale, 0.0);
        let b = self.indices.len();
        let mut v = ComplexVector::zeros(b);
        let mut dv = ComplexMatrix::zeros(b, n);
        for (a, alpha) in self.indices.iter().enumerate() {
            let mut p = c(1.0, 0.0);
            for (j, &e) in alpha.iter().enumerate() {
                p *= w[j].powu(e);
            }
            v[a] = p;
            for j in 0..n {
                if alpha[j] == 0 {
                    continue;
                }
                let mut q = c(alpha[j] as f64 / self.scale, 0.0);
                for (i, &e) in alpha.iter().enumerate() {
                    q *= w[i].powu(if i == j { e - 1 } else { e });
                }
                dv[(a, j)] = q;
            }
        }
        (v, dv)
    }

    /// `K(z)` and `∂²log K/∂z_j∂z̄_k`.
    pub fn evaluate(&self, z: &ComplexVector) -> (f64, ComplexMatrix) {
        let (v, dv) = self.basis(z);
        let l = self.chol.l();
        let u = l.solve_lower_triangular(&v).expect("nonsingular factor");
        let uj = l.solve_lower_triangular(&dv).expect("nonsingular factor");
        let k = u.norm_squared();
        let grad = uj.adjoint() * &u; // conj(∂_j K)
        let hess = uj.adjoint() * &uj; // entry (k, j) = conj(∂_j∂̄_k K)
        let n = self.dimension;
        let levi = ComplexMatrix::from_fn(n, n, |j, kk| {
            let kjk = hess[(kk, j)].conj();
            let gj = grad[j].conj();
            let gk = grad[kk];
            (kjk * k - gj * gk) / (k * k)
        });
        (k, levi)
    }
}
