//! Nearest-point projection onto `{ρ = 0}` and the boundary distance.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::DomainModel;
use crate::error::{Error, Result};
use crate::linalg::{from_real, norm, real_gradient, real_hessian, to_real, ComplexVector};

const MAX_NEWTON: usize = 50;
const RHO_TOL: f64 = 1e-12;
/// Number of random rays used to sanity-check a Newton projection.
const CHECK_RAYS: usize = 48;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ProjectionMethod {
    ClosedForm,
    Newton,
    Bisection,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundaryProjection {
    pub point: ComplexVector,
    pub distance: f64,
    pub method: ProjectionMethod,
    pub iterations: usize,
}

/// Unit outward normal `conj(∂ρ)/|∂ρ|` at `p`.
pub fn outward_normal(domain: &DomainModel, p: &ComplexVector) -> Result<ComplexVector> {
    let jet = domain.jet(p)?;
    let g = norm(&jet.gradient);
    if g < 1e-10 {
        return Err(Error::DegenerateBoundary { gradient_norm: g });
    }
    Ok(jet.gradient.map(|x| x.conj() / g))
}

pub fn inward_normal(domain: &DomainModel, p: &ComplexVector) -> Result<ComplexVector> {
    Ok(-outward_normal(domain, p)?)
}

/// Boundary point along `x + t·dir` (t ≥ 0) by bisection, if the ray leaves
/// the closure of the domain inside the bounding box.
fn ray_hit(domain: &DomainModel, x: &DVector<f64>, dir: &DVector<f64>) -> Option<(f64, DVector<f64>)> {
    let inside = |t: f64| {
        let z = from_real(&(x + dir * t));
        domain.bounding_box().contains(&z) && domain.rho(&z) < 0.0
    };
    let start_inside = domain.rho(&from_real(x)) < 0.0;
    let radius = 2.0 * domain.bounding_box().enclosing_radius(domain.center())
        + norm(&(from_real(x) - domain.center()));
    // the inside/outside state must flip somewhere on [0, radius]
    let mut lo = 0.0;
    let mut hi = radius;
    let step = radius / 256.0;
    let mut t = step;
    let mut found = false;
    while t <= radius {
        if inside(t) != start_inside {
            hi = t;
            found = true;
            break;
        }
        lo = t;
        t += step;
    }
    if !found {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if inside(mid) == start_inside {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 * (1.0 + hi) {
            break;
        }
    }
    let t = 0.5 * (lo + hi);
    Some((t, x + dir * t))
}

fn newton_projection(domain: &DomainModel, x: &DVector<f64>, start: &DVector<f64>) -> Option<(DVector<f64>, usize)> {
    let m = x.len();
    let mut w = start.clone();
    // bring the start onto the level set along the gradient first
    for _ in 0..20 {
        let jet = domain.defining().jet(&from_real(&w));
        let g = real_gradient(&jet.gradient);
        let g2 = g.norm_squared();
        if g2 == 0.0 || !jet.value.is_finite() {
            return None;
        }
        if jet.value.abs() < RHO_TOL {
            break;
        }
        w -= &g * (jet.value / g2);
    }
    let jet = domain.defining().jet(&from_real(&w));
    let g = real_gradient(&jet.gradient);
    let mut mu = (x - &w).dot(&g) / g.norm_squared();
    for it in 0..MAX_NEWTON {
        let jet = domain.defining().jet(&from_real(&w));
        if !jet.is_finite() {
            return None;
        }
        let g = real_gradient(&jet.gradient);
        let h = real_hessian(&jet.levi, &jet.holo);
        let mut f = DVector::zeros(m + 1);
        let r = &w - x + &g * mu;
        f.rows_mut(0, m).copy_from(&r);
        f[m] = jet.value;
        let scale = 1.0 + (x - &w).norm();
        if r.norm() < 1e-13 * scale && jet.value.abs() < RHO_TOL {
            return Some((w, it));
        }
        let mut jac = DMatrix::zeros(m + 1, m + 1);
        let top = DMatrix::identity(m, m) + h * mu;
        jac.view_mut((0, 0), (m, m)).copy_from(&top);
        jac.view_mut((0, m), (m, 1)).copy_from(&g);
        jac.view_mut((m, 0), (1, m)).copy_from(&g.transpose());
        let step = jac.lu().solve(&(-f))?;
        let mut t = 1.0;
        // damp steps that would jump across the domain
        let max_move = 0.5 * (1.0 + (x - &w).norm());
        let dn = step.rows(0, m).norm();
        if dn > max_move {
            t = max_move / dn;
        }
        w += step.rows(0, m) * t;
        mu += step[m] * t;
    }
    let jet = domain.defining().jet(&from_real(&w));
    let r = &w - x + real_gradient(&jet.gradient) * mu;
    if jet.value.abs() < RHO_TOL && r.norm() < 1e-10 * (1.0 + (x - &w).norm()) {
        Some((w, MAX_NEWTON))
    } else {
        None
    }
}

/// Nearest boundary point to `z` (inside or outside the domain).
pub fn project_to_boundary(domain: &DomainModel, z: &ComplexVector) -> Result<BoundaryProjection> {
    domain.check_dim(z)?;
    let x = to_real(z);
    let jet = domain.jet(z)?;
    let g = real_gradient(&jet.gradient);
    let gn = g.norm();
    if gn == 0.0 {
        return Err(Error::DegenerateBoundary { gradient_norm: 0.0 });
    }
    // ray along ±∇ρ towards the boundary
    let dir = if jet.value < 0.0 { &g / gn } else { -&g / gn };
    let ray = ray_hit(domain, &x, &dir);
    let newton = newton_projection(domain, &x, &x);
    // random rays give upper bounds on the true distance
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut best_ray = ray.clone();
    for _ in 0..CHECK_RAYS {
        let mut d = DVector::from_fn(x.len(), |_, _| rng.gen::<f64>() - 0.5);
        d /= d.norm();
        if let Some(hit) = ray_hit(domain, &x, &d) {
            if best_ray.as_ref().is_none_or(|(t, _)| hit.0 < *t) {
                best_ray = Some(hit);
            }
        }
    }
    let bound = best_ray.as_ref().map(|(t, _)| *t);
    if let Some((w, it)) = newton {
        let d = (&w - &x).norm();
        let ok = bound.is_none_or(|b| d <= b * (1.0 + 1e-9) + 1e-14);
        if ok {
            return Ok(BoundaryProjection {
                point: from_real(&w),
                distance: d,
                method: ProjectionMethod::Newton,
                iterations: it,
            });
        }
    }
    // retry Newton from the best ray hit
    if let Some((_, start)) = &best_ray {
        if let Some((w, it)) = newton_projection(domain, &x, start) {
            let d = (&w - &x).norm();
            if bound.is_none_or(|b| d <= b * (1.0 + 1e-9) + 1e-14) {
                return Ok(BoundaryProjection {
                    point: from_real(&w),
                    distance: d,
                    method: ProjectionMethod::Newton,
                    iterations: it,
                });
            }
        }
    }
    match ray {
        Some((t, w)) => Ok(BoundaryProjection {
            point: from_real(&w),
            distance: t,
            method: ProjectionMethod::Bisection,
            iterations: MAX_NEWTON,
        }),
        None => Err(Error::numerical(
            "boundary projection failed",
            format!("rho(z) = {:e}, |grad rho| = {gn:e}", jet.value),
        )),
    }
}

/// `δ(z)` for `z ∈ Ω`; closed form when the domain provides one.
pub fn distance_to_boundary(domain: &DomainModel, z: &ComplexVector) -> Result<f64> {
    domain.check_dim(z)?;
    if !domain.contains(z) {
        return Err(Error::arg("point is not inside the domain"));
    }
    if let Some(d) = domain.closed_forms().and_then(|f| f.distance(z)) {
        return Ok(d);
    }
    Ok(project_to_boundary(domain, z)?.distance)
}

/// Signed distance, negative inside.
pub fn signed_distance(domain: &DomainModel, z: &ComplexVector) -> Result<f64> {
    domain.check_dim(z)?;
    if domain.contains(z) {
        return Ok(-distance_to_boundary(domain, z)?);
    }
    Ok(project_to_boundary(domain, z)?.distance)
}
