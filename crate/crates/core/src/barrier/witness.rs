//! Log-plurisubharmonic witnesses `u = χ(g) e^{M(φ−1)}`.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use super::cutoffs::CutoffPair;
use crate::error::{Error, Result};
use crate::geometry::Jet;
use crate::linalg::{c, hermitian_form, max_abs, min_hermitian_eigenvalue, ComplexMatrix, ComplexVector};
use crate::sampling;

/// A plurisubharmonic function given by its jet.
pub type PshOracle = Arc<dyn Fn(&ComplexVector) -> Jet + Send + Sync>;

const SPOT_CHECKS: usize = 1000;
const MARGIN: f64 = 1.25;
const LOG_PSH_TOL: f64 = 1e-8;
/// Points with `g` below this are skipped when certifying `log u`.
const CENTRE_EXCLUSION: f64 = 1e-12;
const SEED: u64 = 0x10_95e1;

#[derive(Clone, Serialize)]
pub struct LogPshWitness {
    pub center: ComplexVector,
    pub radii: Vec<f64>,
    pub m: f64,
    pub alpha: f64,
    pub hessian_floor: f64,
    /// Smallest scaled eigenvalue of `L_{log u}` seen during certification.
    pub min_log_eigenvalue: f64,
    #[serde(skip)]
    phi: PshOracle,
}

impl fmt::Debug for LogPshWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LogPshWitness")
            .field("center", &self.center)
            .field("radii", &self.radii)
            .field("m", &self.m)
            .finish()
    }
}

impl LogPshWitness {
    fn g_jet(&self, z: &ComplexVector) -> Jet {
        let n = z.len();
        let mut jet = Jet::zeros(n);
        for j in 0..n {
            let w = 1.0 / (self.radii[j] * self.radii[j]);
            let d = z[j] - self.center[j];
            jet.value += w * d.norm_sqr();
            jet.gradient[j] = d.conj() * w;
            jet.levi[(j, j)] = c(w, 0.0);
        }
        jet
    }

    fn weight_jet(&self, z: &ComplexVector) -> Jet {
        let phi = (self.phi)(z);
        let e = phi.scaled(self.m).plus(&Jet::constant(z.len(), -self.m));
        let v = e.value.exp();
        e.compose([v, v, v])
    }

    /// Jet of `u`.
    pub fn jet(&self, z: &ComplexVector) -> Jet {
        let g = self.g_jet(z);
        let d = CutoffPair::chi(g.value);
        g.compose([d[0], d[1], d[2]]).product(&self.weight_jet(z))
    }

    pub fn value(&self, z: &ComplexVector) -> f64 {
        let g = self.g_jet(z).value;
        CutoffPair::chi(g)[0] * (self.m * ((self.phi)(z).value - 1.0)).exp()
    }

    /// Jet of `log u` away from the centre.
    pub fn log_jet(&self, z: &ComplexVector) -> Option<Jet> {
        let g = self.g_jet(z);
        if g.value <= 0.0 {
            return None;
        }
        let [v, d1, d2, _] = CutoffPair::chi(g.value);
        let lc = g.compose([v.ln(), d1 / v, (d2 * v - d1 * d1) / (v * v)]);
        let phi = (self.phi)(z);
        Some(lc.plus(&phi.scaled(self.m)))
    }

    /// Complex Hessian of `u` at the centre, where `u` vanishes to second
    /// order: `χ'(0) e^{M(φ(ẑ)−1)} diag(1/β_j²)`.
    pub fn levi_at_center(&self) -> ComplexMatrix {
        let n = self.center.len();
        let k = CutoffPair::chi(0.0)[1] * (self.m * ((self.phi)(&self.center).value - 1.0)).exp();
        ComplexMatrix::from_fn(n, n, |i, j| {
            if i == j {
                c(k / (self.radii[i] * self.radii[i]), 0.0)
            } else {
                c(0.0, 0.0)
            }
        })
    }

    /// `sqrt(L_u(ẑ, X))`, a lower bound for the Sibony metric at the centre.
    pub fn sibony_bound(&self, x: &ComplexVector) -> f64 {
        hermitian_form(&self.levi_at_center(), x, x).re.max(0.0).sqrt()
    }
}

fn sample_polydisc<R: rand::Rng>(rng: &mut R, center: &ComplexVector, radii: &[f64]) -> ComplexVector {
    ComplexVector::from_iterator(
        center.len(),
        (0..center.len()).map(|j| center[j] + sampling::in_disc(rng, radii[j])),
    )
}

/// Builds `u(z) = χ(Σ|z_j − ẑ_j|²/β_j²) e^{M(φ(z)−1)}` with
/// `M = ⌈1.25 α / floor⌉`, after spot-checking `|φ| ≤ 1` and
/// `L_φ(z, X) ≥ floor · Σ|X_j|²/β_j²` on the polydisc, and certifies that
/// `log u` is plurisubharmonic on samples of the polydisc.
pub fn build_log_psh_witness(
    center: &ComplexVector,
    radii: &[f64],
    phi: PshOracle,
    alpha: f64,
    hessian_floor: f64,
) -> Result<LogPshWitness> {
    let n = center.len();
    if radii.len() != n || radii.iter().any(|&b| !(b > 0.0)) {
        return Err(Error::arg("radii must be positive, one per coordinate"));
    }
    if !(hessian_floor > 0.0) || !(alpha >= 0.0) {
        return Err(Error::arg("need alpha >= 0 and a positive Hessian floor"));
    }
    let mut rng = sampling::rng(SEED);
    let scale = ComplexMatrix::from_fn(n, n, |i, j| {
        if i == j {
            c(radii[i], 0.0)
        } else {
            c(0.0, 0.0)
        }
    });
    for _ in 0..SPOT_CHECKS {
        let z = sample_polydisc(&mut rng, center, radii);
        let jet = phi(&z);
        if jet.value.abs() > 1.0 + 1e-12 {
            return Err(Error::Precondition(format!("|phi| = {} > 1 on the polydisc", jet.value.abs())));
        }
        // L_φ(X) ≥ floor Σ|X_j|²/β_j²  ⟺  β L_φ β ≥ floor I
        let low = min_hermitian_eigenvalue(&(&scale * &jet.levi * &scale));
        if low < hessian_floor * (1.0 - 1e-9) {
            return Err(Error::Precondition(format!(
                "Hessian of phi has scaled eigenvalue {low:e} below the floor {hessian_floor:e}"
            )));
        }
    }
    let m = (MARGIN * alpha / hessian_floor).ceil().max(1.0);
    let mut w = LogPshWitness {
        center: center.clone(),
        radii: radii.to_vec(),
        m,
        alpha,
        hessian_floor,
        min_log_eigenvalue: f64::INFINITY,
        phi,
    };
    let pts: Vec<ComplexVector> = (0..SPOT_CHECKS).map(|_| sample_polydisc(&mut rng, center, radii)).collect();
    let vals = sampling::par_map(&pts, |z| {
        let g = w.g_jet(z).value;
        if g < CENTRE_EXCLUSION {
            return f64::INFINITY;
        }
        let lj = w.log_jet(z).expect("away from the centre");
        let s = max_abs(&lj.levi).max(1.0);
        min_hermitian_eigenvalue(&lj.levi) / s
    });
    w.min_log_eigenvalue = vals.into_iter().fold(f64::INFINITY, f64::min);
    if w.min_log_eigenvalue < -LOG_PSH_TOL {
        return Err(Error::CertificationFailure {
            attempts: 1,
            worst: format!("log u has scaled Hessian eigenvalue {:e}", w.min_log_eigenvalue),
        });
    }
    Ok(w)
}
