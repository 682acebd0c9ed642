//! Anisotropic weight and the boxes `P_{δ,a}` and `Q_{δ,c}`.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{c, ComplexVector};
use crate::sampling;

/// Weights `(1/δ², 1/δ, …, 1/δ, 1, …, 1)` with `n − l − 1` entries `1/δ`.
pub fn omega_coefficients(n: usize, delta: f64, l: usize) -> Result<Vec<f64>> {
    if !(delta > 0.0) {
        return Err(Error::arg("delta must be positive"));
    }
    if n == 0 || l >= n {
        return Err(Error::arg("need 0 <= l <= n - 1"));
    }
    Ok((0..n)
        .map(|j| {
            if j == 0 {
                1.0 / (delta * delta)
            } else if j < n - l {
                1.0 / delta
            } else {
                1.0
            }
        })
        .collect())
}

/// `ω(X, δ) = |X₁|²/δ² + Σ' |X_j|²/δ + Σ'' |X_j|²`.
pub fn omega_weight(x: &ComplexVector, delta: f64, l: usize) -> Result<f64> {
    let w = omega_coefficients(x.len(), delta, l)?;
    Ok(x.iter().zip(&w).map(|(v, k)| k * v.norm_sqr()).sum())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BoxKind {
    P,
    Q,
}

/// `P_{δ,a}` (centred at 0) or `Q_{δ,c}` (centred at `(−cδ, 0)`).
#[derive(Clone, Debug, Serialize)]
pub struct FrequencyBox {
    pub kind: BoxKind,
    pub delta: f64,
    /// `a` for P-boxes, `c` for Q-boxes.
    pub scale: f64,
    pub center_shift: f64,
    pub dimension: usize,
    pub leaf_dimension: usize,
}

impl FrequencyBox {
    pub fn p_box(n: usize, l: usize, delta: f64, a: f64) -> Result<Self> {
        omega_coefficients(n, delta, l)?;
        Ok(FrequencyBox {
            kind: BoxKind::P,
            delta,
            scale: a,
            center_shift: 0.0,
            dimension: n,
            leaf_dimension: l,
        })
    }

    pub fn q_box(n: usize, l: usize, delta: f64, c: f64) -> Result<Self> {
        omega_coefficients(n, delta, l)?;
        Ok(FrequencyBox {
            kind: BoxKind::Q,
            delta,
            scale: c,
            center_shift: -c * delta,
            dimension: n,
            leaf_dimension: l,
        })
    }

    /// Polyradii `(r₁, …, r_n)` of the box.
    pub fn radii(&self) -> Vec<f64> {
        let n = self.dimension;
        let k = match self.kind {
            BoxKind::P => self.scale,
            BoxKind::Q => self.scale * self.scale,
        };
        (0..n)
            .map(|j| {
                if j == 0 {
                    k * self.delta
                } else if j < n - self.leaf_dimension {
                    k * self.delta.sqrt()
                } else {
                    k
                }
            })
            .collect()
    }

    pub fn center(&self) -> ComplexVector {
        let mut z = ComplexVector::zeros(self.dimension);
        z[0] = c(self.center_shift, 0.0);
        z
    }

    pub fn contains(&self, zeta: &ComplexVector) -> bool {
        let r = self.radii();
        let center = self.center();
        (0..self.dimension).all(|j| (zeta[j] - center[j]).norm() < r[j])
    }

    /// Uniform sample of the polydisc.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> ComplexVector {
        let r = self.radii();
        let center = self.center();
        ComplexVector::from_iterator(
            self.dimension,
            (0..self.dimension).map(|j| center[j] + sampling::in_disc(rng, r[j])),
        )
    }
}
