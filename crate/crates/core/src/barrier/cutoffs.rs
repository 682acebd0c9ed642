//! Concrete cutoff functions.

use serde::Serialize;

use crate::special::{smoothstep, smoothstep_integral};

/// Number of grid points used to bound `t(log χ)'' + χ'` on `[1/2, 1]`.
const ALPHA_GRID: usize = 10_000;

/// The three cutoffs of the barrier and witness constructions.
///
/// * `chi1` decreases from 1 (t ≤ 1/2) to 0 (t ≥ 1);
/// * `chi2` is convex, vanishes for t ≤ 1/2 and has `chi2' = 1` for t ≥ 1;
/// * `chi` is concave, proportional to `t` on `[0, 1/2]` and equal to 1 for
///   t ≥ 1. A concave function with `χ(t) = t` near 0 cannot reach 1 at
///   t = 1 smoothly, so `chi` is normalized by `χ̃(1) = 3/4` and has slope
///   4/3 at the origin.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct CutoffPair {
    pub alpha: f64,
}

impl Default for CutoffPair {
    fn default() -> Self {
        Self::new()
    }
}

impl CutoffPair {
    pub fn new() -> Self {
        let mut worst = f64::INFINITY;
        for k in 0..=ALPHA_GRID {
            let t = 0.5 + 0.5 * k as f64 / ALPHA_GRID as f64;
            worst = worst.min(Self::alpha_integrand(t));
        }
        CutoffPair { alpha: (-worst).max(0.0) }
    }

    /// `t(log χ)''(t) + χ'(t)`.
    pub fn alpha_integrand(t: f64) -> f64 {
        let [v, d1, d2, _] = Self::chi(t);
        t * (d2 / v - (d1 / v).powi(2)) + d1
    }

    /// `χ₁` and its first three derivatives.
    pub fn chi1(t: f64) -> [f64; 4] {
        let s = smoothstep(2.0 * t - 1.0);
        [1.0 - s[0], -2.0 * s[1], -4.0 * s[2], -8.0 * s[3]]
    }

    /// `χ₂` and its first three derivatives.
    pub fn chi2(t: f64) -> [f64; 4] {
        if t <= 0.5 {
            return [0.0; 4];
        }
        if t >= 1.0 {
            return [t - 0.75, 1.0, 0.0, 0.0];
        }
        let u = 2.0 * t - 1.0;
        let s = smoothstep(u);
        [0.5 * smoothstep_integral(u), s[0], 2.0 * s[1], 4.0 * s[2]]
    }

    /// The log-psh witness cutoff `χ` and its first three derivatives.
    pub fn chi(t: f64) -> [f64; 4] {
        const NORM: f64 = 0.75;
        if t <= 0.5 {
            return [t.max(0.0) / NORM, 1.0 / NORM, 0.0, 0.0];
        }
        if t >= 1.0 {
            return [1.0, 0.0, 0.0, 0.0];
        }
        let u = 2.0 * t - 1.0;
        let s = smoothstep(u);
        // χ̃' = 1 − s(u), χ̃ = t − ∫ s
        let v = t - 0.5 * smoothstep_integral(u);
        [v / NORM, (1.0 - s[0]) / NORM, -2.0 * s[1] / NORM, -4.0 * s[2] / NORM]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_joins(f: fn(f64) -> [f64; 4], joins: &[f64]) {
        for &t in joins {
            let a = f(t - 1e-12);
            let b = f(t + 1e-12);
            for d in 0..4 {
                assert!((a[d] - b[d]).abs() < 1e-6, "derivative {d} jumps at {t}: {a:?} {b:?}");
            }
        }
    }

    fn check_derivatives(f: fn(f64) -> [f64; 4]) {
        let h = 1e-6;
        for k in 1..40 {
            let t = 0.31 + k as f64 * 0.02;
            let (p, m, c) = (f(t + h), f(t - h), f(t));
            for d in 0..3 {
                let fd = (p[d] - m[d]) / (2.0 * h);
                assert!((fd - c[d + 1]).abs() < 1e-5 * (1.0 + c[d + 1].abs()), "t={t} d={d}");
            }
        }
    }

    #[test]
    fn cutoffs_are_c3() {
        check_joins(CutoffPair::chi1, &[0.5, 1.0]);
        check_joins(CutoffPair::chi2, &[0.5, 1.0]);
        check_joins(CutoffPair::chi, &[0.5, 1.0]);
        check_derivatives(CutoffPair::chi1);
        check_derivatives(CutoffPair::chi2);
        check_derivatives(CutoffPair::chi);
    }

    #[test]
    fn shapes() {
        assert_eq!(CutoffPair::chi1(0.2)[0], 1.0);
        assert_eq!(CutoffPair::chi1(1.2)[0], 0.0);
        assert_eq!(CutoffPair::chi2(0.4)[0], 0.0);
        assert!((CutoffPair::chi2(1.0)[0] - 0.25).abs() < 1e-15);
        assert!((CutoffPair::chi(1.0)[0] - 1.0).abs() < 1e-15);
        for k in 0..100 {
            let t = k as f64 / 50.0;
            assert!(CutoffPair::chi(t)[2] <= 0.0);
            assert!(CutoffPair::chi2(t)[2] >= 0.0);
            assert!(CutoffPair::chi1(t)[1] <= 0.0);
        }
    }

    #[test]
    fn alpha_bounds_grid() {
        let cut = CutoffPair::new();
        assert!(cut.alpha > 0.0 && cut.alpha.is_finite(), "alpha = {}", cut.alpha);
        // at t = 1/2 the integrand is −2 + 4/3
        assert!(cut.alpha >= 2.0 / 3.0 - 1e-12);
        for k in 0..=997 {
            let t = 0.5 + 0.5 * k as f64 / 997.0;
            assert!(CutoffPair::alpha_integrand(t) >= -cut.alpha - 1e-6);
        }
    }
}
