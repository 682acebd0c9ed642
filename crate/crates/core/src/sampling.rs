//! Seeded random sampling helpers and an optional parallel map.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use rand_distr::StandardNormal;

use crate::linalg::{c, norm, ComplexVector};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_vector<R: Rng>(rng: &mut R, n: usize) -> ComplexVector {
    ComplexVector::from_iterator(
        n,
        (0..n).map(|_| c(rng.sample(StandardNormal), rng.sample(StandardNormal))),
    )
}

/// Uniform on the unit sphere of ℂⁿ.
pub fn unit_vector<R: Rng>(rng: &mut R, n: usize) -> ComplexVector {
    loop {
        let v = gaussian_vector(rng, n);
        let r = norm(&v);
        if r > 1e-12 {
            return v / c(r, 0.0);
        }
    }
}

/// Uniform in the ball of radius `r` in ℂⁿ = ℝ²ⁿ.
pub fn in_ball<R: Rng>(rng: &mut R, n: usize, r: f64) -> ComplexVector {
    let u: f64 = rng.gen();
    unit_vector(rng, n) * c(r * u.powf(1.0 / (2 * n) as f64), 0.0)
}

/// Uniform in the disc `|w| < r`.
pub fn in_disc<R: Rng>(rng: &mut R, r: f64) -> Complex64 {
    let t: f64 = rng.gen::<f64>() * std::f64::consts::TAU;
    let s = r * rng.gen::<f64>().sqrt();
    Complex64::from_polar(s, t)
}

#[cfg(feature = "parallel")]
pub fn par_map<T: Sync, U: Send>(items: &[T], f: impl Fn(&T) -> U + Sync + Send) -> Vec<U> {
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn par_map<T: Sync, U: Send>(items: &[T], f: impl Fn(&T) -> U + Sync + Send) -> Vec<U> {
    items.iter().map(f).collect()
}
