//! Log-factorials and the smoothstep polynomial used by the cutoffs.

use std::sync::OnceLock;

const TABLE_LEN: usize = 1024;

fn table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = Vec::with_capacity(TABLE_LEN);
        let mut acc = 0.0f64;
        t.push(0.0);
        for k in 1..TABLE_LEN {
            acc += (k as f64).ln();
            t.push(acc);
        }
        t
    })
}

/// `ln k!`, exact summation below 1024 and the Stirling series above.
pub fn ln_factorial(k: u64) -> f64 {
    if (k as usize) < TABLE_LEN {
        return table()[k as usize];
    }
    let x = k as f64 + 1.0;
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    (x - 0.5) * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI).ln()
        + inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)))
}

/// Septic smoothstep `35t⁴ − 84t⁵ + 70t⁶ − 20t⁷` clamped to `[0, 1]`, with
/// its first three derivatives. All three vanish at both ends, so joins built
/// from it are C³.
pub fn smoothstep(t: f64) -> [f64; 4] {
    if t <= 0.0 {
        return [0.0; 4];
    }
    if t >= 1.0 {
        return [1.0, 0.0, 0.0, 0.0];
    }
    let q = t * (1.0 - t);
    [
        t.powi(4) * (35.0 + t * (-84.0 + t * (70.0 - 20.0 * t))),
        140.0 * q * q * q,
        420.0 * q * q * (1.0 - 2.0 * t),
        840.0 * q * (1.0 - 5.0 * t + 5.0 * t * t),
    ]
}

/// Antiderivative of [`smoothstep`] vanishing at 0, for `t` in `[0, 1]`.
pub fn smoothstep_integral(t: f64) -> f64 {
    let t = t.clamp(0.0, 1.0);
    t.powi(5) * (7.0 + t * (-14.0 + t * (10.0 - 2.5 * t)))
}
