//! Two-sided bounds for the Kobayashi metric and the comparability
//! quantity `M(z, X)`. Normalized so that `F_D(0, 1) = 1`.

mod comparability;
mod discs;
mod witness;

use std::fmt::Write as _;

use crate::linalg::ComplexVector;

pub use comparability::comparability_m;
pub use discs::{kobayashi_upper, DiscBound, DiscFamily};
pub use witness::{best_sibony_lower, mobius_witnesses, sibony_lower, MobiusWitness, SibonyWitness};

/// One row of a bound sweep.
#[derive(Clone, Debug, serde::Serialize)]
pub struct BoundRow {
    pub z: ComplexVector,
    pub x: ComplexVector,
    pub lower: f64,
    pub upper: f64,
    pub method: String,
}

fn fmt_vec(v: &ComplexVector) -> String {
    v.iter().map(|w| format!("{}{:+}i", w.re, w.im)).collect::<Vec<_>>().join(" ")
}

/// CSV with columns `z,X,lower,upper,method`.
pub fn bounds_csv(rows: &[BoundRow]) -> String {
    let mut out = String::from("z,X,lower,upper,method\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{:e},{:e},{}", fmt_vec(&r.z), fmt_vec(&r.x), r.lower, r.upper, r.method);
    }
    out
}
