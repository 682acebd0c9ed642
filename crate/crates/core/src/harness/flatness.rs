//! Levi-flatness from the kernel blow-up rate.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{levi_rank, DomainModel, DEFAULT_RANK_TOL};
use crate::linalg::ComplexVector;

use super::config::ExperimentConfig;
use super::sweep::{fit_kernel_exponent, ExponentFit};

/// `|slope + 2|` at most this means flat.
pub const FLAT_BAND: f64 = 0.1;
/// Slopes at or below this mean positive rank.
pub const RANK_CUT: f64 = -2.5;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", content = "detail", rename_all = "snake_case")]
pub enum Verdict {
    Flat,
    Rank(usize),
    Inconclusive(String),
}

#[derive(Clone, Debug, Serialize)]
pub struct FlatnessReport {
    pub verdict: Verdict,
    /// Rank read off the slope, before the cross-check.
    pub estimated_rank: Option<usize>,
    pub direct_rank: usize,
    pub fit: Option<ExponentFit>,
    pub flat_band: f64,
    pub rank_cut: f64,
}

/// Rank implied by a kernel slope `s = −(r + 2)`, if the slope is decisive.
pub fn rank_from_slope(slope: f64) -> Option<usize> {
    if (slope + 2.0).abs() <= FLAT_BAND {
        Some(0)
    } else if slope <= RANK_CUT {
        Some((-slope).round() as usize - 2)
    } else {
        None
    }
}

pub fn detect_levi_flatness(domain: &DomainModel, p: &ComplexVector, config: &ExperimentConfig) -> Result<FlatnessReport> {
    let direct_rank = levi_rank(domain, p, DEFAULT_RANK_TOL)?.rank;
    let report = |verdict, estimated_rank, fit| FlatnessReport {
        verdict,
        estimated_rank,
        direct_rank,
        fit,
        flat_band: FLAT_BAND,
        rank_cut: RANK_CUT,
    };
    let fit = match fit_kernel_exponent(domain, p, config) {
        Ok(f) => f,
        Err(Error::Precondition(msg)) => return Ok(report(Verdict::Inconclusive(msg), None, None)),
        Err(e) => return Err(e),
    };
    if !fit.stable {
        let why = format!("log-log residual {:.3} above the stability threshold", fit.residual);
        return Ok(report(Verdict::Inconclusive(why), None, Some(fit)));
    }
    let estimated = rank_from_slope(fit.slope);
    let verdict = match estimated {
        None => Verdict::Inconclusive(format!("slope {:.3} is between the flat band and the rank cut", fit.slope)),
        Some(r) if r != direct_rank => {
            Verdict::Inconclusive(format!("slope suggests rank {r}, the Levi form has rank {direct_rank}"))
        }
        Some(0) => Verdict::Flat,
        Some(r) => Verdict::Rank(r),
    };
    Ok(report(verdict, estimated, Some(fit)))
}
