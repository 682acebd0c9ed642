//! Experiment configuration and its content hash.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bergman::{KernelEvaluator, KernelMethod};
use crate::error::{Error, Result};
use crate::geometry::{DomainModel, DomainSpec};
use crate::linalg::{c, ComplexVector};

use super::fit::geometric_deltas;

/// Bumped whenever the meaning of a field changes; part of the hash.
pub const CONFIG_VERSION: u32 = 1;

fn default_delta_min() -> f64 {
    1e-3
}
fn default_delta_max() -> f64 {
    1e-1
}
fn default_delta_count() -> usize {
    12
}
fn default_degree() -> usize {
    12
}
fn default_disc_degree() -> usize {
    1
}
fn default_budget() -> usize {
    1000
}
fn default_beta_scale() -> f64 {
    1.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub domain: DomainSpec,
    /// Boundary probe points as `[re, im]` pairs.
    #[serde(default)]
    pub points: Vec<Vec<[f64; 2]>>,
    #[serde(default = "default_delta_min")]
    pub delta_min: f64,
    #[serde(default = "default_delta_max")]
    pub delta_max: f64,
    #[serde(default = "default_delta_count")]
    pub delta_count: usize,
    /// Kernel evaluator; the best available one when absent.
    #[serde(default)]
    pub method: Option<KernelMethod>,
    /// Polynomial degree of the quadrature evaluator.
    #[serde(default = "default_degree")]
    pub degree: usize,
    #[serde(default = "default_disc_degree")]
    pub disc_degree: usize,
    #[serde(default = "default_budget")]
    pub barrier_budget: usize,
    /// Factor applied to every `β_j` in the Catlin prediction.
    #[serde(default = "default_beta_scale")]
    pub beta_scale: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(domain: DomainSpec) -> Self {
        ExperimentConfig {
            domain,
            points: Vec::new(),
            delta_min: default_delta_min(),
            delta_max: default_delta_max(),
            delta_count: default_delta_count(),
            method: None,
            degree: default_degree(),
            disc_degree: default_disc_degree(),
            barrier_budget: default_budget(),
            beta_scale: default_beta_scale(),
            seed: 0,
            out_dir: None,
        }
    }

    /// Decreasing geometric sequence from `delta_max` to `delta_min`.
    pub fn deltas(&self) -> Vec<f64> {
        geometric_deltas(self.delta_min, self.delta_max, self.delta_count)
    }

    pub fn probe_points(&self) -> Vec<ComplexVector> {
        self.points
            .iter()
            .map(|p| ComplexVector::from_iterator(p.len(), p.iter().map(|[re, im]| c(*re, *im))))
            .collect()
    }

    pub fn validate(&self) -> Result<DomainModel> {
        if !(self.delta_min > 0.0 && self.delta_min < self.delta_max) {
            return Err(Error::arg("need 0 < delta_min < delta_max"));
        }
        if self.delta_count < 3 {
            return Err(Error::arg("need at least 3 deltas for a fit"));
        }
        if !(self.beta_scale > 0.0) {
            return Err(Error::arg("beta_scale must be positive"));
        }
        if self.barrier_budget == 0 || self.disc_degree == 0 {
            return Err(Error::arg("barrier budget and disc degree must be positive"));
        }
        let domain = self.domain.build()?;
        for p in &self.points {
            if p.len() != domain.dimension() {
                return Err(Error::arg(format!("probe point of length {} for dimension {}", p.len(), domain.dimension())));
            }
        }
        let ev = self.evaluator(&domain)?;
        if let Some(floor) = ev.delta_min() {
            if floor > self.delta_max {
                return Err(Error::Precondition(format!(
                    "quadrature evaluator is only trusted for delta >= {floor:e}"
                )));
            }
        }
        Ok(domain)
    }

    /// The requested evaluator, or the oracle, series or quadrature one,
    /// whichever the domain supports first.
    pub fn evaluator(&self, domain: &DomainModel) -> Result<KernelEvaluator> {
        let has_oracle = domain.closed_forms().and_then(|f| f.kernel(domain.center())).is_some();
        let has_series = domain.monomial_norms().is_some();
        match self.method {
            Some(KernelMethod::Oracle) if !has_oracle => {
                Err(Error::Precondition(format!("{} has no closed-form kernel", domain.name())))
            }
            Some(KernelMethod::ReinhardtSeries) if !has_series => {
                Err(Error::Precondition(format!("{} is not a Reinhardt catalog domain", domain.name())))
            }
            Some(KernelMethod::Oracle) => Ok(KernelEvaluator::oracle()),
            Some(KernelMethod::ReinhardtSeries) => Ok(KernelEvaluator::series()),
            Some(KernelMethod::QuadratureGram) => KernelEvaluator::gram(domain, self.degree),
            None if has_oracle => Ok(KernelEvaluator::oracle()),
            None if has_series => Ok(KernelEvaluator::series()),
            None => KernelEvaluator::gram(domain, self.degree),
        }
    }

    /// Hex SHA-256 of the versioned canonical JSON of the configuration.
    pub fn config_hash(&self) -> String {
        let payload = serde_json::json!({ "version": CONFIG_VERSION, "config": self });
        let bytes = serde_json::to_vec(&payload).expect("config serializes");
        hex::encode(Sha256::digest(&bytes))
    }
}
