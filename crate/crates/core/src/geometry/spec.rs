//! JSON domain specifications.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{catalog_domain, BoundingBox, DomainModel, PolynomialDefining, PolynomialTerm};
use crate::error::{Error, Result};
use crate::linalg::{c, ComplexVector};

/// `{"name": "ball", "dimension": 2, "params": []}` for catalog domains, or
/// `{"name": "custom", "dimension": n, "defining_fn": [...], "bounding_box": ...}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DomainSpec {
    pub name: String,
    pub dimension: usize,
    #[serde(default)]
    pub params: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub defining_fn: Option<Vec<PolynomialTerm>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounding_box: Option<BoundingBox>,
    /// Interior point as `[re, im]` pairs; the origin by default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<Vec<[f64; 2]>>,
}

impl DomainSpec {
    pub fn catalog(name: &str, dimension: usize, params: &[f64]) -> Self {
        DomainSpec {
            name: name.to_string(),
            dimension,
            params: params.to_vec(),
            defining_fn: None,
            bounding_box: None,
            center: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn build(&self) -> Result<DomainModel> {
        if self.name != "custom" {
            if self.defining_fn.is_some() {
                return Err(Error::arg("defining_fn is only allowed for custom domains"));
            }
            return catalog_domain(&self.name, self.dimension, &self.params);
        }
        let n = self.dimension;
        let terms = self
            .defining_fn
            .as_ref()
            .ok_or_else(|| Error::arg("custom domain needs defining_fn"))?;
        let bounds = self
            .bounding_box
            .clone()
            .ok_or_else(|| Error::arg("custom domain needs bounding_box"))?;
        let poly = PolynomialDefining::new(n, terms)?;
        let center = match &self.center {
            Some(pts) if pts.len() == n => {
                ComplexVector::from_iterator(n, pts.iter().map(|[re, im]| c(*re, *im)))
            }
            Some(_) => return Err(Error::arg("center has the wrong length")),
            None => ComplexVector::zeros(n),
        };
        let model = DomainModel::new("custom", Arc::new(poly), bounds, center)?
            .with_spec(self.clone());
        if !model.contains(model.center()) {
            return Err(Error::arg("center is not an interior point of the custom domain"));
        }
        Ok(model)
    }
}

impl DomainModel {
    pub fn from_spec_json(text: &str) -> Result<DomainModel> {
        DomainSpec::from_json(text)?.build()
    }
}
