//! Input files and argument parsing.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use levirank::geometry::DomainSpec;
use levirank::harness::ExperimentConfig;
use levirank::linalg::{c, ComplexVector};

/// Reads either a full experiment config (`{"domain": ..., ...}`) or a bare
/// domain spec, which gets default settings.
pub fn load_config(path: &Path) -> Result<ExperimentConfig> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    if value.get("domain").is_some() {
        Ok(serde_json::from_value(value).context("invalid experiment config")?)
    } else {
        let spec: DomainSpec = serde_json::from_value(value).context("invalid domain spec")?;
        Ok(ExperimentConfig::new(spec))
    }
}

/// One coordinate: `x` (real) or `x,y` (`x + iy`).
pub fn parse_coordinate(s: &str) -> Result<[f64; 2]> {
    let parts: Vec<&str> = s.split(',').collect();
    let num = |t: &str| t.trim().parse::<f64>().with_context(|| format!("bad number {t:?} in coordinate {s:?}"));
    match parts.as_slice() {
        [re] => Ok([num(re)?, 0.0]),
        [re, im] => Ok([num(re)?, num(im)?]),
        _ => bail!("coordinate {s:?} should be `x` or `x,y`"),
    }
}

pub fn to_vector(p: &[[f64; 2]]) -> ComplexVector {
    ComplexVector::from_iterator(p.len(), p.iter().map(|[re, im]| c(*re, *im)))
}

/// `a:b:n`, the endpoints in either order.
pub fn parse_sweep(s: &str) -> Result<(f64, f64, usize)> {
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, n] = parts.as_slice() else {
        bail!("delta sweep {s:?} should be `a:b:n`");
    };
    let a: f64 = a.parse().with_context(|| format!("bad delta {a:?}"))?;
    let b: f64 = b.parse().with_context(|| format!("bad delta {b:?}"))?;
    let n: usize = n.parse().with_context(|| format!("bad count {n:?}"))?;
    if !(a > 0.0 && b > 0.0) || a == b {
        bail!("delta sweep needs two distinct positive endpoints");
    }
    Ok((a.min(b), a.max(b), n))
}
