//! CSV sweeps, JSON reports and plot-data files.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::error::Result;

use super::config::{ExperimentConfig, CONFIG_VERSION};

#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub delta: f64,
    pub value: f64,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub method: String,
    pub condition: Option<f64>,
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:e}")).unwrap_or_default()
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("delta,value,lower,upper,method,condition\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{:e},{:e},{},{},{},{}",
            r.delta,
            r.value,
            opt(r.lower),
            opt(r.upper),
            r.method,
            opt(r.condition)
        );
    }
    out
}

/// Whitespace-separated `x y` lines.
pub fn plot_data(xs: &[f64], ys: &[f64]) -> String {
    let mut out = String::from("# x y\n");
    for (x, y) in xs.iter().zip(ys) {
        let _ = writeln!(out, "{x:e} {y:e}");
    }
    out
}

/// `{"version", "config_hash", "config", "result"}`.
pub fn report_json<T: Serialize>(config: &ExperimentConfig, result: &T) -> Result<String> {
    let value = serde_json::json!({
        "version": CONFIG_VERSION,
        "config_hash": config.config_hash(),
        "config": config,
        "result": result,
    });
    Ok(serde_json::to_string_pretty(&value)?)
}

pub fn write_file(dir: &Path, name: &str, contents: &str) -> Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join(name), contents)?;
    Ok(())
}
