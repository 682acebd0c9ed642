//! Experiments: δ-sweeps, exponent fits, flatness detection and reports.

mod barrier;
mod catlin;
mod config;
mod fit;
mod flatness;
mod output;
mod sweep;

pub use barrier::{barrier_sweep, BarrierSweep, SLOPE_TOL};
pub use catlin::{catlin_consistency, catlin_prediction, CatlinReport, CatlinRow};
pub use config::{ExperimentConfig, CONFIG_VERSION};
pub use fit::{geometric_deltas, loglog, ols, LineFit};
pub use flatness::{detect_levi_flatness, rank_from_slope, FlatnessReport, Verdict, FLAT_BAND, RANK_CUT};
pub use output::{plot_data, report_json, sweep_csv, write_file, SweepRow};
pub use sweep::{
    default_directions, fit_c3, fit_kernel_exponent, fit_metric_exponents, probe_ray, ExponentFit, KobayashiBand,
    MetricDirection, MetricFit, MetricReport, BAND_LIMIT, STABLE_RESIDUAL,
};
