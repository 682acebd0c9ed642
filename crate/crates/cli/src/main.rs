mod input;

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use levirank::barrier::SamplePlan;
use levirank::bergman::KernelMethod;
use levirank::geometry::{levi_rank, DomainModel, DEFAULT_RANK_TOL};
use levirank::harness::{
    barrier_sweep, catlin_consistency, default_directions, detect_levi_flatness, fit_kernel_exponent,
    fit_metric_exponents, plot_data, report_json, sweep_csv, write_file, ExperimentConfig, ExponentFit, SweepRow,
};
use levirank::linalg::ComplexVector;
use levirank::normalization::normalize_chart;
use serde_json::{json, Value};

use input::{load_config, parse_coordinate, parse_sweep, to_vector};

#[derive(Parser)]
#[command(name = "levirank", version, about = "Levi rank, barriers, Bergman kernels and invariant metrics near the boundary")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Levi form eigenvalues and rank at a boundary point.
    LeviRank {
        #[command(flatten)]
        common: Common,
        /// Relative eigenvalue threshold.
        #[arg(long, default_value_t = DEFAULT_RANK_TOL)]
        tol: f64,
    },
    /// Normalized chart at a boundary point.
    Normalize {
        #[command(flatten)]
        common: Common,
    },
    /// Builds and certifies barrier functions across a δ-sweep.
    BarrierVerify {
        #[command(flatten)]
        common: Common,
    },
    /// Fits the blow-up exponent of the Bergman kernel along the normal.
    BergmanFit {
        #[command(flatten)]
        common: Common,
        /// Also compare the kernel with the product of barrier box radii.
        #[arg(long)]
        catlin: bool,
    },
    /// Bergman metric against M(z, X) and the Kobayashi band.
    MetricCompare {
        #[command(flatten)]
        common: Common,
        /// Skip the Kobayashi bounds.
        #[arg(long)]
        no_kobayashi: bool,
    },
    /// Levi-flat or positive-rank verdict from the kernel exponent.
    DetectFlat {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Oracle,
    Series,
    Gram,
}

impl From<Method> for KernelMethod {
    fn from(m: Method) -> Self {
        match m {
            Method::Oracle => KernelMethod::Oracle,
            Method::Series => KernelMethod::ReinhardtSeries,
            Method::Gram => KernelMethod::QuadratureGram,
        }
    }
}

#[derive(Args)]
struct Common {
    /// Domain spec or experiment config (JSON).
    input: PathBuf,
    /// Boundary point, one `x` or `x,y` per coordinate; defaults to the config's points.
    #[arg(long, num_args = 1.., allow_negative_numbers = true)]
    point: Vec<String>,
    #[arg(long, value_enum)]
    method: Option<Method>,
    /// Total degree of the quadrature evaluator.
    #[arg(long)]
    degree: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// `a:b:n`, n geometric deltas between a and b.
    #[arg(long)]
    delta_sweep: Option<String>,
    /// Directory for CSV, JSON and plot-data files.
    #[arg(long)]
    out: Option<PathBuf>,
}

struct Setup {
    config: ExperimentConfig,
    domain: DomainModel,
    points: Vec<ComplexVector>,
}

impl Common {
    /// `kernel`: whether the command evaluates the Bergman kernel, in which
    /// case the evaluator is checked against the sweep up front.
    fn setup(&self, kernel: bool) -> Result<Setup> {
        let mut config = load_config(&self.input)?;
        if !self.point.is_empty() {
            let p = self.point.iter().map(|s| parse_coordinate(s)).collect::<Result<Vec<_>>>()?;
            config.points = vec![p];
        }
        if let Some(m) = self.method {
            config.method = Some(m.into());
        }
        if let Some(d) = self.degree {
            config.degree = d;
        }
        if let Some(s) = self.seed {
            config.seed = s;
        }
        if let Some(sweep) = &self.delta_sweep {
            let (lo, hi, n) = parse_sweep(sweep)?;
            config.delta_min = lo;
            config.delta_max = hi;
            config.delta_count = n;
        }
        if let Some(out) = &self.out {
            config.out_dir = Some(out.clone());
        }
        if config.points.is_empty() {
            bail!("no boundary point: pass --point or list points in the config");
        }
        let domain = if kernel { config.validate()? } else { config.domain.build()? };
        let points = config.points.iter().map(|p| to_vector(p)).collect();
        Ok(Setup { config, domain, points })
    }
}

/// Files produced for one probe point.
#[derive(Default)]
struct Files {
    csv: Vec<(String, String)>,
    plots: Vec<(String, String)>,
}

fn stem(command: &str, k: usize, count: usize) -> String {
    if count == 1 {
        command.to_string()
    } else {
        format!("{command}-{k}")
    }
}

fn fit_rows(fit: &ExponentFit, condition: Option<f64>) -> Vec<SweepRow> {
    fit.deltas
        .iter()
        .zip(&fit.values)
        .map(|(&delta, &value)| SweepRow { delta, value, lower: None, upper: None, method: fit.method.clone(), condition })
        .collect()
}

/// Condition number of the Gram matrix, when that evaluator is in use.
fn condition(setup: &Setup, fit: &ExponentFit) -> Result<Option<f64>> {
    if fit.method != KernelMethod::QuadratureGram.label() {
        return Ok(None);
    }
    Ok(setup.config.evaluator(&setup.domain)?.conditioning)
}

fn run_point(command: &Command, setup: &Setup, p: &ComplexVector, name: &str) -> Result<(Value, Files)> {
    let mut files = Files::default();
    let value = match command {
        Command::LeviRank { tol, .. } => serde_json::to_value(levi_rank(&setup.domain, p, *tol)?)?,
        Command::Normalize { .. } => {
            let chart = normalize_chart(&setup.domain, p)?;
            let shells: Vec<f64> = (2..=6).map(|k| 0.5f64.powi(k)).collect();
            let slope = chart.residual_decay(&shells)?;
            json!({ "chart": chart, "residual_slope": slope })
        }
        Command::BarrierVerify { .. } => {
            let plan = SamplePlan { seed: setup.config.seed, ..SamplePlan::default() };
            let sweep = barrier_sweep(&setup.domain, p, &setup.config.deltas(), setup.config.barrier_budget, &plan)?;
            let rows: Vec<SweepRow> = sweep
                .reports
                .iter()
                .map(|r| SweepRow {
                    delta: r.delta,
                    value: r.lower_bound.c0,
                    lower: Some(r.bounds.min_value),
                    upper: Some(r.bounds.max_value),
                    method: "barrier".into(),
                    condition: None,
                })
                .collect();
            let deltas: Vec<f64> = rows.iter().map(|r| r.delta).collect();
            let c0: Vec<f64> = rows.iter().map(|r| r.value).collect();
            files.csv.push((name.into(), sweep_csv(&rows)));
            files.plots.push((format!("{name}-c0"), plot_data(&deltas, &c0)));
            json!({ "pass": sweep.pass(), "sweep": sweep })
        }
        Command::BergmanFit { catlin, .. } => {
            let fit = fit_kernel_exponent(&setup.domain, p, &setup.config)?;
            files.csv.push((name.into(), sweep_csv(&fit_rows(&fit, condition(setup, &fit)?))));
            files.plots.push((name.into(), plot_data(&fit.deltas, &fit.values)));
            let catlin = if *catlin {
                let report = catlin_consistency(&setup.domain, p, &setup.config)?;
                let deltas: Vec<f64> = report.rows.iter().map(|r| r.delta).collect();
                let ratios: Vec<f64> = report.rows.iter().map(|r| r.ratio).collect();
                files.plots.push((format!("{name}-catlin"), plot_data(&deltas, &ratios)));
                Some(report)
            } else {
                None
            };
            json!({ "fit": fit, "catlin": catlin })
        }
        Command::MetricCompare { no_kobayashi, .. } => {
            let dirs = default_directions(&setup.domain, p)?;
            let report = fit_metric_exponents(&setup.domain, p, &dirs, &setup.config, !no_kobayashi)?;
            for f in &report.fits {
                let cond = condition(setup, &f.bergman)?;
                let mut rows = fit_rows(&f.bergman, cond);
                if let Some(k) = &f.kobayashi {
                    for (r, (lo, up)) in rows.iter_mut().zip(k.lower.iter().zip(&k.upper)) {
                        r.lower = Some(lo * lo);
                        r.upper = Some(up * up);
                    }
                }
                let label = format!("{name}-{}", f.direction.label);
                files.plots.push((label.clone(), plot_data(&f.bergman.deltas, &f.bergman.values)));
                files.plots.push((format!("{label}-m"), plot_data(&f.bergman.deltas, &f.comparability)));
                files.csv.push((label, sweep_csv(&rows)));
            }
            serde_json::to_value(&report)?
        }
        Command::DetectFlat { .. } => {
            let report = detect_levi_flatness(&setup.domain, p, &setup.config)?;
            if let Some(fit) = &report.fit {
                files.csv.push((name.into(), sweep_csv(&fit_rows(fit, condition(setup, fit)?))));
                files.plots.push((name.into(), plot_data(&fit.deltas, &fit.values)));
            }
            serde_json::to_value(&report)?
        }
    };
    Ok((value, files))
}

/// Name, shared options and whether the command needs a kernel evaluator.
fn describe(command: &Command) -> (&'static str, &Common, bool) {
    match command {
        Command::LeviRank { common, .. } => ("levi-rank", common, false),
        Command::Normalize { common } => ("normalize", common, false),
        Command::BarrierVerify { common } => ("barrier-verify", common, false),
        Command::BergmanFit { common, .. } => ("bergman-fit", common, true),
        Command::MetricCompare { common, .. } => ("metric-compare", common, true),
        Command::DetectFlat { common } => ("detect-flat", common, true),
    }
}

fn run(command: &Command) -> Result<String> {
    let (cmd, common, kernel) = describe(command);
    let setup = common.setup(kernel)?;
    let count = setup.points.len();
    let mut results = Vec::new();
    let mut all_files = Vec::new();
    for (k, p) in setup.points.iter().enumerate() {
        let name = stem(cmd, k, count);
        let (value, files) = run_point(command, &setup, p, &name).with_context(|| format!("{cmd} at point {k}"))?;
        results.push(value);
        all_files.push(files);
    }
    let result = if count == 1 { results.remove(0) } else { Value::Array(results) };
    let report = report_json(&setup.config, &result)?;
    if let Some(dir) = &setup.config.out_dir {
        write_outputs(dir, cmd, &report, &all_files)?;
    }
    Ok(report)
}

fn write_outputs(dir: &Path, cmd: &str, report: &str, files: &[Files]) -> Result<()> {
    write_file(dir, &format!("{cmd}.json"), report)?;
    for f in files {
        for (name, text) in &f.csv {
            write_file(dir, &format!("{name}.csv"), text)?;
        }
        for (name, text) in &f.plots {
            write_file(dir, &format!("{name}.dat"), text)?;
        }
    }
    Ok(())
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let report = run(&cli.command)?;
    println!("{report}");
    Ok(())
}
