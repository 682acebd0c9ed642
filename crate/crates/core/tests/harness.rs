use levirank::bergman::{bergman_kernel, KernelEvaluator};
use levirank::geometry::{catalog_domain, DomainModel, DomainSpec};
use levirank::harness::*;
use levirank::linalg::{c, real_vector, ComplexVector};
use levirank::normalization::normalize_chart;
use levirank::Error;

fn setup(name: &str, n: usize, params: &[f64]) -> (DomainModel, ExperimentConfig) {
    (catalog_domain(name, n, params).unwrap(), ExperimentConfig::new(DomainSpec::catalog(name, n, params)))
}

fn cases() -> Vec<(&'static str, usize, Vec<f64>, ComplexVector)> {
    vec![
        ("ball", 2, vec![], real_vector(&[1.0, 0.0])),
        ("polydisc", 2, vec![], real_vector(&[1.0, 0.3])),
        ("product_disc_ball", 3, vec![], real_vector(&[0.3, 1.0, 0.0])),
        ("ellipsoid", 2, vec![2.0, 1.0], real_vector(&[0.5f64.sqrt(), 0.0])),
    ]
}

#[test]
fn kernel_fits_are_stable_under_range_and_density_changes() {
    for (name, n, params, p) in cases() {
        let (d, cfg) = setup(name, n, &params);
        let base = fit_kernel_exponent(&d, &p, &cfg).unwrap();
        let mut halved = cfg.clone();
        halved.delta_max /= 2.0;
        let mut dense = cfg.clone();
        dense.delta_count *= 2;
        for other in [halved, dense] {
            let f = fit_kernel_exponent(&d, &p, &other).unwrap();
            assert!((f.slope - base.slope).abs() <= 0.02, "{name}: {} vs {}", f.slope, base.slope);
        }
    }
}

#[test]
fn chart_probes_give_the_same_slope() {
    // ζ_δ = (−δ, 0, …) in chart coordinates against p − δν
    for (name, n, params, p) in cases().into_iter().take(2) {
        let (d, cfg) = setup(name, n, &params);
        let chart = normalize_chart(&d, &p).unwrap();
        let deltas = cfg.deltas();
        let ev = KernelEvaluator::oracle();
        let values: Vec<f64> = deltas
            .iter()
            .map(|&dl| {
                let mut zeta = ComplexVector::zeros(n);
                zeta[0] = c(-dl, 0.0);
                bergman_kernel(&d, &chart.from_chart(&zeta), &ev).unwrap()
            })
            .collect();
        let chart_slope = loglog(&deltas, &values).slope;
        let fit = fit_kernel_exponent(&d, &p, &cfg).unwrap();
        assert!((chart_slope - fit.full_slope).abs() <= 0.02, "{name}: {chart_slope} vs {}", fit.full_slope);
    }
}

#[test]
fn catlin_ratio_shifts_with_beta_scale() {
    let (d, cfg) = setup("polydisc", 2, &[]);
    let p = real_vector(&[1.0, 0.3]);
    let base = catlin_consistency(&d, &p, &cfg).unwrap();
    let mut scaled = cfg.clone();
    scaled.beta_scale = 2.0;
    let other = catlin_consistency(&d, &p, &scaled).unwrap();
    assert!(base.band <= 10.0);
    for (a, b) in base.rows.iter().zip(&other.rows) {
        assert!((b.ratio / a.ratio - 16.0).abs() < 1e-9);
    }
    assert!((other.band - base.band).abs() < 1e-9 * base.band);
}

#[test]
fn annulus_faces_are_flat() {
    let (d, cfg) = setup("annulus_polydisc", 2, &[0.4]);
    for p in [real_vector(&[1.0, 0.3]), real_vector(&[0.4, 0.3])] {
        let r = detect_levi_flatness(&d, &p, &cfg).unwrap();
        assert_eq!(r.verdict, Verdict::Flat, "{:?}", r.fit.map(|f| f.slope));
    }
}

#[test]
fn metric_sweeps_and_comparability() {
    for (name, n, params, p) in cases() {
        let (d, cfg) = setup(name, n, &params);
        let dirs = default_directions(&d, &p).unwrap();
        let report = fit_metric_exponents(&d, &p, &dirs, &cfg, true).unwrap();
        assert!(report.comparability_band <= 25.0, "{name}: {}", report.comparability_band);
        for f in &report.fits {
            assert!((f.bergman.slope - f.direction.expected_slope).abs() <= 0.05, "{name} {}", f.direction.label);
            let band = f.kobayashi.as_ref().unwrap();
            assert_eq!(band.sandwich_violations, 0);
            assert!(!band.inconclusive);
        }
    }
}

#[test]
fn rank_drift_is_reported() {
    let json = r#"{
        "domain": {
            "name": "custom", "dimension": 2,
            "defining_fn": [
                {"coeff": 1.0, "alpha": [1,0], "beta": [1,0]},
                {"coeff": 1.0, "alpha": [0,2], "beta": [0,2]},
                {"coeff": -1.0, "alpha": [0,0], "beta": [0,0]}
            ],
            "bounding_box": {"lower": [-1,-1,-1,-1], "upper": [1,1,1,1]}
        },
        "method": "quadrature-gram", "degree": 6
    }"#;
    let cfg: ExperimentConfig = serde_json::from_str(json).unwrap();
    let d = cfg.domain.build().unwrap();
    let r = fit_kernel_exponent(&d, &real_vector(&[1.0, 0.0]), &cfg);
    assert!(matches!(r, Err(Error::RankDrift { .. })));
}

#[test]
fn outputs_round_trip() {
    let (d, cfg) = setup("ball", 2, &[]);
    let fit = fit_kernel_exponent(&d, &real_vector(&[1.0, 0.0]), &cfg).unwrap();
    let rows: Vec<SweepRow> = fit
        .deltas
        .iter()
        .zip(&fit.values)
        .map(|(&delta, &value)| SweepRow { delta, value, lower: None, upper: None, method: fit.method.clone(), condition: None })
        .collect();
    let dir = std::env::temp_dir().join(format!("levirank-test-{}", std::process::id()));
    write_file(&dir, "sweep.csv", &sweep_csv(&rows)).unwrap();
    write_file(&dir, "report.json", &report_json(&cfg, &fit).unwrap()).unwrap();
    write_file(&dir, "plot.dat", &plot_data(&fit.deltas, &fit.values)).unwrap();
    let csv = std::fs::read_to_string(dir.join("sweep.csv")).unwrap();
    assert_eq!(csv.lines().count(), 13);
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.join("report.json")).unwrap()).unwrap();
    assert_eq!(json["config_hash"], cfg.config_hash());
    assert!((json["result"]["slope"].as_f64().unwrap() - fit.slope).abs() < 1e-15);
    let plot = std::fs::read_to_string(dir.join("plot.dat")).unwrap();
    let first: Vec<f64> = plot.lines().nth(1).unwrap().split_whitespace().map(|v| v.parse().unwrap()).collect();
    assert_eq!(first, vec![fit.deltas[0], fit.values[0]]);
    std::fs::remove_dir_all(&dir).unwrap();
}
