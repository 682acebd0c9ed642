use levirank::barrier::{
    build_barrier, build_barrier_family, derivative_scaling, lower_bound_weight, omega_coefficients,
    omega_weight, verify_barrier, Axis, FrequencyBox, SamplePlan,
};
use levirank::geometry::catalog_domain;
use levirank::linalg::{c, hermitian_form, real_vector, ComplexVector};
use levirank::normalization::{normalize_chart, NormalizedChart};
use levirank::sampling::rng;
use levirank::Error;

#[test]
fn omega_weight_examples() {
    let cases = [([1.0, 0.0, 0.0], 100.0), ([0.0, 1.0, 0.0], 10.0), ([0.0, 0.0, 1.0], 1.0)];
    for (x, expected) in cases {
        let w = omega_weight(&real_vector(&x), 0.1, 1).unwrap();
        assert!((w - expected).abs() < 1e-12, "{x:?}: {w}");
    }
    let mixed = ComplexVector::from_vec(vec![c(0.0, 2.0), c(1.0, 1.0), c(0.5, 0.0)]);
    let w = omega_weight(&mixed, 0.1, 1).unwrap();
    assert!((w - (400.0 + 20.0 + 0.25)).abs() < 1e-12);
}

#[test]
fn nonpositive_delta_is_rejected() {
    for d in [0.0, -0.1, f64::NAN] {
        assert!(matches!(omega_coefficients(3, d, 1), Err(Error::Argument(_))));
        assert!(matches!(FrequencyBox::p_box(3, 1, d, 0.5), Err(Error::Argument(_))));
    }
}

#[test]
fn weight_matrix_matches_omega_at_the_normal() {
    let grad = real_vector(&[1.0, 0.0, 0.0]);
    let w = lower_bound_weight(&grad, 0.03, 1).unwrap();
    let mut r = rng(5);
    for _ in 0..50 {
        let y = levirank::sampling::gaussian_vector(&mut r, 3);
        let quad = hermitian_form(&w, &y, &y).re;
        let omega = omega_weight(&y, 0.03, 1).unwrap();
        assert!((quad - omega).abs() <= 1e-12 * omega);
    }
}

#[test]
fn q_box_sits_inside_p_box() {
    let mut r = rng(9);
    for (delta, a, b) in [(0.1, 1.0, 0.5), (0.01, 0.5, 0.0625)] {
        let cq = 0.5 * a * b;
        let q = FrequencyBox::q_box(3, 1, delta, cq).unwrap();
        let p = FrequencyBox::p_box(3, 1, delta, a * b).unwrap();
        for _ in 0..2000 {
            let z = q.sample(&mut r);
            assert!(q.contains(&z) && p.contains(&z));
            assert!(z[0].re < 0.0);
        }
    }
}

#[test]
fn flat_chart_barrier_is_bounded() {
    let chart = NormalizedChart::model(2, &[]).unwrap();
    let bf = build_barrier(&chart, 0.01, 1000).unwrap();
    let report = verify_barrier(&bf, &SamplePlan::default()).unwrap();
    assert!(report.pass(), "{:?}", report.bounds);
    assert!(report.bounds.min_value >= 0.0 && report.bounds.max_value <= 1.0);
    assert!(report.lower_bound.box_inside);
}

#[test]
fn ball_chart_constants_are_stable_across_delta() {
    let ball = catalog_domain("ball", 2, &[]).unwrap();
    let chart = normalize_chart(&ball, &real_vector(&[1.0, 0.0])).unwrap();
    let plan = SamplePlan::default();
    let deltas = [1e-1, 1e-2, 1e-3];
    let family = build_barrier_family(&chart, &deltas, 1000, &plan).unwrap();
    let reports: Vec<_> = family.iter().map(|bf| verify_barrier(bf, &plan).unwrap()).collect();
    for r in &reports {
        assert!(r.pass(), "delta {}: {:?}", r.delta, r.lower_bound);
        assert!(r.lower_bound.c0.is_finite() && r.lower_bound.c0 > 0.0);
        assert_eq!(r.constants, reports[0].constants);
    }
    let c0: Vec<f64> = reports.iter().map(|r| r.lower_bound.c0).collect();
    let hi = c0.iter().cloned().fold(0.0, f64::max);
    let lo = c0.iter().cloned().fold(f64::INFINITY, f64::min);
    assert!(hi / lo <= 2.0, "{c0:?}");

    let scaling = derivative_scaling(&reports);
    let d1 = scaling
        .iter()
        .find(|s| s.axis == Axis::Re && s.alpha.iter().sum::<u32>() == 1 && s.alpha[0] == 1)
        .expect("first normal derivative");
    assert!((d1.fitted_slope + 1.0).abs() <= 0.1, "slope {}", d1.fitted_slope);
}
