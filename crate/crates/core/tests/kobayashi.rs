use levirank::barrier::{build_log_psh_witness, CutoffPair, PshOracle};
use levirank::geometry::{catalog_domain, Jet};
use levirank::kobayashi::{best_sibony_lower, comparability_m, kobayashi_upper, sibony_lower, DiscFamily, MobiusWitness};
use levirank::linalg::{c, cvec, norm, real_vector, ComplexVector};
use proptest::prelude::*;
use std::sync::Arc;

#[test]
fn identity_disc() {
    let d = catalog_domain("ball", 1, &[]).unwrap();
    let z = real_vector(&[0.0]);
    let x = real_vector(&[1.0]);
    assert!((kobayashi_upper(&d, &z, &x, &DiscFamily::new(1)).unwrap().upper - 1.0).abs() < 1e-9);
    // u = |z|²
    let w = MobiusWitness::new(z.clone(), 0..1, ComplexVector::zeros(1), vec![1.0]).unwrap();
    assert!((sibony_lower(&d, &z, &x, &w).unwrap() - 1.0).abs() < 1e-15);
}

#[test]
fn ball_centre_by_degree_three() {
    let d = catalog_domain("ball", 2, &[]).unwrap();
    let x = cvec(&[c(0.6, 0.0), c(0.0, 0.8)]);
    let mut prev = f64::INFINITY;
    for deg in 1..=3 {
        let u = kobayashi_upper(&d, &ComplexVector::zeros(2), &x, &DiscFamily::new(deg)).unwrap().upper;
        assert!(u <= prev * (1.0 + 1e-12));
        // the linear disc is extremal, so higher degrees cannot go below 1
        assert!(u >= 1.0 - 1e-6 && u - 1.0 <= 1e-4, "degree {deg}: {u}");
        prev = u;
    }
}

#[test]
fn bidisc_diagonal_matches_affine_brute_force() {
    let d = catalog_domain("polydisc", 2, &[]).unwrap();
    let x = real_vector(&[1.0, 1.0]);
    let u = kobayashi_upper(&d, &ComplexVector::zeros(2), &x, &DiscFamily::new(1)).unwrap().upper;
    // largest λ on a grid for which t ↦ tλX stays in D² on a dense circle
    let mut best = 0.0f64;
    for k in 1..=4000 {
        let lam = k as f64 * 5e-4;
        let inside = (0..720).all(|m| {
            let t = num_complex::Complex64::from_polar(1.0, m as f64 * std::f64::consts::TAU / 720.0);
            d.rho(&(&x * (t * lam))) < 0.0
        });
        if inside {
            best = lam;
        }
    }
    assert!((best - 0.9995).abs() < 1e-12);
    assert!(u >= 1.0 / (best + 5e-4) && u <= 1.0 / best, "{u}");
    assert!((u - 1.0).abs() < 1e-9);
    assert!((best_sibony_lower(&d, &ComplexVector::zeros(2), &x).unwrap() - 1.0).abs() < 1e-15);
}

#[test]
fn infeasible_when_outside() {
    let d = catalog_domain("ball", 2, &[]).unwrap();
    assert!(kobayashi_upper(&d, &real_vector(&[1.2, 0.0]), &real_vector(&[1.0, 0.0]), &DiscFamily::new(1)).is_err());
}

#[test]
fn log_psh_witness_gives_radius_bound() {
    // φ = ½Σ|w_j|²/β_j² on the polydisc of radii β
    let center = cvec(&[c(0.1, 0.0), c(0.0, -0.2)]);
    let radii = vec![0.05, 0.3];
    let (c0, r0) = (center.clone(), radii.clone());
    let phi: PshOracle = Arc::new(move |z: &ComplexVector| {
        let mut jet = Jet::zeros(2);
        for j in 0..2 {
            let w = z[j] - c0[j];
            let b2 = 2.0 * r0[j] * r0[j];
            jet.value += w.norm_sqr() / b2;
            jet.gradient[j] = w.conj() / b2;
            jet.levi[(j, j)] = c(1.0 / b2, 0.0);
        }
        jet
    });
    let alpha = CutoffPair::new().alpha;
    let w = build_log_psh_witness(&center, &radii, phi, alpha, 0.5).unwrap();
    let d = catalog_domain("polydisc", 2, &[]).unwrap();
    let x = cvec(&[c(0.3, 0.1), c(-0.2, 0.5)]);
    let lower = sibony_lower(&d, &center, &x, &w).unwrap();
    let scale = (x[0].norm_sqr() / (radii[0] * radii[0]) + x[1].norm_sqr() / (radii[1] * radii[1])).sqrt();
    assert!(lower >= (-w.m).exp() * scale * (1.0 - 1e-12), "{lower} vs {}", (-w.m).exp() * scale);
    assert!(lower <= kobayashi_upper(&d, &center, &x, &DiscFamily::new(1)).unwrap().upper + 1e-9);
}

#[test]
fn comparability_examples() {
    let bidisc = catalog_domain("polydisc", 2, &[]).unwrap();
    let m = comparability_m(&bidisc, &real_vector(&[0.95, 0.0]), &real_vector(&[0.0, 1.0])).unwrap();
    assert!(m.abs() < 1e-8);
    // δ = 1 − |z₁|: |∂δ·X|² = 1/4 and L_δ = −1/(4|z₁|)
    let dl = 0.05;
    let m = comparability_m(&bidisc, &real_vector(&[1.0 - dl, 0.0]), &real_vector(&[1.0, 0.0])).unwrap();
    let exact = 0.25 / (dl * dl) + 0.25 / ((1.0 - dl) * dl);
    assert!((m - exact).abs() < 1e-10 * exact);
    let outside = comparability_m(&bidisc, &real_vector(&[1.5, 0.0]), &real_vector(&[1.0, 0.0]));
    assert!(outside.is_err());
}

fn sample(name: &str, a: f64, b: f64, r: f64, s: f64) -> (levirank::geometry::DomainModel, ComplexVector) {
    let d = catalog_domain(name, 2, &[]).unwrap();
    let z = cvec(&[c(r * s.sqrt() * a.cos(), r * s.sqrt() * a.sin()), c(r * (1.0 - s).sqrt() * b.cos(), r * (1.0 - s).sqrt() * b.sin())]);
    (d, z)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, rng_seed: proptest::test_runner::RngSeed::Fixed(11), ..ProptestConfig::default() })]

    #[test]
    fn sandwich_and_homogeneity(
        name in prop::sample::select(vec!["ball", "polydisc"]),
        a in 0.0..6.3f64, b in 0.0..6.3f64, r in 0.0..0.9f64, s in 0.0..1.0f64,
        x0 in -1.0..1.0f64, x1 in -1.0..1.0f64, x2 in -1.0..1.0f64, x3 in -1.0..1.0f64,
        kr in -3.0..3.0f64, ki in -3.0..3.0f64,
    ) {
        let x = cvec(&[c(x0, x1), c(x2, x3)]);
        prop_assume!(norm(&x) > 1e-3 && kr.abs() + ki.abs() > 1e-2);
        let (d, z) = sample(name, a, b, r, s);
        let fam = DiscFamily::new(1);
        let lower = best_sibony_lower(&d, &z, &x).unwrap();
        let upper = kobayashi_upper(&d, &z, &x, &fam).unwrap().upper;
        prop_assert!(lower <= upper + 1e-9);
        let k = c(kr, ki);
        let lower2 = best_sibony_lower(&d, &z, &(&x * k)).unwrap();
        let upper2 = kobayashi_upper(&d, &z, &(&x * k), &fam).unwrap().upper;
        prop_assert!((lower2 - k.norm() * lower).abs() <= 1e-9 * lower2);
        prop_assert!((upper2 - k.norm() * upper).abs() <= 1e-9 * upper2, "{} vs {}", upper2, k.norm() * upper);
    }

    #[test]
    fn upper_bound_decreases_under_inclusion(
        a in 0.0..6.3f64, b in 0.0..6.3f64, r in 0.0..0.9f64, s in 0.0..1.0f64,
        x0 in -1.0..1.0f64, x1 in -1.0..1.0f64, x2 in -1.0..1.0f64, x3 in -1.0..1.0f64,
    ) {
        let x = cvec(&[c(x0, x1), c(x2, x3)]);
        prop_assume!(norm(&x) > 1e-3);
        let (ball, z) = sample("ball", a, b, r, s);
        let bidisc = catalog_domain("polydisc", 2, &[]).unwrap();
        let fam = DiscFamily::new(1);
        let small = kobayashi_upper(&ball, &z, &x, &fam).unwrap().upper;
        let large = kobayashi_upper(&bidisc, &z, &x, &fam).unwrap().upper;
        prop_assert!(large <= small * (1.0 + 1e-9), "{} > {}", large, small);
    }
}
