use std::sync::Arc;

use levirank::geometry::{
    catalog_domain, distance_to_boundary, levi_form, levi_rank, project_to_boundary, BoundingBox, DefiningFunction,
    DomainModel, FiniteDifference, Jet, DEFAULT_RANK_TOL,
};
use levirank::linalg::{c, complete_unitary, real_vector, ComplexMatrix, ComplexVector};
use levirank::sampling::{gaussian_vector, rng};

fn catalog() -> Vec<DomainModel> {
    vec![
        catalog_domain("ball", 3, &[]).unwrap(),
        catalog_domain("polydisc", 2, &[]).unwrap(),
        catalog_domain("product_disc_ball", 3, &[]).unwrap(),
        catalog_domain("ellipsoid", 2, &[2.0, 3.0]).unwrap(),
        catalog_domain("annulus_polydisc", 2, &[0.4]).unwrap(),
    ]
}

#[test]
fn levi_form_is_hermitian() {
    let mut r = rng(1);
    for d in catalog() {
        let n = d.dimension();
        for _ in 0..100 {
            let z = d.sample_interior(&mut r, 10_000).unwrap();
            let x = gaussian_vector(&mut r, n);
            let y = gaussian_vector(&mut r, n);
            let a = levi_form(&d, &z, &x, &y).unwrap();
            let b = levi_form(&d, &z, &y, &x).unwrap();
            assert!((a - b.conj()).norm() <= 1e-12 * (1.0 + a.norm()));
        }
    }
}

#[test]
fn catalog_boundaries_are_pseudoconvex() {
    let mut r = rng(2);
    for d in catalog() {
        let mut checked = 0;
        while checked < 200 {
            let z = d.sample_interior(&mut r, 10_000).unwrap();
            let p = project_to_boundary(&d, &z).unwrap().point;
            let data = levi_rank(&d, &p, DEFAULT_RANK_TOL).unwrap();
            let min = data.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
            assert!(min >= -1e-9, "{} at {:?}: {min}", d.name(), p.as_slice());
            for v in data.tangential_basis.column_iter() {
                let t: num_complex::Complex64 = data.gradient.iter().zip(v.iter()).map(|(g, v)| g * v).sum();
                assert!(t.norm() < 1e-12);
            }
            checked += 1;
        }
    }
}

/// `(1 + 0.3 Re z₁)·ρ`.
#[derive(Debug)]
struct Rescaled(Arc<dyn DefiningFunction>);

impl DefiningFunction for Rescaled {
    fn dimension(&self) -> usize {
        self.0.dimension()
    }
    fn jet(&self, z: &ComplexVector) -> Jet {
        let n = self.dimension();
        let mut h = Jet::constant(n, 1.0 + 0.3 * z[0].re);
        h.gradient[0] = c(0.15, 0.0);
        self.0.jet(z).product(&h)
    }
}

#[test]
fn rank_is_invariant_under_rescaling_and_unitary_maps() {
    let mut r = rng(3);
    let cases = [
        (catalog_domain("ball", 2, &[]).unwrap(), real_vector(&[1.0, 0.0]), 1),
        (catalog_domain("polydisc", 2, &[]).unwrap(), real_vector(&[1.0, 0.3]), 0),
        (catalog_domain("product_disc_ball", 3, &[]).unwrap(), real_vector(&[0.2, 0.6, 0.8]), 1),
    ];
    for (d, p, rank) in cases {
        assert_eq!(levi_rank(&d, &p, DEFAULT_RANK_TOL).unwrap().rank, rank);
        let scaled = DomainModel::new(
            "rescaled",
            Arc::new(Rescaled(d.defining().clone())),
            d.bounding_box().clone(),
            d.center().clone(),
        )
        .unwrap();
        assert_eq!(levi_rank(&scaled, &p, DEFAULT_RANK_TOL).unwrap().rank, rank);
        let n = d.dimension();
        let u = complete_unitary(&ComplexMatrix::from_columns(&[gaussian_vector(&mut r, n).normalize()]));
        let rotated = d.pullback_affine(u.clone(), ComplexVector::zeros(n)).unwrap();
        let q = u.adjoint() * &p;
        assert_eq!(levi_rank(&rotated, &q, DEFAULT_RANK_TOL).unwrap().rank, rank);
    }
}

#[test]
fn distances_match_closed_forms() {
    let mut r = rng(4);
    for name in ["ball", "polydisc"] {
        let d = catalog_domain(name, 2, &[]).unwrap();
        let bare = d.pullback_affine(ComplexMatrix::identity(2, 2), ComplexVector::zeros(2)).unwrap();
        assert!(bare.closed_forms().is_none());
        for _ in 0..50 {
            let z = d.sample_interior(&mut r, 10_000).unwrap();
            let exact = distance_to_boundary(&d, &z).unwrap();
            let newton = distance_to_boundary(&bare, &z).unwrap();
            assert!((exact - newton).abs() <= 1e-10, "{name}: {exact} vs {newton}");
        }
    }
    let ball = catalog_domain("ball", 2, &[]).unwrap();
    assert!((distance_to_boundary(&ball, &real_vector(&[0.9, 0.0])).unwrap() - 0.1).abs() < 1e-15);
    let bidisc = catalog_domain("polydisc", 2, &[]).unwrap();
    assert!((distance_to_boundary(&bidisc, &real_vector(&[0.5, 0.8])).unwrap() - 0.2).abs() < 1e-15);
}

#[test]
fn ellipsoid_distance_matches_dense_boundary_search() {
    let d = catalog_domain("ellipsoid", 2, &[2.0, 1.0]).unwrap();
    let z = real_vector(&[0.6, 0.0]);
    let newton = distance_to_boundary(&d, &z).unwrap();
    // boundary points (z₁, z₂) with |z₂|² = 1 − 2|z₁|²; the distance to
    // (0.6, 0) depends on z₂ only through |z₂|
    let mut best = f64::INFINITY;
    let m = 2000;
    for i in 0..=m {
        for j in 0..=m {
            let x = -0.75 + 1.5 * i as f64 / m as f64;
            let y = -0.75 + 1.5 * j as f64 / m as f64;
            let s = 1.0 - 2.0 * (x * x + y * y);
            if s < 0.0 {
                continue;
            }
            best = best.min(((x - 0.6).powi(2) + y * y + s).sqrt());
        }
    }
    // boundary circle |z₁|² = 1/2 with z₂ = 0
    for k in 0..200_000 {
        let t = k as f64 * std::f64::consts::TAU / 200_000.0;
        let (x, y) = (0.5f64.sqrt() * t.cos(), 0.5f64.sqrt() * t.sin());
        best = best.min(((x - 0.6).powi(2) + y * y).sqrt());
    }
    assert!((newton - best).abs() <= 1e-6, "{newton} vs {best}");
    assert!((newton - 0.10711).abs() < 1e-5);
}

#[test]
fn analytic_jets_match_finite_differences() {
    let mut r = rng(5);
    for d in catalog() {
        let n = d.dimension();
        let dd = d.clone();
        let fd = FiniteDifference::new(n, move |z| dd.rho(z));
        for _ in 0..20 {
            let z = d.sample_interior(&mut r, 10_000).unwrap();
            let a = d.jet(&z).unwrap();
            let b = fd.jet(&z);
            let scale = 1.0 + a.levi.norm();
            assert!((&a.gradient - &b.gradient).norm() <= 1e-6 * (1.0 + a.gradient.norm()), "{}", d.name());
            assert!((&a.levi - &b.levi).norm() <= 1e-6 * scale, "{}", d.name());
            assert!((&a.holo - &b.holo).norm() <= 1e-6 * scale, "{}", d.name());
        }
    }
}

#[test]
fn dimension_mismatch_is_an_argument_error() {
    let d = catalog_domain("ball", 2, &[]).unwrap();
    let e = levi_form(&d, &real_vector(&[0.0, 0.0]), &real_vector(&[1.0]), &real_vector(&[1.0, 0.0]));
    assert!(matches!(e, Err(levirank::Error::Argument(_))));
    let bb = BoundingBox::symmetric(&[1.0, 1.0]);
    assert!(bb.contains(&real_vector(&[1.0, -1.0])));
}
