//! Domains in ℂⁿ given by defining functions, Levi data, distance to the
//! boundary and the catalog of model domains.

mod catalog;
mod distance;
mod levi;
mod polynomial;
mod spec;

use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{c, ComplexMatrix, ComplexVector};

pub use catalog::{catalog_domain, Factor, ReinhardtProduct};
pub use distance::{
    distance_to_boundary, inward_normal, outward_normal, project_to_boundary,
    signed_distance, BoundaryProjection, ProjectionMethod,
};
pub use levi::{levi_form, levi_rank, tangential_basis, LeviData, DEFAULT_RANK_TOL};
pub use polynomial::{FiniteDifference, PolynomialDefining, PolynomialTerm};
pub use spec::DomainSpec;

/// Second-order Wirtinger jet of a real-valued function at a point.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet {
    pub value: f64,
    /// `∂f/∂z_j`
    pub gradient: ComplexVector,
    /// `∂²f/∂z_j∂z̄_k` (Hermitian)
    pub levi: ComplexMatrix,
    /// `∂²f/∂z_j∂z_k` (symmetric)
    pub holo: ComplexMatrix,
}

impl Jet {
    pub fn zeros(n: usize) -> Self {
        Jet {
            value: 0.0,
            gradient: ComplexVector::zeros(n),
            levi: ComplexMatrix::zeros(n, n),
            holo: ComplexMatrix::zeros(n, n),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite()
            && self.gradient.iter().all(|z| z.is_finite())
            && self.levi.iter().all(|z| z.is_finite())
            && self.holo.iter().all(|z| z.is_finite())
    }

    pub fn dimension(&self) -> usize {
        self.gradient.len()
    }

    pub fn constant(n: usize, value: f64) -> Self {
        let mut jet = Jet::zeros(n);
        jet.value = value;
        jet
    }

    /// Jet of `F∘f` from `[F(f), F'(f), F''(f)]`.
    pub fn compose(&self, d: [f64; 3]) -> Jet {
        let g = &self.gradient;
        let gg = g * g.adjoint();
        let gh = g * g.transpose();
        Jet {
            value: d[0],
            gradient: g * c(d[1], 0.0),
            levi: gg * c(d[2], 0.0) + &self.levi * c(d[1], 0.0),
            holo: gh * c(d[2], 0.0) + &self.holo * c(d[1], 0.0),
        }
    }

    pub fn product(&self, other: &Jet) -> Jet {
        let (a, b) = (c(self.value, 0.0), c(other.value, 0.0));
        let (ga, gb) = (&self.gradient, &other.gradient);
        Jet {
            value: self.value * other.value,
            gradient: ga * b + gb * a,
            levi: &self.levi * b + &other.levi * a + ga * gb.adjoint() + gb * ga.adjoint(),
            holo: &self.holo * b + &other.holo * a + ga * gb.transpose() + gb * ga.transpose(),
        }
    }

    pub fn scaled(&self, k: f64) -> Jet {
        let kc = c(k, 0.0);
        Jet {
            value: self.value * k,
            gradient: &self.gradient * kc,
            levi: &self.levi * kc,
            holo: &self.holo * kc,
        }
    }

    pub fn plus(&self, other: &Jet) -> Jet {
        Jet {
            value: self.value + other.value,
            gradient: &self.gradient + &other.gradient,
            levi: &self.levi + &other.levi,
            holo: &self.holo + &other.holo,
        }
    }
}

/// A smooth (or piecewise smooth) real defining function `ρ` with analytic
/// Wirtinger derivatives. `Ω = {ρ < 0}`.
pub trait DefiningFunction: Send + Sync + fmt::Debug {
    fn dimension(&self) -> usize;

    fn jet(&self, z: &ComplexVector) -> Jet;

    fn value(&self, z: &ComplexVector) -> f64 {
        self.jet(z).value
    }
}

/// Closed-form quantities some model domains know exactly.
pub trait ClosedForms: Send + Sync + fmt::Debug {
    fn distance(&self, _z: &ComplexVector) -> Option<f64> {
        None
    }
    /// Jet of the (positive inside) boundary distance.
    fn distance_jet(&self, _z: &ComplexVector) -> Option<Jet> {
        None
    }
    fn kernel(&self, _z: &ComplexVector) -> Option<f64> {
        None
    }
    /// `∂²log K/∂z_j∂z̄_k`.
    fn kernel_log_levi(&self, _z: &ComplexVector) -> Option<ComplexMatrix> {
        None
    }
}

/// L² norms of (Laurent) monomials on a Reinhardt domain.
pub trait MonomialNorms: Send + Sync + fmt::Debug {
    fn dimension(&self) -> usize;
    /// `log ∫_Ω |z^α|² dV`, or `None` when `z^α ∉ L²(Ω)`.
    fn log_norm_sq(&self, alpha: &[i64]) -> Option<f64>;
    /// Whether negative exponents are admissible in coordinate `j`.
    fn allows_negative(&self, j: usize) -> bool;
    /// Coordinate blocks across which the norms factor,
    /// `‖z^α‖² = Π_b ‖z_b^{α_b}‖²`.
    fn blocks(&self) -> Vec<std::ops::Range<usize>> {
        vec![0..self.dimension()]
    }
}

/// A leaf of the Levi foliation through a boundary point, given as an affine
/// complex subspace `base + span(directions)` contained in the boundary.
#[derive(Clone, Debug)]
pub struct AffineLeaf {
    pub base: ComplexVector,
    /// n × l matrix with orthonormal columns.
    pub directions: ComplexMatrix,
}

pub trait LeafCharts: Send + Sync + fmt::Debug {
    fn leaf_through(&self, p: &ComplexVector) -> Option<AffineLeaf>;
}

/// Axis-aligned box in real coordinates `[x_1..x_n, y_1..y_n]`.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct BoundingBox {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl BoundingBox {
    pub fn symmetric(extents: &[f64]) -> Self {
        BoundingBox {
            lower: extents.iter().chain(extents).map(|e| -e).collect(),
            upper: extents.iter().chain(extents).copied().collect(),
        }
    }

    pub fn contains(&self, z: &ComplexVector) -> bool {
        let n = z.len();
        (0..n).all(|j| {
            z[j].re >= self.lower[j]
                && z[j].re <= self.upper[j]
                && z[j].im >= self.lower[n + j]
                && z[j].im <= self.upper[n + j]
        })
    }

    /// Radius of the smallest ball centred at `center` containing the box.
    pub fn enclosing_radius(&self, center: &ComplexVector) -> f64 {
        let n = center.len();
        let mut acc = 0.0;
        for j in 0..n {
            let dx = (self.lower[j] - center[j].re).abs().max((self.upper[j] - center[j].re).abs());
            let dy = (self.lower[n + j] - center[j].im)
                .abs()
                .max((self.upper[n + j] - center[j].im).abs());
            acc += dx * dx + dy * dy;
        }
        acc.sqrt()
    }

    pub fn intersect(&self, other: &BoundingBox) -> BoundingBox {
        BoundingBox {
            lower: self.lower.iter().zip(&other.lower).map(|(a, b)| a.max(*b)).collect(),
            upper: self.upper.iter().zip(&other.upper).map(|(a, b)| a.min(*b)).collect(),
        }
    }
}

/// A bounded domain with its defining-function oracle and optional exact data.
/// Immutable after construction and cheap to clone.
#[derive(Clone)]
pub struct DomainModel {
    name: String,
    defining: Arc<dyn DefiningFunction>,
    bounds: BoundingBox,
    center: ComplexVector,
    closed_forms: Option<Arc<dyn ClosedForms>>,
    monomials: Option<Arc<dyn MonomialNorms>>,
    foliation: Option<Arc<dyn LeafCharts>>,
    spec: Option<DomainSpec>,
}

impl fmt::Debug for DomainModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DomainModel")
            .field("name", &self.name)
            .field("dimension", &self.dimension())
            .field("defining", &self.defining)
            .field("has_closed_forms", &self.closed_forms.is_some())
            .field("has_monomial_norms", &self.monomials.is_some())
            .field("has_leaf_charts", &self.foliation.is_some())
            .finish()
    }
}

impl DomainModel {
    /// A domain from a bare defining function. `center` must be an interior
    /// point from which the domain is star-shaped if the quadrature Gram
    /// evaluator is to be used.
    pub fn new(
        name: impl Into<String>,
        defining: Arc<dyn DefiningFunction>,
        bounds: BoundingBox,
        center: ComplexVector,
    ) -> Result<Self> {
        let n = defining.dimension();
        if n == 0 {
            return Err(Error::arg("dimension must be positive"));
        }
        if center.len() != n || bounds.lower.len() != 2 * n || bounds.upper.len() != 2 * n {
            return Err(Error::arg("center/bounding box do not match the dimension"));
        }
        Ok(DomainModel {
            name: name.into(),
            defining,
            bounds,
            center,
            closed_forms: None,
            monomials: None,
            foliation: None,
            spec: None,
        })
    }

    pub fn with_closed_forms(mut self, forms: Arc<dyn ClosedForms>) -> Self {
        self.closed_forms = Some(forms);
        self
    }

    pub fn with_monomial_norms(mut self, norms: Arc<dyn MonomialNorms>) -> Self {
        self.monomials = Some(norms);
        self
    }

    pub fn with_leaf_charts(mut self, charts: Arc<dyn LeafCharts>) -> Self {
        self.foliation = Some(charts);
        self
    }

    pub(crate) fn with_spec(mut self, spec: DomainSpec) -> Self {
        self.spec = Some(spec);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dimension(&self) -> usize {
        self.defining.dimension()
    }

    pub fn defining(&self) -> &Arc<dyn DefiningFunction> {
        &self.defining
    }

    pub fn bounding_box(&self) -> &BoundingBox {
        &self.bounds
    }

    pub fn center(&self) -> &ComplexVector {
        &self.center
    }

    pub fn closed_forms(&self) -> Option<&dyn ClosedForms> {
        self.closed_forms.as_deref()
    }

    pub fn monomial_norms(&self) -> Option<&dyn MonomialNorms> {
        self.monomials.as_deref()
    }

    pub fn leaf_charts(&self) -> Option<&dyn LeafCharts> {
        self.foliation.as_deref()
    }

    pub fn spec(&self) -> Option<&DomainSpec> {
        self.spec.as_ref()
    }

    pub fn rho(&self, z: &ComplexVector) -> f64 {
        self.defining.value(z)
    }

    pub fn jet(&self, z: &ComplexVector) -> Result<Jet> {
        self.check_dim(z)?;
        let jet = self.defining.jet(z);
        if !jet.is_finite() {
            return Err(Error::Evaluation(format!("non-finite jet at {:?}", z.as_slice())));
        }
        Ok(jet)
    }

    pub fn contains(&self, z: &ComplexVector) -> bool {
        z.len() == self.dimension() && self.bounds.contains(z) && self.rho(z) < 0.0
    }

    pub(crate) fn check_dim(&self, z: &ComplexVector) -> Result<()> {
        if z.len() != self.dimension() {
            return Err(Error::arg(format!(
                "vector of length {} for a domain of dimension {}",
                z.len(),
                self.dimension()
            )));
        }
        Ok(())
    }

    /// The domain `{w : ρ(A w + b) < 0}`, i.e. the preimage under `w ↦ Aw+b`.
    pub fn pullback_affine(&self, a: ComplexMatrix, b: ComplexVector) -> Result<DomainModel> {
        let n = self.dimension();
        if a.nrows() != n || a.ncols() != n || b.len() != n {
            return Err(Error::arg("affine map does not match the dimension"));
        }
        let inv = a
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::arg("affine map is singular"))?;
        let center = &inv * (&self.center - &b);
        // bounding box of the preimage: image of the old enclosing ball
        let r = self.bounds.enclosing_radius(&self.center) * inv.norm();
        let extents: Vec<f64> = vec![r; n];
        let mut bounds = BoundingBox::symmetric(&extents);
        for j in 0..n {
            bounds.lower[j] += center[j].re;
            bounds.upper[j] += center[j].re;
            bounds.lower[n + j] += center[j].im;
            bounds.upper[n + j] += center[j].im;
        }
        let defining = Arc::new(AffinePullback {
            inner: self.defining.clone(),
            a,
            b,
        });
        DomainModel::new(format!("pullback({})", self.name), defining, bounds, center)
    }

    /// Intersection `{ρ_self < 0} ∩ {ρ_other < 0}`; `center` must lie in both.
    pub fn intersect(&self, other: &DomainModel, center: ComplexVector) -> Result<DomainModel> {
        if other.dimension() != self.dimension() {
            return Err(Error::arg("dimension mismatch in intersection"));
        }
        let defining = Arc::new(MaxOf {
            parts: vec![self.defining.clone(), other.defining.clone()],
        });
        let model = DomainModel::new(
            format!("{}∩{}", self.name, other.name),
            defining,
            self.bounds.intersect(&other.bounds),
            center,
        )?;
        if !model.contains(model.center()) {
            return Err(Error::arg("intersection centre is not an interior point"));
        }
        Ok(model)
    }

    /// Random point of the domain, by rejection from the bounding box.
    pub fn sample_interior<R: Rng>(&self, rng: &mut R, max_tries: usize) -> Option<ComplexVector> {
        let n = self.dimension();
        for _ in 0..max_tries {
            let z = ComplexVector::from_iterator(
                n,
                (0..n).map(|j| {
                    c(
                        rng.gen_range(self.bounds.lower[j]..=self.bounds.upper[j]),
                        rng.gen_range(self.bounds.lower[n + j]..=self.bounds.upper[n + j]),
                    )
                }),
            );
            if self.contains(&z) {
                return Some(z);
            }
        }
        None
    }
}

/// `ρ(Aw + b)`.
#[derive(Debug)]
pub struct AffinePullback {
    inner: Arc<dyn DefiningFunction>,
    a: ComplexMatrix,
    b: ComplexVector,
}

impl DefiningFunction for AffinePullback {
    fn dimension(&self) -> usize {
        self.a.ncols()
    }

    fn jet(&self, w: &ComplexVector) -> Jet {
        let z = &self.a * w + &self.b;
        let j = self.inner.jet(&z);
        let at = self.a.transpose();
        Jet {
            value: j.value,
            gradient: &at * &j.gradient,
            levi: &at * &j.levi * self.a.map(|x| x.conj()),
            holo: &at * &j.holo * &self.a,
        }
    }

    fn value(&self, w: &ComplexVector) -> f64 {
        self.inner.value(&(&self.a * w + &self.b))
    }
}

/// Pointwise maximum of defining functions; the jet is that of the active part.
#[derive(Debug)]
pub struct MaxOf {
    pub parts: Vec<Arc<dyn DefiningFunction>>,
}

impl MaxOf {
    fn active(&self, z: &ComplexVector) -> usize {
        let mut best = 0;
        let mut best_val = f64::NEG_INFINITY;
        for (k, p) in self.parts.iter().enumerate() {
            let v = p.value(z);
            if v > best_val {
                best_val = v;
                best = k;
            }
        }
        best
    }
}

impl DefiningFunction for MaxOf {
    fn dimension(&self) -> usize {
        self.parts[0].dimension()
    }

    fn jet(&self, z: &ComplexVector) -> Jet {
        self.parts[self.active(z)].jet(z)
    }

    fn value(&self, z: &ComplexVector) -> f64 {
        self.parts.iter().map(|p| p.value(z)).fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Half-space `{Re Σ a_j z_j > offset}`, i.e. `ρ = offset − Re Σ a_j z_j`.
#[derive(Debug, Clone)]
pub struct HalfSpace {
    pub normal: ComplexVector,
    pub offset: f64,
}

impl DefiningFunction for HalfSpace {
    fn dimension(&self) -> usize {
        self.normal.len()
    }

    fn jet(&self, z: &ComplexVector) -> Jet {
        let n = self.normal.len();
        let mut jet = Jet::zeros(n);
        jet.value = self.value(z);
        jet.gradient = self.normal.map(|a| -a * 0.5);
        jet
    }

    fn value(&self, z: &ComplexVector) -> f64 {
        self.offset - crate::linalg::pairing(&self.normal, z).re
    }
}

impl HalfSpace {
    /// Wraps the half-space as an (unbounded) domain model clipped to `bounds`.
    pub fn into_domain(self, bounds: BoundingBox, center: ComplexVector) -> Result<DomainModel> {
        DomainModel::new("halfspace", Arc::new(self), bounds, center)
    }
}
