//! Bounded plurisubharmonic barriers with large Hessians near boundary
//! points of constant Levi rank, and log-plurisubharmonic witnesses.

mod boxes;
mod cutoffs;
mod function;
mod verify;
mod witness;

pub use boxes::{omega_coefficients, omega_weight, BoxKind, FrequencyBox};
pub use cutoffs::CutoffPair;
pub use function::{build_barrier, build_barrier_family, build_barrier_with, delta_max, BarrierConstants, BarrierFunction};
pub use verify::{
    check_global, check_lower_bound, derivative_bounds, derivative_scaling,
    generalized_min_eigenvalue, lower_bound_weight, verify_barrier, Axis, CertificationReport,
    DerivativeBound, DerivativeScaling, GlobalReport, LowerBoundReport, SamplePlan, Samples,
    PSH_TOL,
};
pub use witness::{build_log_psh_witness, LogPshWitness, PshOracle};
