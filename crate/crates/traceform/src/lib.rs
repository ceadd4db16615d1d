//! Trace Dirichlet forms realized as weighted Green-kernel matrices.
//!
//! For a transient Dirichlet form with Green kernel `G` and an admissible
//! finite measure `μ` (atoms for bounded kernels, concentric spheres for the
//! 3-D Newtonian kernel), the potential operator
//!
//! ```text
//! K u = ∫ G(·, y) u(y) dμ(y)
//! ```
//!
//! is an exact finite-rank operator: it is represented without discretization
//! error by the symmetric matrix `S = D^{1/2} G D^{1/2}` on the support of
//! `μ`, where `D` carries the weights. Eigenvalues `λ` of `S` are reciprocals
//! of the eigenvalues `E = 1/λ` of the induced trace form, resolvents are
//! direct linear solves, and sup-norm potential bounds control every
//! spectral quantity under monotone perturbation of `μ`.
//!
//! The crate computes these objects and certifies the convergence statements
//! that come with them: uniform potential convergence, ordered-eigenvalue
//! convergence with quantitative `‖G^{ν_n}1‖_∞` bounds, resolvent
//! convergence, stationary-solution continuity, and Kato-type admissibility
//! tests. A CLI (`traceform`) wires JSON configs to the experiment drivers
//! and emits CSV/JSON reports.

// `!(x > 0.0)` is the NaN-rejecting validation idiom used throughout;
// `x <= 0.0` would silently accept NaN parameters.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod ball;
pub mod config;
pub mod error;
pub mod graph1d;
pub mod kato;
pub mod kernels;
pub mod linalg;
pub mod measures;
pub mod potentials;
pub mod report;
pub mod spectra;
pub mod stationary;

pub(crate) mod rng;

pub use error::{Error, Result};
pub use kernels::{Kernel, Singularity};
pub use measures::{AtomicMeasure, Direction, Measure, MeasureSequence, SphereFamilyMeasure};
pub use potentials::{EvaluationGrid, SymmetricOperator};
pub use spectra::{ConvergenceReport, SpectralResult};
