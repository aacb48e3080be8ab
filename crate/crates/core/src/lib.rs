//! Positivity-preserving, elementary-stable nonstandard finite difference
//! (NSFD) schemes of second order for autonomous ODEs.
//!
//! The scalar method integrates `y' = f(y)` after splitting
//! `f(y) = f_plus(y) + y * f_minus(y)` with `f_plus >= 0` and `f_minus <= 0`:
//!
//! ```text
//! (y_{n+1} - y_n) / phi(h, y_n) = f_plus(y_n) + alpha y_n f_minus(y_n) + beta y_{n+1} f_minus(y_n)
//! ```
//!
//! with `alpha + beta = 1`, `alpha <= 0 <= beta` and the state-dependent
//! denominator `phi(h, y) = (1 - exp(-h lambda(y))) / lambda(y)`,
//! `lambda(y) = -f'(y) + 2 beta f_minus(y)`.
//!
//! Modules:
//! * [`model`]: problems, equilibria, representations, configs, trajectories
//! * [`splitting`]: automatic construction of sign-split representations
//! * [`denominator`]: `phi(h, y)` and the sufficient-condition checker
//! * [`scalar`]: the NSFD step map, baselines, integration, RK4 oracle
//! * [`system`]: componentwise extension to positive systems
//! * [`analysis`]: errors, rate tables, positivity/stability audits, errata
//! * [`problems`]: the named problem and scheme registry
//! * [`experiments`]: table and figure data generators used by the CLI

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod denominator;
pub mod error;
pub mod experiments;
pub mod model;
pub mod problems;
mod roots;
pub mod scalar;
pub mod splitting;
pub mod system;

pub use denominator::{
    check_h_conditions, lambda_from_scheme, phi, phim, DenominatorKind, DenominatorSpec, HConditionReport,
};
pub use error::{NsfdError, Result};
pub use model::{
    classify_equilibria, register_problem, scalar_fn, Domain, Equilibrium, Provenance, Representation, ScalarFn,
    ScalarProblem, SchemeConfig, Stability, Trajectory, Weights,
};
pub use scalar::{integrate, nsfd_step, reference_solution, NsfdScheme, StepMap};
pub use system::{SystemProblem, SystemSchemeConfig, SystemTrajectory};
