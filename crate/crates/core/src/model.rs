//! Shared domain records: problems, equilibria, representations, scheme
//! configurations and trajectories.
//!
//! Everything here is immutable once built; callables are reference-counted
//! so records can be cloned cheaply and shared across threads.

use std::fmt;
use std::sync::Arc;

use crate::denominator::DenominatorSpec;
use crate::error::{NsfdError, Result};
use crate::roots;

/// A real function of one real variable.
pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Closed-form solution `y(t; y0)`.
pub type ExactFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// Wrap a closure as a [`ScalarFn`].
pub fn scalar_fn(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> ScalarFn {
    Arc::new(f)
}

/// Hyperbolicity threshold on `|f'(y*)|`.
pub const TOL_HYP: f64 = 1e-10;

/// Number of scan points used for sign checks and root location.
pub const SAMPLE_COUNT: usize = 10_000;

/// Finite state window used for sampling and root search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain {
    pub lo: f64,
    pub hi: f64,
}

impl Domain {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(NsfdError::InvalidInput(format!("bad domain [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }

    /// The part of the window inside `[0, inf)`.
    pub fn nonneg(&self) -> Domain {
        Domain { lo: self.lo.max(0.0), hi: self.hi.max(0.0) }
    }

    pub fn samples(&self, n: usize) -> impl Iterator<Item = f64> {
        roots::linspace(self.lo, self.hi, n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Stability {
    Stable,
    Unstable,
    NonHyperbolic,
}

impl fmt::Display for Stability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stability::Stable => "stable",
            Stability::Unstable => "unstable",
            Stability::NonHyperbolic => "non_hyperbolic",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Equilibrium {
    pub y_star: f64,
    pub derivative_at: f64,
    pub classification: Stability,
}

impl Equilibrium {
    pub fn from_derivative(y_star: f64, derivative_at: f64) -> Self {
        let classification = if derivative_at < -TOL_HYP {
            Stability::Stable
        } else if derivative_at > TOL_HYP {
            Stability::Unstable
        } else {
            Stability::NonHyperbolic
        };
        Self { y_star, derivative_at, classification }
    }
}

/// An autonomous scalar ODE `y' = f(y)`.
#[derive(Clone)]
pub struct ScalarProblem {
    name: String,
    f: ScalarFn,
    df: ScalarFn,
    domain: Domain,
    equilibria: Vec<Equilibrium>,
    exact: Option<ExactFn>,
    f0_nonneg: bool,
}

impl fmt::Debug for ScalarProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarProblem")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("equilibria", &self.equilibria)
            .field("has_exact", &self.exact.is_some())
            .field("f0_nonneg", &self.f0_nonneg)
            .finish()
    }
}

impl ScalarProblem {
    /// Unregistered problem; pass it through [`register_problem`] before use.
    pub fn new(name: impl Into<String>, f: ScalarFn, df: ScalarFn, domain: Domain) -> Self {
        Self { name: name.into(), f, df, domain, equilibria: Vec::new(), exact: None, f0_nonneg: true }
    }

    pub fn with_exact(mut self, exact: ExactFn) -> Self {
        self.exact = Some(exact);
        self
    }

    pub fn with_f0_nonneg(mut self, flag: bool) -> Self {
        self.f0_nonneg = flag;
        self
    }

    pub fn with_equilibria(mut self, equilibria: Vec<Equilibrium>) -> Self {
        self.equilibria = equilibria;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    #[inline]
    pub fn f(&self, y: f64) -> f64 {
        (self.f)(y)
    }

    #[inline]
    pub fn df(&self, y: f64) -> f64 {
        (self.df)(y)
    }

    pub fn f_fn(&self) -> &ScalarFn {
        &self.f
    }

    pub fn df_fn(&self) -> &ScalarFn {
        &self.df
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn equilibria(&self) -> &[Equilibrium] {
        &self.equilibria
    }

    pub fn exact(&self, t: f64, y0: f64) -> Option<f64> {
        self.exact.as_ref().map(|e| e(t, y0))
    }

    pub fn exact_fn(&self) -> Option<&ExactFn> {
        self.exact.as_ref()
    }

    pub fn f0_nonneg(&self) -> bool {
        self.f0_nonneg
    }

    /// Sample points used for sign checks: a uniform scan of the nonnegative
    /// part of the window plus every equilibrium.
    pub fn sign_samples(&self) -> Vec<f64> {
        let mut ys: Vec<f64> = self.domain.nonneg().samples(SAMPLE_COUNT).collect();
        ys.extend(self.equilibria.iter().map(|e| e.y_star).filter(|y| *y >= 0.0));
        ys
    }
}

const DERIV_EPS: f64 = 1e-6;
const DERIV_CHECK_POINTS: usize = 1000;

fn check_derivative(p: &ScalarProblem) -> Result<()> {
    for y in p.domain.samples(DERIV_CHECK_POINTS) {
        let fd = (p.f(y + DERIV_EPS) - p.f(y - DERIV_EPS)) / (2.0 * DERIV_EPS);
        let df = p.df(y);
        if !((df - fd).abs() <= 1e-6 * (1.0 + df.abs())) {
            return Err(NsfdError::DerivativeMismatch { problem: p.name.clone(), y, df, fd });
        }
    }
    Ok(())
}

fn check_exact_solution(p: &ScalarProblem) -> Result<()> {
    let Some(exact) = &p.exact else { return Ok(()) };
    let eps = 1e-3;
    for y0 in [0.5, 1.5] {
        for k in 0..100 {
            let t = 0.01 + 2.0 * k as f64 / 99.0;
            // five-point stencil
            let dy = (-exact(t + 2.0 * eps, y0) + 8.0 * exact(t + eps, y0) - 8.0 * exact(t - eps, y0)
                + exact(t - 2.0 * eps, y0))
                / (12.0 * eps);
            let rhs = p.f(exact(t, y0));
            let residual = (dy - rhs).abs();
            if !(residual <= 1e-6 * (1.0 + rhs.abs())) {
                return Err(NsfdError::ExactSolutionMismatch { problem: p.name.clone(), t, residual });
            }
        }
    }
    Ok(())
}

/// Validate a problem: positivity precondition, derivative consistency,
/// exact-solution residual, and equilibrium classification (computed when
/// not supplied).
pub fn register_problem(spec: ScalarProblem) -> Result<ScalarProblem> {
    let f0 = spec.f(0.0);
    if spec.f0_nonneg && f0 < 0.0 {
        return Err(NsfdError::NegativeAtZero { value: f0 });
    }
    check_derivative(&spec)?;
    check_exact_solution(&spec)?;
    let mut out = spec;
    if out.equilibria.is_empty() {
        out.equilibria = classify_equilibria(&out)?;
    }
    for e in &out.equilibria {
        let r = out.f(e.y_star).abs();
        if r > 1e-10 * (1.0 + e.y_star.abs()) {
            return Err(NsfdError::InvalidInput(format!(
                "equilibrium {} of `{}` has residual {r}",
                e.y_star, out.name
            )));
        }
    }
    Ok(out)
}

/// Locate every root of `f` on the problem window and classify it by the
/// sign of `f'`. Non-hyperbolic points are kept and flagged with a warning.
pub fn classify_equilibria(problem: &ScalarProblem) -> Result<Vec<Equilibrium>> {
    let d = problem.domain;
    let f = |y: f64| problem.f(y);
    let zeros = roots::scan_zeros(&f, d.lo, d.hi, SAMPLE_COUNT, 1e-8);
    let eqs: Vec<Equilibrium> = zeros.into_iter().map(|y| Equilibrium::from_derivative(y, problem.df(y))).collect();
    for e in eqs.iter().filter(|e| e.classification == Stability::NonHyperbolic) {
        log::warn!("`{}`: equilibrium y* = {} is non-hyperbolic (f' = {:e})", problem.name, e.y_star, e.derivative_at);
    }
    Ok(eqs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Manual,
    AutoLemma1,
    AutoTheorem1,
}

/// A splitting `f(y) = f_plus(y) + y * f_minus(y)` with `f_plus >= 0` and
/// `f_minus <= 0` on the nonnegative half-line.
#[derive(Clone)]
pub struct Representation {
    pub f_plus: ScalarFn,
    pub f_minus: ScalarFn,
    pub provenance: Provenance,
}

impl fmt::Debug for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Representation").field("provenance", &self.provenance).finish_non_exhaustive()
    }
}

impl Representation {
    pub fn manual(f_plus: ScalarFn, f_minus: ScalarFn) -> Self {
        Self { f_plus, f_minus, provenance: Provenance::Manual }
    }

    #[inline]
    pub fn plus(&self, y: f64) -> f64 {
        (self.f_plus)(y)
    }

    #[inline]
    pub fn minus(&self, y: f64) -> f64 {
        (self.f_minus)(y)
    }
}

/// Non-local weights `alpha * y_n + beta * y_{n+1}` on the `f_minus` term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Weights {
    pub alpha: f64,
    pub beta: f64,
}

impl Weights {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        let w = Self { alpha, beta };
        if w.is_valid() {
            Ok(w)
        } else {
            Err(NsfdError::InvalidWeights { alpha, beta })
        }
    }

    /// Skip validation. Used to build deliberately broken configurations
    /// for the condition checker.
    pub fn new_unchecked(alpha: f64, beta: f64) -> Self {
        Self { alpha, beta }
    }

    pub fn from_beta(beta: f64) -> Result<Self> {
        Self::new(1.0 - beta, beta)
    }

    pub fn is_valid(&self) -> bool {
        self.alpha + self.beta == 1.0 && self.alpha <= 0.0 && self.beta >= 0.0
    }
}

/// Weights, denominator and a label identifying the scheme.
#[derive(Debug, Clone)]
pub struct SchemeConfig {
    pub label: String,
    pub weights: Weights,
    pub denominator: DenominatorSpec,
}

impl SchemeConfig {
    pub fn new(label: impl Into<String>, weights: Weights, denominator: DenominatorSpec) -> Result<Self> {
        if !weights.is_valid() {
            return Err(NsfdError::InvalidWeights { alpha: weights.alpha, beta: weights.beta });
        }
        Ok(Self { label: label.into(), weights, denominator })
    }

    pub fn new_unchecked(label: impl Into<String>, weights: Weights, denominator: DenominatorSpec) -> Self {
        Self { label: label.into(), weights, denominator }
    }

    pub fn alpha(&self) -> f64 {
        self.weights.alpha
    }

    pub fn beta(&self) -> f64 {
        self.weights.beta
    }
}

/// Uniform-step scalar trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<f64>,
    pub scheme_label: String,
    pub problem_name: String,
    pub h: f64,
    /// Indices of negative states, if any.
    pub negative_at: Vec<usize>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn final_time(&self) -> f64 {
        self.times.last().copied().unwrap_or(0.0)
    }

    pub fn final_state(&self) -> f64 {
        self.states.last().copied().unwrap_or(f64::NAN)
    }

    /// Grid check: equal lengths and uniform spacing. Spacing is compared
    /// relative to the time magnitude since `k * h` carries rounding of
    /// order `ulp(t)`.
    pub fn is_uniform(&self) -> bool {
        self.times.len() == self.states.len()
            && self.times.windows(2).all(|w| {
                let scale = self.h.max(w[1].abs());
                ((w[1] - w[0]) - self.h).abs() <= 1e-14 * scale
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn logistic_spec() -> ScalarProblem {
        ScalarProblem::new(
            "logistic",
            scalar_fn(|y| 2.0 * y - y * y),
            scalar_fn(|y| 2.0 - 2.0 * y),
            Domain::new(0.0, 10.0).unwrap(),
        )
        .with_exact(Arc::new(|t, y0| {
            let e = (2.0 * t).exp();
            2.0 * y0 * e / (2.0 + y0 * (e - 1.0))
        }))
    }

    #[test]
    fn logistic_registers_with_two_equilibria() {
        let p = register_problem(logistic_spec()).unwrap();
        let eq = p.equilibria();
        assert_eq!(eq.len(), 2);
        assert_eq!(eq[0].y_star, 0.0);
        assert_eq!(eq[0].classification, Stability::Unstable);
        assert!((eq[1].y_star - 2.0).abs() < 1e-12);
        assert_eq!(eq[1].classification, Stability::Stable);
    }

    #[test]
    fn negative_at_zero_is_rejected() {
        let spec = ScalarProblem::new("neg", scalar_fn(|_| -1.0), scalar_fn(|_| 0.0), Domain::new(0.0, 1.0).unwrap());
        assert!(matches!(register_problem(spec), Err(NsfdError::NegativeAtZero { .. })));
    }

    #[test]
    fn wrong_derivative_is_rejected() {
        let spec = ScalarProblem::new(
            "bad",
            scalar_fn(|y| y * (1.0 - y)),
            scalar_fn(|y| 1.0 - y),
            Domain::new(0.0, 2.0).unwrap(),
        );
        assert!(matches!(register_problem(spec), Err(NsfdError::DerivativeMismatch { .. })));
    }

    #[test]
    fn wrong_exact_solution_is_rejected() {
        let spec = logistic_spec().with_exact(Arc::new(|t, y0| y0 * (2.0 * t).exp()));
        assert!(matches!(register_problem(spec), Err(NsfdError::ExactSolutionMismatch { .. })));
    }

    #[test]
    fn square_has_non_hyperbolic_origin() {
        let spec =
            ScalarProblem::new("square", scalar_fn(|y| y * y), scalar_fn(|y| 2.0 * y), Domain::new(0.0, 10.0).unwrap());
        let eq = classify_equilibria(&spec).unwrap();
        assert_eq!(eq.len(), 1);
        assert_eq!(eq[0].classification, Stability::NonHyperbolic);
    }

    #[test]
    fn weights_constraints() {
        assert!(Weights::new(-0.25, 1.25).is_ok());
        assert!(Weights::new(0.5, 0.5).is_err());
        assert!(Weights::new(1.1, -0.1).is_err());
        assert!(!Weights::new_unchecked(0.5, 0.5).is_valid());
    }

    #[test]
    fn registration_is_idempotent() {
        let a = register_problem(logistic_spec()).unwrap();
        let b = register_problem(logistic_spec()).unwrap();
        assert_eq!(a.equilibria(), b.equilibria());
        let c = register_problem(a.clone()).unwrap();
        assert_eq!(a.equilibria(), c.equilibria());
    }
}
