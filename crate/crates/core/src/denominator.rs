//! Denominator functions `phi(h, y)` built on the kernel
//! `phim(x) = (1 - exp(-x)) / x`, and the checker for the four sufficient
//! conditions (consistency, stability bound, second-order match, weights).

use std::fmt;
use std::sync::Arc;

use crate::error::{NsfdError, Result};
use crate::model::{scalar_fn, Representation, ScalarFn, ScalarProblem, SchemeConfig, Stability};
use crate::roots::linspace;

const SERIES_CUTOFF: f64 = 1e-5;

/// `(1 - e^{-x}) / x`, extended by continuity with `phim(0) = 1`.
///
/// Positive for every real `x`; overflows to `+inf` for `x` below about
/// `-709`.
pub fn phim(x: f64) -> f64 {
    if x.abs() < SERIES_CUTOFF {
        1.0 - x / 2.0 + x * x / 6.0 - x * x * x / 24.0
    } else {
        -(-x).exp_m1() / x
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DenominatorKind {
    /// `lambda(y) = -f'(y) + 2 beta f_minus(y)`.
    Eq17,
    /// Constant rate `R`: `phi(h) = (1 - e^{-R h}) / R`.
    ConstantRate,
    /// Kernel form with an arbitrary user-supplied `lambda(y)`.
    Custom,
}

/// `phi(h, y) = h * phim(h * lambda(y))`.
#[derive(Clone)]
pub struct DenominatorSpec {
    pub kind: DenominatorKind,
    pub lambda_fn: ScalarFn,
    pub rate: Option<f64>,
}

impl fmt::Debug for DenominatorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DenominatorSpec").field("kind", &self.kind).field("rate", &self.rate).finish_non_exhaustive()
    }
}

impl DenominatorSpec {
    pub fn eq17(lambda_fn: ScalarFn) -> Self {
        Self { kind: DenominatorKind::Eq17, lambda_fn, rate: None }
    }

    /// Derive the rate from the scheme: `lambda = -f' + 2 beta f_minus`.
    pub fn derived(problem: &ScalarProblem, rep: &Representation, beta: f64) -> Self {
        Self::eq17(lambda_from_scheme(problem, rep, beta))
    }

    pub fn constant_rate(rate: f64) -> Self {
        Self { kind: DenominatorKind::ConstantRate, lambda_fn: scalar_fn(move |_| rate), rate: Some(rate) }
    }

    /// `phi(h) = h`.
    pub fn plain() -> Self {
        Self::constant_rate(0.0)
    }

    pub fn custom(lambda_fn: ScalarFn) -> Self {
        Self { kind: DenominatorKind::Custom, lambda_fn, rate: None }
    }

    #[inline]
    pub fn lambda(&self, y: f64) -> f64 {
        match self.rate {
            Some(r) => r,
            None => (self.lambda_fn)(y),
        }
    }

    /// Kernel evaluation for any real `h` (analytic continuation to
    /// `h <= 0` is used by the second-derivative estimate).
    #[inline]
    pub fn kernel(&self, h: f64, y: f64) -> f64 {
        h * phim(h * self.lambda(y))
    }
}

/// `lambda(y) = -f'(y) + 2 beta f_minus(y)`.
pub fn lambda_from_scheme(problem: &ScalarProblem, rep: &Representation, beta: f64) -> ScalarFn {
    let df = problem.df_fn().clone();
    let fm = rep.f_minus.clone();
    Arc::new(move |y| -df(y) + 2.0 * beta * fm(y))
}

pub fn phi(spec: &DenominatorSpec, h: f64, y: f64) -> Result<f64> {
    if !(h > 0.0) {
        return Err(NsfdError::NonPositiveStep { h });
    }
    Ok(spec.kernel(h, y))
}

/// Richardson-refined central estimate of `d^2 phi / dh^2` at `h = 0`.
pub fn second_derivative_at_zero(spec: &DenominatorSpec, y: f64) -> f64 {
    let h0 = 1e-3;
    let d = |h: f64| (spec.kernel(h, y) + spec.kernel(-h, y)) / (h * h);
    (4.0 * d(h0 / 2.0) - d(h0)) / 3.0
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionResult {
    pub pass: bool,
    /// The condition held because its premise is empty.
    pub vacuous: bool,
    pub witness: String,
}

impl ConditionResult {
    fn pass(witness: String) -> Self {
        Self { pass: true, vacuous: false, witness }
    }
    fn fail(witness: String) -> Self {
        Self { pass: false, vacuous: false, witness }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HConditionReport {
    pub scheme: String,
    pub problem: String,
    pub h1: ConditionResult,
    pub h2: ConditionResult,
    pub h3: ConditionResult,
    pub h4: ConditionResult,
}

impl HConditionReport {
    pub fn all_pass(&self) -> bool {
        self.h1.pass && self.h2.pass && self.h3.pass && self.h4.pass
    }

    fn rows(&self) -> [(&'static str, &ConditionResult); 4] {
        [("H1", &self.h1), ("H2", &self.h2), ("H3", &self.h3), ("H4", &self.h4)]
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("conditions for {} on {}\n", self.scheme, self.problem);
        for (name, r) in self.rows() {
            let status = match (r.pass, r.vacuous) {
                (true, true) => "pass (vacuous)",
                (true, false) => "pass",
                (false, _) => "FAIL",
            };
            s.push_str(&format!("  {name}: {status:<15} {}\n", r.witness));
        }
        s
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("problem,scheme,condition,pass,vacuous,witness\n");
        for (name, r) in self.rows() {
            s.push_str(&format!(
                "{},{},{name},{},{},\"{}\"\n",
                self.problem,
                self.scheme,
                r.pass,
                r.vacuous,
                r.witness.replace('"', "'")
            ));
        }
        s
    }
}

const H1_STEPS: [f64; 7] = [1e-4, 1e-3, 1e-2, 0.1, 1.0, 10.0, 100.0];
const H2_STEPS: [f64; 4] = [0.1, 1.0, 10.0, 100.0];
const H3_POINTS: usize = 100;
const H3_TOL: f64 = 1e-4;

fn check_h1(problem: &ScalarProblem, spec: &DenominatorSpec) -> ConditionResult {
    let d = problem.domain().nonneg();
    let mut worst_c: f64 = 0.0;
    for y in linspace(d.lo, d.hi, 200) {
        for h in H1_STEPS {
            let p = spec.kernel(h, y);
            if !(p > 0.0) {
                return ConditionResult::fail(format!("phi({h}, {y}) = {p} is not positive"));
            }
        }
        // |phi/h - 1| <= C h: the implied C must not grow as h shrinks
        let cs: Vec<f64> = [1e-4, 1e-5, 1e-6].iter().map(|&h| (spec.kernel(h, y) / h - 1.0).abs() / h).collect();
        if cs.iter().any(|c| !c.is_finite()) || cs[2] > 1.5 * cs[0] + 1e-6 {
            return ConditionResult::fail(format!("phi(h,{y})/h - 1 is not O(h): C = {cs:?}"));
        }
        worst_c = worst_c.max(cs[0]);
    }
    ConditionResult::pass(format!("phi > 0 on samples; |phi/h - 1| <= {worst_c:.4} h"))
}

fn check_h2(problem: &ScalarProblem, rep: &Representation, cfg: &SchemeConfig) -> ConditionResult {
    let beta = cfg.beta();
    let mut notes = Vec::new();
    let mut all_vacuous = true;
    for e in problem.equilibria().iter().filter(|e| e.classification == Stability::Stable) {
        let y = e.y_star;
        let denom = 2.0 * beta * rep.minus(y) - problem.df(y);
        if denom <= 0.0 {
            notes.push(format!("y*={y:.6}: 2bf- - f' = {denom:.4} <= 0"));
            continue;
        }
        all_vacuous = false;
        let bound = 2.0 / denom;
        for h in H2_STEPS {
            let p = cfg.denominator.kernel(h, y);
            if !(p < bound) {
                return ConditionResult::fail(format!("y*={y}: phi({h}) = {p} >= {bound}"));
            }
        }
        notes.push(format!("y*={y:.6}: phi < {bound:.4}"));
    }
    if notes.is_empty() {
        notes.push("no stable equilibria".into());
    }
    ConditionResult { pass: true, vacuous: all_vacuous, witness: notes.join("; ") }
}

fn check_h3(problem: &ScalarProblem, rep: &Representation, cfg: &SchemeConfig) -> ConditionResult {
    let beta = cfg.beta();
    let d = problem.domain().nonneg();
    let mut worst = 0.0f64;
    for y in linspace(d.lo, d.hi, H3_POINTS) {
        let target = problem.df(y) - 2.0 * beta * rep.minus(y);
        let est = second_derivative_at_zero(&cfg.denominator, y);
        let err = (est - target).abs() / target.abs().max(1.0);
        if !(err <= H3_TOL) {
            return ConditionResult::fail(format!("y={y}: d2phi/dh2(0) = {est:.6} vs f' - 2bf- = {target:.6}"));
        }
        worst = worst.max(err);
    }
    ConditionResult::pass(format!("max relative mismatch {worst:.2e}"))
}

fn check_h4(cfg: &SchemeConfig) -> ConditionResult {
    let w = cfg.weights;
    let text = format!("alpha = {}, beta = {}", w.alpha, w.beta);
    if w.is_valid() {
        ConditionResult::pass(text)
    } else {
        ConditionResult::fail(text)
    }
}

/// Check the four sufficient conditions for positivity, elementary
/// stability and second order.
pub fn check_h_conditions(problem: &ScalarProblem, rep: &Representation, cfg: &SchemeConfig) -> HConditionReport {
    HConditionReport {
        scheme: cfg.label.clone(),
        problem: problem.name().to_string(),
        h1: check_h1(problem, &cfg.denominator),
        h2: check_h2(problem, rep, cfg),
        h3: check_h3(problem, rep, cfg),
        h4: check_h4(cfg),
    }
}
