//! Scalar step maps: the NSFD method and the baseline schemes it is compared
//! against, fixed-step integration, and the RK4 reference oracle.

use std::f64::consts::PI;

use crate::denominator::{phim, DenominatorSpec};
use crate::error::{NsfdError, Result};
use crate::model::{Representation, ScalarProblem, SchemeConfig, Trajectory};

/// Largest number of steps `integrate` accepts.
pub const MAX_STEPS: u64 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClaimedOrder {
    First,
    Second,
    Exact,
}

/// One-step map `y_{n+1} = G(y_n, h)`. Implementations are pure: equal inputs
/// give bit-identical outputs.
pub trait StepMap: Send + Sync {
    fn label(&self) -> &str;

    fn problem_name(&self) -> &str;

    fn step(&self, y: f64, h: f64) -> Result<f64>;

    fn order_claimed(&self) -> ClaimedOrder;

    fn requires_representation(&self) -> bool {
        false
    }

    /// `G(y, h) - y`.
    fn displacement(&self, y: f64, h: f64) -> Result<f64> {
        Ok(self.step(y, h)? - y)
    }

    /// `dG/dy` at `y`, by finite differences unless overridden. One-sided
    /// near the origin so that nonnegative-only maps are never fed `y < 0`.
    fn jacobian_at(&self, y: f64, h: f64) -> Result<f64> {
        let d = 1e-6 * (1.0 + y.abs());
        if y - d >= 0.0 {
            Ok((self.step(y + d, h)? - self.step(y - d, h)?) / (2.0 * d))
        } else {
            let g0 = self.step(y, h)?;
            Ok((-3.0 * g0 + 4.0 * self.step(y + d, h)? - self.step(y + 2.0 * d, h)?) / (2.0 * d))
        }
    }
}

fn check_step(h: f64) -> Result<()> {
    if h > 0.0 {
        Ok(())
    } else {
        Err(NsfdError::NonPositiveStep { h })
    }
}

/// One step of the NSFD method
///
/// ```text
/// y_{n+1} = (y_n + phi f_plus + phi alpha y_n f_minus) / (1 - phi beta f_minus)
/// ```
///
/// evaluated after dividing through by `phi`, so that an overflowing
/// denominator function (`phi = inf`) takes its finite limit. Returns `y_n`
/// unchanged when `f(y_n) = 0`.
pub fn nsfd_step(problem: &ScalarProblem, rep: &Representation, config: &SchemeConfig, y: f64, h: f64) -> Result<f64> {
    check_step(h)?;
    if !(y >= 0.0) {
        return Err(NsfdError::NegativeState { y });
    }
    if problem.f(y) == 0.0 {
        return Ok(y);
    }
    let inv_phi = 1.0 / config.denominator.kernel(h, y);
    let (fp, fm) = (rep.plus(y), rep.minus(y));
    let num = inv_phi * y + fp + config.alpha() * y * fm;
    let den = inv_phi - config.beta() * fm;
    Ok(num / den)
}

/// The NSFD method bound to a problem, a representation and a configuration.
#[derive(Debug, Clone)]
pub struct NsfdScheme {
    pub problem: ScalarProblem,
    pub rep: Representation,
    pub config: SchemeConfig,
    pub claimed: ClaimedOrder,
}

impl NsfdScheme {
    pub fn new(problem: ScalarProblem, rep: Representation, config: SchemeConfig) -> Self {
        Self { problem, rep, config, claimed: ClaimedOrder::Second }
    }

    pub fn with_claimed(mut self, claimed: ClaimedOrder) -> Self {
        self.claimed = claimed;
        self
    }

    /// `1 - phi beta f_minus`, divided by `phi`.
    fn scaled_den(&self, y: f64, h: f64) -> f64 {
        1.0 / self.config.denominator.kernel(h, y) - self.config.beta() * self.rep.minus(y)
    }
}

impl StepMap for NsfdScheme {
    fn label(&self) -> &str {
        &self.config.label
    }

    fn problem_name(&self) -> &str {
        self.problem.name()
    }

    fn step(&self, y: f64, h: f64) -> Result<f64> {
        nsfd_step(&self.problem, &self.rep, &self.config, y, h)
    }

    fn order_claimed(&self) -> ClaimedOrder {
        self.claimed
    }

    fn requires_representation(&self) -> bool {
        true
    }

    /// `phi f / (1 - phi beta f_minus)`.
    fn displacement(&self, y: f64, h: f64) -> Result<f64> {
        check_step(h)?;
        if !(y >= 0.0) {
            return Err(NsfdError::NegativeState { y });
        }
        Ok(self.problem.f(y) / self.scaled_den(y, h))
    }

    /// `1 + phi f'(y*) / (1 - phi beta f_minus(y*))` at an equilibrium.
    fn jacobian_at(&self, y: f64, h: f64) -> Result<f64> {
        check_step(h)?;
        if self.problem.f(y).abs() > 1e-10 * (1.0 + y.abs()) {
            let d = 1e-6 * (1.0 + y.abs());
            let lo = (y - d).max(0.0);
            return Ok((self.step(y + d, h)? - self.step(lo, h)?) / (y + d - lo));
        }
        Ok(1.0 + self.problem.df(y) / self.scaled_den(y, h))
    }
}

macro_rules! named {
    ($label:expr) => {
        fn label(&self) -> &str {
            $label
        }
    };
}

/// Forward Euler.
#[derive(Debug, Clone)]
pub struct Euler {
    pub problem: ScalarProblem,
}

impl StepMap for Euler {
    named!("euler");

    fn problem_name(&self) -> &str {
        self.problem.name()
    }

    fn step(&self, y: f64, h: f64) -> Result<f64> {
        check_step(h)?;
        Ok(y + h * self.problem.f(y))
    }

    fn order_claimed(&self) -> ClaimedOrder {
        ClaimedOrder::First
    }
}

/// Heun's method, the explicit two-stage second-order Runge-Kutta scheme.
#[derive(Debug, Clone)]
pub struct Rk2 {
    pub problem: ScalarProblem,
}

impl StepMap for Rk2 {
    named!("rk2");

    fn problem_name(&self) -> &str {
        self.problem.name()
    }

    fn step(&self, y: f64, h: f64) -> Result<f64> {
        check_step(h)?;
        let k1 = self.problem.f(y);
        let k2 = self.problem.f(y + h * k1);
        Ok(y + 0.5 * h * (k1 + k2))
    }

    fn order_claimed(&self) -> ClaimedOrder {
        ClaimedOrder::Second
    }
}

/// Classical four-stage Runge-Kutta.
#[derive(Debug, Clone)]
pub struct Rk4 {
    pub problem: ScalarProblem,
}

#[inline]
fn rk4_step(f: &dyn Fn(f64) -> f64, y: f64, h: f64) -> f64 {
    let k1 = f(y);
    let k2 = f(y + 0.5 * h * k1);
    let k3 = f(y + 0.5 * h * k2);
    let k4 = f(y + h * k3);
    y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
}

impl StepMap for Rk4 {
    named!("rk4");

    fn problem_name(&self) -> &str {
        self.problem.name()
    }

    fn step(&self, y: f64, h: f64) -> Result<f64> {
        check_step(h)?;
        Ok(rk4_step(&|v| self.problem.f(v), y, h))
    }

    fn order_claimed(&self) -> ClaimedOrder {
        ClaimedOrder::Second
    }
}

/// The exact flow `y -> y(h; y)`; requires a closed-form solution.
#[derive(Debug, Clone)]
pub struct ExactFlow {
    pub problem: ScalarProblem,
}

impl StepMap for ExactFlow {
    named!("exact-flow");

    fn problem_name(&self) -> &str {
        self.problem.name()
    }

    fn step(&self, y: f64, h: f64) -> Result<f64> {
        check_step(h)?;
        self.problem
            .exact(h, y)
            .ok_or_else(|| NsfdError::InvalidInput(format!("`{}` has no exact solution", self.problem.name())))
    }

    fn order_claimed(&self) -> ClaimedOrder {
        ClaimedOrder::Exact
    }
}

/// Sign-switching positive scheme for `y' = 2y - y^2` with `phi = 1 - e^{-h}`.
#[derive(Debug, Clone, Copy, Default)]
pub struct WoodKojouharov;

impl StepMap for WoodKojouharov {
    named!("wood");

    fn problem_name(&self) -> &str {
        "logistic"
    }

    fn step(&self, y: f64, h: f64) -> Result<f64> {
        check_step(h)?;
        let phi = -(-h).exp_m1();
        let f = 2.0 * y - y * y;
        Ok(if f >= 0.0 { y + phi * f } else { y * y / (y - phi * f) })
    }

    fn order_claimed(&self) -> ClaimedOrder {
        ClaimedOrder::First
    }
}

/// `(1 - e^{-R h}) / R`.
fn rate_phi(rate: f64, h: f64) -> f64 {
    h * phim(rate * h)
}

/// Symmetric scheme for `y' = y - y^3` with `phi = (1 - e^{-2h}) / 2`.
#[derive(Debug, Clone, Copy, Default)]
pub struct MickensCubic;

impl StepMap for MickensCubic {
    named!("mickens");

    fn problem_name(&self) -> &str {
        "cubic"
    }

    fn step(&self, y: f64, h: f64) -> Result<f64> {
        check_step(h)?;
        let phi = rate_phi(2.0, h);
        let y2 = y * y;
        Ok(((2.0 + phi) + phi * y2) / ((2.0 - phi) + 3.0 * phi * y2) * y)
    }

    fn order_claimed(&self) -> ClaimedOrder {
        ClaimedOrder::First
    }
}

/// Scheme for the modified Monod equation
/// `y' = ((mu - 1) y - (mu + 1) y^2) / (1 + y)` with
/// `phi = (1 - e^{-R h}) / R`, `R = mu - 1`.
#[derive(Debug, Clone, Copy)]
pub struct MickensMonod {
    mu: f64,
}

impl MickensMonod {
    pub fn new(mu: f64) -> Result<Self> {
        if !(mu > 1.0) {
            return Err(NsfdError::ParameterOutOfRange { name: "mu", value: mu, reason: "must exceed 1" });
        }
        Ok(Self { mu })
    }
}

impl StepMap for MickensMonod {
    named!("mickens");

    fn problem_name(&self) -> &str {
        "monod"
    }

    fn step(&self, y: f64, h: f64) -> Result<f64> {
        check_step(h)?;
        let mu = self.mu;
        let phi = rate_phi(mu - 1.0, h);
        let s = y / (1.0 + y);
        Ok((y + phi * (mu - 1.0) * s) / (1.0 + phi * (mu + 1.0) * s))
    }

    fn order_claimed(&self) -> ClaimedOrder {
        ClaimedOrder::First
    }
}

/// `y_{n+1} = y_n + phi sin(pi y_n)`, `phi = (1 - e^{-pi h}) / pi`.
#[derive(Debug, Clone, Copy, Default)]
pub struct MickensSine;

impl StepMap for MickensSine {
    named!("mickens");

    fn problem_name(&self) -> &str {
        "sine"
    }

    fn step(&self, y: f64, h: f64) -> Result<f64> {
        check_step(h)?;
        Ok(y + rate_phi(PI, h) * (PI * y).sin())
    }

    fn order_claimed(&self) -> ClaimedOrder {
        ClaimedOrder::First
    }
}

/// NSFD scheme for `y' = a y - b y^m`:
///
/// ```text
/// y_{n+1} = [y_n + phi (a y_n - b (1 - m/2) y_n^m)] / [1 + phi b (m/2) y_n^{m-1}]
/// ```
///
/// The denominator is supplied: `DenominatorSpec::constant_rate(a)` is the
/// printed choice, `DenominatorSpec::constant_rate(-a)` the one that matches
/// the second-order condition.
#[derive(Debug, Clone)]
pub struct PowerLawNsfd {
    a: f64,
    b: f64,
    m: u32,
    denominator: DenominatorSpec,
    label: String,
}

impl PowerLawNsfd {
    pub fn new(a: f64, b: f64, m: u32, denominator: DenominatorSpec, label: impl Into<String>) -> Result<Self> {
        if !(a > 0.0) {
            return Err(NsfdError::ParameterOutOfRange { name: "a", value: a, reason: "must be positive" });
        }
        if !(b > 0.0) {
            return Err(NsfdError::ParameterOutOfRange { name: "b", value: b, reason: "must be positive" });
        }
        if m < 2 {
            return Err(NsfdError::ParameterOutOfRange { name: "m", value: m as f64, reason: "must be >= 2" });
        }
        Ok(Self { a, b, m, denominator, label: label.into() })
    }

    /// The printed denominator `(1 - e^{-a h}) / a`.
    pub fn printed(a: f64, b: f64, m: u32) -> Result<Self> {
        Self::new(a, b, m, DenominatorSpec::constant_rate(a), "powerlaw-printed")
    }

    pub fn equilibrium(&self) -> f64 {
        (self.a / self.b).powf(1.0 / (self.m as f64 - 1.0))
    }
}

impl StepMap for PowerLawNsfd {
    fn label(&self) -> &str {
        &self.label
    }

    fn problem_name(&self) -> &str {
        "powerlaw"
    }

    fn step(&self, y: f64, h: f64) -> Result<f64> {
        check_step(h)?;
        if !(y >= 0.0) {
            return Err(NsfdError::NegativeState { y });
        }
        let (a, b, m) = (self.a, self.b, self.m as f64);
        let inv_phi = 1.0 / self.denominator.kernel(h, y);
        let ym1 = y.powi(self.m as i32 - 1);
        let num = inv_phi * y + a * y - b * (1.0 - m / 2.0) * ym1 * y;
        let den = inv_phi + b * (m / 2.0) * ym1;
        Ok(num / den)
    }

    fn order_claimed(&self) -> ClaimedOrder {
        ClaimedOrder::Second
    }

    fn requires_representation(&self) -> bool {
        true
    }
}

/// Iterate `step` from `y0` over `round(t_end / h)` steps.
pub fn integrate(step: &dyn StepMap, y0: f64, h: f64, t_end: f64) -> Result<Trajectory> {
    check_step(h)?;
    let n = step_count(h, t_end)?;
    let mut times = Vec::with_capacity(n + 1);
    let mut states = Vec::with_capacity(n + 1);
    let mut negative_at = Vec::new();
    let mut y = y0;
    times.push(0.0);
    states.push(y);
    for k in 1..=n {
        y = step.step(y, h)?;
        if y < 0.0 {
            negative_at.push(k);
        }
        times.push(k as f64 * h);
        states.push(y);
    }
    Ok(Trajectory {
        times,
        states,
        scheme_label: step.label().to_string(),
        problem_name: step.problem_name().to_string(),
        h,
        negative_at,
    })
}

/// `round(t_end / h)`, warning when `t_end` is not a multiple of `h`.
pub fn step_count(h: f64, t_end: f64) -> Result<usize> {
    if !(t_end >= 0.0) {
        return Err(NsfdError::InvalidInput(format!("t_end must be nonnegative, got {t_end}")));
    }
    let ratio = t_end / h;
    if ratio > MAX_STEPS as f64 {
        return Err(NsfdError::StepCountOverflow { steps: ratio, limit: MAX_STEPS });
    }
    let n = ratio.round();
    if (n * h - t_end).abs() > 1e-9 * t_end.max(1.0) {
        log::warn!("t_end = {t_end} is not a multiple of h = {h}; integrating to {}", n * h);
    }
    Ok(n as usize)
}

/// Sub-steps per output interval used by the reference oracle.
pub const ORACLE_SUBSTEPS: usize = 1000;

/// RK4 at step `h_out / 1000`, sampled on the `h_out` grid. When the problem
/// has a closed-form solution the oracle must agree with it to `1e-10`.
pub fn reference_solution(problem: &ScalarProblem, y0: f64, h_out: f64, t_end: f64) -> Result<Trajectory> {
    check_step(h_out)?;
    let n = step_count(h_out, t_end)?;
    let hi = h_out / ORACLE_SUBSTEPS as f64;
    let f = |v: f64| problem.f(v);
    let mut times = Vec::with_capacity(n + 1);
    let mut states = Vec::with_capacity(n + 1);
    let mut y = y0;
    times.push(0.0);
    states.push(y);
    for k in 1..=n {
        for _ in 0..ORACLE_SUBSTEPS {
            y = rk4_step(&f, y, hi);
        }
        let t = k as f64 * h_out;
        if let Some(e) = problem.exact(t, y0) {
            let diff = (e - y).abs();
            if !(diff <= 1e-10 * e.abs().max(1.0)) {
                return Err(NsfdError::OracleSelfCheckFailed { t, diff });
            }
        }
        times.push(t);
        states.push(y);
    }
    Ok(Trajectory {
        times,
        states,
        scheme_label: "oracle-rk4".into(),
        problem_name: problem.name().to_string(),
        h: h_out,
        negative_at: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{self, Params};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn logistic_scheme(label: &str) -> Box<dyn StepMap> {
        let p = problems::logistic().unwrap();
        let s = problems::scalar_scheme(&p, label, &Params::new()).unwrap();
        Box::new(s.nsfd.unwrap())
    }

    #[test]
    fn baseline_hand_values() {
        let p = problems::logistic().unwrap();
        assert_relative_eq!(Euler { problem: p.clone() }.step(0.5, 0.1).unwrap(), 0.575, max_relative = 1e-15);
        assert_relative_eq!(Euler { problem: p.clone() }.step(0.5, 1.25).unwrap(), 1.4375, max_relative = 1e-15);
        assert_relative_eq!(Rk2 { problem: p }.step(0.5, 0.1).unwrap(), 0.578_468_75, max_relative = 1e-15);
        let w = WoodKojouharov;
        assert_relative_eq!(w.step(0.5, 0.1).unwrap(), 0.5 + 0.75 * (1.0 - (-0.1f64).exp()), max_relative = 1e-15);
        assert_relative_eq!(w.step(3.0, 0.1).unwrap(), 9.0 / (3.0 - 3.0 * (-0.1f64).exp_m1()), max_relative = 1e-15);
        assert!((w.step(3.0, 0.1).unwrap() - 2.739_319).abs() < 1e-6);
        assert_eq!(w.step(2.0, 0.7).unwrap(), 2.0);
    }

    #[test]
    fn mickens_fixed_points() {
        for h in [0.01, 0.5, 5.0, 50.0] {
            assert_relative_eq!(MickensCubic.step(1.0, h).unwrap(), 1.0, max_relative = 1e-15);
            assert_eq!(MickensSine.step(1.0, h).unwrap(), 1.0 + rate_phi(PI, h) * PI.sin());
            assert_relative_eq!(
                MickensMonod::new(2.0).unwrap().step(1.0 / 3.0, h).unwrap(),
                1.0 / 3.0,
                max_relative = 1e-15
            );
        }
        assert!(matches!(MickensMonod::new(1.0), Err(NsfdError::ParameterOutOfRange { .. })));
    }

    #[test]
    fn powerlaw_fixed_point_and_specialisation() {
        let s = PowerLawNsfd::printed(2.0, 1.0, 3).unwrap();
        let y = s.equilibrium();
        assert_relative_eq!(s.step(y, 0.3).unwrap(), y, max_relative = 1e-15);
        // m = 3, a = b = 1
        let c = PowerLawNsfd::printed(1.0, 1.0, 3).unwrap();
        let phi = 1.0 - (-0.2f64).exp();
        let y = 0.7;
        let want = (2.0 * (1.0 + phi) * y + phi * y * y * y) / (2.0 + 3.0 * phi * y * y);
        assert_relative_eq!(c.step(y, 0.2).unwrap(), want, max_relative = 1e-14);
        assert!(PowerLawNsfd::printed(1.0, 1.0, 1).is_err());
    }

    #[test]
    fn nsfd_one_step_and_fixed_points() {
        let s = logistic_scheme("snsfd1");
        let y1 = s.step(0.5, 0.1).unwrap();
        let exact = 1.0 / (0.5 + 1.5 * (-0.2f64).exp());
        assert!((y1 - exact).abs() < 1e-3 * 0.1);
        assert!((y1 - 0.5786).abs() < 1e-4);
        for h in [1e-3, 1.25, 100.0] {
            assert_eq!(s.step(2.0, h).unwrap(), 2.0);
            assert_eq!(s.step(0.0, h).unwrap(), 0.0);
        }
        assert!(matches!(s.step(-0.1, 0.1), Err(NsfdError::NegativeState { .. })));
        assert!(matches!(s.step(0.1, 0.0), Err(NsfdError::NonPositiveStep { .. })));
    }

    #[test]
    fn nsfd_reduces_to_nonstandard_euler_when_f_minus_vanishes() {
        let p = problems::logistic().unwrap();
        let rep =
            Representation::manual(crate::model::scalar_fn(|y| 2.0 * y - y * y), crate::model::scalar_fn(|_| 0.0));
        let cfg =
            SchemeConfig::new("x", crate::model::Weights::new(0.0, 1.0).unwrap(), DenominatorSpec::constant_rate(3.0))
                .unwrap();
        let phi = 0.2 * phim(0.6);
        assert_relative_eq!(nsfd_step(&p, &rep, &cfg, 0.5, 0.2).unwrap(), 0.5 + phi * 0.75, max_relative = 1e-14);
    }

    #[test]
    fn integrate_to_one() {
        let s = logistic_scheme("snsfd1");
        let t = integrate(&*s, 0.5, 0.1, 1.0).unwrap();
        assert_eq!(t.len(), 11);
        assert!(t.is_uniform());
        assert!((t.final_state() - 1.422_453).abs() < 2e-3);
        let zero = integrate(&*s, 0.0, 0.1, 1.0).unwrap();
        assert!(zero.states.iter().all(|&y| y == 0.0));
        assert!(matches!(integrate(&*s, 0.5, 1e-9, 1.0), Err(NsfdError::StepCountOverflow { .. })));
    }

    #[test]
    fn large_step_nsfd_approaches_two_monotonically() {
        let s = logistic_scheme("snsfd1");
        let t = integrate(&*s, 0.5, 1.25, 50.0).unwrap();
        assert!(t.states.windows(2).all(|w| w[1] >= w[0] && w[1] <= 2.0));
        let e = integrate(&Euler { problem: problems::logistic().unwrap() }, 0.5, 1.25, 50.0).unwrap();
        assert!(e.states.iter().any(|&y| y > 2.0) && e.states.iter().skip(2).any(|&y| y < 2.0));
    }

    #[test]
    fn oracle_matches_exact() {
        let p = problems::logistic().unwrap();
        let t = reference_solution(&p, 0.5, 0.1, 1.0).unwrap();
        assert!((t.final_state() - 2.0 / (1.0 + 3.0 * (-2.0f64).exp())).abs() < 1e-10);
        let c = reference_solution(&p, 2.0, 0.5, 2.0).unwrap();
        assert!(c.states.iter().all(|&y| y == 2.0));
    }

    #[test]
    fn local_error_is_third_order() {
        for label in ["snsfd1", "snsfd2"] {
            let s = logistic_scheme(label);
            let p = problems::logistic().unwrap();
            for y in [0.3, 1.0, 3.5] {
                let hs: [f64; 3] = [1e-1, 1e-2, 1e-3];
                let pts: Vec<(f64, f64)> =
                    hs.iter().map(|&h| (h.ln(), (s.step(y, h).unwrap() - p.exact(h, y).unwrap()).abs().ln())).collect();
                let n = pts.len() as f64;
                let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
                let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
                let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>()
                    / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
                assert!((2.8..=3.2).contains(&slope), "{label} y={y} slope={slope}");
            }
        }
    }

    #[test]
    fn analytic_jacobian_at_equilibria() {
        let s = logistic_scheme("snsfd1");
        // phi(1.25, 2) = (e^{3.75} - 1) / 3
        let phi = ((3.75f64).exp() - 1.0) / 3.0;
        let want = 1.0 - 2.0 * phi / (1.0 + 2.5 * phi);
        assert_relative_eq!(s.jacobian_at(2.0, 1.25).unwrap(), want, max_relative = 1e-12);
        assert!((s.jacobian_at(2.0, 1.25).unwrap() - 0.2225).abs() < 1e-3);
        assert!(s.jacobian_at(0.0, 1.25).unwrap() > 1.0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn nsfd_iterates_stay_nonnegative(y0 in 0.0f64..10.0, h in 1e-3f64..100.0, which in 0usize..3) {
            let s = logistic_scheme(["snsfd1", "snsfd2", "snsfd3"][which]);
            let mut y = y0;
            for _ in 0..2000 {
                y = s.step(y, h).unwrap();
                prop_assert!(y >= 0.0);
            }
        }

        #[test]
        fn steps_are_deterministic(y in 0.0f64..10.0, h in 1e-4f64..50.0) {
            let s = logistic_scheme("snsfd2");
            prop_assert_eq!(s.step(y, h).unwrap().to_bits(), s.step(y, h).unwrap().to_bits());
        }

        #[test]
        fn fixed_points_are_equilibria(y in 0.0f64..10.0, h in 1e-3f64..100.0) {
            let p = problems::logistic().unwrap();
            let s = logistic_scheme("snsfd1");
            let g = s.step(y, h).unwrap();
            if (g - y).abs() < 1e-12 {
                prop_assert!(p.f(y).abs() <= 1e-6);
            }
        }

        #[test]
        fn one_step_consistency(y in 0.0f64..5.0, h in 1e-5f64..1e-2) {
            let p = problems::logistic().unwrap();
            let s = logistic_scheme("snsfd1");
            let d = (s.step(y, h).unwrap() - y - h * p.f(y)).abs();
            prop_assert!(d <= 50.0 * h * h * (1.0 + y * y * y));
        }
    }
}
