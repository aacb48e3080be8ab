//! Named problems and schemes.
//!
//! Scalar problems: `logistic`, `cubic`, `sine`, `monod`, `powerlaw`.
//! Systems: `lv`, `sirs`. Parameters are passed as a string-keyed map and
//! fall back to the defaults listed on each constructor.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::DMatrix;

use crate::denominator::DenominatorSpec;
use crate::error::{NsfdError, Result};
use crate::model::{register_problem, scalar_fn, Domain, Representation, ScalarProblem, SchemeConfig, Weights};
use crate::scalar::{
    ClaimedOrder, Euler, ExactFlow, MickensCubic, MickensMonod, MickensSine, NsfdScheme, PowerLawNsfd, Rk2, Rk4,
    StepMap, WoodKojouharov,
};
use crate::splitting::theorem1_split;
use crate::system::{vector_fn, ComponentSplit, FieldFn, SystemProblem, SystemSchemeConfig, SystemStepMap};

pub const SCALAR_PROBLEMS: [&str; 5] = ["logistic", "cubic", "sine", "monod", "powerlaw"];
pub const SYSTEM_PROBLEMS: [&str; 2] = ["lv", "sirs"];

/// Seed used for the sign check of registered systems.
pub const SYSTEM_SIGN_SEED: u64 = 0x5eed;

pub type Params = BTreeMap<String, f64>;

/// Parse `k=v,k=v`.
pub fn parse_params(s: &str) -> Result<Params> {
    let mut out = Params::new();
    for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| NsfdError::InvalidInput(format!("parameter `{item}` is not key=value")))?;
        let v: f64 = v
            .trim()
            .parse()
            .map_err(|_| NsfdError::InvalidInput(format!("parameter `{k}` has non-numeric value `{v}`")))?;
        out.insert(k.trim().to_string(), v);
    }
    Ok(out)
}

fn param(params: &Params, key: &str, default: f64) -> f64 {
    params.get(key).copied().unwrap_or(default)
}

fn positive(name: &'static str, value: f64) -> Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(NsfdError::ParameterOutOfRange { name, value, reason: "must be positive" })
    }
}

/// `y' = 2y - y^2`.
pub fn logistic() -> Result<ScalarProblem> {
    let p = ScalarProblem::new(
        "logistic",
        scalar_fn(|y| 2.0 * y - y * y),
        scalar_fn(|y| 2.0 - 2.0 * y),
        Domain::new(0.0, 10.0)?,
    )
    .with_exact(Arc::new(|t, y0| 2.0 * y0 / (y0 + (2.0 - y0) * (-2.0 * t).exp())))
    .with_f0_nonneg(true);
    register_problem(p)
}

/// `y' = y - y^3`.
pub fn cubic() -> Result<ScalarProblem> {
    let p = ScalarProblem::new(
        "cubic",
        scalar_fn(|y| y - y * y * y),
        scalar_fn(|y| 1.0 - 3.0 * y * y),
        Domain::new(0.0, 10.0)?,
    )
    .with_exact(Arc::new(|t, y0| y0 / (y0 * y0 + (1.0 - y0 * y0) * (-2.0 * t).exp()).sqrt()))
    .with_f0_nonneg(true);
    register_problem(p)
}

fn sine_exact(t: f64, y0: f64) -> f64 {
    let n = y0.floor();
    let u0 = y0 - n;
    if u0 == 0.0 {
        return y0;
    }
    // on odd cells the flow runs backwards in u
    let dir = if n.rem_euclid(2.0) == 0.0 { 1.0 } else { -1.0 };
    n + 2.0 / PI * ((PI * u0 / 2.0).tan() * (dir * PI * t).exp()).atan()
}

/// `y' = sin(pi y)` on `[0, 3.5]`.
pub fn sine() -> Result<ScalarProblem> {
    let p = ScalarProblem::new(
        "sine",
        scalar_fn(|y| (PI * y).sin()),
        scalar_fn(|y| PI * (PI * y).cos()),
        Domain::new(0.0, 3.5)?,
    )
    .with_exact(Arc::new(sine_exact))
    .with_f0_nonneg(true);
    register_problem(p)
}

/// `y' = ((mu - 1) y - (mu + 1) y^2) / (1 + y)`, `mu > 1` (default 2).
pub fn monod(mu: f64) -> Result<ScalarProblem> {
    if !(mu > 1.0) {
        return Err(NsfdError::ParameterOutOfRange { name: "mu", value: mu, reason: "must exceed 1" });
    }
    let p = ScalarProblem::new(
        "monod",
        scalar_fn(move |y| ((mu - 1.0) * y - (mu + 1.0) * y * y) / (1.0 + y)),
        scalar_fn(move |y| ((mu - 1.0) - 2.0 * (mu + 1.0) * y - (mu + 1.0) * y * y) / ((1.0 + y) * (1.0 + y))),
        Domain::new(0.0, 10.0)?,
    )
    .with_f0_nonneg(true);
    register_problem(p)
}

/// `y' = a y - b y^m`, `a, b > 0`, integer `m >= 2` (defaults 2, 1, 3).
pub fn powerlaw(a: f64, b: f64, m: u32) -> Result<ScalarProblem> {
    positive("a", a)?;
    positive("b", b)?;
    if m < 2 {
        return Err(NsfdError::ParameterOutOfRange { name: "m", value: m as f64, reason: "must be >= 2" });
    }
    let mi = m as i32;
    let k = m as f64 - 1.0;
    let y_star = (a / b).powf(1.0 / k);
    let p = ScalarProblem::new(
        "powerlaw",
        scalar_fn(move |y| a * y - b * y.powi(mi)),
        scalar_fn(move |y| a - b * m as f64 * y.powi(mi - 1)),
        Domain::new(0.0, 10.0 * (1.0 + y_star))?,
    )
    // Bernoulli substitution u = y^{1-m}
    .with_exact(Arc::new(move |t, y0| {
        let u = b / a + (y0.powf(-k) - b / a) * (-k * a * t).exp();
        u.powf(-1.0 / k)
    }))
    .with_f0_nonneg(true);
    register_problem(p)
}

fn powerlaw_params(params: &Params) -> Result<(f64, f64, u32)> {
    let m = param(params, "m", 3.0);
    if m.fract() != 0.0 || !(2.0..=64.0).contains(&m) {
        return Err(NsfdError::ParameterOutOfRange { name: "m", value: m, reason: "must be an integer in [2, 64]" });
    }
    Ok((param(params, "a", 2.0), param(params, "b", 1.0), m as u32))
}

pub fn scalar_problem(name: &str, params: &Params) -> Result<ScalarProblem> {
    match name {
        "logistic" => logistic(),
        "cubic" => cubic(),
        "sine" => sine(),
        "monod" => monod(param(params, "mu", 2.0)),
        "powerlaw" => {
            let (a, b, m) = powerlaw_params(params)?;
            powerlaw(a, b, m)
        }
        _ => Err(NsfdError::Unknown { kind: "scalar problem", name: name.to_string() }),
    }
}

/// Where a scheme's denominator comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DenominatorSource {
    /// `lambda = -f' + 2 beta f_minus`.
    Derived,
    /// The closed form as printed in the source literature.
    Printed,
    /// A scheme without a nonlocal denominator (Runge-Kutta, exact flow).
    NotApplicable,
}

/// A scheme bound to a problem, with its NSFD ingredients when it has them.
#[derive(Clone)]
pub struct RegisteredScheme {
    pub label: String,
    pub source: DenominatorSource,
    pub map: Arc<dyn StepMap>,
    pub nsfd: Option<NsfdScheme>,
}

impl std::fmt::Debug for RegisteredScheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RegisteredScheme")
            .field("label", &self.label)
            .field("source", &self.source)
            .finish_non_exhaustive()
    }
}

impl RegisteredScheme {
    fn nsfd(s: NsfdScheme, source: DenominatorSource) -> Self {
        Self { label: s.config.label.clone(), source, map: Arc::new(s.clone()), nsfd: Some(s) }
    }

    fn other(map: impl StepMap + 'static, source: DenominatorSource) -> Self {
        Self { label: map.label().to_string(), source, map: Arc::new(map), nsfd: None }
    }

    /// Label, problem, representation and weights as a config, if NSFD.
    pub fn config(&self) -> Option<&SchemeConfig> {
        self.nsfd.as_ref().map(|s| &s.config)
    }
}

fn rep(
    plus: impl Fn(f64) -> f64 + Send + Sync + 'static,
    minus: impl Fn(f64) -> f64 + Send + Sync + 'static,
) -> Representation {
    Representation::manual(scalar_fn(plus), scalar_fn(minus))
}

fn derived(problem: &ScalarProblem, label: &str, r: Representation, w: Weights) -> Result<RegisteredScheme> {
    let den = DenominatorSpec::derived(problem, &r, w.beta);
    let cfg = SchemeConfig::new(label, w, den)?;
    Ok(RegisteredScheme::nsfd(NsfdScheme::new(problem.clone(), r, cfg), DenominatorSource::Derived))
}

fn printed(
    problem: &ScalarProblem,
    label: &str,
    r: Representation,
    w: Weights,
    den: DenominatorSpec,
) -> Result<RegisteredScheme> {
    let cfg = SchemeConfig::new(label, w, den)?;
    let s = NsfdScheme::new(problem.clone(), r, cfg).with_claimed(ClaimedOrder::First);
    Ok(RegisteredScheme::nsfd(s, DenominatorSource::Printed))
}

/// Representation used by the named NSFD scheme.
pub fn named_representation(problem: &str, label: &str, params: &Params) -> Result<(Representation, Weights)> {
    let w = |a: f64, b: f64| Weights::new(a, b);
    Ok(match (problem, label) {
        ("logistic", "snsfd1") => (rep(|y| 2.0 * y, |y| -y), w(-0.25, 1.25)?),
        ("logistic", "snsfd2") => (rep(|y| 2.0 * y + y * y, |y| -2.0 * y), w(-0.25, 1.25)?),
        ("logistic", "snsfd3") => (rep(|y| 2.0 * y, |y| -y), w(0.0, 1.0)?),
        ("cubic", "nsfd") => (rep(|y| y, |y| -y * y), w(-0.5, 1.5)?),
        ("sine", "nsfd") => (rep(|y| (PI * y).sin() + PI * y, |_| -PI), w(0.0, 1.0)?),
        ("monod", "nsfd") => {
            let mu = param(params, "mu", 2.0);
            (rep(move |y| (mu - 1.0) * y / (1.0 + y), move |y| -(mu + 1.0) * y / (1.0 + y)), w(0.0, 1.0)?)
        }
        ("powerlaw", "nsfd") => {
            let (a, b, m) = powerlaw_params(params)?;
            let mi = m as i32;
            (rep(move |y| a * y, move |y| -b * y.powi(mi - 1)), w(1.0 - m as f64 / 2.0, m as f64 / 2.0)?)
        }
        _ => {
            return Err(NsfdError::Unknown { kind: "representation", name: format!("{problem}/{label}") });
        }
    })
}

/// Scheme labels available for a scalar problem, NSFD schemes first.
pub fn scheme_labels(problem: &str) -> &'static [&'static str] {
    match problem {
        "logistic" => &[
            "snsfd1",
            "snsfd2",
            "snsfd3",
            "auto",
            "snsfd2-printed",
            "snsfd3-printed",
            "wood",
            "euler",
            "rk2",
            "rk4",
            "exact",
        ],
        "cubic" => &["nsfd", "auto", "nsfd-printed", "mickens", "euler", "rk2", "rk4", "exact"],
        "sine" => &["nsfd", "nsfd-printed", "mickens", "euler", "rk2", "rk4", "exact"],
        "monod" => &["nsfd", "auto", "nsfd-printed", "nsfd-text", "mickens", "euler", "rk2", "rk4"],
        "powerlaw" => &["nsfd", "auto", "nsfd-printed", "euler", "rk2", "rk4", "exact"],
        _ => &[],
    }
}

/// Labels whose denominators come from the derived rate.
pub fn derived_labels(problem: &str) -> Vec<&'static str> {
    scheme_labels(problem)
        .iter()
        .copied()
        .filter(|l| matches!(*l, "snsfd1" | "snsfd2" | "snsfd3" | "nsfd" | "auto"))
        .collect()
}

pub fn scalar_scheme(problem: &ScalarProblem, label: &str, params: &Params) -> Result<RegisteredScheme> {
    let name = problem.name().to_string();
    let pn = name.as_str();
    let na = DenominatorSource::NotApplicable;
    match label {
        "euler" => return Ok(RegisteredScheme::other(Euler { problem: problem.clone() }, na)),
        "rk2" => return Ok(RegisteredScheme::other(Rk2 { problem: problem.clone() }, na)),
        "rk4" => return Ok(RegisteredScheme::other(Rk4 { problem: problem.clone() }, na)),
        "exact" if problem.exact_fn().is_some() => {
            return Ok(RegisteredScheme::other(ExactFlow { problem: problem.clone() }, na))
        }
        "auto" if scheme_labels(pn).contains(&"auto") => {
            let r = theorem1_split(problem)?;
            return derived(problem, "auto", r, Weights::new(0.0, 1.0)?);
        }
        _ => {}
    }
    match (pn, label) {
        ("logistic", "snsfd1" | "snsfd2" | "snsfd3") | ("cubic" | "sine" | "monod" | "powerlaw", "nsfd") => {
            let (r, w) = named_representation(pn, label, params)?;
            derived(problem, label, r, w)
        }
        ("logistic", "snsfd2-printed") => {
            let (r, w) = named_representation(pn, "snsfd2", params)?;
            printed(problem, label, r, w, DenominatorSpec::custom(scalar_fn(|y| 2.0 + 3.0 * y)))
        }
        ("logistic", "snsfd3-printed") => {
            let (r, w) = named_representation(pn, "snsfd3", params)?;
            printed(problem, label, r, w, DenominatorSpec::constant_rate(2.0))
        }
        ("logistic", "wood") => Ok(RegisteredScheme::other(WoodKojouharov, DenominatorSource::Printed)),
        ("cubic", "nsfd-printed") => {
            let (r, w) = named_representation(pn, "nsfd", params)?;
            printed(problem, label, r, w, DenominatorSpec::constant_rate(1.0))
        }
        ("cubic", "mickens") => Ok(RegisteredScheme::other(MickensCubic, DenominatorSource::Printed)),
        ("sine", "nsfd-printed") => {
            let (r, w) = named_representation(pn, "nsfd", params)?;
            printed(problem, label, r, w, DenominatorSpec::custom(scalar_fn(|y| PI * (PI * y).cos() - 2.0 * PI)))
        }
        ("sine", "mickens") => Ok(RegisteredScheme::other(MickensSine, DenominatorSource::Printed)),
        ("monod", "nsfd-printed" | "nsfd-text") => {
            let mu = param(params, "mu", 2.0);
            let (r, w) = named_representation(pn, "nsfd", params)?;
            let c0 = if label == "nsfd-printed" { mu + 1.0 } else { mu + 3.0 };
            let rate =
                scalar_fn(move |y| (c0 + 4.0 * (mu + 1.0) * y + 3.0 * (mu + 1.0) * y * y) / ((1.0 + y) * (1.0 + y)));
            printed(problem, label, r, w, DenominatorSpec::custom(rate))
        }
        ("monod", "mickens") => {
            Ok(RegisteredScheme::other(MickensMonod::new(param(params, "mu", 2.0))?, DenominatorSource::Printed))
        }
        ("powerlaw", "nsfd-printed") => {
            let (a, b, m) = powerlaw_params(params)?;
            Ok(RegisteredScheme::other(PowerLawNsfd::printed(a, b, m)?, DenominatorSource::Printed))
        }
        _ => Err(NsfdError::Unknown { kind: "scheme", name: format!("{pn}/{label}") }),
    }
}

/// Lotka-Volterra `x' = a x - b x y`, `y' = -c y + e x y` (defaults all 1),
/// split as `x (a - b y)` and `y (e x - c)`.
pub fn lotka_volterra(a: f64, b: f64, c: f64, e: f64) -> Result<SystemProblem> {
    for (n, v) in [("a", a), ("b", b), ("c", c), ("e", e)] {
        positive(n, v)?;
    }
    let field: FieldFn = Arc::new(move |x: &[f64]| vec![a * x[0] - b * x[0] * x[1], -c * x[1] + e * x[0] * x[1]]);
    let (xs, ys) = (c / e, a / b);
    SystemProblem::new(
        "lv",
        field,
        vec![
            ComponentSplit::Product { plus: vector_fn(move |_| a), minus: vector_fn(move |x| b * x[1]) },
            ComponentSplit::Product { plus: vector_fn(move |x| e * x[0]), minus: vector_fn(move |_| c) },
        ],
        vec![(0.0, 5.0 * (1.0 + xs)), (0.0, 5.0 * (1.0 + ys))],
    )?
    .with_jacobian(Arc::new(move |x: &[f64]| {
        DMatrix::from_row_slice(2, 2, &[a - b * x[1], -b * x[0], e * x[1], e * x[0] - c])
    }))
    .with_diagnostic("invariant", vector_fn(move |x| e * x[0] - c * x[0].ln() + b * x[1] - a * x[1].ln()))
    .with_equilibria(vec![vec![0.0, 0.0], vec![xs, ys]])
    .validated(SYSTEM_SIGN_SEED)
}

/// SIRS `S' = -beta S I / N + mu R`, `I' = beta S I / N - gamma I`,
/// `R' = gamma I - mu R` (defaults 0.3, 0.1, 0.05, N = 1).
pub fn sirs(beta: f64, gamma: f64, mu: f64, n: f64) -> Result<SystemProblem> {
    for (k, v) in [("beta", beta), ("gamma", gamma), ("mu", mu), ("n", n)] {
        positive(k, v)?;
    }
    let bn = beta / n;
    let field: FieldFn = Arc::new(move |x: &[f64]| {
        let (s, i, r) = (x[0], x[1], x[2]);
        vec![-bn * s * i + mu * r, bn * s * i - gamma * i, gamma * i - mu * r]
    });
    let mut equilibria = vec![vec![n, 0.0, 0.0]];
    let s_star = gamma / bn;
    if s_star < n {
        let i_star = (n - s_star) / (1.0 + gamma / mu);
        equilibria.push(vec![s_star, i_star, gamma / mu * i_star]);
    }
    SystemProblem::new(
        "sirs",
        field,
        vec![
            ComponentSplit::Affine { plus: vector_fn(move |x| mu * x[2]), minus: vector_fn(move |x| -bn * x[1]) },
            ComponentSplit::Affine { plus: vector_fn(move |x| bn * x[0] * x[1]), minus: vector_fn(move |_| -gamma) },
            ComponentSplit::Affine { plus: vector_fn(move |x| gamma * x[1]), minus: vector_fn(move |_| -mu) },
        ],
        vec![(0.0, n); 3],
    )?
    .with_jacobian(Arc::new(move |x: &[f64]| {
        let (s, i) = (x[0], x[1]);
        DMatrix::from_row_slice(3, 3, &[-bn * i, -bn * s, mu, bn * i, bn * s - gamma, 0.0, 0.0, gamma, -mu])
    }))
    .with_diagnostic("population", vector_fn(|x| x[0] + x[1] + x[2]))
    .with_equilibria(equilibria)
    .with_neutral_modes(1)
    .validated(SYSTEM_SIGN_SEED)
}

pub fn system_problem(name: &str, params: &Params) -> Result<SystemProblem> {
    match name {
        "lv" => lotka_volterra(
            param(params, "a", 1.0),
            param(params, "b", 1.0),
            param(params, "c", 1.0),
            param(params, "e", 1.0),
        ),
        "sirs" => sirs(
            param(params, "beta", 0.3),
            param(params, "gamma", 0.1),
            param(params, "mu", 0.05),
            param(params, "n", 1.0),
        ),
        _ => Err(NsfdError::Unknown { kind: "system", name: name.to_string() }),
    }
}

/// Default initial state: `(2, 0.5)` for LV, `(0.99 N, 0.01 N, 0)` for SIRS.
pub fn default_initial_state(sys: &SystemProblem) -> Vec<f64> {
    match sys.name() {
        "lv" => vec![2.0, 0.5],
        "sirs" => {
            let n: f64 = sys.sample_box()[0].1;
            vec![0.99 * n, 0.01 * n, 0.0]
        }
        _ => vec![1.0; sys.dim()],
    }
}

pub const SYSTEM_SCHEMES: [&str; 3] = ["nsfd-2", "nsfd-plain", "euler"];

/// `nsfd-2` (second-order denominators), `nsfd-plain` (`phi = h`), `euler`.
/// NSFD weights are `alpha = 0`, `beta = 1` in every component.
pub fn system_scheme(sys: &SystemProblem, label: &str) -> Result<Arc<dyn SystemStepMap>> {
    use crate::system::{SystemEuler, SystemNsfd};
    let w = Weights::new(0.0, 1.0)?;
    Ok(match label {
        "nsfd-2" => Arc::new(SystemNsfd { sys: sys.clone(), cfg: SystemSchemeConfig::second_order(sys, w)? }),
        "nsfd-plain" => Arc::new(SystemNsfd { sys: sys.clone(), cfg: SystemSchemeConfig::plain(sys, w)? }),
        "euler" => Arc::new(SystemEuler { sys: sys.clone() }),
        _ => return Err(NsfdError::Unknown { kind: "system scheme", name: label.to_string() }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::splitting::validate_representation;

    #[test]
    fn all_scalar_problems_register() {
        for name in SCALAR_PROBLEMS {
            let p = scalar_problem(name, &Params::new()).unwrap();
            assert!(!p.equilibria().is_empty(), "{name}");
        }
    }

    #[test]
    fn equilibria_match_known_values() {
        let ys = |p: ScalarProblem| p.equilibria().iter().map(|e| e.y_star).collect::<Vec<_>>();
        assert_eq!(ys(logistic().unwrap()), vec![0.0, 2.0]);
        assert_eq!(ys(cubic().unwrap()), vec![0.0, 1.0]);
        let s = ys(sine().unwrap());
        assert_eq!(s.len(), 4);
        for (a, b) in s.iter().zip([0.0, 1.0, 2.0, 3.0]) {
            assert!((a - b).abs() < 1e-12);
        }
        let m = ys(monod(2.0).unwrap());
        assert!((m[1] - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn named_representations_validate() {
        for name in SCALAR_PROBLEMS {
            let p = scalar_problem(name, &Params::new()).unwrap();
            for label in derived_labels(name) {
                let s = scalar_scheme(&p, label, &Params::new()).unwrap();
                let n = s.nsfd.unwrap();
                assert!(validate_representation(&p, &n.rep).pass, "{name}/{label}");
            }
        }
    }

    #[test]
    fn every_listed_scheme_builds() {
        for name in SCALAR_PROBLEMS {
            let p = scalar_problem(name, &Params::new()).unwrap();
            for label in scheme_labels(name) {
                scalar_scheme(&p, label, &Params::new()).unwrap();
            }
        }
        assert!(matches!(scalar_scheme(&logistic().unwrap(), "nope", &Params::new()), Err(NsfdError::Unknown { .. })));
    }

    #[test]
    fn sine_exact_branches() {
        assert!((sine_exact(1.0, 0.5) - 2.0 / PI * PI.exp().atan()).abs() < 1e-15);
        assert!(sine_exact(5.0, 1.5) < 1.0 + 1e-6);
        assert!(sine_exact(5.0, 2.5) > 3.0 - 1e-6);
    }

    #[test]
    fn params_parse() {
        let p = parse_params("mu=3, a=0.5").unwrap();
        assert_eq!(p["mu"], 3.0);
        assert_eq!(p["a"], 0.5);
        assert!(parse_params("mu").is_err());
        assert!(parse_params("mu=x").is_err());
        assert!(monod(1.0).is_err());
    }

    #[test]
    fn systems_register_with_equilibria() {
        let lv = lotka_volterra(1.0, 1.0, 1.0, 1.0).unwrap();
        assert_eq!(lv.equilibria()[1], vec![1.0, 1.0]);
        let s = sirs(0.3, 0.1, 0.05, 1.0).unwrap();
        let e = &s.equilibria()[1];
        assert!((e[0] - 1.0 / 3.0).abs() < 1e-15);
        assert!(s.field(e).iter().all(|v| v.abs() < 1e-15));
    }
}
