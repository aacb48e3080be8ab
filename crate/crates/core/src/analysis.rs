//! Errors at the final time, convergence-rate tables, positivity and
//! elementary-stability audits, and the denominator errata report.

use std::fmt::Write as _;

use crate::denominator::check_h_conditions;
use crate::error::{NsfdError, Result};
use crate::model::{ScalarProblem, Stability, Trajectory};
use crate::problems::{self, Params};
use crate::roots::bisect;
use crate::scalar::{integrate, reference_solution, StepMap};
use crate::system::{integrate_system_with, system_reference_solution, SystemProblem, SystemStepMap};

/// Errors below this are reported as exact and excluded from rate fits.
pub const EXACT_THRESHOLD: f64 = 1e-13;

/// What a computed trajectory is compared against.
#[derive(Debug, Clone, Copy)]
pub enum Reference<'a> {
    /// The problem's closed-form solution from `y0`.
    Exact { problem: &'a ScalarProblem, y0: f64 },
    /// A reference trajectory ending at the same time.
    Trajectory(&'a Trajectory),
}

fn same_time(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
}

/// `|y(T) - y_N|`.
pub fn error_at_final(traj: &Trajectory, reference: Reference<'_>) -> Result<f64> {
    let t = traj.final_time();
    let y_ref = match reference {
        Reference::Exact { problem, y0 } => problem
            .exact(t, y0)
            .ok_or_else(|| NsfdError::InvalidInput(format!("`{}` has no exact solution", problem.name())))?,
        Reference::Trajectory(r) => {
            if !same_time(r.final_time(), t) {
                return Err(NsfdError::GridMismatch(format!("final times differ: {} vs {}", t, r.final_time())));
            }
            r.final_state()
        }
    };
    Ok((traj.final_state() - y_ref).abs())
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateRow {
    pub h: f64,
    pub error: f64,
    /// Empty on the first row and next to exact rows.
    pub rate: Option<f64>,
    pub exact: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateTable {
    pub scheme_label: String,
    pub problem_name: String,
    pub t_end: f64,
    pub rows: Vec<RateRow>,
}

impl RateTable {
    /// Build rows from `(h, error)` pairs sorted by decreasing `h`.
    pub fn from_errors(
        scheme_label: impl Into<String>,
        problem_name: impl Into<String>,
        t_end: f64,
        pairs: &[(f64, f64)],
    ) -> Self {
        let mut rows: Vec<RateRow> = Vec::with_capacity(pairs.len());
        for (k, &(h, error)) in pairs.iter().enumerate() {
            let exact = error < EXACT_THRESHOLD;
            let rate = if k == 0 || exact || rows[k - 1].exact {
                None
            } else {
                let (h1, e1) = pairs[k - 1];
                Some((e1 / error).ln() / (h1 / h).ln())
            };
            rows.push(RateRow { h, error, rate, exact });
        }
        Self { scheme_label: scheme_label.into(), problem_name: problem_name.into(), t_end, rows }
    }

    /// Least-squares slope of `log(error)` against `log(h)` over non-exact
    /// rows; `None` with fewer than two such rows.
    pub fn fitted_order(&self) -> Option<f64> {
        let pts: Vec<(f64, f64)> = self.rows.iter().filter(|r| !r.exact).map(|r| (r.h.ln(), r.error.ln())).collect();
        if pts.len() < 2 {
            return None;
        }
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
        Some(sxy / sxx)
    }

    /// Every row was exact to machine precision.
    pub fn is_exact(&self) -> bool {
        self.rows.iter().all(|r| r.exact)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("h,error,rate\n");
        for r in &self.rows {
            let _ = writeln!(s, "{},{},{}", fmt_sig(r.h), fmt_sig(r.error), r.rate.map(fmt_sig).unwrap_or_default());
        }
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} on {} (T = {})\n", self.scheme_label, self.problem_name, self.t_end);
        let _ = writeln!(s, "{:>12}  {:>14}  {:>8}", "h", "error", "rate");
        for r in &self.rows {
            let err = if r.exact { format!("{} (exact)", fmt_sig(r.error)) } else { fmt_sig(r.error) };
            let _ = writeln!(
                s,
                "{:>12}  {:>14}  {:>8}",
                fmt_sig(r.h),
                err,
                r.rate.map(|v| format!("{v:.4}")).unwrap_or_default()
            );
        }
        match self.fitted_order() {
            Some(p) => {
                let _ = writeln!(s, "fitted order: {p:.4}");
            }
            None => s.push_str("fitted order: n/a\n"),
        }
        s
    }
}

/// Six significant digits, `.` as decimal separator.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let e = x.abs().log10().floor() as i32;
    if (-4..6).contains(&e) {
        let decimals = (5 - e).max(0) as usize;
        let s = format!("{x:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        format!("{x:.5e}")
    }
}

/// Which solution the rate table measures against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReferenceKind {
    /// Closed form if the problem has one, otherwise the oracle.
    Auto,
    /// Always the RK4 oracle.
    Oracle,
}

fn check_h_list(h_list: &[f64]) -> Result<()> {
    if h_list.len() < 2 {
        return Err(NsfdError::InvalidInput("need at least two step sizes".into()));
    }
    if h_list.iter().any(|h| !(*h > 0.0)) {
        return Err(NsfdError::NonPositiveStep { h: h_list.iter().copied().fold(f64::INFINITY, f64::min) });
    }
    if h_list.windows(2).any(|w| w[1] >= w[0]) {
        return Err(NsfdError::InvalidInput("step sizes must be strictly decreasing".into()));
    }
    Ok(())
}

/// Errors at `t_end` for each `h` and the observed rate
/// `log(e1 / e2) / log(h1 / h2)` between consecutive rows.
pub fn convergence_rates(
    problem: &ScalarProblem,
    step: &dyn StepMap,
    y0: f64,
    h_list: &[f64],
    t_end: f64,
    reference: ReferenceKind,
) -> Result<RateTable> {
    check_h_list(h_list)?;
    let oracle = if reference == ReferenceKind::Oracle || problem.exact_fn().is_none() {
        Some(reference_solution(problem, y0, h_list[0], t_end)?)
    } else {
        None
    };
    let mut pairs = Vec::with_capacity(h_list.len());
    for &h in h_list {
        let traj = integrate(step, y0, h, t_end)?;
        let r = match &oracle {
            Some(o) => Reference::Trajectory(o),
            None => Reference::Exact { problem, y0 },
        };
        pairs.push((h, error_at_final(&traj, r)?));
    }
    Ok(RateTable::from_errors(step.label(), problem.name(), t_end, &pairs))
}

/// Max-norm error at `t_end` against the system oracle, per `h`.
pub fn system_convergence_rates(
    sys: &SystemProblem,
    step: &dyn SystemStepMap,
    x0: &[f64],
    h_list: &[f64],
    t_end: f64,
) -> Result<RateTable> {
    check_h_list(h_list)?;
    let oracle = system_reference_solution(sys, x0, h_list[0], t_end)?;
    let mut pairs = Vec::with_capacity(h_list.len());
    for &h in h_list {
        let traj = integrate_system_with(step, sys, x0, h, t_end)?;
        if traj.nonfinite_at.is_some() || !same_time(traj.final_time(), oracle.final_time()) {
            return Err(NsfdError::GridMismatch(format!("run at h = {h} did not reach t = {t_end}")));
        }
        let err = traj.final_state().iter().zip(oracle.final_state()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        pairs.push((h, err));
    }
    Ok(RateTable::from_errors(step.label(), sys.name(), t_end, &pairs))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PositivityFailure {
    pub y0: f64,
    pub h: f64,
    pub step: usize,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PositivityReport {
    pub scheme: String,
    pub runs: usize,
    pub min_state: f64,
    pub negative_runs: usize,
    /// Runs that produced `inf`/`NaN`; counted separately from sign failures.
    pub nonfinite_runs: usize,
    pub errors: Vec<String>,
    pub first_failure: Option<PositivityFailure>,
}

impl PositivityReport {
    pub fn pass(&self) -> bool {
        self.negative_runs == 0 && self.errors.is_empty()
    }

    pub fn to_text(&self) -> String {
        let mut s = format!(
            "positivity {}: runs={} min={} negative_runs={} nonfinite_runs={} pass={}",
            self.scheme,
            self.runs,
            self.min_state,
            self.negative_runs,
            self.nonfinite_runs,
            self.pass()
        );
        if let Some(f) = &self.first_failure {
            let _ = write!(s, " first_failure=(y0={}, h={}, step={}, value={})", f.y0, f.h, f.step, f.value);
        }
        for e in &self.errors {
            let _ = write!(s, "\n  error: {e}");
        }
        s
    }
}

/// Iterate `step` for every `(y0, h)` combination; pass iff no iterate is
/// negative. Runs stop early at a negative or non-finite state.
pub fn positivity_audit(step: &dyn StepMap, y0_samples: &[f64], h_samples: &[f64], n_steps: usize) -> PositivityReport {
    let pairs: Vec<(f64, f64)> = y0_samples.iter().flat_map(|&y0| h_samples.iter().map(move |&h| (y0, h))).collect();
    positivity_audit_pairs(step, &pairs, n_steps)
}

pub fn positivity_audit_pairs(step: &dyn StepMap, pairs: &[(f64, f64)], n_steps: usize) -> PositivityReport {
    let mut rep = PositivityReport {
        scheme: step.label().to_string(),
        runs: 0,
        min_state: f64::INFINITY,
        negative_runs: 0,
        nonfinite_runs: 0,
        errors: Vec::new(),
        first_failure: None,
    };
    for &(y0, h) in pairs {
        rep.runs += 1;
        let mut y = y0;
        rep.min_state = rep.min_state.min(y);
        for k in 1..=n_steps {
            match step.step(y, h) {
                Ok(v) => y = v,
                Err(e) => {
                    rep.errors.push(format!("y0={y0} h={h} step={k}: {e}"));
                    break;
                }
            }
            if !y.is_finite() {
                rep.nonfinite_runs += 1;
                break;
            }
            rep.min_state = rep.min_state.min(y);
            if y < 0.0 {
                rep.negative_runs += 1;
                rep.first_failure.get_or_insert(PositivityFailure { y0, h, step: k, value: y });
                break;
            }
        }
    }
    rep
}

/// Componentwise positivity of a system scheme over initial states and
/// step sizes.
pub fn system_positivity_audit(
    step: &dyn SystemStepMap,
    sys: &SystemProblem,
    runs: &[(Vec<f64>, f64)],
    n_steps: usize,
) -> PositivityReport {
    let mut rep = PositivityReport {
        scheme: format!("{}/{}", sys.name(), step.label()),
        runs: 0,
        min_state: f64::INFINITY,
        negative_runs: 0,
        nonfinite_runs: 0,
        errors: Vec::new(),
        first_failure: None,
    };
    for (x0, h) in runs {
        rep.runs += 1;
        let mut x = x0.clone();
        for k in 1..=n_steps {
            match step.step(&x, *h) {
                Ok(v) => x = v,
                Err(e) => {
                    rep.errors.push(format!("h={h} step={k}: {e}"));
                    break;
                }
            }
            if x.iter().any(|v| !v.is_finite()) {
                rep.nonfinite_runs += 1;
                break;
            }
            let m = x.iter().copied().fold(f64::INFINITY, f64::min);
            rep.min_state = rep.min_state.min(m);
            if m < 0.0 {
                rep.negative_runs += 1;
                rep.first_failure.get_or_insert(PositivityFailure { y0: x0[0], h: *h, step: k, value: m });
                break;
            }
        }
    }
    rep
}

#[derive(Debug, Clone, PartialEq)]
pub struct JacobianCheck {
    pub y_star: f64,
    pub classification: Stability,
    pub h: f64,
    pub jacobian: f64,
    /// `|J| < 1` exactly when the equilibrium is stable.
    pub consistent: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport {
    pub scheme: String,
    pub problem: String,
    pub checks: Vec<JacobianCheck>,
    /// Fixed points of the map found away from every equilibrium, per `h`.
    pub spurious: Vec<(f64, f64)>,
    /// Non-hyperbolic equilibria excluded from the audit.
    pub skipped: Vec<f64>,
    pub errors: Vec<String>,
}

impl StabilityReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.consistent) && self.spurious.is_empty() && self.errors.is_empty()
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("elementary stability {} on {}: pass={}\n", self.scheme, self.problem, self.pass());
        for c in &self.checks {
            let _ = writeln!(
                s,
                "  y*={} ({}) h={} J={} consistent={}",
                c.y_star, c.classification, c.h, c.jacobian, c.consistent
            );
        }
        for (h, y) in &self.spurious {
            let _ = writeln!(s, "  spurious fixed point y={y} at h={h}");
        }
        for y in &self.skipped {
            let _ = writeln!(s, "  skipped non-hyperbolic y*={y}");
        }
        for e in &self.errors {
            let _ = writeln!(s, "  error: {e}");
        }
        s
    }
}

/// Points in the fixed-point scan.
pub const FIXED_POINT_SCAN: usize = 100_000;

/// Fixed points of `step` on the problem window: exact zeros and sign
/// changes of the displacement on a uniform scan, refined by bisection.
pub fn scan_fixed_points(problem: &ScalarProblem, step: &dyn StepMap, h: f64, n: usize) -> Result<Vec<f64>> {
    let d = problem.domain().nonneg();
    let disp = |y: f64| step.displacement(y, h).unwrap_or(f64::NAN);
    let mut out = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for k in 0..n {
        let y = if k == n - 1 { d.hi } else { d.lo + (d.hi - d.lo) * k as f64 / (n - 1) as f64 };
        let g = step.displacement(y, h)?;
        if g == 0.0 {
            out.push(y);
        } else if let Some((py, pg)) = prev {
            if pg != 0.0 && g.is_finite() && pg.is_finite() && (pg < 0.0) != (g < 0.0) {
                out.push(bisect(&disp, py, y));
            }
        }
        prev = Some((y, g));
    }
    out.dedup_by(|a, b| (*a - *b).abs() <= 1e-8);
    Ok(out)
}

/// Check `|J(y*)| < 1` iff `f'(y*) < 0` at every hyperbolic equilibrium and
/// every `h`, and scan for fixed points that are not equilibria (more than
/// `1e-6` from all of them).
pub fn elementary_stability_audit(problem: &ScalarProblem, step: &dyn StepMap, h_samples: &[f64]) -> StabilityReport {
    let mut rep = StabilityReport {
        scheme: step.label().to_string(),
        problem: problem.name().to_string(),
        checks: Vec::new(),
        spurious: Vec::new(),
        skipped: Vec::new(),
        errors: Vec::new(),
    };
    for e in problem.equilibria() {
        if e.classification == Stability::NonHyperbolic {
            rep.skipped.push(e.y_star);
        }
    }
    for &h in h_samples {
        for e in problem.equilibria().iter().filter(|e| e.classification != Stability::NonHyperbolic) {
            match step.jacobian_at(e.y_star, h) {
                Ok(j) => {
                    let consistent = (j.abs() < 1.0) == (e.classification == Stability::Stable);
                    rep.checks.push(JacobianCheck {
                        y_star: e.y_star,
                        classification: e.classification,
                        h,
                        jacobian: j,
                        consistent,
                    });
                }
                Err(err) => rep.errors.push(format!("J at y*={} h={h}: {err}", e.y_star)),
            }
        }
        match scan_fixed_points(problem, step, h, FIXED_POINT_SCAN) {
            Ok(fps) => {
                for y in fps {
                    if problem.equilibria().iter().all(|e| (e.y_star - y).abs() > 1e-6) {
                        rep.spurious.push((h, y));
                    }
                }
            }
            Err(err) => rep.errors.push(format!("fixed-point scan at h={h}: {err}")),
        }
    }
    rep
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrataEntry {
    pub topic: String,
    pub printed: String,
    pub derived: String,
    /// `(label, fitted order or None if exact/unavailable, note)`.
    pub measured: Vec<(String, Option<f64>, String)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrataReport {
    pub h_list: Vec<f64>,
    pub entries: Vec<ErrataEntry>,
}

impl ErrataReport {
    pub fn to_text(&self) -> String {
        let mut s = String::from("Denominator errata: printed forms against the derived rate\n");
        let _ = writeln!(s, "step sizes: {:?}", self.h_list);
        for e in &self.entries {
            let _ = writeln!(s, "\n[{}]", e.topic);
            let _ = writeln!(s, "  printed: {}", e.printed);
            let _ = writeln!(s, "  derived: {}", e.derived);
            for (label, order, note) in &e.measured {
                let o = order.map(|p| format!("{p:.4}")).unwrap_or_else(|| "n/a".into());
                let _ = writeln!(
                    s,
                    "  measured {label}: order {o}{}",
                    if note.is_empty() { String::new() } else { format!(" ({note})") }
                );
            }
        }
        s
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("topic,label,order,note\n");
        for e in &self.entries {
            for (label, order, note) in &e.measured {
                let _ = writeln!(
                    s,
                    "{},{},{},{}",
                    e.topic,
                    label,
                    order.map(fmt_sig).unwrap_or_default(),
                    note.replace(',', ";")
                );
            }
        }
        s
    }
}

/// Step sizes used by the errata measurements.
pub const ERRATA_H: [f64; 3] = [0.1, 0.01, 0.001];

fn measure(problem: &str, label: &str, params: &Params) -> Result<(String, Option<f64>, String)> {
    let p = problems::scalar_problem(problem, params)?;
    let s = problems::scalar_scheme(&p, label, params)?;
    let table = convergence_rates(&p, &*s.map, 0.5, &ERRATA_H, 1.0, ReferenceKind::Auto)?;
    let mut note = String::new();
    if table.is_exact() {
        note = "exact to machine precision".into();
    }
    if let Some(n) = &s.nsfd {
        let hc = check_h_conditions(&p, &n.rep, &n.config);
        if !hc.h3.pass {
            if !note.is_empty() {
                note.push_str("; ");
            }
            note.push_str("fails H3");
        }
    }
    Ok((label.to_string(), table.fitted_order(), note))
}

fn measure_system(name: &str, rate: SystemRate) -> Result<(String, Option<f64>, String)> {
    use crate::model::Weights;
    use crate::system::{SystemDenominator, SystemNsfd, SystemSchemeConfig, RATE_CLAMP};
    let sys = problems::system_problem(name, &Params::new())?;
    let w = Weights::new(0.0, 1.0)?;
    let (label, cfg) = match rate {
        SystemRate::Derived => ("nsfd-2", SystemSchemeConfig::second_order(&sys, w)?),
        SystemRate::Printed => {
            // printed condition read through the same kernel: lambda = -(grad F_i . F) + 2 beta m_i
            let dens = (0..sys.dim())
                .map(|i| {
                    let s = sys.clone();
                    SystemDenominator::Rate {
                        lambda: crate::system::vector_fn(move |x: &[f64]| {
                            let f = s.field(x);
                            let j = s.jacobian(x).expect("registered systems carry a Jacobian");
                            let jf: f64 = (0..f.len()).map(|k| j[(i, k)] * f[k]).sum();
                            let (_, m) = s.components()[i].affine_parts(i, x);
                            -jf + 2.0 * m
                        }),
                        clamp: Some(RATE_CLAMP),
                    }
                })
                .collect();
            ("nsfd-printed", SystemSchemeConfig::new("nsfd-printed", vec![w; sys.dim()], dens)?)
        }
    };
    let step = SystemNsfd { sys: sys.clone(), cfg };
    let x0 = problems::default_initial_state(&sys);
    let t = system_convergence_rates(&sys, &step, &x0, &SYSTEM_ERRATA_H, 10.0)?;
    Ok((format!("{name}/{label}"), t.fitted_order(), String::new()))
}

#[derive(Debug, Clone, Copy)]
enum SystemRate {
    Derived,
    Printed,
}

/// Step sizes for the system errata measurement.
pub const SYSTEM_ERRATA_H: [f64; 3] = [0.1, 0.01, 0.001];

/// Printed denominators against derived ones, with fitted orders measured
/// on `h = 0.1, 0.01, 0.001` (scalar: `y0 = 0.5`, `T = 1`; systems: default
/// start, `T = 10`).
pub fn errata_report() -> Result<ErrataReport> {
    let none = Params::new();
    let mut entries = Vec::new();
    let mut push = |topic: &str, printed: &str, derived: &str, measured: Vec<(String, Option<f64>, String)>| {
        entries.push(ErrataEntry { topic: topic.into(), printed: printed.into(), derived: derived.into(), measured });
    };
    push(
        "logistic snsfd1 (f+ = 2y, f- = -y, beta = 1.25)",
        "phi = (1 - e^{(2 + 0.5y)h}) / (2 + 0.5y), negative for every h > 0",
        "lambda = -2 - 0.5y, phi = (e^{(2 + 0.5y)h} - 1) / (2 + 0.5y)",
        vec![
            measure("logistic", "snsfd1", &none)?,
            ("snsfd1-printed".into(), None, "not run: phi < 0 violates positivity of the denominator".into()),
        ],
    );
    push(
        "logistic snsfd2 (f+ = 2y + y^2, f- = -2y, beta = 1.25)",
        "phi = (1 - e^{-h(2 + 3y)}) / (2 + 3y)",
        "lambda = -2 - 3y, phi = (e^{h(2 + 3y)} - 1) / (2 + 3y)",
        vec![measure("logistic", "snsfd2", &none)?, measure("logistic", "snsfd2-printed", &none)?],
    );
    push(
        "logistic snsfd3 (f+ = 2y, f- = -y, beta = 1)",
        "phi = (1 - e^{-2h}) / 2, listed as the exact scheme",
        "lambda = -2, phi = (e^{2h} - 1) / 2, which is the exact scheme",
        vec![measure("logistic", "snsfd3", &none)?, measure("logistic", "snsfd3-printed", &none)?],
    );
    push(
        "cubic (f+ = y, f- = -y^2, beta = 3/2); text gives f- = y^2 but its own scheme uses -y^2",
        "phi = 1 - e^{-h}",
        "lambda = -1, phi = e^h - 1",
        vec![
            measure("cubic", "nsfd", &none)?,
            measure("cubic", "nsfd-printed", &none)?,
            measure("cubic", "mickens", &none)?,
        ],
    );
    push(
        "cubic symmetric scheme with phi = (1 - e^{-2h}) / 2",
        "claimed second order",
        "needs d2phi/dh2(0) = 0 for its split (f- = 1/2 - 3y^2/2, beta = 1), has -2",
        vec![measure("cubic", "mickens", &none)?],
    );
    push(
        "power law y' = a y - b y^m (a = 2, b = 1, m = 3)",
        "phi = (1 - e^{-a h}) / a",
        "lambda = -a, phi = (e^{a h} - 1) / a",
        vec![measure("powerlaw", "nsfd", &none)?, measure("powerlaw", "nsfd-printed", &none)?],
    );
    push(
        "monod (mu = 2, f+ = (mu-1)y/(1+y), f- = -(mu+1)y/(1+y), beta = 1)",
        "R(y) = [(mu+1) + 4(mu+1)y + 3(mu+1)y^2] / (1+y)^2; text condition uses (mu+3) as the constant term",
        "lambda = -[(mu-1) + (mu+1)y^2] / (1+y)^2",
        vec![
            measure("monod", "nsfd", &none)?,
            measure("monod", "nsfd-printed", &none)?,
            measure("monod", "nsfd-text", &none)?,
            measure("monod", "mickens", &none)?,
        ],
    );
    push(
        "sine (f+ = sin(pi y) + pi y, f- = -pi, beta = 1)",
        "lambda = pi cos(pi y) - 2 pi",
        "lambda = -pi cos(pi y) - 2 pi",
        vec![
            measure("sine", "nsfd", &none)?,
            measure("sine", "nsfd-printed", &none)?,
            measure("sine", "mickens", &none)?,
        ],
    );
    push(
        "stability bound on lambda at stable equilibria",
        "lambda(y*) > 0 at every stable y*",
        "snsfd1 has lambda(2) = -3; the stability bound holds vacuously since 2 beta f-(2) - f'(2) = -3 <= 0",
        Vec::new(),
    );
    push(
        "systems, second-order condition on phi_i (alpha = 0, beta = 1, |h lambda| <= 1)",
        "d2phi_i/dh2(0) = grad F_i . F - 2 beta_i f_-",
        "lambda_i = -(grad F_i . F) / F_i + 2 beta_i m_i",
        vec![
            measure_system("lv", SystemRate::Derived)?,
            measure_system("lv", SystemRate::Printed)?,
            measure_system("sirs", SystemRate::Derived)?,
            measure_system("sirs", SystemRate::Printed)?,
        ],
    );
    Ok(ErrataReport { h_list: ERRATA_H.to_vec(), entries })
}
