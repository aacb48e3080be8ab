//! Sign splittings of a right-hand side.
//!
//! Two forms are produced:
//! * `f = f_plus + f_minus` with `f_plus >= 0 >= f_minus` (shift by an
//!   auxiliary function `g >= M`, where `M` bounds `|f|` up to the largest zero);
//! * `f = f_plus + y * f_minus`, obtained by splitting the quotient
//!   `f(y) / y` (after removing `f(0)` when it is positive).

use std::sync::Arc;

use crate::error::{NsfdError, Result};
use crate::model::{scalar_fn, Domain, Provenance, Representation, ScalarFn, ScalarProblem, SAMPLE_COUNT};
use crate::roots::{golden_extremum, linspace, scan_zeros};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailSign {
    Positive,
    Negative,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SplitBounds {
    /// Sorted roots on `[0, y_m]`.
    pub zeros: Vec<f64>,
    /// `min f` on `[0, y_m]`.
    pub lower: f64,
    /// `max f` on `[0, y_m]`.
    pub upper: f64,
    /// `max(|lower|, |upper|)`.
    pub magnitude: f64,
    pub tail_sign: TailSign,
}

impl SplitBounds {
    pub fn y_m(&self) -> f64 {
        self.zeros.last().copied().unwrap_or(0.0)
    }
}

const ZERO_DEDUP: f64 = 1e-8;
const QUOTIENT_GUARD: f64 = 1e-8;

fn zeros_of(f: &dyn Fn(f64) -> f64, domain: Domain) -> Vec<f64> {
    let d = domain.nonneg();
    scan_zeros(f, d.lo, d.hi, SAMPLE_COUNT, ZERO_DEDUP)
}

/// Roots of `f` on the nonnegative part of the problem window. An empty
/// list means `f` keeps one sign there.
pub fn find_zeros(problem: &ScalarProblem) -> Result<Vec<f64>> {
    let f = |y: f64| problem.f(y);
    Ok(zeros_of(&f, problem.domain()))
}

fn bounds_of(f: &dyn Fn(f64) -> f64, domain: Domain, zeros: &[f64]) -> Result<SplitBounds> {
    let Some(&y_m) = zeros.last() else {
        return Err(NsfdError::NoSignStructure);
    };
    let (lower, upper) = if y_m <= 0.0 {
        let v = f(0.0);
        (v, v)
    } else {
        let ys: Vec<f64> = linspace(0.0, y_m, SAMPLE_COUNT).collect();
        let vals: Vec<f64> = ys.iter().map(|&y| f(y)).collect();
        let argmin = (0..vals.len()).min_by(|&a, &b| vals[a].total_cmp(&vals[b])).unwrap();
        let argmax = (0..vals.len()).max_by(|&a, &b| vals[a].total_cmp(&vals[b])).unwrap();
        let bracket = |i: usize| (ys[i.saturating_sub(1)], ys[(i + 1).min(ys.len() - 1)]);
        let (a, b) = bracket(argmin);
        let lo = vals[argmin].min(golden_extremum(f, a, b, false));
        let (a, b) = bracket(argmax);
        let hi = vals[argmax].max(golden_extremum(f, a, b, true));
        (lo, hi)
    };

    let delta = 1e-3 * (1.0 + y_m);
    let first = y_m + delta;
    let span = if domain.hi - first > delta { domain.hi - first } else { 10.0 * delta };
    let sign_at = |y: f64| {
        let v = f(y);
        if v > 0.0 {
            Some(TailSign::Positive)
        } else if v < 0.0 {
            Some(TailSign::Negative)
        } else {
            None
        }
    };
    let tail_sign = sign_at(first).ok_or(NsfdError::AmbiguousTail { y_m })?;
    for k in 1..=10 {
        let y = first + span * k as f64 / 10.0;
        if sign_at(y) != Some(tail_sign) {
            return Err(NsfdError::AmbiguousTail { y_m });
        }
    }
    Ok(SplitBounds { zeros: zeros.to_vec(), lower, upper, magnitude: lower.abs().max(upper.abs()), tail_sign })
}

/// `min`, `max` and magnitude bound of `f` up to its largest zero, plus the
/// sign of `f` beyond it.
pub fn compute_bounds(problem: &ScalarProblem, zeros: &[f64]) -> Result<SplitBounds> {
    let f = |y: f64| problem.f(y);
    bounds_of(&f, problem.domain(), zeros)
}

fn split_with(f: ScalarFn, domain: Domain, bounds: &SplitBounds, g: Option<ScalarFn>) -> Result<(ScalarFn, ScalarFn)> {
    let m = bounds.magnitude;
    let g = g.unwrap_or_else(|| scalar_fn(move |_| m));
    for y in domain.nonneg().samples(SAMPLE_COUNT) {
        let gy = g(y);
        if !(gy >= m) {
            return Err(NsfdError::GNotInClass { m, y, g: gy });
        }
    }
    Ok(match bounds.tail_sign {
        TailSign::Positive => {
            let (f1, g1) = (f, g.clone());
            (Arc::new(move |y| f1(y) + g1(y)) as ScalarFn, Arc::new(move |y| -g(y)) as ScalarFn)
        }
        TailSign::Negative => {
            let g1 = g.clone();
            (g, Arc::new(move |y| f(y) - g1(y)) as ScalarFn)
        }
    })
}

/// `f = f_plus + f_minus` via the auxiliary function `g` (default: the
/// constant `M`). Returns `(f_plus, f_minus)`.
pub fn lemma1_split(
    problem: &ScalarProblem,
    bounds: &SplitBounds,
    g: Option<ScalarFn>,
) -> Result<(ScalarFn, ScalarFn)> {
    split_with(problem.f_fn().clone(), problem.domain(), bounds, g)
}

/// Additive split of an arbitrary function on a window, including the
/// zero-free case where `f` already has one sign.
fn additive_split(f: ScalarFn, domain: Domain) -> Result<(ScalarFn, ScalarFn)> {
    let zeros = zeros_of(&*f, domain);
    if zeros.is_empty() {
        let nonneg = domain.nonneg().samples(SAMPLE_COUNT).all(|y| f(y) >= 0.0);
        let zero = scalar_fn(|_| 0.0);
        return Ok(if nonneg { (f, zero) } else { (zero, f) });
    }
    let bounds = bounds_of(&*f, domain, &zeros)?;
    split_with(f, domain, &bounds, None)
}

/// Representation `f = f_plus + y * f_minus` for `f(0) >= 0`.
///
/// With `f(0) = 0` the quotient `f(y)/y` (continued by `f'(0)` at the
/// origin) is split additively and the positive part is multiplied back by
/// `y`. With `f(0) > 0` the same is done for `f - f(0)` and `f(0)` is added
/// to the positive part.
pub fn theorem1_split(problem: &ScalarProblem) -> Result<Representation> {
    let f0 = problem.f(0.0);
    if f0 < 0.0 {
        return Err(NsfdError::NegativeAtZero { value: f0 });
    }
    let f = problem.f_fn().clone();
    let slope0 = problem.df(0.0);
    let shift = if f0 > 0.0 { f0 } else { 0.0 };
    let quotient: ScalarFn = Arc::new(move |y| if y.abs() < QUOTIENT_GUARD { slope0 } else { (f(y) - shift) / y });
    let (q_plus, q_minus) = additive_split(quotient, problem.domain())?;
    let f_plus: ScalarFn = Arc::new(move |y| shift + y * q_plus(y));
    Ok(Representation { f_plus, f_minus: q_minus, provenance: Provenance::AutoTheorem1 })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RepresentationReport {
    pub samples: usize,
    /// `max(0, -f_plus)` over samples.
    pub plus_violation: f64,
    /// `max(0, f_minus)` over samples.
    pub minus_violation: f64,
    /// Largest scaled reconstruction residual
    /// `|f_plus + y f_minus - f| / max(1, |f|, |f_plus|, |y f_minus|)`.
    pub residual: f64,
    pub worst_y: f64,
    pub pass: bool,
}

pub const REPRESENTATION_TOL: f64 = 1e-10;

/// Sampled sign and reconstruction check of a representation.
pub fn validate_representation(problem: &ScalarProblem, rep: &Representation) -> RepresentationReport {
    let ys = problem.sign_samples();
    let mut r = RepresentationReport {
        samples: ys.len(),
        plus_violation: 0.0,
        minus_violation: 0.0,
        residual: 0.0,
        worst_y: f64::NAN,
        pass: false,
    };
    let mut worst = 0.0f64;
    for &y in &ys {
        let (p, m, f) = (rep.plus(y), rep.minus(y), problem.f(y));
        let pv = (-p).max(0.0);
        let mv = m.max(0.0);
        let scale = 1f64.max(f.abs()).max(p.abs()).max((y * m).abs());
        let res = (p + y * m - f).abs() / scale;
        let local = pv.max(mv).max(res);
        if local.is_nan() || local > worst {
            worst = if local.is_nan() { f64::INFINITY } else { local };
            r.worst_y = y;
        }
        r.plus_violation = r.plus_violation.max(if pv.is_nan() { f64::INFINITY } else { pv });
        r.minus_violation = r.minus_violation.max(if mv.is_nan() { f64::INFINITY } else { mv });
        r.residual = r.residual.max(if res.is_nan() { f64::INFINITY } else { res });
    }
    r.pass = r.plus_violation <= REPRESENTATION_TOL
        && r.minus_violation <= REPRESENTATION_TOL
        && r.residual <= REPRESENTATION_TOL;
    r
}
