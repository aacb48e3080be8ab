//! Componentwise NSFD schemes for positive systems `x' = F(x)` whose
//! components split as `F_i(x) = p_i(x) + x_i m_i(x)` with `p_i >= 0`,
//! `m_i <= 0`.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::denominator::phim;
use crate::error::{NsfdError, Result};
use crate::model::Weights;

pub type VectorFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
pub type FieldFn = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;
pub type JacobianFn = Arc<dyn Fn(&[f64]) -> DMatrix<f64> + Send + Sync>;

pub fn vector_fn(f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> VectorFn {
    Arc::new(f)
}

/// Below this `|F_i|` the second-order rate falls back to `lambda_i = 0`.
pub const FLAT_COMPONENT: f64 = 1e-10;

/// Bound on `|h lambda_i|` applied by the second-order denominators.
pub const RATE_CLAMP: f64 = 1.0;

/// Number of random sign-check samples drawn from the sample box.
pub const SIGN_SAMPLES: usize = 10_000;

/// How one component of the field is split.
#[derive(Clone)]
pub enum ComponentSplit {
    /// `F_i = x_i (plus - minus)` with `plus, minus >= 0`.
    Product { plus: VectorFn, minus: VectorFn },
    /// `F_i = plus + x_i minus` with `plus >= 0`, `minus <= 0`.
    Affine { plus: VectorFn, minus: VectorFn },
}

impl fmt::Debug for ComponentSplit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Product { .. } => f.write_str("Product"),
            Self::Affine { .. } => f.write_str("Affine"),
        }
    }
}

impl ComponentSplit {
    /// `(p_i, m_i)` in the affine convention.
    #[inline]
    pub fn affine_parts(&self, i: usize, x: &[f64]) -> (f64, f64) {
        match self {
            Self::Product { plus, minus } => (x[i] * plus(x), -minus(x)),
            Self::Affine { plus, minus } => (plus(x), minus(x)),
        }
    }
}

/// A named scalar diagnostic evaluated along trajectories.
#[derive(Clone)]
pub struct Diagnostic {
    pub name: String,
    pub eval: VectorFn,
}

#[derive(Clone)]
pub struct SystemProblem {
    name: String,
    dim: usize,
    field: FieldFn,
    components: Vec<ComponentSplit>,
    jacobian: Option<JacobianFn>,
    conserved: Vec<Diagnostic>,
    equilibria: Vec<Vec<f64>>,
    neutral_modes: usize,
    sample_box: Vec<(f64, f64)>,
}

impl fmt::Debug for SystemProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SystemProblem")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("components", &self.components)
            .field("equilibria", &self.equilibria)
            .finish_non_exhaustive()
    }
}

impl SystemProblem {
    pub fn new(
        name: impl Into<String>,
        field: FieldFn,
        components: Vec<ComponentSplit>,
        sample_box: Vec<(f64, f64)>,
    ) -> Result<Self> {
        let dim = components.len();
        if dim == 0 {
            return Err(NsfdError::InvalidInput("a system needs at least one component".into()));
        }
        if sample_box.len() != dim {
            return Err(NsfdError::DimensionMismatch { expected: dim, got: sample_box.len() });
        }
        if sample_box.iter().any(|&(lo, hi)| !(lo >= 0.0 && hi > lo && hi.is_finite())) {
            return Err(NsfdError::InvalidInput("sample box must be a nonempty nonnegative box".into()));
        }
        Ok(Self {
            name: name.into(),
            dim,
            field,
            components,
            jacobian: None,
            conserved: Vec::new(),
            equilibria: Vec::new(),
            neutral_modes: 0,
            sample_box,
        })
    }

    pub fn with_jacobian(mut self, jacobian: JacobianFn) -> Self {
        self.jacobian = Some(jacobian);
        self
    }

    pub fn with_diagnostic(mut self, name: impl Into<String>, eval: VectorFn) -> Self {
        self.conserved.push(Diagnostic { name: name.into(), eval });
        self
    }

    pub fn with_equilibria(mut self, equilibria: Vec<Vec<f64>>) -> Self {
        self.equilibria = equilibria;
        self
    }

    /// Number of Jacobian eigenvalues pinned at zero by a conservation law;
    /// the corresponding step-map eigenvalues sit at 1 for every step size.
    pub fn with_neutral_modes(mut self, n: usize) -> Self {
        self.neutral_modes = n;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn field(&self, x: &[f64]) -> Vec<f64> {
        (self.field)(x)
    }

    pub fn components(&self) -> &[ComponentSplit] {
        &self.components
    }

    pub fn jacobian(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        self.jacobian.as_ref().map(|j| j(x)).ok_or_else(|| NsfdError::JacobianMissing(self.name.clone()))
    }

    pub fn has_jacobian(&self) -> bool {
        self.jacobian.is_some()
    }

    pub fn diagnostics(&self) -> &[Diagnostic] {
        &self.conserved
    }

    pub fn equilibria(&self) -> &[Vec<f64>] {
        &self.equilibria
    }

    pub fn neutral_modes(&self) -> usize {
        self.neutral_modes
    }

    pub fn sample_box(&self) -> &[(f64, f64)] {
        &self.sample_box
    }

    fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() == self.dim {
            Ok(())
        } else {
            Err(NsfdError::DimensionMismatch { expected: self.dim, got: x.len() })
        }
    }

    /// Sample the box at `SIGN_SAMPLES` seeded random points plus its corners
    /// and check signs and reconstruction of every component split.
    pub fn check_signs(&self, seed: u64) -> SignReport {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut report = SignReport::default();
        let corners = 1usize << self.dim.min(10);
        let mut points: Vec<Vec<f64>> = (0..corners)
            .map(|mask| {
                self.sample_box
                    .iter()
                    .enumerate()
                    .map(|(i, &(lo, hi))| if mask >> i & 1 == 1 { hi } else { lo })
                    .collect()
            })
            .collect();
        points.extend(self.equilibria.iter().cloned());
        for _ in 0..SIGN_SAMPLES {
            points.push(self.sample_box.iter().map(|&(lo, hi)| rng.gen_range(lo..=hi)).collect());
        }
        for x in &points {
            let f = self.field(x);
            for (i, c) in self.components.iter().enumerate() {
                let (p, m) = c.affine_parts(i, x);
                report.plus_violation = report.plus_violation.max(-p);
                report.minus_violation = report.minus_violation.max(m);
                let res = (p + x[i] * m - f[i]).abs() / (1.0 + f[i].abs());
                report.reconstruction = report.reconstruction.max(res);
            }
        }
        report.samples = points.len();
        report
    }

    /// `check_signs` as a registration gate.
    pub fn validated(self, seed: u64) -> Result<Self> {
        let r = self.check_signs(seed);
        if r.pass() {
            Ok(self)
        } else {
            Err(NsfdError::InvalidRepresentation(format!("{}: {r}", self.name)))
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SignReport {
    pub samples: usize,
    pub plus_violation: f64,
    pub minus_violation: f64,
    pub reconstruction: f64,
}

impl SignReport {
    pub fn pass(&self) -> bool {
        self.plus_violation <= 1e-12 && self.minus_violation <= 1e-12 && self.reconstruction <= 1e-10
    }
}

impl fmt::Display for SignReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "samples={} max(-p)={:e} max(m)={:e} reconstruction={:e} pass={}",
            self.samples,
            self.plus_violation.max(0.0),
            self.minus_violation.max(0.0),
            self.reconstruction,
            self.pass()
        )
    }
}

/// Per-component denominator `phi_i(x, h)`.
#[derive(Clone)]
pub enum SystemDenominator {
    /// `(1 - e^{-R h}) / R`; `R = 0` gives `phi = h`.
    ConstantRate(f64),
    /// `h phim(h lambda(x))`, with `h lambda` clipped to `[-clamp, clamp]`.
    Rate { lambda: VectorFn, clamp: Option<f64> },
}

impl fmt::Debug for SystemDenominator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::ConstantRate(r) => write!(f, "ConstantRate({r})"),
            Self::Rate { clamp, .. } => write!(f, "Rate {{ clamp: {clamp:?} }}"),
        }
    }
}

impl SystemDenominator {
    pub fn plain() -> Self {
        Self::ConstantRate(0.0)
    }

    #[inline]
    pub fn phi(&self, x: &[f64], h: f64) -> f64 {
        match self {
            Self::ConstantRate(r) => h * phim(h * r),
            Self::Rate { lambda, clamp } => {
                let mut z = h * lambda(x);
                if let Some(c) = clamp {
                    z = z.clamp(-c, *c);
                }
                h * phim(z)
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct SystemSchemeConfig {
    pub label: String,
    pub weights: Vec<Weights>,
    pub denominators: Vec<SystemDenominator>,
}

impl SystemSchemeConfig {
    pub fn new(label: impl Into<String>, weights: Vec<Weights>, denominators: Vec<SystemDenominator>) -> Result<Self> {
        if weights.len() != denominators.len() {
            return Err(NsfdError::DimensionMismatch { expected: weights.len(), got: denominators.len() });
        }
        if let Some(w) = weights.iter().find(|w| !w.is_valid()) {
            return Err(NsfdError::InvalidWeights { alpha: w.alpha, beta: w.beta });
        }
        Ok(Self { label: label.into(), weights, denominators })
    }

    /// Same weights everywhere and `phi_i = h`.
    pub fn plain(sys: &SystemProblem, weights: Weights) -> Result<Self> {
        Self::new("nsfd-plain", vec![weights; sys.dim()], vec![SystemDenominator::plain(); sys.dim()])
    }

    /// Same weights everywhere with the second-order denominators.
    pub fn second_order(sys: &SystemProblem, weights: Weights) -> Result<Self> {
        let weights = vec![weights; sys.dim()];
        let dens = second_order_denominators(sys, &weights)?;
        Self::new("nsfd-2", weights, dens)
    }

    fn check_dim(&self, sys: &SystemProblem) -> Result<()> {
        if self.weights.len() == sys.dim() {
            Ok(())
        } else {
            Err(NsfdError::DimensionMismatch { expected: sys.dim(), got: self.weights.len() })
        }
    }
}

/// One explicit step; every `phi_i` and split term is evaluated at the old
/// state. Components with `F_i(x) = 0` are returned unchanged.
pub fn system_nsfd_step(sys: &SystemProblem, cfg: &SystemSchemeConfig, x: &[f64], h: f64) -> Result<Vec<f64>> {
    if !(h > 0.0) {
        return Err(NsfdError::NonPositiveStep { h });
    }
    sys.check_dim(x)?;
    cfg.check_dim(sys)?;
    if let Some(&y) = x.iter().find(|v| !(**v >= 0.0)) {
        return Err(NsfdError::NegativeState { y });
    }
    let f = sys.field(x);
    let mut out = Vec::with_capacity(sys.dim());
    for (i, c) in sys.components().iter().enumerate() {
        if f[i] == 0.0 {
            out.push(x[i]);
            continue;
        }
        let w = cfg.weights[i];
        let (p, m) = c.affine_parts(i, x);
        let r = 1.0 / cfg.denominators[i].phi(x, h);
        out.push((r * x[i] + p + w.alpha * x[i] * m) / (r - w.beta * m));
    }
    Ok(out)
}

/// Denominators matching the second-order Taylor coefficient of the flow:
///
/// ```text
/// lambda_i(x) = -(grad F_i . F)(x) / F_i(x) + 2 beta_i m_i(x)
/// ```
///
/// with `lambda_i = 0` where `|F_i| <= FLAT_COMPONENT` and `|h lambda_i|`
/// clipped to `RATE_CLAMP`. In one dimension this is the scalar rate
/// `-f' + 2 beta f_minus`.
pub fn second_order_denominators(sys: &SystemProblem, weights: &[Weights]) -> Result<Vec<SystemDenominator>> {
    if !sys.has_jacobian() {
        return Err(NsfdError::JacobianMissing(sys.name().to_string()));
    }
    if weights.len() != sys.dim() {
        return Err(NsfdError::DimensionMismatch { expected: sys.dim(), got: weights.len() });
    }
    let dens = (0..sys.dim())
        .map(|i| {
            let s = sys.clone();
            let beta = weights[i].beta;
            let lambda = vector_fn(move |x: &[f64]| {
                let f = s.field(x);
                if f[i].abs() <= FLAT_COMPONENT {
                    return 0.0;
                }
                let jac = s.jacobian(x).expect("checked above");
                let jf: f64 = (0..f.len()).map(|j| jac[(i, j)] * f[j]).sum();
                let (_, m) = s.components()[i].affine_parts(i, x);
                -jf / f[i] + 2.0 * beta * m
            });
            SystemDenominator::Rate { lambda, clamp: Some(RATE_CLAMP) }
        })
        .collect();
    Ok(dens)
}

/// A one-step map on `R^dim`.
pub trait SystemStepMap: Send + Sync {
    fn label(&self) -> &str;
    fn step(&self, x: &[f64], h: f64) -> Result<Vec<f64>>;
}

#[derive(Debug, Clone)]
pub struct SystemNsfd {
    pub sys: SystemProblem,
    pub cfg: SystemSchemeConfig,
}

impl SystemStepMap for SystemNsfd {
    fn label(&self) -> &str {
        &self.cfg.label
    }

    fn step(&self, x: &[f64], h: f64) -> Result<Vec<f64>> {
        system_nsfd_step(&self.sys, &self.cfg, x, h)
    }
}

#[derive(Debug, Clone)]
pub struct SystemEuler {
    pub sys: SystemProblem,
}

impl SystemStepMap for SystemEuler {
    fn label(&self) -> &str {
        "euler"
    }

    fn step(&self, x: &[f64], h: f64) -> Result<Vec<f64>> {
        if !(h > 0.0) {
            return Err(NsfdError::NonPositiveStep { h });
        }
        self.sys.check_dim(x)?;
        Ok(x.iter().zip(self.sys.field(x)).map(|(a, f)| a + h * f).collect())
    }
}

#[derive(Debug, Clone)]
pub struct SystemTrajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    /// One column per problem diagnostic, aligned with `states`.
    pub diagnostics: Vec<Vec<f64>>,
    pub scheme_label: String,
    pub problem_name: String,
    pub h: f64,
    /// Steps at which some component went negative.
    pub negative_at: Vec<usize>,
    /// First step producing a non-finite component; integration stops there.
    pub nonfinite_at: Option<usize>,
}

impl SystemTrajectory {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn final_state(&self) -> &[f64] {
        self.states.last().map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn final_time(&self) -> f64 {
        self.times.last().copied().unwrap_or(0.0)
    }

    pub fn min_component(&self) -> f64 {
        self.states.iter().flatten().copied().fold(f64::INFINITY, f64::min)
    }
}

pub fn integrate_system_with(
    step: &dyn SystemStepMap,
    sys: &SystemProblem,
    x0: &[f64],
    h: f64,
    t_end: f64,
) -> Result<SystemTrajectory> {
    if !(h > 0.0) {
        return Err(NsfdError::NonPositiveStep { h });
    }
    sys.check_dim(x0)?;
    let n = crate::scalar::step_count(h, t_end)?;
    let diag = |x: &[f64]| sys.diagnostics().iter().map(|d| (d.eval)(x)).collect::<Vec<_>>();
    let mut traj = SystemTrajectory {
        times: vec![0.0],
        states: vec![x0.to_vec()],
        diagnostics: vec![diag(x0)],
        scheme_label: step.label().to_string(),
        problem_name: sys.name().to_string(),
        h,
        negative_at: Vec::new(),
        nonfinite_at: None,
    };
    let mut x = x0.to_vec();
    for k in 1..=n {
        x = step.step(&x, h)?;
        if x.iter().any(|v| !v.is_finite()) {
            log::warn!("{}: non-finite state at step {k} (h = {h})", sys.name());
            traj.nonfinite_at = Some(k);
            break;
        }
        if x.iter().any(|&v| v < 0.0) {
            traj.negative_at.push(k);
        }
        traj.times.push(k as f64 * h);
        traj.diagnostics.push(diag(&x));
        traj.states.push(x.clone());
    }
    Ok(traj)
}

pub fn integrate_system(
    sys: &SystemProblem,
    cfg: &SystemSchemeConfig,
    x0: &[f64],
    h: f64,
    t_end: f64,
) -> Result<SystemTrajectory> {
    let step = SystemNsfd { sys: sys.clone(), cfg: cfg.clone() };
    integrate_system_with(&step, sys, x0, h, t_end)
}

fn rk4_vec(sys: &SystemProblem, x: &[f64], h: f64) -> Vec<f64> {
    let axpy = |a: &[f64], s: f64, b: &[f64]| a.iter().zip(b).map(|(u, v)| u + s * v).collect::<Vec<_>>();
    let k1 = sys.field(x);
    let k2 = sys.field(&axpy(x, 0.5 * h, &k1));
    let k3 = sys.field(&axpy(x, 0.5 * h, &k2));
    let k4 = sys.field(&axpy(x, h, &k3));
    (0..x.len()).map(|i| x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])).collect()
}

/// RK4 at `h_out / 1000`, sampled on the `h_out` grid.
pub fn system_reference_solution(sys: &SystemProblem, x0: &[f64], h_out: f64, t_end: f64) -> Result<SystemTrajectory> {
    struct Oracle<'a>(&'a SystemProblem);
    impl SystemStepMap for Oracle<'_> {
        fn label(&self) -> &str {
            "oracle-rk4"
        }
        fn step(&self, x: &[f64], h: f64) -> Result<Vec<f64>> {
            let hi = h / crate::scalar::ORACLE_SUBSTEPS as f64;
            let mut x = x.to_vec();
            for _ in 0..crate::scalar::ORACLE_SUBSTEPS {
                x = rk4_vec(self.0, &x, hi);
            }
            Ok(x)
        }
    }
    integrate_system_with(&Oracle(sys), sys, x0, h_out, t_end)
}

/// `dG/dx` of the NSFD step map at an equilibrium `x*`:
/// `I + diag(phi_i / (1 - phi_i beta_i m_i)) J_F(x*)`.
pub fn equilibrium_step_jacobian(
    sys: &SystemProblem,
    cfg: &SystemSchemeConfig,
    x_star: &[f64],
    h: f64,
) -> Result<DMatrix<f64>> {
    sys.check_dim(x_star)?;
    cfg.check_dim(sys)?;
    let jf = sys.jacobian(x_star)?;
    let n = sys.dim();
    let scale = DVector::from_iterator(
        n,
        (0..n).map(|i| {
            let phi = cfg.denominators[i].phi(x_star, h);
            let (_, m) = sys.components()[i].affine_parts(i, x_star);
            1.0 / (1.0 / phi - cfg.weights[i].beta * m)
        }),
    );
    Ok(DMatrix::identity(n, n) + DMatrix::from_diagonal(&scale) * jf)
}

/// Moduli of the eigenvalues of `m`, dropping the `neutral` ones closest to 1.
pub fn transverse_spectral_radius(m: &DMatrix<f64>, neutral: usize) -> f64 {
    let eig = m.complex_eigenvalues();
    let mut ev: Vec<_> = eig.iter().copied().collect();
    ev.sort_by(|a, b| (a - 1.0).norm().total_cmp(&(b - 1.0).norm()));
    ev.iter().skip(neutral).map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn spectral_radius(m: &DMatrix<f64>) -> f64 {
    transverse_spectral_radius(m, 0)
}

/// Stability thresholds for constant denominators at an equilibrium.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityThresholds {
    /// Largest common `phi` (all components equal) below which the transverse
    /// spectral radius stays under 1; `None` if stable up to the scan limit.
    pub uniform: Option<f64>,
    /// Per-component thresholds with the other `phi_j` held at `reference`.
    pub per_component: Vec<Option<f64>>,
    pub reference: f64,
    pub scan_limit: f64,
}

/// Scan `phi` on a log grid up to `scan_limit`, then bisect the first
/// crossing of `rho = 1`.
pub fn stability_thresholds(
    sys: &SystemProblem,
    weights: &[Weights],
    x_star: &[f64],
    scan_limit: f64,
) -> Result<StabilityThresholds> {
    let n = sys.dim();
    if weights.len() != n {
        return Err(NsfdError::DimensionMismatch { expected: n, got: weights.len() });
    }
    let reference = 1e-3;
    let rho = |phis: &[f64]| -> Result<f64> {
        let cfg = SystemSchemeConfig::new(
            "threshold-probe",
            weights.to_vec(),
            phis.iter().map(|_| SystemDenominator::plain()).collect(),
        )?;
        let jf = sys.jacobian(x_star)?;
        let scale = DVector::from_iterator(
            n,
            (0..n).map(|i| {
                let (_, m) = sys.components()[i].affine_parts(i, x_star);
                1.0 / (1.0 / phis[i] - cfg.weights[i].beta * m)
            }),
        );
        let j = DMatrix::identity(n, n) + DMatrix::from_diagonal(&scale) * jf;
        Ok(transverse_spectral_radius(&j, sys.neutral_modes()))
    };
    let search = |make: &dyn Fn(f64) -> Vec<f64>| -> Result<Option<f64>> {
        let grid: Vec<f64> = (0..=400).map(|k| 1e-4 * (scan_limit / 1e-4).powf(k as f64 / 400.0)).collect();
        let mut prev = grid[0];
        if rho(&make(prev))? >= 1.0 {
            return Ok(Some(0.0));
        }
        for &p in &grid[1..] {
            if rho(&make(p))? >= 1.0 {
                let (mut a, mut b) = (prev, p);
                for _ in 0..100 {
                    let mid = 0.5 * (a + b);
                    if rho(&make(mid))? < 1.0 {
                        a = mid;
                    } else {
                        b = mid;
                    }
                }
                return Ok(Some(a));
            }
            prev = p;
        }
        Ok(None)
    };
    let uniform = search(&|p| vec![p; n])?;
    let per_component = (0..n)
        .map(|i| {
            search(&|p| {
                let mut v = vec![reference; n];
                v[i] = p;
                v
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(StabilityThresholds { uniform, per_component, reference, scan_limit })
}
