use std::fmt::Write as _;
use std::path::Path;

use anyhow::{bail, Context, Result};
use log::{info, warn};
use nsfd_core::analysis::{
    convergence_rates, elementary_stability_audit, errata_report, positivity_audit_pairs, system_convergence_rates,
    system_positivity_audit, ReferenceKind,
};
use nsfd_core::experiments::{self, TABLE2_H};
use nsfd_core::problems::{
    default_initial_state, derived_labels, named_representation, scalar_problem, scalar_scheme, scheme_labels,
    system_problem, system_scheme, SCALAR_PROBLEMS, SYSTEM_PROBLEMS,
};
use nsfd_core::splitting::{theorem1_split, validate_representation};
use nsfd_core::system::{integrate_system_with, SystemNsfd, SystemSchemeConfig};
use nsfd_core::{
    check_h_conditions, integrate, DenominatorSpec, NsfdScheme, Representation, ScalarProblem, SchemeConfig, StepMap,
    Weights,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::settings::Settings;

const AUDIT_H: [f64; 4] = [0.1, 1.25, 10.0, 100.0];
const DEFAULT_H_LIST: [f64; 3] = [0.1, 0.01, 0.001];

fn emit(out: Option<&Path>, content: &str) -> Result<()> {
    match out {
        Some(p) => {
            std::fs::write(p, content).with_context(|| format!("writing {}", p.display()))?;
            info!("wrote {}", p.display());
        }
        None => print!("{content}"),
    }
    Ok(())
}

fn is_system(name: &str) -> bool {
    SYSTEM_PROBLEMS.contains(&name)
}

fn default_scheme(problem: &str) -> &'static str {
    if is_system(problem) {
        "nsfd-2"
    } else {
        scheme_labels(problem).first().copied().unwrap_or("nsfd")
    }
}

/// Representation and config for `check`/`audit`, honouring a beta override.
fn scheme_parts(p: &ScalarProblem, label: &str, s: &Settings) -> Result<(Representation, SchemeConfig)> {
    let reg = scalar_scheme(p, label, &s.params)?;
    let (rep, cfg) = match (&reg.nsfd, label) {
        (Some(n), _) => (n.rep.clone(), n.config.clone()),
        (None, "wood") => {
            let (rep, _) = named_representation("logistic", "snsfd1", &s.params)?;
            let w = Weights::new_unchecked(1.0, 0.0);
            (rep, SchemeConfig::new_unchecked("wood", w, DenominatorSpec::constant_rate(1.0)))
        }
        (None, _) => bail!("scheme `{label}` has no NSFD denominator to check"),
    };
    Ok(match s.beta {
        Some(beta) => {
            let w = Weights::new_unchecked(1.0 - beta, beta);
            let den = DenominatorSpec::derived(p, &rep, beta);
            let cfg = SchemeConfig::new_unchecked(format!("{}[beta={beta}]", cfg.label), w, den);
            (rep, cfg)
        }
        None => (rep, cfg),
    })
}

pub fn split(s: &Settings) -> Result<bool> {
    let name = s.problem()?;
    let mut text = String::new();
    let mut csv = String::from("problem,representation,samples,plus_violation,minus_violation,residual,pass\n");
    let mut pass = true;
    if is_system(name) {
        let sys = system_problem(name, &s.params)?;
        let r = sys.check_signs(s.seed);
        pass &= r.pass();
        let _ = writeln!(text, "{name}: componentwise sign check {r}");
        let _ = writeln!(
            csv,
            "{name},componentwise,{},{:e},{:e},{:e},{}",
            r.samples,
            r.plus_violation.max(0.0),
            r.minus_violation.max(0.0),
            r.reconstruction,
            r.pass()
        );
        print!("{text}");
        if s.out.is_some() {
            emit(s.out.as_deref(), &csv)?;
        }
        return Ok(pass);
    }
    let p = scalar_problem(name, &s.params)?;
    let mut reps: Vec<(String, Representation)> = vec![("auto".into(), theorem1_split(&p)?)];
    for label in derived_labels(name) {
        if let Ok((r, _)) = named_representation(name, label, &s.params) {
            reps.push((label.to_string(), r));
        }
    }
    let d = p.domain();
    let _ = writeln!(
        text,
        "{name}: domain [{}, {}], equilibria {:?}",
        d.lo,
        d.hi,
        p.equilibria().iter().map(|e| e.y_star).collect::<Vec<_>>()
    );
    for (label, rep) in &reps {
        let r = validate_representation(&p, rep);
        pass &= r.pass;
        let _ = writeln!(
            text,
            "  {label}: samples={} max(-f_plus)={:e} max(f_minus)={:e} residual={:e} pass={}",
            r.samples, r.plus_violation, r.minus_violation, r.residual, r.pass
        );
        let _ = writeln!(
            csv,
            "{name},{label},{},{:e},{:e},{:e},{}",
            r.samples, r.plus_violation, r.minus_violation, r.residual, r.pass
        );
    }
    let auto = &reps[0].1;
    let _ = writeln!(text, "  auto split samples (y, f, f_plus, f_minus):");
    for k in 0..=5 {
        let y = d.lo + (d.hi - d.lo) * k as f64 / 5.0;
        let _ = writeln!(text, "    {y:>10.4} {:>14.6e} {:>14.6e} {:>14.6e}", p.f(y), auto.plus(y), auto.minus(y));
    }
    print!("{text}");
    if s.out.is_some() {
        emit(s.out.as_deref(), &csv)?;
    }
    Ok(pass)
}

pub fn check(s: &Settings) -> Result<bool> {
    let name = s.problem()?;
    if is_system(name) {
        bail!("`check` applies to scalar problems; use `audit` for systems");
    }
    let p = scalar_problem(name, &s.params)?;
    let label = s.scheme.as_deref().unwrap_or(default_scheme(name));
    let (rep, cfg) = scheme_parts(&p, label, s)?;
    let r = check_h_conditions(&p, &rep, &cfg);
    print!("{}", r.to_text());
    match s.out.as_deref() {
        Some(path) => emit(Some(path), &r.to_csv())?,
        None => print!("\n{}", r.to_csv()),
    }
    Ok(r.all_pass())
}

pub fn run(s: &Settings) -> Result<bool> {
    let name = s.problem()?;
    if is_system(name) {
        bail!("`{name}` is a system; use `run-sys`");
    }
    let p = scalar_problem(name, &s.params)?;
    let label = s.scheme.as_deref().unwrap_or(default_scheme(name));
    let reg = scalar_scheme(&p, label, &s.params)?;
    let y0 = s.y0.unwrap_or(0.5);
    let traj = integrate(&*reg.map, y0, s.h.unwrap_or(0.1), s.t_end.unwrap_or(1.0))?;
    let mut csv = String::from("t,y,y_exact,abs_error\n");
    for (t, y) in traj.times.iter().zip(&traj.states) {
        match p.exact(*t, y0) {
            Some(e) => {
                let _ = writeln!(csv, "{t},{y},{e},{}", (y - e).abs());
            }
            None => {
                let _ = writeln!(csv, "{t},{y},,");
            }
        }
    }
    if !traj.negative_at.is_empty() {
        warn!("{label}: negative iterate at step {}", traj.negative_at[0]);
    }
    emit(s.out.as_deref(), &csv)?;
    Ok(true)
}

pub fn run_sys(s: &Settings) -> Result<bool> {
    let name = s.problem()?;
    let sys = system_problem(name, &s.params)?;
    let label = s.scheme.as_deref().unwrap_or("nsfd-2");
    let step = system_scheme(&sys, label)?;
    let x0 = s.x0.clone().unwrap_or_else(|| default_initial_state(&sys));
    let traj = integrate_system_with(&*step, &sys, &x0, s.h.unwrap_or(0.1), s.t_end.unwrap_or(10.0))?;
    let mut csv = String::from("t");
    for i in 1..=sys.dim() {
        let _ = write!(csv, ",x_{i}");
    }
    csv.push('\n');
    for (t, x) in traj.times.iter().zip(&traj.states) {
        let _ = write!(csv, "{t}");
        for v in x {
            let _ = write!(csv, ",{v}");
        }
        csv.push('\n');
    }
    if let Some(k) = traj.nonfinite_at {
        warn!("{label}: non-finite state at step {k}; trajectory truncated");
    }
    emit(s.out.as_deref(), &csv)?;
    Ok(true)
}

pub fn rates(s: &Settings) -> Result<bool> {
    let name = s.problem()?;
    let h_list = s.h_list.clone().unwrap_or_else(|| DEFAULT_H_LIST.to_vec());
    let label = s.scheme.as_deref().unwrap_or(default_scheme(name));
    let table = if is_system(name) {
        let sys = system_problem(name, &s.params)?;
        let step = system_scheme(&sys, label)?;
        let x0 = s.x0.clone().unwrap_or_else(|| default_initial_state(&sys));
        system_convergence_rates(&sys, &*step, &x0, &h_list, s.t_end.unwrap_or(10.0))?
    } else {
        let p = scalar_problem(name, &s.params)?;
        let reg = scalar_scheme(&p, label, &s.params)?;
        let kind = if s.oracle { ReferenceKind::Oracle } else { ReferenceKind::Auto };
        convergence_rates(&p, &*reg.map, s.y0.unwrap_or(0.5), &h_list, s.t_end.unwrap_or(1.0), kind)?
    };
    print!("{}", table.to_text());
    if s.out.is_some() {
        emit(s.out.as_deref(), &table.to_csv())?;
    }
    Ok(true)
}

fn sample_pairs(rng: &mut ChaCha8Rng, n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|k| {
            let y0 = rng.gen_range(0.0..=10.0);
            let h = if k % 2 == 0 { 100.0 * (1.0 - rng.gen::<f64>()) } else { 10f64.powf(rng.gen_range(-3.0..=2.0)) };
            (y0, h)
        })
        .collect()
}

fn status(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "FAIL"
    }
}

pub fn audit(s: &Settings) -> Result<bool> {
    let selected: Vec<&str> = match s.problem.as_deref() {
        Some(p) => vec![p],
        None => SCALAR_PROBLEMS.iter().chain(SYSTEM_PROBLEMS.iter()).copied().collect(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
    let pairs = sample_pairs(&mut rng, s.samples);
    let mut pass = true;
    let mut ran = 0usize;
    let mut csv = String::from("problem,scheme,audit,pass\n");
    let mut record = |problem: &str, scheme: &str, what: &str, ok: bool, detail: &str| {
        println!("{problem}/{scheme} {what}: {} {detail}", status(ok));
        let _ = writeln!(csv, "{problem},{scheme},{what},{ok}");
        ok
    };
    for name in selected {
        if is_system(name) {
            let sys = system_problem(name, &s.params)?;
            let runs: Vec<(Vec<f64>, f64)> = pairs
                .iter()
                .map(|&(_, h)| (sys.sample_box().iter().map(|&(lo, hi)| rng.gen_range(lo..=hi)).collect(), h))
                .collect();
            for label in ["nsfd-2", "nsfd-plain"] {
                if s.scheme.as_deref().is_some_and(|l| l != label) {
                    continue;
                }
                ran += 1;
                let step: Box<dyn nsfd_core::system::SystemStepMap> = match s.beta {
                    Some(beta) => {
                        let w = Weights::new(1.0 - beta, beta);
                        let cfg = w.and_then(|w| {
                            if label == "nsfd-2" {
                                SystemSchemeConfig::second_order(&sys, w)
                            } else {
                                SystemSchemeConfig::plain(&sys, w)
                            }
                        });
                        match cfg {
                            Ok(cfg) => Box::new(SystemNsfd { sys: sys.clone(), cfg }),
                            Err(e) => {
                                pass &= record(name, label, "weights", false, &e.to_string());
                                continue;
                            }
                        }
                    }
                    None => Box::new(SystemNsfd { sys: sys.clone(), cfg: system_cfg(&sys, label)? }),
                };
                let r = system_positivity_audit(&*step, &sys, &runs, s.steps);
                let detail = format!("runs={} min={:e} non-finite={}", r.runs, r.min_state, r.nonfinite_runs);
                pass &= record(name, label, "positivity", r.pass(), &detail);
            }
            continue;
        }
        let p = scalar_problem(name, &s.params)?;
        let labels: Vec<&str> =
            derived_labels(name).into_iter().filter(|l| s.scheme.as_deref().is_none_or(|want| want == *l)).collect();
        for label in labels {
            ran += 1;
            let (rep, cfg) = scheme_parts(&p, label, s)?;
            let shown = cfg.label.clone();
            let h = check_h_conditions(&p, &rep, &cfg);
            let failed: Vec<&str> = [("H1", &h.h1), ("H2", &h.h2), ("H3", &h.h3), ("H4", &h.h4)]
                .iter()
                .filter(|(_, c)| !c.pass)
                .map(|(n, _)| *n)
                .collect();
            pass &= record(name, &shown, "conditions", h.all_pass(), &failed.join(" "));
            let scheme = NsfdScheme::new(p.clone(), rep, cfg);
            let r = positivity_audit_pairs(&scheme, &pairs, s.steps);
            let detail = format!(
                "runs={} min={:e} non-finite={} errors={}",
                r.runs,
                r.min_state,
                r.nonfinite_runs,
                r.errors.len()
            );
            pass &= record(name, &shown, "positivity", r.pass(), &detail);
            let st = elementary_stability_audit(&p, &scheme as &dyn StepMap, &AUDIT_H);
            let detail =
                format!("checks={} spurious={} skipped={}", st.checks.len(), st.spurious.len(), st.skipped.len());
            pass &= record(name, &shown, "stability", st.pass(), &detail);
        }
    }
    if ran == 0 {
        warn!("audit selection is empty; nothing to do");
        return Ok(true);
    }
    if s.out.is_some() {
        emit(s.out.as_deref(), &csv)?;
    }
    println!("audit: {}", if pass { "ALL PASS" } else { "FAILURES" });
    Ok(pass)
}

fn system_cfg(sys: &nsfd_core::SystemProblem, label: &str) -> Result<SystemSchemeConfig> {
    let w = Weights::new(0.0, 1.0)?;
    Ok(match label {
        "nsfd-2" => SystemSchemeConfig::second_order(sys, w)?,
        _ => SystemSchemeConfig::plain(sys, w)?,
    })
}

pub fn errata(s: &Settings) -> Result<bool> {
    let r = errata_report()?;
    print!("{}", r.to_text());
    if s.out.is_some() {
        emit(s.out.as_deref(), &r.to_csv())?;
    }
    Ok(true)
}

pub fn table2(s: &Settings) -> Result<bool> {
    let h_list = s.h_list.clone().unwrap_or_else(|| TABLE2_H.to_vec());
    let tables = experiments::table2(&h_list)?;
    emit(s.out.as_deref(), &experiments::table2_csv(&tables))?;
    Ok(true)
}

pub fn figures(s: &Settings) -> Result<bool> {
    let dir = s.out.clone().unwrap_or_else(|| ".".into());
    std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    let (a, b) = experiments::figures()?;
    for (file, content) in [("figure1.csv", a), ("figure2.csv", b)] {
        let path = dir.join(file);
        std::fs::write(&path, content).with_context(|| format!("writing {}", path.display()))?;
        println!("{}", path.display());
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampled_pairs_are_in_range_and_seeded() {
        let a = sample_pairs(&mut ChaCha8Rng::seed_from_u64(7), 100);
        let b = sample_pairs(&mut ChaCha8Rng::seed_from_u64(7), 100);
        assert_eq!(a, b);
        assert!(a.iter().all(|&(y, h)| (0.0..=10.0).contains(&y) && h > 0.0 && h <= 100.0));
    }

    #[test]
    fn defaults_resolve() {
        assert_eq!(default_scheme("logistic"), "snsfd1");
        assert_eq!(default_scheme("sirs"), "nsfd-2");
        assert!(scheme_labels("cubic").contains(&default_scheme("cubic")));
    }
}
