//! Data generators behind the `table2` and `figures` commands.

use std::fmt::Write as _;

use crate::analysis::{convergence_rates, fmt_sig, RateTable, ReferenceKind};
use crate::error::Result;
use crate::problems::{logistic, scalar_scheme, Params};
use crate::scalar::integrate;

pub const TABLE2_H: [f64; 5] = [1e-1, 1e-2, 1e-3, 1e-4, 1e-5];
pub const TABLE2_SCHEMES: [&str; 3] = ["snsfd1", "snsfd2", "wood"];

/// Logistic error/rate tables for `snsfd1`, `snsfd2` and `wood` at
/// `y0 = 0.5`, `T = 1`, against the exact solution.
pub fn table2(h_list: &[f64]) -> Result<Vec<RateTable>> {
    let p = logistic()?;
    TABLE2_SCHEMES
        .iter()
        .map(|label| {
            let s = scalar_scheme(&p, label, &Params::new())?;
            convergence_rates(&p, &*s.map, 0.5, h_list, 1.0, ReferenceKind::Auto)
        })
        .collect()
}

/// One row per `h`, an `error,rate` column pair per scheme, six significant
/// digits.
pub fn table2_csv(tables: &[RateTable]) -> String {
    let mut s = String::from("h");
    for t in tables {
        let _ = write!(s, ",{0}_error,{0}_rate", t.scheme_label);
    }
    s.push('\n');
    let n = tables.first().map_or(0, |t| t.rows.len());
    for k in 0..n {
        s.push_str(&fmt_sig(tables[0].rows[k].h));
        for t in tables {
            let r = &t.rows[k];
            let _ = write!(s, ",{},{}", fmt_sig(r.error), r.rate.map(fmt_sig).unwrap_or_default());
        }
        s.push('\n');
    }
    s
}

pub const FIGURE_H: f64 = 1.25;
pub const FIGURE_STEPS: usize = 40;

/// Two CSVs of logistic trajectories from `y0 = 0.5` with `h = 1.25` over
/// 40 steps, values at full round-trip precision:
/// `t,euler,rk2,snsfd1` and `t,snsfd1,wood`.
pub fn figures() -> Result<(String, String)> {
    let p = logistic()?;
    let t_end = FIGURE_H * FIGURE_STEPS as f64;
    let run = |label: &str| -> Result<Vec<f64>> {
        let s = scalar_scheme(&p, label, &Params::new())?;
        Ok(integrate(&*s.map, 0.5, FIGURE_H, t_end)?.states)
    };
    let cols1 = ["euler", "rk2", "snsfd1"];
    let cols2 = ["snsfd1", "wood"];
    let render = |cols: &[&str]| -> Result<String> {
        let data = cols.iter().map(|c| run(c)).collect::<Result<Vec<_>>>()?;
        let mut s = String::from("t");
        for c in cols {
            let _ = write!(s, ",{c}");
        }
        s.push('\n');
        for k in 0..=FIGURE_STEPS {
            let _ = write!(s, "{}", k as f64 * FIGURE_H);
            for col in &data {
                let _ = write!(s, ",{}", col[k]);
            }
            s.push('\n');
        }
        Ok(s)
    };
    Ok((render(&cols1)?, render(&cols2)?))
}
