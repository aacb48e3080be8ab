//! Flags merged over an optional key=value config file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use nsfd_core::problems::{parse_params, Params};

use crate::Opts;

#[derive(Debug, Clone)]
pub struct Settings {
    pub problem: Option<String>,
    pub scheme: Option<String>,
    pub y0: Option<f64>,
    pub x0: Option<Vec<f64>>,
    pub h: Option<f64>,
    pub t_end: Option<f64>,
    pub h_list: Option<Vec<f64>>,
    pub out: Option<PathBuf>,
    pub params: Params,
    pub seed: u64,
    pub beta: Option<f64>,
    pub samples: usize,
    pub steps: usize,
    pub oracle: bool,
}

const KEYS: [&str; 15] = [
    "problem", "model", "scheme", "y0", "x0", "h", "t_end", "h_list", "out", "params", "seed", "beta", "samples",
    "steps", "oracle",
];

fn read_config(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    let mut map = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            bail!("{}:{}: expected key=value", path.display(), n + 1);
        };
        let k = k.trim().replace('-', "_");
        if !KEYS.contains(&k.as_str()) {
            bail!("{}:{}: unknown key `{k}`", path.display(), n + 1);
        }
        map.insert(k, v.trim().to_string());
    }
    Ok(map)
}

pub fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().with_context(|| format!("`{t}` is not a number")))
        .collect()
}

fn num<T: std::str::FromStr>(map: &BTreeMap<String, String>, key: &str) -> Result<Option<T>> {
    map.get(key).map(|v| v.parse::<T>().map_err(|_| anyhow::anyhow!("config `{key}`: `{v}` is not valid"))).transpose()
}

impl Settings {
    pub fn resolve(opts: &Opts) -> Result<Self> {
        let file = match &opts.config {
            Some(p) => read_config(p)?,
            None => BTreeMap::new(),
        };
        let text = |flag: &Option<String>, key: &str| flag.clone().or_else(|| file.get(key).cloned());
        let problem = text(&opts.problem, "problem").or_else(|| file.get("model").cloned());
        let params = match text(&opts.params, "params") {
            Some(p) => parse_params(&p)?,
            None => Params::new(),
        };
        let x0 = text(&opts.x0, "x0").map(|s| parse_list(&s)).transpose()?;
        let h_list = text(&opts.h_list, "h_list").map(|s| parse_list(&s)).transpose()?;
        Ok(Self {
            problem,
            scheme: text(&opts.scheme, "scheme"),
            y0: opts.y0.or(num(&file, "y0")?),
            x0,
            h: opts.h.or(num(&file, "h")?),
            t_end: opts.t_end.or(num(&file, "t_end")?),
            h_list,
            out: opts.out.clone().or_else(|| file.get("out").map(PathBuf::from)),
            params,
            seed: opts.seed.or(num(&file, "seed")?).unwrap_or(20_240_601),
            beta: opts.beta.or(num(&file, "beta")?),
            samples: opts.samples.or(num(&file, "samples")?).unwrap_or(200),
            steps: opts.steps.or(num(&file, "steps")?).unwrap_or(1000),
            oracle: opts.oracle || num::<bool>(&file, "oracle")?.unwrap_or(false),
        })
    }

    pub fn problem(&self) -> Result<&str> {
        self.problem.as_deref().context("--problem is required")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_win_over_file() {
        let dir = std::env::temp_dir().join(format!("nsfd-settings-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("cfg");
        std::fs::write(&path, "problem = cubic\nh = 0.5 # comment\nt-end=3\nparams = mu=3\n").unwrap();
        let opts = Opts { h: Some(0.25), config: Some(path), ..Opts::default() };
        let s = Settings::resolve(&opts).unwrap();
        assert_eq!(s.problem.as_deref(), Some("cubic"));
        assert_eq!(s.h, Some(0.25));
        assert_eq!(s.t_end, Some(3.0));
        assert_eq!(s.params.get("mu"), Some(&3.0));
        std::fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn bad_lists_are_rejected() {
        assert_eq!(parse_list("0.1, 0.01").unwrap(), vec![0.1, 0.01]);
        assert!(parse_list("0.1,x").is_err());
    }
}
