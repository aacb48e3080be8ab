mod commands;
mod settings;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

/// Experiment driver for second-order positive NSFD schemes.
#[derive(Debug, Parser)]
#[command(name = "nsfd", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
enum Command {
    /// Automatic sign-split of f and its sampled sign report.
    Split,
    /// Sufficient-condition (H1-H4) report for a scheme.
    Check,
    /// Integrate a scalar problem; CSV `t,y,y_exact,abs_error`.
    Run,
    /// Integrate a system; CSV `t,x_1,...,x_dim`.
    RunSys,
    /// Errors and observed convergence rates over `--h-list`.
    Rates,
    /// Condition, positivity and elementary-stability audits.
    Audit,
    /// Printed versus derived denominators, with measured orders.
    Errata,
    /// Logistic error/rate table for snsfd1, snsfd2 and wood.
    Table2,
    /// Trajectory data for the h = 1.25 logistic comparison plots.
    Figures,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Opts {
    /// Problem name: logistic, cubic, sine, monod, powerlaw, lv, sirs.
    #[arg(long, global = true, alias = "model")]
    pub problem: Option<String>,
    /// Scheme label (see `nsfd audit` output for the registry).
    #[arg(long, global = true)]
    pub scheme: Option<String>,
    #[arg(long, global = true)]
    pub y0: Option<f64>,
    /// Initial state of a system, comma separated.
    #[arg(long, global = true)]
    pub x0: Option<String>,
    #[arg(long, global = true)]
    pub h: Option<f64>,
    #[arg(long, global = true)]
    pub t_end: Option<f64>,
    /// Comma-separated step sizes, strictly decreasing.
    #[arg(long, global = true)]
    pub h_list: Option<String>,
    /// Output file (directory for `figures`).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Problem parameters `k=v,k=v`.
    #[arg(long, global = true)]
    pub params: Option<String>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Override the implicit weight beta (alpha = 1 - beta).
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    /// Random (y0, h) pairs per scheme in `audit`.
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Steps per positivity run in `audit`.
    #[arg(long, global = true)]
    pub steps: Option<usize>,
    /// Always measure against the RK4 oracle in `rates`.
    #[arg(long, global = true)]
    pub oracle: bool,
    /// key=value file; command-line flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.opts.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    let result = settings::Settings::resolve(&cli.opts).and_then(|s| match cli.command {
        Command::Split => commands::split(&s),
        Command::Check => commands::check(&s),
        Command::Run => commands::run(&s),
        Command::RunSys => commands::run_sys(&s),
        Command::Rates => commands::rates(&s),
        Command::Audit => commands::audit(&s),
        Command::Errata => commands::errata(&s),
        Command::Table2 => commands::table2(&s),
        Command::Figures => commands::figures(&s),
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
