//! Command-line front end.

pub mod output;

use std::path::PathBuf;

use clap::{Parser, ValueEnum};

use crate::error::Result;
use crate::experiments::{
    parse_config, run_certificates, run_convergence_study, run_evolution, run_experiment, run_sweep, DecayReport,
    ExperimentConfig,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Certify,
    Evolve,
    Experiment,
    Sweep,
    Converge,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Certify => "certify",
            Command::Evolve => "evolve",
            Command::Experiment => "experiment",
            Command::Sweep => "sweep",
            Command::Converge => "converge",
        }
    }
}

/// Propagation-observable certificates and decay experiments.
#[derive(Clone, Debug, Parser)]
#[command(name = "proplab", version)]
pub struct CliConfig {
    pub command: Command,
    /// key=value config file
    #[arg(long = "config", value_name = "PATH")]
    pub config_path: PathBuf,
    /// Output directory
    #[arg(long = "out", value_name = "DIR", default_value = "out")]
    pub output_dir: PathBuf,
    /// Override a config key (repeatable)
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
    /// Parallel sweep members
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Refinement levels for `converge`
    #[arg(long = "grid-levels", value_name = "K")]
    pub grid_levels: Option<usize>,
}

pub struct Outcome {
    pub report: DecayReport,
    pub files: Vec<PathBuf>,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.report.passed() {
            0
        } else {
            1
        }
    }
}

pub fn execute(
    cfg: &ExperimentConfig,
    command: Command,
    jobs: usize,
    grid_levels: Option<usize>,
) -> Result<DecayReport> {
    match command {
        Command::Certify => run_certificates(cfg),
        Command::Evolve => run_evolution(cfg),
        Command::Experiment => run_experiment(cfg, jobs),
        Command::Sweep => run_sweep(cfg, jobs),
        Command::Converge => run_convergence_study(cfg, grid_levels),
    }
}

/// Parses, runs and writes every output file.
pub fn run(cli: &CliConfig) -> Result<Outcome> {
    let cfg = parse_config(&cli.config_path, &cli.overrides)?;
    let report = execute(&cfg, cli.command, cli.jobs, cli.grid_levels)?;
    let mut extra = vec![("command".to_string(), cli.command.name().to_string())];
    if let Some(k) = cli.grid_levels {
        extra.push(("grid_levels".to_string(), k.to_string()));
    }
    let files = output::write_report(&cli.output_dir, cli.command.name(), &extra, &cfg, &report)?;
    Ok(Outcome { report, files })
}

/// 0 when every declared check passed, 1 when one failed, 2 on any error.
pub fn dispatch(cli: &CliConfig) -> i32 {
    match run(cli) {
        Ok(o) => {
            for c in o.report.checks.iter().filter(|c| !c.passed) {
                eprintln!("check failed: {} {}", c.name, c.detail);
            }
            o.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
