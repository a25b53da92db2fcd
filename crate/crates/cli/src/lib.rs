//! Command-line front end for the CRASE models: config ingestion, the
//! analytic table, the entanglement-map sweep, oracle runs and convergence
//! studies.

pub mod commands;
pub mod config;
pub mod error;
pub mod svg;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use config::{parse_config, ParsedConfig, RunConfig};
use error::{exit, CliError};

#[derive(Debug, Parser)]
#[command(
    name = "crase",
    version,
    about = "Entanglement between amplified and recalled light"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Option<Command>,

    /// Flat `key = value` configuration file.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Write machine-readable output here (overrides `csv_path`).
    #[arg(long, global = true, value_name = "PATH")]
    pub csv: Option<PathBuf>,

    /// Write the contour plot here (overrides `svg_path`).
    #[arg(long, global = true, value_name = "PATH")]
    pub svg: Option<PathBuf>,

    /// Largest accepted oracle-vs-analytic relative delta.
    #[arg(long, global = true, value_name = "FLOAT")]
    pub tolerance: Option<f64>,

    /// Worker threads for sweeps and convergence studies.
    #[arg(long, global = true, value_name = "N")]
    pub jobs: Option<usize>,

    /// Print the effective configuration in canonical form and exit.
    #[arg(long, global = true)]
    pub dump_config: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Closed-form photon numbers, efficiency and minimized Duan sum.
    Analytic,
    /// Minimized Duan sum over the (sqrt(eps), cosh(chi)) grid.
    Figure3,
    /// Time-domain simulation compared against the closed form.
    Oracle,
    /// Oracle at successive refinement levels.
    Converge,
}

/// Loads the config (or defaults), reports defaulted keys on stderr and
/// applies command-line overrides.
pub fn load_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let ParsedConfig {
        mut config,
        defaulted,
    } = match &cli.config {
        Some(path) => parse_config(path)?,
        None => config::parse_str("")?,
    };
    if !defaulted.is_empty() {
        eprintln!("notice: using defaults for {}", defaulted.join(", "));
    }
    if let Some(p) = &cli.csv {
        config.csv_path = Some(p.clone());
    }
    if let Some(p) = &cli.svg {
        config.svg_path = Some(p.clone());
    }
    if let Some(t) = cli.tolerance {
        if !(t.is_finite() && t > 0.0) {
            return Err(CliError::Config {
                line: None,
                key: Some("tolerance".into()),
                message: format!("--tolerance must be finite and > 0, got {t}"),
            });
        }
        config.tolerance = t;
    }
    if cli.jobs == Some(0) {
        return Err(CliError::Config {
            line: None,
            key: None,
            message: "--jobs must be at least 1".into(),
        });
    }
    Ok(config)
}

/// Executes a parsed command line and returns the process exit status.
pub fn run(cli: &Cli, out: &mut dyn Write) -> u8 {
    match execute(cli, out) {
        Ok(()) => exit::OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let cfg = load_config(cli)?;
    if cli.dump_config {
        out.write_all(cfg.dump().as_bytes())?;
        return Ok(());
    }
    let Some(command) = cli.command else {
        return Err(CliError::Config {
            line: None,
            key: None,
            message: "no subcommand given (analytic, figure3, oracle or converge)".into(),
        });
    };
    match command {
        Command::Analytic => commands::analytic(&cfg, out).map(drop),
        Command::Figure3 => commands::figure3(&cfg, cli.jobs, out).map(drop),
        Command::Oracle => commands::oracle(&cfg, out).map(drop),
        Command::Converge => commands::converge(&cfg, cli.jobs, out).map(drop),
    }
}
