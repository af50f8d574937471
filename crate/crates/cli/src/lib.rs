//! Batch front end: configuration parsing, run orchestration, diagnostics
//! CSV and binary snapshot output, and the analysis subcommands.

pub mod commands;
pub mod config;
pub mod output;
pub mod snapshot;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use commands::Exit;
use commands::{CmdError, CmdResult};
use config::{parse_config_with, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "modmhd", version, about = "Vector-potential and classical ideal MHD on a periodic grid")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, clap::Args)]
pub struct Common {
    /// Configuration file (flat `key = value` lines).
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory; overrides `output.dir`.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Override one key, e.g. `--set grid.nx=32`. May be repeated.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// March a scenario and write diagnostics.csv and snapshots.
    Run(Common),
    /// Evaluate the derivation-identity suite.
    Identities(Common),
    /// Linear eigenfrequencies about a uniform background.
    Dispersion(Common),
    /// Grid-convergence study of a scenario.
    Convergence(Common),
    /// Print build defaults and format versions.
    Info,
}

/// Loads the config named by `common`, applying overrides and `--out-dir`.
pub fn load_config(common: &Common) -> Result<RunConfig, CmdError> {
    let text = match &common.config {
        Some(p) => std::fs::read_to_string(p)
            .map_err(|e| CmdError { exit: Exit::Config, message: format!("cannot read {}: {e}", p.display()) })?,
        None => String::new(),
    };
    let mut cfg = parse_config_with(&text, &common.overrides)
        .map_err(|e| CmdError { exit: Exit::Config, message: format!("config error: {e}") })?;
    if let Some(dir) = &common.out_dir {
        cfg.output_dir = dir.display().to_string();
    }
    Ok(cfg)
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> CmdResult {
    match &cli.command {
        Command::Info => commands::cmd_info(out),
        Command::Run(c) => commands::cmd_run(&load_config(c)?, out),
        Command::Identities(c) => commands::cmd_identities(&load_config(c)?, out),
        Command::Dispersion(c) => commands::cmd_dispersion(&load_config(c)?, out),
        Command::Convergence(c) => commands::cmd_convergence(&load_config(c)?, out),
    }
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run_cli<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let help = matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion);
            let rendered = e.render().to_string();
            let _ = if help { out.write_all(rendered.as_bytes()) } else { err.write_all(rendered.as_bytes()) };
            return if help { Exit::Success.code() } else { Exit::Config.code() };
        }
    };
    match dispatch(&cli, out) {
        Ok(()) => Exit::Success.code(),
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.exit.code()
        }
    }
}
