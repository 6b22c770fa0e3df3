//! `quadsearch` command-line tool.
//!
//! Exit codes: 0 success, 2 configuration error, 3 size gate, 4 failed
//! verification.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{Format, Mode, RunConfig};

#[derive(Debug)]
pub enum CliError {
    Config(String),
    SizeGate(String),
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::SizeGate(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::SizeGate(m) => write!(f, "size limit: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<quadsearch::Error> for CliError {
    fn from(e: quadsearch::Error) -> Self {
        use quadsearch::Error::*;
        match e {
            SizeGate { .. } | ExpansionGate { .. } | EmbeddingOverflow(_) | CostOverflow(_) => {
                CliError::SizeGate(e.to_string())
            }
            _ => CliError::Config(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "quadsearch",
    version,
    about = "Multi-target quantum search simulator and cost model"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one search and report the measured item
    Run(Flags),
    /// Cross-check simulation, closed forms and recursive execution
    Verify(Flags),
    /// Oracle-call cost report
    Cost(Flags),
    /// Success-probability curves P_q(rho)
    Sweep(Flags),
}

#[derive(Debug, clap::Args)]
struct Flags {
    /// JSON configuration file
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file (stdout when absent)
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (mode, flags) = match cli.command {
        Command::Run(f) => (Mode::Run, f),
        Command::Verify(f) => (Mode::Verify, f),
        Command::Cost(f) => (Mode::Cost, f),
        Command::Sweep(f) => (Mode::Sweep, f),
    };
    match execute(mode, &flags) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("quadsearch: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn execute(mode: Mode, flags: &Flags) -> Result<u8, CliError> {
    let mut config = match &flags.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(m) = config.mode {
        if m != mode {
            return Err(CliError::Config(format!(
                "config mode {m:?} does not match subcommand {mode:?}"
            )));
        }
    }
    if flags.seed.is_some() {
        config.seed = flags.seed;
    }
    let default_format = if mode == Mode::Sweep { Format::Csv } else { Format::Json };
    let format = flags.format.or(config.output_format).unwrap_or(default_format);
    if format == Format::Csv && mode != Mode::Sweep {
        return Err(CliError::Config("csv output is only available for sweep".into()));
    }

    let (body, code) = match mode {
        Mode::Run => (commands::run(&config)?, 0),
        Mode::Cost => (commands::cost(&config)?, 0),
        Mode::Sweep => (commands::sweep(&config, format)?, 0),
        Mode::Verify => {
            let (body, passed) = commands::verify(&config)?;
            (body, if passed { 0 } else { 4 })
        }
    };

    match flags.out.as_ref().or(config.output_path.as_ref()) {
        Some(path) => std::fs::write(path, &body).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        None => print!("{body}"),
    }
    Ok(code)
}
