//! `opsplit`: command-line front end for the splitting benchmarks.
//!
//! Exit status is 0 on success, 1 for usage and configuration errors and 2
//! when a computation fails numerically.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod brusselator;
mod coeffs;
mod report;
mod vlasov;

#[derive(Debug, Parser)]
#[command(name = "opsplit", version, about = "Second-order 3-operator splitting benchmarks")]
struct Cli {
    /// Directory that receives CSV, SVG and snapshot outputs.
    #[arg(long, global = true, env = "OPSPLIT_OUT_DIR", default_value = "opsplit-out")]
    out_dir: PathBuf,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List or verify the built-in coefficient tables.
    #[command(subcommand)]
    Coeffs(coeffs::CoeffsCommand),
    /// Reaction-diffusion Brusselator benchmark.
    #[command(subcommand)]
    Brusselator(brusselator::BrusselatorCommand),
    /// 1D2V Vlasov-Poisson benchmark.
    #[command(subcommand)]
    Vlasov(vlasov::VlasovCommand),
    /// Turn a work-precision CSV into report files.
    Report(report::ReportArgs),
}

/// Failure classes that map onto exit codes.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Run(opsplit::Error),
}

impl From<opsplit::Error> for CliError {
    fn from(e: opsplit::Error) -> Self {
        CliError::Run(e)
    }
}

pub type CliResult<T = ()> = Result<T, CliError>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let out = cli.out_dir;
    let result = match cli.command {
        Command::Coeffs(cmd) => coeffs::execute(cmd, &out),
        Command::Brusselator(cmd) => brusselator::execute(cmd, &out),
        Command::Vlasov(cmd) => vlasov::execute(cmd, &out),
        Command::Report(args) => report::execute(args, &out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Run(e)) => {
            eprintln!("error: {e}");
            let mut source = std::error::Error::source(&e);
            while let Some(s) = source {
                eprintln!("  caused by: {s}");
                source = s.source();
            }
            ExitCode::from(if e.is_numerical() { 2 } else { 1 })
        }
    }
}

/// Parses a method name, reporting unknown names as usage errors.
pub fn parse_method(name: &str) -> CliResult<opsplit::MethodId> {
    name.parse().map_err(|e: opsplit::Error| CliError::Usage(e.to_string()))
}
