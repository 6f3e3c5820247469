use std::path::{Path, PathBuf};

use clap::Args;
use opsplit::harness::{emit_report, read_records, series_slopes, ReportFormat};

use crate::{CliError, CliResult};

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Work-precision CSV written by `brusselator converge` or `vlasov energy`.
    #[arg(long)]
    input: PathBuf,
    /// `csv` or `svg`.
    #[arg(long, default_value = "svg")]
    format: String,
}

pub fn execute(args: ReportArgs, out: &Path) -> CliResult {
    let format: ReportFormat = args.format.parse().map_err(|e: opsplit::Error| CliError::Usage(e.to_string()))?;
    let records = read_records(&args.input)?;
    let usable: Vec<_> = records.into_iter().filter(|r| r.error.is_finite() && r.error > 0.0).collect();
    for (method, slope) in series_slopes(&usable) {
        println!("{method:<16} slope {slope:.2}");
    }
    for path in emit_report(&usable, format, out)? {
        println!("wrote {}", path.display());
    }
    Ok(())
}
