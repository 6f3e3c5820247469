use std::path::Path;

use clap::Subcommand;
use opsplit::splitting::{search_five_subintegration_methods, DEFAULT_ORDER_TOLERANCE};
use opsplit::{builtin_method, verify_order_conditions, Method, MethodId};

use crate::{CliError, CliResult};

#[derive(Debug, Subcommand)]
pub enum CoeffsCommand {
    /// Print every built-in method as CSV (one row per stage).
    List,
    /// Check the first- and second-order conditions of every built-in method.
    Verify {
        /// Largest residual accepted as satisfied.
        #[arg(long, default_value_t = DEFAULT_ORDER_TOLERANCE)]
        tolerance: f64,
        /// Also solve all five-sub-integration zero patterns and compare the
        /// solutions with the Strang permutations.
        #[arg(long)]
        strang_search: bool,
    },
}

pub fn execute(cmd: CoeffsCommand, _out: &Path) -> CliResult {
    match cmd {
        CoeffsCommand::List => {
            opsplit::splitting::write_catalog_csv(&MethodId::all(), std::io::stdout().lock())?;
            Ok(())
        }
        CoeffsCommand::Verify { tolerance, strang_search } => verify(tolerance, strang_search),
    }
}

fn verify(tolerance: f64, strang_search: bool) -> CliResult {
    println!("{:<16} {:>6} {:>12} {:>14}", "method", "order", "sub-integr.", "max residual");
    let mut ok = true;
    for id in MethodId::all() {
        let m: Method = builtin_method(id);
        let report = verify_order_conditions(&m, tolerance);
        let expected = m.declared_order();
        ok &= report.satisfied_to_order == expected;
        println!(
            "{:<16} {:>6} {:>12} {:>14.3e}",
            id.to_string(),
            report.satisfied_to_order,
            m.count_subintegrations(),
            report.max_abs_residual
        );
    }
    if strang_search {
        let r = search_five_subintegration_methods(1e-8);
        println!(
            "zero-pattern search: {} patterns, {} with solutions, {} solutions, all Strang: {}, max deviation {:.2e}",
            r.patterns_examined,
            r.patterns_with_solutions,
            r.solutions.len(),
            r.all_match(),
            r.max_deviation()
        );
        ok &= r.all_match();
    }
    if ok {
        Ok(())
    } else {
        Err(CliError::Run(opsplit::Error::InvalidMethod("a built-in method misses its declared order".into())))
    }
}
