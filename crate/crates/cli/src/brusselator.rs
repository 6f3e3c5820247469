use std::path::{Path, PathBuf};

use clap::{Args, Subcommand};
use opsplit::brusselator::{
    convergence_order, reference_solution_cached, work_precision_sweep, BrusselatorConfig, NonlinearMode,
    ReferenceOptions,
};
use opsplit::harness::{
    brusselator_efficiency, write_csv, write_records, BrusselatorEfficiencyOptions, WorkPrecisionRecord,
    DEFAULT_REPEATS,
};
use opsplit::{builtin_method, Method, MethodId};

use crate::{parse_method, CliError, CliResult};

#[derive(Debug, Subcommand)]
pub enum BrusselatorCommand {
    /// MRMS error and observed order for a list of methods and step sizes.
    Converge(ConvergeArgs),
    /// Largest step meeting each MRMS target, step-size ratio and time saved.
    Efficiency(EfficiencyArgs),
}

#[derive(Debug, Args)]
pub struct ProblemArgs {
    /// `key = value` file with any of alpha, beta, d1, d2, D, m, t_final.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Interior grid points (overrides the config file).
    #[arg(long)]
    grid: Option<usize>,
    /// Final time (overrides the config file).
    #[arg(long)]
    t_final: Option<f64>,
    /// Nonlinear sub-flow: `adaptive` (Dormand-Prince) or `closed-form`.
    #[arg(long)]
    nonlinear: Option<String>,
}

impl ProblemArgs {
    fn config(&self) -> CliResult<BrusselatorConfig<f64>> {
        let mut cfg = BrusselatorConfig::default();
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
            cfg.apply_str(&text).map_err(|e| CliError::Usage(e.to_string()))?;
        }
        if let Some(m) = self.grid {
            cfg.m = m;
        }
        if let Some(t) = self.t_final {
            cfg.t_final = t;
        }
        cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(cfg)
    }

    fn mode(&self, default: NonlinearMode) -> CliResult<NonlinearMode> {
        match &self.nonlinear {
            Some(s) => s.parse().map_err(|e: opsplit::Error| CliError::Usage(e.to_string())),
            None => Ok(default),
        }
    }
}

#[derive(Debug, Args)]
pub struct ConvergeArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Methods to run (repeatable).
    #[arg(long = "method", default_values_t = ["Strang(2-3-1)".to_string(), "AK32i".into(), "AK32ii".into(), "AK52".into()])]
    methods: Vec<String>,
    /// Step sizes (comma separated).
    #[arg(long, value_delimiter = ',', default_values_t = [0.2, 0.1, 0.05, 0.025])]
    dt: Vec<f64>,
    /// Timed repeats per run; the minimum is reported.
    #[arg(long, default_value_t = DEFAULT_REPEATS)]
    repeats: usize,
}

#[derive(Debug, Args)]
pub struct EfficiencyArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Candidate method.
    #[arg(long, default_value = "AK32i")]
    method: String,
    /// Baseline method.
    #[arg(long, default_value = "Strang(2-3-1)")]
    baseline: String,
    /// MRMS targets in percent (comma separated).
    #[arg(long, value_delimiter = ',', default_values_t = [5.0, 4.0, 3.0, 2.0, 1.0, 0.5])]
    targets: Vec<f64>,
    /// Timed repeats per run; the minimum is reported.
    #[arg(long, default_value_t = DEFAULT_REPEATS)]
    repeats: usize,
    /// Smallest and largest step counts searched over the horizon.
    #[arg(long, value_delimiter = ',', default_values_t = [40, 3200])]
    steps: Vec<usize>,
}

pub fn execute(cmd: BrusselatorCommand, out: &Path) -> CliResult {
    std::fs::create_dir_all(out).map_err(|e| CliError::Usage(format!("cannot create {}: {e}", out.display())))?;
    match cmd {
        BrusselatorCommand::Converge(args) => converge(args, out),
        BrusselatorCommand::Efficiency(args) => efficiency(args, out),
    }
}

fn reference(cfg: &BrusselatorConfig<f64>, out: &Path) -> CliResult<Vec<f64>> {
    eprintln!("preparing reference solution (cached in {})", out.display());
    let r = reference_solution_cached(cfg, &ReferenceOptions::default(), out)?;
    eprintln!("reference grids {:?}, agreement {:.2e}", r.grids, r.agreement);
    Ok(r.samples)
}

fn converge(args: ConvergeArgs, out: &Path) -> CliResult {
    let cfg = args.problem.config()?;
    let mode = args.problem.mode(NonlinearMode::Adaptive)?;
    if args.dt.is_empty() || args.dt.iter().any(|d| !(*d > 0.0)) {
        return Err(CliError::Usage("step sizes must be positive".into()));
    }
    let ids = args.methods.iter().map(|m| parse_method(m)).collect::<CliResult<Vec<MethodId>>>()?;
    let reference = reference(&cfg, out)?;

    let mut records = Vec::new();
    for id in ids {
        let method: Method = builtin_method(id);
        let mut pairs = Vec::new();
        for &dt in &args.dt {
            match work_precision_sweep(&cfg, std::slice::from_ref(&method), &[dt], &reference, mode, args.repeats) {
                Ok(rs) => {
                    let r = &rs[0];
                    println!("{:<16} dt {:<8} MRMS {:.4e}  {:.3} s", r.method, dt, r.mrms, r.wall_seconds);
                    pairs.push((dt, r.mrms));
                    records.push(WorkPrecisionRecord { repeats: args.repeats, ..WorkPrecisionRecord::from(r) });
                }
                Err(e) if e.is_numerical() => {
                    // Diverged runs have no meaningful error or timing; they
                    // are reported but left out of the records.
                    println!("{:<16} dt {:<8} diverged: {e}", id.to_string(), dt);
                }
                Err(e) => return Err(e.into()),
            }
        }
        if pairs.len() >= 2 {
            let orders = convergence_order(&pairs)?;
            let text: Vec<String> = orders.iter().map(|p| format!("{p:.3}")).collect();
            println!("{:<16} observed orders: {}", id.to_string(), text.join(", "));
        }
    }
    let path = out.join("brusselator_convergence.csv");
    write_records(&path, &records)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn efficiency(args: EfficiencyArgs, out: &Path) -> CliResult {
    let cfg = args.problem.config()?;
    let mode = args.problem.mode(NonlinearMode::ClosedForm)?;
    let candidate: Method = builtin_method(parse_method(&args.method)?);
    let baseline: Method = builtin_method(parse_method(&args.baseline)?);
    let [n_min, n_max] = <[usize; 2]>::try_from(args.steps.as_slice())
        .map_err(|_| CliError::Usage("--steps takes exactly two counts".into()))?;
    let opts = BrusselatorEfficiencyOptions {
        targets: args.targets.iter().map(|t| t / 100.0).collect(),
        n_min,
        n_max,
        repeats: args.repeats,
        mode,
    };
    let reference = reference(&cfg, out)?;
    let rows = brusselator_efficiency(&cfg, &baseline, &candidate, &reference, &opts)?;
    println!(
        "{:>7} {:>12} {:>12} {:>7} {:>7} {:>7} {:>10}",
        "MRMS %",
        format!("dt {}", baseline.name()),
        format!("dt {}", candidate.name()),
        "delta",
        "rho",
        "eta",
        "saved %"
    );
    for r in &rows {
        println!(
            "{:>7} {:>12.6} {:>12.6} {:>7.3} {:>7.3} {:>7.3} {:>10.2}",
            r.target * 100.0,
            r.baseline_dt,
            r.candidate_dt,
            r.delta,
            r.rho,
            r.eta,
            r.time_saved * 100.0
        );
    }
    let path = out.join("brusselator_efficiency.csv");
    write_csv(&path, &rows)?;
    println!("wrote {}", path.display());
    Ok(())
}
