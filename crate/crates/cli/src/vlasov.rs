use std::path::{Path, PathBuf};

use clap::{Args, Subcommand, ValueEnum};
use opsplit::harness::{vlasov_comparison, write_records};
use opsplit::kv::parse_override;
use opsplit::vlasov::{
    dominant_mode, growth_rates, run, write_outputs, write_snapshot, EcdiConfig, VlasovRun, OPERATOR_NAMES,
};

use crate::{parse_method, CliError, CliResult};

#[derive(Debug, Subcommand)]
pub enum VlasovCommand {
    /// Integrate one configuration and write energy, field-mode and timing CSVs.
    Run(RunArgs),
    /// Fit exponential growth rates of the field's Fourier modes.
    Growth(GrowthArgs),
    /// Compare energy conservation and cost of two methods at equal dt.
    Energy(EnergyArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Preset {
    /// Desk-scale ECDI: Nx = 128, Nv = 128/64, dt = 4e-4, 100 steps.
    Desk,
    /// Counter-streaming electron beams (unstable, no magnetic coupling).
    TwoStream,
    /// Small magnetized plasma with all three operators active.
    Magnetized,
}

#[derive(Debug, Args)]
pub struct SetupArgs {
    /// Starting configuration before the file and flag overrides.
    #[arg(long, value_enum)]
    preset: Option<Preset>,
    /// `key = value` file with any EcdiConfig key (alpha1, Nx, dt, method, ...).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Splitting method, e.g. `Strang(1-2-3)` or `AK32i`.
    #[arg(long)]
    method: Option<String>,
    /// Step size.
    #[arg(long)]
    dt: Option<f64>,
    /// Final time.
    #[arg(long)]
    t_final: Option<f64>,
    /// Extra `KEY=VALUE` overrides, applied last (repeatable).
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

impl SetupArgs {
    fn config(&self, default: Preset) -> CliResult<EcdiConfig<f64>> {
        let usage = |e: opsplit::Error| CliError::Usage(e.to_string());
        let mut cfg = match self.preset.unwrap_or(default) {
            Preset::Desk => EcdiConfig::default(),
            Preset::TwoStream => EcdiConfig::two_stream(),
            Preset::Magnetized => EcdiConfig::magnetized_landau(),
        };
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
            cfg.apply_str(&text).map_err(usage)?;
        }
        if let Some(m) = &self.method {
            cfg.method = parse_method(m)?;
        }
        if let Some(dt) = self.dt {
            cfg.dt = dt;
        }
        if let Some(t) = self.t_final {
            cfg.t_final = t;
        }
        for s in &self.set {
            let (k, v) = parse_override(s).map_err(usage)?;
            cfg.set(&k, &v).map_err(usage)?;
        }
        cfg.validate().map_err(usage)?;
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    setup: SetupArgs,
    /// Also write the final phase space as a binary snapshot.
    #[arg(long)]
    snapshot: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GrowthArgs {
    #[command(flatten)]
    setup: SetupArgs,
    /// Fit window `start,end`; defaults to 25 %..80 % of the horizon.
    #[arg(long, value_delimiter = ',')]
    window: Option<Vec<f64>>,
    /// Modes to fit (comma separated); defaults to the dominant mode.
    #[arg(long, value_delimiter = ',')]
    modes: Option<Vec<usize>>,
}

#[derive(Debug, Args)]
pub struct EnergyArgs {
    #[command(flatten)]
    setup: SetupArgs,
    /// Baseline method.
    #[arg(long, default_value = "Strang(1-2-3)")]
    baseline: String,
    /// Candidate method.
    #[arg(long, default_value = "AK32i")]
    candidate: String,
}

pub fn execute(cmd: VlasovCommand, out: &Path) -> CliResult {
    std::fs::create_dir_all(out).map_err(|e| CliError::Usage(format!("cannot create {}: {e}", out.display())))?;
    match cmd {
        VlasovCommand::Run(args) => run_cmd(args, out),
        VlasovCommand::Growth(args) => growth(args, out),
        VlasovCommand::Energy(args) => energy(args, out),
    }
}

fn summarize(label: &str, r: &VlasovRun<f64>) {
    println!(
        "{label}: {} steps in {:.2} s, max energy deviation {:.4e} %, particle drift {:.2e}",
        r.steps,
        r.wall_seconds,
        r.max_energy_deviation(),
        r.particle_drift
    );
    for (l, name) in OPERATOR_NAMES.iter().enumerate() {
        println!("  {name:<11} {:>6} calls {:>9.3} s", r.timing.calls[l], r.timing.seconds[l]);
    }
    println!("  {:<11} {:>6} calls {:>9.3} s", "solve_field", r.timing.field_solves, r.timing.field_seconds);
}

fn run_cmd(args: RunArgs, out: &Path) -> CliResult {
    let cfg = args.setup.config(Preset::Desk)?;
    let r = run(&cfg)?;
    summarize(&cfg.method.to_string(), &r);
    for p in write_outputs(&r, out)? {
        println!("wrote {}", p.display());
    }
    if let Some(path) = args.snapshot {
        write_snapshot(&r.state, &path)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn growth(args: GrowthArgs, out: &Path) -> CliResult {
    let cfg = args.setup.config(Preset::TwoStream)?;
    let window = match args.window.as_deref() {
        None => (0.25 * cfg.t_final, 0.8 * cfg.t_final),
        Some([a, b]) if a < b => (*a, *b),
        Some(_) => return Err(CliError::Usage("--window takes `start,end` with start < end".into())),
    };
    let r = run(&cfg)?;
    summarize(&cfg.method.to_string(), &r);
    write_outputs(&r, out)?;
    let times: Vec<f64> = r.modes.iter().map(|m| m.t).collect();
    let amps: Vec<Vec<f64>> = r.modes.iter().map(|m| m.amplitudes.clone()).collect();
    let modes = match args.modes {
        Some(m) => m,
        None => vec![dominant_mode(&amps).ok_or_else(|| CliError::Usage("no field samples recorded".into()))?],
    };
    println!("fit window [{:.4}, {:.4}]", window.0, window.1);
    for g in growth_rates(&times, &amps, &modes, window)? {
        println!(
            "mode {:>3}: rate {:.6}  R^2 {:.5}  rms residual {:.3e}  ({} samples)",
            g.mode, g.rate, g.r_squared, g.rms_residual, g.samples
        );
    }
    Ok(())
}

fn energy(args: EnergyArgs, out: &Path) -> CliResult {
    let cfg = args.setup.config(Preset::Desk)?;
    let baseline = parse_method(&args.baseline)?;
    let candidate = parse_method(&args.candidate)?;
    let (cmp, rb, rc) = vlasov_comparison(&cfg, baseline, candidate)?;
    summarize(&baseline.to_string(), &rb);
    summarize(&candidate.to_string(), &rc);
    println!("delta {:.3}  rho {:.4}  eta {:.4}", cmp.delta, cmp.rho, cmp.eta);
    for (id, r) in [(baseline, &rb), (candidate, &rc)] {
        let dir = out.join(sanitize(&id.to_string()));
        write_outputs(r, &dir)?;
    }
    let path = out.join("vlasov_energy.csv");
    write_records(&path, &[cmp.baseline.record(), cmp.candidate.record()])?;
    println!("wrote {}", path.display());
    Ok(())
}

/// Method names contain parentheses; keep directory names plain.
fn sanitize(name: &str) -> String {
    name.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' { c } else { '_' }).collect()
}
