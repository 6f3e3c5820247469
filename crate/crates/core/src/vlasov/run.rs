use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::splitting::{step, step_schedule, SplittingMethod};

use super::config::EcdiConfig;
use super::diagnostics::{energy_breakdown, mode_amplitudes, work_power};
use super::field::diagnostic_field;
use super::flows::{OperatorTiming, VlasovFlows, OPERATOR_NAMES};
use super::phase_space::{initialize, PhaseSpace};

/// Distributions may dip below zero by this fraction of their peak before a
/// run is declared unstable.
pub const NEGATIVITY_LIMIT: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergySample {
    pub t: f64,
    pub u: f64,
    pub deviation_percent: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModeSample {
    pub t: f64,
    /// Amplitude of modes `1..=amplitudes.len()`.
    pub amplitudes: Vec<f64>,
}

/// Everything a run records.
#[derive(Debug, Clone)]
pub struct VlasovRun<T> {
    pub state: PhaseSpace<T>,
    pub steps: usize,
    pub energy: Vec<EnergySample>,
    pub modes: Vec<ModeSample>,
    pub timing: OperatorTiming,
    /// Largest relative change of the electron or ion number seen at a
    /// recorded sample.
    pub particle_drift: f64,
    pub wall_seconds: f64,
}

impl<T> VlasovRun<T> {
    pub fn max_energy_deviation(&self) -> f64 {
        self.energy.iter().map(|e| e.deviation_percent).fold(0.0, f64::max)
    }

    /// Wall time per step of the sub-flows and field solves.
    pub fn seconds_per_step(&self) -> f64 {
        if self.steps == 0 {
            0.0
        } else {
            self.timing.total_seconds() / self.steps as f64
        }
    }
}

/// Initializes from `cfg` and integrates to `cfg.t_final`.
pub fn run<T: Real>(cfg: &EcdiConfig<T>) -> Result<VlasovRun<T>> {
    let ps = initialize(cfg)?;
    run_from(cfg, ps)
}

fn check_state<T: Real>(ps: &PhaseSpace<T>, step_no: usize) -> Result<()> {
    let blowup = |reason: String| Error::Blowup { step: step_no, t: ps.t.as_f64(), reason };
    if !ps.is_finite() {
        return Err(blowup("non-finite values in the distributions or field".into()));
    }
    let neg = ps.negativity().as_f64();
    if neg > NEGATIVITY_LIMIT {
        return Err(blowup(format!("distribution minimum is {neg:.3} of its peak")));
    }
    Ok(())
}

/// Integrates an existing phase space from `ps.t` to `cfg.t_final` with the
/// method, step and field schedule of `cfg`.
pub fn run_from<T: Real>(cfg: &EcdiConfig<T>, mut ps: PhaseSpace<T>) -> Result<VlasovRun<T>> {
    cfg.validate()?;
    let method: SplittingMethod<T> = cfg.method.method();
    let mut flows = VlasovFlows::new(&ps, &method, cfg.field, cfg.parallel)?;
    let schedule = step_schedule(ps.t, cfg.t_final, cfg.dt)?;

    let (ne0, ni0) = ps.particle_numbers();
    let mut particle_drift = 0.0f64;
    let mut energy = Vec::new();
    let mut modes = Vec::new();
    let mut u0 = None;

    let mut record = |ps: &PhaseSpace<T>, drift: &mut f64| -> Result<()> {
        let e = diagnostic_field(ps);
        let u = energy_breakdown(ps).total().as_f64();
        let base = *u0.get_or_insert(u);
        let deviation_percent = if base == 0.0 { 0.0 } else { (u - base).abs() / base.abs() * 100.0 };
        let t = ps.t.as_f64();
        energy.push(EnergySample { t, u, deviation_percent });
        modes.push(ModeSample { t, amplitudes: mode_amplitudes(&e, cfg.modes).into_iter().map(|a| a.as_f64()).collect() });
        let (ne, ni) = ps.particle_numbers();
        let rel = |a: T, b: T| if b == T::zero() { 0.0 } else { ((a - b) / b).abs().as_f64() };
        *drift = drift.max(rel(ne, ne0)).max(rel(ni, ni0));
        Ok(())
    };

    let start = Instant::now();
    record(&ps, &mut particle_drift)?;
    let mut power = work_power(&ps);
    let n = schedule.len();
    for (s, &h) in schedule.iter().enumerate() {
        step(&method, &mut flows, &mut ps, h)?;
        ps.t += h;
        let next = work_power(&ps);
        ps.work_integral += T::half() * h * (power + next);
        power = next;
        check_state(&ps, s + 1)?;
        if (s + 1) % cfg.stride == 0 || s + 1 == n {
            record(&ps, &mut particle_drift)?;
        }
    }
    Ok(VlasovRun {
        state: ps,
        steps: n,
        energy,
        modes,
        timing: *flows.timing(),
        particle_drift,
        wall_seconds: start.elapsed().as_secs_f64(),
    })
}

fn write_table(path: &Path, header: &str, rows: impl Iterator<Item = String>) -> Result<()> {
    let io = |e| Error::io(path, e);
    let mut w = BufWriter::new(File::create(path).map_err(io)?);
    writeln!(w, "{header}").map_err(io)?;
    for row in rows {
        writeln!(w, "{row}").map_err(io)?;
    }
    w.flush().map_err(io)
}

/// Writes `energy.csv`, `field_modes.csv` and `timing.csv` into `dir`.
pub fn write_outputs<T>(run: &VlasovRun<T>, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;

    let energy = dir.join("energy.csv");
    write_table(&energy, "t,U,deltaU_percent", run.energy.iter().map(|e| format!("{},{},{}", e.t, e.u, e.deviation_percent)))?;

    let modes = dir.join("field_modes.csv");
    let rows = run
        .modes
        .iter()
        .flat_map(|s| s.amplitudes.iter().enumerate().map(move |(m, a)| format!("{},{},{}", s.t, m + 1, a)));
    write_table(&modes, "t,mode,abs_amplitude", rows)?;

    let timing = dir.join("timing.csv");
    let t = &run.timing;
    let rows = OPERATOR_NAMES
        .iter()
        .enumerate()
        .map(|(l, name)| format!("{name},{},{}", t.calls[l], t.seconds[l]))
        .chain(std::iter::once(format!("solve_field,{},{}", t.field_solves, t.field_seconds)));
    write_table(&timing, "operator,calls,seconds", rows)?;

    Ok(vec![energy, modes, timing])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::splitting::MethodId;
    use crate::vlasov::config::FieldSchedule;

    fn tiny() -> EcdiConfig<f64> {
        EcdiConfig { nx: 16, nvxe: 32, nvze: 16, nvxi: 16, t_final: 0.5, dt: 0.1, ..EcdiConfig::magnetized_landau() }
    }

    #[test]
    fn call_counts_follow_the_method() {
        for id in [MethodId::Strang([0, 1, 2]), MethodId::Ak32i, MethodId::Ak52] {
            let cfg = EcdiConfig { method: id, ..tiny() };
            let r = run(&cfg).unwrap();
            let m: SplittingMethod<f64> = id.method();
            let per = m.subintegrations_per_operator();
            for l in 0..3 {
                assert_eq!(r.timing.calls[l], per[l] * r.steps, "{id} operator {l}");
            }
            assert_eq!(r.timing.field_solves, r.steps);
        }
    }

    #[test]
    fn physics_off_leaves_state_unchanged() {
        let cfg = EcdiConfig {
            alpha1: 0.0,
            alpha2: 0.0,
            alpha3: 0.0,
            field: FieldSchedule::Disabled,
            t_final: 0.1,
            ..tiny()
        };
        let mut ps = initialize(&cfg).unwrap();
        ps.ex.fill(0.0);
        // Remove spatial structure so that free streaming is a no-op too.
        let uniform = ps.fe.mean_axis(ndarray::Axis(0)).unwrap();
        for mut plane in ps.fe.outer_iter_mut() {
            plane.assign(&uniform);
        }
        let fi = ps.fi.mean_axis(ndarray::Axis(0)).unwrap();
        for mut row in ps.fi.outer_iter_mut() {
            row.assign(&fi);
        }
        let before = ps.clone();
        let r = run_from(&cfg, ps).unwrap();
        let diff = (&r.state.fe - &before.fe).iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert!(diff < 1e-15);
        assert_eq!(r.state.ex, before.ex);
    }

    #[test]
    fn outputs_have_headers() {
        let dir = tempfile::tempdir().unwrap();
        let r = run(&tiny()).unwrap();
        let files = write_outputs(&r, dir.path()).unwrap();
        let heads: Vec<String> =
            files.iter().map(|p| std::fs::read_to_string(p).unwrap().lines().next().unwrap().to_string()).collect();
        assert_eq!(heads, ["t,U,deltaU_percent", "t,mode,abs_amplitude", "operator,calls,seconds"]);
        assert_eq!(r.energy.len(), r.steps + 1);
    }

    #[test]
    fn non_finite_state_is_reported() {
        let cfg = tiny();
        let mut ps = initialize(&cfg).unwrap();
        ps.fe[(3, 10, 5)] = f64::NAN;
        let err = run_from(&cfg, ps).unwrap_err();
        assert!(matches!(err, Error::Blowup { step: 1, .. }), "{err}");
    }
}
