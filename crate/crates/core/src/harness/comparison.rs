//! Method-versus-baseline comparisons for both benchmark problems.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use crate::brusselator::{mrms_error, run_with_flows, sample_state, BrusselatorConfig, BrusselatorFlows, NonlinearMode};
use crate::error::Result;
use crate::numerics::ExpmCache;
use crate::splitting::{MethodId, SplittingMethod};
use crate::vlasov::{run as run_vlasov, EcdiConfig, VlasovRun};

use super::efficiency::{efficiency_gain, extra_time_fraction, time_saved};
use super::records::{MetricKind, WorkPrecisionRecord};
use super::search::{largest_dt_for_target, DtSearch};
use super::timing::timing_protocol;

/// Error targets (MRMS, as fractions) of the step-size comparison.
pub const MRMS_TARGETS: [f64; 6] = [0.05, 0.04, 0.03, 0.02, 0.01, 0.005];

/// One error target of the Brusselator efficiency comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EfficiencyRow {
    pub target: f64,
    pub baseline_dt: f64,
    pub candidate_dt: f64,
    pub baseline_error: f64,
    pub candidate_error: f64,
    /// `δ = Δt^Ψ / Δt^S`.
    pub delta: f64,
    pub baseline_seconds: f64,
    pub candidate_seconds: f64,
    /// Measured per-step cost ratio minus one.
    pub rho: f64,
    pub eta: f64,
    /// `1 − τ^Ψ/τ^S` from the measured run times.
    pub time_saved: f64,
}

#[derive(Debug, Clone)]
pub struct BrusselatorEfficiencyOptions {
    pub targets: Vec<f64>,
    /// Step counts searched; `dt = t_final / n`.
    pub n_min: usize,
    pub n_max: usize,
    /// Timed repeats per run (after one warm-up). Zero skips timing.
    pub repeats: usize,
    /// The closed-form nonlinear flow has a fixed cost per call, so timings
    /// reflect the number of sub-integrations rather than adaptive step
    /// control inside them.
    pub mode: NonlinearMode,
}

impl Default for BrusselatorEfficiencyOptions {
    fn default() -> Self {
        Self { targets: MRMS_TARGETS.to_vec(), n_min: 40, n_max: 3200, repeats: 10, mode: NonlinearMode::ClosedForm }
    }
}

/// For each MRMS target, finds the largest whole-step `dt` of both methods
/// that meets it, then times the two runs and evaluates the efficiency model.
pub fn brusselator_efficiency(
    cfg: &BrusselatorConfig<f64>,
    baseline: &SplittingMethod<f64>,
    candidate: &SplittingMethod<f64>,
    reference: &[f64],
    opts: &BrusselatorEfficiencyOptions,
) -> Result<Vec<EfficiencyRow>> {
    let cache = Arc::new(ExpmCache::new());
    // Errors are memoized per (method, step count); targets share most probes.
    let mut memo: HashMap<(usize, u64), f64> = HashMap::new();
    let methods = [baseline, candidate];
    let search = DtSearch::WholeSteps { span: cfg.t_final, n_min: opts.n_min, n_max: opts.n_max };

    let mut rows = Vec::with_capacity(opts.targets.len());
    for &target in &opts.targets {
        let mut found = [(0.0, 0.0); 2];
        for (slot, method) in methods.iter().enumerate() {
            let r = largest_dt_for_target(
                |dt| {
                    if let Some(e) = memo.get(&(slot, dt.to_bits())) {
                        return Ok(*e);
                    }
                    let mut flows = BrusselatorFlows::with_cache(*cfg, opts.mode, Arc::clone(&cache))?;
                    let e = match run_with_flows(&mut flows, method, dt) {
                        Ok((state, _)) => mrms_error(&sample_state(cfg, &state)?, reference)?,
                        Err(err) if err.is_numerical() => f64::INFINITY,
                        Err(err) => return Err(err),
                    };
                    memo.insert((slot, dt.to_bits()), e);
                    Ok(e)
                },
                target,
                search,
            )?;
            found[slot] = (r.dt, r.error);
        }
        let [(dt_s, err_s), (dt_c, err_c)] = found;
        let (sec_s, sec_c) = if opts.repeats == 0 {
            (f64::NAN, f64::NAN)
        } else {
            let time = |method: &SplittingMethod<f64>, dt: f64| -> Result<f64> {
                let mut flows = BrusselatorFlows::with_cache(*cfg, opts.mode, Arc::clone(&cache))?;
                Ok(timing_protocol(|| run_with_flows(&mut flows, method, dt).map(|_| ()), opts.repeats)?.min_seconds)
            };
            (time(baseline, dt_s)?, time(candidate, dt_c)?)
        };
        let delta = dt_c / dt_s;
        let steps = |dt: f64| (cfg.t_final / dt).round();
        let rho = (sec_c / steps(dt_c)) / (sec_s / steps(dt_s)) - 1.0;
        rows.push(EfficiencyRow {
            target,
            baseline_dt: dt_s,
            candidate_dt: dt_c,
            baseline_error: err_s,
            candidate_error: err_c,
            delta,
            baseline_seconds: sec_s,
            candidate_seconds: sec_c,
            rho,
            eta: efficiency_gain(delta, rho),
            time_saved: time_saved(sec_c, sec_s),
        });
    }
    Ok(rows)
}

/// Summary of one Vlasov run for method comparisons.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VlasovMethodSummary {
    pub method: String,
    pub dt: f64,
    pub steps: usize,
    pub max_energy_deviation: f64,
    pub particle_drift: f64,
    pub seconds_per_step: f64,
    pub calls: [usize; 3],
    pub seconds: [f64; 3],
    pub wall_seconds: f64,
}

impl VlasovMethodSummary {
    pub fn from_run(method: MethodId, dt: f64, run: &VlasovRun<f64>) -> Self {
        Self {
            method: method.to_string(),
            dt,
            steps: run.steps,
            max_energy_deviation: run.max_energy_deviation(),
            particle_drift: run.particle_drift,
            seconds_per_step: run.seconds_per_step(),
            calls: run.timing.calls,
            seconds: run.timing.seconds,
            wall_seconds: run.wall_seconds,
        }
    }

    pub fn record(&self) -> WorkPrecisionRecord {
        WorkPrecisionRecord {
            method: self.method.clone(),
            dt: self.dt,
            steps: self.steps,
            error: self.max_energy_deviation,
            metric: MetricKind::MaxEnergyDeviation,
            wall_seconds: self.wall_seconds,
            repeats: 1,
        }
    }
}

/// Two Vlasov runs at equal `dt` and the resulting efficiency figures.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VlasovComparison {
    pub baseline: VlasovMethodSummary,
    pub candidate: VlasovMethodSummary,
    /// Step-size ratio; 1 because both runs share `dt`.
    pub delta: f64,
    /// Extra-time fraction of the candidate's additional sub-flow calls.
    pub rho: f64,
    pub eta: f64,
}

/// Runs `baseline` and `candidate` on `cfg` (same `dt`) and estimates `ρ`
/// from per-call operator costs pooled over both runs.
pub fn vlasov_comparison(
    cfg: &EcdiConfig<f64>,
    baseline: MethodId,
    candidate: MethodId,
) -> Result<(VlasovComparison, VlasovRun<f64>, VlasovRun<f64>)> {
    let rb = run_vlasov(&EcdiConfig { method: baseline, ..cfg.clone() })?;
    let rc = run_vlasov(&EcdiConfig { method: candidate, ..cfg.clone() })?;
    let per_call: Vec<f64> = (0..3)
        .map(|l| {
            let calls = rb.timing.calls[l] + rc.timing.calls[l];
            if calls == 0 {
                0.0
            } else {
                (rb.timing.seconds[l] + rc.timing.seconds[l]) / calls as f64
            }
        })
        .collect();
    let rho = extra_time_fraction(&candidate.method::<f64>(), &baseline.method::<f64>(), &per_call, rb.seconds_per_step())?;
    let delta = 1.0;
    let cmp = VlasovComparison {
        baseline: VlasovMethodSummary::from_run(baseline, cfg.dt, &rb),
        candidate: VlasovMethodSummary::from_run(candidate, cfg.dt, &rc),
        delta,
        rho,
        eta: efficiency_gain(delta, rho),
    };
    Ok((cmp, rb, rc))
}
