use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{sample_state, BrusselatorConfig, BrusselatorFlows, BrusselatorState, NonlinearMode};
use crate::error::{Error, Result};
use crate::harness::timing_protocol;
use crate::numerics::ExpmCache;
use crate::scalar::Real;
use crate::splitting::{integrate, SplittingMethod};

/// Integrates from the initial data to `t_final` with the given flows.
pub fn run_with_flows<T: Real>(
    flows: &mut BrusselatorFlows<T>,
    method: &SplittingMethod<T>,
    dt: T,
) -> Result<(BrusselatorState<T>, usize)> {
    let cfg = *flows.config();
    let mut state = cfg.initial_state();
    let steps = integrate(method, flows, &mut state, T::zero(), cfg.t_final, dt)?;
    state.time = cfg.t_final;
    if !state.is_finite() {
        return Err(Error::Blowup { step: steps, t: cfg.t_final.as_f64(), reason: format!("{} produced non-finite concentrations", method.name()) });
    }
    Ok((state, steps))
}

/// Runs `method` with step `dt` on a fresh flow set.
pub fn run_method<T: Real>(
    cfg: &BrusselatorConfig<T>,
    method: &SplittingMethod<T>,
    dt: T,
    mode: NonlinearMode,
) -> Result<(BrusselatorState<T>, usize)> {
    let mut flows = BrusselatorFlows::new(*cfg, mode)?;
    run_with_flows(&mut flows, method, dt)
}

/// Like [`run_method`] but returns the sampled `[T; C]` profile.
pub fn run_sampled<T: Real>(
    cfg: &BrusselatorConfig<T>,
    method: &SplittingMethod<T>,
    dt: T,
    mode: NonlinearMode,
) -> Result<(Vec<T>, usize)> {
    let (state, steps) = run_method(cfg, method, dt, mode)?;
    Ok((sample_state(cfg, &state)?, steps))
}

/// One row of the Brusselator work-precision table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BrusselatorRecord {
    pub method: String,
    pub dt: f64,
    pub steps: usize,
    pub mrms: f64,
    pub wall_seconds: f64,
}

/// Times every `(method, dt)` pair (minimum over `repeats`) and records the
/// MRMS error against `reference`.
pub fn work_precision_sweep<T: Real>(
    cfg: &BrusselatorConfig<T>,
    methods: &[SplittingMethod<T>],
    dts: &[T],
    reference: &[T],
    mode: NonlinearMode,
    repeats: usize,
) -> Result<Vec<BrusselatorRecord>> {
    let cache = Arc::new(ExpmCache::new());
    let mut out = Vec::with_capacity(methods.len() * dts.len());
    for method in methods {
        for &dt in dts {
            let mut flows = BrusselatorFlows::with_cache(*cfg, mode, Arc::clone(&cache))?;
            let mut result = None;
            let timing = timing_protocol(
                || {
                    result = Some(run_with_flows(&mut flows, method, dt)?);
                    Ok(())
                },
                repeats,
            )?;
            let (state, steps) = result.expect("timing runs the closure at least once");
            let mrms = super::mrms_error(&sample_state(cfg, &state)?, reference)?;
            out.push(BrusselatorRecord {
                method: method.name().to_string(),
                dt: dt.as_f64(),
                steps,
                mrms: mrms.as_f64(),
                wall_seconds: timing.min_seconds,
            });
        }
    }
    Ok(out)
}

/// Writes records with the header `method,dt,steps,mrms,wall_seconds`.
pub fn write_records_csv(path: &Path, records: &[BrusselatorRecord]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::csv(path, e))?;
    for r in records {
        w.serialize(r).map_err(|e| Error::csv(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::splitting::{builtin_method, MethodId};

    #[test]
    fn short_run_counts_steps() {
        let cfg = BrusselatorConfig { m: 20, t_final: 1.0, ..BrusselatorConfig::default() };
        let m = builtin_method(MethodId::Strang([1, 2, 0]));
        let (state, steps) = run_method(&cfg, &m, 0.1, NonlinearMode::ClosedForm).unwrap();
        assert_eq!(steps, 10);
        assert!(state.is_finite());
    }

    #[test]
    fn records_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("wp.csv");
        let recs = vec![BrusselatorRecord { method: "AK32i".into(), dt: 0.1, steps: 800, mrms: 4.0e-3, wall_seconds: 0.25 }];
        write_records_csv(&path, &recs).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("method,dt,steps,mrms,wall_seconds\n"));
        let back: Vec<BrusselatorRecord> =
            csv::Reader::from_path(&path).unwrap().deserialize().collect::<std::result::Result<_, _>>().unwrap();
        assert_eq!(back, recs);
    }
}
