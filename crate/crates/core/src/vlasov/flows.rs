use std::time::Instant;

use crate::error::{FlowError, Result};
use crate::scalar::Real;
use crate::splitting::{HookPoint, SplittingMethod, SubFlowSet};

use super::advect::Advection;
use super::config::FieldSchedule;
use super::field::solve_field;
use super::phase_space::PhaseSpace;

/// Names of the three split operators, in operator order.
pub const OPERATOR_NAMES: [&str; 3] = ["advect_x", "advect_vz", "advect_vx"];

/// Call counts and accumulated wall time per sub-flow.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct OperatorTiming {
    pub calls: [usize; 3],
    pub seconds: [f64; 3],
    pub field_solves: usize,
    pub field_seconds: f64,
}

impl OperatorTiming {
    /// Mean wall time of one call of each operator (zero if never called).
    pub fn per_call_seconds(&self) -> [f64; 3] {
        std::array::from_fn(|l| if self.calls[l] == 0 { 0.0 } else { self.seconds[l] / self.calls[l] as f64 })
    }

    pub fn total_seconds(&self) -> f64 {
        self.seconds.iter().sum::<f64>() + self.field_seconds
    }
}

/// Where the field solve falls inside a step of `method`.
///
/// The default places it right after the first stage slot that advects in
/// `x`, which is the moment the charge density changes before any
/// `v_x` kick of a Strang(1-2-3)-like step.
pub fn field_hook_point<T: Real>(method: &SplittingMethod<T>, schedule: FieldSchedule) -> Option<HookPoint> {
    match schedule {
        FieldSchedule::Disabled => None,
        FieldSchedule::AfterFirstStage => Some(HookPoint::after_stage(0)),
        FieldSchedule::AfterFirstAdvection => {
            let stage = (0..method.num_stages()).find(|&k| *method.coeff(k, 0) != T::zero()).unwrap_or(0);
            Some(HookPoint::after_operator(stage, 0))
        }
    }
}

/// The split Vlasov–Poisson operators as a [`SubFlowSet`].
#[derive(Debug, Clone)]
pub struct VlasovFlows<T> {
    advection: Advection<T>,
    hook: Option<HookPoint>,
    timing: OperatorTiming,
}

impl<T: Real> VlasovFlows<T> {
    pub fn new(ps: &PhaseSpace<T>, method: &SplittingMethod<T>, schedule: FieldSchedule, parallel: bool) -> Result<Self> {
        Ok(Self {
            advection: Advection::new(ps, parallel)?,
            hook: field_hook_point(method, schedule),
            timing: OperatorTiming::default(),
        })
    }

    pub fn timing(&self) -> &OperatorTiming {
        &self.timing
    }

    pub fn reset_timing(&mut self) {
        self.timing = OperatorTiming::default();
    }

    pub fn advection(&self) -> &Advection<T> {
        &self.advection
    }
}

impl<T: Real> SubFlowSet<T> for VlasovFlows<T> {
    type State = PhaseSpace<T>;

    fn num_operators(&self) -> usize {
        3
    }

    fn apply(&mut self, operator: usize, ps: &mut PhaseSpace<T>, h: T) -> Result<(), FlowError> {
        let start = Instant::now();
        match operator {
            0 => self.advection.advect_x(ps, h),
            1 => self.advection.advect_vz(ps, h),
            2 => self.advection.advect_vx(ps, h),
            _ => return Err(format!("operator index {operator} out of range").into()),
        }
        self.timing.calls[operator] += 1;
        self.timing.seconds[operator] += start.elapsed().as_secs_f64();
        Ok(())
    }

    fn hook_point(&self) -> Option<HookPoint> {
        self.hook
    }

    fn stage_hook(&mut self, ps: &mut PhaseSpace<T>) -> Result<(), FlowError> {
        let start = Instant::now();
        solve_field(ps);
        self.timing.field_solves += 1;
        self.timing.field_seconds += start.elapsed().as_secs_f64();
        Ok(())
    }
}
