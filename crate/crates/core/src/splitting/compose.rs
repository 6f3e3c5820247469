//! The s-stage composition driver.

use crate::error::{Error, FlowError, Result};
use crate::scalar::Real;

use super::method::SplittingMethod;

/// An ordered set of sub-flows `φ_ℓ(h)` acting on a problem state.
///
/// `apply` with `h = 0` must be the identity and must accept negative `h`
/// (methods such as AK32ii have negative coefficients).
pub trait SubFlowSet<T> {
    type State;

    fn num_operators(&self) -> usize;

    fn apply(&mut self, operator: usize, state: &mut Self::State, h: T) -> Result<(), FlowError>;

    /// Where `stage_hook` fires within each step, if anywhere.
    fn hook_point(&self) -> Option<HookPoint> {
        None
    }

    fn stage_hook(&mut self, _state: &mut Self::State) -> Result<(), FlowError> {
        Ok(())
    }
}

/// Position of the stage hook inside a step (zero-based indices).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HookPoint {
    pub stage: usize,
    /// Fire right after this operator's slot in the stage (whether or not
    /// its coefficient is zero) instead of at the end of the stage.
    pub after_operator: Option<usize>,
}

impl HookPoint {
    pub fn after_stage(stage: usize) -> Self {
        Self { stage, after_operator: None }
    }

    pub fn after_operator(stage: usize, operator: usize) -> Self {
        Self { stage, after_operator: Some(operator) }
    }
}

type BoxedFlow<'a, S, T> = Box<dyn FnMut(&mut S, T) -> Result<(), FlowError> + 'a>;
type BoxedHook<'a, S> = Box<dyn FnMut(&mut S) -> Result<(), FlowError> + 'a>;

/// A [`SubFlowSet`] assembled from closures.
pub struct FlowSet<'a, S, T> {
    flows: Vec<BoxedFlow<'a, S, T>>,
    hook: Option<(HookPoint, BoxedHook<'a, S>)>,
}

impl<'a, S, T> Default for FlowSet<'a, S, T> {
    fn default() -> Self {
        Self { flows: Vec::new(), hook: None }
    }
}

impl<'a, S, T> FlowSet<'a, S, T> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends an infallible flow.
    pub fn flow(mut self, f: impl FnMut(&mut S, T) + 'a) -> Self {
        let mut f = f;
        self.flows.push(Box::new(move |s, h| {
            f(s, h);
            Ok(())
        }));
        self
    }

    pub fn try_flow(mut self, f: impl FnMut(&mut S, T) -> Result<(), FlowError> + 'a) -> Self {
        self.flows.push(Box::new(f));
        self
    }

    pub fn hook_after(self, stage: usize, f: impl FnMut(&mut S) -> Result<(), FlowError> + 'a) -> Self {
        self.hook_at(HookPoint::after_stage(stage), f)
    }

    pub fn hook_at(mut self, point: HookPoint, f: impl FnMut(&mut S) -> Result<(), FlowError> + 'a) -> Self {
        self.hook = Some((point, Box::new(f)));
        self
    }
}

impl<'a, S, T> SubFlowSet<T> for FlowSet<'a, S, T> {
    type State = S;

    fn num_operators(&self) -> usize {
        self.flows.len()
    }

    fn apply(&mut self, operator: usize, state: &mut S, h: T) -> Result<(), FlowError> {
        (self.flows[operator])(state, h)
    }

    fn hook_point(&self) -> Option<HookPoint> {
        self.hook.as_ref().map(|(p, _)| *p)
    }

    fn stage_hook(&mut self, state: &mut S) -> Result<(), FlowError> {
        match self.hook.as_mut() {
            Some((_, f)) => f(state),
            None => Ok(()),
        }
    }
}

/// Advances `state` by one step of size `dt`.
///
/// Stage `k` applies `φ_1(α_k^(1) dt)`, ..., `φ_N(α_k^(N) dt)` in operator
/// order; zero coefficients are skipped without calling the flow. The
/// stage hook fires at the flow set's [`HookPoint`].
pub fn step<T, F>(method: &SplittingMethod<T>, flows: &mut F, state: &mut F::State, dt: T) -> Result<()>
where
    T: Real,
    F: SubFlowSet<T> + ?Sized,
{
    if method.num_operators() != flows.num_operators() {
        return Err(Error::OperatorMismatch { method: method.num_operators(), flows: flows.num_operators() });
    }
    if !dt.is_finite() {
        return Err(Error::InvalidArgument(format!("step size {dt} is not finite")));
    }
    let hook = flows.hook_point();
    for (k, row) in method.rows().enumerate() {
        for (l, &a) in row.iter().enumerate() {
            if a != T::zero() {
                flows
                    .apply(l, state, a * dt)
                    .map_err(|source| Error::SubFlow { stage: k, operator: l, source })?;
            }
            if hook == Some(HookPoint::after_operator(k, l)) {
                flows.stage_hook(state).map_err(|source| Error::StageHook { stage: k, source })?;
            }
        }
        if hook == Some(HookPoint::after_stage(k)) {
            flows.stage_hook(state).map_err(|source| Error::StageHook { stage: k, source })?;
        }
    }
    Ok(())
}

/// Step sizes that cover `[t0, tf]` with steps of `dt`, shortening the last one.
pub fn step_schedule<T: Real>(t0: T, tf: T, dt: T) -> Result<Vec<T>> {
    if !(dt > T::zero()) || !dt.is_finite() {
        return Err(Error::InvalidArgument(format!("step size must be positive, got {dt}")));
    }
    if !(tf > t0) {
        return Err(Error::InvalidArgument(format!("final time {tf} must exceed start {t0}")));
    }
    let span = tf - t0;
    let ratio = span / dt;
    let nearest = ratio.round();
    // Treat spans that are a multiple of dt up to rounding as exact.
    let n = if (ratio - nearest).abs() <= T::lit(1e-9) * nearest.max(T::one()) && nearest >= T::one() {
        nearest
    } else {
        ratio.ceil()
    };
    let n = n.to_usize().ok_or_else(|| Error::InvalidArgument("too many steps".into()))?;
    let mut steps = vec![dt; n];
    let last = span - T::of_usize(n - 1) * dt;
    steps[n - 1] = last.min(dt);
    Ok(steps)
}

/// Integrates from `t0` to `tf`, hitting `tf` exactly. Returns the number of
/// steps taken.
pub fn integrate<T, F>(
    method: &SplittingMethod<T>,
    flows: &mut F,
    state: &mut F::State,
    t0: T,
    tf: T,
    dt: T,
) -> Result<usize>
where
    T: Real,
    F: SubFlowSet<T> + ?Sized,
{
    integrate_with(method, flows, state, t0, tf, dt, |_, _, _| Ok(()))
}

/// Like [`integrate`], calling `observe(step_index, time, state)` after every
/// completed step.
pub fn integrate_with<T, F, O>(
    method: &SplittingMethod<T>,
    flows: &mut F,
    state: &mut F::State,
    t0: T,
    tf: T,
    dt: T,
    mut observe: O,
) -> Result<usize>
where
    T: Real,
    F: SubFlowSet<T> + ?Sized,
    O: FnMut(usize, T, &mut F::State) -> Result<()>,
{
    let schedule = step_schedule(t0, tf, dt)?;
    let n = schedule.len();
    for (i, h) in schedule.into_iter().enumerate() {
        step(method, flows, state, h)?;
        let t = if i + 1 == n { tf } else { t0 + T::of_usize(i + 1) * dt };
        observe(i, t, state)?;
    }
    Ok(n)
}
