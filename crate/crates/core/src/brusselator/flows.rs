use std::sync::Arc;

use rayon::prelude::*;

use super::{BrusselatorConfig, BrusselatorState};
use crate::error::{Error, FlowError, Result};
use crate::numerics::{solve_scalar, DenseMatrix, Dopri5, ExpmCache, ReferenceIntegratorConfig, RootOptions};
use crate::scalar::Real;
use crate::splitting::SubFlowSet;

/// How the nonlinear reaction `T' = T²(k − T)` is advanced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NonlinearMode {
    /// Adaptive Dormand–Prince at the reference tolerances.
    #[default]
    Adaptive,
    /// Root of the implicit separation-of-variables relation.
    ClosedForm,
}

impl std::str::FromStr for NonlinearMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "adaptive" | "ode" => Ok(Self::Adaptive),
            "closedform" | "implicit" | "closed" => Ok(Self::ClosedForm),
            _ => Err(Error::Config(format!("unknown nonlinear mode `{s}`"))),
        }
    }
}

/// Number of calls made to each sub-flow.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OperatorCounters {
    pub calls: [usize; 3],
}

const DIFFUSION_T: u64 = 1;
const DIFFUSION_C: u64 = 2;

/// The Brusselator sub-flows: 0 = diffusion, 1 = linear reaction,
/// 2 = nonlinear reaction.
#[derive(Debug)]
pub struct BrusselatorFlows<T> {
    cfg: BrusselatorConfig<T>,
    mode: NonlinearMode,
    parallel: bool,
    op_t: DenseMatrix<T>,
    op_c: Option<DenseMatrix<T>>,
    cache: Arc<ExpmCache<T>>,
    ode_cfg: ReferenceIntegratorConfig<T>,
    ode: Dopri5<T>,
    scratch: Vec<T>,
    counters: OperatorCounters,
}

impl<T: Real> BrusselatorFlows<T> {
    pub fn new(cfg: BrusselatorConfig<T>, mode: NonlinearMode) -> Result<Self> {
        Self::with_cache(cfg, mode, Arc::new(ExpmCache::new()))
    }

    /// Shares matrix exponentials with other flow sets on the same grid.
    pub fn with_cache(cfg: BrusselatorConfig<T>, mode: NonlinearMode, cache: Arc<ExpmCache<T>>) -> Result<Self> {
        cfg.validate()?;
        let inv_dx2 = T::one() / (cfg.dx() * cfg.dx());
        let lap = DenseMatrix::tridiagonal(cfg.m, inv_dx2, -T::two() * inv_dx2, inv_dx2);
        let op_t = lap.scaled(cfg.d1);
        let op_c = (cfg.d2 != cfg.d1).then(|| lap.scaled(cfg.d2));
        Ok(Self {
            cfg,
            mode,
            parallel: false,
            op_t,
            op_c,
            cache,
            ode_cfg: ReferenceIntegratorConfig::default(),
            ode: Dopri5::new(1),
            scratch: vec![T::zero(); cfg.m],
            counters: OperatorCounters::default(),
        })
    }

    /// Maps the reaction updates over grid points with rayon.
    pub fn parallel(mut self, on: bool) -> Self {
        self.parallel = on;
        self
    }

    pub fn with_ode_config(mut self, cfg: ReferenceIntegratorConfig<T>) -> Self {
        self.ode_cfg = cfg;
        self
    }

    pub fn config(&self) -> &BrusselatorConfig<T> {
        &self.cfg
    }

    pub fn mode(&self) -> NonlinearMode {
        self.mode
    }

    pub fn counters(&self) -> OperatorCounters {
        self.counters
    }

    pub fn cache(&self) -> &Arc<ExpmCache<T>> {
        &self.cache
    }

    /// Exact diffusion flow. Subtracting the boundary constants makes the
    /// Dirichlet problem homogeneous, so the flow is `exp(h D Δ)` applied to
    /// the deviation.
    pub fn subflow_diffusion(&mut self, state: &mut BrusselatorState<T>, h: T) -> Result<()> {
        if h == T::zero() {
            return Ok(());
        }
        let et = self.cache.get_or_compute(DIFFUSION_T, &self.op_t, h)?;
        let ec = match &self.op_c {
            Some(op) => self.cache.get_or_compute(DIFFUSION_C, op, h)?,
            None => Arc::clone(&et),
        };
        let (bt, bc) = (self.cfg.boundary_t(), self.cfg.boundary_c());
        for (values, e, b) in [(&mut state.t, &et, bt), (&mut state.c, &ec, bc)] {
            for v in values.iter_mut() {
                *v -= b;
            }
            e.mul_vec(values, &mut self.scratch);
            for (v, &s) in values.iter_mut().zip(&self.scratch) {
                *v = s + b;
            }
        }
        Ok(())
    }

    pub fn subflow_nonlinear(&mut self, state: &mut BrusselatorState<T>, h: T) -> Result<()> {
        if h == T::zero() {
            return Ok(());
        }
        let mode = self.mode;
        let cfg = self.ode_cfg;
        if self.parallel {
            state
                .t
                .par_iter_mut()
                .zip(state.c.par_iter_mut())
                .try_for_each_init(|| Dopri5::new(1), |ode, (t, c)| nonlinear_point(t, c, h, mode, &cfg, ode))
        } else {
            let ode = &mut self.ode;
            state.t.iter_mut().zip(state.c.iter_mut()).try_for_each(|(t, c)| nonlinear_point(t, c, h, mode, &cfg, ode))
        }
    }
}

/// Exact linear reaction `T' = α − (β+1)T`, `C' = βT`, pointwise.
pub fn subflow_linear_reaction<T: Real>(cfg: &BrusselatorConfig<T>, state: &mut BrusselatorState<T>, h: T) {
    if h == T::zero() {
        return;
    }
    let q = cfg.beta + T::one();
    let steady = cfg.alpha / q;
    // exp(−qh) − 1, accurate for small steps.
    let em = (-q * h).exp_m1();
    for (t, c) in state.t.iter_mut().zip(state.c.iter_mut()) {
        let dev = *t - steady;
        *t += dev * em;
        *c += cfg.beta * (steady * h - dev * em / q);
    }
}

/// Nonlinear reaction `T' = T²C`, `C' = −T²C` for every grid point, using
/// the conserved sum `k = T + C`.
pub fn subflow_nonlinear_reaction<T: Real>(state: &mut BrusselatorState<T>, h: T, mode: NonlinearMode) -> Result<()> {
    let cfg = ReferenceIntegratorConfig::default();
    let mut ode = Dopri5::new(1);
    state.t.iter_mut().zip(state.c.iter_mut()).try_for_each(|(t, c)| nonlinear_point(t, c, h, mode, &cfg, &mut ode))
}

fn nonlinear_point<T: Real>(
    t: &mut T,
    c: &mut T,
    h: T,
    mode: NonlinearMode,
    cfg: &ReferenceIntegratorConfig<T>,
    ode: &mut Dopri5<T>,
) -> Result<()> {
    let k = *t + *c;
    let t0 = *t;
    if t0 == T::zero() || t0 == k || h == T::zero() {
        return Ok(());
    }
    let t1 = match mode {
        NonlinearMode::Adaptive => {
            let mut y = [t0];
            ode.integrate(|_, y: &[T], dy: &mut [T]| dy[0] = y[0] * y[0] * (k - y[0]), &mut y, T::zero(), h, cfg)?;
            y[0]
        }
        NonlinearMode::ClosedForm => implicit_nonlinear(t0, k, h)?,
    };
    *t = t1;
    *c = k - t1;
    Ok(())
}

/// Solves `G(T₁) − G(T₀) = h` on `(0, k)` for
/// `G(T) = ln|T/(T−k)|/k² − 1/(kT)`, written as a difference to avoid
/// cancellation for small `h`.
fn implicit_nonlinear<T: Real>(t0: T, k: T, h: T) -> Result<T> {
    if !(k > T::zero() && t0 > T::zero() && t0 < k) {
        return Err(Error::NoSignChange { a: 0.0, b: k.as_f64() });
    }
    let k2 = k * k;
    let f = |x: T| {
        let g = ((x - t0) / t0).ln_1p() - ((t0 - x) / (k - t0)).ln_1p();
        let value = g / k2 + (x - t0) / (k * x * t0) - h;
        let slope = T::one() / (k * x * (k - x)) + T::one() / (k * x * x);
        (value, slope)
    };
    // Explicit Euler guess, kept inside the bracket.
    let guess = t0 + h * t0 * t0 * (k - t0);
    let opts = RootOptions {
        tol: T::lit(1e-14),
        initial_guess: Some(guess.max(t0 * T::half()).min((t0 + k) * T::half())),
        ..RootOptions::default()
    };
    solve_scalar(f, T::zero(), k, opts)
}

impl<T: Real> SubFlowSet<T> for BrusselatorFlows<T> {
    type State = BrusselatorState<T>;

    fn num_operators(&self) -> usize {
        3
    }

    fn apply(&mut self, operator: usize, state: &mut Self::State, h: T) -> std::result::Result<(), FlowError> {
        self.counters.calls[operator] += 1;
        match operator {
            0 => self.subflow_diffusion(state, h)?,
            1 => subflow_linear_reaction(&self.cfg, state, h),
            2 => self.subflow_nonlinear(state, h)?,
            _ => return Err(format!("operator index {operator} out of range").into()),
        }
        Ok(())
    }
}
