//! The three-operator Brusselator benchmark on `[0, 1]` with constant
//! Dirichlet data.
//!
//! ```text
//! T_t = D1 T_xx + α − (β+1) T + T² C
//! C_t = D2 C_xx + β T − T² C
//! ```
//!
//! is split into diffusion, linear reaction and nonlinear reaction, each of
//! which has an exact flow.

mod flows;
mod metrics;
mod reference;
mod runner;

pub use flows::{
    subflow_linear_reaction, subflow_nonlinear_reaction, BrusselatorFlows, NonlinearMode, OperatorCounters,
};
pub use metrics::{convergence_order, least_squares_slope, max_relative_difference, mrms_error};
pub use reference::{
    load_reference, reference_solution, reference_solution_cached, save_reference, ReferenceOptions,
    ReferenceSolution, REFERENCE_FILE,
};
pub use runner::{run_method, run_sampled, run_with_flows, work_precision_sweep, write_records_csv, BrusselatorRecord};

use crate::error::{Error, Result};
use crate::kv::{parse_count, parse_key_values, parse_real};
use crate::numerics::{Boundary, CubicSpline1D};
use crate::scalar::Real;

/// Number of equally spaced points on `[0, 1]` where errors are measured.
pub const SAMPLE_POINTS: usize = 101;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BrusselatorConfig<T> {
    pub alpha: T,
    pub beta: T,
    pub d1: T,
    pub d2: T,
    /// Interior grid points; the spacing is `1 / (m + 1)`.
    pub m: usize,
    pub t_final: T,
}

impl<T: Real> Default for BrusselatorConfig<T> {
    fn default() -> Self {
        Self { alpha: T::lit(0.6), beta: T::two(), d1: T::lit(1.0 / 40.0), d2: T::lit(1.0 / 40.0), m: 200, t_final: T::lit(80.0) }
    }
}

impl<T: Real> BrusselatorConfig<T> {
    pub fn with_grid(m: usize) -> Self {
        Self { m, ..Self::default() }
    }

    /// Sets one `key = value` entry (`alpha`, `beta`, `d1`, `d2`, `m`,
    /// `t_final`; `D` sets both diffusion coefficients).
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key.trim() {
            "alpha" => self.alpha = parse_real(key, value)?,
            "beta" => self.beta = parse_real(key, value)?,
            "d1" => self.d1 = parse_real(key, value)?,
            "d2" => self.d2 = parse_real(key, value)?,
            "D" => {
                self.d1 = parse_real(key, value)?;
                self.d2 = self.d1;
            }
            "m" | "M" => self.m = parse_count(key, value)?,
            "t_final" => self.t_final = parse_real(key, value)?,
            other => return Err(Error::Config(format!("unknown Brusselator key `{other}`"))),
        }
        Ok(())
    }

    pub fn apply_str(&mut self, text: &str) -> Result<()> {
        for (k, v) in parse_key_values(text)? {
            self.set(&k, &v)?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.m < 3 {
            return Err(Error::TooFewPoints { required: 3, got: self.m });
        }
        if !(self.d1 > T::zero() && self.d2 > T::zero()) {
            return Err(Error::Config("diffusion coefficients must be positive".into()));
        }
        if self.beta == -T::one() {
            return Err(Error::Config("beta = -1 makes the linear reaction degenerate".into()));
        }
        if self.alpha == T::zero() || !self.alpha.is_finite() || !self.beta.is_finite() {
            return Err(Error::Config("alpha must be finite and nonzero".into()));
        }
        if !(self.t_final > T::zero()) {
            return Err(Error::Config("t_final must be positive".into()));
        }
        Ok(())
    }

    pub fn dx(&self) -> T {
        T::one() / T::of_usize(self.m + 1)
    }

    /// Interior abscissae `x_j = (j+1)·dx`.
    pub fn grid(&self) -> Vec<T> {
        let dx = self.dx();
        (1..=self.m).map(|j| T::of_usize(j) * dx).collect()
    }

    pub fn boundary_t(&self) -> T {
        self.alpha
    }

    pub fn boundary_c(&self) -> T {
        self.beta / self.alpha
    }

    /// `T = α + x(1−x)`, `C = β/α + x²(1−x)` on the interior grid.
    pub fn initial_state(&self) -> BrusselatorState<T> {
        let x = self.grid();
        let t = x.iter().map(|&x| self.alpha + x * (T::one() - x)).collect();
        let c = x.iter().map(|&x| self.boundary_c() + x * x * (T::one() - x)).collect();
        BrusselatorState { t, c, time: T::zero() }
    }

    /// Right-hand side of the unsplit semi-discrete system on `y = [T; C]`.
    pub fn full_rhs(&self) -> impl Fn(T, &[T], &mut [T]) + '_ {
        let m = self.m;
        let inv_dx2 = T::one() / (self.dx() * self.dx());
        let (a, b) = (self.alpha, self.beta);
        let (bt, bc) = (self.boundary_t(), self.boundary_c());
        let q = b + T::one();
        move |_t, y, dy| {
            let (tv, cv) = y.split_at(m);
            let (dt, dc) = dy.split_at_mut(m);
            for j in 0..m {
                let (tl, cl) = if j == 0 { (bt, bc) } else { (tv[j - 1], cv[j - 1]) };
                let (tr, cr) = if j + 1 == m { (bt, bc) } else { (tv[j + 1], cv[j + 1]) };
                let (tj, cj) = (tv[j], cv[j]);
                let r = tj * tj * cj;
                dt[j] = self.d1 * inv_dx2 * (tl - T::two() * tj + tr) + a - q * tj + r;
                dc[j] = self.d2 * inv_dx2 * (cl - T::two() * cj + cr) + b * tj - r;
            }
        }
    }
}

/// Concentrations `T`, `C` on the interior grid at time `time`.
#[derive(Debug, Clone, PartialEq)]
pub struct BrusselatorState<T> {
    pub t: Vec<T>,
    pub c: Vec<T>,
    pub time: T,
}

impl<T: Real> BrusselatorState<T> {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.t.iter().chain(&self.c).all(|v| v.is_finite())
    }

    /// `[T; C]` as one vector.
    pub fn to_vec(&self) -> Vec<T> {
        self.t.iter().chain(&self.c).copied().collect()
    }

    pub fn from_slice(y: &[T], time: T) -> Self {
        let m = y.len() / 2;
        Self { t: y[..m].to_vec(), c: y[m..].to_vec(), time }
    }
}

/// Interpolates an interior profile, padded with its boundary value, at the
/// [`SAMPLE_POINTS`] equally spaced points of `[0, 1]`.
///
/// A natural spline is used: at the boundary the reaction terms vanish for
/// the Dirichlet data, so a steady profile has zero curvature there. When
/// `m + 1` is a multiple of 100 the sample points are grid points and the
/// sampling is exact.
pub fn sample_profile<T: Real>(interior: &[T], boundary: T) -> Result<Vec<T>> {
    let m = interior.len();
    let n_cells = m + 1;
    let stride = n_cells / (SAMPLE_POINTS - 1);
    if n_cells % (SAMPLE_POINTS - 1) == 0 {
        let full = |i: usize| if i == 0 || i == n_cells { boundary } else { interior[i - 1] };
        return Ok((0..SAMPLE_POINTS).map(|s| full(s * stride)).collect());
    }
    let mut full = Vec::with_capacity(m + 2);
    full.push(boundary);
    full.extend_from_slice(interior);
    full.push(boundary);
    let dx = T::one() / T::of_usize(n_cells);
    let spline = CubicSpline1D::new(T::zero(), dx, &full, Boundary::Natural)?;
    let last = T::of_usize(SAMPLE_POINTS - 1);
    Ok((0..SAMPLE_POINTS)
        .map(|s| {
            // Clamp the right end against rounding just past the last knot.
            let x = (T::of_usize(s) / last).min(dx * T::of_usize(n_cells));
            spline.eval(x)
        })
        .collect())
}

/// Samples `[T; C]` (length `2·SAMPLE_POINTS`).
pub fn sample_state<T: Real>(cfg: &BrusselatorConfig<T>, state: &BrusselatorState<T>) -> Result<Vec<T>> {
    let mut out = sample_profile(&state.t, cfg.boundary_t())?;
    out.extend(sample_profile(&state.c, cfg.boundary_c())?);
    Ok(out)
}
