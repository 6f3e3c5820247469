//! Bracketed scalar root finding: Newton steps safeguarded by bisection.

use crate::error::{Error, Result};
use crate::scalar::Real;

pub const DEFAULT_ROOT_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_ITERATIONS: usize = 100;

#[derive(Debug, Clone, Copy)]
pub struct RootOptions<T> {
    /// Stop once `|f(x)| <= tol` or the bracket is narrower than `tol·max(1, |x|)`.
    pub tol: T,
    pub max_iterations: usize,
    /// Starting point inside the bracket; the midpoint when `None`.
    pub initial_guess: Option<T>,
}

impl<T: Real> Default for RootOptions<T> {
    fn default() -> Self {
        Self { tol: T::lit(DEFAULT_ROOT_TOL), max_iterations: DEFAULT_MAX_ITERATIONS, initial_guess: None }
    }
}

/// Finds a root of `f` in `[a, b]`. `fdf` returns the value and derivative.
///
/// Endpoint values may be infinite (logarithmic singularities are common in
/// implicit solution formulas) as long as their signs differ.
pub fn solve_scalar<T, F>(mut fdf: F, a: T, b: T, opts: RootOptions<T>) -> Result<T>
where
    T: Real,
    F: FnMut(T) -> (T, T),
{
    let (mut lo, mut hi) = if a <= b { (a, b) } else { (b, a) };
    let flo = fdf(lo).0;
    let fhi = fdf(hi).0;
    if flo == T::zero() {
        return Ok(lo);
    }
    if fhi == T::zero() {
        return Ok(hi);
    }
    if flo.is_nan() || fhi.is_nan() || flo.signum() == fhi.signum() {
        return Err(Error::NoSignChange { a: lo.as_f64(), b: hi.as_f64() });
    }
    let lo_negative = flo < T::zero();

    let mut x = match opts.initial_guess {
        Some(g) if g > lo && g < hi => g,
        _ => (lo + hi) * T::half(),
    };
    for _ in 0..opts.max_iterations {
        let (fx, dfx) = fdf(x);
        if fx.is_nan() {
            return Err(Error::InvalidValue("root function"));
        }
        if fx.abs() <= opts.tol {
            return Ok(x);
        }
        if (fx < T::zero()) == lo_negative {
            lo = x;
        } else {
            hi = x;
        }
        let scale = x.abs().max(T::one());
        if hi - lo <= opts.tol * scale {
            return Ok(x);
        }
        let newton = x - fx / dfx;
        let next = if newton.is_finite() && newton > lo && newton < hi { newton } else { (lo + hi) * T::half() };
        if (next - x).abs() <= opts.tol * scale {
            return Ok(next);
        }
        x = next;
    }
    Err(Error::RootNotConverged { iterations: opts.max_iterations })
}

/// Bisection only; for functions without a convenient derivative.
pub fn bisect<T, F>(mut f: F, a: T, b: T, tol: T, max_iterations: usize) -> Result<T>
where
    T: Real,
    F: FnMut(T) -> T,
{
    let (mut lo, mut hi) = if a <= b { (a, b) } else { (b, a) };
    let flo = f(lo);
    let fhi = f(hi);
    if flo == T::zero() {
        return Ok(lo);
    }
    if fhi == T::zero() {
        return Ok(hi);
    }
    if flo.is_nan() || fhi.is_nan() || flo.signum() == fhi.signum() {
        return Err(Error::NoSignChange { a: lo.as_f64(), b: hi.as_f64() });
    }
    let lo_negative = flo < T::zero();
    for _ in 0..max_iterations {
        let mid = (lo + hi) * T::half();
        if hi - lo <= tol * mid.abs().max(T::one()) {
            return Ok(mid);
        }
        let fm = f(mid);
        if fm == T::zero() {
            return Ok(mid);
        }
        if (fm < T::zero()) == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::RootNotConverged { iterations: max_iterations })
}
