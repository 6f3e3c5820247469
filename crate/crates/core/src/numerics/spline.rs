//! Interpolating cubic splines on uniform grids, plus the constant-shift
//! kernel used by the semi-Lagrangian advection steps.
//!
//! Second derivatives are stored in index units (per grid spacing squared),
//! which keeps the shift kernel independent of the physical spacing.

use crate::error::{Error, Result};
use crate::scalar::Real;

use super::tridiag::{CyclicTridiagonalLu, TridiagonalLu};

/// Minimum number of knots accepted by the spline builders.
pub const MIN_KNOTS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    /// `y(x + n·dx) = y(x)`; knots `x0 .. x0 + (n-1)·dx`, period `n·dx`.
    Periodic,
    /// Zero second derivative at both end knots.
    Natural,
}

#[derive(Debug, Clone)]
enum Factor<T> {
    Natural(TridiagonalLu<T>),
    Periodic(CyclicTridiagonalLu<T>),
}

/// Pre-factored spline system for lines of a fixed length.
#[derive(Debug, Clone)]
pub struct SplineKernel<T> {
    n: usize,
    boundary: Boundary,
    factor: Factor<T>,
}

impl<T: Real> SplineKernel<T> {
    pub fn new(n: usize, boundary: Boundary) -> Result<Self> {
        if n < MIN_KNOTS {
            return Err(Error::TooFewPoints { required: MIN_KNOTS, got: n });
        }
        let four = T::lit(4.0);
        let factor = match boundary {
            Boundary::Natural => {
                let m = n - 2;
                Factor::Natural(TridiagonalLu::new(&vec![T::one(); m], &vec![four; m], &vec![T::one(); m])?)
            }
            Boundary::Periodic => {
                Factor::Periodic(CyclicTridiagonalLu::new(&vec![T::one(); n], &vec![four; n], &vec![T::one(); n])?)
            }
        };
        Ok(Self { n, boundary, factor })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    /// Second derivatives (index units) of the spline through `y`.
    pub fn second_derivatives(&self, y: &[T], m: &mut [T]) {
        let n = self.n;
        debug_assert_eq!(y.len(), n);
        debug_assert_eq!(m.len(), n);
        let six = T::lit(6.0);
        let two = T::two();
        match &self.factor {
            Factor::Natural(lu) => {
                m[0] = T::zero();
                m[n - 1] = T::zero();
                for j in 1..n - 1 {
                    m[j] = six * (y[j - 1] - two * y[j] + y[j + 1]);
                }
                lu.solve_in_place(&mut m[1..n - 1]);
            }
            Factor::Periodic(lu) => {
                for j in 0..n {
                    let prev = y[(j + n - 1) % n];
                    let next = y[(j + 1) % n];
                    m[j] = six * (prev - two * y[j] + next);
                }
                lu.solve_in_place(m);
            }
        }
    }

    /// Writes `out[j] = s(j - shift)` for every knot `j`, where `s` is the
    /// spline through `y` in index coordinates. Natural lines return `fill`
    /// for feet outside `[0, n-1]`; periodic lines wrap.
    pub fn shift(&self, y: &[T], shift: T, fill: T, out: &mut [T], scratch: &mut [T]) {
        let n = self.n;
        if shift == T::zero() {
            out.copy_from_slice(y);
            return;
        }
        self.second_derivatives(y, scratch);
        let m = &*scratch;

        if !shift.is_finite() {
            out.iter_mut().for_each(|o| *o = T::nan());
            return;
        }
        let len = T::of_usize(n);
        let neg = match self.boundary {
            // Whole periods do not matter; reducing keeps the index finite.
            Boundary::Periodic => {
                let r = -shift;
                r - len * (r / len).floor()
            }
            Boundary::Natural => {
                if shift.abs() > len {
                    out.iter_mut().for_each(|o| *o = fill);
                    return;
                }
                -shift
            }
        };
        let base = neg.floor();
        let t = neg - base;
        let offset = base.to_i64().expect("reduced shift is finite");
        let one = T::one();
        let sixth = T::lit(1.0 / 6.0);
        let w0 = one - t;
        let w1 = t;
        let c0 = (w0 * w0 * w0 - w0) * sixth;
        let c1 = (t * t * t - t) * sixth;

        match self.boundary {
            Boundary::Periodic => {
                let n_i = n as i64;
                for (j, o) in out.iter_mut().enumerate() {
                    let i = (j as i64 + offset).rem_euclid(n_i) as usize;
                    let ip = if i + 1 == n { 0 } else { i + 1 };
                    *o = w0 * y[i] + w1 * y[ip] + c0 * m[i] + c1 * m[ip];
                }
            }
            Boundary::Natural => {
                let last = n as i64 - 1;
                for (j, o) in out.iter_mut().enumerate() {
                    let i = j as i64 + offset;
                    *o = if t == T::zero() {
                        if (0..=last).contains(&i) {
                            y[i as usize]
                        } else {
                            fill
                        }
                    } else if (0..last).contains(&i) {
                        let i = i as usize;
                        w0 * y[i] + w1 * y[i + 1] + c0 * m[i] + c1 * m[i + 1]
                    } else {
                        fill
                    };
                }
            }
        }
    }
}

/// Cubic spline through uniformly spaced samples.
#[derive(Debug, Clone)]
pub struct CubicSpline1D<T> {
    x0: T,
    dx: T,
    values: Vec<T>,
    second: Vec<T>,
    boundary: Boundary,
}

impl<T: Real> CubicSpline1D<T> {
    pub fn new(x0: T, dx: T, values: &[T], boundary: Boundary) -> Result<Self> {
        if !(dx > T::zero()) || !dx.is_finite() {
            return Err(Error::InvalidArgument(format!("knot spacing must be positive, got {dx}")));
        }
        let kernel = SplineKernel::new(values.len(), boundary)?;
        let mut second = vec![T::zero(); values.len()];
        kernel.second_derivatives(values, &mut second);
        Ok(Self { x0, dx, values: values.to_vec(), second, boundary })
    }

    pub fn knots(&self) -> impl Iterator<Item = T> + '_ {
        (0..self.values.len()).map(move |j| self.x0 + T::of_usize(j) * self.dx)
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    /// Interval index and local coordinate in `[0, 1]`; `None` outside a
    /// natural spline's knot range.
    fn locate(&self, x: T) -> Option<(usize, usize, T)> {
        let n = self.values.len();
        let u = (x - self.x0) / self.dx;
        match self.boundary {
            Boundary::Periodic => {
                let nn = T::of_usize(n);
                let mut w = u - (u / nn).floor() * nn;
                if w >= nn {
                    w = w - nn;
                }
                let i = w.floor().to_usize().unwrap_or(0).min(n - 1);
                Some((i, (i + 1) % n, w - T::of_usize(i)))
            }
            Boundary::Natural => {
                let last = T::of_usize(n - 1);
                if !(u >= T::zero() && u <= last) {
                    return None;
                }
                let i = u.floor().to_usize().unwrap_or(0).min(n - 2);
                Some((i, i + 1, u - T::of_usize(i)))
            }
        }
    }

    /// Value at `x`, or `fill` outside a natural spline's range.
    pub fn eval_or(&self, x: T, fill: T) -> T {
        match self.locate(x) {
            Some((i, ip, t)) => {
                let (y, m) = (&self.values, &self.second);
                let s = T::one() - t;
                let sixth = T::lit(1.0 / 6.0);
                s * y[i] + t * y[ip] + (s * s * s - s) * sixth * m[i] + (t * t * t - t) * sixth * m[ip]
            }
            None => fill,
        }
    }

    /// Value at `x`; natural splines return zero outside their range.
    pub fn eval(&self, x: T) -> T {
        self.eval_or(x, T::zero())
    }

    pub fn derivative(&self, x: T) -> Option<T> {
        let (i, ip, t) = self.locate(x)?;
        let (y, m) = (&self.values, &self.second);
        let s = T::one() - t;
        let three = T::lit(3.0);
        let sixth = T::lit(1.0 / 6.0);
        let du = y[ip] - y[i] + (T::one() - three * s * s) * sixth * m[i] + (three * t * t - T::one()) * sixth * m[ip];
        Some(du / self.dx)
    }

    pub fn second_derivative(&self, x: T) -> Option<T> {
        let (i, ip, t) = self.locate(x)?;
        let d2 = (T::one() - t) * self.second[i] + t * self.second[ip];
        Some(d2 / (self.dx * self.dx))
    }

    /// Coefficients `[a, b, c, d]` of interval `i` in the local variable
    /// `x - x_i` (physical units).
    pub fn interval_coefficients(&self, i: usize) -> [T; 4] {
        let n = self.values.len();
        let ip = (i + 1) % n;
        let h = self.dx;
        let (y, m) = (&self.values, &self.second);
        let (mi, mp) = (m[i] / (h * h), m[ip] / (h * h));
        let six = T::lit(6.0);
        [y[i], (y[ip] - y[i]) / h - h * (T::two() * mi + mp) / six, mi / T::two(), (mp - mi) / (six * h)]
    }
}

/// Evaluates the spline through `values` at `x_j - shift·dx` for every knot.
/// Periodic splines wrap; natural splines return `fill` outside the knots.
pub fn spline_shift<T: Real>(values: &[T], shift: T, boundary: Boundary, fill: T) -> Result<Vec<T>> {
    let kernel = SplineKernel::new(values.len(), boundary)?;
    let mut out = vec![T::zero(); values.len()];
    let mut scratch = vec![T::zero(); values.len()];
    kernel.shift(values, shift, fill, &mut out, &mut scratch);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn too_few_knots() {
        assert!(matches!(
            CubicSpline1D::new(0.0, 1.0, &[1.0, 2.0, 3.0], Boundary::Natural),
            Err(Error::TooFewPoints { .. })
        ));
    }

    #[test]
    fn reproduces_linear_functions() {
        let y: Vec<f64> = (0..9).map(|j| 2.0 - 0.75 * j as f64 * 0.5).collect();
        let s = CubicSpline1D::new(0.0, 0.5, &y, Boundary::Natural).unwrap();
        for k in 0..=80 {
            let x = 4.0 * k as f64 / 80.0;
            assert!((s.eval(x) - (2.0 - 0.75 * x)).abs() < 1e-14);
        }
    }

    #[test]
    fn constant_spline() {
        for b in [Boundary::Natural, Boundary::Periodic] {
            let s = CubicSpline1D::new(-1.0, 0.1, &[3.5; 10], b).unwrap();
            for k in 0..40 {
                assert!((s.eval(-1.0 + 0.0223 * k as f64) - 3.5).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn periodic_sine_off_knot() {
        let n = 32;
        let l = 2.0;
        let dx = l / n as f64;
        let y: Vec<f64> = (0..n).map(|j| (2.0 * PI * j as f64 * dx / l).sin()).collect();
        let s = CubicSpline1D::new(0.0, dx, &y, Boundary::Periodic).unwrap();
        let mut worst: f64 = 0.0;
        for k in 0..n {
            let x = (k as f64 + 0.37) * dx;
            worst = worst.max((s.eval(x) - (2.0 * PI * x / l).sin()).abs());
        }
        assert!(worst <= 1e-5, "max error {worst}");
        // Wrapping outside one period.
        assert!((s.eval(0.3 + 3.0 * l) - s.eval(0.3)).abs() < 1e-12);
        assert!((s.eval(0.3 - l) - s.eval(0.3)).abs() < 1e-12);
    }

    #[test]
    fn knot_values_and_c2_continuity() {
        let y: Vec<f64> = (0..15).map(|j| ((j * j) as f64 * 0.13).sin()).collect();
        for b in [Boundary::Natural, Boundary::Periodic] {
            let s = CubicSpline1D::new(1.0, 0.2, &y, b).unwrap();
            for (j, x) in s.knots().enumerate() {
                assert!((s.eval(x) - y[j]).abs() < 1e-14);
            }
            for i in 1..14 {
                let prev = s.interval_coefficients(i - 1);
                let here = s.interval_coefficients(i);
                let h = 0.2;
                let left2 = 2.0 * prev[2] + 6.0 * prev[3] * h;
                let right2 = 2.0 * here[2];
                assert!((left2 - right2).abs() <= 1e-9 * (1.0 + right2.abs()));
                let left1 = prev[1] + 2.0 * prev[2] * h + 3.0 * prev[3] * h * h;
                assert!((left1 - here[1]).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn natural_ends_have_zero_curvature() {
        let y: Vec<f64> = (0..8).map(|j| (j as f64).exp().ln_1p()).collect();
        let s = CubicSpline1D::new(0.0, 1.0, &y, Boundary::Natural).unwrap();
        assert!(s.second_derivative(0.0).unwrap().abs() < 1e-14);
        assert!(s.second_derivative(7.0).unwrap().abs() < 1e-12);
        assert_eq!(s.eval_or(7.5, -1.0), -1.0);
    }

    #[test]
    fn periodic_ends_match() {
        let n = 20;
        let y: Vec<f64> = (0..n).map(|j| (j as f64 * 0.7).cos() + (j as f64 * 0.2).sin()).collect();
        let s = CubicSpline1D::new(0.0, 0.1, &y, Boundary::Periodic).unwrap();
        let p = n as f64 * 0.1;
        let eps = 1e-9;
        assert!((s.eval(p - eps) - s.eval(eps)).abs() < 1e-7);
        assert!((s.derivative(p - eps).unwrap() - s.derivative(eps).unwrap()).abs() < 1e-6);
        assert!((s.second_derivative(p - eps).unwrap() - s.second_derivative(eps).unwrap()).abs() < 1e-5);
    }

    #[test]
    fn integer_periodic_shift_rotates() {
        let y: Vec<f64> = (0..10).map(|j| (j as f64 * 1.3).sin()).collect();
        let out = spline_shift(&y, 3.0, Boundary::Periodic, 0.0).unwrap();
        for j in 0..10 {
            assert_eq!(out[j], y[(j + 7) % 10]);
        }
        let out = spline_shift(&y, -13.0, Boundary::Periodic, 0.0).unwrap();
        for j in 0..10 {
            assert_eq!(out[j], y[(j + 3) % 10]);
        }
    }

    #[test]
    fn zero_shift_is_identity() {
        let y: Vec<f64> = (0..10).map(|j| (j as f64 * 1.3).sin()).collect();
        assert_eq!(spline_shift(&y, 0.0, Boundary::Natural, 0.0).unwrap(), y);
    }

    #[test]
    fn half_cell_shift_of_linear_profile() {
        let y: Vec<f64> = (0..12).map(|j| 1.0 + 0.5 * j as f64).collect();
        let out = spline_shift(&y, 0.5, Boundary::Natural, 0.0).unwrap();
        assert_eq!(out[0], 0.0);
        for j in 1..12 {
            assert!((out[j] - (1.0 + 0.5 * (j as f64 - 0.5))).abs() < 1e-13);
        }
        let out = spline_shift(&y, -0.5, Boundary::Natural, 7.0).unwrap();
        assert_eq!(out[11], 7.0);
    }

    #[test]
    fn kernel_matches_spline_evaluation() {
        let n = 24;
        let y: Vec<f64> = (0..n).map(|j| (-(j as f64 - 11.0).powi(2) / 10.0).exp()).collect();
        for b in [Boundary::Natural, Boundary::Periodic] {
            let s = CubicSpline1D::new(0.0, 1.0, &y, b).unwrap();
            for shift in [0.3, -2.71, 5.5, 30.2] {
                let out = spline_shift(&y, shift, b, 0.0).unwrap();
                for j in 0..n {
                    let expect = s.eval_or(j as f64 - shift, 0.0);
                    assert!((out[j] - expect).abs() < 1e-13, "{b:?} shift {shift} j {j}");
                }
            }
        }
    }
}
