//! Dormand–Prince 5(4) integrator used as the high-accuracy reference.

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy)]
pub struct ReferenceIntegratorConfig<T> {
    pub rtol: T,
    pub atol: T,
    pub max_steps: usize,
    /// First trial step; chosen automatically when `None`.
    pub initial_step: Option<T>,
}

impl<T: Real> Default for ReferenceIntegratorConfig<T> {
    fn default() -> Self {
        Self { rtol: T::lit(1e-10), atol: T::lit(1e-13), max_steps: 5_000_000, initial_step: None }
    }
}

impl<T: Real> ReferenceIntegratorConfig<T> {
    pub fn with_tolerances(rtol: T, atol: T) -> Self {
        Self { rtol, atol, ..Self::default() }
    }

    fn validate(&self) -> Result<()> {
        if !(self.rtol > T::zero() && self.atol > T::zero()) {
            return Err(Error::InvalidArgument("rtol and atol must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IntegrationStats {
    pub accepted: usize,
    pub rejected: usize,
    pub rhs_evaluations: usize,
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
// Difference between the fifth- and fourth-order weights.
const E: [f64; 7] =
    [71.0 / 57600.0, 0.0, -71.0 / 16695.0, 71.0 / 1920.0, -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0];

/// Reusable Dormand–Prince workspace for systems of a fixed dimension.
#[derive(Debug, Clone)]
pub struct Dopri5<T> {
    dim: usize,
    k: [Vec<T>; 7],
    stage: Vec<T>,
    y_new: Vec<T>,
    a: [[T; 6]; 7],
    c: [T; 7],
    e: [T; 7],
}

impl<T: Real> Dopri5<T> {
    pub fn new(dim: usize) -> Self {
        let a = A.map(|row| row.map(T::lit));
        Self {
            dim,
            k: std::array::from_fn(|_| vec![T::zero(); dim]),
            stage: vec![T::zero(); dim],
            y_new: vec![T::zero(); dim],
            a,
            c: C.map(T::lit),
            e: E.map(T::lit),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Advances `y` from `t0` to `t1` (either direction) with adaptive steps.
    pub fn integrate<F>(
        &mut self,
        mut rhs: F,
        y: &mut [T],
        t0: T,
        t1: T,
        cfg: &ReferenceIntegratorConfig<T>,
    ) -> Result<IntegrationStats>
    where
        F: FnMut(T, &[T], &mut [T]),
    {
        cfg.validate()?;
        if y.len() != self.dim {
            return Err(Error::LengthMismatch { left: y.len(), right: self.dim });
        }
        let mut stats = IntegrationStats::default();
        if t1 == t0 {
            return Ok(stats);
        }
        let dir = (t1 - t0).signum();
        let span = (t1 - t0).abs();

        rhs(t0, y, &mut self.k[0]);
        stats.rhs_evaluations += 1;
        let mut h = match cfg.initial_step {
            Some(h0) => h0.abs().min(span),
            None => self.initial_step(&mut rhs, y, t0, dir, span, cfg, &mut stats),
        };

        let mut t = t0;
        let safety = T::lit(0.9);
        let min_fac = T::lit(0.2);
        let max_fac = T::lit(10.0);
        let mut last_rejected = false;
        while (t1 - t) * dir > T::zero() {
            if stats.accepted + stats.rejected >= cfg.max_steps {
                return Err(Error::MaxStepsExceeded { max_steps: cfg.max_steps, t: t.as_f64() });
            }
            let remaining = (t1 - t).abs();
            let finishing = h >= remaining;
            if finishing {
                h = remaining;
            }
            if h <= T::epsilon() * t.abs().max(T::one()) * T::lit(4.0) && !finishing {
                return Err(Error::StepSizeUnderflow { t: t.as_f64() });
            }
            let hs = h * dir;
            let err = self.attempt(&mut rhs, y, t, hs, cfg);
            stats.rhs_evaluations += 6;
            if !err.is_finite() {
                stats.rejected += 1;
                h = h * min_fac;
                last_rejected = true;
                continue;
            }
            if err <= T::one() {
                t = if finishing { t1 } else { t + hs };
                y.copy_from_slice(&self.y_new);
                // First-same-as-last: k7 is the derivative at the new point.
                self.k.swap(0, 6);
                stats.accepted += 1;
                let mut fac = if err == T::zero() { max_fac } else { safety * err.powf(T::lit(-0.2)) };
                fac = fac.max(min_fac).min(if last_rejected { T::one() } else { max_fac });
                h = h * fac;
                last_rejected = false;
            } else {
                stats.rejected += 1;
                let fac = (safety * err.powf(T::lit(-0.2))).max(min_fac);
                h = h * fac;
                last_rejected = true;
            }
        }
        Ok(stats)
    }

    /// Takes exactly `n` equal steps without error control.
    pub fn integrate_fixed<F>(&mut self, mut rhs: F, y: &mut [T], t0: T, t1: T, n: usize) -> Result<()>
    where
        F: FnMut(T, &[T], &mut [T]),
    {
        if y.len() != self.dim {
            return Err(Error::LengthMismatch { left: y.len(), right: self.dim });
        }
        if n == 0 {
            return Err(Error::InvalidArgument("fixed-step integration needs at least one step".into()));
        }
        let h = (t1 - t0) / T::of_usize(n);
        let cfg = ReferenceIntegratorConfig::default();
        for i in 0..n {
            let t = t0 + T::of_usize(i) * h;
            rhs(t, y, &mut self.k[0]);
            self.attempt(&mut rhs, y, t, h, &cfg);
            y.copy_from_slice(&self.y_new);
        }
        Ok(())
    }

    /// One trial step of signed size `h` from `(t, y)`, with `k[0] = f(t, y)`
    /// already set. Returns the scaled error norm.
    fn attempt<F>(&mut self, rhs: &mut F, y: &[T], t: T, h: T, cfg: &ReferenceIntegratorConfig<T>) -> T
    where
        F: FnMut(T, &[T], &mut [T]),
    {
        for s in 1..7 {
            for i in 0..self.dim {
                let mut acc = T::zero();
                for j in 0..s {
                    acc += self.a[s][j] * self.k[j][i];
                }
                self.stage[i] = y[i] + h * acc;
            }
            let (_, rest) = self.k.split_at_mut(s);
            rhs(t + self.c[s] * h, &self.stage, &mut rest[0]);
        }
        // Row 7 of the tableau holds the propagated fifth-order weights, so
        // the last stage point is the new solution.
        self.y_new.copy_from_slice(&self.stage);

        let mut sum = T::zero();
        for i in 0..self.dim {
            let mut est = T::zero();
            for j in 0..7 {
                est += self.e[j] * self.k[j][i];
            }
            let sc = cfg.atol + cfg.rtol * y[i].abs().max(self.y_new[i].abs());
            let r = h * est / sc;
            sum += r * r;
        }
        (sum / T::of_usize(self.dim.max(1))).sqrt()
    }

    #[allow(clippy::too_many_arguments)]
    fn initial_step<F>(
        &mut self,
        rhs: &mut F,
        y: &[T],
        t0: T,
        dir: T,
        span: T,
        cfg: &ReferenceIntegratorConfig<T>,
        stats: &mut IntegrationStats,
    ) -> T
    where
        F: FnMut(T, &[T], &mut [T]),
    {
        let n = T::of_usize(self.dim.max(1));
        let mut d0 = T::zero();
        let mut d1 = T::zero();
        for i in 0..self.dim {
            let sc = cfg.atol + cfg.rtol * y[i].abs();
            d0 += (y[i] / sc).powi(2);
            d1 += (self.k[0][i] / sc).powi(2);
        }
        let (d0, d1) = ((d0 / n).sqrt(), (d1 / n).sqrt());
        let tiny = T::lit(1e-5);
        let h0 = if d0 < tiny || d1 < tiny { T::lit(1e-6) } else { T::lit(0.01) * d0 / d1 };
        let h0 = h0.min(span);
        for i in 0..self.dim {
            self.stage[i] = y[i] + dir * h0 * self.k[0][i];
        }
        rhs(t0 + dir * h0, &self.stage, &mut self.k[1]);
        stats.rhs_evaluations += 1;
        let mut d2 = T::zero();
        for i in 0..self.dim {
            let sc = cfg.atol + cfg.rtol * y[i].abs();
            d2 += ((self.k[1][i] - self.k[0][i]) / sc).powi(2);
        }
        let d2 = (d2 / n).sqrt() / h0;
        let big = d1.max(d2);
        let h1 = if big <= T::lit(1e-15) {
            (h0 * T::lit(1e-3)).max(T::lit(1e-6))
        } else {
            (T::lit(0.01) / big).powf(T::lit(0.2))
        };
        (T::lit(100.0) * h0).min(h1).min(span)
    }
}

/// Integrates `y' = rhs(t, y)` from `t0` to `t1` and returns the endpoint.
pub fn reference_solve<T, F>(rhs: F, y0: &[T], t0: T, t1: T, cfg: &ReferenceIntegratorConfig<T>) -> Result<Vec<T>>
where
    T: Real,
    F: FnMut(T, &[T], &mut [T]),
{
    let mut y = y0.to_vec();
    Dopri5::new(y0.len()).integrate(rhs, &mut y, t0, t1, cfg)?;
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay() {
        let y = reference_solve(|_, y: &[f64], dy: &mut [f64]| dy[0] = -y[0], &[1.0], 0.0, 1.0, &Default::default())
            .unwrap();
        assert!((y[0] - (-1.0f64).exp()).abs() <= 1e-9);
    }

    #[test]
    fn zero_rhs_keeps_state() {
        let y0 = [0.3, -2.0, 7.5];
        let y = reference_solve(|_, _: &[f64], dy: &mut [f64]| dy.fill(0.0), &y0, 0.0, 3.0, &Default::default())
            .unwrap();
        assert_eq!(y, y0);
    }

    #[test]
    fn backward_in_time() {
        let y = reference_solve(|_, y: &[f64], dy: &mut [f64]| dy[0] = -y[0], &[1.0], 1.0, 0.0, &Default::default())
            .unwrap();
        assert!((y[0] - 1.0f64.exp()).abs() <= 1e-9);
    }

    #[test]
    fn harmonic_oscillator_period() {
        let rhs = |_: f64, y: &[f64], dy: &mut [f64]| {
            dy[0] = y[1];
            dy[1] = -y[0];
        };
        let y = reference_solve(rhs, &[1.0, 0.0], 0.0, 2.0 * std::f64::consts::PI, &Default::default()).unwrap();
        assert!((y[0] - 1.0).abs() < 1e-9 && y[1].abs() < 1e-9);
    }

    #[test]
    fn step_cap_is_reported() {
        let cfg = ReferenceIntegratorConfig { max_steps: 3, ..Default::default() };
        let err = reference_solve(|_, y: &[f64], dy: &mut [f64]| dy[0] = -y[0], &[1.0], 0.0, 50.0, &cfg).unwrap_err();
        assert!(matches!(err, Error::MaxStepsExceeded { max_steps: 3, .. }));
    }

    #[test]
    fn fixed_step_order_is_five() {
        let exact = (-2.0f64).exp();
        let mut solver = Dopri5::new(1);
        let mut errs = Vec::new();
        for n in [8, 16] {
            let mut y = [1.0];
            solver.integrate_fixed(|_, y: &[f64], dy: &mut [f64]| dy[0] = -y[0], &mut y, 0.0, 2.0, n).unwrap();
            errs.push((y[0] - exact).abs());
        }
        let p = (errs[0] / errs[1]).log2();
        assert!(p >= 5.0, "observed order {p}");
    }
}
