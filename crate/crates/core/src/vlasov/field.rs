use crate::numerics::cumulative_trapezoid;
use crate::scalar::Real;

use super::phase_space::PhaseSpace;

/// Periodic field from a charge density: `dE/dx = ρ − mean(ρ)`, integrated
/// by the cumulative trapezoid rule, then shifted to zero mean.
pub fn field_from_density<T: Real>(rho: &[T], dx: T, out: &mut [T]) {
    let n = rho.len();
    if n == 0 {
        return;
    }
    let mean = rho.iter().copied().sum::<T>() / T::of_usize(n);
    let centred: Vec<T> = rho.iter().map(|r| *r - mean).collect();
    cumulative_trapezoid(&centred, dx, out);
    let e_mean = out.iter().copied().sum::<T>() / T::of_usize(n);
    for e in out.iter_mut() {
        *e -= e_mean;
    }
}

/// Field of the current distributions, without touching `ps.ex`.
pub fn diagnostic_field<T: Real>(ps: &PhaseSpace<T>) -> Vec<T> {
    let mut e = vec![T::zero(); ps.x.n];
    field_from_density(&ps.charge_density(), ps.x.delta, &mut e);
    e
}

/// Replaces `ps.ex` by the field of the current charge density.
pub fn solve_field<T: Real>(ps: &mut PhaseSpace<T>) {
    let e = diagnostic_field(ps);
    for (dst, src) in ps.ex.iter_mut().zip(e) {
        *dst = src;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn cosine_error(n: usize) -> f64 {
        let l = 7.0;
        let dx = l / n as f64;
        let rho: Vec<f64> = (0..n).map(|j| (2.0 * PI * j as f64 * dx / l).cos()).collect();
        let mut e = vec![0.0; n];
        field_from_density(&rho, dx, &mut e);
        let amp = l / (2.0 * PI);
        (0..n).map(|j| (e[j] - amp * (2.0 * PI * j as f64 * dx / l).sin()).abs()).fold(0.0, f64::max) / amp
    }

    #[test]
    fn cosine_density_gives_sine_field() {
        let err = cosine_error(256);
        assert!(err < 1e-3, "{err}");
        let slope = (cosine_error(128) / err).log2();
        assert!(slope > 1.9, "{slope}");
    }

    #[test]
    fn zero_density_gives_zero_field() {
        let mut e = vec![1.0; 16];
        field_from_density(&[0.0f64; 16], 0.1, &mut e);
        assert!(e.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn gauge_is_zero_mean() {
        let rho: Vec<f64> = (0..50).map(|j| ((j * j) % 7) as f64 - 2.0).collect();
        let mut e = vec![0.0; 50];
        field_from_density(&rho, 0.3, &mut e);
        assert!(e.iter().sum::<f64>().abs() / 50.0 < 1e-14);
    }
}
