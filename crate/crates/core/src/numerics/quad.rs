//! Composite quadrature on uniform grids.

use crate::scalar::Real;

/// Composite trapezoid rule. Fewer than two samples integrate to zero.
pub fn trapezoid<T: Real>(values: &[T], spacing: T) -> T {
    match values {
        [] | [_] => T::zero(),
        [first, inner @ .., last] => spacing * ((*first + *last) * T::half() + inner.iter().copied().sum::<T>()),
    }
}

/// Rectangle sum over one period of a periodic integrand sampled at
/// `x0, x0 + dx, …` (the endpoint is not repeated). This is the trapezoid
/// rule for periodic data.
pub fn periodic_sum<T: Real>(values: &[T], spacing: T) -> T {
    spacing * values.iter().copied().sum::<T>()
}

/// Running trapezoid integral; `out[0] = 0` and `out[j]` covers `[x_0, x_j]`.
pub fn cumulative_trapezoid<T: Real>(values: &[T], spacing: T, out: &mut [T]) {
    debug_assert_eq!(values.len(), out.len());
    let mut acc = T::zero();
    if let Some(o) = out.first_mut() {
        *o = T::zero();
    }
    for j in 1..values.len() {
        acc += spacing * T::half() * (values[j - 1] + values[j]);
        out[j] = acc;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant() {
        assert!((trapezoid(&[2.5f64; 11], 0.3) - 2.5 * 3.0).abs() < 1e-14);
    }

    #[test]
    fn linear_ramp_is_exact() {
        for n in [2, 3, 7, 100] {
            let dx = 1.0 / (n - 1) as f64;
            let v: Vec<f64> = (0..n).map(|j| j as f64 * dx).collect();
            assert!((trapezoid(&v, dx) - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn gaussian_over_eight_sigma() {
        let sigma = 1.7;
        let n = 200;
        let dx = 16.0 * sigma / (n - 1) as f64;
        let v: Vec<f64> = (0..n).map(|j| {
            let x = -8.0 * sigma + j as f64 * dx;
            (-x * x / (2.0 * sigma * sigma)).exp()
        }).collect();
        let exact = (2.0 * std::f64::consts::PI).sqrt() * sigma;
        assert!(((trapezoid(&v, dx) - exact) / exact).abs() <= 1e-8);
    }

    #[test]
    fn periodic_sum_of_cosine() {
        let n = 16;
        let dx = 1.0 / n as f64;
        let v: Vec<f64> = (0..n).map(|j| 1.0 + (2.0 * std::f64::consts::PI * j as f64 * dx).cos()).collect();
        assert!((periodic_sum(&v, dx) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn cumulative_matches_total() {
        let v: Vec<f64> = (0..9).map(|j| (j as f64 * 0.4).sin()).collect();
        let mut c = vec![0.0; 9];
        cumulative_trapezoid(&v, 0.1, &mut c);
        assert_eq!(c[0], 0.0);
        assert!((c[8] - trapezoid(&v, 0.1)).abs() < 1e-15);
        assert!(trapezoid(&[1.0f64], 1.0) == 0.0);
    }
}
