use crate::error::{Error, Result};
use crate::scalar::Real;

/// Mixed root-mean-square error `sqrt(mean(((ref − y) / (1 + |ref|))²))`.
pub fn mrms_error<T: Real>(y: &[T], y_ref: &[T]) -> Result<T> {
    if y.len() != y_ref.len() {
        return Err(Error::LengthMismatch { left: y.len(), right: y_ref.len() });
    }
    if y.is_empty() {
        return Err(Error::TooFewPoints { required: 1, got: 0 });
    }
    let sum: T = y
        .iter()
        .zip(y_ref)
        .map(|(&v, &r)| {
            let e = (r - v) / (T::one() + r.abs());
            e * e
        })
        .sum();
    Ok((sum / T::of_usize(y.len())).sqrt())
}

/// Observed orders `log(e₁/e₂) / log(dt₁/dt₂)` for consecutive pairs.
pub fn convergence_order<T: Real>(errors: &[(T, T)]) -> Result<Vec<T>> {
    if errors.len() < 2 {
        return Err(Error::TooFewPoints { required: 2, got: errors.len() });
    }
    for &(dt, e) in errors {
        if !(e > T::zero()) || !e.is_finite() || !(dt > T::zero()) {
            return Err(Error::InvalidValue("convergence data"));
        }
    }
    errors
        .windows(2)
        .map(|w| {
            let ((d1, e1), (d2, e2)) = (w[0], w[1]);
            if d1 == d2 {
                return Err(Error::InvalidArgument("repeated step size in convergence data".into()));
            }
            Ok((e1 / e2).ln() / (d1 / d2).ln())
        })
        .collect()
}

/// Least-squares slope of `log e` against `log dt`.
pub fn least_squares_slope<T: Real>(errors: &[(T, T)]) -> Result<T> {
    if errors.len() < 2 {
        return Err(Error::TooFewPoints { required: 2, got: errors.len() });
    }
    let pts: Vec<(T, T)> = errors.iter().map(|&(d, e)| (d.ln(), e.ln())).collect();
    if pts.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
        return Err(Error::InvalidValue("convergence data"));
    }
    let n = T::of_usize(pts.len());
    let mx = pts.iter().map(|p| p.0).sum::<T>() / n;
    let my = pts.iter().map(|p| p.1).sum::<T>() / n;
    let sxy: T = pts.iter().map(|&(x, y)| (x - mx) * (y - my)).sum();
    let sxx: T = pts.iter().map(|&(x, _)| (x - mx) * (x - mx)).sum();
    if sxx == T::zero() {
        return Err(Error::InvalidArgument("all step sizes are equal".into()));
    }
    Ok(sxy / sxx)
}

/// `max |a − b| / max |b|`.
pub fn max_relative_difference<T: Real>(a: &[T], b: &[T]) -> T {
    let scale = b.iter().fold(T::zero(), |m, v| m.max(v.abs()));
    let diff = a.iter().zip(b).fold(T::zero(), |m, (&x, &y)| m.max((x - y).abs()));
    if scale == T::zero() {
        diff
    } else {
        diff / scale
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mrms_examples() {
        assert_eq!(mrms_error(&[1.0, 2.0], &[1.0, 2.0]).unwrap(), 0.0);
        assert!((mrms_error(&[0.1f64; 7], &[0.0; 7]).unwrap() - 0.1).abs() < 1e-15);
        assert!((mrms_error(&[1.1f64; 7], &[1.0; 7]).unwrap() - 0.05).abs() < 1e-15);
        assert!(matches!(mrms_error(&[1.0], &[1.0, 2.0]), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn synthetic_orders() {
        let second: Vec<(f64, f64)> = [0.2, 0.1, 0.05].iter().map(|&h| (h, 3.0 * h * h)).collect();
        for p in convergence_order(&second).unwrap() {
            assert!((p - 2.0).abs() < 1e-12);
        }
        let first: Vec<(f64, f64)> = [0.4, 0.2, 0.1].iter().map(|&h| (h, 0.7 * h)).collect();
        for p in convergence_order(&first).unwrap() {
            assert!((p - 1.0).abs() < 1e-12);
        }
        assert!((least_squares_slope(&second).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn invalid_errors_rejected() {
        assert!(convergence_order(&[(0.1, 0.0), (0.05, 1.0)]).is_err());
        assert!(convergence_order(&[(0.1, f64::NAN), (0.05, 1.0)]).is_err());
        assert!(convergence_order::<f64>(&[(0.1, 1.0)]).is_err());
    }
}
