//! Tridiagonal and cyclic tridiagonal solvers.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Thomas algorithm. `sub[0]` and `sup[n-1]` are ignored.
pub fn solve_tridiagonal<T: Real>(sub: &[T], diag: &[T], sup: &[T], rhs: &[T]) -> Result<Vec<T>> {
    let lu = TridiagonalLu::new(sub, diag, sup)?;
    if rhs.len() != diag.len() {
        return Err(Error::LengthMismatch { left: rhs.len(), right: diag.len() });
    }
    let mut x = rhs.to_vec();
    lu.solve_in_place(&mut x);
    Ok(x)
}

/// Factored tridiagonal matrix, reusable across right-hand sides.
#[derive(Debug, Clone)]
pub struct TridiagonalLu<T> {
    sub: Vec<T>,
    // Modified super-diagonal and reciprocal pivots of the forward sweep.
    sup_mod: Vec<T>,
    inv_pivot: Vec<T>,
}

impl<T: Real> TridiagonalLu<T> {
    pub fn new(sub: &[T], diag: &[T], sup: &[T]) -> Result<Self> {
        let n = diag.len();
        if n == 0 {
            return Err(Error::TooFewPoints { required: 1, got: 0 });
        }
        if sub.len() != n || sup.len() != n {
            return Err(Error::LengthMismatch { left: sub.len().min(sup.len()), right: n });
        }
        let mut sup_mod = vec![T::zero(); n];
        let mut inv_pivot = vec![T::zero(); n];
        let mut prev = T::zero();
        for i in 0..n {
            let pivot = if i == 0 { diag[0] } else { diag[i] - sub[i] * prev };
            if pivot == T::zero() || !pivot.is_finite() {
                return Err(Error::SingularMatrix);
            }
            inv_pivot[i] = T::one() / pivot;
            sup_mod[i] = if i + 1 < n { sup[i] * inv_pivot[i] } else { T::zero() };
            prev = sup_mod[i];
        }
        Ok(Self { sub: sub.to_vec(), sup_mod, inv_pivot })
    }

    pub fn len(&self) -> usize {
        self.inv_pivot.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inv_pivot.is_empty()
    }

    pub fn solve_in_place(&self, x: &mut [T]) {
        let n = self.len();
        debug_assert_eq!(x.len(), n);
        x[0] *= self.inv_pivot[0];
        for i in 1..n {
            x[i] = (x[i] - self.sub[i] * x[i - 1]) * self.inv_pivot[i];
        }
        for i in (0..n - 1).rev() {
            x[i] = x[i] - self.sup_mod[i] * x[i + 1];
        }
    }
}

/// Factored cyclic tridiagonal matrix (corner entries couple the first and
/// last unknowns), solved by the Sherman–Morrison correction.
#[derive(Debug, Clone)]
pub struct CyclicTridiagonalLu<T> {
    inner: TridiagonalLu<T>,
    z: Vec<T>,
    // Last entry of the rank-one vector v = (1, 0, ..., 0, corner_up / gamma).
    v_last: T,
    factor: T,
}

impl<T: Real> CyclicTridiagonalLu<T> {
    /// `sub[0]` is the (0, n-1) corner and `sup[n-1]` the (n-1, 0) corner.
    pub fn new(sub: &[T], diag: &[T], sup: &[T]) -> Result<Self> {
        let n = diag.len();
        if n < 3 {
            return Err(Error::TooFewPoints { required: 3, got: n });
        }
        if sub.len() != n || sup.len() != n {
            return Err(Error::LengthMismatch { left: sub.len().min(sup.len()), right: n });
        }
        let corner_up = sub[0];
        let corner_low = sup[n - 1];
        let gamma = -diag[0];
        let mut d = diag.to_vec();
        d[0] = diag[0] - gamma;
        d[n - 1] = diag[n - 1] - corner_low * corner_up / gamma;
        let inner = TridiagonalLu::new(sub, &d, sup)?;
        let mut u = vec![T::zero(); n];
        u[0] = gamma;
        u[n - 1] = corner_low;
        inner.solve_in_place(&mut u);
        let z = u;
        let vz = z[0] + corner_up / gamma * z[n - 1];
        let denom = T::one() + vz;
        if denom == T::zero() {
            return Err(Error::SingularMatrix);
        }
        Ok(Self { inner, z, v_last: corner_up / gamma, factor: T::one() / denom })
    }

    pub fn solve_in_place(&self, x: &mut [T]) {
        let n = self.z.len();
        self.inner.solve_in_place(x);
        let vy = x[0] + self.v_last * x[n - 1];
        let c = vy * self.factor;
        for (xi, zi) in x.iter_mut().zip(&self.z) {
            *xi -= c * *zi;
        }
    }
}

/// Solves a cyclic tridiagonal system; see [`CyclicTridiagonalLu::new`] for
/// the corner convention.
pub fn solve_cyclic_tridiagonal<T: Real>(sub: &[T], diag: &[T], sup: &[T], rhs: &[T]) -> Result<Vec<T>> {
    let lu = CyclicTridiagonalLu::new(sub, diag, sup)?;
    if rhs.len() != diag.len() {
        return Err(Error::LengthMismatch { left: rhs.len(), right: diag.len() });
    }
    let mut x = rhs.to_vec();
    lu.solve_in_place(&mut x);
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matvec(sub: &[f64], diag: &[f64], sup: &[f64], x: &[f64], cyclic: bool) -> Vec<f64> {
        let n = x.len();
        (0..n)
            .map(|i| {
                let mut s = diag[i] * x[i];
                if i > 0 {
                    s += sub[i] * x[i - 1];
                } else if cyclic {
                    s += sub[0] * x[n - 1];
                }
                if i + 1 < n {
                    s += sup[i] * x[i + 1];
                } else if cyclic {
                    s += sup[n - 1] * x[0];
                }
                s
            })
            .collect()
    }

    #[test]
    fn thomas_solves_random_dominant_system() {
        let n = 17;
        let sub: Vec<f64> = (0..n).map(|i| 0.3 + 0.01 * i as f64).collect();
        let sup: Vec<f64> = (0..n).map(|i| -0.7 + 0.02 * i as f64).collect();
        let diag: Vec<f64> = (0..n).map(|i| 3.0 + (i as f64).sin()).collect();
        let x: Vec<f64> = (0..n).map(|i| (i as f64 * 0.37).cos()).collect();
        let b = matvec(&sub, &diag, &sup, &x, false);
        let y = solve_tridiagonal(&sub, &diag, &sup, &b).unwrap();
        for (a, b) in x.iter().zip(&y) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn cyclic_solves_spline_system() {
        let n = 12;
        let (sub, diag, sup) = (vec![1.0; n], vec![4.0; n], vec![1.0; n]);
        let x: Vec<f64> = (0..n).map(|i| (i as f64 * 0.9).sin() + 0.1 * i as f64).collect();
        let b = matvec(&sub, &diag, &sup, &x, true);
        let y = solve_cyclic_tridiagonal(&sub, &diag, &sup, &b).unwrap();
        for (a, b) in x.iter().zip(&y) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn singular_detected() {
        assert!(matches!(
            TridiagonalLu::new(&[0.0, 1.0], &[0.0, 1.0], &[1.0, 0.0]),
            Err(Error::SingularMatrix)
        ));
    }
}
