use crate::scalar::Real;

/// Uniform one-dimensional grid.
///
/// Spatial axes are periodic with nodes `x_j = min + j·delta`; velocity axes
/// are cell-centred on `[-vmax, vmax]`, so no node sits on the boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis<T> {
    pub n: usize,
    pub min: T,
    pub delta: T,
    pub periodic: bool,
}

impl<T: Real> Axis<T> {
    /// `n` nodes covering one period `[0, length)`.
    pub fn periodic(n: usize, length: T) -> Self {
        Self { n, min: T::zero(), delta: length / T::of_usize(n), periodic: true }
    }

    /// `n` cell centres on `[-vmax, vmax]`.
    pub fn centred(n: usize, vmax: T) -> Self {
        let delta = T::two() * vmax / T::of_usize(n);
        Self { n, min: -vmax + T::half() * delta, delta, periodic: false }
    }

    #[inline]
    pub fn value(&self, j: usize) -> T {
        self.min + T::of_usize(j) * self.delta
    }

    pub fn values(&self) -> Vec<T> {
        (0..self.n).map(|j| self.value(j)).collect()
    }

    /// Extent covered by the grid: the period for periodic axes, `2 vmax`
    /// for cell-centred ones.
    pub fn length(&self) -> T {
        T::of_usize(self.n) * self.delta
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn centred_grid_is_symmetric() {
        let a = Axis::<f64>::centred(8, 2.0);
        assert_eq!(a.delta, 0.5);
        assert_eq!(a.value(0), -1.75);
        assert!((a.value(7) - 1.75).abs() < 1e-15);
        let s: f64 = a.values().iter().sum();
        assert!(s.abs() < 1e-14);
    }

    #[test]
    fn periodic_grid_excludes_endpoint() {
        let a = Axis::<f64>::periodic(10, 5.0);
        assert_eq!(a.values().last().copied(), Some(4.5));
        assert_eq!(a.length(), 5.0);
    }
}
