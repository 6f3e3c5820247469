use ndarray::{ArrayViewMut1, Axis as NdAxis};
use rayon::prelude::*;

use crate::error::Result;
use crate::numerics::{Boundary, SplineKernel};
use crate::scalar::Real;

use super::phase_space::PhaseSpace;

/// Spline kernels for the four line lengths of a phase space.
#[derive(Debug, Clone)]
pub struct Advection<T> {
    x: SplineKernel<T>,
    vxe: SplineKernel<T>,
    vze: SplineKernel<T>,
    vxi: SplineKernel<T>,
    parallel: bool,
}

/// Shifts every lane by `shift_of(lane_index)` cells, reading the old line
/// and writing the new one. Lanes are independent, so the parallel and
/// serial paths give identical results.
fn shift_lanes<T, F>(lanes: Vec<ArrayViewMut1<'_, T>>, kernel: &SplineKernel<T>, shift_of: F, parallel: bool)
where
    T: Real,
    F: Fn(usize) -> T + Sync,
{
    let n = kernel.len();
    let init = || (vec![T::zero(); n], vec![T::zero(); n], vec![T::zero(); n]);
    let work = |buf: &mut (Vec<T>, Vec<T>, Vec<T>), (idx, mut lane): (usize, ArrayViewMut1<'_, T>)| {
        let s = shift_of(idx);
        if s == T::zero() {
            return;
        }
        let (y, out, m) = buf;
        for (d, v) in y.iter_mut().zip(lane.iter()) {
            *d = *v;
        }
        kernel.shift(y, s, T::zero(), out, m);
        for (d, v) in lane.iter_mut().zip(out.iter()) {
            *d = *v;
        }
    };
    if parallel {
        lanes.into_par_iter().enumerate().for_each_init(init, work);
    } else {
        let mut buf = init();
        lanes.into_iter().enumerate().for_each(|item| work(&mut buf, item));
    }
}

impl<T: Real> Advection<T> {
    pub fn new(ps: &PhaseSpace<T>, parallel: bool) -> Result<Self> {
        Ok(Self {
            x: SplineKernel::new(ps.x.n, Boundary::Periodic)?,
            vxe: SplineKernel::new(ps.vxe.n, Boundary::Natural)?,
            vze: SplineKernel::new(ps.vze.n, Boundary::Natural)?,
            vxi: SplineKernel::new(ps.vxi.n, Boundary::Natural)?,
            parallel,
        })
    }

    /// Operator 1: `f(x) ← f(x − v_x h)` on every velocity line of both
    /// species.
    pub fn advect_x(&self, ps: &mut PhaseSpace<T>, h: T) {
        if h == T::zero() {
            return;
        }
        let dx = ps.x.delta;
        let (vxe, vxi, nvz) = (ps.vxe, ps.vxi, ps.vze.n);
        // Lanes along x are enumerated over (v_x, v_z) in row-major order.
        let lanes: Vec<_> = ps.fe.lanes_mut(NdAxis(0)).into_iter().collect();
        shift_lanes(lanes, &self.x, |idx| vxe.value(idx / nvz) * h / dx, self.parallel);
        let lanes: Vec<_> = ps.fi.lanes_mut(NdAxis(0)).into_iter().collect();
        shift_lanes(lanes, &self.x, |idx| vxi.value(idx) * h / dx, self.parallel);
    }

    /// Operator 2: electron shift in `v_z` by `a_z h` with
    /// `a_z = −α1 (α3 + v_x α2)`. Ions are untouched.
    pub fn advect_vz(&self, ps: &mut PhaseSpace<T>, h: T) {
        let p = ps.params;
        if h == T::zero() || p.alpha1 == T::zero() {
            return;
        }
        let (vxe, nvx, dvz) = (ps.vxe, ps.vxe.n, ps.vze.delta);
        let lanes: Vec<_> = ps.fe.lanes_mut(NdAxis(2)).into_iter().collect();
        let shift = |idx: usize| -p.alpha1 * (p.alpha3 + vxe.value(idx % nvx) * p.alpha2) * h / dvz;
        shift_lanes(lanes, &self.vze, shift, self.parallel);
    }

    /// Operator 3: electron shift in `v_x` by `a_x h` with
    /// `a_x = −α1 (E_x − v_z α2)`, ion shift by `E_x h`. The field is frozen.
    pub fn advect_vx(&self, ps: &mut PhaseSpace<T>, h: T) {
        if h == T::zero() {
            return;
        }
        let p = ps.params;
        let (vze, nvz, dvx, dvi) = (ps.vze, ps.vze.n, ps.vxe.delta, ps.vxi.delta);
        let ex = ps.ex.to_vec();
        if p.alpha1 != T::zero() {
            // Lanes along v_x are enumerated over (x, v_z).
            let lanes: Vec<_> = ps.fe.lanes_mut(NdAxis(1)).into_iter().collect();
            let shift = |idx: usize| -p.alpha1 * (ex[idx / nvz] - vze.value(idx % nvz) * p.alpha2) * h / dvx;
            shift_lanes(lanes, &self.vxe, shift, self.parallel);
        }
        let lanes: Vec<_> = ps.fi.lanes_mut(NdAxis(1)).into_iter().collect();
        shift_lanes(lanes, &self.vxi, |idx| ex[idx] * h / dvi, self.parallel);
    }
}
