use ndarray::{Array1, Array2, Array3, ArrayView1, Axis as NdAxis};

use crate::error::{Error, Result};
use crate::scalar::Real;

use super::config::{EcdiConfig, Species};
use super::field::solve_field;
use super::grid::Axis;

/// Coupling constants of the electron equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlasmaParams<T> {
    pub alpha1: T,
    pub alpha2: T,
    pub alpha3: T,
}

/// Electron and ion distributions together with the electric field.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSpace<T> {
    /// `f_e[(x, v_x, v_z)]`, `v_z` fastest.
    pub fe: Array3<T>,
    /// `f_i[(x, v_x)]`.
    pub fi: Array2<T>,
    pub ex: Array1<T>,
    pub x: Axis<T>,
    pub vxe: Axis<T>,
    pub vze: Axis<T>,
    pub vxi: Axis<T>,
    pub params: PlasmaParams<T>,
    pub t: T,
    /// Accumulated `∫ α3 ∫∫∫ f_e v_z dt`.
    pub work_integral: T,
}

/// Trapezoid rule over a possibly strided view.
pub(crate) fn trapezoid_view<T: Real>(v: ArrayView1<T>, d: T) -> T {
    let n = v.len();
    if n < 2 {
        return T::zero();
    }
    let inner: T = v.iter().copied().sum();
    d * (inner - T::half() * (v[0] + v[n - 1]))
}

/// Gaussian with mean `mu` and standard deviation `sigma`, normalized on the
/// real line.
pub fn gaussian<T: Real>(v: T, mu: T, sigma: T) -> T {
    let z = (v - mu) / sigma;
    (-T::half() * z * z).exp() / (sigma * (T::two() * T::PI()).sqrt())
}

/// Velocity profile sampled on `axis`: a Maxwellian at `drift`, or two
/// half-weight Maxwellians at `drift ± beam`. The samples are rescaled so
/// that their trapezoid integral is exactly one.
pub fn velocity_profile<T: Real>(axis: &Axis<T>, drift: T, sigma: T, beam: T) -> Vec<T> {
    let mut g: Vec<T> = axis
        .values()
        .into_iter()
        .map(|v| {
            if beam == T::zero() {
                gaussian(v, drift, sigma)
            } else {
                T::half() * (gaussian(v, drift - beam, sigma) + gaussian(v, drift + beam, sigma))
            }
        })
        .collect();
    let mass = crate::numerics::trapezoid(&g, axis.delta);
    if mass > T::zero() {
        for x in &mut g {
            *x /= mass;
        }
    }
    g
}

/// Largest boundary sample relative to the peak.
pub fn edge_ratio<T: Real>(profile: &[T]) -> T {
    let peak = profile.iter().copied().fold(T::zero(), T::max);
    if peak == T::zero() {
        return T::zero();
    }
    let edge = profile[0].abs().max(profile[profile.len() - 1].abs());
    edge / peak
}

fn check_vacuum<T: Real>(profile: &[T], tol: T, species: &'static str) -> Result<()> {
    let ratio = edge_ratio(profile);
    if ratio > tol {
        return Err(Error::BoundaryNotVacuum { species, ratio: ratio.as_f64() });
    }
    Ok(())
}

impl<T: Real> PhaseSpace<T> {
    /// Zero distributions and field on the given grids.
    pub fn vacuum(x: Axis<T>, vxe: Axis<T>, vze: Axis<T>, vxi: Axis<T>, params: PlasmaParams<T>) -> Self {
        Self {
            fe: Array3::zeros((x.n, vxe.n, vze.n)),
            fi: Array2::zeros((x.n, vxi.n)),
            ex: Array1::zeros(x.n),
            x,
            vxe,
            vze,
            vxi,
            params,
            t: T::zero(),
            work_integral: T::zero(),
        }
    }

    /// Electron density `∫∫ f_e dv_x dv_z` at every `x` node.
    pub fn electron_density(&self) -> Vec<T> {
        let (dvx, dvz) = (self.vxe.delta, self.vze.delta);
        self.fe
            .outer_iter()
            .map(|plane| {
                let rows: Vec<T> = plane.outer_iter().map(|row| trapezoid_view(row, dvz)).collect();
                crate::numerics::trapezoid(&rows, dvx)
            })
            .collect()
    }

    /// Ion density `∫ f_i dv_x` at every `x` node.
    pub fn ion_density(&self) -> Vec<T> {
        self.fi.outer_iter().map(|row| trapezoid_view(row, self.vxi.delta)).collect()
    }

    /// Net charge density `n_i − n_e`.
    pub fn charge_density(&self) -> Vec<T> {
        self.ion_density().into_iter().zip(self.electron_density()).map(|(i, e)| i - e).collect()
    }

    /// Total electron and ion numbers.
    pub fn particle_numbers(&self) -> (T, T) {
        let dx = self.x.delta;
        let ne = crate::numerics::periodic_sum(&self.electron_density(), dx);
        let ni = crate::numerics::periodic_sum(&self.ion_density(), dx);
        (ne, ni)
    }

    pub fn is_finite(&self) -> bool {
        self.fe.iter().chain(self.fi.iter()).chain(self.ex.iter()).all(|v| v.is_finite())
    }

    /// Most negative sample of either distribution relative to its peak
    /// (zero when both are non-negative).
    pub fn negativity(&self) -> T {
        let ratio = |a: &mut dyn Iterator<Item = T>| {
            let (lo, hi) = a.fold((T::zero(), T::zero()), |(lo, hi), v| (lo.min(v), hi.max(v)));
            if hi > T::zero() {
                -lo / hi
            } else {
                T::zero()
            }
        };
        ratio(&mut self.fe.iter().copied()).max(ratio(&mut self.fi.iter().copied()))
    }

    /// Largest velocity-boundary value of each distribution relative to its
    /// peak, as `(electrons, ions)`.
    pub fn boundary_ratios(&self) -> (T, T) {
        let peak_e = self.fe.iter().copied().fold(T::zero(), T::max);
        let peak_i = self.fi.iter().copied().fold(T::zero(), T::max);
        let (nvx, nvz) = (self.vxe.n, self.vze.n);
        let mut edge_e = T::zero();
        for ((_, j, k), v) in self.fe.indexed_iter() {
            if j == 0 || j + 1 == nvx || k == 0 || k + 1 == nvz {
                edge_e = edge_e.max(v.abs());
            }
        }
        let last = self.vxi.n - 1;
        let edge_i = self
            .fi
            .axis_iter(NdAxis(0))
            .map(|row| row[0].abs().max(row[last].abs()))
            .fold(T::zero(), T::max);
        let r = |e: T, p: T| if p > T::zero() { e / p } else { T::zero() };
        (r(edge_e, peak_e), r(edge_i, peak_i))
    }
}

/// Builds the initial phase space: separable Maxwellians with a cosine
/// density perturbation on one species, and `E_x` from one field solve.
///
/// Both species carry unit mean density, so the plasma is neutral up to
/// rounding.
pub fn initialize<T: Real>(cfg: &EcdiConfig<T>) -> Result<PhaseSpace<T>> {
    cfg.validate()?;
    let x = Axis::periodic(cfg.nx, cfg.length);
    let vxe = Axis::centred(cfg.nvxe, cfg.vmax_e_x);
    let vze = Axis::centred(cfg.nvze, cfg.vmax_e_z);
    let vxi = Axis::centred(cfg.nvxi, cfg.vmax_i);
    let params = PlasmaParams { alpha1: cfg.alpha1, alpha2: cfg.alpha2, alpha3: cfg.alpha3 };

    let gx = velocity_profile(&vxe, cfg.drift_e_x, cfg.vte_x, cfg.beam_e_x);
    let gz = velocity_profile(&vze, cfg.drift_e_z, cfg.vte_z, T::zero());
    let gi = velocity_profile(&vxi, cfg.drift_i, cfg.vti, T::zero());
    check_vacuum(&gx, cfg.vacuum_tol, "electrons (v_x)")?;
    check_vacuum(&gz, cfg.vacuum_tol, "electrons (v_z)")?;
    check_vacuum(&gi, cfg.vacuum_tol, "ions (v_x)")?;

    let k = T::two() * T::PI() * T::of_usize(cfg.mode) / cfg.length;
    let bump: Vec<T> = x.values().into_iter().map(|xi| T::one() + cfg.epsilon * (k * xi).cos()).collect();
    let (ne, ni): (Vec<T>, Vec<T>) = match cfg.perturbed {
        Species::Electrons => (bump, vec![T::one(); x.n]),
        Species::Ions => (vec![T::one(); x.n], bump),
    };

    let mut ps = PhaseSpace::vacuum(x, vxe, vze, vxi, params);
    for ((i, j, l), f) in ps.fe.indexed_iter_mut() {
        *f = ne[i] * gx[j] * gz[l];
    }
    for ((i, j), f) in ps.fi.indexed_iter_mut() {
        *f = ni[i] * gi[j];
    }
    solve_field(&mut ps);
    Ok(ps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> EcdiConfig<f64> {
        EcdiConfig { nx: 16, nvxe: 32, nvze: 16, nvxi: 16, ..EcdiConfig::magnetized_landau() }
    }

    #[test]
    fn gaussian_trapezoid_matches_unit_mass() {
        // Unnormalized samples: the trapezoid rule on a wide grid is
        // spectrally accurate for the Gaussian.
        let axis = Axis::<f64>::centred(64, 8.0);
        let g: Vec<f64> = axis.values().into_iter().map(|v| gaussian(v, 0.3, 1.1)).collect();
        assert!((crate::numerics::trapezoid(&g, axis.delta) - 1.0).abs() < 1e-8);
    }

    #[test]
    fn uniform_plasma_has_no_field() {
        let cfg = EcdiConfig { epsilon: 0.0, ..small() };
        let ps = initialize(&cfg).unwrap();
        assert!(ps.ex.iter().all(|e| e.abs() < 1e-13));
        let rho = ps.charge_density();
        assert!(rho.iter().all(|r| r.abs() < 1e-13));
    }

    #[test]
    fn densities_have_unit_mean() {
        let ps = initialize(&small()).unwrap();
        let (ne, ni) = ps.particle_numbers();
        let l = ps.x.length();
        assert!((ne / l - 1.0).abs() < 1e-12);
        assert!((ni / l - 1.0).abs() < 1e-12);
    }

    #[test]
    fn perturbation_lives_in_one_mode() {
        let cfg = EcdiConfig { mode: 3, ..small() };
        let ps = initialize(&cfg).unwrap();
        let n = ps.electron_density();
        let nx = n.len();
        for m in 1..nx / 2 {
            let (mut re, mut im) = (0.0, 0.0);
            for (j, v) in n.iter().enumerate() {
                let th = 2.0 * std::f64::consts::PI * (m * j) as f64 / nx as f64;
                re += v * th.cos();
                im -= v * th.sin();
            }
            let amp = 2.0 * (re * re + im * im).sqrt() / nx as f64;
            if m == 3 {
                assert!((amp - cfg.epsilon).abs() < 1e-12);
            } else {
                assert!(amp < 1e-13, "mode {m}: {amp}");
            }
        }
    }

    #[test]
    fn narrow_velocity_box_is_rejected() {
        let cfg = EcdiConfig { vmax_e_x: 3.0, ..small() };
        assert!(matches!(initialize(&cfg), Err(Error::BoundaryNotVacuum { .. })));
    }

    #[test]
    fn desk_default_passes_vacuum_check() {
        let cfg = EcdiConfig::<f64>::default();
        let x = Axis::centred(cfg.nvxe, cfg.vmax_e_x);
        let z = Axis::centred(cfg.nvze, cfg.vmax_e_z);
        assert!(edge_ratio(&velocity_profile(&x, cfg.drift_e_x, cfg.vte_x, 0.0)) <= 1e-8);
        assert!(edge_ratio(&velocity_profile(&z, cfg.drift_e_z, cfg.vte_z, 0.0)) <= 1e-8);
    }
}
