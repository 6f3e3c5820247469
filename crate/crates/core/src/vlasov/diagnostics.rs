use ndarray::Axis as NdAxis;

use crate::error::{Error, Result};
use crate::numerics::{periodic_sum, trapezoid};
use crate::scalar::Real;

use super::field::diagnostic_field;
use super::phase_space::PhaseSpace;

/// Terms of the conserved energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyBreakdown<T> {
    pub electron_kinetic: T,
    pub ion_kinetic: T,
    pub field: T,
    pub work: T,
}

impl<T: Real> EnergyBreakdown<T> {
    pub fn total(&self) -> T {
        self.electron_kinetic + self.ion_kinetic + self.field + self.work
    }
}

/// Energy of `ps` with the field term taken from `ex`.
///
/// The electron kinetic term carries the weight `1/(2 α1)`; it is dropped
/// when `α1 = 0` (electrons then feel no force).
pub fn energy_breakdown_with_field<T: Real>(ps: &PhaseSpace<T>, ex: &[T]) -> EnergyBreakdown<T> {
    let (dx, dvx, dvz, dvi) = (ps.x.delta, ps.vxe.delta, ps.vze.delta, ps.vxi.delta);
    let vx = ps.vxe.values();
    let vz2: Vec<T> = ps.vze.values().into_iter().map(|v| v * v).collect();

    let mut per_x = Vec::with_capacity(ps.x.n);
    for plane in ps.fe.outer_iter() {
        let rows: Vec<T> = plane
            .outer_iter()
            .zip(&vx)
            .map(|(row, &v)| {
                let weighted: Vec<T> = row.iter().zip(&vz2).map(|(f, w)| *f * (v * v + *w)).collect();
                trapezoid(&weighted, dvz)
            })
            .collect();
        per_x.push(trapezoid(&rows, dvx));
    }
    let electron_kinetic = if ps.params.alpha1 == T::zero() {
        T::zero()
    } else {
        periodic_sum(&per_x, dx) / (T::two() * ps.params.alpha1)
    };

    let vi2: Vec<T> = ps.vxi.values().into_iter().map(|v| v * v).collect();
    let ion: Vec<T> = ps
        .fi
        .axis_iter(NdAxis(0))
        .map(|row| {
            let w: Vec<T> = row.iter().zip(&vi2).map(|(f, v)| *f * *v).collect();
            trapezoid(&w, dvi)
        })
        .collect();
    let ion_kinetic = T::half() * periodic_sum(&ion, dx);

    let e2: Vec<T> = ex.iter().map(|e| *e * *e).collect();
    let field = T::half() * periodic_sum(&e2, dx);

    EnergyBreakdown { electron_kinetic, ion_kinetic, field, work: ps.work_integral }
}

/// Energy of `ps` with the field recomputed from the current densities, so
/// the result does not depend on where the last solve fell inside a step.
pub fn energy_breakdown<T: Real>(ps: &PhaseSpace<T>) -> EnergyBreakdown<T> {
    energy_breakdown_with_field(ps, &diagnostic_field(ps))
}

/// Total energy `U` including the accumulated work integral.
pub fn total_energy<T: Real>(ps: &PhaseSpace<T>) -> T {
    energy_breakdown(ps).total()
}

/// Rate of the work integral: `α3 ∫∫∫ f_e v_z`.
pub fn work_power<T: Real>(ps: &PhaseSpace<T>) -> T {
    if ps.params.alpha3 == T::zero() {
        return T::zero();
    }
    let vz = ps.vze.values();
    let per_x: Vec<T> = ps
        .fe
        .outer_iter()
        .map(|plane| {
            let rows: Vec<T> = plane
                .outer_iter()
                .map(|row| {
                    let w: Vec<T> = row.iter().zip(&vz).map(|(f, v)| *f * *v).collect();
                    trapezoid(&w, ps.vze.delta)
                })
                .collect();
            trapezoid(&rows, ps.vxe.delta)
        })
        .collect();
    ps.params.alpha3 * periodic_sum(&per_x, ps.x.delta)
}

/// Relative energy deviation in percent.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyDeviation<T> {
    pub series: Vec<T>,
    pub running_max: Vec<T>,
    pub max: T,
}

/// `ΔU(t) = |U(t) − U(0)| / |U(0)| × 100` along a history of energies.
pub fn energy_deviation<T: Real>(history: &[T]) -> Result<EnergyDeviation<T>> {
    let u0 = *history.first().ok_or(Error::TooFewPoints { required: 1, got: 0 })?;
    if u0 == T::zero() || !u0.is_finite() {
        return Err(Error::InvalidValue("initial energy"));
    }
    let hundred = T::lit(100.0);
    let series: Vec<T> = history.iter().map(|u| (*u - u0).abs() / u0.abs() * hundred).collect();
    let mut running_max = Vec::with_capacity(series.len());
    let mut m = T::zero();
    for d in &series {
        m = m.max(*d);
        running_max.push(m);
    }
    Ok(EnergyDeviation { series, running_max, max: m })
}

/// Amplitudes `(2/N) |Σ_j E_j e^{−2πi m j/N}|` for `m = 1..=modes`; a pure
/// `A cos(2π m x/L + φ)` has amplitude `A`.
pub fn mode_amplitudes<T: Real>(ex: &[T], modes: usize) -> Vec<T> {
    let n = ex.len();
    let nn = T::of_usize(n);
    (1..=modes)
        .map(|m| {
            let (mut re, mut im) = (T::zero(), T::zero());
            for (j, e) in ex.iter().enumerate() {
                // Reduce m·j modulo N first to keep the phase accurate.
                let theta = T::two() * T::PI() * T::of_usize((m * j) % n) / nn;
                re += *e * theta.cos();
                im -= *e * theta.sin();
            }
            T::two() * (re * re + im * im).sqrt() / nn
        })
        .collect()
}

/// Least-squares line through `(t, ln y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogLinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// Root-mean-square residual of `ln y`.
    pub rms_residual: f64,
}

/// Fits `ln y = intercept + slope · t`. Constant data gives slope 0 and
/// `R² = 1`.
pub fn fit_log_linear(t: &[f64], y: &[f64]) -> Result<LogLinearFit> {
    if t.len() != y.len() {
        return Err(Error::LengthMismatch { left: t.len(), right: y.len() });
    }
    if t.len() < 2 {
        return Err(Error::TooFewPoints { required: 2, got: t.len() });
    }
    if y.iter().any(|v| !(*v > f64::MIN_POSITIVE) || !v.is_finite()) {
        return Err(Error::InvalidValue("log-linear fit data"));
    }
    let n = t.len() as f64;
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let tm = t.iter().sum::<f64>() / n;
    let ym = ly.iter().sum::<f64>() / n;
    let (mut stt, mut sty, mut syy) = (0.0, 0.0, 0.0);
    for (ti, yi) in t.iter().zip(&ly) {
        stt += (ti - tm) * (ti - tm);
        sty += (ti - tm) * (yi - ym);
        syy += (yi - ym) * (yi - ym);
    }
    if stt == 0.0 {
        return Err(Error::InvalidArgument("fit abscissae are all equal".into()));
    }
    let slope = sty / stt;
    let intercept = ym - slope * tm;
    let ss_res: f64 = t.iter().zip(&ly).map(|(ti, yi)| (yi - intercept - slope * ti).powi(2)).sum();
    let r_squared = if syy == 0.0 { 1.0 } else { 1.0 - ss_res / syy };
    Ok(LogLinearFit { slope, intercept, r_squared, rms_residual: (ss_res / n).sqrt() })
}

/// Exponential growth exponent of one Fourier mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthRate {
    pub mode: usize,
    pub rate: f64,
    pub r_squared: f64,
    pub rms_residual: f64,
    pub samples: usize,
}

/// Minimum number of samples a growth-rate window must contain.
pub const MIN_FIT_SAMPLES: usize = 10;

/// Fits `ln |Ê_m(t)|` over `window` for each requested mode.
///
/// `amplitudes[s][m − 1]` is the amplitude of mode `m` at `times[s]`.
pub fn growth_rates(times: &[f64], amplitudes: &[Vec<f64>], modes: &[usize], window: (f64, f64)) -> Result<Vec<GrowthRate>> {
    if times.len() != amplitudes.len() {
        return Err(Error::LengthMismatch { left: times.len(), right: amplitudes.len() });
    }
    let idx: Vec<usize> = (0..times.len()).filter(|&s| times[s] >= window.0 && times[s] <= window.1).collect();
    if idx.len() < MIN_FIT_SAMPLES {
        return Err(Error::TooFewPoints { required: MIN_FIT_SAMPLES, got: idx.len() });
    }
    let t: Vec<f64> = idx.iter().map(|&s| times[s]).collect();
    modes
        .iter()
        .map(|&m| {
            if m == 0 {
                return Err(Error::InvalidArgument("mode numbers start at 1".into()));
            }
            let mut y = Vec::with_capacity(idx.len());
            for &s in &idx {
                let a = amplitudes[s].get(m - 1).copied().ok_or(Error::AmplitudeUnderflow { mode: m })?;
                if !(a > f64::MIN_POSITIVE) || !a.is_finite() {
                    return Err(Error::AmplitudeUnderflow { mode: m });
                }
                y.push(a);
            }
            let fit = fit_log_linear(&t, &y)?;
            Ok(GrowthRate { mode: m, rate: fit.slope, r_squared: fit.r_squared, rms_residual: fit.rms_residual, samples: t.len() })
        })
        .collect()
}

/// Mode with the largest amplitude at the last sample.
pub fn dominant_mode(amplitudes: &[Vec<f64>]) -> Option<usize> {
    let last = amplitudes.last()?;
    last.iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i + 1)
}
