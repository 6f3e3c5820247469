use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::kv::{parse_count, parse_key_values, parse_real};
use crate::scalar::Real;
use crate::splitting::MethodId;

/// Species carrying the initial density perturbation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Species {
    #[default]
    Electrons,
    Ions,
}

/// When the Poisson equation is solved inside a step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FieldSchedule {
    /// Right after the x-advection slot of the first stage, so every
    /// v_x-advection of Strang-type and AK 3-2(i) steps sees the field of the
    /// current density.
    #[default]
    AfterFirstAdvection,
    /// After the whole first stage.
    AfterFirstStage,
    /// Never; `E_x` keeps its initial value.
    Disabled,
}

/// Parameters of a 1D2V electron/ion Vlasov–Poisson run.
///
/// Electrons feel `−α1 (E_x − v_z α2)` along `v_x` and `−α1 (α3 + v_x α2)`
/// along `v_z`; ions feel `E_x` along `v_x`.
#[derive(Debug, Clone, PartialEq)]
pub struct EcdiConfig<T> {
    pub alpha1: T,
    pub alpha2: T,
    pub alpha3: T,
    pub length: T,
    pub nx: usize,
    pub nvxe: usize,
    pub nvze: usize,
    pub nvxi: usize,
    pub vmax_e_x: T,
    pub vmax_e_z: T,
    pub vmax_i: T,
    pub dt: T,
    pub t_final: T,
    pub method: MethodId,
    /// Electron thermal spreads (standard deviations) along `v_x`, `v_z`.
    pub vte_x: T,
    pub vte_z: T,
    /// Electron drift; the distribution is centred at `(drift_e_x, drift_e_z)`.
    pub drift_e_x: T,
    pub drift_e_z: T,
    /// Half separation of two counter-streaming electron beams along `v_x`
    /// (zero gives a single Maxwellian).
    pub beam_e_x: T,
    pub vti: T,
    pub drift_i: T,
    pub epsilon: T,
    pub mode: usize,
    pub perturbed: Species,
    pub field: FieldSchedule,
    /// Record diagnostics every `stride` steps.
    pub stride: usize,
    /// Number of Fourier modes of `E_x` recorded (1..=modes).
    pub modes: usize,
    /// Maximum allowed velocity-edge/peak ratio of the initial distributions.
    pub vacuum_tol: T,
    pub parallel: bool,
}

impl<T: Real> Default for EcdiConfig<T> {
    /// Desk-scale ECDI: plasma parameters of the full-scale run on a
    /// 128 × 128 × 128 electron grid.
    fn default() -> Self {
        let alpha1 = T::lit(2.39e5);
        let alpha2 = T::lit(4.03e-4);
        let alpha3 = T::lit(0.1487);
        let vte = alpha1.sqrt();
        Self {
            alpha1,
            alpha2,
            alpha3,
            length: T::lit(600.0),
            nx: 128,
            nvxe: 128,
            nvze: 128,
            nvxi: 64,
            vmax_e_x: T::lit(3400.0),
            vmax_e_z: T::lit(3000.0),
            vmax_i: T::lit(1.5),
            dt: T::lit(4e-4),
            t_final: T::lit(0.04),
            method: MethodId::Strang([0, 1, 2]),
            vte_x: vte,
            vte_z: vte,
            drift_e_x: -alpha3 / alpha2,
            drift_e_z: T::zero(),
            beam_e_x: T::zero(),
            vti: T::lit(0.2),
            drift_i: T::zero(),
            epsilon: T::lit(1e-3),
            mode: 1,
            perturbed: Species::Electrons,
            field: FieldSchedule::AfterFirstAdvection,
            stride: 1,
            modes: 8,
            vacuum_tol: T::lit(1e-8),
            parallel: true,
        }
    }
}

const KEYS: &[&str] = &[
    "alpha1", "alpha2", "alpha3", "L", "Nx", "Nvxe", "Nvze", "Nvxi", "vmax_e_x", "vmax_e_z", "vmax_i", "dt", "t_final",
    "method", "vte_x", "vte_z", "drift_e_x", "drift_e_z", "beam_e_x", "vti", "drift_i", "epsilon", "mode", "perturbed",
    "field", "stride", "modes", "vacuum_tol", "parallel",
];

impl<T: Real> EcdiConfig<T> {
    /// Two counter-streaming electron beams without magnetic coupling
    /// (`α2 = α3 = 0`). With `α1 = 400` the electron plasma frequency is 20
    /// and the ions barely respond; beams at `±60` with `k = 0.2` give a
    /// cold-beam growth rate near 7 for mode 1, so the linear phase spans
    /// roughly `t ∈ [0.4, 1.2]`.
    pub fn two_stream() -> Self {
        let k = T::lit(0.2);
        Self {
            alpha1: T::lit(400.0),
            alpha2: T::zero(),
            alpha3: T::zero(),
            length: T::two() * T::PI() / k,
            nx: 64,
            nvxe: 128,
            nvze: 8,
            nvxi: 32,
            vmax_e_x: T::lit(160.0),
            vmax_e_z: T::lit(80.0),
            vmax_i: T::lit(0.5),
            dt: T::lit(0.005),
            t_final: T::lit(1.5),
            vte_x: T::lit(10.0),
            vte_z: T::lit(10.0),
            drift_e_x: T::zero(),
            beam_e_x: T::lit(60.0),
            vti: T::lit(0.05),
            epsilon: T::lit(1e-4),
            ..Self::default()
        }
    }

    /// Smooth magnetized setup with all three operators active, for
    /// temporal self-convergence studies.
    pub fn magnetized_landau() -> Self {
        let k = T::half();
        Self {
            alpha1: T::one(),
            alpha2: T::one(),
            alpha3: T::half(),
            length: T::two() * T::PI() / k,
            nx: 32,
            nvxe: 64,
            nvze: 64,
            nvxi: 32,
            vmax_e_x: T::lit(7.0),
            vmax_e_z: T::lit(6.5),
            vmax_i: T::lit(1.0),
            dt: T::lit(0.1),
            t_final: T::lit(2.0),
            vte_x: T::one(),
            vte_z: T::one(),
            drift_e_x: -T::half(),
            vti: T::lit(0.1),
            epsilon: T::lit(0.05),
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, n) in [("Nx", self.nx), ("Nvxe", self.nvxe), ("Nvze", self.nvze), ("Nvxi", self.nvxi)] {
            if n < 8 {
                return Err(Error::Config(format!("{name} must be at least 8, got {n}")));
            }
        }
        let positive = [
            ("L", self.length),
            ("vmax_e_x", self.vmax_e_x),
            ("vmax_e_z", self.vmax_e_z),
            ("vmax_i", self.vmax_i),
            ("dt", self.dt),
            ("t_final", self.t_final),
            ("vte_x", self.vte_x),
            ("vte_z", self.vte_z),
            ("vti", self.vti),
        ];
        for (name, v) in positive {
            if !(v > T::zero()) || !v.is_finite() {
                return Err(Error::Config(format!("{name} must be positive and finite, got {v}")));
            }
        }
        if self.stride == 0 {
            return Err(Error::Config("stride must be at least 1".into()));
        }
        if self.mode == 0 || self.mode >= self.nx / 2 {
            return Err(Error::Config(format!("perturbation mode {} outside 1..{}", self.mode, self.nx / 2)));
        }
        Ok(())
    }

    /// Sets one `key = value` entry.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let v = value.trim();
        let real = || parse_real::<T>(key, v);
        let int = || parse_count(key, v);
        match key.trim() {
            "alpha1" => self.alpha1 = real()?,
            "alpha2" => self.alpha2 = real()?,
            "alpha3" => self.alpha3 = real()?,
            "L" | "length" => self.length = real()?,
            "Nx" | "nx" => self.nx = int()?,
            "Nvxe" | "nvxe" => self.nvxe = int()?,
            "Nvze" | "nvze" => self.nvze = int()?,
            "Nvxi" | "nvxi" => self.nvxi = int()?,
            "vmax_e_x" => self.vmax_e_x = real()?,
            "vmax_e_z" => self.vmax_e_z = real()?,
            "vmax_i" => self.vmax_i = real()?,
            "dt" => self.dt = real()?,
            "t_final" => self.t_final = real()?,
            "method" => self.method = v.parse()?,
            "vte_x" => self.vte_x = real()?,
            "vte_z" => self.vte_z = real()?,
            "drift_e_x" => self.drift_e_x = real()?,
            "drift_e_z" => self.drift_e_z = real()?,
            "beam_e_x" => self.beam_e_x = real()?,
            "vti" => self.vti = real()?,
            "drift_i" => self.drift_i = real()?,
            "epsilon" => self.epsilon = real()?,
            "mode" => self.mode = int()?,
            "perturbed" => {
                self.perturbed = match v {
                    "electrons" | "e" => Species::Electrons,
                    "ions" | "i" => Species::Ions,
                    _ => return Err(Error::Config(format!("unknown species `{v}`"))),
                }
            }
            "field" => {
                self.field = match v {
                    "after_first_advection" => FieldSchedule::AfterFirstAdvection,
                    "after_first_stage" => FieldSchedule::AfterFirstStage,
                    "disabled" | "off" => FieldSchedule::Disabled,
                    _ => return Err(Error::Config(format!("unknown field schedule `{v}`"))),
                }
            }
            "stride" => self.stride = int()?,
            "modes" => self.modes = int()?,
            "vacuum_tol" => self.vacuum_tol = real()?,
            "parallel" => {
                self.parallel = v.parse().map_err(|_| Error::Config(format!("`parallel` expects true/false, got `{v}`")))?
            }
            other => {
                return Err(Error::Config(format!("unknown key `{other}`; known keys: {}", KEYS.join(", "))));
            }
        }
        Ok(())
    }

    /// Applies `key = value` lines on top of `self`. `#` starts a comment.
    pub fn apply_str(&mut self, text: &str) -> Result<()> {
        for (k, v) in parse_key_values(text)? {
            self.set(&k, &v)?;
        }
        Ok(())
    }

    pub fn from_str_with_defaults(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        cfg.apply_str(text)?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_str_with_defaults(&text)
    }

    /// Serializes every key in a form accepted by [`Self::apply_str`].
    pub fn to_kv_string(&self) -> String {
        let mut s = String::new();
        let reals = [
            ("alpha1", self.alpha1),
            ("alpha2", self.alpha2),
            ("alpha3", self.alpha3),
            ("L", self.length),
            ("vmax_e_x", self.vmax_e_x),
            ("vmax_e_z", self.vmax_e_z),
            ("vmax_i", self.vmax_i),
            ("dt", self.dt),
            ("t_final", self.t_final),
            ("vte_x", self.vte_x),
            ("vte_z", self.vte_z),
            ("drift_e_x", self.drift_e_x),
            ("drift_e_z", self.drift_e_z),
            ("beam_e_x", self.beam_e_x),
            ("vti", self.vti),
            ("drift_i", self.drift_i),
            ("epsilon", self.epsilon),
            ("vacuum_tol", self.vacuum_tol),
        ];
        for (k, v) in reals {
            let _ = writeln!(s, "{k} = {}", v.as_f64());
        }
        for (k, v) in [("Nx", self.nx), ("Nvxe", self.nvxe), ("Nvze", self.nvze), ("Nvxi", self.nvxi), ("mode", self.mode), ("stride", self.stride), ("modes", self.modes)] {
            let _ = writeln!(s, "{k} = {v}");
        }
        let _ = writeln!(s, "method = {}", self.method);
        let _ = writeln!(s, "perturbed = {}", if self.perturbed == Species::Electrons { "electrons" } else { "ions" });
        let field = match self.field {
            FieldSchedule::AfterFirstAdvection => "after_first_advection",
            FieldSchedule::AfterFirstStage => "after_first_stage",
            FieldSchedule::Disabled => "disabled",
        };
        let _ = writeln!(s, "field = {field}");
        let _ = writeln!(s, "parallel = {}", self.parallel);
        s
    }
}
