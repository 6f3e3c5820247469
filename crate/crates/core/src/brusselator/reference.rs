use std::fs::{self, File};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use super::{sample_state, BrusselatorConfig, BrusselatorState, SAMPLE_POINTS};
use crate::error::{Error, Result};
use crate::numerics::{Dopri5, ReferenceIntegratorConfig};
use crate::scalar::Real;

/// File name used by [`reference_solution_cached`].
pub const REFERENCE_FILE: &str = "brusselator_reference.csv";

#[derive(Debug, Clone, Copy)]
pub struct ReferenceOptions<T> {
    /// Level `j` uses `base_cells·2^j` cells, so sample points are grid points.
    pub base_cells: usize,
    pub max_levels: usize,
    /// Required agreement (max relative difference) between successive levels.
    pub agreement: T,
    /// Combine successive levels as `(4 R_fine − R_coarse) / 3`, cancelling
    /// the second-order spatial error.
    pub extrapolate: bool,
    pub integrator: ReferenceIntegratorConfig<T>,
}

impl<T: Real> Default for ReferenceOptions<T> {
    fn default() -> Self {
        Self {
            base_cells: SAMPLE_POINTS - 1,
            max_levels: 4,
            agreement: T::lit(1e-6),
            extrapolate: true,
            integrator: ReferenceIntegratorConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceSolution<T> {
    /// `[T; C]` at the sample points (length `2·SAMPLE_POINTS`).
    pub samples: Vec<T>,
    /// Interior point counts of the grids that were solved.
    pub grids: Vec<usize>,
    /// Max relative difference between the last two approximations.
    pub agreement: T,
}

/// Unsplit semi-discrete solution at `cfg.t_final` on the configured grid.
pub fn solve_unsplit<T: Real>(cfg: &BrusselatorConfig<T>, integrator: &ReferenceIntegratorConfig<T>) -> Result<BrusselatorState<T>> {
    cfg.validate()?;
    let mut y = cfg.initial_state().to_vec();
    let mut ode = Dopri5::new(y.len());
    ode.integrate(cfg.full_rhs(), &mut y, T::zero(), cfg.t_final, integrator)?;
    Ok(BrusselatorState::from_slice(&y, cfg.t_final))
}

fn max_rel<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |m, (&x, &y)| m.max(((x - y) / y).abs()))
}

/// Refines the grid until successive approximations at the sample points
/// agree to `opts.agreement`. The grid size in `cfg` is ignored.
pub fn reference_solution<T: Real>(cfg: &BrusselatorConfig<T>, opts: &ReferenceOptions<T>) -> Result<ReferenceSolution<T>> {
    if opts.base_cells == 0 || opts.base_cells % (SAMPLE_POINTS - 1) != 0 {
        return Err(Error::Config(format!("base_cells must be a multiple of {}", SAMPLE_POINTS - 1)));
    }
    let mut raw: Vec<Vec<T>> = Vec::new();
    let mut approx: Vec<Vec<T>> = Vec::new();
    let mut grids = Vec::new();
    let mut best = T::infinity();
    for level in 0..opts.max_levels {
        let m = opts.base_cells * (1 << level) - 1;
        let level_cfg = BrusselatorConfig { m, ..*cfg };
        let state = solve_unsplit(&level_cfg, &opts.integrator)?;
        grids.push(m);
        raw.push(sample_state(&level_cfg, &state)?);
        if opts.extrapolate {
            if let [.., coarse, fine] = raw.as_slice() {
                let three = T::lit(3.0);
                let four = T::lit(4.0);
                approx.push(fine.iter().zip(coarse).map(|(&f, &c)| (four * f - c) / three).collect());
            }
        } else {
            approx.push(raw.last().expect("just pushed").clone());
        }
        if let [.., prev, last] = approx.as_slice() {
            let diff = max_rel(last, prev);
            best = best.min(diff);
            if diff <= opts.agreement {
                return Ok(ReferenceSolution { samples: last.clone(), grids, agreement: diff });
            }
        }
    }
    Err(Error::RefinementNotConverged { levels: grids.len(), best: best.as_f64() })
}

fn cache_key<T: Real>(cfg: &BrusselatorConfig<T>, opts: &ReferenceOptions<T>) -> String {
    format!(
        "alpha={:e} beta={:e} d1={:e} d2={:e} t_final={:e} base_cells={} agreement={:e} extrapolate={} rtol={:e} atol={:e}",
        cfg.alpha.as_f64(),
        cfg.beta.as_f64(),
        cfg.d1.as_f64(),
        cfg.d2.as_f64(),
        cfg.t_final.as_f64(),
        opts.base_cells,
        opts.agreement.as_f64(),
        opts.extrapolate,
        opts.integrator.rtol.as_f64(),
        opts.integrator.atol.as_f64(),
    )
}

/// Writes the reference as CSV (`x,T,C`) preceded by `#` metadata lines.
pub fn save_reference<T: Real>(path: &Path, key: &str, sol: &ReferenceSolution<T>) -> Result<()> {
    let mut file = File::create(path).map_err(|e| Error::io(path, e))?;
    let grids: Vec<String> = sol.grids.iter().map(|g| g.to_string()).collect();
    writeln!(file, "# brusselator reference solution")
        .and_then(|_| writeln!(file, "# key: {key}"))
        .and_then(|_| writeln!(file, "# grids: {}", grids.join(";")))
        .and_then(|_| writeln!(file, "# agreement: {:e}", sol.agreement.as_f64()))
        .map_err(|e| Error::io(path, e))?;
    let mut w = csv::Writer::from_writer(file);
    w.write_record(["x", "T", "C"]).map_err(|e| Error::csv(path, e))?;
    let last = (SAMPLE_POINTS - 1) as f64;
    for i in 0..SAMPLE_POINTS {
        let row = [
            format!("{}", i as f64 / last),
            format!("{}", sol.samples[i].as_f64()),
            format!("{}", sol.samples[SAMPLE_POINTS + i].as_f64()),
        ];
        w.write_record(&row).map_err(|e| Error::csv(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

/// Reads a reference written by [`save_reference`]; returns its key too.
pub fn load_reference<T: Real>(path: &Path) -> Result<(String, ReferenceSolution<T>)> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut key = String::new();
    let mut grids = Vec::new();
    let mut agreement = f64::NAN;
    for line in BufReader::new(&file).lines() {
        let line = line.map_err(|e| Error::io(path, e))?;
        let Some(meta) = line.strip_prefix("# ") else { break };
        if let Some(k) = meta.strip_prefix("key: ") {
            key = k.to_string();
        } else if let Some(g) = meta.strip_prefix("grids: ") {
            grids = g.split(';').filter_map(|s| s.parse().ok()).collect();
        } else if let Some(a) = meta.strip_prefix("agreement: ") {
            agreement = a.parse().unwrap_or(f64::NAN);
        }
    }
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(file);
    let mut t = Vec::new();
    let mut c = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| Error::csv(path, e))?;
        let parse = |i: usize| -> Result<T> {
            rec.get(i)
                .and_then(|s| s.trim().parse::<f64>().ok())
                .map(T::lit)
                .ok_or_else(|| Error::Config(format!("malformed reference row in {}", path.display())))
        };
        t.push(parse(1)?);
        c.push(parse(2)?);
    }
    if t.len() != SAMPLE_POINTS {
        return Err(Error::LengthMismatch { left: t.len(), right: SAMPLE_POINTS });
    }
    t.extend(c);
    Ok((key, ReferenceSolution { samples: t, grids, agreement: T::lit(agreement) }))
}

/// [`reference_solution`] with an on-disk cache in `dir`. A cached file is
/// reused only when its parameters match.
pub fn reference_solution_cached<T: Real>(
    cfg: &BrusselatorConfig<T>,
    opts: &ReferenceOptions<T>,
    dir: &Path,
) -> Result<ReferenceSolution<T>> {
    let path: PathBuf = dir.join(REFERENCE_FILE);
    let key = cache_key(cfg, opts);
    if path.exists() {
        if let Ok((stored, sol)) = load_reference(&path) {
            if stored == key {
                return Ok(sol);
            }
        }
    }
    let sol = reference_solution(cfg, opts)?;
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    save_reference(&path, &key, &sol)?;
    Ok(sol)
}
