use crate::error::{Error, Result};

/// How candidate step sizes are generated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DtSearch {
    /// Bisection on `dt` in `[lo, hi]` until the bracket is narrower than
    /// `rel_width · dt`.
    Continuous { lo: f64, hi: f64, rel_width: f64 },
    /// Search over `dt = span / n` for integer `n` in `[n_min, n_max]`, so
    /// the horizon is covered by whole steps.
    WholeSteps { span: f64, n_min: usize, n_max: usize },
}

impl DtSearch {
    /// Continuous search with the default 0.5 % bracket width.
    pub fn continuous(lo: f64, hi: f64) -> Self {
        Self::Continuous { lo, hi, rel_width: 0.005 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DtSearchResult {
    /// Largest step found that meets the target.
    pub dt: f64,
    /// Error at `dt`.
    pub error: f64,
    /// Smallest step seen that misses the target (`None` if the upper end passed).
    pub failing_dt: Option<f64>,
    /// Every `(dt, error)` evaluated, sorted by `dt`.
    pub evaluations: Vec<(f64, f64)>,
    /// Adjacent evaluations where the error decreased as `dt` grew.
    pub monotonicity_violations: Vec<((f64, f64), (f64, f64))>,
}

/// Finds the largest step whose error is at most `target`.
///
/// `error_at` may fail; numerical failures (blow-ups, non-convergence) are
/// treated as an infinite error, anything else aborts the search. The
/// search assumes the error grows with `dt` and reports evaluations that
/// contradict this.
pub fn largest_dt_for_target<F>(mut error_at: F, target: f64, search: DtSearch) -> Result<DtSearchResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut evaluations = Vec::new();
    let mut eval = |dt: f64| -> Result<f64> {
        let e = match error_at(dt) {
            Ok(e) if e.is_nan() => f64::INFINITY,
            Ok(e) => e,
            Err(err) if err.is_numerical() => f64::INFINITY,
            Err(err) => return Err(err),
        };
        evaluations.push((dt, e));
        Ok(e)
    };

    let (dt, error, failing_dt) = match search {
        DtSearch::Continuous { lo, hi, rel_width } => {
            if !(lo > 0.0 && hi > lo && rel_width > 0.0) {
                return Err(Error::InvalidArgument(format!("bad dt bracket [{lo}, {hi}]")));
            }
            let e_lo = eval(lo)?;
            if e_lo > target {
                return Err(Error::TargetUnattainable { target, smallest: e_lo });
            }
            let e_hi = eval(hi)?;
            if e_hi <= target {
                (hi, e_hi, None)
            } else {
                let (mut good, mut good_err, mut bad) = (lo, e_lo, hi);
                while bad - good > rel_width * good {
                    let mid = 0.5 * (good + bad);
                    let e = eval(mid)?;
                    if e <= target {
                        good = mid;
                        good_err = e;
                    } else {
                        bad = mid;
                    }
                }
                (good, good_err, Some(bad))
            }
        }
        DtSearch::WholeSteps { span, n_min, n_max } => {
            if !(span > 0.0 && n_min >= 1 && n_max > n_min) {
                return Err(Error::InvalidArgument(format!("bad step-count bracket [{n_min}, {n_max}]")));
            }
            let dt_of = |n: usize| span / n as f64;
            let e_fine = eval(dt_of(n_max))?;
            if e_fine > target {
                return Err(Error::TargetUnattainable { target, smallest: e_fine });
            }
            let e_coarse = eval(dt_of(n_min))?;
            if e_coarse <= target {
                (dt_of(n_min), e_coarse, None)
            } else {
                // Invariant: n_bad fails, n_good passes, n_bad < n_good.
                let (mut n_bad, mut n_good, mut good_err) = (n_min, n_max, e_fine);
                while n_good - n_bad > 1 {
                    let mid = n_bad + (n_good - n_bad) / 2;
                    let e = eval(dt_of(mid))?;
                    if e <= target {
                        n_good = mid;
                        good_err = e;
                    } else {
                        n_bad = mid;
                    }
                }
                (dt_of(n_good), good_err, Some(dt_of(n_bad)))
            }
        }
    };

    evaluations.sort_by(|a, b| a.0.total_cmp(&b.0));
    let monotonicity_violations =
        evaluations.windows(2).filter(|w| w[1].1 < w[0].1).map(|w| (w[0], w[1])).collect();
    Ok(DtSearchResult { dt, error, failing_dt, evaluations, monotonicity_violations })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_quadratic_model() {
        let c = 3.0;
        let target = 0.01;
        let r = largest_dt_for_target(|dt| Ok(c * dt * dt), target, DtSearch::continuous(1e-3, 1.0)).unwrap();
        let exact = (target / c).sqrt();
        assert!(r.dt <= exact && (exact - r.dt) / exact <= 0.005 + 1e-12);
        assert!(r.monotonicity_violations.is_empty());
        assert!(r.failing_dt.unwrap() > exact);
    }

    #[test]
    fn whole_steps_pick_smallest_passing_count() {
        let target = 0.05;
        let r = largest_dt_for_target(|dt| Ok(dt * dt), target, DtSearch::WholeSteps { span: 80.0, n_min: 100, n_max: 2000 })
            .unwrap();
        let n = (80.0 / r.dt).round() as usize;
        assert!((80.0 / n as f64).powi(2) <= target);
        assert!((80.0 / (n - 1) as f64).powi(2) > target);
    }

    #[test]
    fn unattainable_target() {
        let r = largest_dt_for_target(|_| Ok(1.0), 0.5, DtSearch::continuous(0.1, 1.0));
        assert!(matches!(r, Err(Error::TargetUnattainable { .. })));
    }

    #[test]
    fn blowups_count_as_failures() {
        let r = largest_dt_for_target(
            |dt| if dt > 0.5 { Err(Error::Blowup { step: 1, t: 0.0, reason: "nan".into() }) } else { Ok(dt) },
            0.7,
            DtSearch::continuous(0.1, 1.0),
        )
        .unwrap();
        assert!(r.dt <= 0.5 && r.dt > 0.49);
    }

    #[test]
    fn violations_are_reported() {
        let r = largest_dt_for_target(
            |dt| Ok(if (0.3..0.4).contains(&dt) { 0.0 } else { dt }),
            0.2,
            DtSearch::continuous(0.1, 1.0),
        )
        .unwrap();
        // The dip at 0.3..0.4 lets the bisection settle above the true threshold.
        assert!(r.dt > 0.3);
        assert!(!r.monotonicity_violations.is_empty());
    }
}
