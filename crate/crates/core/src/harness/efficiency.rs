use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::splitting::SplittingMethod;

/// `η = 1 − (1 + ρ)/δ`: the fraction of Strang's run time saved by a method
/// that admits a `δ` times larger step at `1 + ρ` times the per-step cost.
pub fn efficiency_gain(delta: f64, rho: f64) -> f64 {
    1.0 - (1.0 + rho) / delta
}

/// Fraction of time saved by the candidate relative to the baseline.
pub fn time_saved(candidate_seconds: f64, baseline_seconds: f64) -> f64 {
    1.0 - candidate_seconds / baseline_seconds
}

/// `ρ = Σ τ̃_j / τ^S` over explicitly listed extra sub-integration times.
pub fn extra_time_fraction_from_seconds(extra_seconds: &[f64], baseline_step_seconds: f64) -> Result<f64> {
    if !(baseline_step_seconds > 0.0) {
        return Err(Error::InvalidValue("baseline step time"));
    }
    Ok(extra_seconds.iter().sum::<f64>() / baseline_step_seconds)
}

/// Extra-time fraction of `candidate` over `baseline` from measured
/// per-call costs of each operator (`per_call_seconds[ℓ]`) and the
/// baseline's per-step wall time.
///
/// The extra work of operator `ℓ` is the difference in how many times the
/// two methods call it per step. When the candidate makes fewer
/// sub-integrations in total the case is reported as an error instead of a
/// negative fraction.
pub fn extra_time_fraction<T: Real>(
    candidate: &SplittingMethod<T>,
    baseline: &SplittingMethod<T>,
    per_call_seconds: &[f64],
    baseline_step_seconds: f64,
) -> Result<f64> {
    let n = candidate.num_operators();
    if baseline.num_operators() != n || per_call_seconds.len() != n {
        return Err(Error::LengthMismatch { left: per_call_seconds.len(), right: n });
    }
    let (kc, kb) = (candidate.count_subintegrations(), baseline.count_subintegrations());
    if kc < kb {
        return Err(Error::NegativeExtraWork { candidate: kc, baseline: kb });
    }
    let cc = candidate.subintegrations_per_operator();
    let cb = baseline.subintegrations_per_operator();
    let extra: Vec<f64> =
        (0..n).map(|l| (cc[l] as f64 - cb[l] as f64) * per_call_seconds[l]).collect();
    extra_time_fraction_from_seconds(&extra, baseline_step_seconds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::splitting::{builtin_method, MethodId};

    #[test]
    fn gain_band_of_fourteen_to_eighteen_percent() {
        assert!((efficiency_gain(1.4, 0.15) - 0.178_571_428_571).abs() < 1e-9);
        assert!((efficiency_gain(1.4, 0.2) - 0.142_857_142_857).abs() < 1e-9);
        assert_eq!(efficiency_gain(1.0, 0.0), 0.0);
    }

    #[test]
    fn synthetic_rho() {
        assert!((extra_time_fraction_from_seconds(&[1.8], 10.0).unwrap() - 0.18).abs() < 1e-15);
    }

    #[test]
    fn strang_against_itself_is_free() {
        let s: crate::Method = builtin_method(MethodId::Strang([0, 1, 2]));
        assert_eq!(extra_time_fraction(&s, &s, &[1.0, 2.0, 3.0], 9.0).unwrap(), 0.0);
    }

    #[test]
    fn ak32i_pays_for_one_more_operator_three_call() {
        let s: crate::Method = builtin_method(MethodId::Strang([0, 1, 2]));
        let ak = builtin_method(MethodId::Ak32i);
        let rho = extra_time_fraction(&ak, &s, &[0.1, 0.2, 1.5], 10.0).unwrap();
        assert!((rho - 0.15).abs() < 1e-15);
    }

    #[test]
    fn fewer_subintegrations_are_reported() {
        let s: crate::Method = builtin_method(MethodId::Strang([0, 1, 2]));
        let g = builtin_method(MethodId::Godunov);
        assert!(matches!(extra_time_fraction(&g, &s, &[1.0; 3], 1.0), Err(Error::NegativeExtraWork { candidate: 3, baseline: 5 })));
    }
}
