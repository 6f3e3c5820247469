//! First- and second-order conditions for N-operator splitting methods.
//!
//! Generic over any signed exact or floating scalar, so rational Strang
//! matrices can be checked with zero residual.

use num_traits::{Num, Signed};

use super::method::SplittingMethod;

/// Default tolerance for order-condition residuals in double precision.
pub const DEFAULT_ORDER_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct OrderConditionReport<T> {
    /// `|Σ_k α_k^(ℓ) − 1|` for each operator ℓ.
    pub residuals_order1: Vec<T>,
    /// One residual per operator pair `ℓ < ℓ'`, in lexicographic order.
    pub residuals_order2: Vec<T>,
    pub pairs: Vec<(usize, usize)>,
    pub max_abs_residual: T,
    /// 2 if every residual is within tolerance, 1 if only the first-order
    /// ones are, 0 otherwise.
    pub satisfied_to_order: u32,
}

pub fn verify_order_conditions<T>(method: &SplittingMethod<T>, tolerance: T) -> OrderConditionReport<T>
where
    T: Clone + Num + Signed + PartialOrd,
{
    let s = method.num_stages();
    let n = method.num_operators();
    let half = T::one() / (T::one() + T::one());

    let residuals_order1: Vec<T> = (0..n)
        .map(|l| {
            let sum = (0..s).fold(T::zero(), |acc, k| acc + method.coeff(k, l).clone());
            (sum - T::one()).abs()
        })
        .collect();

    let mut pairs = Vec::new();
    let mut residuals_order2 = Vec::new();
    for l in 0..n {
        for lp in l + 1..n {
            // Within a stage operator l runs before lp, so the suffix sum
            // of lp starts at the same stage.
            let mut suffix = T::zero();
            let mut total = T::zero();
            for k in (0..s).rev() {
                suffix = suffix + method.coeff(k, lp).clone();
                total = total + method.coeff(k, l).clone() * suffix.clone();
            }
            pairs.push((l, lp));
            residuals_order2.push((total - half.clone()).abs());
        }
    }

    let max_of = |v: &[T]| v.iter().cloned().fold(T::zero(), |m, r| if r > m { r } else { m });
    let max1 = max_of(&residuals_order1);
    let max2 = max_of(&residuals_order2);
    let max_abs_residual = if max2 > max1 { max2.clone() } else { max1.clone() };

    let satisfied_to_order = if max1 <= tolerance {
        if max2 <= tolerance {
            2
        } else {
            1
        }
    } else {
        0
    };

    OrderConditionReport { residuals_order1, residuals_order2, pairs, max_abs_residual, satisfied_to_order }
}
