//! Splitting-method coefficient matrices and the built-in catalog.
//!
//! A method with `s` stages and `N` operators is stored as an `s × N` matrix
//! `alpha`; stage `k` applies `φ_1(alpha[k][0]·dt)`, then `φ_2(alpha[k][1]·dt)`,
//! and so on up to `φ_N`. Permutations of the operator order are encoded
//! purely through the coefficients.

use std::fmt;
use std::str::FromStr;

use num_traits::{Num, Zero};

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct SplittingMethod<T> {
    name: String,
    operators: usize,
    stages: usize,
    alpha: Vec<T>,
    lem: Option<f64>,
    declared_order: u32,
}

impl<T: Clone> SplittingMethod<T> {
    /// Builds a method from its stage rows. Every row must have the same
    /// (non-zero) length.
    pub fn new(name: impl Into<String>, rows: Vec<Vec<T>>, declared_order: u32) -> Result<Self> {
        let name = name.into();
        let stages = rows.len();
        if stages == 0 {
            return Err(Error::InvalidMethod(format!("{name}: no stages")));
        }
        let operators = rows[0].len();
        if operators == 0 {
            return Err(Error::InvalidMethod(format!("{name}: no operators")));
        }
        if let Some(bad) = rows.iter().position(|r| r.len() != operators) {
            return Err(Error::InvalidMethod(format!(
                "{name}: stage {} has {} coefficients, expected {operators}",
                bad + 1,
                rows[bad].len()
            )));
        }
        Ok(Self {
            name,
            operators,
            stages,
            alpha: rows.into_iter().flatten().collect(),
            lem: None,
            declared_order,
        })
    }

    pub fn with_lem(mut self, lem: f64) -> Self {
        self.lem = Some(lem);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn num_operators(&self) -> usize {
        self.operators
    }

    pub fn num_stages(&self) -> usize {
        self.stages
    }

    /// Local error measure from the literature, if known.
    pub fn lem(&self) -> Option<f64> {
        self.lem
    }

    pub fn declared_order(&self) -> u32 {
        self.declared_order
    }

    /// Coefficient of operator `operator` in stage `stage` (both zero-based).
    pub fn coeff(&self, stage: usize, operator: usize) -> &T {
        &self.alpha[stage * self.operators + operator]
    }

    pub fn row(&self, stage: usize) -> &[T] {
        &self.alpha[stage * self.operators..(stage + 1) * self.operators]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[T]> {
        self.alpha.chunks(self.operators)
    }

    /// Coefficients of one operator across all stages.
    pub fn column(&self, operator: usize) -> Vec<T> {
        (0..self.stages).map(|k| self.coeff(k, operator).clone()).collect()
    }

    /// Maps every coefficient into another scalar type.
    pub fn map<U: Clone>(&self, f: impl Fn(&T) -> U) -> SplittingMethod<U> {
        SplittingMethod {
            name: self.name.clone(),
            operators: self.operators,
            stages: self.stages,
            alpha: self.alpha.iter().map(f).collect(),
            lem: self.lem,
            declared_order: self.declared_order,
        }
    }
}

impl<T: Clone + Zero> SplittingMethod<T> {
    /// Number of sub-flow applications per step: the nonzero coefficients.
    pub fn count_subintegrations(&self) -> usize {
        self.alpha.iter().filter(|a| !a.is_zero()).count()
    }

    /// Nonzero coefficient count for each operator.
    pub fn subintegrations_per_operator(&self) -> Vec<usize> {
        (0..self.operators)
            .map(|l| (0..self.stages).filter(|&k| !self.coeff(k, l).is_zero()).count())
            .collect()
    }

    /// The sequence of `(operator, coefficient)` applications in the order the
    /// composition driver performs them, with zero coefficients removed and
    /// consecutive applications of the same operator merged.
    pub fn application_sequence(&self) -> Vec<(usize, T)>
    where
        T: Num,
    {
        let mut seq: Vec<(usize, T)> = Vec::new();
        for row in self.rows() {
            for (l, a) in row.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                match seq.last_mut() {
                    Some((op, acc)) if *op == l => *acc = acc.clone() + a.clone(),
                    _ => seq.push((l, a.clone())),
                }
            }
        }
        seq
    }
}

impl<T: Clone + Num> SplittingMethod<T> {
    /// Generalized Strang splitting for the operator order `perm` (a
    /// permutation of `0..N`): half steps of `perm[0..N-1]`, a full step of
    /// `perm[N-1]`, then the half steps in reverse. Built with exact arithmetic
    /// so it also works for rational scalars.
    pub fn strang(perm: &[usize]) -> Result<Self> {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &p in perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidMethod(format!("{perm:?} is not a permutation")));
            }
        }
        if n < 2 {
            return Err(Error::InvalidMethod("Strang splitting needs at least 2 operators".into()));
        }
        let half = T::one() / (T::one() + T::one());
        let mut seq: Vec<(usize, T)> = perm[..n - 1].iter().map(|&p| (p, half.clone())).collect();
        seq.push((perm[n - 1], T::one()));
        seq.extend(perm[..n - 1].iter().rev().map(|&p| (p, half.clone())));

        let label = perm.iter().map(|p| (p + 1).to_string()).collect::<Vec<_>>().join("-");
        Self::new(format!("Strang({label})"), pack_sequence(&seq, n), 2)
    }

    /// Lie–Trotter splitting applying `φ_1` first and `φ_N` last.
    pub fn godunov(operators: usize) -> Result<Self> {
        Self::new("Godunov", vec![vec![T::one(); operators]], 1)
    }

    /// The adjoint Lie–Trotter splitting, applying `φ_N` first.
    pub fn godunov_adjoint(operators: usize) -> Result<Self> {
        let seq: Vec<(usize, T)> = (0..operators).rev().map(|l| (l, T::one())).collect();
        Self::new("GodunovAdjoint", pack_sequence(&seq, operators), 1)
    }
}

/// Packs an application sequence into stage rows: a new stage starts
/// whenever the next operator does not come after the previous one.
fn pack_sequence<T: Clone + Num>(seq: &[(usize, T)], operators: usize) -> Vec<Vec<T>> {
    let mut rows = Vec::new();
    let mut row = vec![T::zero(); operators];
    let mut last: Option<usize> = None;
    for (op, a) in seq {
        if last.is_some_and(|l| *op <= l) {
            rows.push(std::mem::replace(&mut row, vec![T::zero(); operators]));
        }
        row[*op] = a.clone();
        last = Some(*op);
    }
    rows.push(row);
    rows
}

/// Identifier for the built-in 3-operator methods.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MethodId {
    /// Strang splitting; the array holds the zero-based operator order.
    Strang([usize; 3]),
    Ak32i,
    Ak32ii,
    Ak52,
    Godunov,
    GodunovAdjoint,
}

impl MethodId {
    pub const STRANG_PERMUTATIONS: [[usize; 3]; 6] =
        [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

    /// Every built-in method, Strang permutations first.
    pub fn all() -> Vec<MethodId> {
        let mut ids: Vec<MethodId> = Self::STRANG_PERMUTATIONS.iter().map(|p| MethodId::Strang(*p)).collect();
        ids.extend([MethodId::Ak32i, MethodId::Ak32ii, MethodId::Ak52, MethodId::Godunov, MethodId::GodunovAdjoint]);
        ids
    }

    /// The second-order methods (everything except the Lie–Trotter pair).
    pub fn second_order() -> Vec<MethodId> {
        Self::all().into_iter().filter(|m| !matches!(m, MethodId::Godunov | MethodId::GodunovAdjoint)).collect()
    }

    pub fn method<T: Real>(self) -> SplittingMethod<T> {
        builtin_method(self)
    }
}

impl Default for MethodId {
    fn default() -> Self {
        MethodId::Strang([0, 1, 2])
    }
}

impl fmt::Display for MethodId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MethodId::Strang([a, b, c]) => write!(f, "Strang({}-{}-{})", a + 1, b + 1, c + 1),
            MethodId::Ak32i => f.write_str("AK32i"),
            MethodId::Ak32ii => f.write_str("AK32ii"),
            MethodId::Ak52 => f.write_str("AK52"),
            MethodId::Godunov => f.write_str("Godunov"),
            MethodId::GodunovAdjoint => f.write_str("GodunovAdjoint"),
        }
    }
}

impl FromStr for MethodId {
    type Err = Error;

    /// Accepts the canonical names (`Strang(2-3-1)`, `AK32i`, ...) as well as
    /// loose spellings such as `strang231`, `AK 3-2(ii)` or `ak52`.
    fn from_str(s: &str) -> Result<Self> {
        let key: String = s.chars().filter(|c| c.is_ascii_alphanumeric()).collect::<String>().to_ascii_lowercase();
        let id = match key.as_str() {
            "strang" => MethodId::default(),
            "ak32i" => MethodId::Ak32i,
            "ak32ii" => MethodId::Ak32ii,
            "ak52" => MethodId::Ak52,
            "godunov" | "lietrotter" => MethodId::Godunov,
            "godunovadjoint" | "lietrotteradjoint" => MethodId::GodunovAdjoint,
            other => {
                let digits = other.strip_prefix("strang").ok_or_else(|| Error::UnknownMethod(s.into()))?;
                let perm: Vec<usize> = digits
                    .chars()
                    .map(|c| c.to_digit(10).map(|d| d as usize).filter(|d| (1..=3).contains(d)))
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(|| Error::UnknownMethod(s.into()))?;
                let perm: [usize; 3] = perm
                    .iter()
                    .map(|d| d - 1)
                    .collect::<Vec<_>>()
                    .try_into()
                    .map_err(|_| Error::UnknownMethod(s.into()))?;
                if !Self::STRANG_PERMUTATIONS.contains(&perm) {
                    return Err(Error::UnknownMethod(s.into()));
                }
                MethodId::Strang(perm)
            }
        };
        Ok(id)
    }
}

/// Returns the coefficient matrix of a built-in 3-operator method.
pub fn builtin_method<T: Real>(id: MethodId) -> SplittingMethod<T> {
    let r = |x: f64| T::lit(x);
    let built = match id {
        MethodId::Strang(perm) => SplittingMethod::strang(&perm).map(|m| m.with_lem(1.48)),
        MethodId::Ak32i => {
            let inv_sqrt2 = T::FRAC_1_SQRT_2();
            let one = T::one();
            SplittingMethod::new(
                "AK32i",
                vec![
                    vec![r(0.5), one - inv_sqrt2, inv_sqrt2],
                    vec![T::zero(), inv_sqrt2, one - inv_sqrt2],
                    vec![r(0.5), T::zero(), T::zero()],
                ],
                2,
            )
            .map(|m| m.with_lem(1.06))
        }
        MethodId::Ak32ii => SplittingMethod::new(
            "AK32ii",
            vec![
                vec![r(0.316620935432115636), r(0.273890572734778059), r(0.662265355057626845)],
                vec![r(-0.0303736077786568570), r(0.438287559165397521), r(0.0664399910533392230)],
                vec![r(0.713752672346541221), r(0.287821868099824420), r(0.271294653889033932)],
            ],
            2,
        )
        .map(|m| m.with_lem(0.29)),
        MethodId::Ak52 => SplittingMethod::new(
            "AK52",
            vec![
                vec![r(0.161862914279624), r(0.242677859055102), r(0.5)],
                vec![r(0.338137085720376), r(0.514644281889796), T::zero()],
                vec![r(0.338137085720376), T::zero(), r(0.5)],
                vec![T::zero(), r(0.242677859055102), T::zero()],
                vec![r(0.161862914279624), T::zero(), T::zero()],
            ],
            2,
        )
        .map(|m| m.with_lem(0.22)),
        MethodId::Godunov => SplittingMethod::godunov(3),
        MethodId::GodunovAdjoint => SplittingMethod::godunov_adjoint(3),
    };
    built.expect("built-in coefficient tables are well formed")
}

/// Looks up a built-in method by name.
pub fn builtin_method_by_name<T: Real>(name: &str) -> Result<SplittingMethod<T>> {
    Ok(builtin_method(name.parse()?))
}

/// Writes the coefficient catalog as `name,stage,alpha1,alpha2,alpha3`.
pub fn write_catalog_csv<W: std::io::Write>(ids: &[MethodId], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let wrap = |e| Error::csv("<catalog>", e);
    w.write_record(["name", "stage", "alpha1", "alpha2", "alpha3"]).map_err(wrap)?;
    for id in ids {
        let m: SplittingMethod<f64> = builtin_method(*id);
        for (k, row) in m.rows().enumerate() {
            let mut rec = vec![id.to_string(), (k + 1).to_string()];
            rec.extend(row.iter().map(|a| format!("{a:.18e}")));
            w.write_record(&rec).map_err(wrap)?;
        }
    }
    w.flush().map_err(|e| Error::io("<catalog>", e))?;
    Ok(())
}
