//! Exhaustive search over the zero patterns of 3-stage, 3-operator methods
//! with exactly five nonzero coefficients.
//!
//! For every pattern with four zeros (and at least one nonzero per operator)
//! the six order conditions are solved for the five free coefficients by
//! Levenberg–Marquardt from a deterministic grid of starting points. Every
//! converged solution is compared with the Strang permutations through its
//! merged application sequence.

use super::method::{builtin_method, MethodId, SplittingMethod};

const STAGES: usize = 3;
const OPS: usize = 3;
const FREE: usize = 5;

#[derive(Debug, Clone)]
pub struct PatternSolution {
    /// Indices `stage * 3 + operator` of the nonzero coefficients.
    pub support: [usize; FREE],
    pub alpha: [[f64; OPS]; STAGES],
    pub residual: f64,
    /// The Strang permutation this solution reproduces, if any.
    pub matches: Option<MethodId>,
    /// Largest coefficient deviation from the matched Strang sequence.
    pub deviation: f64,
}

#[derive(Debug, Clone)]
pub struct StrangSearchReport {
    pub patterns_examined: usize,
    pub patterns_with_solutions: usize,
    pub solutions: Vec<PatternSolution>,
}

impl StrangSearchReport {
    /// True when every solution found matches some Strang permutation.
    pub fn all_match(&self) -> bool {
        self.solutions.iter().all(|s| s.matches.is_some())
    }

    pub fn max_deviation(&self) -> f64 {
        self.solutions.iter().map(|s| s.deviation).fold(0.0, f64::max)
    }

    /// Strang permutations that were recovered by the search.
    pub fn recovered(&self) -> Vec<MethodId> {
        let mut ids: Vec<MethodId> = self.solutions.iter().filter_map(|s| s.matches).collect();
        ids.sort_by_key(|id| id.to_string());
        ids.dedup();
        ids
    }
}

fn full_matrix(support: &[usize; FREE], x: &[f64; FREE]) -> [[f64; OPS]; STAGES] {
    let mut a = [[0.0; OPS]; STAGES];
    for (&idx, &v) in support.iter().zip(x) {
        a[idx / OPS][idx % OPS] = v;
    }
    a
}

/// Residuals (3 first-order, 3 second-order) and their Jacobian with
/// respect to the free coefficients.
fn residual_and_jacobian(support: &[usize; FREE], x: &[f64; FREE]) -> ([f64; 6], [[f64; FREE]; 6]) {
    let a = full_matrix(support, x);
    let mut r = [0.0; 6];
    let mut jac = [[0.0; FREE]; 6];
    for l in 0..OPS {
        r[l] = (0..STAGES).map(|k| a[k][l]).sum::<f64>() - 1.0;
    }
    let pairs = [(0, 1), (0, 2), (1, 2)];
    for (p, &(l, lp)) in pairs.iter().enumerate() {
        let suffix = |k: usize| (k..STAGES).map(|j| a[j][lp]).sum::<f64>();
        let prefix = |k: usize| (0..=k).map(|j| a[j][l]).sum::<f64>();
        r[OPS + p] = (0..STAGES).map(|k| a[k][l] * suffix(k)).sum::<f64>() - 0.5;
        for (f, &idx) in support.iter().enumerate() {
            let (k, m) = (idx / OPS, idx % OPS);
            if m == l {
                jac[OPS + p][f] += suffix(k);
            }
            if m == lp {
                jac[OPS + p][f] += prefix(k);
            }
        }
    }
    for (f, &idx) in support.iter().enumerate() {
        jac[idx % OPS][f] = 1.0;
    }
    (r, jac)
}

fn norm(r: &[f64]) -> f64 {
    r.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Solves a small dense system in place by Gaussian elimination with
/// partial pivoting. Returns `None` when singular.
fn solve_small(mut m: [[f64; FREE]; FREE], mut b: [f64; FREE]) -> Option<[f64; FREE]> {
    for c in 0..FREE {
        let p = (c..FREE).max_by(|&i, &j| m[i][c].abs().total_cmp(&m[j][c].abs()))?;
        if m[p][c].abs() < 1e-300 {
            return None;
        }
        m.swap(c, p);
        b.swap(c, p);
        for i in c + 1..FREE {
            let f = m[i][c] / m[c][c];
            for j in c..FREE {
                m[i][j] -= f * m[c][j];
            }
            b[i] -= f * b[c];
        }
    }
    let mut x = [0.0; FREE];
    for i in (0..FREE).rev() {
        let s: f64 = (i + 1..FREE).map(|j| m[i][j] * x[j]).sum();
        x[i] = (b[i] - s) / m[i][i];
    }
    Some(x)
}

fn levenberg_marquardt(support: &[usize; FREE], mut x: [f64; FREE]) -> ([f64; FREE], f64) {
    let mut lambda = 1e-3;
    let (mut r, mut jac) = residual_and_jacobian(support, &x);
    let mut cost = norm(&r);
    for _ in 0..300 {
        if cost < 1e-15 {
            break;
        }
        let mut jtj = [[0.0; FREE]; FREE];
        let mut jtr = [0.0; FREE];
        for i in 0..FREE {
            for j in 0..FREE {
                jtj[i][j] = (0..6).map(|e| jac[e][i] * jac[e][j]).sum();
            }
            jtr[i] = -(0..6).map(|e| jac[e][i] * r[e]).sum::<f64>();
        }
        let mut improved = false;
        for _ in 0..30 {
            let mut damped = jtj;
            for (i, row) in damped.iter_mut().enumerate() {
                row[i] += lambda * (jtj[i][i] + 1e-12);
            }
            let Some(delta) = solve_small(damped, jtr) else {
                lambda *= 10.0;
                continue;
            };
            let mut trial = x;
            for (t, d) in trial.iter_mut().zip(delta) {
                *t += d;
            }
            let (rt, jt) = residual_and_jacobian(support, &trial);
            let ct = norm(&rt);
            if ct < cost {
                x = trial;
                r = rt;
                jac = jt;
                cost = ct;
                lambda = (lambda * 0.3).max(1e-15);
                improved = true;
                break;
            }
            lambda *= 10.0;
        }
        if !improved {
            break;
        }
    }
    (x, cost)
}

fn strang_sequences() -> Vec<(MethodId, Vec<(usize, f64)>)> {
    MethodId::STRANG_PERMUTATIONS
        .iter()
        .map(|&p| {
            let id = MethodId::Strang(p);
            (id, builtin_method::<f64>(id).application_sequence())
        })
        .collect()
}

fn match_strang(alpha: &[[f64; OPS]; STAGES], strang: &[(MethodId, Vec<(usize, f64)>)]) -> (Option<MethodId>, f64) {
    let rows: Vec<Vec<f64>> = alpha.iter().map(|r| r.to_vec()).collect();
    let seq = SplittingMethod::new("candidate", rows, 2).expect("3x3 rows").application_sequence();
    let mut best = (None, f64::INFINITY);
    for (id, target) in strang {
        if target.len() != seq.len() || target.iter().zip(&seq).any(|(a, b)| a.0 != b.0) {
            continue;
        }
        let dev = target.iter().zip(&seq).map(|(a, b)| (a.1 - b.1).abs()).fold(0.0, f64::max);
        if dev < best.1 {
            best = (Some(*id), dev);
        }
    }
    best
}

/// Runs the exhaustive search. `match_tolerance` bounds the coefficient
/// deviation accepted as "equal to a Strang permutation".
pub fn search_five_subintegration_methods(match_tolerance: f64) -> StrangSearchReport {
    let strang = strang_sequences();
    let starts = [-0.35, 0.4, 1.1];
    let mut report = StrangSearchReport { patterns_examined: 0, patterns_with_solutions: 0, solutions: Vec::new() };

    for mask in 0u32..(1 << (STAGES * OPS)) {
        if mask.count_ones() as usize != FREE {
            continue;
        }
        let support: Vec<usize> = (0..STAGES * OPS).filter(|i| mask & (1 << i) != 0).collect();
        let support: [usize; FREE] = support.try_into().expect("five entries");
        // An operator without any nonzero coefficient cannot satisfy its
        // first-order condition.
        if (0..OPS).any(|l| !support.iter().any(|&i| i % OPS == l)) {
            continue;
        }
        report.patterns_examined += 1;

        let mut found: Vec<[f64; FREE]> = Vec::new();
        for code in 0..starts.len().pow(FREE as u32) {
            let mut x0 = [0.0; FREE];
            let mut c = code;
            for v in x0.iter_mut() {
                *v = starts[c % starts.len()];
                c /= starts.len();
            }
            let (x, res) = levenberg_marquardt(&support, x0);
            if res > 1e-12 || x.iter().any(|v| v.abs() < 1e-6) {
                continue;
            }
            if found.iter().any(|f| f.iter().zip(&x).all(|(a, b)| (a - b).abs() < 1e-7)) {
                continue;
            }
            found.push(x);
            let alpha = full_matrix(&support, &x);
            let (matches, deviation) = match_strang(&alpha, &strang);
            let matches = matches.filter(|_| deviation <= match_tolerance);
            report.solutions.push(PatternSolution { support, alpha, residual: res, matches, deviation });
        }
        if !found.is_empty() {
            report.patterns_with_solutions += 1;
        }
    }
    report
}
