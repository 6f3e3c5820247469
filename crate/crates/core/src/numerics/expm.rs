//! Dense matrices and the matrix exponential (scaling and squaring with a
//! diagonal Padé core), plus a shared cache keyed on `(operator id, h)`.

use std::collections::HashMap;
use std::ops::{Index, IndexMut};
use std::sync::{Arc, RwLock};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Largest dimension accepted by [`expm_action`].
pub const MAX_EXPM_DIM: usize = 4096;

/// Square, row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Real> DenseMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![T::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    pub fn from_diagonal(d: &[T]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, &v) in d.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    /// Tridiagonal matrix with constant bands.
    pub fn tridiagonal(n: usize, lower: T, diag: T, upper: T) -> Self {
        Self::from_fn(n, |i, j| {
            if i == j {
                diag
            } else if j + 1 == i {
                lower
            } else if i + 1 == j {
                upper
            } else {
                T::zero()
            }
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn scaled(&self, s: T) -> Self {
        Self { n: self.n, data: self.data.iter().map(|&v| v * s).collect() }
    }

    /// `self += s * other`
    pub fn add_scaled(&mut self, s: T, other: &Self) {
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a += s * b;
        }
    }

    pub fn add_identity(&mut self, s: T) {
        for i in 0..self.n {
            self.data[i * self.n + i] += s;
        }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            let orow = &mut out.data[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == T::zero() {
                    continue;
                }
                for (o, &b) in orow.iter_mut().zip(&other.data[k * n..(k + 1) * n]) {
                    *o += a * b;
                }
            }
        }
        out
    }

    /// `out = self · x`
    pub fn mul_vec(&self, x: &[T], out: &mut [T]) {
        for (i, o) in out.iter_mut().enumerate() {
            *o = dot(self.row(i), x);
        }
    }

    /// Maximum absolute column sum.
    pub fn norm1(&self) -> T {
        let n = self.n;
        (0..n)
            .map(|j| (0..n).map(|i| self.data[i * n + j].abs()).sum::<T>())
            .fold(T::zero(), T::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.data.iter().zip(&other.data).map(|(&a, &b)| (a - b).abs()).fold(T::zero(), T::max)
    }

    /// Solves `self · X = B` by LU with partial pivoting.
    pub fn solve(&self, b: &Self) -> Result<Self> {
        let n = self.n;
        let mut a = self.data.clone();
        let mut x = b.data.clone();
        for col in 0..n {
            let (piv, pmax) = (col..n)
                .map(|r| (r, a[r * n + col].abs()))
                .fold((col, T::zero()), |best, c| if c.1 > best.1 { c } else { best });
            if pmax == T::zero() || !pmax.is_finite() {
                return Err(Error::SingularMatrix);
            }
            if piv != col {
                for j in 0..n {
                    a.swap(piv * n + j, col * n + j);
                    x.swap(piv * n + j, col * n + j);
                }
            }
            let inv = T::one() / a[col * n + col];
            for r in col + 1..n {
                let f = a[r * n + col] * inv;
                if f == T::zero() {
                    continue;
                }
                for j in col..n {
                    let v = a[col * n + j];
                    a[r * n + j] -= f * v;
                }
                for j in 0..n {
                    let v = x[col * n + j];
                    x[r * n + j] -= f * v;
                }
            }
        }
        for col in (0..n).rev() {
            let inv = T::one() / a[col * n + col];
            for j in 0..n {
                let mut s = x[col * n + j];
                for k in col + 1..n {
                    s -= a[col * n + k] * x[k * n + j];
                }
                x[col * n + j] = s * inv;
            }
        }
        Ok(Self { n, data: x })
    }
}

impl<T> Index<(usize, usize)> for DenseMatrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.n + j]
    }
}

impl<T> IndexMut<(usize, usize)> for DenseMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.n + j]
    }
}

const PADE3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const PADE5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const PADE7: [f64; 8] = [17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0];
const PADE9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

// Backward-error bounds for double precision (Higham 2005).
const THETA: [(f64, &[f64]); 4] = [
    (1.495585217958292e-2, &PADE3),
    (2.539398330063230e-1, &PADE5),
    (9.504178996162932e-1, &PADE7),
    (2.097847961257068e0, &PADE9),
];
const THETA13: f64 = 5.371920351148152;

/// Dot product with eight independent partial sums, which lets the
/// compiler vectorize the loop.
fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    const LANES: usize = 8;
    let (ca, cb) = (a.chunks_exact(LANES), b.chunks_exact(LANES));
    let tail: T = ca.remainder().iter().zip(cb.remainder()).map(|(&x, &y)| x * y).sum();
    let mut acc = [T::zero(); LANES];
    for (xa, xb) in ca.zip(cb) {
        for k in 0..LANES {
            acc[k] += xa[k] * xb[k];
        }
    }
    acc.iter().copied().sum::<T>() + tail
}

/// `exp(h A)` by scaling and squaring.
pub fn expm_action<T: Real>(a: &DenseMatrix<T>, h: T) -> Result<DenseMatrix<T>> {
    let n = a.dim();
    if n > MAX_EXPM_DIM {
        return Err(Error::DimensionTooLarge(n));
    }
    if !h.is_finite() {
        return Err(Error::InvalidValue("expm step"));
    }
    if h == T::zero() || n == 0 {
        return Ok(DenseMatrix::identity(n));
    }
    let ha = a.scaled(h);
    let norm = ha.norm1().as_f64();
    if !norm.is_finite() {
        return Err(Error::InvalidValue("expm matrix"));
    }
    if norm == 0.0 {
        return Ok(DenseMatrix::identity(n));
    }

    for (theta, coeffs) in THETA {
        if norm <= theta {
            return pade_low(&ha, coeffs);
        }
    }

    let s = (norm / THETA13).log2().ceil().max(0.0) as i32;
    let scaled = ha.scaled(T::lit(0.5f64.powi(s)));
    let mut r = pade13(&scaled)?;
    for _ in 0..s {
        r = r.matmul(&r);
    }
    Ok(r)
}

/// `exp(A)`.
pub fn expm<T: Real>(a: &DenseMatrix<T>) -> Result<DenseMatrix<T>> {
    expm_action(a, T::one())
}

fn pade_low<T: Real>(a: &DenseMatrix<T>, b: &[f64]) -> Result<DenseMatrix<T>> {
    let n = a.dim();
    let a2 = a.matmul(a);
    let mut powers = vec![DenseMatrix::identity(n), a2.clone()];
    while powers.len() < b.len() / 2 {
        let next = powers.last().expect("non-empty").matmul(&a2);
        powers.push(next);
    }
    let mut u_inner = DenseMatrix::zeros(n);
    let mut v = DenseMatrix::zeros(n);
    for (k, p) in powers.iter().enumerate() {
        v.add_scaled(T::lit(b[2 * k]), p);
        u_inner.add_scaled(T::lit(b[2 * k + 1]), p);
    }
    let u = a.matmul(&u_inner);
    pade_quotient(u, v)
}

fn pade13<T: Real>(a: &DenseMatrix<T>) -> Result<DenseMatrix<T>> {
    let n = a.dim();
    let b: Vec<T> = PADE13.iter().map(|&c| T::lit(c)).collect();
    let a2 = a.matmul(a);
    let a4 = a2.matmul(&a2);
    let a6 = a4.matmul(&a2);

    let mut w1 = a6.scaled(b[13]);
    w1.add_scaled(b[11], &a4);
    w1.add_scaled(b[9], &a2);
    let mut u_inner = a6.matmul(&w1);
    u_inner.add_scaled(b[7], &a6);
    u_inner.add_scaled(b[5], &a4);
    u_inner.add_scaled(b[3], &a2);
    u_inner.add_identity(b[1]);
    let u = a.matmul(&u_inner);

    let mut z1 = a6.scaled(b[12]);
    z1.add_scaled(b[10], &a4);
    z1.add_scaled(b[8], &a2);
    let mut v = a6.matmul(&z1);
    v.add_scaled(b[6], &a6);
    v.add_scaled(b[4], &a4);
    v.add_scaled(b[2], &a2);
    v.add_identity(b[0]);
    debug_assert_eq!(v.dim(), n);
    pade_quotient(u, v)
}

fn pade_quotient<T: Real>(u: DenseMatrix<T>, v: DenseMatrix<T>) -> Result<DenseMatrix<T>> {
    let mut p = v.clone();
    p.add_scaled(T::one(), &u);
    let mut q = v;
    q.add_scaled(-T::one(), &u);
    q.solve(&p)
}

/// Thread-safe cache of `exp(h A)` keyed on a caller-chosen operator id and
/// the bit pattern of `h`.
#[derive(Debug, Default)]
pub struct ExpmCache<T> {
    entries: RwLock<HashMap<(u64, u64), Arc<DenseMatrix<T>>>>,
}

impl<T: Real> ExpmCache<T> {
    pub fn new() -> Self {
        Self { entries: RwLock::new(HashMap::new()) }
    }

    pub fn get_or_compute(&self, id: u64, a: &DenseMatrix<T>, h: T) -> Result<Arc<DenseMatrix<T>>> {
        let key = (id, h.as_f64().to_bits());
        if let Some(hit) = self.entries.read().expect("expm cache poisoned").get(&key) {
            return Ok(Arc::clone(hit));
        }
        let value = Arc::new(expm_action(a, h)?);
        let mut map = self.entries.write().expect("expm cache poisoned");
        Ok(Arc::clone(map.entry(key).or_insert(value)))
    }

    pub fn len(&self) -> usize {
        self.entries.read().expect("expm cache poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn clear(&self) {
        self.entries.write().expect("expm cache poisoned").clear();
    }
}
