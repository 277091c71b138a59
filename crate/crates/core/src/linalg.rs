//! Small dense complex linear algebra kernel.
//!
//! Everything here is deterministic and dependency free apart from
//! `num-complex`; matrices in this crate never exceed a few thousand
//! rows, so a plain row-major layout is enough.

use std::ops::{Index, IndexMut};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn r(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// `exp(2 pi i k / n)`, exact on multiples of an eighth turn.
pub fn root_of_unity(k: i64, n: u64) -> C64 {
    assert!(n > 0, "root of unity of order zero");
    let n_i = n as i64;
    let k = k.rem_euclid(n_i) as u64;
    if (4 * k).is_multiple_of(n) {
        return match (4 * k) / n {
            0 => ONE,
            1 => I,
            2 => -ONE,
            _ => -I,
        };
    }
    if (8 * k).is_multiple_of(n) {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        return match (8 * k) / n {
            1 => c(h, h),
            3 => c(-h, h),
            5 => c(-h, -h),
            _ => c(h, -h),
        };
    }
    let theta = 2.0 * std::f64::consts::PI * (k as f64) / (n as f64);
    let (s, co) = theta.sin_cos();
    c(co, s)
}

/// Integer power by squaring; exact when `z` is a signed unit.
pub fn powu(z: C64, mut e: u64) -> C64 {
    let mut base = z;
    let mut acc = ONE;
    while e > 0 {
        if e & 1 == 1 {
            acc *= base;
        }
        base *= base;
        e >>= 1;
    }
    acc
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape {
                expected: format!("{} entries", rows * cols),
                got: format!("{} entries", data.len()),
            });
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape { expected: format!("rows of length {c}"), got: "ragged rows".into() });
        }
        Ok(Matrix { rows: r, cols: c, data: rows.iter().flatten().copied().collect() })
    }

    /// Real matrix literal, mostly for tests and presets.
    pub fn from_real(rows: &[&[f64]]) -> Self {
        let data: Vec<Vec<C64>> = rows.iter().map(|row| row.iter().map(|&x| r(x)).collect()).collect();
        Self::from_rows(&data).expect("ragged literal")
    }

    pub fn diagonal(d: &[C64]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, &x) in d.iter().enumerate() {
            m[(i, i)] = x;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [C64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<C64> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn diag(&self) -> Vec<C64> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)];
            }
        }
        m
    }

    pub fn conj(&self) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z.conj()).collect() }
    }

    pub fn scale(&self, s: C64) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(r(s))
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Shape {
                expected: format!("{}x{}", self.rows, self.cols),
                got: format!("{}x{}", other.rows, other.cols),
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    /// Panicking shorthands used where shapes are known to agree.
    pub fn add(&self, other: &Self) -> Self {
        self.try_add(other).expect("shape mismatch in add")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.try_sub(other).expect("shape mismatch in sub")
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Shape { expected: format!("{} rows", self.cols), got: format!("{} rows", other.rows) });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        let oc = other.cols;
        for i in 0..self.rows {
            let dst = &mut out.data[i * oc..(i + 1) * oc];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let src = &other.data[k * oc..(k + 1) * oc];
                for (d, s) in dst.iter_mut().zip(src) {
                    *d += a * s;
                }
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.try_mul(other).expect("shape mismatch in mul")
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows).map(|i| self.row(i).iter().zip(v).fold(ZERO, |acc, (a, b)| acc + a * b)).collect()
    }

    pub fn kron(&self, other: &Self) -> Self {
        let (r1, c1, r2, c2) = (self.rows, self.cols, other.rows, other.cols);
        let mut out = Self::zeros(r1 * r2, c1 * c2);
        for i in 0..r1 {
            for j in 0..c1 {
                let a = self[(i, j)];
                if a == ZERO {
                    continue;
                }
                for k in 0..r2 {
                    for l in 0..c2 {
                        out[(i * r2 + k, j * c2 + l)] = a * other[(k, l)];
                    }
                }
            }
        }
        out
    }

    pub fn trace(&self) -> C64 {
        self.diag().iter().sum()
    }

    pub fn max_abs(&self) -> f64 {
        max_abs(&self.data)
    }

    pub fn frobenius_norm(&self) -> f64 {
        norm(&self.data)
    }

    /// `max |a_ij - b_ij|`; infinite when the shapes differ.
    pub fn max_diff(&self, other: &Self) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        max_diff(&self.data, &other.data)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.max_diff(&self.adjoint()) <= tol
    }

    /// Gauss-Jordan with partial pivoting.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::Shape { expected: "square matrix".into(), got: format!("{}x{}", self.rows, self.cols) });
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        let scale = self.max_abs().max(1.0);
        for col in 0..n {
            let piv =
                (col..n).max_by(|&x, &y| a[(x, col)].norm().total_cmp(&a[(y, col)].norm())).expect("non-empty range");
            if a[(piv, col)].norm() <= 1e-13 * scale {
                return Err(Error::InvalidInput("matrix is singular".into()));
            }
            if piv != col {
                for j in 0..n {
                    a.data.swap(piv * n + j, col * n + j);
                    inv.data.swap(piv * n + j, col * n + j);
                }
            }
            let p = ONE / a[(col, col)];
            for j in 0..n {
                a[(col, j)] *= p;
                inv[(col, j)] *= p;
            }
            for row in 0..n {
                if row == col {
                    continue;
                }
                let f = a[(row, col)];
                if f == ZERO {
                    continue;
                }
                for j in 0..n {
                    let (ac, ic) = (a[(col, j)], inv[(col, j)]);
                    a[(row, j)] -= f * ac;
                    inv[(row, j)] -= f * ic;
                }
            }
        }
        Ok(inv)
    }

    /// Sets entries below `eps` in modulus to exact zero.
    pub fn chop(&mut self, eps: f64) {
        for z in &mut self.data {
            if z.re.abs() <= eps {
                z.re = 0.0;
            }
            if z.im.abs() <= eps {
                z.im = 0.0;
            }
        }
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

pub fn max_abs(v: &[C64]) -> f64 {
    v.iter().fold(0.0, |m, z| m.max(z.norm()))
}

pub fn max_diff(a: &[C64], b: &[C64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).norm()))
}

pub fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).fold(ZERO, |acc, (x, y)| acc + x.conj() * y)
}

/// Residual scale used throughout: `max(1, largest entry)`.
pub fn scale_of(values: &[&[C64]]) -> f64 {
    values.iter().fold(1.0_f64, |m, v| m.max(max_abs(v)))
}

#[derive(Clone, Debug)]
pub struct Eigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Columns are the eigenvectors.
    pub vectors: Matrix,
}

/// Cyclic Jacobi eigensolver for complex Hermitian matrices.
pub fn hermitian_eigs(h: &Matrix) -> Result<Eigen> {
    if !h.is_square() {
        return Err(Error::Shape { expected: "square matrix".into(), got: format!("{}x{}", h.rows, h.cols) });
    }
    let n = h.rows;
    let scale = h.max_abs().max(1.0);
    if !h.is_hermitian(1e-8 * scale) {
        return Err(Error::InvalidInput("matrix is not Hermitian".into()));
    }
    // symmetrise so round-off in the input cannot break the rotations
    let mut a = h.add(&h.adjoint()).scale_real(0.5);
    let mut v = Matrix::identity(n);
    let total = a.frobenius_norm().max(f64::MIN_POSITIVE);

    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * total {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let beta = a[(p, q)];
                let b = beta.norm();
                if b <= 1e-300 {
                    continue;
                }
                let u = beta / b;
                let tau = (a[(q, q)].re - a[(p, p)].re) / (2.0 * b);
                let t = if tau >= 0.0 { 1.0 } else { -1.0 } / (tau.abs() + (1.0 + tau * tau).sqrt());
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = t * cs;
                // G = [[c, s u], [-s conj(u), c]] on the (p, q) plane
                let g_pp = r(cs);
                let g_pq = u * sn;
                let g_qp = -u.conj() * sn;
                let g_qq = r(cs);
                for k in 0..n {
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = akp * g_pp + akq * g_qp;
                    a[(k, q)] = akp * g_pq + akq * g_qq;
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = vkp * g_pp + vkq * g_qp;
                    v[(k, q)] = vkp * g_pq + vkq * g_qq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
                    a[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                a[(p, p)].im = 0.0;
                a[(q, q)].im = 0.0;
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[(x, x)].re.total_cmp(&a[(y, y)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = Matrix::zeros(n, n);
    for (new, &old) in order.iter().enumerate() {
        for k in 0..n {
            vectors[(k, new)] = v[(k, old)];
        }
    }
    Ok(Eigen { values, vectors })
}

/// Incrementally built orthonormal basis of a subspace of `C^dim`,
/// stored sparsely so that spans of sparse operators stay cheap.
#[derive(Clone, Debug, Default)]
pub struct Span {
    dim: usize,
    basis: Vec<Vec<(usize, C64)>>,
}

impl Span {
    pub fn new(dim: usize) -> Self {
        Span { dim, basis: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    /// Component of `v` orthogonal to the span (two Gram-Schmidt passes).
    pub fn residual(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.dim, "span dimension mismatch");
        let mut w = v.to_vec();
        for _ in 0..2 {
            for b in &self.basis {
                let coef = b.iter().fold(ZERO, |acc, &(i, x)| acc + x.conj() * w[i]);
                if coef == ZERO {
                    continue;
                }
                for &(i, x) in b {
                    w[i] -= coef * x;
                }
            }
        }
        w
    }

    pub fn distance(&self, v: &[C64]) -> f64 {
        norm(&self.residual(v))
    }

    pub fn contains(&self, v: &[C64], tol: f64) -> bool {
        self.distance(v) <= tol * norm(v).max(1.0)
    }

    /// Adds `v` if its residual exceeds `tol * max(1, |v|)`; returns whether it grew.
    pub fn try_push(&mut self, v: &[C64], tol: f64) -> bool {
        let w = self.residual(v);
        let nw = norm(&w);
        if nw <= tol * norm(v).max(1.0) {
            return false;
        }
        let cut = 1e-15 * nw;
        let sparse = w.iter().enumerate().filter(|(_, z)| z.norm() > cut).map(|(i, z)| (i, z / nw)).collect();
        self.basis.push(sparse);
        true
    }

    pub fn vectors(&self) -> Vec<Vec<C64>> {
        self.basis
            .iter()
            .map(|b| {
                let mut v = vec![ZERO; self.dim];
                for &(i, x) in b {
                    v[i] = x;
                }
                v
            })
            .collect()
    }
}
