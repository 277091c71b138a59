//! Finite quantum sets: finite-dimensional C*-algebras with their
//! canonical Frobenius structure, stored in an orthonormal basis.
//!
//! For a block algebra `M_{n_1} + ... + M_{n_a}` the basis is
//! `e^{(i)}_{ab} / sqrt(n_i)`, block by block, row-major inside each block.
//! Twisted group algebras reuse the same container with their own
//! structure constants.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::linalg::{max_abs, r, Matrix, C64, ONE, ZERO};
use crate::report::Report;

/// Largest algebra dimension the sparse tables are built for.
pub const MAX_SET_DIM: usize = 1024;

/// One structure constant `m^{out}_{left,right}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MultEntry {
    pub out: usize,
    pub left: usize,
    pub right: usize,
    pub value: C64,
}

#[derive(Clone, Debug)]
pub struct QuantumSet {
    blocks: Option<Vec<usize>>,
    dim: usize,
    /// Sorted by `out`, then `left`, then `right`.
    mult: Vec<MultEntry>,
    out_offsets: Vec<usize>,
    prod_offsets: Vec<usize>,
    prod: Vec<(usize, C64)>,
    unit: Vec<C64>,
    star: Matrix,
    star_rows: Vec<Vec<(usize, C64)>>,
    star_cols: Vec<Vec<(usize, C64)>>,
    cup: Matrix,
    cup_nonzero: Vec<(usize, usize, C64)>,
}

impl PartialEq for QuantumSet {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim
            && self.blocks == other.blocks
            && self.unit == other.unit
            && self.mult == other.mult
            && self.star == other.star
    }
}

pub fn same_set(a: &Arc<QuantumSet>, b: &Arc<QuantumSet>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

pub(crate) fn require_same(a: &Arc<QuantumSet>, b: &Arc<QuantumSet>, what: &str) -> Result<()> {
    if same_set(a, b) {
        Ok(())
    } else {
        Err(Error::SetMismatch(format!("{what}: operands live on different quantum sets")))
    }
}

impl QuantumSet {
    /// `M_{n_1} + ... + M_{n_a}`.
    pub fn from_blocks(blocks: &[usize]) -> Result<Arc<Self>> {
        if blocks.is_empty() {
            return invalid("a quantum set needs at least one block");
        }
        if let Some(pos) = blocks.iter().position(|&n| n == 0) {
            return invalid(format!("block {pos} has size zero"));
        }
        let dim: usize = blocks.iter().map(|n| n * n).sum();
        if dim > MAX_SET_DIM {
            return Err(Error::ResourceLimit(format!("algebra dimension {dim} exceeds {MAX_SET_DIM}")));
        }
        let mut mult = Vec::new();
        let mut unit = vec![ZERO; dim];
        let mut star = Matrix::zeros(dim, dim);
        let mut offset = 0;
        for &n in blocks {
            let w = r(1.0 / (n as f64).sqrt());
            let idx = |a: usize, b: usize| offset + a * n + b;
            for a in 0..n {
                unit[idx(a, a)] = r((n as f64).sqrt());
                for b in 0..n {
                    star[(idx(a, b), idx(b, a))] = ONE;
                    for d in 0..n {
                        mult.push(MultEntry { out: idx(a, d), left: idx(a, b), right: idx(b, d), value: w });
                    }
                }
            }
            offset += n * n;
        }
        Ok(Arc::new(Self::from_structure(Some(blocks.to_vec()), dim, mult, unit, star)?))
    }

    /// The commutative quantum set on `n` classical points.
    pub fn classical(n: usize) -> Result<Arc<Self>> {
        Self::from_blocks(&vec![1; n])
    }

    pub fn matrix_algebra(n: usize) -> Result<Arc<Self>> {
        Self::from_blocks(&[n])
    }

    /// Builds a set from raw structure constants in an orthonormal basis.
    /// Only shapes and index ranges are validated; use [`verify_frobenius`]
    /// to check the algebraic identities.
    pub fn from_structure(
        blocks: Option<Vec<usize>>,
        dim: usize,
        mut mult: Vec<MultEntry>,
        unit: Vec<C64>,
        star: Matrix,
    ) -> Result<Self> {
        if dim == 0 {
            return invalid("dimension must be positive");
        }
        if dim > MAX_SET_DIM {
            return Err(Error::ResourceLimit(format!("algebra dimension {dim} exceeds {MAX_SET_DIM}")));
        }
        if let Some(b) = &blocks {
            let d: usize = b.iter().map(|n| n * n).sum();
            if d != dim {
                return invalid(format!("blocks {b:?} give dimension {d}, expected {dim}"));
            }
        }
        if unit.len() != dim {
            return Err(Error::Shape { expected: format!("unit of length {dim}"), got: format!("{}", unit.len()) });
        }
        if star.rows() != dim || star.cols() != dim {
            return Err(Error::Shape {
                expected: format!("{dim}x{dim} star matrix"),
                got: format!("{}x{}", star.rows(), star.cols()),
            });
        }
        if let Some(e) = mult.iter().find(|e| e.out >= dim || e.left >= dim || e.right >= dim) {
            return invalid(format!("structure constant index out of range: {e:?}"));
        }
        mult.retain(|e| e.value != ZERO);
        mult.sort_by_key(|e| (e.out, e.left, e.right));
        if mult.windows(2).any(|w| (w[0].out, w[0].left, w[0].right) == (w[1].out, w[1].left, w[1].right)) {
            return invalid("duplicate structure constant");
        }

        let mut out_offsets = vec![0; dim + 1];
        for e in &mult {
            out_offsets[e.out + 1] += 1;
        }
        for i in 0..dim {
            out_offsets[i + 1] += out_offsets[i];
        }

        let mut prod_offsets = vec![0; dim * dim + 1];
        for e in &mult {
            prod_offsets[e.left * dim + e.right + 1] += 1;
        }
        for i in 0..dim * dim {
            prod_offsets[i + 1] += prod_offsets[i];
        }
        let mut fill = prod_offsets.clone();
        let mut prod = vec![(0, ZERO); mult.len()];
        for e in &mult {
            let k = e.left * dim + e.right;
            prod[fill[k]] = (e.out, e.value);
            fill[k] += 1;
        }

        let mut star_rows = vec![Vec::new(); dim];
        let mut star_cols = vec![Vec::new(); dim];
        for p in 0..dim {
            for q in 0..dim {
                let f = star[(p, q)];
                if f != ZERO {
                    star_rows[p].push((q, f));
                    star_cols[q].push((p, f));
                }
            }
        }

        // R^{ij} = conj(counit(e_i e_j))
        let mut cup = Matrix::zeros(dim, dim);
        for e in &mult {
            cup[(e.left, e.right)] += (unit[e.out].conj() * e.value).conj();
        }
        let mut cup_nonzero = Vec::new();
        for i in 0..dim {
            for j in 0..dim {
                if cup[(i, j)] != ZERO {
                    cup_nonzero.push((i, j, cup[(i, j)]));
                }
            }
        }

        Ok(QuantumSet {
            blocks,
            dim,
            mult,
            out_offsets,
            prod_offsets,
            prod,
            unit,
            star,
            star_rows,
            star_cols,
            cup,
            cup_nonzero,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn blocks(&self) -> Option<&[usize]> {
        self.blocks.as_deref()
    }

    /// Offsets of each block inside the basis.
    pub fn block_offsets(&self) -> Option<Vec<usize>> {
        self.blocks.as_ref().map(|b| {
            b.iter()
                .scan(0, |acc, n| {
                    let o = *acc;
                    *acc += n * n;
                    Some(o)
                })
                .collect()
        })
    }

    /// Basis index of `e^{(block)}_{a b} / sqrt(n)`.
    pub fn index_of(&self, block: usize, a: usize, b: usize) -> Result<usize> {
        let blocks = self.blocks.as_ref().ok_or_else(|| Error::Unsupported("set has no matrix blocks".into()))?;
        let n = *blocks.get(block).ok_or_else(|| Error::InvalidInput(format!("no block {block}")))?;
        if a >= n || b >= n {
            return invalid(format!("index ({a}, {b}) outside block of size {n}"));
        }
        let offset: usize = blocks[..block].iter().map(|m| m * m).sum();
        Ok(offset + a * n + b)
    }

    pub fn is_commutative(&self) -> bool {
        self.mult.iter().all(|e| {
            let flipped = self.product_of(e.right, e.left);
            flipped.iter().any(|&(p, v)| p == e.out && (v - e.value).norm() < 1e-14)
        })
    }

    pub fn mult_entries(&self) -> &[MultEntry] {
        &self.mult
    }

    /// Entries `m^{out}_{u v}` for fixed `out`.
    pub fn entries_with_output(&self, out: usize) -> &[MultEntry] {
        &self.mult[self.out_offsets[out]..self.out_offsets[out + 1]]
    }

    /// Expansion of `e_left e_right` as `(index, coefficient)` pairs.
    pub fn product_of(&self, left: usize, right: usize) -> &[(usize, C64)] {
        let k = left * self.dim + right;
        &self.prod[self.prod_offsets[k]..self.prod_offsets[k + 1]]
    }

    pub fn unit(&self) -> &[C64] {
        &self.unit
    }

    /// `F` with `e_p^* = sum_q F[p][q] e_q`.
    pub fn star_matrix(&self) -> &Matrix {
        &self.star
    }

    pub(crate) fn star_row(&self, p: usize) -> &[(usize, C64)] {
        &self.star_rows[p]
    }

    pub(crate) fn star_col(&self, q: usize) -> &[(usize, C64)] {
        &self.star_cols[q]
    }

    /// `R = m^dagger eta` as the matrix `R^{ij}`.
    pub fn cup(&self) -> &Matrix {
        &self.cup
    }

    pub(crate) fn cup_nonzero(&self) -> &[(usize, usize, C64)] {
        &self.cup_nonzero
    }

    /// `eta^dagger eta`, the number of vertices.
    pub fn vertex_weight(&self) -> f64 {
        self.unit.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn multiply(&self, x: &[C64], y: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.dim);
        assert_eq!(y.len(), self.dim);
        let mut out = vec![ZERO; self.dim];
        for e in &self.mult {
            let (a, b) = (x[e.left], y[e.right]);
            if a != ZERO && b != ZERO {
                out[e.out] += e.value * a * b;
            }
        }
        out
    }

    pub fn star(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.dim);
        let mut out = vec![ZERO; self.dim];
        for (p, &xp) in x.iter().enumerate() {
            if xp == ZERO {
                continue;
            }
            for &(q, f) in &self.star_rows[p] {
                out[q] += f * xp.conj();
            }
        }
        out
    }

    /// `eta^dagger(x)`; on blocks this is `sum_i n_i Tr(x_i)`.
    pub fn counit(&self, x: &[C64]) -> C64 {
        self.unit.iter().zip(x).fold(ZERO, |acc, (u, v)| acc + u.conj() * v)
    }

    /// `<x, y> = eta^dagger(x^* y)`.
    pub fn inner(&self, x: &[C64], y: &[C64]) -> C64 {
        self.counit(&self.multiply(&self.star(x), y))
    }

    pub fn element(self: &Arc<Self>, coeffs: Vec<C64>) -> Result<AlgebraElement> {
        AlgebraElement::new(self.clone(), coeffs)
    }

    pub fn unit_element(self: &Arc<Self>) -> AlgebraElement {
        AlgebraElement { set: self.clone(), coeffs: self.unit.clone() }
    }

    pub fn basis_element(self: &Arc<Self>, p: usize) -> AlgebraElement {
        let mut coeffs = vec![ZERO; self.dim];
        coeffs[p] = ONE;
        AlgebraElement { set: self.clone(), coeffs }
    }

    /// Block matrix of an element with entries `x[p] / sqrt(n_i)`.
    pub fn block_matrices(&self, x: &[C64]) -> Result<Vec<Matrix>> {
        let blocks = self.blocks.as_ref().ok_or_else(|| Error::Unsupported("set has no matrix blocks".into()))?;
        let mut out = Vec::with_capacity(blocks.len());
        let mut offset = 0;
        for &n in blocks {
            let w = 1.0 / (n as f64).sqrt();
            let mut m = Matrix::zeros(n, n);
            for a in 0..n {
                for b in 0..n {
                    m[(a, b)] = x[offset + a * n + b] * w;
                }
            }
            offset += n * n;
            out.push(m);
        }
        Ok(out)
    }

    /// Left regular representation `L(x) y = x y` on the orthonormal basis.
    /// It is a faithful *-representation for every set built here.
    pub fn regular_representation(&self, x: &[C64]) -> Matrix {
        let mut l = Matrix::zeros(self.dim, self.dim);
        for e in &self.mult {
            let a = x[e.left];
            if a != ZERO {
                l[(e.out, e.right)] += e.value * a;
            }
        }
        l
    }
}

/// An element of `C(X)` in the orthonormal basis.
#[derive(Clone, Debug)]
pub struct AlgebraElement {
    set: Arc<QuantumSet>,
    coeffs: Vec<C64>,
}

impl AlgebraElement {
    pub fn new(set: Arc<QuantumSet>, coeffs: Vec<C64>) -> Result<Self> {
        if coeffs.len() != set.dim() {
            return Err(Error::Shape {
                expected: format!("{} coefficients", set.dim()),
                got: format!("{}", coeffs.len()),
            });
        }
        Ok(AlgebraElement { set, coeffs })
    }

    pub fn set(&self) -> &Arc<QuantumSet> {
        &self.set
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C64> {
        self.coeffs
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        require_same(&self.set, &other.set, "multiply")?;
        Ok(AlgebraElement { set: self.set.clone(), coeffs: self.set.multiply(&self.coeffs, &other.coeffs) })
    }

    pub fn star(&self) -> Self {
        AlgebraElement { set: self.set.clone(), coeffs: self.set.star(&self.coeffs) }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        require_same(&self.set, &other.set, "add")?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(AlgebraElement { set: self.set.clone(), coeffs })
    }

    pub fn scale(&self, s: C64) -> Self {
        AlgebraElement { set: self.set.clone(), coeffs: self.coeffs.iter().map(|z| z * s).collect() }
    }

    pub fn counit(&self) -> C64 {
        self.set.counit(&self.coeffs)
    }

    pub fn max_diff(&self, other: &Self) -> f64 {
        crate::linalg::max_diff(&self.coeffs, &other.coeffs)
    }

    pub fn is_positive(&self, tol: f64) -> bool {
        is_positive_element(&self.set.regular_representation(&self.coeffs), tol)
    }
}

/// A matrix representation of an element is positive when it is Hermitian
/// and its spectrum is bounded below by `-tol * scale`.
pub fn is_positive_element(rep: &Matrix, tol: f64) -> bool {
    let scale = rep.max_abs().max(1.0);
    if !rep.is_hermitian(tol * scale) {
        return false;
    }
    match crate::linalg::hermitian_eigs(rep) {
        Ok(e) => e.values.first().is_none_or(|&v| v >= -tol * scale),
        Err(_) => false,
    }
}

/// Sparse accumulator: dense storage with a touched list.
struct Acc {
    values: Vec<C64>,
    seen: Vec<bool>,
    touched: Vec<usize>,
}

impl Acc {
    fn new(len: usize) -> Self {
        Acc { values: vec![ZERO; len], seen: vec![false; len], touched: Vec::new() }
    }

    fn add(&mut self, i: usize, v: C64) {
        if !self.seen[i] {
            self.seen[i] = true;
            self.touched.push(i);
        }
        self.values[i] += v;
    }

    fn clear(&mut self) {
        for &i in &self.touched {
            self.values[i] = ZERO;
            self.seen[i] = false;
        }
        self.touched.clear();
    }
}

fn diff(a: &Acc, b: &Acc) -> f64 {
    let mut m: f64 = 0.0;
    for &i in a.touched.iter().chain(&b.touched) {
        m = m.max((a.values[i] - b.values[i]).norm());
    }
    m
}

/// Maximum discrepancy between two linear maps given on basis inputs.
fn compare_maps(inputs: usize, out_len: usize, lhs: impl Fn(usize, &mut Acc), rhs: impl Fn(usize, &mut Acc)) -> f64 {
    let (mut a, mut b) = (Acc::new(out_len), Acc::new(out_len));
    let mut worst: f64 = 0.0;
    for x in 0..inputs {
        lhs(x, &mut a);
        rhs(x, &mut b);
        worst = worst.max(diff(&a, &b));
        a.clear();
        b.clear();
    }
    worst
}

/// Checks every identity of a special symmetric Frobenius *-algebra.
pub fn verify_frobenius(set: &QuantumSet, tol: f64) -> Report {
    let n = set.dim();
    let nn = n * n;
    let scale = max_abs(&set.mult.iter().map(|e| e.value).collect::<Vec<_>>()).max(set.star.max_abs()).max(1.0);
    let thr = tol * scale;
    let mut rep = Report::new(format!("quantum set of dimension {n}"));

    let comult = |q: usize| set.entries_with_output(q);
    let cap = |i: usize, j: usize| set.cup[(i, j)].conj();

    // m m^dagger = id
    let res = compare_maps(
        n,
        n,
        |q, acc| {
            for e in comult(q) {
                for &(p, a) in set.product_of(e.left, e.right) {
                    acc.add(p, a * e.value.conj());
                }
            }
        },
        |q, acc| acc.add(q, ONE),
    );
    rep.record("special", res, thr);

    let frob_rhs = |xy: usize, acc: &mut Acc| {
        let (x, y) = (xy / n, xy % n);
        for &(p, a) in set.product_of(x, y) {
            for e in comult(p) {
                acc.add(e.left * n + e.right, a * e.value.conj());
            }
        }
    };
    let res = compare_maps(
        nn,
        nn,
        |xy, acc| {
            let (x, y) = (xy / n, xy % n);
            for e in comult(y) {
                for &(p, a) in set.product_of(x, e.left) {
                    acc.add(p * n + e.right, a * e.value.conj());
                }
            }
        },
        frob_rhs,
    );
    rep.record("frobenius-left", res, thr);
    let res = compare_maps(
        nn,
        nn,
        |xy, acc| {
            let (x, y) = (xy / n, xy % n);
            for e in comult(x) {
                for &(p, a) in set.product_of(e.right, y) {
                    acc.add(e.left * n + p, a * e.value.conj());
                }
            }
        },
        frob_rhs,
    );
    rep.record("frobenius-right", res, thr);

    // snake identities
    let cap_m = set.cup.conj();
    let id = Matrix::identity(n);
    let snake_l = set.cup.transpose().mul(&cap_m.transpose());
    let snake_r = set.cup.mul(&cap_m);
    rep.record("snake-left", snake_l.max_diff(&id), thr);
    rep.record("snake-right", snake_r.max_diff(&id), thr);

    // comultiplication through the cup
    let comult_rhs = |x: usize, acc: &mut Acc| {
        for e in comult(x) {
            acc.add(e.left * n + e.right, e.value.conj());
        }
    };
    let res = compare_maps(
        n,
        nn,
        |x, acc| {
            for &(y, z, rv) in set.cup_nonzero() {
                for &(w, a) in set.product_of(z, x) {
                    acc.add(y * n + w, rv * a);
                }
            }
        },
        comult_rhs,
    );
    rep.record("comult-via-cup-left", res, thr);
    let res = compare_maps(
        n,
        nn,
        |x, acc| {
            for &(y, z, rv) in set.cup_nonzero() {
                for &(w, a) in set.product_of(x, y) {
                    acc.add(w * n + z, rv * a);
                }
            }
        },
        comult_rhs,
    );
    rep.record("comult-via-cup-right", res, thr);

    // multiplication through the cap
    let mult_rhs = |xy: usize, acc: &mut Acc| {
        for &(p, a) in set.product_of(xy / n, xy % n) {
            acc.add(p, a);
        }
    };
    let res = compare_maps(
        nn,
        n,
        |xy, acc| {
            let (x, y) = (xy / n, xy % n);
            for e in comult(y) {
                let k = cap(x, e.left);
                if k != ZERO {
                    acc.add(e.right, k * e.value.conj());
                }
            }
        },
        mult_rhs,
    );
    rep.record("mult-via-cap-left", res, thr);
    let res = compare_maps(
        nn,
        n,
        |xy, acc| {
            let (x, y) = (xy / n, xy % n);
            for e in comult(x) {
                let k = cap(e.right, y);
                if k != ZERO {
                    acc.add(e.left, k * e.value.conj());
                }
            }
        },
        mult_rhs,
    );
    rep.record("mult-via-cap-right", res, thr);

    // unit and counit laws
    let mut unit_l = Matrix::zeros(n, n);
    let mut unit_r = Matrix::zeros(n, n);
    let mut counit_l = Matrix::zeros(n, n);
    let mut counit_r = Matrix::zeros(n, n);
    for e in &set.mult {
        unit_l[(e.out, e.right)] += set.unit[e.left] * e.value;
        unit_r[(e.out, e.left)] += set.unit[e.right] * e.value;
        counit_l[(e.right, e.out)] += (set.unit[e.left] * e.value).conj();
        counit_r[(e.left, e.out)] += (set.unit[e.right] * e.value).conj();
    }
    let uscale = thr * max_abs(&set.unit).max(1.0);
    rep.record("unit-left", unit_l.max_diff(&id), uscale);
    rep.record("unit-right", unit_r.max_diff(&id), uscale);
    rep.record("counit-left", counit_l.max_diff(&id), uscale);
    rep.record("counit-right", counit_r.max_diff(&id), uscale);

    rep.record("cup-symmetric", set.cup.max_diff(&set.cup.transpose()), thr);
    rep.record("star-involution", set.star.mul(&set.star.conj()).max_diff(&id), thr);
    rep.record("cup-equals-star", set.cup.max_diff(&set.star), thr);

    // associativity on basis triples
    let mut worst: f64 = 0.0;
    let (mut a, mut b) = (Acc::new(n), Acc::new(n));
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                for &(p, u) in set.product_of(x, y) {
                    for &(q, v) in set.product_of(p, z) {
                        a.add(q, u * v);
                    }
                }
                for &(p, u) in set.product_of(y, z) {
                    for &(q, v) in set.product_of(x, p) {
                        b.add(q, u * v);
                    }
                }
                worst = worst.max(diff(&a, &b));
                a.clear();
                b.clear();
            }
        }
    }
    rep.record("associativity", worst, thr);

    let vw = set.vertex_weight();
    rep.record("vertex-count", (vw - n as f64).abs(), tol * (n as f64).max(1.0));
    rep
}
