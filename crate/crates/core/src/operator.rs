use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{max_abs, Matrix, C64};
use crate::quantum_set::{require_same, QuantumSet};
use crate::report::Report;

/// A linear map `C(X) -> C(Y)` in the orthonormal bases of both sets.
/// Adjoints are conjugate transposes.
#[derive(Clone, Debug)]
pub struct Operator {
    domain: Arc<QuantumSet>,
    codomain: Arc<QuantumSet>,
    matrix: Matrix,
}

impl Operator {
    pub fn new(domain: Arc<QuantumSet>, codomain: Arc<QuantumSet>, matrix: Matrix) -> Result<Self> {
        if matrix.rows() != codomain.dim() || matrix.cols() != domain.dim() {
            return Err(Error::Shape {
                expected: format!("{}x{}", codomain.dim(), domain.dim()),
                got: format!("{}x{}", matrix.rows(), matrix.cols()),
            });
        }
        Ok(Operator { domain, codomain, matrix })
    }

    /// An endomorphism of `C(X)`.
    pub fn on(set: &Arc<QuantumSet>, matrix: Matrix) -> Result<Self> {
        Self::new(set.clone(), set.clone(), matrix)
    }

    pub fn identity(set: &Arc<QuantumSet>) -> Self {
        Operator { domain: set.clone(), codomain: set.clone(), matrix: Matrix::identity(set.dim()) }
    }

    pub fn zero(set: &Arc<QuantumSet>) -> Self {
        Operator { domain: set.clone(), codomain: set.clone(), matrix: Matrix::zeros(set.dim(), set.dim()) }
    }

    pub fn domain(&self) -> &Arc<QuantumSet> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<QuantumSet> {
        &self.codomain
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix {
        self.matrix
    }

    pub fn is_endomorphism(&self) -> bool {
        crate::quantum_set::same_set(&self.domain, &self.codomain)
    }

    /// `self` after `first`.
    pub fn compose(&self, first: &Operator) -> Result<Operator> {
        require_same(&first.codomain, &self.domain, "compose")?;
        Ok(Operator {
            domain: first.domain.clone(),
            codomain: self.codomain.clone(),
            matrix: self.matrix.mul(&first.matrix),
        })
    }

    pub fn adjoint(&self) -> Operator {
        Operator { domain: self.codomain.clone(), codomain: self.domain.clone(), matrix: self.matrix.adjoint() }
    }

    fn check_parallel(&self, other: &Operator, what: &str) -> Result<()> {
        require_same(&self.domain, &other.domain, what)?;
        require_same(&self.codomain, &other.codomain, what)
    }

    pub fn add(&self, other: &Operator) -> Result<Operator> {
        self.check_parallel(other, "add")?;
        Ok(Operator { matrix: self.matrix.add(&other.matrix), ..self.clone() })
    }

    pub fn sub(&self, other: &Operator) -> Result<Operator> {
        self.check_parallel(other, "sub")?;
        Ok(Operator { matrix: self.matrix.sub(&other.matrix), ..self.clone() })
    }

    pub fn scale(&self, s: C64) -> Operator {
        Operator { matrix: self.matrix.scale(s), ..self.clone() }
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        self.matrix.apply(v)
    }

    pub fn max_diff(&self, other: &Operator) -> f64 {
        self.matrix.max_diff(&other.matrix)
    }

    pub fn max_abs(&self) -> f64 {
        self.matrix.max_abs()
    }

    pub fn inverse(&self) -> Result<Operator> {
        Ok(Operator { domain: self.codomain.clone(), codomain: self.domain.clone(), matrix: self.matrix.inverse()? })
    }
}

/// Checks that `f` is multiplicative and *-preserving, and unital if asked.
pub fn check_star_homomorphism(f: &Operator, unital: bool, tol: f64) -> Report {
    let (x, y) = (f.domain(), f.codomain());
    let mut rep = Report::new(format!("map of dimension {} -> {}", x.dim(), y.dim()));
    let cols: Vec<Vec<C64>> = (0..x.dim()).map(|j| f.matrix().column(j)).collect();
    let fs = f.max_abs().max(1.0);

    let mut worst: f64 = 0.0;
    let mut lhs = vec![C64::default(); y.dim()];
    for a in 0..x.dim() {
        for b in 0..x.dim() {
            lhs.iter_mut().for_each(|z| *z = C64::default());
            for &(p, alpha) in x.product_of(a, b) {
                for (l, v) in lhs.iter_mut().zip(&cols[p]) {
                    *l += alpha * v;
                }
            }
            let rhs = y.multiply(&cols[a], &cols[b]);
            worst = worst.max(crate::linalg::max_diff(&lhs, &rhs));
        }
    }
    rep.record("multiplicative", worst, tol * fs * fs);

    let mut worst: f64 = 0.0;
    for a in 0..x.dim() {
        let mut e = vec![C64::default(); x.dim()];
        e[a] = C64::new(1.0, 0.0);
        let lhs = f.apply(&x.star(&e));
        let rhs = y.star(&cols[a]);
        worst = worst.max(crate::linalg::max_diff(&lhs, &rhs));
    }
    rep.record("star-preserving", worst, tol * fs);

    if unital {
        let img = f.apply(x.unit());
        let res = crate::linalg::max_diff(&img, y.unit());
        rep.record("unital", res, tol * fs * max_abs(x.unit()).max(1.0));
    }
    rep
}
