use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Span, ZERO};
use crate::operator::Operator;
use crate::quantum_set::{require_same, QuantumSet};

/// Generic Schur operations refuse sets above this dimension.
pub const GENERIC_SCHUR_LIMIT: usize = 64;

fn endomorphism_set(a: &Operator, what: &str) -> Result<Arc<QuantumSet>> {
    if !a.is_endomorphism() {
        return Err(Error::SetMismatch(format!("{what}: operator is not an endomorphism")));
    }
    let set = a.domain().clone();
    if set.dim() > GENERIC_SCHUR_LIMIT {
        return Err(Error::ResourceLimit(format!(
            "{what}: dimension {} exceeds the generic limit {GENERIC_SCHUR_LIMIT}",
            set.dim()
        )));
    }
    Ok(set)
}

fn column_nonzeros(m: &Matrix) -> Vec<Vec<(usize, crate::C64)>> {
    let mut cols = vec![Vec::new(); m.cols()];
    for i in 0..m.rows() {
        for (j, &z) in m.row(i).iter().enumerate() {
            if z != ZERO {
                cols[j].push((i, z));
            }
        }
    }
    cols
}

/// `A . B = m (A (x) B) m^dagger`.
pub fn schur(a: &Operator, b: &Operator) -> Result<Operator> {
    let set = endomorphism_set(a, "schur")?;
    require_same(&set, b.domain(), "schur")?;
    endomorphism_set(b, "schur")?;
    let n = set.dim();
    let (ac, bc) = (column_nonzeros(a.matrix()), column_nonzeros(b.matrix()));
    let mut out = Matrix::zeros(n, n);
    for q in 0..n {
        for e in set.entries_with_output(q) {
            let beta = e.value.conj();
            for &(r, ar) in &ac[e.left] {
                let w0 = ar * beta;
                for &(s, bs) in &bc[e.right] {
                    let w = w0 * bs;
                    for &(p, alpha) in set.product_of(r, s) {
                        out[(p, q)] += alpha * w;
                    }
                }
            }
        }
    }
    Operator::on(&set, out)
}

/// The Schur unit `J = eta eta^dagger`.
pub fn schur_unit(set: &Arc<QuantumSet>) -> Operator {
    let u = set.unit();
    let n = set.dim();
    let mut j = Matrix::zeros(n, n);
    for p in 0..n {
        for q in 0..n {
            j[(p, q)] = u[p] * u[q].conj();
        }
    }
    Operator::on(set, j).expect("square by construction")
}

/// `A^* = (id (x) R^dagger)(id (x) A^dagger (x) id)(R (x) id)`, evaluated as
/// `A^*[i][k] = sum F[b][i] conj(A[b][j]) conj(F[j][k])`.
pub fn schur_star(a: &Operator) -> Result<Operator> {
    if !a.is_endomorphism() {
        return Err(Error::SetMismatch("schur_star: operator is not an endomorphism".into()));
    }
    let set = a.domain().clone();
    let n = set.dim();
    let m = a.matrix();
    let mut out = Matrix::zeros(n, n);
    for i in 0..n {
        for &(b, f1) in set.star_col(i) {
            for j in 0..n {
                let x = m[(b, j)];
                if x == ZERO {
                    continue;
                }
                let w = f1 * x.conj();
                for &(k, f2) in set.star_row(j) {
                    out[(i, k)] += w * f2.conj();
                }
            }
        }
    }
    Operator::on(&set, out)
}

/// Distinct eigenvalues of the edge projection of a Schur self-adjoint `A`,
/// via a Krylov space of Schur powers started at `J`. Schur multiplication by
/// `A` is self-adjoint for the Hilbert-Schmidt inner product, so the
/// compressed matrix is Hermitian.
pub fn schur_spectrum(a: &Operator, tol: f64) -> Result<Vec<f64>> {
    let set = endomorphism_set(a, "schur_spectrum")?;
    let scale = a.max_abs().max(1.0);
    let star = schur_star(a)?;
    if star.max_diff(a) > tol * scale {
        return Err(Error::InvalidInput("operator is not Schur self-adjoint".into()));
    }
    let n = set.dim();
    let mut span = Span::new(n * n);
    span.try_push(schur_unit(&set).matrix().data(), 1e-12);
    let mut images: Vec<Vec<crate::C64>> = Vec::new();
    loop {
        let last = span.vectors().pop().expect("span is non-empty");
        let q = Operator::on(&set, Matrix::from_vec(n, n, last)?)?;
        let w = schur(a, &q)?.into_matrix().into_data();
        images.push(w.clone());
        if span.len() >= n * n || !span.try_push(&w, 1e-10 * scale) {
            break;
        }
    }
    let basis = span.vectors();
    // images[k] = A . q_k for every basis vector except possibly the last
    while images.len() < basis.len() {
        let q = Operator::on(&set, Matrix::from_vec(n, n, basis[images.len()].clone())?)?;
        images.push(schur(a, &q)?.into_matrix().into_data());
    }
    let d = basis.len();
    let mut h = Matrix::zeros(d, d);
    for j in 0..d {
        for k in 0..d {
            h[(j, k)] = crate::linalg::dot(&basis[j], &images[k]);
        }
    }
    let h = h.add(&h.adjoint()).scale_real(0.5);
    Ok(crate::linalg::hermitian_eigs(&h)?.values)
}
