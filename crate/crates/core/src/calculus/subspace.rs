//! Quantum graphs on block sets as operator subspaces.

use crate::error::{invalid, Error, Result};
use crate::linalg::{hermitian_eigs, r, Matrix, Span, I};
use crate::operator::Operator;
use crate::quantum_set::QuantumSet;

use super::rotation::rotate;

/// `P^{(i,j)}_{(k,l)} = (n / Tr(xi^dagger xi)) xi[i][k] conj(xi[j][l])` on `M_n`.
pub fn quantum_edge(n: usize, xi: &Matrix) -> Result<Operator> {
    let set = QuantumSet::matrix_algebra(n)?;
    Operator::on(&set, edge_matrix(n, xi)?)
}

fn edge_matrix(n: usize, xi: &Matrix) -> Result<Matrix> {
    if xi.rows() != n || xi.cols() != n {
        return Err(Error::Shape { expected: format!("{n}x{n}"), got: format!("{}x{}", xi.rows(), xi.cols()) });
    }
    let hs = xi.frobenius_norm().powi(2);
    if hs <= 1e-24 {
        return invalid("quantum edge of the zero matrix");
    }
    let w = r(n as f64 / hs);
    let mut p = Matrix::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    p[(i * n + j, k * n + l)] = w * xi[(i, k)] * xi[(j, l)].conj();
                }
            }
        }
    }
    Ok(p)
}

/// Orthonormalises `basis` (Hilbert-Schmidt) and returns `sum xi_s (x) xi_s^*`
/// with each `xi_s` scaled to `Tr(xi^dagger xi) = n`.
pub fn graph_from_subspace(n: usize, basis: &[Matrix], tol: f64) -> Result<Operator> {
    let set = QuantumSet::matrix_algebra(n)?;
    let mut span = Span::new(n * n);
    for (k, xi) in basis.iter().enumerate() {
        if xi.rows() != n || xi.cols() != n {
            return Err(Error::Shape { expected: format!("{n}x{n}"), got: format!("{}x{}", xi.rows(), xi.cols()) });
        }
        if !span.try_push(xi.data(), tol) {
            return invalid(format!("basis element {k} is linearly dependent on the previous ones"));
        }
    }
    let mut a = Matrix::zeros(n * n, n * n);
    for v in span.vectors() {
        let xi = Matrix::from_vec(n, n, v)?;
        a = a.add(&edge_matrix(n, &xi)?);
    }
    Operator::on(&set, a)
}

/// Basis of the part of `V` mapping block `domain_block` into block
/// `codomain_block`, as `n_codomain x n_domain` matrices.
#[derive(Clone, Debug)]
pub struct BlockPairSpace {
    pub codomain_block: usize,
    pub domain_block: usize,
    pub basis: Vec<Matrix>,
}

impl BlockPairSpace {
    /// Places every basis element into the total space `C^{sum n_i}`.
    pub fn embedded(&self, blocks: &[usize]) -> Vec<Matrix> {
        let total: usize = blocks.iter().sum();
        let ro: usize = blocks[..self.codomain_block].iter().sum();
        let co: usize = blocks[..self.domain_block].iter().sum();
        self.basis
            .iter()
            .map(|xi| {
                let mut m = Matrix::zeros(total, total);
                for a in 0..xi.rows() {
                    for b in 0..xi.cols() {
                        m[(ro + a, co + b)] = xi[(a, b)];
                    }
                }
                m
            })
            .collect()
    }
}

/// Recovers the operator subspace of a quantum graph from the eigenvectors
/// of its edge projection.
pub fn subspace_from_graph(a: &Operator) -> Result<Vec<BlockPairSpace>> {
    let p = rotate(a)?;
    let sizes = a.domain().blocks().expect("rotate checked blocks").to_vec();
    let mut out = Vec::new();
    for (i, &ni) in sizes.iter().enumerate() {
        for (j, &nj) in sizes.iter().enumerate() {
            let eig = hermitian_eigs(p.block(i, j))?;
            let w = r(((ni * nj) as f64).sqrt().sqrt());
            let mut basis = Vec::new();
            for (k, &v) in eig.values.iter().enumerate() {
                if v <= 0.5 {
                    continue;
                }
                let col = eig.vectors.column(k);
                basis.push(Matrix::from_vec(ni, nj, col)?.scale(w));
            }
            out.push(BlockPairSpace { codomain_block: i, domain_block: j, basis });
        }
    }
    Ok(out)
}

fn span_of(v: &[Matrix], tol: f64) -> Result<Span> {
    let d = v.first().map_or(0, |m| m.rows() * m.cols());
    let mut span = Span::new(d);
    for m in v {
        if m.rows() * m.cols() != d {
            return invalid("matrices of different shapes");
        }
        span.try_push(m.data(), tol);
    }
    Ok(span)
}

/// Self-adjoint basis of a subspace with `V = V^dagger`.
pub fn selfadjoint_basis(v: &[Matrix], tol: f64) -> Result<Vec<Matrix>> {
    let span = span_of(v, tol)?;
    for (k, m) in v.iter().enumerate() {
        if !span.contains(m.adjoint().data(), tol) {
            return invalid(format!("subspace is not closed under adjoints (element {k})"));
        }
    }
    let mut out_span = Span::new(span.ambient_dim());
    let mut out = Vec::new();
    for m in v {
        let adj = m.adjoint();
        let re = m.add(&adj).scale_real(0.5);
        let im = adj.sub(m).scale(I * 0.5);
        for h in [re, im] {
            if out_span.try_push(h.data(), tol) {
                out.push(h);
            }
        }
        if out.len() == span.len() {
            break;
        }
    }
    Ok(out)
}

/// Whether `V` (matrices on `C^{sum n_i}`) is a bimodule over the commutant
/// of the block algebra, i.e. closed under the block projections on both sides.
pub fn check_bimodule(v: &[Matrix], blocks: &[usize], tol: f64) -> Result<bool> {
    let total: usize = blocks.iter().sum();
    if v.iter().any(|m| m.rows() != total || m.cols() != total) {
        return Err(Error::Shape { expected: format!("{total}x{total}"), got: "other".into() });
    }
    let span = span_of(v, tol)?;
    let mut bounds = Vec::new();
    let mut start = 0;
    for &n in blocks {
        bounds.push(start..start + n);
        start += n;
    }
    for m in v {
        for rows in &bounds {
            for cols in &bounds {
                let mut cut = Matrix::zeros(total, total);
                for i in rows.clone() {
                    for j in cols.clone() {
                        cut[(i, j)] = m[(i, j)];
                    }
                }
                if !span.contains(cut.data(), tol) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}
