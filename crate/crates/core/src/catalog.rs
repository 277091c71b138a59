//! Named quantum graphs on `M_2` and `M_3`.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::calculus::{graph_from_subspace, graph_report, quantum_edge};
use crate::error::{invalid, Result};
use crate::linalg::{c, r, Matrix, C64, I, ONE, ZERO};
use crate::operator::Operator;

/// `[1, sigma_1, sigma_2, sigma_3]`.
pub struct PauliBasis;

impl PauliBasis {
    pub fn identity() -> Matrix {
        Matrix::identity(2)
    }

    pub fn sigma(k: usize) -> Matrix {
        match k {
            0 => Matrix::identity(2),
            1 => Matrix::from_real(&[&[0.0, 1.0], &[1.0, 0.0]]),
            2 => Matrix::from_rows(&[vec![ZERO, -I], vec![I, ZERO]]).expect("2x2"),
            3 => Matrix::from_real(&[&[1.0, 0.0], &[0.0, -1.0]]),
            _ => panic!("Pauli index {k} out of range"),
        }
    }

    /// `sigma_3 sin t + 1 cos t`.
    pub fn sigma3_t(t: f64) -> Matrix {
        Self::sigma(3).scale_real(t.sin()).add(&Matrix::identity(2).scale_real(t.cos()))
    }
}

/// The quantum edge `P_k = sigma_k (x) sigma_k^*` on `M_2`.
pub fn pauli_edge(k: usize) -> Result<Operator> {
    if !(1..=3).contains(&k) {
        return invalid(format!("Pauli edge index {k} must be 1, 2 or 3"));
    }
    quantum_edge(2, &PauliBasis::sigma(k))
}

/// Representative simple graph on `M_2` with `m` quantum edges:
/// empty, `P_1`, `P_1 + P_2`, `P_1 + P_2 + P_3`.
pub fn m2_graph(m: usize) -> Result<Operator> {
    if m > 3 {
        return invalid(format!("a simple graph on M_2 has at most 3 quantum edges, got {m}"));
    }
    let basis: Vec<Matrix> = (1..=m).map(PauliBasis::sigma).collect();
    graph_from_subspace(2, &basis, 1e-12)
}

/// Graph of `span{sigma_3(t), sigma_1, ...}` with `m` quantum edges; it has a
/// loop at part of the vertex set for `0 < t < pi/2`.
pub fn m2_partial_family(m: usize, t: f64) -> Result<Operator> {
    if !(1..=3).contains(&m) {
        return invalid(format!("partial family needs 1 to 3 quantum edges, got {m}"));
    }
    let mut basis = vec![PauliBasis::sigma3_t(t)];
    basis.extend((1..m).map(PauliBasis::sigma));
    graph_from_subspace(2, &basis, 1e-12)
}

/// `P_1 + P_3`, the anticommutative square.
pub fn anticommutative_square() -> Result<Operator> {
    graph_from_subspace(2, &[PauliBasis::sigma(1), PauliBasis::sigma(3)], 1e-12)
}

/// `lambda_8 = diag(1, 1, -2) / sqrt 2`.
pub fn gell_mann_8() -> Matrix {
    let s = 1.0 / 2f64.sqrt();
    Matrix::diagonal(&[r(s), r(s), r(-2.0 * s)])
}

/// `lambda_8 (x) lambda_8` on `M_3`.
pub fn gell_mann_graph() -> Result<Operator> {
    quantum_edge(3, &gell_mann_8())
}

/// Number of quantum edges of a simple graph on `M_2`.
pub fn classify_m2(a: &Operator, tol: f64) -> Result<usize> {
    if a.domain().blocks() != Some(&[2][..]) {
        return invalid("classify_m2 expects a graph on M_2");
    }
    let rep = graph_report(a, tol)?;
    if !rep.is_simple {
        return invalid("graph is not simple");
    }
    Ok(rep.quantum_edges.expect("block set"))
}

fn gaussian(rng: &mut impl Rng) -> C64 {
    c(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-ish random `SU_2`: Gaussian matrix, Gram-Schmidt, determinant phase removed.
pub fn random_su2(rng: &mut impl Rng) -> Matrix {
    let (a, b, cc, d) = (gaussian(rng), gaussian(rng), gaussian(rng), gaussian(rng));
    let n0 = (a.norm_sqr() + cc.norm_sqr()).sqrt();
    let (u00, u10) = (a / n0, cc / n0);
    let proj = u00.conj() * b + u10.conj() * d;
    let (v0, v1) = (b - proj * u00, d - proj * u10);
    let n1 = (v0.norm_sqr() + v1.norm_sqr()).sqrt();
    let (u01, u11) = (v0 / n1, v1 / n1);
    let det = u00 * u11 - u01 * u10;
    let phase = ONE / det.sqrt();
    Matrix::from_rows(&[vec![u00 * phase, u01 * phase], vec![u10 * phase, u11 * phase]]).expect("2x2")
}

/// `dim` linearly independent self-adjoint traceless 2x2 matrices.
pub fn random_su2_subspace(dim: usize, rng: &mut impl Rng) -> Result<Vec<Matrix>> {
    if dim > 3 {
        return invalid(format!("su_2 has dimension 3, asked for {dim}"));
    }
    Ok((0..dim)
        .map(|_| {
            (1..=3).fold(Matrix::zeros(2, 2), |acc, k| {
                let w: f64 = rng.sample(StandardNormal);
                acc.add(&PauliBasis::sigma(k).scale_real(w))
            })
        })
        .collect())
}

/// `x -> U x U^dagger` on `M_n` in the orthonormal basis.
pub fn conjugation_map(u: &Matrix) -> Result<Operator> {
    let n = u.rows();
    if !u.is_square() {
        return invalid("conjugation needs a square matrix");
    }
    let set = crate::QuantumSet::matrix_algebra(n)?;
    let mut phi = Matrix::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    phi[(i * n + j, k * n + l)] = u[(i, k)] * u[(j, l)].conj();
                }
            }
        }
    }
    Operator::on(&set, phi)
}
