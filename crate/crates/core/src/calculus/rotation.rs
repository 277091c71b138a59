use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigs, r, Matrix};
use crate::operator::Operator;
use crate::quantum_set::{is_positive_element, QuantumSet};

/// `A~ = (A (x) id) R` written as block-pair matrices acting on
/// `C^{n_i} (x) C^{n_j}`, where `i` is the codomain block of `A` and `j` its
/// domain block. For a quantum graph every block is a projection.
#[derive(Clone, Debug)]
pub struct EdgeProjection {
    set: Arc<QuantumSet>,
    blocks: Vec<Vec<Matrix>>,
}

impl EdgeProjection {
    pub fn new(set: Arc<QuantumSet>, blocks: Vec<Vec<Matrix>>) -> Result<Self> {
        let sizes = set.blocks().ok_or_else(|| Error::Unsupported("set has no matrix blocks".into()))?.to_vec();
        if blocks.len() != sizes.len() || blocks.iter().any(|row| row.len() != sizes.len()) {
            return Err(Error::Shape {
                expected: format!("{0}x{0} block pairs", sizes.len()),
                got: format!("{} rows", blocks.len()),
            });
        }
        for (i, row) in blocks.iter().enumerate() {
            for (j, m) in row.iter().enumerate() {
                let d = sizes[i] * sizes[j];
                if m.rows() != d || m.cols() != d {
                    return Err(Error::Shape {
                        expected: format!("{d}x{d} for block pair ({i}, {j})"),
                        got: format!("{}x{}", m.rows(), m.cols()),
                    });
                }
            }
        }
        Ok(EdgeProjection { set, blocks })
    }

    pub fn set(&self) -> &Arc<QuantumSet> {
        &self.set
    }

    pub fn block(&self, i: usize, j: usize) -> &Matrix {
        &self.blocks[i][j]
    }

    pub fn blocks(&self) -> &[Vec<Matrix>] {
        &self.blocks
    }

    pub fn is_projection(&self, tol: f64) -> bool {
        self.blocks.iter().flatten().all(|m| {
            let s = m.max_abs().max(1.0);
            m.is_hermitian(tol * s) && m.mul(m).max_diff(m) <= tol * s
        })
    }

    pub fn is_positive(&self, tol: f64) -> bool {
        self.blocks.iter().flatten().all(|m| is_positive_element(m, tol))
    }

    /// Sum of block ranks, counting eigenvalues above `threshold`.
    pub fn rank(&self, threshold: f64) -> Result<usize> {
        let mut total = 0;
        for m in self.blocks.iter().flatten() {
            total += hermitian_eigs(m)?.values.iter().filter(|&&v| v > threshold).count();
        }
        Ok(total)
    }

    pub fn max_diff(&self, other: &EdgeProjection) -> f64 {
        self.blocks.iter().flatten().zip(other.blocks.iter().flatten()).fold(0.0, |m, (a, b)| m.max(a.max_diff(b)))
    }
}

/// `A -> A~` on a block set.
pub fn rotate(a: &Operator) -> Result<EdgeProjection> {
    if !a.is_endomorphism() {
        return Err(Error::SetMismatch("rotate: operator is not an endomorphism".into()));
    }
    let set = a.domain().clone();
    let sizes = set.blocks().ok_or_else(|| Error::Unsupported("set has no matrix blocks".into()))?.to_vec();
    let offsets = set.block_offsets().expect("blocks present");
    let m = a.matrix();
    let mut blocks = Vec::with_capacity(sizes.len());
    for (i, &ni) in sizes.iter().enumerate() {
        let mut row = Vec::with_capacity(sizes.len());
        for (j, &nj) in sizes.iter().enumerate() {
            let w = 1.0 / ((ni * nj) as f64).sqrt();
            let mut b = Matrix::zeros(ni * nj, ni * nj);
            for x in 0..ni {
                for y in 0..ni {
                    for z in 0..nj {
                        for t in 0..nj {
                            // M[(x,z),(y,t)] = A^{(i,x,y)}_{(j,z,t)}
                            b[(x * nj + z, y * nj + t)] = m[(offsets[i] + x * ni + y, offsets[j] + z * nj + t)] * w;
                        }
                    }
                }
            }
            row.push(b);
        }
        blocks.push(row);
    }
    EdgeProjection::new(set, blocks)
}

/// Inverse of [`rotate`].
pub fn unrotate(p: &EdgeProjection) -> Result<Operator> {
    let set = p.set().clone();
    let sizes = set.blocks().expect("edge projections live on block sets").to_vec();
    let offsets = set.block_offsets().expect("blocks present");
    let mut m = Matrix::zeros(set.dim(), set.dim());
    for (i, &ni) in sizes.iter().enumerate() {
        for (j, &nj) in sizes.iter().enumerate() {
            let w = r(((ni * nj) as f64).sqrt());
            let b = p.block(i, j);
            for x in 0..ni {
                for y in 0..ni {
                    for z in 0..nj {
                        for t in 0..nj {
                            m[(offsets[i] + x * ni + y, offsets[j] + z * nj + t)] = b[(x * nj + z, y * nj + t)] * w;
                        }
                    }
                }
            }
        }
    }
    Operator::on(&set, m)
}

/// Realignment of `A` on a single block `M_n` without normalisation:
/// `A^{ij}_{kl}` moved to position `[(i,k),(j,l)]`.
pub fn realignment(a: &Operator) -> Result<Matrix> {
    let blocks = a.domain().blocks().ok_or_else(|| Error::Unsupported("set has no matrix blocks".into()))?;
    if blocks.len() != 1 {
        return Err(Error::Unsupported("realignment is defined on a single block".into()));
    }
    let n = blocks[0] as f64;
    Ok(rotate(a)?.block(0, 0).scale_real(n))
}

/// `A~^{pq} = sum_r A^p_r R^{rq}` in the orthonormal basis of `C(X) (x) C(X)`;
/// available on every set, including twisted ones.
pub fn rotation_tensor(a: &Operator) -> Result<Matrix> {
    if !a.is_endomorphism() {
        return Err(Error::SetMismatch("rotation_tensor: operator is not an endomorphism".into()));
    }
    Ok(a.matrix().mul(a.domain().cup()))
}

/// `A = (id (x) R^dagger)(A~ (x) id)`.
pub fn from_rotation_tensor(set: &Arc<QuantumSet>, t: &Matrix) -> Result<Operator> {
    Operator::on(set, t.mul(&set.cup().conj()))
}
