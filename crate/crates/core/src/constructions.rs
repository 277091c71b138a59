//! Subgraphs, quotients and isomorphisms of quantum graphs.

use std::sync::Arc;

use crate::calculus::{is_edge_subgraph, QuantumGraph};
use crate::error::{invalid, Error, Result};
use crate::linalg::{r, Matrix, ONE};
use crate::operator::{check_star_homomorphism, Operator};
use crate::quantum_set::{require_same, QuantumSet};
use crate::report::Report;

pub use crate::calculus::is_edge_subgraph as edge_subgraph;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapKind {
    /// Unital *-homomorphism `C(Y) -> C(X)`, i.e. a quotient `X -> Y`.
    Embedding,
    /// Projection onto a sum of blocks, `C(X) -> C(Y)` for `Y` inside `X`.
    Restriction,
}

/// A structure map between block algebras, checked on construction.
#[derive(Clone, Debug)]
pub struct BlockMap {
    kind: MapKind,
    op: Operator,
}

impl BlockMap {
    pub fn embedding(op: Operator, tol: f64) -> Result<Self> {
        let rep = check_star_homomorphism(&op, true, tol);
        if !rep.all_passed() {
            let names: Vec<&str> = rep.failures().map(|c| c.name.as_str()).collect();
            return invalid(format!("map is not a unital *-homomorphism (failed: {})", names.join(", ")));
        }
        Ok(BlockMap { kind: MapKind::Embedding, op })
    }

    /// `C(X) -> C(Y)` keeping the listed blocks of `X`, in order.
    pub fn restriction(set: &Arc<QuantumSet>, keep: &[usize]) -> Result<Self> {
        let blocks = set.blocks().ok_or_else(|| Error::Unsupported("set has no matrix blocks".into()))?;
        if keep.is_empty() {
            return invalid("keep at least one block");
        }
        let mut seen = vec![false; blocks.len()];
        for &k in keep {
            if k >= blocks.len() {
                return invalid(format!("no block {k}; the set has {}", blocks.len()));
            }
            if std::mem::replace(&mut seen[k], true) {
                return invalid(format!("block {k} listed twice"));
            }
        }
        let sub: Vec<usize> = keep.iter().map(|&k| blocks[k]).collect();
        let target = QuantumSet::from_blocks(&sub)?;
        let offsets = set.block_offsets().expect("blocks present");
        let mut m = Matrix::zeros(target.dim(), set.dim());
        let mut row = 0;
        for &k in keep {
            for t in 0..blocks[k] * blocks[k] {
                m[(row, offsets[k] + t)] = ONE;
                row += 1;
            }
        }
        Ok(BlockMap { kind: MapKind::Restriction, op: Operator::new(set.clone(), target, m)? })
    }

    /// The diagonal inclusion `C(X_n) -> M_n`.
    pub fn diagonal_embedding(n: usize) -> Result<Self> {
        let x = QuantumSet::classical(n)?;
        let m = QuantumSet::matrix_algebra(n)?;
        let mut mat = Matrix::zeros(n * n, n);
        for i in 0..n {
            mat[(i * n + i, i)] = r((n as f64).sqrt());
        }
        Self::embedding(Operator::new(x, m, mat)?, 1e-12)
    }

    pub fn kind(&self) -> MapKind {
        self.kind
    }

    pub fn operator(&self) -> &Operator {
        &self.op
    }
}

/// `A_Y = q A_X q^dagger` for the restriction `q` onto the kept blocks.
pub fn induced_subgraph(a: &Operator, keep: &[usize]) -> Result<Operator> {
    let q = BlockMap::restriction(a.domain(), keep)?;
    q.op.compose(a)?.compose(&q.op.adjoint())
}

/// `A_Y = iota^dagger A_X iota` for a quotient given by a unital
/// *-homomorphism `iota: C(Y) -> C(X)`; the result is a weighted graph.
pub fn quotient_graph(a: &Operator, iota: &BlockMap) -> Result<QuantumGraph> {
    if iota.kind != MapKind::Embedding {
        return invalid("a quotient needs a unital *-homomorphism");
    }
    require_same(iota.op.codomain(), a.domain(), "quotient")?;
    let ay = iota.op.adjoint().compose(a)?.compose(&iota.op)?;
    QuantumGraph::weighted(ay)
}

/// `phi` is a unital *-isomorphism `C(X_1) -> C(X_2)` with `phi A_1 = A_2 phi`.
pub fn check_isomorphism(phi: &Operator, a1: &Operator, a2: &Operator, tol: f64) -> Result<Report> {
    require_same(phi.domain(), a1.domain(), "isomorphism domain")?;
    require_same(phi.codomain(), a2.domain(), "isomorphism codomain")?;
    let mut rep = check_star_homomorphism(phi, true, tol);
    rep.title = "isomorphism".into();
    rep.record_flag("invertible", phi.domain().dim() == phi.codomain().dim() && phi.inverse().is_ok());
    let lhs = phi.compose(a1)?;
    let rhs = a2.compose(phi)?;
    let scale = lhs.max_abs().max(rhs.max_abs()).max(1.0);
    rep.record("intertwines-adjacency", lhs.max_diff(&rhs), tol * scale);
    Ok(rep)
}

/// Convenience wrapper returning only the verdict.
pub fn is_isomorphism(phi: &Operator, a1: &Operator, a2: &Operator, tol: f64) -> Result<bool> {
    Ok(check_isomorphism(phi, a1, a2, tol)?.all_passed())
}

/// Edge subgraph test with set checking.
pub fn check_edge_subgraph(h: &Operator, g: &Operator, tol: f64) -> Result<bool> {
    require_same(h.domain(), g.domain(), "edge subgraph")?;
    is_edge_subgraph(h, g, tol)
}
