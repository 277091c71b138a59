//! Quantum graphs and the Schur calculus.

mod rotation;
mod schur;
mod subspace;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{dot, max_diff, Matrix, C64};
use crate::operator::Operator;
use crate::quantum_set::QuantumSet;

pub use rotation::{from_rotation_tensor, realignment, rotate, rotation_tensor, unrotate, EdgeProjection};
pub use schur::{schur, schur_spectrum, schur_star, schur_unit, GENERIC_SCHUR_LIMIT};
pub use subspace::{
    check_bimodule, graph_from_subspace, quantum_edge, selfadjoint_basis, subspace_from_graph, BlockPairSpace,
};

/// Adjacency operator on a quantum set. Unweighted graphs are validated
/// (`A . A = A`, `A^* = A`); weighted ones carry no such promise.
#[derive(Clone, Debug)]
pub struct QuantumGraph {
    adjacency: Operator,
    weighted: bool,
}

impl QuantumGraph {
    pub fn new(adjacency: Operator, tol: f64) -> Result<Self> {
        if !adjacency.is_endomorphism() {
            return Err(Error::SetMismatch("adjacency must be an endomorphism".into()));
        }
        let scale = adjacency.max_abs().max(1.0);
        let idem = schur(&adjacency, &adjacency)?.max_diff(&adjacency);
        if idem > tol * scale {
            return Err(Error::InvalidInput(format!("adjacency is not Schur idempotent (residual {idem:.3e})")));
        }
        let sa = schur_star(&adjacency)?.max_diff(&adjacency);
        if sa > tol * scale {
            return Err(Error::InvalidInput(format!("adjacency is not Schur self-adjoint (residual {sa:.3e})")));
        }
        Ok(QuantumGraph { adjacency, weighted: false })
    }

    pub fn weighted(adjacency: Operator) -> Result<Self> {
        if !adjacency.is_endomorphism() {
            return Err(Error::SetMismatch("adjacency must be an endomorphism".into()));
        }
        Ok(QuantumGraph { adjacency, weighted: true })
    }

    pub fn from_matrix(set: &Arc<QuantumSet>, matrix: Matrix, tol: f64) -> Result<Self> {
        Self::new(Operator::on(set, matrix)?, tol)
    }

    pub fn set(&self) -> &Arc<QuantumSet> {
        self.adjacency.domain()
    }

    pub fn adjacency(&self) -> &Operator {
        &self.adjacency
    }

    pub fn is_weighted(&self) -> bool {
        self.weighted
    }

    pub fn report(&self, tol: f64) -> Result<GraphReport> {
        graph_report(&self.adjacency, tol)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LoopStatus {
    /// `A . I = 0`.
    None,
    /// `A . I = I`.
    All,
    /// `A . I != I . A`.
    Partial,
    /// `A . I = I . A` but neither zero nor the identity (weighted loops).
    MixedWeighted,
}

impl fmt::Display for LoopStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LoopStatus::None => "none",
            LoopStatus::All => "all",
            LoopStatus::Partial => "partial",
            LoopStatus::MixedWeighted => "mixed-weighted",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphReport {
    pub vertices: usize,
    /// `eta^dagger A eta`.
    pub edges: C64,
    pub is_graph: bool,
    pub is_undirected: bool,
    pub loops: LoopStatus,
    pub is_simple: bool,
    /// Edge projection spectrum inside the non-negative integers.
    pub is_multigraph: bool,
    /// Edge projection positive.
    pub is_weighted_graph: bool,
    /// Rank of the edge projection; only defined on block sets.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quantum_edges: Option<usize>,
    /// `d` with `eta^dagger A = d eta^dagger`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub regular_degree: Option<C64>,
    /// Distinct eigenvalues of the edge projection, when Schur self-adjoint.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<Vec<f64>>,
}

impl GraphReport {
    /// Agreement of everything that is invariant under quantum isomorphism;
    /// the number of quantum edges is deliberately left out.
    pub fn agrees_with(&self, other: &GraphReport, tol: f64) -> bool {
        let close = |a: C64, b: C64| (a - b).norm() <= tol * a.norm().max(b.norm()).max(1.0);
        let degree = match (self.regular_degree, other.regular_degree) {
            (Some(a), Some(b)) => close(a, b),
            (None, None) => true,
            _ => false,
        };
        self.vertices == other.vertices
            && close(self.edges, other.edges)
            && self.is_graph == other.is_graph
            && self.is_undirected == other.is_undirected
            && self.loops == other.loops
            && self.is_simple == other.is_simple
            && self.is_multigraph == other.is_multigraph
            && self.is_weighted_graph == other.is_weighted_graph
            && degree
    }
}

impl fmt::Display for GraphReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "vertices        {}", self.vertices)?;
        writeln!(f, "edges           {}", fmt_complex(self.edges))?;
        writeln!(f, "graph           {}", self.is_graph)?;
        writeln!(f, "undirected      {}", self.is_undirected)?;
        writeln!(f, "loops           {}", self.loops)?;
        writeln!(f, "simple          {}", self.is_simple)?;
        writeln!(f, "multigraph      {}", self.is_multigraph)?;
        writeln!(f, "weighted graph  {}", self.is_weighted_graph)?;
        match self.quantum_edges {
            Some(q) => writeln!(f, "quantum edges   {q}")?,
            None => writeln!(f, "quantum edges   n/a")?,
        }
        match self.regular_degree {
            Some(d) => writeln!(f, "regular degree  {}", fmt_complex(d)),
            None => writeln!(f, "regular degree  not regular"),
        }
    }
}

fn fmt_complex(z: C64) -> String {
    if z.im.abs() < 1e-12 {
        format!("{:.6}", z.re)
    } else {
        format!("{:.6}{:+.6}i", z.re, z.im)
    }
}

fn near_integer(x: f64, tol: f64) -> bool {
    (x - x.round()).abs() <= tol && x.round() >= 0.0
}

/// Every predicate of the calculus in one pass.
pub fn graph_report(a: &Operator, tol: f64) -> Result<GraphReport> {
    if !a.is_endomorphism() {
        return Err(Error::SetMismatch("graph_report: operator is not an endomorphism".into()));
    }
    let set = a.domain().clone();
    let scale = a.max_abs().max(1.0);
    let thr = tol * scale;
    let unit = set.unit();

    let aa = schur(a, a)?;
    let star = schur_star(a)?;
    let self_adjoint = star.max_diff(a) <= thr;
    let is_graph = aa.max_diff(a) <= thr && self_adjoint;
    let is_undirected = a.matrix().max_diff(&a.matrix().adjoint()) <= thr;

    let id = Operator::identity(&set);
    let ai = schur(a, &id)?;
    let ia = schur(&id, a)?;
    let loops = if ai.max_diff(&ia) > thr {
        LoopStatus::Partial
    } else if ai.max_abs() <= thr {
        LoopStatus::None
    } else if ai.max_diff(&id) <= thr {
        LoopStatus::All
    } else {
        LoopStatus::MixedWeighted
    };
    let is_simple = is_graph && is_undirected && loops == LoopStatus::None;

    let spectrum = if self_adjoint { Some(schur_spectrum(a, tol)?) } else { None };
    let spec_tol = 1e-7 * scale;
    let is_multigraph = spectrum.as_ref().is_some_and(|s| s.iter().all(|&v| near_integer(v, spec_tol)));
    let is_weighted_graph = spectrum.as_ref().is_some_and(|s| s.iter().all(|&v| v >= -spec_tol));

    let quantum_edges = match set.blocks() {
        Some(_) => {
            let p = rotate(a)?;
            Some(if is_graph { p.rank(0.5)? } else { p.rank(1e-8 * scale)? })
        }
        None => None,
    };

    let av = a.apply(unit);
    let edges = dot(unit, &av);
    let n = set.dim();
    let vertex_weight = set.vertex_weight();
    let d = edges / vertex_weight;
    // eta^dagger A = d eta^dagger  <=>  A^dagger eta = conj(d) eta
    let left = a.matrix().adjoint().apply(unit);
    let target: Vec<C64> = unit.iter().map(|u| u * d.conj()).collect();
    let regular_degree = (max_diff(&left, &target) <= thr * (n as f64).sqrt()).then_some(d);

    Ok(GraphReport {
        vertices: vertex_weight.round() as usize,
        edges,
        is_graph,
        is_undirected,
        loops,
        is_simple,
        is_multigraph,
        is_weighted_graph,
        quantum_edges,
        regular_degree,
        spectrum,
    })
}

/// The Schur-commutator residual `max |A . B - B . A|`.
pub fn schur_commutator(a: &Operator, b: &Operator) -> Result<f64> {
    Ok(schur(a, b)?.max_diff(&schur(b, a)?))
}

/// `H . G = H = G . H`.
pub fn is_edge_subgraph(h: &Operator, g: &Operator, tol: f64) -> Result<bool> {
    let scale = h.max_abs().max(g.max_abs()).max(1.0);
    Ok(schur(h, g)?.max_diff(h) <= tol * scale && schur(g, h)?.max_diff(h) <= tol * scale)
}
