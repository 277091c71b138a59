//! Search for Schur non-commutativity inside the smallest space containing
//! `I`, `J` and `A` that is closed under composition, Schur product,
//! adjoint and Schur star. Such a space consists of intertwiners of the
//! quantum automorphism group, so a non-commuting pair rules out a quantum
//! isomorphism with any classical graph.

use std::fmt;

use serde::Serialize;

use crate::calculus::{schur, schur_star, schur_unit};
use crate::error::{Error, Result};
use crate::linalg::Span;
use crate::operator::Operator;

pub const MAX_ROUNDS: usize = 20;
const RANK_TOL: f64 = 1e-8;
const WITNESS_TOL: f64 = 1e-6;

#[derive(Clone, Debug)]
pub struct ClosureElement {
    pub op: Operator,
    /// How the element was produced, e.g. `(A o A)`.
    pub trace: String,
    /// Number of closure rounds needed to reach it.
    pub depth: usize,
}

#[derive(Clone, Debug)]
pub struct Closure {
    pub elements: Vec<ClosureElement>,
    /// False when the dimension cap or the round limit stopped the search.
    pub complete: bool,
    pub rounds: usize,
}

impl Closure {
    pub fn dim(&self) -> usize {
        self.elements.len()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub first_trace: String,
    pub second_trace: String,
    pub residual: f64,
    pub threshold: f64,
    #[serde(skip)]
    pub first: Operator,
    #[serde(skip)]
    pub second: Operator,
}

impl Certificate {
    /// Recomputes the residual from the stored witnesses.
    pub fn recheck(&self) -> Result<f64> {
        crate::calculus::schur_commutator(&self.first, &self.second)
    }
}

#[derive(Clone, Debug)]
pub enum Outcome {
    Certificate(Certificate),
    Inconclusive { closure_dim: usize, complete: bool },
}

impl Outcome {
    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            Outcome::Certificate(c) => Some(c),
            Outcome::Inconclusive { .. } => None,
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Certificate(c) => write!(
                f,
                "certificate: {} and {} do not Schur-commute (residual {:.3e} > {:.1e})",
                c.first_trace, c.second_trace, c.residual, c.threshold
            ),
            Outcome::Inconclusive { closure_dim, complete } => write!(
                f,
                "inconclusive: closure of dimension {closure_dim} is Schur-commutative{}",
                if *complete { "" } else { " (search truncated)" }
            ),
        }
    }
}

struct Grower {
    span: Span,
    elements: Vec<ClosureElement>,
    max_dim: usize,
}

impl Grower {
    fn offer(&mut self, mut op: Operator, trace: String, depth: usize) -> bool {
        if self.elements.len() >= self.max_dim {
            return false;
        }
        let m = op.max_abs();
        if m <= 1e-300 {
            return false;
        }
        if depth > 0 {
            op = op.scale(crate::linalg::r(1.0 / m));
        }
        if !self.span.try_push(op.matrix().data(), RANK_TOL) {
            return false;
        }
        self.elements.push(ClosureElement { op, trace, depth });
        true
    }

    /// One round of products involving at least one element at index >= `from`.
    fn round(&mut self, from: usize, depth: usize) -> Result<bool> {
        let len = self.elements.len();
        let mut grew = false;
        for i in 0..len {
            for j in 0..len {
                if i < from && j < from {
                    continue;
                }
                let (x, y) = (&self.elements[i], &self.elements[j]);
                let comp = x.op.compose(&y.op)?;
                let sch = schur(&x.op, &y.op)?;
                let (tc, ts) = (format!("({} o {})", x.trace, y.trace), format!("({} . {})", x.trace, y.trace));
                grew |= self.offer(comp, tc, depth);
                grew |= self.offer(sch, ts, depth);
            }
        }
        for i in from..len {
            let x = &self.elements[i];
            let (adj, st) = (x.op.adjoint(), schur_star(&x.op)?);
            let (ta, tst) = (format!("{}^dag", x.trace), format!("{}^*", x.trace));
            grew |= self.offer(adj, ta, depth);
            grew |= self.offer(st, tst, depth);
        }
        Ok(grew)
    }
}

fn seeds(a: &Operator, max_dim: usize) -> Result<Grower> {
    if !a.is_endomorphism() {
        return Err(Error::SetMismatch("closure needs an endomorphism".into()));
    }
    let set = a.domain().clone();
    let n = set.dim();
    let mut g = Grower { span: Span::new(n * n), elements: Vec::new(), max_dim };
    g.offer(Operator::identity(&set), "I".into(), 0);
    g.offer(schur_unit(&set), "J".into(), 0);
    g.offer(a.clone(), "A".into(), 0);
    Ok(g)
}

/// The closure of `span{I, J, A}`; stops after [`MAX_ROUNDS`] rounds or at `max_dim`.
pub fn schur_closure(a: &Operator, max_dim: Option<usize>) -> Result<Closure> {
    let n = a.domain().dim();
    let mut g = seeds(a, max_dim.unwrap_or(n * n))?;
    let mut from = 0;
    for depth in 1..=MAX_ROUNDS {
        let len = g.elements.len();
        if !g.round(from, depth)? {
            let complete = g.elements.len() < g.max_dim || g.elements.len() == n * n;
            return Ok(Closure { elements: g.elements, complete, rounds: depth });
        }
        from = len;
    }
    Ok(Closure { elements: g.elements, complete: false, rounds: MAX_ROUNDS })
}

/// Extends an existing family to its closure; a closure is a fixed point.
pub fn close_family(family: &[ClosureElement], max_dim: usize) -> Result<Closure> {
    let first = family.first().ok_or_else(|| Error::InvalidInput("empty family".into()))?;
    let n = first.op.domain().dim();
    let mut g = Grower { span: Span::new(n * n), elements: Vec::new(), max_dim };
    for e in family {
        g.offer(e.op.clone(), e.trace.clone(), 0);
    }
    let mut from = 0;
    for depth in 1..=MAX_ROUNDS {
        let len = g.elements.len();
        if !g.round(from, depth)? {
            return Ok(Closure { elements: g.elements, complete: true, rounds: depth });
        }
        from = len;
    }
    Ok(Closure { elements: g.elements, complete: false, rounds: MAX_ROUNDS })
}

fn best_pair(elements: &[ClosureElement], from: usize) -> Result<Option<Certificate>> {
    let mut best: Option<Certificate> = None;
    for i in 0..elements.len() {
        for j in i + 1..elements.len() {
            if j < from {
                continue;
            }
            let (mut x, mut y) = (&elements[i], &elements[j]);
            if y.trace < x.trace {
                std::mem::swap(&mut x, &mut y);
            }
            let res = crate::calculus::schur_commutator(&x.op, &y.op)?;
            let scale = x.op.max_abs().max(y.op.max_abs()).max(1.0);
            let thr = WITNESS_TOL * scale;
            if res <= thr {
                continue;
            }
            let better = match &best {
                None => true,
                Some(b) => {
                    res > b.residual * (1.0 + 1e-12)
                        || ((res - b.residual).abs() <= 1e-12 * res
                            && (&x.trace, &y.trace) < (&b.first_trace, &b.second_trace))
                }
            };
            if better {
                best = Some(Certificate {
                    first_trace: x.trace.clone(),
                    second_trace: y.trace.clone(),
                    residual: res,
                    threshold: thr,
                    first: x.op.clone(),
                    second: y.op.clone(),
                });
            }
        }
    }
    Ok(best)
}

/// Grows the closure round by round and stops at the first depth where a
/// non-commuting pair appears; the returned pair has the largest residual
/// at that depth, ties broken by construction trace.
pub fn find_obstruction(a: &Operator, max_dim: Option<usize>) -> Result<Outcome> {
    let n = a.domain().dim();
    let mut g = seeds(a, max_dim.unwrap_or(n * n))?;
    if let Some(c) = best_pair(&g.elements, 0)? {
        return Ok(Outcome::Certificate(c));
    }
    let mut from = 0;
    for depth in 1..=MAX_ROUNDS {
        let len = g.elements.len();
        let grew = g.round(from, depth)?;
        if let Some(c) = best_pair(&g.elements, len)? {
            return Ok(Outcome::Certificate(c));
        }
        if !grew {
            let complete = g.elements.len() < g.max_dim || g.elements.len() == n * n;
            return Ok(Outcome::Inconclusive { closure_dim: g.elements.len(), complete });
        }
        from = len;
    }
    Ok(Outcome::Inconclusive { closure_dim: g.elements.len(), complete: false })
}
