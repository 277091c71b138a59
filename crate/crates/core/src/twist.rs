//! Finite abelian groups, bicharacters and the 2-cocycle twist of
//! `C(Gamma)`, including twisted Cayley graphs.

use std::sync::Arc;

use serde::Serialize;

use crate::calculus::{GraphReport, LoopStatus};
use crate::error::{invalid, Error, Result};
use crate::linalg::{powu, r, root_of_unity, Matrix, C64, ONE, ZERO};
use crate::operator::Operator;
use crate::quantum_set::{MultEntry, QuantumSet};

/// Largest group handled by the diagonal fast path.
pub const MAX_GROUP_ORDER: usize = 4096;

/// `Z_{n_1} x ... x Z_{n_k}`; elements are enumerated in mixed radix with the
/// first coordinate most significant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbelianGroup {
    orders: Vec<u64>,
}

impl AbelianGroup {
    pub fn new(orders: &[u64]) -> Result<Self> {
        if orders.is_empty() {
            return invalid("a group needs at least one cyclic factor");
        }
        if let Some(pos) = orders.iter().position(|&n| n == 0) {
            return invalid(format!("cyclic factor {pos} has order zero"));
        }
        let size = orders.iter().try_fold(1u64, |acc, &n| acc.checked_mul(n));
        match size {
            Some(s) if s as usize <= MAX_GROUP_ORDER => Ok(AbelianGroup { orders: orders.to_vec() }),
            _ => Err(Error::ResourceLimit(format!("group order exceeds {MAX_GROUP_ORDER}"))),
        }
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn size(&self) -> usize {
        self.orders.iter().product::<u64>() as usize
    }

    pub fn element(&self, mut idx: usize) -> Vec<u64> {
        let mut out = vec![0; self.orders.len()];
        for (slot, &n) in out.iter_mut().zip(&self.orders).rev() {
            *slot = (idx as u64) % n;
            idx /= n as usize;
        }
        out
    }

    pub fn index(&self, g: &[u64]) -> usize {
        g.iter().zip(&self.orders).fold(0usize, |acc, (&x, &n)| acc * n as usize + (x % n) as usize)
    }

    pub fn validate(&self, g: &[u64]) -> Result<()> {
        if g.len() != self.rank() {
            return invalid(format!("element {g:?} has {} coordinates, group has {}", g.len(), self.rank()));
        }
        if let Some((i, (&x, &n))) = g.iter().zip(&self.orders).enumerate().find(|(_, (&x, &n))| x >= n) {
            return invalid(format!("coordinate {i} of {g:?} is {x}, not below {n}"));
        }
        Ok(())
    }

    pub fn add_idx(&self, a: usize, b: usize) -> usize {
        let (x, y) = (self.element(a), self.element(b));
        let s: Vec<u64> = x.iter().zip(&y).zip(&self.orders).map(|((p, q), n)| (p + q) % n).collect();
        self.index(&s)
    }

    pub fn neg_idx(&self, a: usize) -> usize {
        let x = self.element(a);
        let s: Vec<u64> = x.iter().zip(&self.orders).map(|(p, n)| (n - p) % n).collect();
        self.index(&s)
    }

    /// Addition table, `table[a * N + b] = a + b`.
    pub fn addition_table(&self) -> Vec<usize> {
        let n = self.size();
        let elems: Vec<Vec<u64>> = (0..n).map(|i| self.element(i)).collect();
        let mut t = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                let s: Vec<u64> =
                    elems[a].iter().zip(&elems[b]).zip(&self.orders).map(|((p, q), m)| (p + q) % m).collect();
                t[a * n + b] = self.index(&s);
            }
        }
        t
    }

    /// `tau_mu(alpha) = prod_i omega_i^{alpha_i mu_i}`.
    pub fn character(&self, mu: &[u64], alpha: &[u64]) -> C64 {
        mu.iter()
            .zip(alpha)
            .zip(&self.orders)
            .fold(ONE, |acc, ((&m, &a), &n)| acc * root_of_unity(((m * a) % n) as i64, n))
    }
}

/// `F[alpha][mu] = tau_mu(alpha)`.
pub fn fourier_matrix(g: &AbelianGroup) -> Matrix {
    let n = g.size();
    let elems: Vec<Vec<u64>> = (0..n).map(|i| g.element(i)).collect();
    let mut f = Matrix::zeros(n, n);
    for a in 0..n {
        for m in 0..n {
            f[(a, m)] = g.character(&elems[m], &elems[a]);
        }
    }
    f
}

/// `F^{-1} = conj(F)^T / N`.
pub fn inverse_fourier_matrix(g: &AbelianGroup) -> Matrix {
    fourier_matrix(g).adjoint().scale_real(1.0 / g.size() as f64)
}

/// Parses generators such as `"100;010;001"` (digits) or `"1,0;0,1"`.
pub fn parse_generators(g: &AbelianGroup, text: &str) -> Result<Vec<Vec<u64>>> {
    let mut out = Vec::new();
    for part in text.split(';').map(str::trim).filter(|s| !s.is_empty()) {
        let coords: Vec<u64> = if part.contains(',') {
            part.split(',')
                .map(|s| {
                    s.trim().parse::<u64>().map_err(|_| Error::InvalidInput(format!("bad coordinate in {part:?}")))
                })
                .collect::<Result<_>>()?
        } else {
            part.chars()
                .map(|ch| {
                    ch.to_digit(36).map(u64::from).ok_or_else(|| Error::InvalidInput(format!("bad digit in {part:?}")))
                })
                .collect::<Result<_>>()?
        };
        g.validate(&coords)?;
        out.push(coords);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Bicharacter {
    group: AbelianGroup,
    /// `values[i][j] = sigma(eps_i, eps_j)`.
    values: Vec<Vec<C64>>,
}

impl Bicharacter {
    /// Validates `sigma_ij^{n_i} = sigma_ij^{n_j} = 1`.
    pub fn new(group: &AbelianGroup, values: Vec<Vec<C64>>, tol: f64) -> Result<Self> {
        let k = group.rank();
        if values.len() != k || values.iter().any(|row| row.len() != k) {
            return Err(Error::Shape {
                expected: format!("{k}x{k} generator values"),
                got: format!("{} rows", values.len()),
            });
        }
        let orders = group.orders();
        for i in 0..k {
            for j in 0..k {
                let s = values[i][j];
                for n in [orders[i], orders[j]] {
                    if (powu(s, n) - ONE).norm() > tol.max(1e-12) * n as f64 {
                        return invalid(format!("sigma({i},{j}) = {s} is not an {n}-th root of unity"));
                    }
                }
            }
        }
        Ok(Bicharacter { group: group.clone(), values })
    }

    pub fn trivial(group: &AbelianGroup) -> Self {
        let k = group.rank();
        Bicharacter { group: group.clone(), values: vec![vec![ONE; k]; k] }
    }

    /// `sigma_ij = -1` for `i > j`, `+1` otherwise, on `Z_2^n`.
    pub fn clifford(n: usize) -> Result<Self> {
        let group = AbelianGroup::new(&vec![2; n])?;
        let values = (0..n).map(|i| (0..n).map(|j| if i > j { -ONE } else { ONE }).collect()).collect();
        Ok(Bicharacter { group, values })
    }

    /// `sigma(a eps_1 + b eps_2, c eps_1 + d eps_2) = omega^{b c}` on `Z_n^2`.
    pub fn weyl(n: u64) -> Result<Self> {
        let group = AbelianGroup::new(&[n, n])?;
        let values = vec![vec![ONE, ONE], vec![root_of_unity(1, n), ONE]];
        Ok(Bicharacter { group, values })
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn values(&self) -> &[Vec<C64>] {
        &self.values
    }

    pub fn eval(&self, mu: &[u64], nu: &[u64]) -> C64 {
        let mut acc = ONE;
        for (i, &a) in mu.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in nu.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                acc *= powu(self.values[i][j], a * b);
            }
        }
        acc
    }

    pub fn eval_idx(&self, mu: usize, nu: usize) -> C64 {
        self.eval(&self.group.element(mu), &self.group.element(nu))
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().flatten().all(|&s| s == ONE)
    }
}

/// Classical Cayley graph on `X_N`: `A[beta][alpha]` counts `beta - alpha` in `S`.
pub fn classical_cayley(g: &AbelianGroup, gens: &[Vec<u64>]) -> Result<Operator> {
    let n = g.size();
    let set = QuantumSet::classical(n)?;
    let mut a = Matrix::zeros(n, n);
    for theta in gens {
        g.validate(theta)?;
        let t = g.index(theta);
        for alpha in 0..n {
            a[(g.add_idx(alpha, t), alpha)] += ONE;
        }
    }
    Operator::on(&set, a)
}

/// `lambda_mu = sum_{theta in S} tau_mu(-theta)`.
pub fn cayley_spectrum(g: &AbelianGroup, gens: &[Vec<u64>]) -> Result<Vec<C64>> {
    for theta in gens {
        g.validate(theta)?;
    }
    let neg: Vec<Vec<u64>> = gens.iter().map(|t| g.element(g.neg_idx(g.index(t)))).collect();
    Ok((0..g.size())
        .map(|m| {
            let mu = g.element(m);
            neg.iter().fold(ZERO, |acc, t| acc + g.character(&mu, t))
        })
        .collect())
}

/// `C(Gamma)` with multiplication twisted by a bicharacter, in the
/// orthonormal basis `b_mu = tau_mu / sqrt N`.
#[derive(Clone, Debug)]
pub struct TwistedSet {
    set: Arc<QuantumSet>,
    bichar: Bicharacter,
}

impl TwistedSet {
    pub fn set(&self) -> &Arc<QuantumSet> {
        &self.set
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.bichar.group
    }

    pub fn bicharacter(&self) -> &Bicharacter {
        &self.bichar
    }

    /// The unitary `tau_mu = sqrt N b_mu`.
    pub fn tau(&self, mu: &[u64]) -> Result<crate::AlgebraElement> {
        self.group().validate(mu)?;
        let n = self.group().size();
        let mut v = vec![ZERO; n];
        v[self.group().index(mu)] = r((n as f64).sqrt());
        self.set.element(v)
    }
}

pub fn twist_quantum_set(bichar: &Bicharacter) -> Result<TwistedSet> {
    let g = &bichar.group;
    let n = g.size();
    if n > crate::quantum_set::MAX_SET_DIM {
        return Err(Error::ResourceLimit(format!("twisted set of dimension {n} is too large")));
    }
    let add = g.addition_table();
    let w = 1.0 / (n as f64).sqrt();
    let sigma: Vec<C64> = (0..n * n).map(|k| bichar.eval_idx(k / n, k % n)).collect();
    let mut mult = Vec::with_capacity(n * n);
    for mu in 0..n {
        for nu in 0..n {
            mult.push(MultEntry { out: add[mu * n + nu], left: mu, right: nu, value: sigma[mu * n + nu].conj() * w });
        }
    }
    let mut unit = vec![ZERO; n];
    unit[0] = r((n as f64).sqrt());
    // b_mu^* = c_mu b_{-mu}, with c fixed by b_mu^* b_mu = b_0 / sqrt N
    let mut star = Matrix::zeros(n, n);
    for mu in 0..n {
        let neg = g.neg_idx(mu);
        let v = sigma[neg * n + mu].conj() * w;
        star[(mu, neg)] = ONE / (v * (n as f64).sqrt());
    }
    let set = QuantumSet::from_structure(None, n, mult, unit, star)?;
    Ok(TwistedSet { set: Arc::new(set), bichar: bichar.clone() })
}

/// Twisted Cayley graph: diagonal in the `b_mu` basis with entries `lambda_mu`.
pub fn twisted_cayley(ts: &TwistedSet, gens: &[Vec<u64>]) -> Result<Operator> {
    let lambda = cayley_spectrum(ts.group(), gens)?;
    Operator::on(ts.set(), Matrix::diagonal(&lambda))
}

/// Schur product of operators diagonal in a twisted group basis:
/// `z_kappa = (1/N) sum_{mu + nu = kappa} x_mu y_nu`, independent of the twist.
pub fn diagonal_schur(g: &AbelianGroup, x: &[C64], y: &[C64]) -> Vec<C64> {
    let n = g.size();
    let add = g.addition_table();
    let mut z = vec![ZERO; n];
    for mu in 0..n {
        if x[mu] == ZERO {
            continue;
        }
        for nu in 0..n {
            z[add[mu * n + nu]] += x[mu] * y[nu];
        }
    }
    let w = 1.0 / n as f64;
    z.iter_mut().for_each(|v| *v *= w);
    z
}

/// Schur star of a diagonal operator: `conj(x_{-mu})`.
pub fn diagonal_schur_star(g: &AbelianGroup, x: &[C64]) -> Vec<C64> {
    (0..g.size()).map(|mu| x[g.neg_idx(mu)].conj()).collect()
}

/// Graph battery for an operator diagonal in a twisted group basis, without
/// materialising the set. The edge projection spectrum is the set of values
/// of the inverse Fourier transform of the diagonal.
pub fn diagonal_report(g: &AbelianGroup, x: &[C64], tol: f64) -> Result<GraphReport> {
    let n = g.size();
    if x.len() != n {
        return Err(Error::Shape { expected: format!("{n} diagonal entries"), got: format!("{}", x.len()) });
    }
    let scale = crate::linalg::max_abs(x).max(1.0);
    let thr = tol * scale;
    let diff = |a: &[C64], b: &[C64]| crate::linalg::max_diff(a, b);
    let xx = diagonal_schur(g, x, x);
    let star = diagonal_schur_star(g, x);
    let self_adjoint = diff(&star, x) <= thr;
    let is_graph = diff(&xx, x) <= thr && self_adjoint;
    let is_undirected = x.iter().all(|v| v.im.abs() <= thr);
    // A . I is the constant mean of x; Schur products of diagonals commute
    let mean = x.iter().sum::<C64>() / n as f64;
    let loops = if mean.norm() <= thr {
        LoopStatus::None
    } else if (mean - ONE).norm() <= thr {
        LoopStatus::All
    } else {
        LoopStatus::MixedWeighted
    };
    let is_simple = is_graph && is_undirected && loops == LoopStatus::None;

    let spectrum = if self_adjoint {
        let elems: Vec<Vec<u64>> = (0..n).map(|i| g.element(i)).collect();
        let mut values: Vec<f64> = (0..n)
            .map(|t| {
                let s: C64 = (0..n).map(|m| x[m] * g.character(&elems[m], &elems[t])).sum();
                s.re / n as f64
            })
            .collect();
        values.sort_by(f64::total_cmp);
        values.dedup_by(|a, b| (*a - *b).abs() <= 1e-9 * scale);
        Some(values)
    } else {
        None
    };
    let spec_tol = 1e-7 * scale;
    let is_multigraph =
        spectrum.as_ref().is_some_and(|s| s.iter().all(|&v| (v - v.round()).abs() <= spec_tol && v.round() >= 0.0));
    let is_weighted_graph = spectrum.as_ref().is_some_and(|s| s.iter().all(|&v| v >= -spec_tol));
    Ok(GraphReport {
        vertices: n,
        edges: x[0] * n as f64,
        is_graph,
        is_undirected,
        loops,
        is_simple,
        is_multigraph,
        is_weighted_graph,
        quantum_edges: None,
        regular_degree: Some(x[0]),
        spectrum,
    })
}

/// A tensor `(C^N)^{(x) lower} -> (C^N)^{(x) upper}` whose legs are graded by
/// group elements; stored as an `N^upper x N^lower` matrix, first leg most
/// significant.
#[derive(Clone, Debug)]
pub struct GradedTensor {
    group: AbelianGroup,
    upper: usize,
    lower: usize,
    matrix: Matrix,
}

impl GradedTensor {
    pub fn new(group: &AbelianGroup, upper: usize, lower: usize, matrix: Matrix) -> Result<Self> {
        let n = group.size();
        let (rows, cols) = (n.pow(upper as u32), n.pow(lower as u32));
        if matrix.rows() != rows || matrix.cols() != cols {
            return Err(Error::Shape {
                expected: format!("{rows}x{cols}"),
                got: format!("{}x{}", matrix.rows(), matrix.cols()),
            });
        }
        Ok(GradedTensor { group: group.clone(), upper, lower, matrix })
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn upper(&self) -> usize {
        self.upper
    }

    pub fn lower(&self) -> usize {
        self.lower
    }

    /// `self` after `first`.
    pub fn compose(&self, first: &GradedTensor) -> Result<GradedTensor> {
        if first.upper != self.lower || first.group != self.group {
            return invalid("tensors are not composable");
        }
        GradedTensor::new(&self.group, self.upper, first.lower, self.matrix.mul(&first.matrix))
    }

    pub fn tensor(&self, other: &GradedTensor) -> Result<GradedTensor> {
        if other.group != self.group {
            return invalid("tensors over different groups");
        }
        GradedTensor::new(
            &self.group,
            self.upper + other.upper,
            self.lower + other.lower,
            self.matrix.kron(&other.matrix),
        )
    }

    pub fn dagger(&self) -> GradedTensor {
        GradedTensor { group: self.group.clone(), upper: self.lower, lower: self.upper, matrix: self.matrix.adjoint() }
    }

    pub fn max_diff(&self, other: &GradedTensor) -> f64 {
        self.matrix.max_diff(&other.matrix)
    }

    /// Total grade of every output and input multi-index agree on the support.
    pub fn is_intertwiner(&self, tol: f64) -> bool {
        let out = grades(&self.group, self.upper);
        let inp = grades(&self.group, self.lower);
        (0..self.matrix.rows())
            .all(|i| (0..self.matrix.cols()).all(|j| out[i] == inp[j] || self.matrix[(i, j)].norm() <= tol))
    }
}

fn multi_index(n: usize, legs: usize, mut k: usize) -> Vec<usize> {
    let mut out = vec![0; legs];
    for slot in out.iter_mut().rev() {
        *slot = k % n;
        k /= n;
    }
    out
}

fn grades(g: &AbelianGroup, legs: usize) -> Vec<usize> {
    let n = g.size();
    (0..n.pow(legs as u32)).map(|k| multi_index(n, legs, k).into_iter().fold(0, |acc, x| g.add_idx(acc, x))).collect()
}

/// `sigma_i = prod_{a < b} sigma(g_{i_a}, g_{i_b})` for every multi-index.
fn leg_phases(b: &Bicharacter, legs: usize) -> Vec<C64> {
    let n = b.group.size();
    (0..n.pow(legs as u32))
        .map(|k| {
            let idx = multi_index(n, legs, k);
            let mut acc = ONE;
            for a in 0..legs {
                for c in a + 1..legs {
                    acc *= b.eval_idx(idx[a], idx[c]);
                }
            }
            acc
        })
        .collect()
}

/// `[T^]^i_j = sigma_i conj(sigma_j) T^i_j`.
pub fn twist_tensor(t: &GradedTensor, b: &Bicharacter) -> Result<GradedTensor> {
    if b.group != t.group {
        return invalid("bicharacter lives on a different group");
    }
    let (up, down) = (leg_phases(b, t.upper), leg_phases(b, t.lower));
    let mut m = t.matrix.clone();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            m[(i, j)] *= up[i] * down[j].conj();
        }
    }
    GradedTensor::new(&t.group, t.upper, t.lower, m)
}

/// Multiplication `N x N^2`, unit `N x 1` and cup `N^2 x 1` of a set.
pub fn structure_tensors(g: &AbelianGroup, set: &QuantumSet) -> Result<(GradedTensor, GradedTensor, GradedTensor)> {
    let n = set.dim();
    if n != g.size() {
        return invalid("set dimension does not match the group order");
    }
    let mut m = Matrix::zeros(n, n * n);
    for e in set.mult_entries() {
        m[(e.out, e.left * n + e.right)] = e.value;
    }
    let eta = Matrix::from_vec(n, 1, set.unit().to_vec())?;
    let cup = Matrix::from_vec(n * n, 1, set.cup().data().to_vec())?;
    Ok((GradedTensor::new(g, 1, 2, m)?, GradedTensor::new(g, 1, 0, eta)?, GradedTensor::new(g, 2, 0, cup)?))
}

/// A tensor expressed in the orthonormal Fourier basis `tau_mu / sqrt N`.
pub fn to_fourier(g: &AbelianGroup, t: &GradedTensor) -> Result<GradedTensor> {
    let u = fourier_matrix(g).scale_real(1.0 / (g.size() as f64).sqrt());
    let ud = u.adjoint();
    let power = |m: &Matrix, k: usize| (0..k).fold(Matrix::identity(1), |acc, _| acc.kron(m));
    let m = power(&ud, t.upper).mul(&t.matrix).mul(&power(&u, t.lower));
    GradedTensor::new(g, t.upper, t.lower, m)
}
