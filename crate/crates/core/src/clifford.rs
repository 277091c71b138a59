//! Clifford twists of `Z_2^n` and the hypercube family.

use serde::Serialize;

use crate::calculus::graph_report;
use crate::error::{invalid, Result};
use crate::linalg::{max_diff, r, Matrix, C64, I, ONE, ZERO};
use crate::operator::{check_star_homomorphism, Operator};
use crate::report::Report;
use crate::twist::{
    cayley_spectrum, diagonal_report, twist_quantum_set, twisted_cayley, AbelianGroup, Bicharacter, TwistedSet,
};

pub fn clifford_set(n: usize) -> Result<TwistedSet> {
    twist_quantum_set(&Bicharacter::clifford(n)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CubeKind {
    /// `Q_n`: generators `eps_i`.
    Hypercube,
    /// `FQ_{n+1}` on `Z_2^n`: generators `eps_i` and the all-ones element.
    Folded,
    /// `Q_n^2`: generators `eps_i` and `eps_i + eps_j`.
    Squared,
}

fn unit_vector(n: usize, i: usize) -> Vec<u64> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

pub fn cube_generators(kind: CubeKind, n: usize) -> Vec<Vec<u64>> {
    let mut gens: Vec<Vec<u64>> = (0..n).map(|i| unit_vector(n, i)).collect();
    match kind {
        CubeKind::Hypercube => {}
        CubeKind::Folded => gens.push(vec![1; n]),
        CubeKind::Squared => {
            for i in 0..n {
                for j in i + 1..n {
                    let mut v = vec![0; n];
                    v[i] = 1;
                    v[j] = 1;
                    gens.push(v);
                }
            }
        }
    }
    gens
}

/// Eigenvalue at an element of weight `d`.
pub fn cube_eigenvalue(kind: CubeKind, n: usize, d: usize) -> f64 {
    let (n, d) = (n as f64, d as f64);
    match kind {
        CubeKind::Hypercube => n - 2.0 * d,
        CubeKind::Folded => n + 1.0 - 4.0 * (d / 2.0).ceil(),
        CubeKind::Squared => 0.5 * ((n + 1.0 - 2.0 * d).powi(2) - n - 1.0),
    }
}

pub fn weight(mu: &[u64]) -> usize {
    mu.iter().filter(|&&x| x != 0).count()
}

/// Brute-force spectrum from the Cayley formula, indexed like the group.
pub fn cube_spectrum(kind: CubeKind, n: usize) -> Result<Vec<C64>> {
    let g = AbelianGroup::new(&vec![2; n])?;
    cayley_spectrum(&g, &cube_generators(kind, n))
}

/// The twisted cube-like graph on `Cl_n`.
pub fn cube_graph(kind: CubeKind, n: usize) -> Result<(TwistedSet, Operator)> {
    let ts = clifford_set(n)?;
    let a = twisted_cayley(&ts, &cube_generators(kind, n))?;
    Ok((ts, a))
}

/// Largest `|tau_i tau_j + tau_j tau_i - 2 delta_ij|`, together with
/// `tau_i^* = tau_i`, computed from the structure constants.
pub fn anticommutation_residual(n: usize) -> Result<f64> {
    let ts = clifford_set(n)?;
    let one = ts.set().unit_element();
    let taus = (0..n).map(|i| ts.tau(&unit_vector(n, i))).collect::<Result<Vec<_>>>()?;
    let mut worst: f64 = 0.0;
    for i in 0..n {
        worst = worst.max(taus[i].star().max_diff(&taus[i]));
        for j in 0..n {
            let ac = taus[i].mul(&taus[j])?.add(&taus[j].mul(&taus[i])?)?;
            let expect = if i == j { one.scale(r(2.0)) } else { one.scale(ZERO) };
            worst = worst.max(ac.max_diff(&expect));
        }
    }
    Ok(worst)
}

/// `Cl_n -> Cl_{n+1}`: `tau_mu -> tau_mu` for even `mu`, `i tau_mu tau_{n+1}`
/// for odd `mu`.
pub fn folded_embedding(n: usize) -> Result<(TwistedSet, TwistedSet, Operator)> {
    let small = clifford_set(n)?;
    let big = clifford_set(n + 1)?;
    let (gs, gb) = (small.group(), big.group());
    let last = unit_vector(n + 1, n);
    let mut m = Matrix::zeros(gb.size(), gs.size());
    for idx in 0..gs.size() {
        let mu = gs.element(idx);
        let mut lifted = mu.clone();
        lifted.push(0);
        let (target, phase) = if weight(&mu).is_multiple_of(2) {
            (lifted, ONE)
        } else {
            // tau_mu tau_{n+1} = conj(sigma(mu, eps_{n+1})) tau_{mu + eps_{n+1}}
            let s = big.bicharacter().eval(&lifted, &last).conj();
            let mut t = lifted;
            t[n] = 1;
            (t, I * s)
        };
        // b_mu = tau_mu / sqrt N and the codomain has twice the dimension
        m[(gb.index(&target), idx)] = phase * r(2f64.sqrt());
    }
    let op = Operator::new(small.set().clone(), big.set().clone(), m)?;
    Ok((small, big, op))
}

/// `iota` is a unital *-homomorphism, `iota^dagger A_{Q_{n+1}} iota = 2 A_{FQ_{n+1}}`,
/// and the edge count is conserved.
pub fn folded_quotient_check(n: usize, tol: f64) -> Result<Report> {
    let (small, big, iota) = folded_embedding(n)?;
    let mut rep = check_star_homomorphism(&iota, true, tol);
    rep.title = format!("folded quotient Cl_{} -> Cl_{n}", n + 1);
    let q = twisted_cayley(&big, &cube_generators(CubeKind::Hypercube, n + 1))?;
    let fq = twisted_cayley(&small, &cube_generators(CubeKind::Folded, n))?;
    let quotient = iota.adjoint().compose(&q)?.compose(&iota)?;
    let twice = fq.scale(r(2.0));
    rep.record("quotient-equals-twice-folded", quotient.max_diff(&twice), tol * twice.max_abs().max(1.0));
    let edges = |a: &Operator| {
        let u = a.domain().unit();
        crate::linalg::dot(u, &a.apply(u))
    };
    let (e_big, e_quot) = (edges(&q), edges(&quotient));
    rep.record("edge-count-conserved", (e_big - e_quot).norm(), tol * e_big.norm().max(1.0));
    Ok(rep)
}

/// `B = (A^2 - (n+1) I) / 2` for the twisted `Q_{n+1}` is a simple graph whose
/// spectrum is the squared-hypercube spectrum of `Q_n`, doubled.
pub fn halved_square_check(n: usize, tol: f64) -> Result<Report> {
    if n == 0 {
        return invalid("n must be positive");
    }
    let m = n + 1;
    let g = AbelianGroup::new(&vec![2; m])?;
    let lambda = cayley_spectrum(&g, &cube_generators(CubeKind::Hypercube, m))?;
    let b: Vec<C64> = lambda.iter().map(|l| (l * l - r(m as f64)) * 0.5).collect();
    let mut rep = Report::new(format!("halved square of Q_{m}"));

    let fast = diagonal_report(&g, &b, tol)?;
    rep.record_flag("simple-diagonal", fast.is_simple);
    if g.size() <= crate::calculus::GENERIC_SCHUR_LIMIT {
        let ts = clifford_set(m)?;
        let op = Operator::on(ts.set(), Matrix::diagonal(&b))?;
        rep.record_flag("simple-generic", graph_report(&op, tol)?.is_simple);
    }

    let closed: Vec<C64> =
        (0..g.size()).map(|k| r(cube_eigenvalue(CubeKind::Squared, n, weight(&g.element(k))))).collect();
    rep.record("eigenvalues-match-squared-form", max_diff(&b, &closed), tol);

    let mut ours: Vec<f64> = b.iter().map(|z| z.re).collect();
    let mut doubled: Vec<f64> = cube_spectrum(CubeKind::Squared, n)?.iter().flat_map(|z| [z.re, z.re]).collect();
    ours.sort_by(f64::total_cmp);
    doubled.sort_by(f64::total_cmp);
    let res = ours.iter().zip(&doubled).fold(0.0_f64, |acc, (a, b)| acc.max((a - b).abs()));
    rep.record("spectrum-is-doubled-squared", res, tol * (m * m) as f64);
    Ok(rep)
}
