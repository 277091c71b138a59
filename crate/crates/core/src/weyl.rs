//! The Weyl twist of `Z_n^2`, its isomorphism with `M_n`, and the quantum
//! rook graph.

use crate::error::{invalid, Result};
use crate::linalg::{r, root_of_unity, Matrix};
use crate::operator::Operator;
use crate::quantum_set::QuantumSet;
use crate::twist::{twist_quantum_set, twisted_cayley, Bicharacter, TwistedSet};

pub fn weyl_set(n: u64) -> Result<TwistedSet> {
    if n < 1 {
        return invalid("n must be positive");
    }
    twist_quantum_set(&Bicharacter::weyl(n)?)
}

/// `phi(tau_1^a tau_2^b) = sum_{i-j=b} omega^{ia} e_ij`, as an operator from
/// the twisted set to `M_n` in orthonormal bases.
pub fn weyl_isomorphism(ts: &TwistedSet) -> Result<Operator> {
    let n = weyl_order(ts)?;
    let m = QuantumSet::matrix_algebra(n as usize)?;
    let nu = n as usize;
    let w = 1.0 / (n as f64).sqrt();
    let mut phi = Matrix::zeros(nu * nu, nu * nu);
    for i in 0..nu {
        for j in 0..nu {
            let b = (i + nu - j) % nu;
            for a in 0..nu {
                phi[(i * nu + j, a * nu + b)] = root_of_unity((i * a) as i64, n) * r(w);
            }
        }
    }
    Operator::new(ts.set().clone(), m, phi)
}

/// `[phi^{-1}]^{ab}_{ij} = (1/n) delta_{b,i-j} omega^{-ia}`, rescaled to orthonormal bases.
pub fn weyl_inverse(ts: &TwistedSet) -> Result<Operator> {
    let n = weyl_order(ts)?;
    let m = QuantumSet::matrix_algebra(n as usize)?;
    let nu = n as usize;
    let w = 1.0 / (n as f64).sqrt();
    let mut inv = Matrix::zeros(nu * nu, nu * nu);
    for i in 0..nu {
        for j in 0..nu {
            let b = (i + nu - j) % nu;
            for a in 0..nu {
                inv[(a * nu + b, i * nu + j)] = root_of_unity(-((i * a) as i64), n) * r(w);
            }
        }
    }
    Operator::new(m, ts.set().clone(), inv)
}

fn weyl_order(ts: &TwistedSet) -> Result<u64> {
    let orders = ts.group().orders();
    if orders.len() != 2 || orders[0] != orders[1] {
        return invalid("the Weyl isomorphism needs Z_n x Z_n");
    }
    if ts.bicharacter() != &Bicharacter::weyl(orders[0])? {
        return invalid("the Weyl isomorphism needs the Weyl bicharacter");
    }
    Ok(orders[0])
}

/// `{a eps_1 : 0 < a < n} + {b eps_2 : 0 < b < n}`.
pub fn rook_generators(n: u64) -> Vec<Vec<u64>> {
    (1..n).map(|a| vec![a, 0]).chain((1..n).map(|b| vec![0, b])).collect()
}

/// `A^{ij}_{kl} = delta_{i-j,k-l} + n delta_{ijkl} - 2 delta_ik delta_jl`, indices mod n.
pub fn rook_closed_form(n: usize) -> Result<Operator> {
    if n < 1 {
        return invalid("n must be positive");
    }
    let set = QuantumSet::matrix_algebra(n)?;
    let mut a = Matrix::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let mut v = 0.0;
                    if (i + n - j) % n == (k + n - l) % n {
                        v += 1.0;
                    }
                    if i == j && j == k && k == l {
                        v += n as f64;
                    }
                    if i == k && j == l {
                        v -= 2.0;
                    }
                    a[(i * n + j, k * n + l)] = r(v);
                }
            }
        }
    }
    Operator::on(&set, a)
}

/// Twisted rook Cayley graph carried to `M_n` by the Weyl isomorphism.
pub fn rook_via_twist(n: u64) -> Result<Operator> {
    let ts = weyl_set(n)?;
    let a = twisted_cayley(&ts, &rook_generators(n))?;
    let phi = weyl_isomorphism(&ts)?;
    let inv = weyl_inverse(&ts)?;
    phi.compose(&a)?.compose(&inv)
}

/// `lambda_{ab} = n delta_{a0} + n delta_{b0} - 2`.
pub fn rook_eigenvalue(n: u64, a: u64, b: u64) -> f64 {
    let d = |x: u64| if x.is_multiple_of(n) { n as f64 } else { 0.0 };
    d(a) + d(b) - 2.0
}
