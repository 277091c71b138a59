//! Seeded random instances for property checks.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{c, root_of_unity, Matrix, C64};
use crate::operator::Operator;
use crate::quantum_set::QuantumSet;
use crate::twist::{AbelianGroup, Bicharacter};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut impl Rng) -> C64 {
    c(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn random_vector(len: usize, rng: &mut impl Rng) -> Vec<C64> {
    (0..len).map(|_| gaussian(rng)).collect()
}

pub fn random_matrix(rows: usize, cols: usize, rng: &mut impl Rng) -> Matrix {
    Matrix::from_vec(rows, cols, random_vector(rows * cols, rng)).expect("sizes agree")
}

pub fn random_operator(set: &Arc<QuantumSet>, rng: &mut impl Rng) -> Operator {
    Operator::on(set, random_matrix(set.dim(), set.dim(), rng)).expect("square")
}

/// Product of one to three cyclic factors of order at most 8, total at most `max_order`.
pub fn random_group(max_order: usize, rng: &mut impl Rng) -> AbelianGroup {
    loop {
        let k = rng.gen_range(1..=3);
        let orders: Vec<u64> = (0..k).map(|_| rng.gen_range(2..=8)).collect();
        if orders.iter().product::<u64>() as usize <= max_order {
            return AbelianGroup::new(&orders).expect("small group");
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Uniform among bicharacters: `sigma_ij` a random `gcd(n_i, n_j)`-th root of unity.
pub fn random_bicharacter(g: &AbelianGroup, rng: &mut impl Rng) -> Bicharacter {
    let o = g.orders();
    let values = (0..o.len())
        .map(|i| {
            (0..o.len())
                .map(|j| {
                    let d = gcd(o[i], o[j]);
                    root_of_unity(rng.gen_range(0..d) as i64, d)
                })
                .collect()
        })
        .collect();
    Bicharacter::new(g, values, 1e-9).expect("orders respected by construction")
}

/// A random generating multiset without repeats, never containing 0.
pub fn random_connection_set(g: &AbelianGroup, rng: &mut impl Rng) -> Vec<Vec<u64>> {
    let mut pool: Vec<usize> = (1..g.size()).collect();
    pool.shuffle(rng);
    let k = rng.gen_range(0..=pool.len().min(6));
    pool[..k].iter().map(|&i| g.element(i)).collect()
}
