use proptest::prelude::*;
use rand::Rng;

use qgraph_core::calculus::{
    graph_from_subspace, rotate, schur, schur_star, selfadjoint_basis, subspace_from_graph, unrotate,
};
use qgraph_core::catalog::{conjugation_map, random_su2, random_su2_subspace};
use qgraph_core::clifford::folded_embedding;
use qgraph_core::constructions::{check_isomorphism, BlockMap};
use qgraph_core::linalg::{c, r, Matrix, ZERO};
use qgraph_core::sampling::{
    random_bicharacter, random_connection_set, random_group, random_matrix, random_operator, rng,
};
use qgraph_core::twist::{
    classical_cayley, structure_tensors, to_fourier, twist_quantum_set, twist_tensor, twisted_cayley, AbelianGroup,
    GradedTensor,
};
use qgraph_core::weyl::{weyl_isomorphism, weyl_set};
use qgraph_core::{graph_report, Operator, QuantumSet};

/// Random tensor supported where the grades of both sides agree.
fn random_intertwiner(g: &AbelianGroup, upper: usize, lower: usize, rg: &mut impl Rng) -> GradedTensor {
    let n = g.size();
    let grade = |legs: usize, mut k: usize| {
        let mut acc = 0;
        for _ in 0..legs {
            acc = g.add_idx(acc, k % n);
            k /= n;
        }
        acc
    };
    let mut m = random_matrix(n.pow(upper as u32), n.pow(lower as u32), rg);
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if grade(upper, i) != grade(lower, j) {
                m[(i, j)] = ZERO;
            }
        }
    }
    GradedTensor::new(g, upper, lower, m).unwrap()
}

fn small_group(rg: &mut impl Rng) -> AbelianGroup {
    random_group(8, rg)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn twist_is_a_monoidal_dagger_functor(seed in any::<u64>()) {
        let mut rg = rng(seed);
        let g = small_group(&mut rg);
        let b = random_bicharacter(&g, &mut rg);
        let s = random_intertwiner(&g, 1, 2, &mut rg);
        let t = random_intertwiner(&g, 2, 1, &mut rg);
        let u = random_intertwiner(&g, 1, 1, &mut rg);
        prop_assert!(s.is_intertwiner(0.0) && t.is_intertwiner(0.0));
        let tw = |x: &GradedTensor| twist_tensor(x, &b).unwrap();

        let lhs = tw(&s.compose(&t).unwrap());
        let rhs = tw(&s).compose(&tw(&t)).unwrap();
        prop_assert!(lhs.max_diff(&rhs) <= 1e-9 * lhs.matrix().max_abs().max(1.0));

        let lhs = tw(&s.tensor(&u).unwrap());
        let rhs = tw(&s).tensor(&tw(&u)).unwrap();
        prop_assert!(lhs.max_diff(&rhs) <= 1e-9 * lhs.matrix().max_abs().max(1.0));

        prop_assert!(tw(&t.dagger()).max_diff(&tw(&t).dagger()) <= 1e-12);
        prop_assert!(tw(&s).is_intertwiner(1e-12));
    }

    #[test]
    fn twisted_structure_is_the_twist_of_the_fourier_structure(seed in any::<u64>()) {
        let mut rg = rng(seed);
        let g = small_group(&mut rg);
        let b = random_bicharacter(&g, &mut rg);
        let classical = QuantumSet::classical(g.size()).unwrap();
        let ts = twist_quantum_set(&b).unwrap();
        let (m, eta, cup) = structure_tensors(&g, &classical).unwrap();
        let (mt, etat, cupt) = structure_tensors(&g, ts.set()).unwrap();
        for (plain, twisted) in [(m, mt), (eta, etat), (cup, cupt)] {
            let f = to_fourier(&g, &plain).unwrap();
            prop_assert!(f.is_intertwiner(1e-9));
            prop_assert!(twist_tensor(&f, &b).unwrap().max_diff(&twisted) <= 1e-9);
        }
    }

    #[test]
    fn twisting_preserves_reports(seed in any::<u64>()) {
        let mut rg = rng(seed);
        let g = random_group(24, &mut rg);
        let gens = random_connection_set(&g, &mut rg);
        let ts = twist_quantum_set(&random_bicharacter(&g, &mut rg)).unwrap();
        let a = graph_report(&classical_cayley(&g, &gens).unwrap(), 1e-9).unwrap();
        let b = graph_report(&twisted_cayley(&ts, &gens).unwrap(), 1e-9).unwrap();
        prop_assert!(a.agrees_with(&b, 1e-8), "{a}\n{b}");
    }

    #[test]
    fn conjugate_graphs_are_isomorphic_with_equal_reports(seed in any::<u64>(), dim in 0usize..4) {
        let mut rg = rng(seed);
        let v = random_su2_subspace(dim, &mut rg).unwrap();
        let u = random_su2(&mut rg);
        let w: Vec<Matrix> = v.iter().map(|x| u.mul(x).mul(&u.adjoint())).collect();
        let a = graph_from_subspace(2, &v, 1e-9).unwrap();
        let b = graph_from_subspace(2, &w, 1e-9).unwrap();
        let rep = check_isomorphism(&conjugation_map(&u).unwrap(), &a, &b, 1e-9).unwrap();
        prop_assert!(rep.all_passed(), "{rep}");
        let (ra, rb) = (graph_report(&a, 1e-9).unwrap(), graph_report(&b, 1e-9).unwrap());
        prop_assert!(ra.agrees_with(&rb, 1e-8));
        prop_assert_eq!(ra.quantum_edges, rb.quantum_edges);
    }

    #[test]
    fn graph_from_subspace_ignores_the_basis(seed in any::<u64>(), dim in 1usize..4) {
        let mut rg = rng(seed);
        let v = random_su2_subspace(dim, &mut rg).unwrap();
        let mix = random_matrix(dim, dim, &mut rg);
        let w: Vec<Matrix> = (0..dim)
            .map(|k| (0..dim).fold(Matrix::zeros(2, 2), |acc, l| acc.add(&v[l].scale(mix[(l, k)]))))
            .collect();
        let a = graph_from_subspace(2, &v, 1e-9).unwrap();
        let b = graph_from_subspace(2, &w, 1e-9).unwrap();
        prop_assert!(a.max_diff(&b) <= 1e-8);
    }

    #[test]
    fn subspace_round_trip(seed in any::<u64>(), dim in 0usize..4) {
        let mut rg = rng(seed);
        let v = random_su2_subspace(dim, &mut rg).unwrap();
        let a = graph_from_subspace(2, &v, 1e-9).unwrap();
        let spaces = subspace_from_graph(&a).unwrap();
        prop_assert_eq!(spaces.len(), 1);
        prop_assert_eq!(spaces[0].basis.len(), dim);
        let back = graph_from_subspace(2, &spaces[0].basis, 1e-9).unwrap();
        prop_assert!(back.max_diff(&a) <= 1e-9);
        let p = rotate(&a).unwrap();
        prop_assert!(p.is_projection(1e-9) && p.is_positive(1e-9));
        prop_assert!(unrotate(&p).unwrap().max_diff(&a) <= 1e-9);
    }

    #[test]
    fn selfadjoint_basis_spans_the_same_space(seed in any::<u64>(), dim in 1usize..4) {
        let mut rg = rng(seed);
        // a random adjoint-closed subspace: x and x^dagger for random x
        let mut v = Vec::new();
        for _ in 0..dim {
            let x = random_matrix(3, 3, &mut rg);
            v.push(x.adjoint());
            v.push(x);
        }
        let h = selfadjoint_basis(&v, 1e-9).unwrap();
        prop_assert_eq!(h.len(), (2 * dim).min(9));
        for m in &h {
            prop_assert!(m.is_hermitian(1e-12));
        }
        let a = graph_from_subspace(3, &v[..h.len()], 1e-9);
        let b = graph_from_subspace(3, &h, 1e-9).unwrap();
        if let Ok(a) = a {
            prop_assert!(a.max_diff(&b) <= 1e-8);
        }
    }

    #[test]
    fn rotation_round_trip_on_block_sets(seed in any::<u64>()) {
        let mut rg = rng(seed);
        let k = rg.gen_range(1..=3);
        let blocks: Vec<usize> = (0..k).map(|_| rg.gen_range(1..=3)).collect();
        let set = QuantumSet::from_blocks(&blocks).unwrap();
        let a = random_operator(&set, &mut rg);
        let back = unrotate(&rotate(&a).unwrap()).unwrap();
        prop_assert!(back.max_diff(&a) <= 1e-9 * a.max_abs().max(1.0));
    }

    #[test]
    fn schur_star_reverses_products(seed in any::<u64>()) {
        let mut rg = rng(seed);
        let k = rg.gen_range(1..=3);
        let blocks: Vec<usize> = (0..k).map(|_| rg.gen_range(1..=3)).collect();
        let set = QuantumSet::from_blocks(&blocks).unwrap();
        let a = random_operator(&set, &mut rg);
        let b = random_operator(&set, &mut rg);
        let lhs = schur_star(&schur(&a, &b).unwrap()).unwrap();
        let rhs = schur(&schur_star(&b).unwrap(), &schur_star(&a).unwrap()).unwrap();
        prop_assert!(lhs.max_diff(&rhs) <= 1e-9 * lhs.max_abs().max(1.0));
        prop_assert!(schur_star(&schur_star(&a).unwrap()).unwrap().max_diff(&a) <= 1e-9 * a.max_abs().max(1.0));
    }

    #[test]
    fn embedding_adjoints_are_positive(seed in any::<u64>(), n in 2usize..5) {
        let mut rg = rng(seed);
        let iota = BlockMap::diagonal_embedding(n).unwrap();
        let m = iota.operator().codomain().clone();
        let x = m.element(random_matrix(n, n, &mut rg).into_data()).unwrap();
        let pos = x.star().mul(&x).unwrap();
        prop_assert!(pos.is_positive(1e-9));
        let image = iota.operator().adjoint().apply(pos.coeffs());
        let y = iota.operator().domain().element(image).unwrap();
        prop_assert!(y.is_positive(1e-9));
    }

    #[test]
    fn weyl_isomorphism_adjoint_is_positive(seed in any::<u64>(), n in 2u64..5) {
        let mut rg = rng(seed);
        let ts = weyl_set(n).unwrap();
        let phi = weyl_isomorphism(&ts).unwrap();
        let x = phi.codomain().element(random_matrix(phi.codomain().dim(), 1, &mut rg).into_data()).unwrap();
        let pos = x.star().mul(&x).unwrap();
        let y = phi.domain().element(phi.adjoint().apply(pos.coeffs())).unwrap();
        prop_assert!(y.is_positive(1e-9));
    }

    #[test]
    fn folded_embedding_adjoint_is_positive(seed in any::<u64>(), n in 1usize..4) {
        let mut rg = rng(seed);
        let (_, big, iota) = folded_embedding(n).unwrap();
        let x = big.set().element(random_matrix(big.set().dim(), 1, &mut rg).into_data()).unwrap();
        let pos = x.star().mul(&x).unwrap();
        let y = iota.domain().element(iota.adjoint().apply(pos.coeffs())).unwrap();
        prop_assert!(y.is_positive(1e-9));
    }
}

#[test]
fn bimodule_examples() {
    use qgraph_core::calculus::check_bimodule;
    let e = |i: usize, j: usize| {
        let mut m = Matrix::zeros(3, 3);
        m[(i, j)] = r(1.0);
        m
    };
    // block-diagonal pieces of [1, 2] are bimodules; a mixed sum is not
    assert!(check_bimodule(&[e(0, 0)], &[1, 2], 1e-9).unwrap());
    assert!(check_bimodule(&[e(0, 1), e(0, 2)], &[1, 2], 1e-9).unwrap());
    assert!(!check_bimodule(&[e(0, 0).add(&e(0, 1))], &[1, 2], 1e-9).unwrap());
    assert!(check_bimodule(&[e(0, 0).add(&e(0, 1)), e(0, 0)], &[1, 2], 1e-9).unwrap());
}

#[test]
fn positivity_examples() {
    let m2 = QuantumSet::matrix_algebra(2).unwrap();
    let p = m2.element(vec![r(1.0), ZERO, ZERO, ZERO]).unwrap();
    assert!(p.is_positive(1e-12));
    assert!(!p.scale(r(-1.0)).is_positive(1e-12));
    let off = m2.element(vec![ZERO, c(0.0, 1.0), ZERO, ZERO]).unwrap();
    assert!(!off.is_positive(1e-12));
    assert!(m2.unit_element().is_positive(1e-12));
}

#[test]
fn schur_products_of_operators_from_different_sets_fail() {
    let a = Operator::identity(&QuantumSet::classical(2).unwrap());
    let b = Operator::identity(&QuantumSet::matrix_algebra(2).unwrap());
    assert!(schur(&a, &b).is_err());
}
