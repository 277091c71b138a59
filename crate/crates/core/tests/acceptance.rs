//! End-to-end acceptance battery. Prints one line per criterion and exits
//! non-zero if any criterion fails.

use std::f64::consts::FRAC_PI_4;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use qgraph_core::calculus::{
    from_rotation_tensor, graph_from_subspace, rotate, rotation_tensor, schur, schur_star, schur_unit, unrotate,
};
use qgraph_core::catalog::{
    anticommutative_square, classify_m2, conjugation_map, gell_mann_graph, m2_partial_family, random_su2,
    random_su2_subspace,
};
use qgraph_core::clifford::{
    anticommutation_residual, clifford_set, cube_eigenvalue, cube_graph, cube_spectrum, folded_quotient_check,
    halved_square_check, weight, CubeKind,
};
use qgraph_core::constructions::{check_isomorphism, quotient_graph, BlockMap};
use qgraph_core::linalg::{hermitian_eigs, r, Matrix};
use qgraph_core::obstruction::{find_obstruction, Outcome};
use qgraph_core::sampling::{
    random_bicharacter, random_connection_set, random_group, random_operator, random_vector, rng,
};
use qgraph_core::twist::{classical_cayley, twist_quantum_set, twisted_cayley, AbelianGroup, Bicharacter};
use qgraph_core::weyl::{
    rook_closed_form, rook_eigenvalue, rook_generators, rook_via_twist, weyl_isomorphism, weyl_set,
};
use qgraph_core::{graph_report, verify_frobenius, Operator, QuantumSet};

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn timed(limit: Duration, start: Instant) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t <= limit, format!("took {t:?}, limit {limit:?}"))
}

fn twisted_catalogue() -> Vec<Bicharacter> {
    let mut out = Vec::new();
    for k in 1..=6 {
        let g = AbelianGroup::new(&vec![2; k]).unwrap();
        out.push(Bicharacter::trivial(&g));
        out.push(Bicharacter::clifford(k).unwrap());
    }
    for n in 2..=8 {
        out.push(Bicharacter::weyl(n).unwrap());
        out.push(Bicharacter::trivial(&AbelianGroup::new(&[n, n]).unwrap()));
    }
    let mut rg = rng(11);
    for orders in [vec![5], vec![7], vec![4, 2], vec![3, 3, 3], vec![6, 4], vec![2, 4, 8], vec![4, 4, 4], vec![3, 6]] {
        let g = AbelianGroup::new(&orders).unwrap();
        out.push(Bicharacter::trivial(&g));
        for _ in 0..2 {
            out.push(random_bicharacter(&g, &mut rg));
        }
    }
    out
}

fn c1_frobenius() -> Verdict {
    let mut count = 0;
    let mut worst: f64 = 0.0;
    let mut blocks: Vec<Vec<usize>> = (1..=16).map(|k| vec![1; k]).collect();
    blocks.extend([vec![2], vec![3], vec![4], vec![1, 2, 3], vec![2, 2, 4]]);
    for b in blocks {
        let t = Instant::now();
        let set = QuantumSet::from_blocks(&b).map_err(e)?;
        let rep = verify_frobenius(&set, 1e-9);
        ensure(rep.all_passed(), format!("blocks {b:?}: {rep}"))?;
        timed(Duration::from_secs(1), t)?;
        worst = worst.max(rep.max_residual());
        count += 1;
    }
    for bc in twisted_catalogue() {
        let t = Instant::now();
        let ts = twist_quantum_set(&bc).map_err(e)?;
        let rep = verify_frobenius(ts.set(), 1e-9);
        ensure(rep.all_passed(), format!("group {:?}: {rep}", bc.group().orders()))?;
        timed(Duration::from_secs(1), t)?;
        worst = worst.max(rep.max_residual());
        count += 1;
    }
    Ok(format!("{count} sets, worst residual {worst:.1e}"))
}

fn c2_square() -> Verdict {
    let a = anticommutative_square().map_err(e)?;
    let half = |rows: &[&[f64]]| Matrix::from_real(rows).scale_real(0.5);
    let a_disp = Matrix::from_real(&[&[1., 0., 0., 1.], &[0., -1., 1., 0.], &[0., 1., -1., 0.], &[1., 0., 0., 1.]]);
    let at_disp = half(&[&[1., 0., 0., -1.], &[0., 1., 1., 0.], &[0., 1., 1., 0.], &[-1., 0., 0., 1.]]);
    let it_disp = half(&[&[1., 0., 0., 1.], &[0.; 4], &[0.; 4], &[1., 0., 0., 1.]]);
    let at = rotate(&a).map_err(e)?;
    let it = rotate(&Operator::identity(a.domain())).map_err(e)?;
    ensure(a.matrix().max_diff(&a_disp) <= 1e-12, "A differs from display")?;
    ensure(at.block(0, 0).max_diff(&at_disp) <= 1e-12, "A~ differs from display")?;
    ensure(it.block(0, 0).max_diff(&it_disp) <= 1e-12, "I~ differs from display")?;
    ensure(at.block(0, 0).mul(it.block(0, 0)).max_abs() <= 1e-12, "A~ I~ != 0")?;
    let rep = graph_report(&a, 1e-9).map_err(e)?;
    ensure(rep.is_simple && rep.is_undirected, "not simple undirected")?;
    ensure(rep.vertices == 4, "vertices")?;
    ensure((rep.edges - r(8.0)).norm() <= 1e-9, "edges")?;
    ensure(rep.quantum_edges == Some(2), "quantum edges")?;
    ensure(rep.regular_degree.is_some_and(|d| (d - r(2.0)).norm() <= 1e-9), "degree")?;
    Ok("displays to 1e-12, simple, 4 vertices, 8 edges, 2 quantum edges, 2-regular".into())
}

fn c3_m2_classification() -> Verdict {
    let start = Instant::now();
    let mut rg = rng(3);
    for k in 0..500 {
        let dim = k % 4;
        let v = random_su2_subspace(dim, &mut rg).map_err(e)?;
        let a = graph_from_subspace(2, &v, 1e-9).map_err(e)?;
        let got = classify_m2(&a, 1e-9).map_err(e)?;
        ensure(got == dim, format!("instance {k}: classified {got}, dim {dim}"))?;
    }
    for k in 0..200 {
        let dim = k % 4;
        let v = random_su2_subspace(dim, &mut rg).map_err(e)?;
        let u = random_su2(&mut rg);
        let w: Vec<Matrix> = v.iter().map(|x| u.mul(x).mul(&u.adjoint())).collect();
        let a = graph_from_subspace(2, &v, 1e-9).map_err(e)?;
        let b = graph_from_subspace(2, &w, 1e-9).map_err(e)?;
        let phi = conjugation_map(&u).map_err(e)?;
        let rep = check_isomorphism(&phi, &a, &b, 1e-9).map_err(e)?;
        ensure(rep.all_passed(), format!("conjugation {k}: {rep}"))?;
    }
    timed(Duration::from_secs(30), start)?;
    Ok(format!("500 classifications, 200 conjugations in {:.2?}", start.elapsed()))
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

fn c4_rook() -> Verdict {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for n in 2..=5usize {
        let closed = rook_closed_form(n).map_err(e)?;
        let twisted = rook_via_twist(n as u64).map_err(e)?;
        let d = closed.max_diff(&twisted);
        ensure(d <= 1e-9, format!("n = {n}: residual {d:.3e}"))?;
        worst = worst.max(d);
        let eig = sorted(hermitian_eigs(closed.matrix()).map_err(e)?.values);
        let expect =
            sorted((0..n as u64).flat_map(|a| (0..n as u64).map(move |b| rook_eigenvalue(n as u64, a, b))).collect());
        let sd = eig.iter().zip(&expect).fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()));
        ensure(sd <= 1e-9, format!("n = {n}: spectrum residual {sd:.3e}"))?;
    }
    let two = rook_closed_form(2).map_err(e)?;
    let square = anticommutative_square().map_err(e)?;
    ensure(two.max_diff(&square) <= 1e-12, "n = 2 differs from the square")?;
    timed(Duration::from_secs(10), start)?;
    Ok(format!("n = 2..5, worst residual {worst:.1e}"))
}

/// `m` as an `N x N^2` matrix.
fn mult_matrix(set: &QuantumSet) -> Matrix {
    let n = set.dim();
    let mut m = Matrix::zeros(n, n * n);
    for en in set.mult_entries() {
        m[(en.out, en.left * n + en.right)] = en.value;
    }
    m
}

fn c5_weyl() -> Verdict {
    let mut worst: f64 = 0.0;
    for n in 2..=6usize {
        let ts = weyl_set(n as u64).map_err(e)?;
        let phi = weyl_isomorphism(&ts).map_err(e)?;
        let rep = qgraph_core::check_star_homomorphism(&phi, true, 1e-9);
        ensure(rep.all_passed(), format!("n = {n}: {rep}"))?;
        let inv = phi.inverse().map_err(e)?;
        ensure(phi.compose(&inv).map_err(e)?.max_diff(&Operator::identity(phi.codomain())) <= 1e-9, "inverse")?;
        let p = phi.matrix();
        let pd = p.adjoint();
        let m_t = p.mul(&mult_matrix(ts.set())).mul(&pd.kron(&pd));
        let r_t = p.kron(p).mul(&Matrix::from_vec(n.pow(4), 1, ts.set().cup().data().to_vec()).map_err(e)?);
        let w = 1.0 / (n as f64).sqrt();
        let mut dm: f64 = 0.0;
        let mut dr: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let rv = if j == k && i == l { 1.0 } else { 0.0 };
                        dr = dr.max((r_t[((i * n + j) * n * n + k * n + l, 0)] - r(rv)).norm());
                        for rr in 0..n {
                            for s in 0..n {
                                let mv = if rr == i && k == j && s == l { w } else { 0.0 };
                                let got = m_t[(rr * n + s, (i * n + j) * n * n + k * n + l)];
                                dm = dm.max((got - r(mv)).norm());
                            }
                        }
                    }
                }
            }
        }
        ensure(dm <= 1e-9 && dr <= 1e-9, format!("n = {n}: m~ {dm:.3e}, R~ {dr:.3e}"))?;
        worst = worst.max(dm).max(dr).max(rep.max_residual());
    }
    Ok(format!("n = 2..6, worst residual {worst:.1e}"))
}

fn c6_clifford() -> Verdict {
    let mut worst: f64 = 0.0;
    for n in 1..=8 {
        let res = anticommutation_residual(n).map_err(e)?;
        ensure(res <= 1e-12, format!("n = {n}: residual {res:.3e}"))?;
        worst = worst.max(res);
    }
    let cl2 = clifford_set(2).map_err(e)?;
    let w2 = weyl_set(2).map_err(e)?;
    ensure(cl2.set().mult_entries() == w2.set().mult_entries(), "Cl_2 and Weyl(2) structure constants differ")?;
    ensure(**cl2.set() == **w2.set(), "Cl_2 and Weyl(2) sets differ")?;
    Ok(format!("n <= 8 residual {worst:.1e}; Cl_2 == Weyl(2) exactly"))
}

fn c7_closed_forms() -> Verdict {
    let mut worst: f64 = 0.0;
    for n in 1..=10 {
        let g = AbelianGroup::new(&vec![2; n]).map_err(e)?;
        for kind in [CubeKind::Hypercube, CubeKind::Folded, CubeKind::Squared] {
            let lambda = cube_spectrum(kind, n).map_err(e)?;
            for (k, l) in lambda.iter().enumerate() {
                let d = (l - r(cube_eigenvalue(kind, n, weight(&g.element(k))))).norm();
                worst = worst.max(d);
                ensure(d <= 1e-9, format!("{kind:?} n = {n} element {k}: {d:.3e}"))?;
            }
        }
    }
    Ok(format!("three families, n <= 10, worst residual {worst:.1e}"))
}

struct Instance {
    group: AbelianGroup,
    gens: Vec<Vec<u64>>,
    bichar: Bicharacter,
}

fn random_instances() -> Vec<Instance> {
    let mut rg = rng(8);
    (0..30)
        .map(|_| {
            let group = random_group(64, &mut rg);
            let gens = random_connection_set(&group, &mut rg);
            let bichar = random_bicharacter(&group, &mut rg);
            Instance { group, gens, bichar }
        })
        .collect()
}

fn c8_preservation() -> Verdict {
    let start = Instant::now();
    for (k, inst) in random_instances().iter().enumerate() {
        let classical = classical_cayley(&inst.group, &inst.gens).map_err(e)?;
        let ts = twist_quantum_set(&inst.bichar).map_err(e)?;
        let twisted = twisted_cayley(&ts, &inst.gens).map_err(e)?;
        let rc = graph_report(&classical, 1e-9).map_err(e)?;
        let rt = graph_report(&twisted, 1e-9).map_err(e)?;
        ensure(
            rc.agrees_with(&rt, 1e-8),
            format!("instance {k} {:?}: reports differ\n{rc}\n{rt}", inst.group.orders()),
        )?;
        let s = twisted.max_abs().max(1.0);
        ensure(
            schur(&twisted, &twisted).map_err(e)?.max_diff(&twisted) <= 1e-9 * s,
            format!("instance {k}: not idempotent"),
        )?;
        ensure(
            schur_star(&twisted).map_err(e)?.max_diff(&twisted) <= 1e-9 * s,
            format!("instance {k}: not self-adjoint"),
        )?;
    }
    timed(Duration::from_secs(60), start)?;
    Ok(format!("30 instances in {:.2?}", start.elapsed()))
}

fn c9_folded() -> Verdict {
    for n in 1..=5 {
        let rep = folded_quotient_check(n, 1e-12).map_err(e)?;
        ensure(rep.all_passed(), format!("n = {n}: {rep}"))?;
    }
    Ok("n = 1..5: *-homomorphism, factor-2 quotient, edges conserved".into())
}

fn c10_halving() -> Verdict {
    for n in 1..=6 {
        let rep = halved_square_check(n, 1e-9).map_err(e)?;
        ensure(rep.all_passed(), format!("n = {n}: {rep}"))?;
    }
    Ok("n + 1 = 2..7 simple, spectra match".into())
}

fn c11_quotients() -> Verdict {
    let iota = BlockMap::diagonal_embedding(2).map_err(e)?;
    let m2 = QuantumSet::matrix_algebra(2).map_err(e)?;
    let s3 = 3f64.sqrt();
    let ex1 = Matrix::from_real(&[&[1., 1., 1., 1.], &[1., -1., 1., -1.], &[1., 1., -1., -1.], &[1., -1., -1., 1.]])
        .scale_real(0.5);
    let ex2 = Matrix::from_real(&[&[3., s3, s3, 1.], &[s3, -3., 1., -s3], &[s3, 1., -3., -s3], &[1., -s3, -s3, 3.]])
        .scale_real(0.25);
    let y1 = Matrix::from_real(&[&[1., 1.], &[1., 1.]]);
    let y2 = Matrix::from_real(&[&[3., 1.], &[1., 3.]]).scale_real(0.5);
    for (k, (ax, ay)) in [(ex1, y1), (ex2, y2)].into_iter().enumerate() {
        let a = Operator::on(&m2, ax).map_err(e)?;
        let q = quotient_graph(&a, &iota).map_err(e)?;
        let d = q.adjacency().matrix().max_diff(&ay);
        ensure(d <= 1e-12, format!("example {}: residual {d:.3e}", k + 1))?;
        let ex = graph_report(&a, 1e-9).map_err(e)?.edges;
        let ey = graph_report(q.adjacency(), 1e-9).map_err(e)?.edges;
        ensure((ex - r(4.0)).norm() <= 1e-12 && (ey - r(4.0)).norm() <= 1e-12, format!("example {}: edges", k + 1))?;
    }
    Ok("both examples to 1e-12, 4 edges conserved".into())
}

fn c12_obstruction() -> Verdict {
    let gm = find_obstruction(&gell_mann_graph().map_err(e)?, None).map_err(e)?;
    let c = gm.certificate().ok_or("Gell-Mann graph gave no certificate")?;
    ensure(c.residual > 1e-6, "Gell-Mann residual too small")?;
    let partial = find_obstruction(&m2_partial_family(1, FRAC_PI_4).map_err(e)?, None).map_err(e)?;
    let p = partial.certificate().ok_or("partial family gave no certificate")?;
    ensure((p.first_trace.as_str(), p.second_trace.as_str()) == ("A", "I"), "partial witnesses are not (A, I)")?;
    let inconclusive = |a: &Operator, what: &str| -> Result<(), String> {
        match find_obstruction(a, None).map_err(e)? {
            Outcome::Inconclusive { complete: true, .. } => Ok(()),
            other => Err(format!("{what}: {other}")),
        }
    };
    inconclusive(&anticommutative_square().map_err(e)?, "square")?;
    let mut count = 0;
    for inst in random_instances() {
        let ts = twist_quantum_set(&inst.bichar).map_err(e)?;
        inconclusive(&twisted_cayley(&ts, &inst.gens).map_err(e)?, "random twisted Cayley")?;
        count += 1;
    }
    for n in 1..=6 {
        for kind in [CubeKind::Hypercube, CubeKind::Folded, CubeKind::Squared] {
            let (_, a) = cube_graph(kind, n).map_err(e)?;
            inconclusive(&a, &format!("{kind:?} n = {n}"))?;
            count += 1;
        }
    }
    for n in 2..=8 {
        let ts = weyl_set(n).map_err(e)?;
        inconclusive(&twisted_cayley(&ts, &rook_generators(n)).map_err(e)?, "twisted rook")?;
        count += 1;
    }
    Ok(format!("Gell-Mann residual {:.3}, partial (A, I), {count} twisted Cayley graphs inconclusive", c.residual))
}

/// Tensor-level oracles built densely: `m` as `N x N^2`, `R` as `N^2 x 1`.
struct Dense {
    n: usize,
    m: Matrix,
    md: Matrix,
    cup: Matrix,
}

impl Dense {
    fn new(set: &QuantumSet) -> Self {
        let n = set.dim();
        let m = mult_matrix(set);
        let cup = Matrix::from_vec(n * n, 1, set.cup().data().to_vec()).unwrap();
        Dense { n, md: m.adjoint(), m, cup }
    }

    fn id(&self) -> Matrix {
        Matrix::identity(self.n)
    }
}

fn property_suite(name: &str, set: &Arc<QuantumSet>, seed: u64) -> Result<f64, String> {
    let mut rg = rng(seed);
    let d = Dense::new(set);
    let id = d.id();
    let j = schur_unit(set);
    let mut worst: f64 = 0.0;
    let mut track = |what: &str, v: f64, s: f64| -> Result<(), String> {
        worst = worst.max(v / s);
        ensure(v <= 1e-9 * s, format!("{name}: {what} residual {v:.3e}"))
    };
    // snake and Frobenius law as dense tensors, applied to random inputs
    let snake_l = d.cup.adjoint().kron(&id).mul(&id.kron(&d.cup));
    let snake_r = id.kron(&d.cup.adjoint()).mul(&d.cup.kron(&id));
    let frob_l = d.m.kron(&id).mul(&id.kron(&d.md));
    let frob_mid = d.md.mul(&d.m);
    let frob_r = id.kron(&d.m).mul(&d.md.kron(&id));
    for _ in 0..100 {
        let a = random_operator(set, &mut rg);
        let b = random_operator(set, &mut rg);
        let c = random_operator(set, &mut rg);
        let s = a.max_abs().max(b.max_abs()).max(c.max_abs()).powi(3).max(1.0);

        let t = rotation_tensor(&a).map_err(e)?;
        track("rotation round trip", from_rotation_tensor(set, &t).map_err(e)?.max_diff(&a), s)?;
        if set.blocks().is_some() {
            track("block rotation round trip", unrotate(&rotate(&a).map_err(e)?).map_err(e)?.max_diff(&a), s)?;
        }
        let ab = schur(&a, &b).map_err(e)?;
        let lhs = schur(&ab, &c).map_err(e)?;
        let rhs = schur(&a, &schur(&b, &c).map_err(e)?).map_err(e)?;
        track("Schur associativity", lhs.max_diff(&rhs), s * 10.0)?;
        track("Schur unit", schur(&j, &a).map_err(e)?.max_diff(&a).max(schur(&a, &j).map_err(e)?.max_diff(&a)), s)?;
        let star_ab = schur_star(&ab).map_err(e)?;
        let ba = schur(&schur_star(&b).map_err(e)?, &schur_star(&a).map_err(e)?).map_err(e)?;
        track("star antimultiplicative", star_ab.max_diff(&ba), s)?;

        let x = Matrix::from_vec(d.n, 1, random_vector(d.n, &mut rg)).unwrap();
        track("snake left", snake_l.mul(&x).max_diff(&x), s)?;
        track("snake right", snake_r.mul(&x).max_diff(&x), s)?;
        let xy = Matrix::from_vec(d.n * d.n, 1, random_vector(d.n * d.n, &mut rg)).unwrap();
        let mid = frob_mid.mul(&xy);
        track("Frobenius left", frob_l.mul(&xy).max_diff(&mid), s)?;
        track("Frobenius right", frob_r.mul(&xy).max_diff(&mid), s)?;
    }
    Ok(worst)
}

fn c13_properties() -> Verdict {
    let cl3 = clifford_set(3).map_err(e)?;
    let suites: Vec<(&str, Arc<QuantumSet>)> = vec![
        ("M_2", QuantumSet::matrix_algebra(2).map_err(e)?),
        ("M_3", QuantumSet::matrix_algebra(3).map_err(e)?),
        ("X_4", QuantumSet::classical(4).map_err(e)?),
        ("Cl_3", cl3.set().clone()),
    ];
    let mut worst: f64 = 0.0;
    for (k, (name, set)) in suites.iter().enumerate() {
        worst = worst.max(property_suite(name, set, 100 + k as u64)?);
    }
    Ok(format!("4 suites x 100 instances, worst relative residual {worst:.1e}"))
}

fn main() -> ExitCode {
    let criteria: Vec<Criterion> = vec![
        ("frobenius identities", c1_frobenius),
        ("anticommutative square", c2_square),
        ("M_2 classification and conjugation", c3_m2_classification),
        ("quantum rook", c4_rook),
        ("Weyl isomorphism", c5_weyl),
        ("Clifford relations", c6_clifford),
        ("cube closed forms", c7_closed_forms),
        ("twist preserves reports", c8_preservation),
        ("folded quotient", c9_folded),
        ("halved square", c10_halving),
        ("quotient examples", c11_quotients),
        ("obstruction", c12_obstruction),
        ("property suites", c13_properties),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(msg) => println!("criterion {:>2} PASS  {name}: {msg} [{:.2?}]", k + 1, t.elapsed()),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {msg} [{:.2?}]", k + 1, t.elapsed());
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
