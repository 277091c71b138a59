use std::f64::consts::FRAC_PI_4;
use std::io::Read;
use std::sync::Arc;

use qgraph_core::calculus::{
    graph_from_subspace, rotate, schur, schur_star, unrotate, EdgeProjection, GENERIC_SCHUR_LIMIT,
};
use qgraph_core::catalog::{
    anticommutative_square, conjugation_map, gell_mann_graph, m2_graph, m2_partial_family, random_su2,
    random_su2_subspace,
};
use qgraph_core::clifford::{clifford_set, cube_graph, folded_embedding, CubeKind};
use qgraph_core::constructions::{check_isomorphism, induced_subgraph, quotient_graph, BlockMap};
use qgraph_core::linalg::max_diff;
use qgraph_core::obstruction::{find_obstruction, Outcome};
use qgraph_core::sampling::rng;
use qgraph_core::twist::{
    cayley_spectrum, classical_cayley, diagonal_report, diagonal_schur, diagonal_schur_star, parse_generators,
    twist_quantum_set, twisted_cayley, AbelianGroup, Bicharacter,
};
use qgraph_core::weyl::{rook_generators, weyl_isomorphism, weyl_set};
use qgraph_core::{check_star_homomorphism, graph_report, verify_frobenius, GraphReport, Operator, QuantumSet, Report};

use crate::doc::{matrix, rows, Document, GroupDoc, Metadata, Rows, SetDoc, SCHEMA_VERSION};
use crate::error::CliError;
use crate::render;
use crate::{Cli, Command};

pub struct Output {
    pub text: String,
    pub passed: bool,
}

pub const PRESETS: &[&str] = &[
    "m2-empty",
    "m2-edge",
    "m2-two",
    "m2-full",
    "m2-partial",
    "m2-random",
    "anticommutative-square",
    "gell-mann",
    "rook",
    "hypercube",
    "folded",
    "squared",
    "cube",
    "diagonal-embedding",
    "folded-embedding",
    "weyl-isomorphism",
    "su2-conjugation",
    "clifford-bicharacter",
    "weyl-bicharacter",
];

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    if !(cli.tol.is_finite() && cli.tol > 0.0) {
        return Err(CliError::Input(format!("tolerance must be positive, got {}", cli.tol)));
    }
    let tol = cli.tol;
    let (doc, passed) = match &cli.command {
        Command::SetCheck { file, blocks, orders, bichar } => set_check(file, blocks, orders, bichar, tol)?,
        Command::GraphCheck { file } => graph_check(&read_doc(file)?, tol)?,
        Command::Rotate { file } => (rotate_doc(read_doc(file)?, tol)?, true),
        Command::Cayley { orders, gens, spectrum } => (cayley(orders, gens, *spectrum)?, true),
        Command::Twist { orders, gens, bichar, spectrum } => (twist(orders, gens, bichar, *spectrum, tol)?, true),
        Command::Catalog { preset, n, m, t, dim, gens } => {
            if preset == "list" {
                return Ok(Output { text: list_presets(cli.json), passed: true });
            }
            (catalog(preset, *n, *m, *t, *dim, gens.as_deref(), cli.seed)?, true)
        }
        Command::Quotient { graph, map } => quotient(&read_doc(graph)?, &read_doc(map)?, tol)?,
        Command::Subgraph { graph, keep } => (subgraph(&read_doc(graph)?, keep, tol)?, true),
        Command::Obstruct { graph, max_dim } => (obstruct(&read_doc(graph)?, *max_dim, tol)?, true),
        Command::IsoCheck { graph1, graph2, map } => {
            iso_check(&read_doc(graph1)?, &read_doc(graph2)?, &read_doc(map)?, tol)?
        }
    };
    let text = if cli.json { doc.to_json()? } else { render::human(&doc) };
    Ok(Output { text, passed })
}

fn list_presets(json: bool) -> String {
    if json {
        let mut s = serde_json::to_string_pretty(PRESETS).expect("strings serialise");
        s.push('\n');
        s
    } else {
        PRESETS.iter().map(|p| format!("{p}\n")).collect()
    }
}

fn read_doc(path: &str) -> Result<Document, CliError> {
    let text = if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| CliError::Input(format!("stdin: {e}")))?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{path}: {e}")))?
    };
    let source = if path == "-" { "stdin" } else { path };
    Document::parse(&text, source)
}

fn meta(pairs: &[(&str, String)]) -> Metadata {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

struct LoadedGraph {
    op: Operator,
    set: SetDoc,
    weighted: bool,
    bichar: Option<Bicharacter>,
    metadata: Metadata,
}

fn load_graph(doc: &Document, tol: f64) -> Result<LoadedGraph, CliError> {
    match doc {
        Document::QuantumGraph { set, adjacency, weighted, metadata, .. } => {
            let qs = set.build(tol)?;
            let op = Operator::on(&qs, matrix(adjacency, "adjacency")?)?;
            Ok(LoadedGraph {
                op,
                set: set.clone(),
                weighted: *weighted,
                bichar: set.bicharacter(tol)?,
                metadata: metadata.clone(),
            })
        }
        other => Err(CliError::Input(format!("expected a quantum-graph document, got {}", other.kind()))),
    }
}

fn load_map(doc: &Document, tol: f64) -> Result<(Operator, SetDoc, SetDoc), CliError> {
    match doc {
        Document::Map { domain, codomain, matrix: m, .. } => {
            let op = Operator::new(domain.build(tol)?, codomain.build(tol)?, matrix(m, "map")?)?;
            Ok((op, domain.clone(), codomain.clone()))
        }
        other => Err(CliError::Input(format!("expected a map document, got {}", other.kind()))),
    }
}

fn parse_bichar(choice: &str, group: &AbelianGroup, tol: f64) -> Result<Bicharacter, CliError> {
    let orders = group.orders();
    match choice {
        "trivial" => Ok(Bicharacter::trivial(group)),
        "clifford" => {
            if orders.iter().any(|&o| o != 2) {
                return Err(CliError::Input("the clifford bicharacter needs orders 2,2,...,2".into()));
            }
            Ok(Bicharacter::clifford(orders.len())?)
        }
        "weyl" => match orders {
            [a, b] if a == b => Ok(Bicharacter::weyl(*a)?),
            _ => Err(CliError::Input("the weyl bicharacter needs orders n,n".into())),
        },
        path => {
            let text = if path == "-" {
                let mut s = String::new();
                std::io::stdin().read_to_string(&mut s)?;
                s
            } else {
                std::fs::read_to_string(path)
                    .map_err(|e| CliError::Input(format!("--bichar {path}: not a preset and not readable: {e}")))?
            };
            let value: serde_json::Value =
                serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{path}: {e}")))?;
            let values: Rows = if value.is_array() {
                serde_json::from_value(value).map_err(|e| CliError::Input(format!("{path}: {e}")))?
            } else {
                match Document::parse(&text, path)? {
                    Document::Bicharacter { group: g, values, .. } => {
                        if g.orders != orders {
                            return Err(CliError::Input(format!(
                                "{path}: bicharacter is for orders {}, not {}",
                                join(&g.orders),
                                join(orders)
                            )));
                        }
                        values
                    }
                    other => {
                        return Err(CliError::Input(format!("{path}: expected a bicharacter, got {}", other.kind())))
                    }
                }
            };
            Ok(Bicharacter::new(group, values, tol)?)
        }
    }
}

fn set_check(
    file: &Option<String>,
    blocks: &Option<Vec<usize>>,
    orders: &Option<Vec<u64>>,
    bichar: &Option<String>,
    tol: f64,
) -> Result<(Document, bool), CliError> {
    let (set, desc): (Arc<QuantumSet>, SetDoc) = match (file, blocks, orders) {
        (Some(path), None, None) => {
            let desc = match read_doc(path)? {
                Document::QuantumSet { set, .. }
                | Document::QuantumGraph { set, .. }
                | Document::EdgeProjection { set, .. }
                | Document::Certificate { set, .. } => set,
                other => return Err(CliError::Input(format!("{} documents carry no quantum set", other.kind()))),
            };
            (desc.build(tol)?, desc)
        }
        (None, Some(b), None) => (QuantumSet::from_blocks(b)?, SetDoc::blocks(b)),
        (None, None, Some(o)) => {
            let g = AbelianGroup::new(o)?;
            let b = parse_bichar(bichar.as_deref().unwrap_or("trivial"), &g, tol)?;
            (twist_quantum_set(&b)?.set().clone(), SetDoc::twisted(&b))
        }
        _ => return Err(CliError::Input("give a file, --blocks, or --orders with --bichar".into())),
    };
    let rep = verify_frobenius(&set, tol);
    let mut m = Metadata::new();
    m.insert("dim".into(), set.dim().to_string());
    if let Some(b) = &desc.blocks {
        m.insert("blocks".into(), join(b));
    }
    if let Some(g) = &desc.group {
        m.insert("orders".into(), join(&g.orders));
    }
    Ok((Document::report(&rep, None, m), rep.all_passed()))
}

fn diagonal(op: &Operator, tol: f64) -> Option<Vec<qgraph_core::C64>> {
    let m = op.matrix();
    let scale = m.max_abs().max(1.0);
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if i != j && m[(i, j)].norm() > tol * scale {
                return None;
            }
        }
    }
    Some(m.diag())
}

fn graph_check(doc: &Document, tol: f64) -> Result<(Document, bool), CliError> {
    let g = load_graph(doc, tol)?;
    let a = &g.op;
    let thr = tol * a.max_abs().max(1.0);
    let mut rep = Report::new(if g.weighted { "weighted quantum graph" } else { "quantum graph" });
    let fast = match (&g.bichar, diagonal(a, tol)) {
        (Some(b), Some(x)) if a.domain().dim() > GENERIC_SCHUR_LIMIT => Some((b.group().clone(), x)),
        _ => None,
    };
    let report: GraphReport = match fast {
        Some((group, x)) => {
            if !g.weighted {
                rep.record("schur-idempotent", max_diff(&diagonal_schur(&group, &x, &x), &x), thr);
            }
            rep.record("schur-real", max_diff(&diagonal_schur_star(&group, &x), &x), thr);
            diagonal_report(&group, &x, tol)?
        }
        None => {
            if !g.weighted {
                rep.record("schur-idempotent", schur(a, a)?.max_diff(a), thr);
            }
            rep.record("schur-real", schur_star(a)?.max_diff(a), thr);
            graph_report(a, tol)?
        }
    };
    if g.weighted {
        rep.record_flag("positive-edge-projection", report.is_weighted_graph);
    }
    let passed = rep.all_passed();
    Ok((Document::report(&rep, Some(report), g.metadata), passed))
}

fn rotate_doc(doc: Document, tol: f64) -> Result<Document, CliError> {
    match doc {
        Document::QuantumGraph { .. } => {
            let g = load_graph(&doc, tol)?;
            Document::edge_projection(&rotate(&g.op)?, g.metadata)
        }
        Document::EdgeProjection { set, blocks, metadata, .. } => {
            let qs = set.build(tol)?;
            let mats = blocks
                .iter()
                .enumerate()
                .map(|(i, row)| row.iter().enumerate().map(|(j, b)| matrix(b, &format!("block ({i}, {j})"))).collect())
                .collect::<Result<Vec<Vec<_>>, _>>()?;
            let p = EdgeProjection::new(qs, mats)?;
            let weighted = !p.is_projection(tol);
            Ok(Document::graph(set, &unrotate(&p)?, weighted, metadata))
        }
        other => Err(CliError::Input(format!("cannot rotate a {} document", other.kind()))),
    }
}

fn cayley(orders: &[u64], gens: &str, spectrum: bool) -> Result<Document, CliError> {
    let g = AbelianGroup::new(orders)?;
    let s = parse_generators(&g, gens)?;
    let a = classical_cayley(&g, &s)?;
    let m = meta(&[("orders", join(orders)), ("gens", gens.to_string())]);
    let mut doc = Document::graph(SetDoc::blocks(&vec![1; g.size()]), &a, false, m);
    if spectrum {
        attach_spectrum(&mut doc, cayley_spectrum(&g, &s)?);
    }
    Ok(doc)
}

fn attach_spectrum(doc: &mut Document, values: Vec<qgraph_core::C64>) {
    if let Document::QuantumGraph { spectrum, .. } = doc {
        *spectrum = Some(values);
    }
}

fn twist(orders: &[u64], gens: &str, bichar: &str, spectrum: bool, tol: f64) -> Result<Document, CliError> {
    let g = AbelianGroup::new(orders)?;
    let b = parse_bichar(bichar, &g, tol)?;
    let s = parse_generators(&g, gens)?;
    let ts = twist_quantum_set(&b)?;
    let a = twisted_cayley(&ts, &s)?;
    let label = if ["trivial", "clifford", "weyl"].contains(&bichar) { bichar.to_string() } else { "custom".into() };
    let m = meta(&[("orders", join(orders)), ("gens", gens.to_string()), ("bicharacter", label)]);
    let mut doc = Document::graph(SetDoc::twisted(&b), &a, false, m);
    if spectrum {
        attach_spectrum(&mut doc, cayley_spectrum(&g, &s)?);
    }
    Ok(doc)
}

fn need(v: Option<usize>, flag: &str, preset: &str) -> Result<usize, CliError> {
    v.ok_or_else(|| CliError::Input(format!("preset {preset} needs --{flag}")))
}

fn catalog(
    preset: &str,
    n: Option<usize>,
    m: Option<usize>,
    t: Option<f64>,
    dim: Option<usize>,
    gens: Option<&str>,
    seed: u64,
) -> Result<Document, CliError> {
    let mut md = meta(&[("preset", preset.to_string())]);
    let m2 = |a: Operator, md: Metadata| Document::graph(SetDoc::blocks(&[2]), &a, false, md);
    let cube = |kind: CubeKind, md: &mut Metadata| -> Result<Document, CliError> {
        let n = need(n, "n", preset)?;
        md.insert("n".into(), n.to_string());
        let (ts, a) = cube_graph(kind, n)?;
        Ok(Document::graph(SetDoc::twisted(ts.bicharacter()), &a, false, md.clone()))
    };
    match preset {
        "m2-empty" => Ok(m2(m2_graph(0)?, md)),
        "m2-edge" => Ok(m2(m2_graph(1)?, md)),
        "m2-two" => Ok(m2(m2_graph(2)?, md)),
        "m2-full" => Ok(m2(m2_graph(3)?, md)),
        "m2-partial" => {
            let (m, t) = (m.unwrap_or(1), t.unwrap_or(FRAC_PI_4));
            md.insert("m".into(), m.to_string());
            md.insert("t".into(), t.to_string());
            Ok(m2(m2_partial_family(m, t)?, md))
        }
        "m2-random" => {
            let dim = need(dim, "dim", preset)?;
            md.insert("dim".into(), dim.to_string());
            md.insert("seed".into(), seed.to_string());
            let v = random_su2_subspace(dim, &mut rng(seed))?;
            Ok(m2(graph_from_subspace(2, &v, 1e-9)?, md))
        }
        "anticommutative-square" => Ok(m2(anticommutative_square()?, md)),
        "gell-mann" => Ok(Document::graph(SetDoc::blocks(&[3]), &gell_mann_graph()?, false, md)),
        "rook" => {
            let n = need(n, "n", preset)? as u64;
            md.insert("n".into(), n.to_string());
            let ts = weyl_set(n)?;
            let a = twisted_cayley(&ts, &rook_generators(n))?;
            Ok(Document::graph(SetDoc::twisted(ts.bicharacter()), &a, false, md))
        }
        "hypercube" => cube(CubeKind::Hypercube, &mut md),
        "folded" => cube(CubeKind::Folded, &mut md),
        "squared" => cube(CubeKind::Squared, &mut md),
        "cube" => {
            let n = need(n, "n", preset)?;
            let gens = gens.ok_or_else(|| CliError::Input("preset cube needs --gens".into()))?;
            md.insert("n".into(), n.to_string());
            md.insert("gens".into(), gens.to_string());
            let ts = clifford_set(n)?;
            let a = twisted_cayley(&ts, &parse_generators(ts.group(), gens)?)?;
            Ok(Document::graph(SetDoc::twisted(ts.bicharacter()), &a, false, md))
        }
        "diagonal-embedding" => {
            let n = need(n, "n", preset)?;
            md.insert("n".into(), n.to_string());
            let iota = BlockMap::diagonal_embedding(n)?;
            Ok(Document::map(SetDoc::blocks(&vec![1; n]), SetDoc::blocks(&[n]), iota.operator(), md))
        }
        "folded-embedding" => {
            let n = need(n, "n", preset)?;
            md.insert("n".into(), n.to_string());
            let (small, big, op) = folded_embedding(n)?;
            Ok(Document::map(SetDoc::twisted(small.bicharacter()), SetDoc::twisted(big.bicharacter()), &op, md))
        }
        "weyl-isomorphism" => {
            let n = need(n, "n", preset)?;
            md.insert("n".into(), n.to_string());
            let ts = weyl_set(n as u64)?;
            let phi = weyl_isomorphism(&ts)?;
            Ok(Document::map(SetDoc::twisted(ts.bicharacter()), SetDoc::blocks(&[n]), &phi, md))
        }
        "su2-conjugation" => {
            md.insert("seed".into(), seed.to_string());
            let u = random_su2(&mut rng(seed));
            Ok(Document::map(SetDoc::blocks(&[2]), SetDoc::blocks(&[2]), &conjugation_map(&u)?, md))
        }
        "clifford-bicharacter" | "weyl-bicharacter" => {
            let n = need(n, "n", preset)?;
            md.insert("n".into(), n.to_string());
            let b = if preset == "weyl-bicharacter" { Bicharacter::weyl(n as u64)? } else { Bicharacter::clifford(n)? };
            Ok(Document::Bicharacter {
                schema_version: SCHEMA_VERSION,
                group: GroupDoc { orders: b.group().orders().to_vec() },
                values: b.values().to_vec(),
                metadata: md,
            })
        }
        other => Err(CliError::Input(format!("unknown preset {other:?}; try `catalog list`"))),
    }
}

fn quotient(graph: &Document, map: &Document, tol: f64) -> Result<(Document, bool), CliError> {
    let g = load_graph(graph, tol)?;
    let (op, domain, _) = load_map(map, tol)?;
    match BlockMap::embedding(op.clone(), tol) {
        Ok(iota) => {
            let q = quotient_graph(&g.op, &iota)?;
            Ok((Document::graph(domain, q.adjacency(), true, g.metadata), true))
        }
        Err(_) => {
            let mut rep = check_star_homomorphism(&op, true, tol);
            rep.title = "quotient map".into();
            Ok((Document::report(&rep, None, Metadata::new()), false))
        }
    }
}

fn subgraph(graph: &Document, keep: &[usize], tol: f64) -> Result<Document, CliError> {
    let g = load_graph(graph, tol)?;
    let blocks = g.set.blocks.as_ref().ok_or_else(|| CliError::Input("subgraphs need a set given by blocks".into()))?;
    let a = induced_subgraph(&g.op, keep)?;
    let sub: Vec<usize> = keep.iter().map(|&k| blocks[k]).collect();
    let mut md = g.metadata;
    md.insert("kept_blocks".into(), join(keep));
    Ok(Document::graph(SetDoc::blocks(&sub), &a, g.weighted, md))
}

fn obstruct(graph: &Document, max_dim: Option<usize>, tol: f64) -> Result<Document, CliError> {
    let g = load_graph(graph, tol)?;
    match find_obstruction(&g.op, max_dim)? {
        Outcome::Certificate(c) => {
            let recheck = c.recheck()?;
            Ok(Document::Certificate {
                schema_version: SCHEMA_VERSION,
                set: g.set,
                first_trace: c.first_trace.clone(),
                second_trace: c.second_trace.clone(),
                residual: c.residual,
                threshold: c.threshold,
                first: rows(c.first.matrix()),
                second: rows(c.second.matrix()),
                metadata: meta(&[("rechecked_residual", format!("{recheck:e}"))]),
            })
        }
        Outcome::Inconclusive { closure_dim, complete } => {
            let rep = Report::new("obstruction search");
            let md = meta(&[
                ("outcome", "inconclusive".into()),
                ("closure_dim", closure_dim.to_string()),
                ("complete", complete.to_string()),
            ]);
            Ok(Document::report(&rep, None, md))
        }
    }
}

fn iso_check(g1: &Document, g2: &Document, map: &Document, tol: f64) -> Result<(Document, bool), CliError> {
    let a1 = load_graph(g1, tol)?;
    let a2 = load_graph(g2, tol)?;
    let (phi, _, _) = load_map(map, tol)?;
    let rep = check_isomorphism(&phi, &a1.op, &a2.op, tol)?;
    let passed = rep.all_passed();
    Ok((Document::report(&rep, None, Metadata::new()), passed))
}
