use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};
use std::sync::atomic::{AtomicUsize, Ordering};

use serde_json::Value;

fn qgraph(args: &[&str], stdin: Option<&str>, env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_qgraph"));
    cmd.args(args).env_remove("QG_TOL").stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped());
    for (k, v) in env {
        cmd.env(k, v);
    }
    let mut child = cmd.spawn().expect("binary runs");
    {
        let mut pipe = child.stdin.take().unwrap();
        if let Some(text) = stdin {
            pipe.write_all(text.as_bytes()).unwrap();
        }
    }
    child.wait_with_output().unwrap()
}

fn run(args: &[&str]) -> Output {
    qgraph(args, None, &[])
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

/// Runs with `--json` and asserts success.
fn emit(args: &[&str]) -> String {
    let mut all = args.to_vec();
    all.push("--json");
    let o = run(&all);
    assert_eq!(code(&o), 0, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    stdout(&o)
}

static COUNTER: AtomicUsize = AtomicUsize::new(0);

fn temp(text: &str) -> PathBuf {
    let k = COUNTER.fetch_add(1, Ordering::SeqCst);
    let path = std::env::temp_dir().join(format!("qgraph-cli-test-{}-{k}.json", std::process::id()));
    std::fs::write(&path, text).unwrap();
    path
}

fn pipe(first: &[&str], second: &[&str]) -> Output {
    let text = emit(first);
    qgraph(second, Some(&text), &[])
}

#[test]
fn square_pipeline() {
    let o = pipe(&["catalog", "anticommutative-square"], &["graph-check", "-", "--json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["kind"], "report");
    assert_eq!(v["graph"]["is_simple"], true);
    assert_eq!(v["graph"]["vertices"], 4);
    assert!((v["graph"]["edges"][0].as_f64().unwrap() - 8.0).abs() < 1e-9);
}

#[test]
fn twisted_hypercube_pipeline() {
    let o = pipe(
        &["twist", "--orders", "2,2,2", "--gens", "100;010;001", "--bichar", "clifford"],
        &["graph-check", "-", "--json"],
    );
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["graph"]["vertices"], 8);
    assert!((v["graph"]["regular_degree"][0].as_f64().unwrap() - 3.0).abs() < 1e-9);
    assert_eq!(v["graph"]["is_simple"], true);
}

#[test]
fn gell_mann_obstruction_gives_a_certificate() {
    let o = pipe(&["catalog", "gell-mann"], &["obstruct", "-", "--json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["kind"], "certificate");
    assert!(v["residual"].as_f64().unwrap() > v["threshold"].as_f64().unwrap());
}

#[test]
fn square_obstruction_is_inconclusive() {
    let o = pipe(&["catalog", "anticommutative-square"], &["obstruct", "-", "--json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["kind"], "report");
    assert_eq!(v["metadata"]["outcome"], "inconclusive");
}

#[test]
fn emitted_documents_are_canonical() {
    let sources: Vec<Vec<&str>> = vec![
        vec!["catalog", "m2-partial"],
        vec!["catalog", "rook", "--n", "3"],
        vec!["catalog", "folded-embedding", "--n", "2"],
        vec!["catalog", "weyl-bicharacter", "--n", "3"],
        vec!["cayley", "--orders", "6", "--gens", "1;5", "--spectrum"],
        vec!["set-check", "--blocks", "1,2"],
    ];
    for args in sources {
        let text = emit(&args);
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["schema_version"], 1);
        let again = serde_json::to_string(&v).unwrap() + "\n";
        assert_eq!(again, text, "{args:?}");
    }
}

#[test]
fn rotation_round_trip() {
    let graph = emit(&["catalog", "m2-two"]);
    let proj = qgraph(&["rotate", "-", "--json"], Some(&graph), &[]);
    assert_eq!(code(&proj), 0);
    assert_eq!(json(&proj)["kind"], "edge-projection");
    let back = qgraph(&["rotate", "-", "--json"], Some(&stdout(&proj)), &[]);
    assert_eq!(code(&back), 0);
    let (a, b): (Value, Value) = (serde_json::from_str(&graph).unwrap(), json(&back));
    let flat = |v: &Value| -> Vec<f64> {
        v["adjacency"]
            .as_array()
            .unwrap()
            .iter()
            .flat_map(|r| r.as_array().unwrap().clone())
            .flat_map(|z| z.as_array().unwrap().clone())
            .map(|x| x.as_f64().unwrap())
            .collect()
    };
    for (x, y) in flat(&a).iter().zip(flat(&b)) {
        assert!((x - y).abs() < 1e-12);
    }
}

#[test]
fn seeds_are_reproducible() {
    let a = emit(&["catalog", "m2-random", "--dim", "2", "--seed", "5"]);
    let b = emit(&["catalog", "m2-random", "--dim", "2", "--seed", "5"]);
    let c = emit(&["catalog", "m2-random", "--dim", "2", "--seed", "6"]);
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn tolerance_flag_beats_environment() {
    let graph = emit(&["catalog", "anticommutative-square"]);
    let strict = qgraph(&["graph-check", "-"], Some(&graph), &[("QG_TOL", "1e-30")]);
    assert_eq!(code(&strict), 1, "{}", stdout(&strict));
    let relaxed = qgraph(&["graph-check", "-", "--tol", "1e-9"], Some(&graph), &[("QG_TOL", "1e-30")]);
    assert_eq!(code(&relaxed), 0);
}

#[test]
fn malformed_json_is_a_usage_error_with_position() {
    let o = qgraph(&["graph-check", "-"], Some("{\"kind\": \"quantum-graph\",\n  \"set\": ]"), &[]);
    assert_eq!(code(&o), 2);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&run(&["catalog", "no-such-preset"])), 2);
    assert_eq!(code(&run(&["catalog", "rook"])), 2);
    assert_eq!(code(&run(&["cayley", "--orders", "3", "--gens", "7"])), 2);
    assert_eq!(code(&run(&["twist", "--orders", "3,3", "--bichar", "clifford"])), 2);
    assert_eq!(code(&run(&["graph-check", "/nonexistent/file.json"])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
    let twisted = emit(&["catalog", "hypercube", "--n", "2"]);
    assert_eq!(code(&qgraph(&["subgraph", "-", "--keep", "0"], Some(&twisted), &[])), 2);
}

#[test]
fn set_checks() {
    assert_eq!(code(&run(&["set-check", "--blocks", "1,2,3"])), 0);
    assert_eq!(code(&run(&["set-check", "--orders", "3,3", "--bichar", "weyl"])), 0);
    let bichar = temp(&emit(&["catalog", "clifford-bicharacter", "--n", "3"]));
    let o = run(&["set-check", "--orders", "2,2,2", "--bichar", bichar.to_str().unwrap(), "--json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["passed"], true);
}

const EXAMPLE_1: &str = r#"{"kind": "quantum-graph", "schema_version": 1, "set": {"blocks": [2]},
 "adjacency": [[[0.5,0],[0.5,0],[0.5,0],[0.5,0]], [[0.5,0],[-0.5,0],[0.5,0],[-0.5,0]],
               [[0.5,0],[0.5,0],[-0.5,0],[-0.5,0]], [[0.5,0],[-0.5,0],[-0.5,0],[0.5,0]]]}"#;

#[test]
fn quotient_of_the_first_example() {
    let graph = temp(EXAMPLE_1);
    let map = temp(&emit(&["catalog", "diagonal-embedding", "--n", "2"]));
    let o = run(&["quotient", graph.to_str().unwrap(), map.to_str().unwrap(), "--json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert_eq!(v["weighted"], true);
    for row in v["adjacency"].as_array().unwrap() {
        for z in row.as_array().unwrap() {
            assert!((z[0].as_f64().unwrap() - 1.0).abs() < 1e-12 && z[1].as_f64().unwrap().abs() < 1e-12);
        }
    }
    let check = run(&["graph-check", "-"]);
    assert_eq!(code(&check), 2, "stdin is empty");
    let checked = qgraph(&["graph-check", "-", "--json"], Some(&stdout(&o)), &[]);
    assert_eq!(code(&checked), 0);
    assert!((json(&checked)["graph"]["edges"][0].as_f64().unwrap() - 4.0).abs() < 1e-12);
}

#[test]
fn quotient_along_a_non_homomorphism_fails_with_a_report() {
    let graph = temp(EXAMPLE_1);
    let mut map: Value = serde_json::from_str(&emit(&["catalog", "diagonal-embedding", "--n", "2"])).unwrap();
    map["matrix"][0][0][0] = Value::from(1.0);
    let map = temp(&map.to_string());
    let o = run(&["quotient", graph.to_str().unwrap(), map.to_str().unwrap(), "--json"]);
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o)["passed"], false);
}

#[test]
fn iso_checks() {
    let rook = temp(&emit(&["catalog", "rook", "--n", "2"]));
    let square = temp(&emit(&["catalog", "anticommutative-square"]));
    let phi = temp(&emit(&["catalog", "weyl-isomorphism", "--n", "2"]));
    let o = run(&["iso-check", rook.to_str().unwrap(), square.to_str().unwrap(), phi.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));

    let edge = temp(&emit(&["catalog", "m2-edge"]));
    let two = temp(&emit(&["catalog", "m2-two"]));
    let u = temp(&emit(&["catalog", "su2-conjugation", "--seed", "3"]));
    let o = run(&["iso-check", edge.to_str().unwrap(), two.to_str().unwrap(), u.to_str().unwrap()]);
    assert_eq!(code(&o), 1);

    // the map lives on the wrong sets
    let o = run(&["iso-check", edge.to_str().unwrap(), two.to_str().unwrap(), phi.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
}

#[test]
fn induced_subgraph_of_a_classical_cycle() {
    let cycle = emit(&["cayley", "--orders", "5", "--gens", "1;4"]);
    let o = qgraph(&["subgraph", "-", "--keep", "0,1,2", "--json"], Some(&cycle), &[]);
    assert_eq!(code(&o), 0);
    let check = qgraph(&["graph-check", "-", "--json"], Some(&stdout(&o)), &[]);
    let v = json(&check);
    assert_eq!(v["graph"]["vertices"], 3);
    assert!((v["graph"]["edges"][0].as_f64().unwrap() - 4.0).abs() < 1e-12);
}

#[test]
fn large_twisted_cube_uses_the_diagonal_path() {
    let o = pipe(
        &[
            "twist",
            "--orders",
            "2,2,2,2,2,2,2",
            "--gens",
            "1000000;0100000;0010000;0001000;0000100;0000010;0000001",
            "--bichar",
            "clifford",
        ],
        &["graph-check", "-", "--json"],
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert_eq!(v["graph"]["vertices"], 128);
    assert_eq!(v["graph"]["is_simple"], true);
}

#[test]
fn tables_by_default() {
    let o = run(&["catalog", "anticommutative-square"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("quantum graph on blocks [2]"));
    let list = stdout(&run(&["catalog", "list"]));
    assert!(list.lines().any(|l| l == "gell-mann"));
}
