use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_silting")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is json")
}

#[test]
fn validate_shipped_models() {
    let o = run(&["validate", "--backend", "interval:2"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let o = run(&["validate", &fixture("a2.alg")]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("reduced"));
    let o = run(&["validate", "--backend", "tabulated", &fixture("lambda2.tab"), "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["passed"], true);
}

#[test]
fn corrupted_tables_fail_their_axiom() {
    let cases = [
        ("bad_split.tab", "split-sequence", "i -> n -> p"),
        ("bad_enough_projectives.tab", "enough-projectives", "j"),
        ("bad_heredity.tab", "heredity", "x"),
        ("bad_proj_inj.tab", "projective-to-projective-injective", "p"),
        ("bad_e2.tab", "e2-vanishing", "E²(x, p)"),
    ];
    for (file, axiom, witness) in cases {
        let o = run(&["validate", "--backend", "tabulated", &fixture(file), "--format", "json"]);
        assert_eq!(code(&o), 1, "{file}");
        let v = json(&o);
        let a = v["axioms"].as_array().unwrap().iter().find(|a| a["axiom"] == axiom).unwrap();
        assert_eq!(a["passed"], false, "{file}");
        assert!(a["witnesses"].as_array().unwrap().iter().any(|w| w == witness), "{file}: {a}");
    }
}

#[test]
fn input_errors() {
    assert_eq!(code(&run(&["validate", "--backend", "tabulated", &fixture("truncated.tab")])), 2);
    assert_eq!(code(&run(&["validate", "--backend", "interval:2", &fixture("a2.alg")])), 2);
    assert_eq!(code(&run(&["validate", "--backend", "interval:x"])), 2);
    assert_eq!(code(&run(&["validate"])), 2);
    assert_eq!(code(&run(&["validate", &fixture("missing.alg")])), 2);
    assert_eq!(code(&run(&["silt-poset", &fixture("a2.alg"), "--poset-budget", "0"])), 2);
    assert_eq!(code(&run(&["picgroup", &fixture("a2.alg"), "--targets", "Q8"])), 2);
}

#[test]
fn silt_posets() {
    let nodes_edges = |args: &[&str]| {
        let o = run(args);
        assert_eq!(code(&o), 0);
        let v = json(&o);
        (v["nodes"].as_array().unwrap().len(), v["hasse"].as_array().unwrap().len())
    };
    assert_eq!(nodes_edges(&["silt-poset", &fixture("dual_numbers.alg"), "--format", "json"]), (2, 1));
    assert_eq!(nodes_edges(&["silt-poset", "--backend", "interval:2", "--format", "json"]), (2, 1));
    assert_eq!(nodes_edges(&["silt-poset", &fixture("a2.alg"), "--format", "json"]), (5, 5));
    assert_eq!(nodes_edges(&["silt-poset", "--backend", "tabulated", &fixture("lambda2.tab"), "--format", "json"]), (2, 1));
}

#[test]
fn budget_gives_partial_output() {
    let o = run(&["silt-poset", &fixture("a2.alg"), "--format", "json", "--poset-budget", "3"]);
    assert_eq!(code(&o), 3);
    let v = json(&o);
    assert_eq!(v["partial"], true);
    assert!(v["max"].is_null());
}

#[test]
fn pictures() {
    let o = run(&["picture", "--backend", "interval:2", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["objects"].as_array().unwrap().len(), 5);
    assert_eq!(v["morphisms"].as_array().unwrap().len(), 14);
    let dot = stdout(&run(&["picture", &fixture("field.alg"), "--format", "dot"]));
    assert_eq!(dot.matches("->").count(), 2);
    // tabulated models carry no composition data
    assert_eq!(code(&run(&["picture", "--backend", "tabulated", &fixture("lambda2.tab")])), 1);
}

#[test]
fn output_is_deterministic() {
    let a = run(&["picture", "--backend", "interval:3", "--format", "json", "--certificates", "--threads", "1"]);
    let b = run(&["picture", "--backend", "interval:3", "--format", "json", "--certificates", "--threads", "4"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let c = run(&["picgroup", &fixture("a2.alg"), "--format", "json", "--certificates"]);
    let d = run(&["picgroup", &fixture("a2.alg"), "--format", "json", "--certificates", "--threads", "1"]);
    assert_eq!(c.stdout, d.stdout);
}

#[test]
fn picture_groups() {
    for args in [vec!["picgroup".to_string(), fixture("dual_numbers.alg")], vec!["picgroup".into(), "--backend".into(), "interval:2".into()]] {
        let mut args: Vec<&str> = args.iter().map(String::as_str).collect();
        args.extend(["--format", "json"]);
        let o = run(&args);
        assert_eq!(code(&o), 0);
        let v = json(&o);
        assert_eq!(v["agreement"], true);
        let inv = &v["poset_route"]["invariants"];
        assert_eq!(inv["abelianization"]["free_rank"], 1);
        assert_eq!(inv["hom_counts"]["S3"], 6);
    }
    // the chain relators alone do not see that covers share a reduction
    let o = run(&["picgroup", &fixture("a2.alg"), "--format", "json"]);
    assert_eq!(code(&o), 1);
    let v = json(&o);
    assert_eq!(v["agreement"], false);
    assert_eq!(v["identified_agreement"], true);
    assert_eq!(v["nerve_route"]["invariants"]["abelianization"]["free_rank"], 2);
}

#[test]
fn writes_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("poset.dot");
    let o = run(&["silt-poset", &fixture("a2.alg"), "--format", "dot", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let dot = std::fs::read_to_string(path).unwrap();
    assert!(dot.starts_with("digraph"));
}
