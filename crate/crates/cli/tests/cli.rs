use std::path::PathBuf;
use std::process::{Command, Output};

use cevian_core::ceva::{chain_break_at, CevaInput};
use cevian_core::ratcore::parse_rat;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "scenarios", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cevian"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn converse_reports_the_triple() {
    let o = run(&["ceva", "converse", "1/2", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("(x, y, xy): (1/2, 3, 3/2)"));
}

#[test]
fn square_with_new_zero_has_no_cevian_operation() {
    let o = run(&["lattice", "cevian", &fixture("square_plus_zero.lat")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("no Cevian operation exists"));
}

#[test]
fn chain_lattice_gets_a_table() {
    let o = run(&["lattice", "cevian", &fixture("three_chain.lat")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("b \\ a = b"));
}

#[test]
fn eta_squares_are_listed() {
    let o = run(&["diagram", "verify", "eta", "--depth", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.matches(", verified").count(), 12);
    assert!(out.contains("⟦x1 - 2x3 > 0⟧₃: true"));
}

#[test]
fn diagram_d_commutes() {
    let o = run(&["diagram", "verify", "D"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("commutative: true"));
}

#[test]
fn candidate_is_rejected_with_a_refutation() {
    let o = run(&["lemma43", "check", &fixture("basic_family.l43")]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("candidate rejected"));
    assert!(out.contains("lambda = 1, mu = 1"));
}

#[test]
fn chain_witness_replays() {
    let o = run(&["--report", "json", "ceva", "check", &fixture("broken_chain.ceva")]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let lines = v["details"]["verdict"].as_array().unwrap();
    let w = lines
        .iter()
        .filter_map(|l| l.as_str()?.strip_prefix("witness = "))
        .next()
        .unwrap();
    let point: Vec<_> = w
        .trim_matches(|c| c == '(' || c == ')')
        .split(", ")
        .map(|s| parse_rat(s).unwrap())
        .collect();
    let src = std::fs::read_to_string(fixture("broken_chain.ceva")).unwrap();
    let input = CevaInput::parse(&src).unwrap();
    assert!(chain_break_at(&input, &point).is_some());
}

#[test]
fn reports_do_not_depend_on_threads() {
    let args = ["ceva", "search", "--pool", "1/2,1,2,inf", "--budget", "400"];
    let one = run(&[&["--threads", "1", "--report", "json"][..], &args[..]].concat());
    let four = run(&[&["--threads", "4", "--report", "json"][..], &args[..]].concat());
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
    let v: serde_json::Value = serde_json::from_slice(&one.stdout).unwrap();
    assert_eq!(v["details"]["inputs"], 400);
    assert_eq!(v["exit_code"], 0);
}

#[test]
fn unknown_key_is_a_positioned_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.ceva");
    std::fs::write(&path, "kind = ceva\nU12 = [0,1)\nU99 = [0,1)\n").unwrap();
    let o = run(&["ceva", "check", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(64));
    assert!(stdout(&o).contains("parse error at 3"));
}

#[test]
fn bad_usage_exits_64() {
    assert_eq!(run(&["lattice", "sort"]).status.code(), Some(64));
    assert_eq!(run(&["ceva", "converse", "x", "1"]).status.code(), Some(64));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn input_hash_is_reported() {
    let o = run(&["--report", "json", "lattice", "normal", &fixture("cube.lat")]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["input_sha256"].as_str().unwrap().len(), 64);
    assert_eq!(v["verdict"], "pass");
}

#[test]
fn cone_queries() {
    let f = fixture("wedge.cone");
    assert_eq!(run(&["cone", "subset", &f]).status.code(), Some(0));
    assert_eq!(run(&["cone", "empty", &f]).status.code(), Some(1));
    let o = run(&["cone", "join", &f]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("A ∪ B"));
}

#[test]
fn normal_morphism_condensate_is_surjective() {
    let o = run(&["condensate", &fixture("two_atoms.cond")]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("normal: true"));
    assert!(out.contains("surjective: true"));
}

#[test]
fn custom_diagram_condensate() {
    let o = run(&["condensate", &fixture("chains.cond")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("S_1 (2 elements) × S_23 (2 elements)"));
}

fn plot(args: &[&str]) -> String {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig.svg");
    let mut full = vec!["plot", "ceva"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", out.to_str().unwrap()]);
    assert_eq!(run(&full).status.code(), Some(0));
    std::fs::read_to_string(out).unwrap()
}

#[test]
fn symmetric_configuration_meets_at_the_centroid() {
    let svg = plot(&["--xy", "1", "1"]);
    assert!(svg.contains("⟨1,1,1⟩"));
    // the centroid of (60,460), (540,460), (300,60)
    assert!(svg.contains("cx=\"300\" cy=\"326.6"));
    assert!(svg.contains("approximate"));
}

#[test]
fn boundary_labels_follow_the_configuration() {
    let svg = plot(&["--xy", "1/2", "3"]);
    for label in ["⟨1,1/2,0⟩", "⟨0,1,3⟩", "⟨1,0,3/2⟩", "⟨1,1/2,3/2⟩"] {
        assert!(svg.contains(label), "{label}");
    }
    assert_eq!(svg, plot(&["--xy", "1/2", "3"]));
}

#[test]
fn empty_sets_draw_no_shading() {
    let svg = plot(&[&fixture("empty.ceva")]);
    assert!(!svg.contains("fill-opacity"));
    assert!(!svg.contains("<circle"));
}
