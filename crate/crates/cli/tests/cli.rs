use std::fs;
use std::process::Command;

use prexp_cli::run;

fn ok(args: &[&str]) -> String {
    let mut v = vec!["prexp"];
    v.extend_from_slice(args);
    let (out, code) = run(v);
    assert_eq!(code, 0, "{out}");
    out
}

fn code(args: &[&str]) -> (String, i32) {
    let mut v = vec!["prexp"];
    v.extend_from_slice(args);
    run(v)
}

#[test]
fn expand_examples() {
    assert!(ok(&["expand", "builtin:five"]).contains("enumerated=7 predicted=7 idempotents=5"));
    assert!(ok(&["expand", "builtin:trivial"]).contains("enumerated=1 "));
    assert!(ok(&["expand", "builtin:I2"]).contains("enumerated=10 predicted=10"));
    let out = ok(&["expand", "builtin:Z3"]);
    assert!(out.contains("e-unitary: G=yes S(G)=yes"), "{out}");
}

#[test]
fn expand_respects_cap() {
    let (out, c) = code(&["expand", "builtin:I3", "--cap", "100"]);
    assert_eq!(c, 2);
    assert!(out.starts_with("error:"), "{out}");
}

#[test]
fn expand_writes_table_and_elements() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s5.txt");
    ok(&["expand", "builtin:five", "--out", path.to_str().unwrap()]);
    let table = fs::read_to_string(&path).unwrap();
    let g = prexp::InverseSemigroup::parse_cayley(&table).unwrap();
    assert_eq!(g.len(), 7);
    let elems = fs::read_to_string(dir.path().join("s5.txt.elems")).unwrap();
    assert_eq!(elems.lines().count(), 7);
    assert!(elems.contains("({e,s}, s)"), "{elems}");
    // the written table is itself a valid input
    assert!(ok(&["expand", path.to_str().unwrap()]).contains("|G|=7"));
}

#[test]
fn reduce_examples() {
    assert_eq!(ok(&["reduce", "builtin:five", "[s][s]"]), "eps{0}[0]\n");
    assert_eq!(ok(&["reduce", "builtin:five", "[e]"]), "eps{e}[e]\n");
    // st = e in this semigroup
    assert_eq!(ok(&["reduce", "builtin:five", "[s][t][t*]"]), ok(&["reduce", "builtin:five", "[e][t*]"]));
    let traced = ok(&["reduce", "builtin:five", "[s][t][s]", "--trace"]);
    assert!(traced.starts_with("R3: [s][t][s] => "), "{traced}");
    assert!(traced.ends_with("eps{e,s}[s]\n"));
}

#[test]
fn reduce_errors() {
    let (out, c) = code(&["reduce", "builtin:five", "[q]"]);
    assert_eq!(c, 2);
    assert!(out.contains("unknown element"), "{out}");
    let (out, c) = code(&["reduce", "builtin:five", "[s"]);
    assert_eq!(c, 2);
    assert!(out.contains("parse error"), "{out}");
    let (_, c) = code(&["reduce", "builtin:five", "[s][t][s]", "--trace", "--max-steps", "2"]);
    assert_eq!(c, 2);
}

#[test]
fn count_and_filters() {
    assert_eq!(ok(&["count", "builtin:I3"]), "|G|=34 predicted=473 idempotents=141\n");
    let out = ok(&["filters", "builtin:five"]);
    assert!(out.lines().any(|l| l == "{e,s}"));
    assert!(out.ends_with("filters=5\n"));
}

#[test]
fn verify_filters() {
    let out = ok(&["verify", "filters", "builtin:five", "--set", "{e,s}"]);
    assert!(out.contains("PASS filter {e,s}"));
    let (out, c) = code(&["verify", "filters", "builtin:five", "--set", "{s}"]);
    assert_eq!(c, 1);
    assert!(out.contains("FAIL filter {s}"));
}

#[test]
fn verify_matrix_models() {
    let out = ok(&["verify", "fell", "builtin:five"]);
    assert!(out.contains("PASS expanded-saturated") && !out.contains("FAIL"));
    ok(&["verify", "fell", "builtin:z2"]);
    let (out, c) = code(&["verify", "fell", "builtin:five-corrupt"]);
    assert_eq!(c, 1);
    assert!(out.contains("FAIL product-inclusion"));
    ok(&["verify", "twisted", "builtin:five"]);
    ok(&["verify", "twisted", "builtin:five-twisted"]);
    let (out, c) = code(&["verify", "twisted", "builtin:five", "--perturb", "s,f,0.1"]);
    assert_eq!(c, 1);
    assert!(out.contains("FAIL axiom-iv"), "{out}");
    let (_, c) = code(&["verify", "twisted", "builtin:five", "--tol", "0.5"]);
    assert_eq!(c, 2);
}

#[test]
fn verify_lift_canonical() {
    let out = ok(&["verify", "lift", "builtin:I2"]);
    assert!(out.contains("INFO separation elements=10 filters=7"), "{out}");
}

#[test]
fn file_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.txt");
    fs::write(&g, prexp::catalog::five_element().to_cayley_string()).unwrap();
    let gp = g.to_str().unwrap();

    let map = dir.path().join("id.map");
    fs::write(&map, "0 -> 0\ne -> e\nf -> f\ns -> s\nt -> t\n").unwrap();
    let out = ok(&["verify", "partial-hom", gp, gp, map.to_str().unwrap()]);
    assert!(out.contains("PASS axiom-i") && out.contains("PASS dual-"), "{out}");
    // s ↦ s, t ↦ 0 breaks the axioms
    fs::write(&map, "0 -> 0\ne -> e\nf -> f\ns -> s\nt -> 0\n").unwrap();
    assert_eq!(code(&["verify", "partial-hom", gp, gp, map.to_str().unwrap()]).1, 1);

    let act = dir.path().join("act.txt");
    let canon = prexp::actions::canonical_partial_action(&prexp::catalog::five_element()).unwrap();
    fs::write(&act, canon.action.to_doc_string(&prexp::catalog::five_element())).unwrap();
    ok(&["verify", "partial-action", gp, act.to_str().unwrap()]);
    ok(&["verify", "lift", gp, act.to_str().unwrap()]);

    let bundle = dir.path().join("five.bundle");
    fs::write(&bundle, prexp::matrix::io::to_doc_string(&prexp::matrix::models::five_element())).unwrap();
    ok(&["verify", "fell", bundle.to_str().unwrap(), "--over", gp]);
    ok(&["verify", "twisted", bundle.to_str().unwrap(), "--over", gp]);
    assert_eq!(code(&["verify", "fell", bundle.to_str().unwrap()]).1, 2);
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["expand", "builtin:I3"][..],
        &["verify", "lift", "builtin:five"],
        &["verify", "twisted", "builtin:five-twisted"],
    ] {
        assert_eq!(code(args), code(args));
    }
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_prexp");
    let out = Command::new(bin).args(["expand", "builtin:five"]).output().unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout).unwrap().is_ascii());
    let out = Command::new(bin).args(["verify", "fell", "builtin:five-corrupt"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = Command::new(bin).args(["expand", "builtin:nope"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
