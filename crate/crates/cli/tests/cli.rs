use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn corpus(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/corpus").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_serrekb")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_str(&stdout(o)).expect("JSON report")
}

#[test]
fn serre_of_projective_stalk() {
    let a2 = corpus("a2_q.toml");
    for (v, label) in [("P:1", "I(1)"), ("P:2", "I(2)")] {
        let o = run(&["serre", "--algebra", a2.to_str().unwrap(), "--module", v]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        assert!(stdout(&o).contains(&format!("homotopy-equivalent to {label} stalk: pass")));
    }
}

#[test]
fn tau_of_projective_is_zero() {
    let o = run(&["tau", "--algebra", corpus("a3_q.toml").to_str().unwrap(), "--module", "P:1", "--json"]);
    assert_eq!(code(&o), 0);
    let r = json(&o);
    assert_eq!(r["result"]["tau"]["dims"], serde_json::json!([0, 0, 0]));
    assert!(r["checks"].as_array().unwrap().iter().any(|c| c["name"] == "tau of a projective is zero" && c["status"] == "pass"));
}

#[test]
fn tau_of_simple_over_dual_numbers() {
    let o = run(&["tau", "--algebra", corpus("dual_numbers_gf101.toml").to_str().unwrap(), "--module", "S:1", "--json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["result"]["tau"]["dims"], serde_json::json!([1]));
}

#[test]
fn json_reports_are_deterministic_and_versioned() {
    let k = corpus("kronecker_q.toml");
    let args = ["ar-triangle", "--algebra", k.to_str().unwrap(), "--module", "R:1", "--json", "--seed", "7"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(code(&a), 0, "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    let r = json(&a);
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["seed"], 7);
    assert_eq!(r["overall"], "pass");
    assert!(r["command"].as_str().unwrap().starts_with("ar-triangle"));
    for c in r["checks"].as_array().unwrap() {
        assert!(c["name"].is_string());
        assert!(["pass", "fail", "skip"].contains(&c["status"].as_str().unwrap()));
        assert!(c.get("witness").is_some());
    }
    assert_eq!(r["result"]["locality"]["locality"], "local");
}

#[test]
fn verify_commands_pass() {
    let n = corpus("nakayama3_q.toml");
    for property in ["duality", "defect", "nondegeneracy", "triangle-functor"] {
        let o = run(&["verify", property, "--algebra", n.to_str().unwrap(), "--module", "S:2"]);
        assert_eq!(code(&o), 0, "{property}: {}{}", stdout(&o), stderr(&o));
    }
}

#[test]
fn complex_file_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("x.json");
    // P(1) → P(2) over A₂: the minimal presentation of S₁, shifted to degrees −1, 0.
    std::fs::write(
        &path,
        r#"{"degrees": [
            {"n": -1, "module": "P:2", "d_to_next": [[[]], [[1]]]},
            {"n": 0, "module": "P:1"}
        ]}"#,
    )
    .unwrap();
    let a2 = corpus("a2_q.toml");
    for cmd in ["serre", "serre-alt", "serre-inverse", "ar-triangle"] {
        let o = run(&[cmd, "--algebra", a2.to_str().unwrap(), "--complex", path.to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{cmd}: {}{}", stdout(&o), stderr(&o));
    }
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let gf4 = dir.path().join("gf4.toml");
    std::fs::write(&gf4, "field = \"GF:4\"\nvertices = [\"1\"]\narrows = []\nmax_path_length = 1\n").unwrap();
    let o = run(&["serre", "--algebra", gf4.to_str().unwrap(), "--module", "S:1"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("not a prime"));

    let bad = dir.path().join("bad.toml");
    std::fs::write(
        &bad,
        "field = \"Q\"\nvertices = [\"1\", \"2\"]\narrows = [{ name = \"a\", from = \"1\", to = \"2\" }]\n\
         relations = [[{ coeff = 1, path = [\"a\", \"b\"] }]]\nmax_path_length = 2\n",
    )
    .unwrap();
    let o = run(&["serre", "--algebra", bad.to_str().unwrap(), "--module", "S:1"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("relations[0][0].path"));

    let o = run(&["suite", "--corpus", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 2);

    let a2 = corpus("a2_q.toml");
    let a2 = a2.to_str().unwrap();
    for args in [
        vec!["serre", "--algebra", a2],
        vec!["serre", "--algebra", a2, "--module", "nope"],
        vec!["serre", "--algebra", "/nonexistent.toml", "--module", "S:1"],
        vec!["tau", "--algebra", a2, "--complex", "/nonexistent.json"],
        vec!["frobnicate"],
        vec!["serre", "--seed", "-3"],
    ] {
        let o = run(&args);
        assert_eq!(code(&o), 2, "{args:?}");
        assert!(!stderr(&o).contains("panicked"), "{args:?}");
    }

    let broken = dir.path().join("x.json");
    std::fs::write(&broken, r#"{"degrees": [{"n": 0, "module": {"dims": [1]}}]}"#).unwrap();
    let o = run(&["serre", "--algebra", a2, "--complex", broken.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
}

#[test]
fn non_local_endomorphisms_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("x.json");
    std::fs::write(&path, r#"{"degrees": [{"n": 0, "module": {"dims": [2, 0]}}]}"#).unwrap();
    let a2 = corpus("a2_q.toml");
    let o = run(&["ar-triangle", "--algebra", a2.to_str().unwrap(), "--complex", path.to_str().unwrap()]);
    assert_eq!(code(&o), 2, "{}", stderr(&o));
    assert!(stderr(&o).contains("not certified local"));
}

#[test]
fn suite_passes_on_the_bundled_corpus() {
    let o = run(&["suite", "--seed", "42", "--json"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let r = json(&o);
    assert_eq!(r["overall"], "pass");
    assert_eq!(r["checks"].as_array().unwrap().len(), 100);
}
