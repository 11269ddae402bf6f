use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use stablepoly::polycore::json::{matrix_to_json, poly_to_json};
use stablepoly::polycore::{MultiPoly, PolyMatrix, Vars};
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_stablepoly"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).env("STABLEPOLY_THREADS", "1").output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn poly(expr: &str, vars: &[&str]) -> MultiPoly {
    MultiPoly::parse(expr, &Vars::new(vars)).unwrap()
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn as_poly(v: &Value) -> MultiPoly {
    serde_json::from_value(v.clone()).unwrap()
}

fn q7_counterexample_file(dir: &TempDir) -> PathBuf {
    let rows = vec![vec![4, 0, 0, 0], vec![22, 64, 0, 0], vec![30, 164, 62, 0], vec![1, 24, 16, 2]];
    write(dir, "q7.json", &matrix_to_json(&PolyMatrix::from_integers(&rows).unwrap()))
}

#[test]
fn check_exit_codes() {
    let dir = TempDir::new().unwrap();
    let stable = write(&dir, "a.json", &poly_to_json(&poly("x^2+x+1", &["x"])));
    let o = run(&["check", "--class", "stable", s(&stable)]);
    assert_eq!(code(&o), 0);
    let v = stdout_json(&o);
    assert_eq!(v["verdict"]["status"], "member");
    assert_eq!(v["config"]["class"], "stable");

    let o = run(&["check", "--class", "polypos1", s(&stable)]);
    assert_eq!(code(&o), 1);
    assert_eq!(stdout_json(&o)["verdict"]["status"], "non-member");

    let bad = write(&dir, "bad.json", "{\"vars\": [\"x\"], \"terms\": ");
    let o = run(&["check", "--class", "stable", s(&bad)]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));

    let o = run(&["check", "--class", "stable", "--no-such-flag", s(&stable)]);
    assert_eq!(code(&o), 2);
}

#[test]
fn check_classes_and_tolerance() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "f.json", &poly_to_json(&poly("(x+1)*(x+2)*(x+3)", &["x"])));
    let g = write(&dir, "g.json", &poly_to_json(&poly("(x+3/2)*(x+5/2)", &["x"])));
    assert_eq!(code(&run(&["check", "--class", "real-rooted", s(&f)])), 0);
    assert_eq!(code(&run(&["check", "--class", "routh", s(&f)])), 0);
    assert_eq!(code(&run(&["check", "--class", "interlacing", s(&f), "--with", s(&g)])), 0);
    assert_eq!(code(&run(&["check", "--class", "interlacing", s(&f)])), 2);
    // an exact verdict ignores the tolerance
    let right = write(&dir, "r.json", &poly_to_json(&poly("x^2 - 1/1000000*x + 1", &["x"])));
    let o = run(&["check", "--class", "stable", "--tol", "1", s(&right)]);
    assert_eq!(code(&o), 1);
    let o = run(&["check", "--class", "stable", "--expr", "x^2+2*x+1", "--vars", "x"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn upper_refutation_is_seeded() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "u.json", &poly_to_json(&poly("x*y + 1", &["x", "y"])));
    let a = run(&["check", "--class", "upper", "--seed", "5", s(&f)]);
    let b = run(&["check", "--class", "upper", "--seed", "5", s(&f)]);
    assert_eq!(code(&a), 1);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout_json(&a)["config"]["seed"], 5);
}

#[test]
fn transform_examples() {
    let dir = TempDir::new().unwrap();
    let cube = write(&dir, "c.json", &poly_to_json(&poly("(x+1)^3", &["x"])));
    let o = run(&["transform", "--op", "q1", s(&cube)]);
    assert_eq!(code(&o), 0);
    let v = stdout_json(&o);
    assert_eq!(as_poly(&v["result"]), poly("1+6*x+6*x^2+x^3", &["x"]));
    assert_eq!(v["normalization_sign"], 1);
    assert_eq!(v["config"]["op"], "q1");

    let o = run(&["transform", "--op", "tk", "--k", "5", s(&cube)]);
    let f = poly("(x+1)^3", &["x"]);
    assert_eq!(as_poly(&stdout_json(&o)["result"]), f.hadamard(&f).unwrap());

    let three = write(&dir, "t.json", &poly_to_json(&poly("(x+y+z)^3", &["x", "y", "z"])));
    let o = run(&["transform", "--op", "q3", "--k", "3", s(&three)]);
    let v = stdout_json(&o);
    assert_eq!(as_poly(&v["raw"]), poly("-9*(x^3+y+z)", &["x", "y", "z"]));
    assert_eq!(v["normalization_sign"], -1);
}

#[test]
fn transform_bad_params() {
    let dir = TempDir::new().unwrap();
    let cube = write(&dir, "c.json", &poly_to_json(&poly("(x+1)^3", &["x"])));
    assert_eq!(code(&run(&["transform", "--op", "tk", "--k", "0", s(&cube)])), 2);
    assert_eq!(code(&run(&["transform", "--op", "nope", s(&cube)])), 2);
    assert_eq!(code(&run(&["transform", "--op", "q7", "--factors", "1:x"])), 2);
    assert_eq!(code(&run(&["transform", "--op", "q1", "--format", "csv", s(&cube)])), 2);
}

#[test]
fn outputs_read_back() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "f.json", &poly_to_json(&poly("(x+1)*(x+2)", &["x"])));
    let out = dir.path().join("q1.json");
    assert_eq!(code(&run(&["transform", "--op", "q1", s(&f), "--out", s(&out)])), 0);
    let o = run(&["check", "--class", "polypos1", s(&out)]);
    assert_eq!(code(&o), 0);

    let m = dir.path().join("q7m.json");
    assert_eq!(code(&run(&["transform", "--op", "q7", "--factors", "1:1,2:1/2,1/3:3", "--out", s(&m)])), 0);
    let o = run(&["minors", s(&m), "--order-cap", "3"]);
    assert_eq!(code(&o), 0);
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&m).unwrap()).unwrap();
    let back: PolyMatrix = serde_json::from_value(written["matrix"].clone()).unwrap();
    assert_eq!(serde_json::to_value(&back).unwrap(), written["matrix"]);
}

#[test]
fn fuzz_exit_codes() {
    let o = run(&["fuzz", "--conjecture", "q1", "--trials", "1000", "--seed", "7"]);
    assert_eq!(code(&o), 0);
    let v = stdout_json(&o);
    assert_eq!(v["trials"], 1000);
    assert_eq!(v["master_seed"], 7);
    assert_eq!(v["failures"].as_array().unwrap().len(), 0);

    let o = run(&["fuzz", "--conjecture", "q7_tp", "--generator", "psd_pencil", "--trials", "200"]);
    assert_eq!(code(&o), 1);
    let v = stdout_json(&o);
    let failures = v["failures"].as_array().unwrap();
    assert!(!failures.is_empty());
    assert!(failures.iter().all(|f| f["replay_ok"] == true));

    let o = run(&["fuzz", "--conjecture", "q1", "--trials", "0"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["tally"]["pass"], 0);

    assert_eq!(code(&run(&["fuzz", "--conjecture", "nope", "--trials", "1"])), 2);
    let o = run(&["fuzz", "--conjecture", "q2b", "--trials", "10", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).starts_with("conjecture,trials"));
}

#[test]
fn reproduce_table() {
    let a = run(&["reproduce"]);
    assert_eq!(code(&a), 0);
    let text = String::from_utf8(a.stdout.clone()).unwrap();
    for needle in ["19 monomials", "201 monomials", "7 monomials", "-1760"] {
        assert!(text.contains(needle), "{needle}");
    }
    assert!(!text.contains("FAIL"));
    let b = run(&["reproduce"]);
    assert_eq!(a.stdout, b.stdout);

    let o = run(&["reproduce", "--only", "q7_counterexample"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().count(), 2);
    assert!(text.contains("-1760"));
    assert_eq!(code(&run(&["reproduce", "--only", "nope"])), 2);

    let o = run(&["reproduce", "--format", "json"]);
    assert_eq!(stdout_json(&o)["report"]["all_pass"], true);
}

#[test]
fn minors_stream_and_verdict() {
    let dir = TempDir::new().unwrap();
    let q7 = q7_counterexample_file(&dir);
    let o = run(&["minors", s(&q7), "--order-cap", "3"]);
    assert_eq!(code(&o), 1);
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let last = lines.last().unwrap();
    assert_eq!(last["verdict"]["status"], "non-member");
    let w = &last["verdict"]["failing_minor"];
    assert_eq!(w["value"]["terms"][0]["coef"], "-1760/1");
    assert_eq!(w["row_set"], serde_json::json!([1, 2, 3]));
    assert_eq!(w["col_set"], serde_json::json!([0, 1, 2]));
    // every minor to order 3 precedes the verdict line
    assert_eq!(lines.len() - 1, 16 + 36 + 16);
    assert!(lines[..lines.len() - 1].iter().all(|l| l["order"].as_u64().unwrap() <= 3));

    let id = write(&dir, "id.json", &matrix_to_json(&PolyMatrix::from_integers(&[vec![1, 0], vec![0, 1]]).unwrap()));
    assert_eq!(code(&run(&["minors", s(&id)])), 0);
    assert_eq!(code(&run(&["minors", s(&id), "--mode", "strict"])), 1);
    assert_eq!(code(&run(&["minors", s(&id), "--order-cap", "3"])), 2);

    let bad = write(&dir, "bad.json", "[[1, 2]]");
    assert_eq!(code(&run(&["minors", s(&bad)])), 2);
}

#[test]
fn minors_polynomial_modes() {
    let dir = TempDir::new().unwrap();
    let v = Vars::new(&["x"]);
    let e = |s: &str| MultiPoly::parse(s, &v).unwrap();
    let m = PolyMatrix::from_rows(vec![vec![e("x+1"), e("1")], vec![e("0"), e("x+2")]]).unwrap();
    let p = write(&dir, "pm.json", &matrix_to_json(&m));
    assert_eq!(code(&run(&["minors", s(&p), "--mode", "stable"])), 0);
    assert_eq!(code(&run(&["minors", s(&p), "--mode", "upper"])), 0);
    assert_eq!(code(&run(&["minors", s(&p), "--mode", "weak"])), 2);
    let bad = PolyMatrix::from_rows(vec![vec![e("x-1"), e("1")], vec![e("0"), e("1")]]).unwrap();
    let p = write(&dir, "bad.json", &matrix_to_json(&bad));
    assert_eq!(code(&run(&["minors", s(&p), "--mode", "stable"])), 1);
}
