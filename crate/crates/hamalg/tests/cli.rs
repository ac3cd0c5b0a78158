use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hamalg::explain;
use hamalg::fixtures;
use hamalg::report;
use hamalg::schema::{FluxEntry, ProblemFile};
use hamalg::suites::{self, Settings};
use proptest::prelude::*;
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hamalg"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write_fixtures(dir: &Path) -> PathBuf {
    let o = run(&["fixtures", "--out", dir.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    dir.to_path_buf()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn fixture_list_is_stable() {
    let expected = [
        "e1",
        "e1-doubled-mu",
        "e2",
        "e2-broken-mu",
        "e3",
        "e3-broken-structure",
        "e4",
        "e4-broken-structure",
        "e5",
        "e5-shifted-mu",
        "e6",
        "e6-broken-mu",
    ];
    assert_eq!(fixtures::names(), expected);
    let listed: Vec<String> =
        stdout(&run(&["fixtures"])).lines().map(|l| l.split_whitespace().next().unwrap().to_string()).collect();
    assert_eq!(listed, expected);
}

#[test]
fn fixture_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    write_fixtures(dir.path());
    for f in fixtures::all() {
        let text = std::fs::read_to_string(dir.path().join(format!("{}.json", f.name))).unwrap();
        assert_eq!(ProblemFile::from_json(&text).unwrap(), f.file);
        let single = stdout(&run(&["fixtures", f.name]));
        assert_eq!(single, text);
    }
}

#[test]
fn designated_suites_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    write_fixtures(dir.path());
    for f in fixtures::all() {
        let file = dir.path().join(format!("{}.json", f.name));
        let o = run(&["check", path_str(&file), "--suite", f.suite]);
        let out = stdout(&o);
        match f.failing {
            None => assert_eq!(code(&o), 0, "{}: {}", f.name, out),
            Some(check) => {
                assert_eq!(code(&o), 1, "{}: {}", f.name, out);
                assert!(out.contains(&format!("verdict: FAIL ({})", check)), "{}: {}", f.name, out);
            }
        }
    }
}

#[test]
fn mutations_fail_exactly_their_check() {
    for f in fixtures::all() {
        let pb = f.file.build().unwrap();
        let run = suites::run_suite(&pb, f.suite, Settings::default()).unwrap();
        let expected: Vec<&str> = f.failing.into_iter().collect();
        assert_eq!(run.failing(), expected, "{}", f.name);
        assert!(run.entries.iter().filter(|e| e.role == hamalg::Role::Prerequisite).all(|e| e.pass));
    }
}

#[test]
fn missing_keys_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    write_fixtures(dir.path());
    let e1 = dir.path().join("e1.json");
    let e3 = dir.path().join("e3.json");
    assert_eq!(code(&run(&["check", path_str(&e1), "--suite", "hamiltonian-poisson"])), 3);
    assert_eq!(code(&run(&["check", path_str(&e1), "--suite", "identities"])), 3);
    assert_eq!(code(&run(&["check", path_str(&e3), "--suite", "geometry"])), 3);
    assert_eq!(code(&run(&["check", path_str(&e3), "--suite", "dirac"])), 3);
    assert_eq!(code(&run(&["check", path_str(&e3), "--suite", "hamiltonian-symplectic"])), 3);
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn schema_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let good = fixtures::get("e2").unwrap().file.to_json();
    let cases = [
        ("syntax.json", good.replacen('{', "{{", 1)),
        ("unknown-key.json", good.replacen("\"chart\"", "\"extra\": 1, \"chart\"", 1)),
        ("bad-expr.json", good.replacen("\"-x\"", "\"-x +\"", 1)),
        ("unknown-coordinate.json", good.replacen("\"-x\"", "\"-z\"", 1)),
        ("not-skew.json", good.replacen("\"-1\"", "\"2\"", 1)),
        ("wrong-rank.json", good.replacen("\"(x^2 + y^2)/2\"", "\"x\", \"y\"", 1)),
    ];
    for (name, text) in cases {
        assert_ne!(text, good, "{}", name);
        let p = write(dir.path(), name, &text);
        let o = run(&["check", path_str(&p), "--suite", "axioms"]);
        assert_eq!(code(&o), 2, "{}: {}", name, String::from_utf8_lossy(&o.stderr));
    }
    let o = run(&["check", path_str(&dir.path().join("bad-expr.json"))]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("algebroid.anchor[0][1]: at byte"));
    assert_eq!(code(&run(&["check", path_str(&dir.path().join("absent.json"))])), 2);
    let e2 = write(dir.path(), "e2.json", &good);
    assert_eq!(code(&run(&["check", path_str(&e2), "--suite", "nonsense"])), 2);
}

#[test]
fn broken_momentum_is_named() {
    let dir = tempfile::tempdir().unwrap();
    write_fixtures(dir.path());
    let o = run(&["check", path_str(&dir.path().join("e2-broken-mu.json")), "--suite", "hamiltonian-poisson"]);
    assert_eq!(code(&o), 1);
    let line = stdout(&o).lines().find(|l| l.contains(" momentum-poisson ")).unwrap().to_string();
    assert!(line.trim_start().starts_with("FAIL"), "{}", line);
}

fn json_report(file: &Path, out: &Path, extra: &[&str]) -> (i32, Value) {
    let mut args = vec!["check", path_str(file), "--json", path_str(out)];
    args.extend_from_slice(extra);
    let o = run(&args);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    (code(&o), v)
}

#[test]
fn json_reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    write_fixtures(dir.path());
    let file = dir.path().join("e6.json");
    let (c1, mut a) = json_report(&file, &dir.path().join("a.json"), &["--suite", "all"]);
    let (c2, mut b) = json_report(&file, &dir.path().join("b.json"), &["--suite", "all"]);
    assert_eq!((c1, c2), (0, 0));
    assert!(report::verify_digest(&a) && report::verify_digest(&b));
    assert_eq!(a["format"], "report-v1");
    assert_eq!(a["input_sha256"], report::sha256_hex(std::fs::read(&file).unwrap().as_slice()));
    a.as_object_mut().unwrap().remove("timestamp_unix");
    b.as_object_mut().unwrap().remove("timestamp_unix");
    assert_eq!(a, b);

    let names: Vec<&str> = a["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);

    let (_, c) = json_report(&file, &dir.path().join("c.json"), &["--suite", "all", "--seed", "3"]);
    assert_ne!(a["report_sha256"], c["report_sha256"]);
}

#[test]
fn tampered_report_fails_digest() {
    let dir = tempfile::tempdir().unwrap();
    write_fixtures(dir.path());
    let (_, mut v) = json_report(&dir.path().join("e1.json"), &dir.path().join("r.json"), &["--suite", "axioms"]);
    v["verdict"] = Value::from("fail");
    assert!(!report::verify_digest(&v));
}

#[test]
fn flags_override_file_options() {
    let dir = tempfile::tempdir().unwrap();
    let mut f = fixtures::get("e3").unwrap().file;
    f.options = Some(hamalg::schema::Options { points: Some(10), seed: Some(4), ..Default::default() });
    let p = write(dir.path(), "e3.json", &f.to_json());
    let (_, v) = json_report(&p, &dir.path().join("r.json"), &["--suite", "axioms"]);
    assert_eq!(v["plan"]["points"], 10);
    assert_eq!(v["plan"]["seed"], 4);
    assert_eq!(v["plan"]["tol"], 1e-9);
    assert_eq!(v["checks"][0]["samples"], 10);
    let (_, v) = json_report(&p, &dir.path().join("r.json"), &["--suite", "axioms", "--points", "7", "--tol", "1e-6"]);
    assert_eq!(v["plan"]["points"], 7);
    assert_eq!(v["plan"]["seed"], 4);
    assert_eq!(v["plan"]["tol"], 1e-6);
}

#[test]
fn explain_known_and_unknown() {
    let o = run(&["explain", "momentum-poisson"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("ρ^i_a − π^{ij}∇_j μ_a"));
    let o = run(&["explain", "basic-curvature-sharp"]);
    assert!(stdout(&o).contains("π^{ij} S^c_{jab} μ_c"));
    assert_eq!(code(&run(&["explain", "no-such-check"])), 2);
}

#[test]
fn every_reported_check_is_explained() {
    for f in fixtures::all() {
        let pb = f.file.build().unwrap();
        let run = suites::run_suite(&pb, "all", Settings::default()).unwrap();
        for e in &run.entries {
            assert!(explain::lookup(&e.name).is_some(), "{} has no explanation", e.name);
        }
    }
    let mut names: Vec<&str> = explain::CHECKS.iter().map(|c| c.name).collect();
    names.sort();
    names.dedup();
    assert_eq!(names.len(), explain::CHECKS.len());
}

fn flux_problem(value: &str) -> ProblemFile {
    let mut f = fixtures::get("e3").unwrap().file;
    f.chart.coordinates = ["x", "y", "z", "w"].iter().map(|s| s.to_string()).collect();
    f.chart.bounds = vec![[-1.0, 1.0]; 4];
    f.algebroid.anchor = vec![vec!["1".into(), "0".into(), "0".into(), "0".into()]];
    f.algebroid.structure.clear();
    f.hflux = Some(vec![FluxEntry { i: 1, j: 2, k: 3, value: value.into() }]);
    f
}

#[test]
fn courant_suite_with_flux() {
    let closed = flux_problem("z*w");
    let run = suites::run_suite(&closed.build().unwrap(), "courant", Settings::default()).unwrap();
    assert!(!run.entry("flux-closedness").unwrap().pass);
    assert_eq!(run.failing(), ["courant-jacobi"]);
    assert!(run.entry("courant-jacobi").unwrap().report.max_residual >= 1e-3);

    let exact = flux_problem("x*y");
    let run = suites::run_suite(&exact.build().unwrap(), "courant", Settings::default()).unwrap();
    assert!(run.pass(), "{:?}", run.failing());
    assert!(run.entry("flux-closedness").unwrap().pass);
}

#[test]
fn all_suite_skips_what_it_cannot_run() {
    let pb = fixtures::get("e3").unwrap().file.build().unwrap();
    assert_eq!(suites::applicable(&pb), ["axioms", "courant", "morphisms", "graded"]);
    let run = suites::run_suite(&pb, "all", Settings::default()).unwrap();
    assert!(run.pass(), "{:?}", run.failing());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn reports_depend_only_on_input_and_flags(seed in 0u64..1000, points in 1usize..40, which in 0usize..12) {
        let f = &fixtures::all()[which];
        let pb = f.file.build().unwrap();
        let s = Settings { points, tol: 1e-9, seed };
        let a = report::to_json(&suites::run_suite(&pb, f.suite, s).unwrap(), "d", 1);
        let b = report::to_json(&suites::run_suite(&pb, f.suite, s).unwrap(), "d", 2);
        prop_assert_eq!(&a["report_sha256"], &b["report_sha256"]);
        prop_assert!(report::verify_digest(&a));
    }

    #[test]
    fn problem_files_round_trip(which in 0usize..12, tol in 1e-12f64..1e-3, points in 1usize..500) {
        let mut f = fixtures::all()[which].file.clone();
        f.options = Some(hamalg::schema::Options { tol: Some(tol), points: Some(points), seed: None, pbox: None });
        prop_assert_eq!(ProblemFile::from_json(&f.to_json()).unwrap(), f);
    }
}
