use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn xcsp3(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_xcsp3")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn check_cake_optimum() {
    for enc in ["cake_intension.xml", "cake_group.xml", "cake_sum.xml"] {
        let o = xcsp3(&["check", path(&fixture(enc)), "--solution", path(&fixture("cake_optimum.xml"))]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        assert!(stdout(&o).contains("satisfied, cost verified: 1700"));
    }
}

#[test]
fn check_detects_cost_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let sol = dir.path().join("sol.xml");
    fs::write(&sol, "<instantiation type=\"optimum\" cost=\"1650\"> <list> b c </list> <values> 2 2 </values> </instantiation>").unwrap();
    let o = xcsp3(&["check", path(&fixture("cake_sum.xml")), "--solution", path(&sol)]);
    assert_eq!(o.status.code(), Some(10));
    assert!(stdout(&o).contains("1650"));
}

#[test]
fn check_violated_and_incomplete() {
    let o = xcsp3(&[
        "check",
        path(&fixture("toy.xml")),
        "--solution",
        path(&fixture("toy_zeros.txt")),
        "--vars",
        "x y z",
    ]);
    assert_eq!(o.status.code(), Some(10));
    // only the y/z table rejects all zeros
    assert_eq!(stdout(&o).trim(), "violated: #2");

    let dir = tempfile::tempdir().unwrap();
    let sol = dir.path().join("partial.xml");
    fs::write(&sol, "<instantiation type=\"solution\"> <list> x y </list> <values> 0 0 </values> </instantiation>").unwrap();
    let o = xcsp3(&["check", path(&fixture("toy.xml")), "--solution", path(&sol)]);
    assert_eq!(o.status.code(), Some(11));
    assert!(stdout(&o).contains("z"));
}

#[test]
fn useless_variable_forms_all_check() {
    for f in ["useless_sol_listed.xml", "useless_sol_star.xml", "useless_sol_value.xml"] {
        let o = xcsp3(&["check", path(&fixture("useless.xml")), "--solution", path(&fixture(f))]);
        assert_eq!(o.status.code(), Some(0), "{f}: {}", stderr(&o));
    }
}

#[test]
fn solve_toy_count() {
    let o = xcsp3(&["solve", path(&fixture("toy.xml")), "--count"]);
    assert_eq!(o.status.code(), Some(20));
    assert!(stdout(&o).lines().any(|l| l == "solutions=0"));
}

#[test]
fn solve_output_checks_back() {
    let dir = tempfile::tempdir().unwrap();
    for f in ["cake_sum.xml", "langford.xml", "magic_square.xml", "useless.xml", "mdd.xml"] {
        let o = xcsp3(&["solve", path(&fixture(f))]);
        assert_eq!(o.status.code(), Some(0), "{f}");
        let out = stdout(&o);
        assert!(out.starts_with("<instantiation type=\""), "{out}");
        let sol = dir.path().join("sol.xml");
        fs::write(&sol, &out).unwrap();
        let c = xcsp3(&["check", path(&fixture(f)), "--solution", path(&sol)]);
        assert_eq!(c.status.code(), Some(0), "{f}: {}{}", stdout(&c), stderr(&c));
    }
    let o = xcsp3(&["solve", path(&fixture("cake_group.xml"))]);
    assert!(stdout(&o).starts_with("<instantiation type=\"optimum\" cost=\"1700\">"));
}

#[test]
fn solve_limits() {
    let o = xcsp3(&["solve", path(&fixture("magic_square.xml")), "--count", "--node-limit", "10"]);
    assert_eq!(o.status.code(), Some(21));
    assert!(stdout(&o).contains("status=LIMIT"));
    let o = xcsp3(&["solve", path(&fixture("langford.xml")), "--max-solutions", "5"]);
    assert_eq!(stdout(&o).matches("<instantiation").count(), 2);
}

#[test]
fn dropping_redundant_constraints_keeps_status() {
    let f = fixture("magic_square_redundant.xml");
    let with = xcsp3(&["solve", path(&f), "--count"]);
    let without = xcsp3(&["solve", path(&f), "--count", "--drop-class", "redundant-constraints"]);
    assert_eq!(with.status.code(), Some(0));
    assert_eq!(with.status.code(), without.status.code());
    let count = |o: &Output| stdout(o).lines().find(|l| l.starts_with("solutions=")).unwrap().to_string();
    assert_eq!(count(&with), "solutions=8");
    assert_eq!(count(&without), "solutions=8");
    let stats = xcsp3(&["stats", path(&f), "--drop-class", "redundant-constraints"]);
    assert!(stdout(&stats).lines().any(|l| l == "constraints=9"));
}

#[test]
fn decision_only_search() {
    let o = xcsp3(&["solve", path(&fixture("magic_square_redundant.xml")), "--decision-only", "--count"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("solutions=8"));
    let o = xcsp3(&["solve", path(&fixture("toy.xml")), "--decision-only"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("decision"));
}

#[test]
fn validate_writes_canonical_form() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("flat.xml");
    let o = xcsp3(&["validate", path(&fixture("latin_compact.xml")), "--canonical-out", path(&out)]);
    assert_eq!(o.status.code(), Some(0));
    let report = stdout(&o);
    assert!(report.contains("variables=9"));
    assert!(report.contains("constraints.allDifferent=6"));
    assert!(report.contains("objective=none"));
    let flat = fs::read_to_string(&out).unwrap();
    assert!(!flat.contains("<group"));
    let again = xcsp3(&["validate", path(&out)]);
    assert_eq!(stdout(&again), report);
}

#[test]
fn stats_are_key_value_lines() {
    let o = xcsp3(&["stats", path(&fixture("cake_sum.xml"))]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for line in out.lines() {
        let (k, v) = line.split_once('=').unwrap();
        assert!(!k.is_empty() && !v.is_empty(), "{line}");
    }
    for key in ["variables=2", "domain.min_size=100", "domain.max_size=100", "constraints.sum=5", "arity.2=3", "arity.1=2", "objective=maximize sum"] {
        assert!(out.lines().any(|l| l == key), "{key} in\n{out}");
    }
}

#[test]
fn lenient_mode_skips_unknown_constraints() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("k.xml");
    fs::write(
        &f,
        r#"<instance format="XCSP3" type="CSP">
  <variables> <var id="x"> 0..3 </var> <var id="y"> 0..3 </var> </variables>
  <constraints>
    <intension> lt(x,y) </intension>
    <knapsack> <list> x y </list> </knapsack>
  </constraints>
</instance>"#,
    )
    .unwrap();
    let strict = xcsp3(&["validate", path(&f)]);
    assert_eq!(strict.status.code(), Some(2));
    assert!(stderr(&strict).starts_with("error[unknown-element]: /instance/constraints/knapsack"));
    let lenient = xcsp3(&["validate", path(&f), "--lenient"]);
    assert_eq!(lenient.status.code(), Some(0));
    assert!(stderr(&lenient).contains("knapsack"));
    assert!(stdout(&lenient).contains("constraints=1"));
}

#[test]
fn usage_errors_exit_3() {
    assert_eq!(xcsp3(&[]).status.code(), Some(3));
    assert_eq!(xcsp3(&["frobnicate"]).status.code(), Some(3));
    assert_eq!(xcsp3(&["check", path(&fixture("toy.xml"))]).status.code(), Some(3));
    assert_eq!(xcsp3(&["validate", "a.xml", "--strict", "--lenient"]).status.code(), Some(3));
    assert_eq!(xcsp3(&["solve", path(&fixture("toy.xml")), "--optimize"]).status.code(), Some(3));
    assert_eq!(xcsp3(&["--help"]).status.code(), Some(0));
}

#[test]
fn missing_file_is_an_input_error() {
    let o = xcsp3(&["validate", "/nonexistent/instance.xml"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr(&o).lines().count(), 1);
}
