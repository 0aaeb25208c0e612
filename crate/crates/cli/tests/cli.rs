use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name).to_str().unwrap().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_skewalg")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn temp_problem(json: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(json.as_bytes()).unwrap();
    f
}

const TWO_POINTS: &str = r#"{
    "field": "Q",
    "algebra": {"quiver": {"vertices": ["x", "y"], "arrows": []}},
    "group": "C2",
    "action": {"paths": [{"vertices": [1, 0], "arrows": []}]}
}"#;

#[test]
fn check_accepts_the_star_example() {
    let o = run(&["check", &data("star.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("VALID"));
}

#[test]
fn check_rejects_a_cyclic_quiver() {
    let f = temp_problem(
        r#"{"field": "Q",
            "algebra": {"quiver": {"vertices": ["0", "1"],
                "arrows": [{"name": "a", "source": "0", "target": "1"}, {"name": "b", "source": "1", "target": "0"}]}}}"#,
    );
    let o = run(&["check", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("cycle") && err.contains("\"0\"") && err.contains("\"1\""), "{err}");
}

#[test]
fn check_rejects_characteristic_dividing_the_order() {
    let f = temp_problem(&TWO_POINTS.replace(r#""field": "Q""#, r#""field": {"Fp": 2}"#));
    let o = run(&["check", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8(o.stderr).unwrap().contains("characteristic 2 divides"));
}

#[test]
fn skew_dimensions() {
    let f = temp_problem(TWO_POINTS);
    assert!(stdout(&run(&["skew", f.path().to_str().unwrap()])).starts_with("dim 4\n"));
    assert!(stdout(&run(&["skew", &data("wreath.json")])).starts_with("dim 8\n"));
    assert!(stdout(&run(&["skew", &data("star.json")])).starts_with("dim 10\n"));
}

#[test]
fn skew_over_the_trivial_group_echoes_the_algebra() {
    let f = temp_problem(
        r#"{"field": "Q", "algebra": {"quiver": {"vertices": ["0", "1"], "arrows": [{"name": "a", "source": "0", "target": "1"}]}}}"#,
    );
    let o = run(&["skew", f.path().to_str().unwrap(), "--output", "json"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["dim"], 3);
    let spec: skewalg::io::AlgebraSpec = serde_json::from_value(v["algebra"].clone()).unwrap();
    let skew = spec.build(skewalg::scalars::Field::Rationals).unwrap();
    let quiver = skewalg::algebra::Quiver::from_edges(2, &[("a", 0, 1)]).unwrap();
    let a = skewalg::algebra::Algebra::path_algebra(&quiver, skewalg::scalars::Field::Rationals);
    assert_eq!((skew.table(), skew.unit()), (a.table(), a.unit()));
}

#[test]
fn verify_main_on_the_star() {
    let o = run(&["verify-main", &data("star.json")]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("VERIFIED\ndims (10, 5)\n"), "{text}");
    assert!(text.contains("multiplicities (2, 1, 1)"));
}

#[test]
fn verify_main_fails_on_the_quaternions() {
    let o = run(&["verify-main", &data("quaternion.json"), "--output", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"], "Failed");
}

#[test]
fn irr_tables() {
    let text = stdout(&run(&["irr", "S3", "--field", "Q"]));
    let rows: Vec<&str> = text.lines().skip(2).take(3).map(str::trim).collect();
    assert_eq!(rows, ["1     1     1", "1     1     1", "2     1     2"]);
    let o = run(&["irr", &data("groups/c3.json"), "--output", "json"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let dims: Vec<(u64, u64)> =
        v["rows"].as_array().unwrap().iter().map(|r| (r["dim"].as_u64().unwrap(), r["endo_dim"].as_u64().unwrap())).collect();
    assert_eq!(dims, [(1, 1), (2, 2)]);
    assert_eq!(run(&["irr", "S3", "--field", "F2"]).status.code(), Some(1));
}

#[test]
fn quiver_of_the_star() {
    let text = stdout(&run(&["quiver", &data("star.json")]));
    assert!(text.starts_with("3 vertices, 2 arrows\n"), "{text}");
    assert!(text.contains("3 = 1 + 2 (matches)"));
    let plain = stdout(&run(&["quiver", "--plain", &data("star.json")]));
    assert!(plain.starts_with("3 vertices, 2 arrows\n"));
}

#[test]
fn exhausted_budgets_exit_with_two() {
    let o = run(&["verify-main", &data("star.json"), "--degree-ceiling", "1", "--output", "json"]);
    assert_eq!(o.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["status"], "undecided");
    assert_eq!(v["kind"], "degree_ceiling");
}

#[test]
fn seeds_do_not_change_verdicts() {
    for seed in ["0", "1", "7"] {
        let o = run(&["verify-main", &data("kronecker.json"), "--seed", seed, "--field", "F13"]);
        assert_eq!(o.status.code(), Some(0));
    }
}
