use std::process::{Command, Output};

use serde_json::Value;

fn walklab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_walklab")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn summary(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let o = walklab(&all);
    (code(&o), serde_json::from_slice(&o.stdout).unwrap())
}

#[test]
fn list_and_describe() {
    let o = walklab(&["list"]);
    let text = String::from_utf8(o.stdout).unwrap();
    for id in [
        "closed-forms",
        "bounds-sandwich",
        "commute-identity",
        "grid-resistance",
        "product-theorem",
        "degseq-cover",
        "conductance-survey",
        "p-simple",
        "scheme-speedup",
        "st-connect-demo",
    ] {
        assert!(text.contains(id), "{id}");
        let d = walklab(&["describe", id]);
        assert_eq!(code(&d), 0);
        let d = String::from_utf8(d.stdout).unwrap();
        assert!(d.contains("result:") && d.contains("acceptance:"));
    }
    assert_eq!(code(&walklab(&["describe", "nope"])), 2);
}

#[test]
fn seed_is_mandatory() {
    assert_eq!(code(&walklab(&["closed-forms", "--n", "2..4"])), 2);
}

#[test]
fn closed_forms_summary() {
    let (c, s) = summary(&["closed-forms", "--n", "2..10", "--seed", "7"]);
    assert_eq!(c, 0);
    assert_eq!(s["spec"]["experiment"], "closed-forms");
    assert_eq!(s["spec"]["n"].as_array().unwrap().len(), 9);
    let checks = s["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 5);
    for c in checks {
        assert_eq!(c["passed"], true);
        for key in ["name", "observed", "expected", "tolerance"] {
            assert!(c.get(key).is_some(), "{key}");
        }
    }
    assert!(s["runtime_seconds"].as_f64().unwrap() >= 0.0);
}

#[test]
fn field_level_spec_errors() {
    let o = walklab(&["closed-forms", "--n", "2..20", "--seed", "1"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8(o.stderr).unwrap().contains("--n"));
    let o = walklab(&["grid-resistance", "--family", "cycle:5", "--seed", "1"]);
    assert_eq!(code(&o), 2);
    assert_eq!(code(&walklab(&["st-connect-demo", "--family", "bogus:3", "--seed", "1"])), 2);
    assert_eq!(code(&walklab(&["p-simple", "--trials", "0", "--seed", "1"])), 2);
}

#[test]
fn csv_is_byte_identical_on_rerun_and_across_workers() {
    let args = ["degseq-cover", "--regular", "3", "--n", "60", "--trials", "20", "--seed", "5"];
    let a = walklab(&args);
    let mut more = args.to_vec();
    more.extend(["--workers", "1"]);
    let b = walklab(&more);
    let c = walklab(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    assert!(String::from_utf8(a.stdout).unwrap().starts_with("n,trials,mean,stderr,predicted,ratio,censored\n"));
}

#[test]
fn out_directory_gets_both_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = walklab(&["grid-resistance", "--n", "2..5", "--seed", "1", "--out", out]);
    assert_eq!(code(&o), 0);
    let csv = std::fs::read_to_string(dir.path().join("grid-resistance.csv")).unwrap();
    assert_eq!(csv.lines().count(), 5);
    let json: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("grid-resistance.json")).unwrap()).unwrap();
    assert_eq!(json["checks"].as_array().unwrap().len(), 4);
}

#[test]
fn st_connect_example() {
    let (c, s) = summary(&["st-connect-demo", "--path", "32", "--runs", "200", "--seed", "3"]);
    assert_eq!(c, 0);
    assert!(s["checks"][0]["observed"].as_f64().unwrap() >= 0.45);
}

#[test]
fn product_flag_and_graph_file() {
    let (c, s) = summary(&["product-theorem", "--product", "cycle:4,cycle:8", "--trials", "50", "--seed", "2"]);
    assert_eq!(c, 0);
    assert_eq!(s["spec"]["graph"]["h"], "cycle:8");

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.txt");
    std::fs::write(&path, "4 5\n0 1 1\n1 2 2\n2 3 1\n3 0 0.5\n0 2 1\n").unwrap();
    let (c, s) = summary(&["commute-identity", "--graph-file", path.to_str().unwrap(), "--seed", "1"]);
    assert_eq!(c, 0);
    assert_eq!(s["checks"][0]["passed"], true);
}

#[test]
fn failing_check_exits_one() {
    // 10 attempts can only give multiples of 0.1, none within 0.03 of 0.135
    let (c, s) = summary(&["p-simple", "--regular", "3", "--n", "50", "--trials", "10", "--seed", "1"]);
    assert_eq!(c, 1);
    assert_eq!(s["checks"][0]["passed"], false);
}

#[test]
fn numeric_failure_exits_three() {
    // two vertices of degree 3 admit no simple graph
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.txt");
    std::fs::write(&path, "3\n3\n").unwrap();
    let o = walklab(&["degseq-cover", "--degseq", path.to_str().unwrap(), "--trials", "2", "--seed", "1"]);
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn conductance_survey_on_a_family() {
    let (c, s) = summary(&["conductance-survey", "--family", "cycle:12", "--lazy", "--seed", "1"]);
    assert_eq!(c, 0);
    assert_eq!(s["checks"].as_array().unwrap().len(), 1);
}
