use assert_cmd::Command;
use serde_json::Value;

fn fqcensus() -> Command {
    let mut cmd = Command::cargo_bin("fqcensus").unwrap();
    cmd.env("FQCENSUS_FIXED_TIMING", "1");
    cmd
}

fn run(args: &[&str]) -> (i32, Vec<Value>) {
    let out = fqcensus().args(args).output().unwrap();
    let lines = String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    (out.status.code().unwrap(), lines)
}

#[test]
fn formula_values() {
    let (code, r) = run(&["formula", "psi", "--q", "2", "--n", "3", "--k", "2"]);
    assert_eq!(code, 0);
    assert_eq!(r[0]["formula_value"], "24");
    assert_eq!(r[0]["params"]["modulus"], serde_json::json!([0, 1]));
    assert_eq!(run(&["formula", "delta", "--q", "2", "--n", "2", "--k", "1"]).1[0]["predicted"], "1/2");
    assert_eq!(run(&["formula", "gauss", "--q", "2", "--n", "4", "--k", "2"]).1[0]["formula_value"], "35");
    assert_eq!(run(&["formula", "tau", "--q", "2", "--k", "2", "--l", "1", "--recurrence"]).1[0]["formula_value"], "4");
}

#[test]
fn formula_arity_errors_exit_1() {
    fqcensus().args(["formula", "psi", "--q", "2", "--n", "3"]).assert().code(1);
    fqcensus().args(["formula", "gl", "--q", "2", "--k", "2", "--l", "1"]).assert().code(1);
    fqcensus().args(["formula", "nope", "--q", "2"]).assert().code(1);
    fqcensus().args(["formula", "psi", "--q", "6", "--n", "3", "--k", "2"]).assert().code(1);
    fqcensus().assert().code(1);
    fqcensus().arg("--help").assert().code(0);
}

#[test]
fn counts_match_formula() {
    for (problem, q, n, k, want) in
        [("reachable", "2", "3", "2", "24"), ("completable", "2", "3", "1", "6"), ("simple", "3", "2", "1", "6"), ("pencil", "4", "2", "1", "12")]
    {
        let (code, r) = run(&["count", problem, "--q", q, "--n", n, "--k", k]);
        assert_eq!(code, 0, "{problem}");
        assert_eq!(r[0]["oracle_count"], want);
        assert_eq!(r[0]["formula_value"], want);
        assert_eq!(r[0]["match"], true);
    }
}

#[test]
fn count_guards_exit_1() {
    fqcensus().args(["count", "simple", "--q", "2", "--n", "2", "--k", "2"]).assert().code(1);
    fqcensus().args(["--budget", "10", "count", "reachable", "--q", "2", "--n", "3", "--k", "2"]).assert().code(1);
}

#[test]
fn verify_suites() {
    let (code, r) = run(&["verify", "equivalence", "--q", "2", "--max-n", "3"]);
    assert_eq!(code, 0);
    let cells: Vec<_> = r.iter().map(|v| (v["params"]["n"].as_u64().unwrap(), v["params"]["k"].as_u64().unwrap())).collect();
    assert_eq!(cells, vec![(2, 1), (3, 1), (3, 2)]);
    for v in &r {
        let counts = v["oracle_counts"].as_object().unwrap();
        assert!(counts.values().all(|c| *c == v["formula_value"]));
    }
    let (code, r) = run(&["verify", "recurrence", "--q", "3", "--max-k", "10"]);
    assert_eq!(code, 0);
    assert!(r.iter().all(|v| v["match"] == true));
    let (code, r) = run(&["verify", "duality", "--q", "2", "--n", "3", "--k", "2"]);
    assert_eq!((code, r.len(), &r[0]["match"]), (0, 1, &Value::Bool(true)));
    assert_eq!(run(&["verify", "sigma", "--q", "2", "--max-n", "3"]).0, 0);
    assert_eq!(run(&["verify", "tau", "--q", "2", "--max-k", "2"]).0, 0);
}

#[test]
fn verify_marks_budget_skips_without_failing() {
    let out = fqcensus().args(["--budget", "64", "verify", "equivalence", "--q", "2", "--max-n", "3"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.contains("\"skipped\"")));
    assert!(String::from_utf8(out.stderr).unwrap().contains("skipped"));
}

#[test]
fn conjecture_cases() {
    let (code, r) = run(&["conjecture", "--q", "2", "--n", "2", "--k", "1", "--m", "3"]);
    assert_eq!(code, 0);
    assert_eq!((&r[0]["observed"], &r[0]["predicted"], &r[0]["total"]), (&"1/2".into(), &"1/2".into(), &"64".into()));
    let (_, r) = run(&["conjecture", "--q", "2", "--n", "3", "--k", "2", "--m", "2"]);
    assert_eq!((&r[0]["observed"], &r[0]["total"]), (&"3/8".into(), &"4096".into()));
    fqcensus().args(["conjecture", "--q", "2", "--n", "5", "--k", "4", "--m", "3"]).assert().code(1);
    fqcensus().args(["conjecture", "--sweep", "--q", "2"]).assert().code(1);
}

#[test]
fn census_csv_and_file_output() {
    let out = fqcensus().args(["census", "--qs", "2", "--max-n", "3", "--format", "csv"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(
        rdr.headers().unwrap().iter().collect::<Vec<_>>(),
        fqcensus::report::CSV_HEADER.to_vec()
    );
    let rows: Vec<_> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| &r[12] == "true"));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("census.jsonl");
    fqcensus().args(["census", "--qs", "3,2", "--max-n", "2", "--out"]).arg(&path).assert().code(0).stdout("");
    let written = std::fs::read_to_string(&path).unwrap();
    let qs: Vec<u64> =
        written.lines().map(|l| serde_json::from_str::<Value>(l).unwrap()["params"]["p"].as_u64().unwrap()).collect();
    assert_eq!(qs, vec![2, 3]);
    assert!(written.contains(r#""completable":"6""#));
}

#[test]
fn census_errors() {
    fqcensus().args(["census", "--qs", "2", "--max-n", "1"]).assert().code(1);
    fqcensus()
        .args(["census", "--qs", "2", "--max-n", "2", "--out", "/nonexistent-dir/x.csv"])
        .assert()
        .code(1);
}

#[test]
fn reports_do_not_depend_on_jobs() {
    let args = ["census", "--qs", "2,3", "--max-n", "3", "--format", "csv"];
    let base = fqcensus().args(["--jobs", "1"]).args(args).output().unwrap().stdout;
    for jobs in ["2", "8"] {
        assert_eq!(fqcensus().args(["--jobs", jobs]).args(args).output().unwrap().stdout, base);
    }
}
