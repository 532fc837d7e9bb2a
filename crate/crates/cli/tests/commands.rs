use std::path::Path;
use std::process::{Command, Output};

use momentconekit::lr::lr_tableaux;
use momentconekit::partition::Partition;
use momentconekit_cli::{run, run_batch, Context, Job, EXIT_BUDGET, EXIT_INPUT, EXIT_NEGATIVE, EXIT_POSITIVE};
use serde_json::{json, Value};

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_momentconekit"));
    // Keep a stray user config out of the tests.
    cmd.env("HOME", std::env::temp_dir().join("momentconekit-no-home"));
    cmd
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn job(value: Value) -> Job {
    serde_json::from_value(value).unwrap()
}

#[test]
fn lrcoef_command() {
    let out = bin().args(["lrcoef", "--nu", "3,2,1", "--lambda", "2,1", "--mu", "2,1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_POSITIVE));
    assert_eq!(stdout_json(&out), json!({ "value": 2 }));

    let p = |s: &str| Partition::parse(s).unwrap();
    assert_eq!(lr_tableaux(&p("3,2,1"), &p("2,1"), &p("2,1")), 2);
}

#[test]
fn lrcoef_zero_is_negative() {
    let out = bin().args(["lrcoef", "--nu", "3", "--lambda", "1,1", "--mu", "1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_NEGATIVE));
    assert_eq!(stdout_json(&out), json!({ "value": 0 }));
}

#[test]
fn single_purpose_binary() {
    let out = Command::new(env!("CARGO_BIN_EXE_lrcoef"))
        .args(["--nu", "3,2,1", "--lambda", "2,1", "--mu", "2,1", "--method", "tableaux"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_POSITIVE));
    assert_eq!(stdout_json(&out), json!({ "value": 2 }));
}

#[test]
fn moment_membership_diagonal() {
    // One arrow u→v with W = (2): the source sees 4, the sink sees 4.
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "spec.json", r#"{"m":1,"ell":1,"n":1,"beta":{"x1":1,"y1":1}}"#);
    let tuple = write(dir.path(), "tuple.json", r#"{"sources":[[4]],"sinks":[[4]]}"#);
    let out = bin().args(["moment-membership", "--spec", &spec, "--tuple", &tuple]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_POSITIVE), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(stdout_json(&out)["member"], json!(true));

    let tuple = write(dir.path(), "bad.json", r#"{"sources":[[4]],"sinks":[[3]]}"#);
    let out = bin().args(["moment-membership", "--spec", &spec, "--tuple", &tuple]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_NEGATIVE));
}

#[test]
fn klyachko_trace_mismatch() {
    let out = bin().args(["klyachko", "--n", "2", "--lambda", "1,0", "--mu", "1,0", "--nu", "1,0"]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_NEGATIVE));
    assert_eq!(stdout_json(&out)["member"], json!(false));

    let out = bin().args(["klyachko", "--n", "2", "--lambda", "1,0", "--mu", "1,0", "--nu", "1,1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_POSITIVE));
}

#[test]
fn malformed_json_reports_field() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "spec.json", r#"{"m":1,"ell":1,"n":"two","beta":{"x1":1,"y1":1}}"#);
    let tuple = write(dir.path(), "tuple.json", r#"{"sources":[[1]],"sinks":[[1]]}"#);
    let out = bin().args(["moment-membership", "--spec", &spec, "--tuple", &tuple]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_INPUT));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("`n`") && err.contains("line 1"), "{err}");

    let spec = write(dir.path(), "broken.json", "{\"m\":1,\n\"ell\":");
    let out = bin().args(["moment-membership", "--spec", &spec, "--tuple", &tuple]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_INPUT));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn unknown_field_is_input_error() {
    let outcome = run(
        &serde_json::from_value::<Job>(json!({
            "command": "lrcoef",
            "payload": { "nu": [1], "lambda": [1], "mu": [], "extra": 1 }
        }))
        .map_or_else(
            |e| {
                assert!(e.to_string().contains("extra"));
                job(json!({ "command": "lrcoef", "payload": { "nu": [1], "lambda": [1], "mu": [] } }))
            },
            |_| panic!("unknown field accepted"),
        ),
        &Context::default(),
    );
    assert_eq!(outcome.exit, EXIT_POSITIVE);
}

#[test]
fn budget_exceeded_exit() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "spec.json", r#"{"m":2,"ell":1,"n":2,"beta":{"x1":2,"x2":2,"y1":2}}"#);
    let sigma = write(dir.path(), "sigma.json", r#"[1,2,1,2,-3,-3]"#);
    let out = bin()
        .args(["--budget", "5", "semiinv-dim", "--spec", &spec, "--sigma", &sigma, "--via", "polytope"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_BUDGET), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn config_budget_is_used() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "spec.json", r#"{"m":2,"ell":1,"n":2,"beta":{"x1":2,"x2":2,"y1":2}}"#);
    let sigma = write(dir.path(), "sigma.json", r#"[1,2,1,2,-3,-3]"#);
    let config = write(dir.path(), "config.toml", "budget = 5\n");
    let args = ["semiinv-dim", "--spec", &spec, "--sigma", &sigma, "--via", "polytope"];
    let out = bin().args(["--config", &config]).args(args).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_BUDGET));
    let out = bin().args(["--config", &config, "--budget", "100000000"]).args(args).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_POSITIVE), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn semiinv_routes_agree() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "spec.json", r#"{"m":2,"ell":1,"n":2,"beta":{"x1":2,"x2":2,"y1":2}}"#);
    let sigma = write(dir.path(), "sigma.json", r#"[1,2,1,2,-3,-3]"#);
    let mut values = Vec::new();
    for extra in [&["--via", "formula"][..], &["--via", "polytope"], &["--count"], &["--single-sink"]] {
        let out = bin().args(["semiinv-dim", "--spec", &spec, "--sigma", &sigma]).args(extra).output().unwrap();
        assert_eq!(out.status.code(), Some(EXIT_POSITIVE));
        values.push(stdout_json(&out)["value"].clone());
    }
    assert!(values.iter().all(|v| v == &values[0]), "{values:?}");
}

#[test]
fn dump_and_lp_feasible() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "spec.json", r#"{"m":1,"ell":1,"n":1,"beta":{"x1":1,"y1":1}}"#);
    let sigma = write(dir.path(), "sigma.json", r#"{"x1": 2, "y1": -2}"#);
    let dump = dir.path().join("lp.json");
    let out = bin()
        .args(["semiinv-dim", "--spec", &spec, "--sigma", &sigma, "--feasible", "--dump-lp"])
        .arg(&dump)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_POSITIVE), "{}", String::from_utf8_lossy(&out.stderr));
    let dumped: Value = serde_json::from_str(&std::fs::read_to_string(&dump).unwrap()).unwrap();
    for key in ["A", "b", "eq_rows", "var_names"] {
        assert!(dumped.get(key).is_some(), "missing {key}");
    }
    let out = bin().arg("lp-feasible").arg(&dump).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_POSITIVE));
    assert_eq!(stdout_json(&out)["feasible"], json!(true));
}

#[test]
fn batch_is_deterministic() {
    let jobs = [
        json!({ "command": "lrcoef", "payload": { "nu": [3, 2, 1], "lambda": [2, 1], "mu": [2, 1] } }),
        json!({ "command": "multi-lrcoef", "payload": { "nu": [2, 1], "lambdas": [[1], [1], [1]] } }),
        json!({ "command": "zelevinsky", "payload": { "lambdas": [[2, 1], [1]] } }),
        json!({ "command": "klyachko", "payload": { "n": 2, "lambda": [1, 0], "mu": [1, 0], "nu": [1, 0] } }),
        json!({ "command": "eff-membership", "payload": { "spec": { "m": 1, "ell": 1, "n": 2, "beta": { "x1": 1, "y1": 2 } }, "sigma": [2, -1, 0] } }),
        json!({ "command": "semiinv-dim", "payload": { "spec": { "m": 2, "ell": 1, "n": 1, "beta": { "x1": 1, "x2": 1, "y1": 2 } }, "sigma": [1, 1, -1, 0] } }),
        json!({ "command": "moment-membership", "payload": { "spec": { "m": 1, "ell": 1, "n": 1, "beta": { "x1": 1, "y1": 1 } }, "tuple": { "sources": [["1/2"]], "sinks": [["1/2"]] } } }),
        json!({ "command": "sample", "payload": { "spec": { "m": 1, "ell": 1, "n": 2, "beta": { "x1": 2, "y1": 2 } }, "seed": 7 } }),
        json!({ "command": "nonsense", "payload": {} }),
    ];
    let text: String = jobs.iter().map(|j| format!("{j}\n")).collect();
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "batch.jsonl", &text);

    let first = bin().args(["batch", &file, "--jobs", "3"]).output().unwrap();
    let second = bin().args(["batch", &file]).output().unwrap();
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(first.status.code(), Some(EXIT_INPUT));
    let lines: Vec<Value> = String::from_utf8(first.stdout).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), jobs.len());
    assert_eq!(lines[0]["result"], json!({ "value": 2 }));
    assert_eq!(lines[1]["result"], json!({ "value": 2 }));
    assert_eq!(lines[3]["exit"], json!(EXIT_NEGATIVE));
    assert_eq!(lines[8]["exit"], json!(EXIT_INPUT));

    // The same jobs as a JSON array give the same results; only the label of
    // the parse error differs.
    let array = serde_json::to_string(&jobs).unwrap();
    let (from_array, _) = run_batch(&array, &Context::default(), 2);
    let from_array: Vec<Value> = from_array.iter().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(from_array[..8], lines[..8]);
    assert!(from_array[8]["result"]["error"].as_str().unwrap().starts_with("job 9:"));
    assert!(lines[8]["result"]["error"].as_str().unwrap().starts_with("line 9:"));
}

#[test]
fn batch_matches_direct_calls() {
    let direct = run(
        &job(json!({ "command": "lrcoef", "payload": { "nu": [4, 2], "lambda": [2, 1], "mu": [2, 1], "method": "tableaux" } })),
        &Context::default(),
    );
    let (lines, exit) = run_batch(
        r#"{"command":"lrcoef","payload":{"nu":[4,2],"lambda":[2,1],"mu":[2,1]}}"#,
        &Context::default(),
        1,
    );
    let line: Value = serde_json::from_str(&lines[0]).unwrap();
    assert_eq!(line["result"], direct.result);
    assert_eq!(exit, direct.exit);
}
