use std::process::Command;

use serde_json::Value;

fn tcore(args: &[&str]) -> (i32, Vec<Value>) {
    let out = Command::new(env!("CARGO_BIN_EXE_tcore"))
        .args(args)
        .env_remove("TCORE_THREADS")
        .output()
        .expect("binary runs");
    let records = String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).expect("every line is JSON"))
        .collect();
    (out.status.code().unwrap(), records)
}

fn single(args: &[&str]) -> (i32, Value) {
    let (code, mut records) = tcore(args);
    assert_eq!(records.len(), 1, "{args:?}");
    (code, records.remove(0))
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

#[test]
fn record_schema() {
    let (_, r) = single(&["count", "--t", "5", "--n", "10"]);
    let keys: Vec<&str> = r.as_object().unwrap().keys().map(String::as_str).collect();
    for k in ["cmd", "args", "result", "flags", "timing_ms", "version"] {
        assert!(keys.contains(&k), "missing {k}");
    }
    assert_eq!(r["cmd"], "count");
}

#[test]
fn count_examples() {
    for (t, n, want) in [
        ("5", "10", "12"),
        ("6", "10", "12"),
        ("1", "7", "0"),
        ("100", "10", "42"),
    ] {
        let (code, r) = single(&["count", "--t", t, "--n", n]);
        assert_eq!(code, 0);
        assert_eq!(r["result"]["value"], want, "c_{t}({n})");
    }
}

#[test]
fn count_series_and_big_values_are_strings() {
    let (_, r) = single(&["count", "--t", "5", "--max-n", "12"]);
    let values = r["result"]["values"].as_array().unwrap();
    assert_eq!(values.len(), 13);
    assert_eq!(values[10], "12");
    let (_, r) = single(&["count", "--t", "1000", "--n", "3000"]);
    let value = r["result"]["value"].as_str().unwrap();
    assert!(value.len() > 40 && value.bytes().all(|b| b.is_ascii_digit()));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(tcore(&["count", "--t", "0", "--n", "3"]).0, 2);
    assert_eq!(tcore(&["count", "--t", "x", "--n", "3"]).0, 2);
    assert_eq!(tcore(&["count", "--t", "3"]).0, 2);
    assert_eq!(tcore(&["no-such-command"]).0, 2);
}

#[test]
fn saddle_examples() {
    let (code, r) = single(&["saddle", "--t", "1000", "--n", "60000"]);
    assert_eq!(code, 0);
    let s = &r["result"];
    assert!(f(&s["bracket_lo"]) < f(&s["y"]) && f(&s["y"]) < f(&s["bracket_hi"]));
    assert!(f(&s["beta"]).abs() < 1e-11);
    let ratio = f(&s["alpha"]) / f(&s["scale"]);
    assert!((1.0 / 26.0..=1.0 / 12.0).contains(&ratio));
}

#[test]
fn saddle_failure_exit_code() {
    // N = 0 has no root; reported as a usage error, not a solver failure.
    assert_eq!(tcore(&["saddle", "--t", "10", "--n", "0"]).0, 2);
}

#[test]
fn estimate_examples() {
    let (code, r) = single(&["estimate", "--t", "1000", "--n", "60000"]);
    assert_eq!(code, 0);
    assert_eq!(r["flags"]["regime"], "main");
    assert_eq!(r["flags"]["hypotheses_ok"], true);

    let (code, r) = single(&["estimate", "--t", "50", "--n", "100000"]);
    assert_eq!(code, 0);
    assert_eq!(r["flags"]["regime"], "small_t");
    assert!(f(&r["result"]["rel_error_bound"]) < 0.005);

    let (code, r) = single(&["estimate", "--t", "6", "--n", "20", "--regime", "main"]);
    assert_eq!(code, 4);
    assert_eq!(r["flags"]["hypotheses_ok"], false);

    let (code, r) = single(&["estimate", "--t", "6", "--n", "20"]);
    assert_eq!(code, 0);
    assert_eq!(r["flags"]["certified"], false);

    assert_eq!(
        tcore(&["estimate", "--t", "7", "--n", "200000", "--regime", "small-t"]).0,
        4
    );
}

#[test]
fn log_values_have_fifteen_digits() {
    let (_, r) = single(&["estimate", "--t", "1000", "--n", "60000"]);
    let text = r["result"]["log_value"].to_string();
    let digits = text.chars().filter(char::is_ascii_digit).count();
    assert!(digits <= 15, "{text}");
}

#[test]
fn verify_examples() {
    let (code, r) = single(&["verify-stanton", "--max-n", "2000"]);
    assert_eq!(code, 0);
    assert_eq!(
        r["result"]["equalities"],
        serde_json::json!([{"t": 5, "n": 10}])
    );
    assert_eq!(r["result"]["violations"], serde_json::json!([]));
    assert_eq!(single(&["verify-stanton", "--max-n", "50"]).0, 0);
}

#[test]
fn injected_fault_exits_5() {
    let (code, r) = single(&["verify-stanton", "--max-n", "50", "--inject-fault", "7:30"]);
    assert_eq!(code, 5);
    assert_eq!(
        r["result"]["violations"],
        serde_json::json!([{"t": 7, "n": 30}])
    );
}

#[test]
fn verify_cap_and_report_file() {
    assert_eq!(tcore(&["verify-stanton", "--max-n", "20000"]).0, 2);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let (code, _) = single(&[
        "verify-stanton",
        "--max-n",
        "30",
        "--certify",
        "5:10",
        "--report",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report["certified_pairs"][0]["relation"], "equal");
}

#[test]
fn kappa_examples() {
    let (code, records) = tcore(&["kappa", "--kappa", "1e6", "10", "100"]);
    assert_eq!(code, 0);
    assert_eq!(records.len(), 3);
    let a = f(&records[0]["result"]["a"]);
    assert!((a - 1.0 / 6.0).abs() < 1e-2);
    assert!(records.iter().all(|r| f(&r["result"]["b"]) > 0.0));
    assert!(f(&records[1]["result"]["v"]) < f(&records[2]["result"]["v"]));
}

#[test]
fn kappa_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("kappa.csv");
    let (code, _) = tcore(&[
        "kappa",
        "--kappa",
        "1",
        "24",
        "--csv",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "kappa,v,A,B");
    assert_eq!(lines.len(), 3);
}

#[test]
fn selftest_quick() {
    let (code, r) = single(&["selftest"]);
    assert_eq!(code, 0, "{}", r["flags"]);
    assert!(f(&r["timing_ms"]) < 60_000.0);
    assert_eq!(r["flags"]["passed"], true);
}

#[test]
fn selftest_full_includes_containment() {
    let (code, r) = single(&["selftest", "--level", "full"]);
    assert_eq!(code, 0, "{}", r["flags"]);
    let names: Vec<&str> = r["result"]["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(names.contains(&"interval_containment"));
}

#[test]
fn deterministic_across_thread_counts() {
    let strip = |mut v: Value| {
        v["timing_ms"] = Value::Null;
        v["result"]["elapsed_ms"] = Value::Null;
        v
    };
    let (_, a) = single(&["--threads", "1", "verify-stanton", "--max-n", "300"]);
    let (_, b) = single(&["verify-stanton", "--max-n", "300", "--threads", "3"]);
    let out = Command::new(env!("CARGO_BIN_EXE_tcore"))
        .args(["verify-stanton", "--max-n", "300"])
        .env("TCORE_THREADS", "2")
        .output()
        .unwrap();
    let c: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(strip(a.clone()), strip(b));
    assert_eq!(strip(a), strip(c));
}
