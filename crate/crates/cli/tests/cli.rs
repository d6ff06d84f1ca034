use std::process::{Command, Output};

use serde_json::Value;

fn on_qkz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_on-qkz"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(output: &Output) -> Value {
    serde_json::from_slice(&output.stdout).expect("JSON report")
}

#[test]
fn table_for_o3_matches_every_published_cell() {
    let out = on_qkz(&["table", "--n", "3", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let rows = json(&out);
    let rows = rows.as_array().unwrap();
    let lengths: Vec<String> = rows.iter().map(|r| r["L"].to_string()).collect();
    assert_eq!(lengths, ["2", "4", "6", "\"inf\""]);
    let expected = [-6.0, -4.350781059358212, -4.146234978548967, -4.0];
    for (row, want) in rows.iter().zip(expected) {
        assert_eq!(row["model"], "O(3)");
        assert_eq!(row["omega2_kind"], "value");
        assert!((row["omega1_0"].as_f64().unwrap() - want).abs() < 1e-14);
        assert_eq!(row["pass"], true);
        let reference = row["reference"].as_object().unwrap();
        let columns: Vec<&str> = reference.keys().map(String::as_str).collect();
        assert_eq!(columns, ["omega1_0", "omega2", "rho1", "rho2", "rho3"]);
    }
}

#[test]
fn thermo_for_o5_reports_the_derivative() {
    let out = on_qkz(&["thermo", "--n", "5", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let row = &json(&out)[0];
    assert_eq!(row["L"], "inf");
    assert_eq!(row["omega2_kind"], "derivative");
    let value = row["omega2"].as_f64().unwrap();
    assert!((value - 2.697303).abs() < 1e-5 * 2.697303);
    assert!(row.get("reference").is_none() && row.get("pass").is_none());
}

#[test]
fn verify_for_o4_passes() {
    let out = on_qkz(&["verify", "--n", "4", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let records = json(&out);
    let records = records.as_array().unwrap();
    assert_eq!(records.len(), 5);
    for r in records {
        assert!(r["max_residual"].as_f64().unwrap() < 1e-12);
    }
}

#[test]
fn qkz_suite_passes_and_is_deterministic() {
    let args = ["qkz", "--n", "3", "--trotter-N", "2", "--inhomogeneity", "0.1", "--seed", "4", "--format", "json"];
    let first = on_qkz(&args);
    let second = on_qkz(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    let report = &json(&first)[0];
    assert_eq!(report["pass"], true);
    assert_eq!(report["inhomogeneities"], serde_json::json!([-0.1, 0.1]));
}

#[test]
fn tolerance_override_applies_to_every_cell() {
    let strict = on_qkz(&["table", "--n", "4", "--L", "2", "--tol", "1e-30", "--format", "json"]);
    assert_eq!(strict.status.code(), Some(1));
    let loose = on_qkz(&["table", "--n", "4", "--L", "2", "--tol", "1e-9", "--format", "json"]);
    assert_eq!(loose.status.code(), Some(0));
    for row in json(&loose).as_array().unwrap() {
        assert_eq!(row["reference"]["rho3"]["tolerance"].as_f64(), Some(1e-9));
    }
}

#[test]
fn csv_columns_are_fixed() {
    let out = on_qkz(&["ed", "--n", "3", "--L", "2,4", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("model,n,L,omega1_0,omega2_kind,omega2,rho1,rho2,rho3,pass"));
    assert!(lines.next().unwrap().starts_with("O(3),3,2,"));
    assert!(lines.next().unwrap().starts_with("O(3),3,4,-4.35078105935821"));
}

#[test]
fn text_report_shows_printed_values() {
    let out = on_qkz(&["table", "--n", "4", "--L", "2,4"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("O(4)\n"));
    assert!(text.contains("  ref "));
    assert!(text.contains("15 of 15 cells match the published values"));
}

#[test]
fn report_goes_to_the_output_file() {
    let path = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("o4_thermo.json");
    let out = on_qkz(&["thermo", "--n", "4", "--format", "json", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(written[0]["n"], 4);
}

#[test]
fn usage_errors_exit_with_code_two() {
    for args in [
        &["ed", "--n", "3", "--L", "5"][..],
        &["verify", "--n", "2"],
        &["thermo"],
        &["table", "--n", "9", "--L", "2"],
        &["verify", "--n", "3", "--format", "yaml"],
    ] {
        assert_eq!(on_qkz(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn models_without_reference_data_on_request() {
    let out = on_qkz(&["table", "--n", "9", "--L", "2", "--no-reference", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = json(&out);
    assert_eq!(rows.as_array().unwrap().len(), 2);
    assert!(rows[0].get("reference").is_none());
    let energy = -2.0 * 9.0 / 7.0;
    assert!((rows[0]["omega1_0"].as_f64().unwrap() - energy).abs() < 1e-12);
}

#[test]
fn thread_cap_is_validated() {
    let out = Command::new(env!("CARGO_BIN_EXE_on-qkz"))
        .args(["verify", "--n", "3"])
        .env("QKZ_ON_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let capped = Command::new(env!("CARGO_BIN_EXE_on-qkz"))
        .args(["verify", "--n", "3"])
        .env("QKZ_ON_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(capped.status.code(), Some(0));
}
