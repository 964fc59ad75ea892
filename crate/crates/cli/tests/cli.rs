use std::io::Write;
use std::process::{Command, Output};

use num_bigint::BigInt;
use serde_json::Value;

fn orderkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orderkit")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn bound_digit_count_matches_big_integer_power() {
    let out = orderkit(&["bound", "--formula", "thm-a-height", "--g", "1", "--nu", "6", "--excluded-primes", ""]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let mut direct = BigInt::from(1);
    for _ in 0..144 {
        direct *= 3;
    }
    for _ in 0..24 {
        direct *= 6;
    }
    let digits = direct.to_string();
    assert_eq!(v["digit_count"], Value::from(digits.len()));
    assert_eq!(v["exact_value"], Value::from(digits));
    assert_eq!(v["exact_flag"], Value::from(true));
    assert_eq!(v["formula_id"], "thm-a-height");
    assert_eq!(v["job"]["inputs"]["nu"], "6");
}

#[test]
fn huge_bound_stays_logarithmic() {
    let out = orderkit(&["bound", "--formula", "thm-b", "--g", "2", "--log-only"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["exact_flag"], Value::from(false));
    assert!(v.get("exact_value").is_none());
    // 2^(16^8): floor(4294967296 log10 2) + 1
    assert_eq!(v["digit_count"], Value::from(1_292_913_987u64));
}

#[test]
fn infinite_level_structure() {
    let out = orderkit(&["bound", "--formula", "thm-main-count", "--max-level", "inf"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["bounded"], Value::from(false));
}

#[test]
fn class_monoid_of_z_sqrt_minus_3() {
    let out = orderkit(&["class-monoid", "--field", "3,0,1", "--order-basis", "1,0;0,1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["size"], Value::from(2));
    assert_eq!(v["census"]["classes"], Value::from(2));
    assert_eq!(v["bounds"]["hold"], Value::from(true));
    assert_eq!(v["table"], serde_json::json!([[0, 1], [1, 1]]));
}

#[test]
fn gamma_count_for_z_sqrt_minus_5() {
    let out = orderkit(&["gamma-count", "--gamma-field", "5,0,1", "--target-n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["count"], Value::from(2));
    assert_eq!(v["bound"], "2");
    assert_eq!(v["per_phi"], serde_json::json!([2]));
}

#[test]
fn order_info_reports_units_and_conductor() {
    let out = orderkit(&["order-info", "--field", "-2,0,1", "--conductor", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["order"]["discriminant"], "72");
    assert_eq!(v["conductor_norm"], "9");
    assert_eq!(v["units"]["square_classes"], Value::from(4));
    assert_eq!(v["order"]["is_maximal"], Value::from(false));
}

#[test]
fn config_file_with_flag_override() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "# job record\nformula = thm-a-height\ng = 2\nnu = 6").unwrap();
    let path = f.path().to_str().unwrap();
    let from_file = json(&orderkit(&["bound", "--config", path]));
    assert_eq!(from_file["inputs"]["g"], Value::from(2));
    let overridden = json(&orderkit(&["bound", "--config", path, "--g", "1"]));
    assert_eq!(overridden["inputs"]["g"], Value::from(1));
    assert_eq!(overridden["inputs"]["nu"], Value::from(6));
    assert_eq!(overridden["job"]["inputs"]["g"], "1");

    let mut bad = tempfile::NamedTempFile::new().unwrap();
    writeln!(bad, "formula = thm-b\nwidth = 3").unwrap();
    let out = orderkit(&["bound", "--config", bad.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn output_is_deterministic() {
    let args = ["class-monoid", "--field", "1,0,1", "--conductor", "3"];
    let a = orderkit(&args);
    let b = orderkit(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn exit_codes() {
    // usage
    assert_eq!(orderkit(&["bound"]).status.code(), Some(1));
    assert_eq!(orderkit(&["bound", "--formula", "nope"]).status.code(), Some(1));
    assert_eq!(orderkit(&["class-monoid", "--field", "x"]).status.code(), Some(1));
    assert_eq!(orderkit(&[]).status.code(), Some(1));
    assert_eq!(orderkit(&["--help"]).status.code(), Some(0));
    // domain errors carry module and operation
    let out = orderkit(&["bound", "--formula", "thm-b", "--excluded-primes", "4"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["error"]["kind"], "NotPrime");
    assert_eq!(v["error"]["module"], "bounds");
    let out = orderkit(&["class-monoid", "--field", "1,0,1", "--order-basis", "2,0;0,1"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["error"]["module"], "orders");
    // budget
    let out = orderkit(&["class-monoid", "--field", "1,0,1", "--conductor", "400"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["error"]["kind"], "IndexTooLarge");
}

#[test]
fn table_format() {
    let out = orderkit(&["--format", "table", "gamma-count", "--gamma-field", "1,0,1", "--target-n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l == "count\t1"));
}

#[test]
fn small_suite_and_negative_control() {
    let ok = orderkit(&["verify-suite", "--max-disc", "30", "--max-conductor", "2", "--conjugations", "2"]);
    assert_eq!(ok.status.code(), Some(0));
    let v = json(&ok);
    assert_eq!(v["passed"], Value::from(true));
    assert_eq!(v["criteria"].as_array().unwrap().len(), 8);

    let bad = orderkit(&["verify-suite", "--max-disc", "30", "--max-conductor", "2", "--inject-fault"]);
    assert_eq!(bad.status.code(), Some(2));
    let v = json(&bad);
    assert_eq!(v["criteria"][0]["passed"], Value::from(false));
    assert!(v["criteria"][0]["failures"][0].as_str().unwrap().contains("factorization violated"));
}

#[test]
fn maximal_orders_only() {
    let out = orderkit(&["verify-suite", "--max-disc", "100", "--max-conductor", "1", "--conjugations", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(v["orders"].as_array().unwrap().iter().all(|o| o["intermediate"] == 1));
}
