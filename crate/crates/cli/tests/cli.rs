//! The binary's exit codes and output shapes.

use std::process::{Command, Output};

use serde_json::Value;

fn crepant(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_crepant")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["series", "--bogus"][..],
        &["series", "--geometry", "p3"],
        &["rmatrix", "--raw", "--with-prefactor"],
        &["frobenius", "--check", "everything"],
        &["verify", "--order", "3"],
        &[],
    ] {
        assert_eq!(crepant(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn series_json() {
    let out = crepant(&["series", "--emit", "c1", "--order", "6", "--format", "json"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["geometry"], "kp4");
    let c1 = &v["series"]["c1"];
    assert!(v["series"].get("x").is_none());
    assert!(c1.to_string().contains("-120"), "{c1}");
}

#[test]
fn series_text_lists_every_key() {
    let out = crepant(&["series", "--geometry", "c5z5", "--order", "6"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for key in ["c1", "c2", "l", "x", "y", "mirror"] {
        assert!(text.lines().any(|l| l.starts_with(&format!("{key} = "))), "{key}");
    }
}

#[test]
fn orbifold_rmatrix_json() {
    let out = crepant(&["rmatrix", "--geometry", "c5z5", "--z-order", "1", "--order", "6", "--format", "json"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["order"], 6);
    let text = v.to_string();
    assert!(text.contains("\"entries\""), "{text}");
}

#[test]
fn kp4_rmatrix_text() {
    let out = crepant(&["rmatrix", "--z-order", "1", "--raw"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 5 * 5 * 2);
    assert!(text.starts_with("R[0][0] z^0  (1)\nR[0][0] z^1  (3/20) + (-3/20)*L^4"), "{text}");
}

#[test]
fn frobenius_associativity() {
    let out = crepant(&["frobenius", "--check", "associativity", "--order", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("frobenius:associativity"));
}

#[test]
fn verify_low_order() {
    let out = crepant(&["verify", "--z-order", "1", "--order", "10", "--psi-order", "10"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.ends_with("3 checks: 3 pass, 0 warn, 0 fail\n"), "{text}");
}

#[test]
fn out_writes_file() {
    let dir = std::env::temp_dir().join(format!("crepant-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("series.json");
    let out = crepant(&["series", "--order", "6", "--format", "json", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["order"], 6);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn output_is_deterministic() {
    let args = ["verify", "--z-order", "2", "--order", "10", "--psi-order", "10", "--format", "json"];
    assert_eq!(crepant(&args).stdout, crepant(&args).stdout);
}
