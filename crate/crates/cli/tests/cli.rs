use std::process::{Command, Output};

use serde_json::Value;

fn holodisk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_holodisk")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json output")
}

#[test]
fn example_map_fails_region_condition() {
    let out = holodisk(&["analyze", "--subject", "0.5*(z+1)+0.05*(z-1)^4", "--no-meta"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    let c = &v["reports"]["lft"]["checks"]["th2.i"];
    assert_eq!(c["status"], "fail");
    assert_eq!(c["witness"]["im"], 1.0);
    assert!((c["value"].as_f64().unwrap() - 1.1212).abs() < 1e-3);
    assert_eq!(v["lft_detection"]["is_lft"], false);
}

#[test]
fn automorphism_and_identity_pass() {
    for subject in ["(z+0.3)/(1+0.3*z)", "z"] {
        let out = holodisk(&["analyze", "--subject", subject, "--no-meta"]);
        assert_eq!(out.status.code(), Some(0), "{subject}: {}", String::from_utf8_lossy(&out.stdout));
        assert_eq!(json(&out)["status"], "pass");
    }
}

#[test]
fn input_errors_exit_one() {
    for args in [
        vec!["analyze", "--subject", "z+"],
        vec!["analyze"],
        vec!["analyze", "--subject", "2*z"],
        vec!["flow", "--subject", "z-1"],
        vec!["analyze", "--subject", "z", "--tau", "2"],
    ] {
        let out = holodisk(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(String::from_utf8_lossy(&out.stderr).starts_with("holodisk: "));
    }
}

#[test]
fn flow_csv_reaches_oracle() {
    let out = holodisk(&["flow", "--role", "generator", "--subject", "z^2-1", "--t-end", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,re,im"));
    let last: Vec<f64> = lines.last().unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    assert!((last[0] - 1.0).abs() < 1e-12);
    assert!((last[1] - 1f64.tanh()).abs() < 1e-9);
    assert!(last[2].abs() < 1e-12);
}

#[test]
fn no_meta_output_is_deterministic() {
    let args = ["rigidity", "--subject", "z-0.05*(z-1)^3", "--no-meta"];
    let a = holodisk(&args);
    let b = holodisk(&args);
    assert_eq!(a.stdout, b.stdout);
    assert!(json(&a).get("meta").is_none());
    assert!(json(&holodisk(&args[..3])).get("meta").is_some());
}

#[test]
fn config_file_and_output_path() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("report.json");
    let cfg = dir.path().join("run.cfg");
    std::fs::write(
        &cfg,
        format!("# generator run\nsubject = z-1\nrole = generator\nno_meta = true\nout = {}\n", out_path.display()),
    )
    .unwrap();
    let out = holodisk(&["analyze", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(v["role"], "generator");
    assert_eq!(v["subject"], "z-1");
}

#[test]
fn classify_reports_denjoy_wolff_point() {
    let v = json(&holodisk(&["classify", "--subject", "0.5*z+0.5", "--no-meta"]));
    assert_eq!(v["classification"]["kind"], "Hyperbolic");
    assert_eq!(v["classification"]["tau_dw"]["re"], 1.0);
}

#[test]
fn verify_table() {
    let out = holodisk(&["verify", "--no-meta"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).filter(|l| l.contains("  ")).collect();
    assert!(rows.len() >= 25, "{} rows", rows.len());
    let lem2 = rows.iter().find(|l| l.starts_with("lem2.printed")).unwrap();
    let cols: Vec<&str> = lem2.split_whitespace().collect();
    let at = cols.iter().position(|c| *c == "pass").unwrap();
    assert_eq!(&cols[at..at + 3], &["pass", "fail", "0.5+0i"], "{lem2}");
    assert!(rows.iter().any(|l| l.starts_with("ex1.selfmap") && l.contains(" pass ")));
    assert_eq!(out.status.code(), Some(2));
}
