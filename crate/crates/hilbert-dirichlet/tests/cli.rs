//! End-to-end checks of the command-line surface: grammar, formats, config
//! round trip, and exit codes.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hilbert-dirichlet"))
}

#[test]
fn weights_report_json() {
    let out = bin()
        .args([
            "weights", "report", "--weight", "std:1", "--depth", "20", "--format", "json",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let w = &v["weights"][0];
    assert_eq!(w["weight"], "std:1");
    let m1 = w["m1"]["value"].as_f64().unwrap();
    let m2 = w["m2"]["value"].as_f64().unwrap();
    assert!((m1 - 1.0).abs() < 0.01, "m1 = {m1}");
    assert!((m2 - 1.0).abs() < 0.01, "m2 = {m2}");
    assert!((w["doubling"]["sup_ratio"].as_f64().unwrap() - 4.0).abs() < 1e-6);
    assert_eq!(w["welldef"]["verdict"], "finite");
}

#[test]
fn operator_schatten_csv_schema() {
    let out = bin()
        .args([
            "operator", "schatten", "--weight", "std:1", "--symbol", "pow:0.75", "--p", "2,inf",
            "--N", "16,32,64", "--format", "csv",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "weight,symbol,p,N,s_p,b_norm,ratio_kind,ratio,rel_change,ratio_rel_change,outside_hypotheses"
    );
    // s_p columns are monotone in N within each p group.
    let mut by_p: std::collections::HashMap<String, Vec<f64>> = Default::default();
    for line in lines {
        let cols: Vec<&str> = line.split(',').collect();
        by_p
            .entry(cols[2].to_string())
            .or_default()
            .push(cols[4].parse().unwrap());
    }
    assert_eq!(by_p.len(), 2);
    for (p, vals) in by_p {
        assert!(
            vals.windows(2).all(|w| w[1] >= w[0] * (1.0 - 1e-12)),
            "p={p}: {vals:?}"
        );
    }
}

#[test]
fn verify_suite_exit_zero_and_csv() {
    let out = bin()
        .args(["verify", "muckenhoupt-dichotomy", "--format", "csv"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("suite,scenario,assertion,anchor,value,bound,verdict"));
    // Seven alpha scenarios, all with pass rows; verdict column is last.
    assert!(text.lines().filter(|l| l.contains(",pass")).count() >= 14);
    assert!(!text.contains(",fail"));
}

#[test]
fn dump_config_round_trips() {
    let dir = std::env::temp_dir().join("hilbert-dirichlet-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("dump1.conf");

    let out = bin().args(["--dump-config"]).output().unwrap();
    assert!(out.status.success());
    std::fs::write(&path, &out.stdout).unwrap();

    let again = bin()
        .args(["--config", path.to_str().unwrap(), "--dump-config"])
        .output()
        .unwrap();
    assert!(again.status.success());
    assert_eq!(out.stdout, again.stdout, "config dump must re-parse identically");
}

#[test]
fn symbol_commands() {
    let out = bin()
        .args(["symbol", "blocks", "--symbol", "log", "--nmax", "8", "--format", "csv"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("symbol,n,B_n"));
    assert_eq!(text.lines().count(), 10); // header + B_0..B_8

    let out = bin()
        .args(["symbol", "bnorm", "--symbol", "log", "--p", "2", "--method", "blocks", "--format", "json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["bnorm"][0]["result"]["outcome"], "diverging");
}

#[test]
fn usage_errors_exit_two() {
    let out = bin().args(["frobnicate"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    let out = bin().args(["verify", "no-such-suite"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown suite"));
}

#[test]
fn hypothesis_refusal_names_condition() {
    let out = bin()
        .args(["operator", "matrix", "--weight", "std:3", "--symbol", "log", "--N", "8"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("std:3"), "stderr: {err}");
    assert!(err.contains("M2") || err.contains("M1"), "stderr: {err}");
}

#[test]
fn hilbert_norm_plain() {
    let out = bin()
        .args(["hilbert", "norm", "--weight", "std:1", "--D", "16", "--J", "16", "--probes", "0.5,0.9"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("top singular value"));
    assert!(text.contains("probe at r = 0.5"));
}
