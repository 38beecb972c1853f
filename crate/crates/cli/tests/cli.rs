use serde_json::Value;
use std::process::{Command, Output};

fn sl2heat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sl2heat"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON document")
}

#[test]
fn eval_identity_in_both_forms() {
    let a = sl2heat(&["eval", "--t", "1", "--cartan", "0,0,0"]);
    let b = sl2heat(&["eval", "--t", "1", "--g", "1,0,0,1"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let doc = json(&a);
    assert!(doc["rho"].as_f64().unwrap() > 0.0);
    assert!(doc["tail_bound"].as_f64().unwrap() <= 1e-10);
    assert!(doc["per_n"]["0"].is_array());
    assert_eq!(doc["fingerprint"].as_str().unwrap().len(), 64);
}

#[test]
fn malformed_group_element_exits_2() {
    for args in [
        vec!["eval", "--t", "1", "--g", "1,0,0"],
        vec!["eval", "--t", "1", "--g", "1,x,0,1"],
        vec!["eval", "--t", "1", "--g", "2,0,0,1"],
        vec!["eval", "--t", "1"],
    ] {
        let out = sl2heat(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn small_time_exits_3_with_cost_model() {
    let out = sl2heat(&["eval", "--t", "0.1", "--cartan", "0,0,0"]);
    assert_eq!(out.status.code(), Some(3));
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("t_min") && msg.contains("cutoff"), "{msg}");
}

#[test]
fn table_rows_match_eval() {
    let out = sl2heat(&["table", "--t-grid", "0.5", "--s-grid", "1.25"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0], "t,s,rho,tail_bound,imag_residual");
    let rho: f64 = lines[1].split(',').nth(2).unwrap().parse().unwrap();
    let e = json(&sl2heat(&["eval", "--t", "0.5", "--cartan", "0,1.25,0"]));
    assert_eq!(rho, e["rho"].as_f64().unwrap());
}

#[test]
fn table_matches_golden_and_decays() {
    let out = sl2heat(&["table", "--t-grid", "1", "--s-grid", "0:3:7"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let golden = include_str!("golden/table_t1.csv");
    let parse = |s: &str| -> Vec<Vec<f64>> {
        s.lines()
            .skip(1)
            .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
            .collect()
    };
    let (got, want) = (parse(&text), parse(golden));
    assert_eq!(got.len(), want.len());
    for (g, w) in got.iter().zip(&want) {
        assert_eq!(g[..2], w[..2]);
        assert!((g[2] - w[2]).abs() <= 1e-12 * w[2].abs());
    }
    assert!(got.windows(2).all(|p| p[1][2] < p[0][2]));
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    let out = dir.path().join("eval.json");
    std::fs::write(
        &cfg,
        format!("# test\ntol = 1e-8\nt_min = 0.3\nout = {}\n", out.display()),
    )
    .unwrap();
    let r = sl2heat(&[
        "--config",
        cfg.to_str().unwrap(),
        "--tol",
        "1e-9",
        "eval",
        "--t",
        "1",
        "--cartan",
        "0,0.5,0",
    ]);
    assert!(r.status.success());
    assert!(r.stdout.is_empty());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc["config"]["synthesis"]["tol"].as_f64(), Some(1e-9));
    assert_eq!(doc["config"]["synthesis"]["t_min"].as_f64(), Some(0.3));

    std::fs::write(&cfg, "tolerance = 1\n").unwrap();
    let r = sl2heat(&[
        "--config",
        cfg.to_str().unwrap(),
        "eval",
        "--t",
        "1",
        "--cartan",
        "0,0,0",
    ]);
    assert_eq!(r.status.code(), Some(2));
}

#[test]
fn verify_crosscheck_passes() {
    let out = sl2heat(&["verify", "spherical-crosscheck"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let doc = json(&out);
    assert_eq!(doc["pass"], Value::Bool(true));
    let reports = doc["reports"].as_array().unwrap();
    for key in [
        "check",
        "inputs",
        "computed",
        "reference",
        "tolerance",
        "pass",
        "diagnostics",
    ] {
        assert!(reports[0].get(key).is_some(), "{key}");
    }
}

#[test]
fn verify_plancherel_single_point() {
    let out = sl2heat(&["verify", "plancherel", "--n", "0", "--t", "2"]);
    assert!(out.status.success());
    let doc = json(&out);
    let r = &doc["reports"][0];
    assert_eq!(doc["checks"], 1);
    let (a, b) = (
        r["computed"].as_f64().unwrap(),
        r["reference"].as_f64().unwrap(),
    );
    assert!((a - b).abs() <= 1e-3 * b);
}

#[test]
fn verify_failure_exits_1() {
    // a fixed cutoff below n drops ρ_{t,n} entirely
    let out = sl2heat(&[
        "--ktype-cutoff",
        "2",
        "verify",
        "plancherel",
        "--n",
        "5",
        "--t",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["pass"], Value::Bool(false));
}

#[test]
fn unknown_suite_exits_2() {
    assert_eq!(sl2heat(&["verify", "everything"]).status.code(), Some(2));
}

#[test]
fn verify_mc_is_deterministic() {
    let args = [
        "verify", "mc", "--paths", "100000", "--t", "0.5", "--seed", "7",
    ];
    let a = sl2heat(&args);
    let b = sl2heat(&args);
    assert_eq!(a.stdout, b.stdout);
    let doc = json(&a);
    assert_eq!(doc["checks"], 3);
    assert_eq!(doc["config"]["seed"], 7);
}
