use std::process::Command;

use liegamma::groups::exp_group;
use liegamma::{GroupId, TangentVector};
use serde_json::Value;

fn liegamma(args: &[&str], seed_env: Option<&str>) -> (i32, String, String) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_liegamma"));
    cmd.args(args).env_remove("LIEGAMMA_SEED");
    if let Some(s) = seed_env {
        cmd.env("LIEGAMMA_SEED", s);
    }
    let o = cmd.output().expect("binary runs");
    (
        o.status.code().unwrap_or(-1),
        String::from_utf8(o.stdout).unwrap(),
        String::from_utf8(o.stderr).unwrap(),
    )
}

fn rows(v: &Value) -> Vec<Vec<f64>> {
    v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect())
        .collect()
}

#[test]
fn exp_at_zero_is_identity() {
    let (code, out, _) = liegamma(
        &["exp", "--group", "se3", "--xi", "0,0,0,0,0,0", "--format", "json"],
        None,
    );
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["group"], "SE3");
    assert_eq!(v["quantity"], "exp");
    let m = rows(&v);
    for (i, r) in m.iter().enumerate() {
        for (j, x) in r.iter().enumerate() {
            assert_eq!(*x, if i == j { 1.0 } else { 0.0 });
        }
    }
}

#[test]
fn gamma_two_at_zero() {
    let (code, out, _) = liegamma(
        &[
            "gamma", "--group", "so3", "--ell", "2", "--xi", "0,0,0", "--format", "json",
        ],
        None,
    );
    assert_eq!(code, 0);
    let m = rows(&serde_json::from_str(&out).unwrap());
    assert_eq!(m, vec![vec![0.5, 0.0, 0.0], vec![0.0, 0.5, 0.0], vec![0.0, 0.0, 0.5]]);
}

#[test]
fn json_round_trips_bit_exact() {
    let coords = [0.3, -1.7, 2.2, 0.41, -0.93, 1.27, 0.6, -0.2, 0.05, 1.1];
    let xi_arg: Vec<String> = coords.iter().map(|x| x.to_string()).collect();
    let (code, out, _) = liegamma(
        &["exp", "--group", "sgal3", "--xi", &xi_arg.join(","), "--format", "json"],
        None,
    );
    assert_eq!(code, 0);
    let m = rows(&serde_json::from_str(&out).unwrap());
    let expected = exp_group(&TangentVector::new(GroupId::SGal3, &coords).unwrap()).matrix;
    for (i, r) in m.iter().enumerate() {
        for (j, x) in r.iter().enumerate() {
            assert_eq!(x.to_bits(), expected[(i, j)].to_bits(), "({i},{j})");
        }
    }
}

#[test]
fn check_minimal_poly_passes() {
    let (code, out, _) = liegamma(
        &[
            "check",
            "--suite",
            "minimal-poly",
            "--samples",
            "1000",
            "--seed",
            "42",
            "--format",
            "json",
        ],
        None,
    );
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["seed"], 42);
    assert!(v["max_residual"].as_f64().unwrap() <= 1e-12);
}

#[test]
fn env_seed_matches_flag() {
    let strip = |s: &str| {
        let mut v: Value = serde_json::from_str(s).unwrap();
        v["wall_time_s"] = Value::Null;
        v
    };
    let args = [
        "check",
        "--suite",
        "kernel-series",
        "--samples",
        "10",
        "--format",
        "json",
    ];
    let (_, from_env, _) = liegamma(&args, Some("77"));
    let mut with_flag = args.to_vec();
    with_flag.extend(["--seed", "77"]);
    let (_, from_flag, _) = liegamma(&with_flag, None);
    let (_, default, _) = liegamma(&args, None);
    assert_eq!(strip(&from_env), strip(&from_flag));
    assert_eq!(strip(&from_env)["seed"], 77);
    assert_eq!(strip(&default)["seed"], 42);
    assert_ne!(strip(&from_env), strip(&default));
}

#[test]
fn failing_tolerance_exits_one() {
    let (code, _, err) = liegamma(
        &["check", "--suite", "oracle-exp", "--samples", "5", "--tol", "0"],
        None,
    );
    assert_eq!(code, 1);
    assert!(err.contains("exceeds"));
}

#[test]
fn usage_errors_exit_two() {
    let (code, _, err) = liegamma(&["exp", "--group", "sgal3", "--xi", "1,2,3"], None);
    assert_eq!(code, 2);
    assert!(err.contains("rho(3),nu(3),phi(3),tau"), "{err}");
    let (code, _, _) = liegamma(&["check", "--suite", "unknown"], None);
    assert_eq!(code, 2);
    let (code, _, _) = liegamma(&["frobnicate"], None);
    assert_eq!(code, 2);
    let (code, _, _) = liegamma(&["check", "--suite", "bch-order"], Some("not-a-seed"));
    assert_eq!(code, 2);
}

#[test]
fn table1_csv_columns() {
    let (code, out, _) = liegamma(&["table1", "--samples", "3", "--format", "csv"], None);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("group,quantity,max_abs_residual,tolerance,status"));
    let body: Vec<&str> = lines.collect();
    assert_eq!(body.len(), 23);
    assert!(body.iter().all(|l| l.split(',').count() == 5 && l.ends_with(",pass")));
    assert!(body.iter().any(|l| l.starts_with("SE3,J monomial,")));
}

#[test]
fn adjoint_and_jacobian_shapes() {
    let xi = "0.1,0.2,0.3,0.4,0.5,0.6,0.7";
    for (cmd, n) in [("adjoint", 7), ("jacobian", 7), ("exp", 4)] {
        let (code, out, _) = liegamma(&[cmd, "--group", "sim3", "--xi", xi, "--format", "csv"], None);
        assert_eq!(code, 0, "{cmd}");
        assert_eq!(out.lines().count(), n, "{cmd}");
    }
    let (code, out, _) = liegamma(
        &[
            "gamma",
            "--group",
            "adse3",
            "--ell",
            "1",
            "--xi",
            "0,0,0,0,0,0",
            "--format",
            "csv",
        ],
        None,
    );
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 6);
}
