//! End-to-end checks of the command-line interface: exit codes, output
//! formats and byte-level determinism.

use std::process::{Command, Output};

fn tricycle(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tricycle"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn verify_bound_passes_on_a_feasible_grid() {
    let out = tricycle(&[
        "verify-bound",
        "--alpha",
        "0.8",
        "--tau-c",
        "20",
        "--tau-p",
        "25:30:5",
        "--nodes",
        "201",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = stdout_of(&out);
    assert!(text.contains("tau_c,tau_p,tau_h"));
    assert_eq!(text.matches(",OK").count(), 2);
}

#[test]
fn verify_bound_tolerates_infeasible_rows() {
    // (20, 20) has no positive tau_h root; the row is flagged, not fatal.
    let out = tricycle(&[
        "verify-bound",
        "--alpha",
        "0.8",
        "--tau-c",
        "20",
        "--tau-p",
        "20:25:5",
        "--nodes",
        "201",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("INFEASIBLE"));
    assert!(text.contains(",OK"));
}

#[test]
fn verify_bound_flags_a_violation_with_exit_one() {
    // The flat-spectrum corner point violates the bound in this model.
    let out = tricycle(&[
        "verify-bound",
        "--alpha",
        "0",
        "--tau-c",
        "10",
        "--tau-p",
        "10",
        "--nodes",
        "401",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bound violated"));
}

#[test]
fn empty_grid_is_a_usage_error() {
    let out = tricycle(&["sweep", "--tau-c", "50:40:5", "--nodes", "201"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_output_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.json");
    std::fs::write(
        &config,
        r#"{"alpha": [0.8, 1.2], "tau_c": "15:25:5", "tau_p": "25:35:5", "nodes": 201, "refinements": 0}"#,
    )
    .unwrap();
    let out_a = dir.path().join("a.csv");
    let out_b = dir.path().join("b.csv");
    for (path, threads) in [(&out_a, "1"), (&out_b, "4")] {
        let out = Command::new(env!("CARGO_BIN_EXE_tricycle"))
            .args([
                "sweep",
                "--config",
                config.to_str().unwrap(),
                "--out",
                path.to_str().unwrap(),
            ])
            .env("TRICYCLE_THREADS", threads)
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0));
    }
    let a = std::fs::read(&out_a).unwrap();
    let b = std::fs::read(&out_b).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, b, "rows must not depend on the worker count");
    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with("# format: tricycle-csv-v1\n"));
    // 2 alphas x 3 tau_c x 3 tau_p data rows plus comment and header.
    assert_eq!(text.lines().count(), 20);
}

#[test]
fn invalid_thread_cap_is_a_usage_error() {
    let out = Command::new(env!("CARGO_BIN_EXE_tricycle"))
        .args(["sweep", "--tau-c", "20", "--tau-p", "25", "--nodes", "201"])
        .env("TRICYCLE_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn jsonl_rows_are_valid_json() {
    let out = tricycle(&[
        "sweep", "--alpha", "0.8", "--tau-c", "20", "--tau-p", "20:25:5", "--nodes", "201",
        "--format", "jsonl",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    let mut statuses = Vec::new();
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).expect("valid JSON row");
        statuses.push(v["status"].as_str().unwrap().to_string());
        if v["status"] == "INFEASIBLE" {
            assert!(v["tau_h"].is_null());
        } else {
            assert!(v["lh_minus_rh"].as_f64().unwrap() > 0.0);
        }
    }
    assert_eq!(statuses, vec!["INFEASIBLE", "OK"]);
}

#[test]
fn optimize_emits_monotone_auxiliary_durations() {
    let out = tricycle(&[
        "optimize",
        "--cop-target",
        "2.0",
        "--tau-c",
        "10:20:2",
        "--nodes",
        "201",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    let mut prev_tau_p = f64::NEG_INFINITY;
    let mut rows = 0;
    for line in text.lines().skip(2) {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 7);
        assert_eq!(*fields.last().unwrap(), "OK");
        let tau_p: f64 = fields[3].parse().unwrap();
        let eps_check: f64 = fields[4].parse().unwrap();
        assert!((eps_check - 2.0).abs() < 1e-8);
        assert!(tau_p >= prev_tau_p);
        prev_tau_p = tau_p;
        rows += 1;
    }
    assert_eq!(rows, 6);
}

#[test]
fn optimize_flags_targets_beyond_the_reversible_cop() {
    let out = tricycle(&[
        "optimize",
        "--cop-target",
        "3.0",
        "--tau-c",
        "10:20:5",
        "--nodes",
        "201",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    for line in text.lines().skip(2) {
        assert!(line.ends_with("INFEASIBLE"));
    }
}

#[test]
fn optimize_without_a_target_is_a_usage_error() {
    let out = tricycle(&["optimize", "--tau-c", "10:20:5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unwritable_output_path_exits_three() {
    let out = tricycle(&[
        "sweep",
        "--alpha",
        "0.8",
        "--tau-c",
        "20",
        "--tau-p",
        "25",
        "--nodes",
        "201",
        "--out",
        "/nonexistent-dir/rows.csv",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn oracle_check_reports_static_drives_as_exact() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("static.json");
    std::fs::write(
        &config,
        r#"{"static_drive": true, "nodes": 201, "refinements": 0}"#,
    )
    .unwrap();
    let out = tricycle(&[
        "oracle-check",
        "--config",
        config.to_str().unwrap(),
        "--ladder",
        "10,20,40",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = stdout_of(&out);
    assert!(text.contains("state_slope,exact"), "output: {text}");
    assert!(text.contains("result,PASS"));
}

#[test]
fn oracle_check_requires_three_ladder_entries() {
    let out = tricycle(&["oracle-check", "--ladder", "40,80"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn oracle_check_passes_on_the_default_ladder() {
    let out = tricycle(&["oracle-check", "--ladder", "20,40,80", "--nodes", "401"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = stdout_of(&out);
    assert!(text.contains("result,PASS"), "output: {text}");
    assert!(text.contains("state_slope,"));
}
