//! End-to-end tests of the `ccopt` binary: exit codes, output formats, and
//! the compare workflow.

use std::path::{Path, PathBuf};
use std::process::Command;

fn ccopt() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ccopt"))
}

fn temp_path(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("ccopt_cli_{}_{name}", std::process::id()))
}

fn data_file(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

#[test]
fn list_tasks_exits_zero() {
    let out = ccopt().arg("list-tasks").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["quadratic", "plateau_ramp", "barren_local", "vqe_tfim2", "fourier_r2", "iris"] {
        assert!(text.contains(name), "missing {name}");
    }
}

#[test]
fn run_quadratic_emits_expected_csv_row() {
    let out = ccopt()
        .args([
            "run", "--task", "quadratic", "--rule", "gd", "--lr", "0.4", "--threshold", "1e-6",
            "--seeds", "1",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let row = text.lines().nth(1).unwrap();
    let fields: Vec<&str> = row.split(',').collect();
    assert_eq!(fields[5], "converged");
    assert_eq!(fields[6], "5");
}

#[test]
fn unknown_task_exits_one_and_names_the_flag() {
    let out = ccopt().args(["run", "--task", "nope"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("--task"), "stderr was: {err}");
}

#[test]
fn missing_required_input_exits_one() {
    let out = ccopt().args(["run", "--task", "iris"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("--data"));
}

#[test]
fn json_output_with_traces() {
    let path = temp_path("run.json");
    let out = ccopt()
        .args([
            "run", "--task", "quadratic", "--rule", "gd", "--lr", "0.4", "--threshold", "1e-6",
            "--seeds", "2", "--format", "json", "--traces", "--out",
        ])
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["results"].as_array().unwrap().len(), 2);
    assert_eq!(doc["trajectories"].as_array().unwrap().len(), 2);
    assert_eq!(doc["stats"]["n_trials"], 2);
    assert!(doc["trajectories"][0]["records"].as_array().unwrap().len() >= 5);
}

#[test]
fn vqe_file_task_reads_hamiltonian() {
    let out = ccopt()
        .args(["run", "--task", "vqe_file", "--rule", "adam", "--lr", "0.1", "--seeds", "2", "--max-iters", "300", "--hamiltonian"])
        .arg(data_file("tfim2.ham"))
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 3); // header + 2 rows
}

#[test]
fn compare_runs_two_config_files() {
    let base_cfg = temp_path("base.cfg");
    let cand_cfg = temp_path("cand.cfg");
    std::fs::write(
        &base_cfg,
        "task = plateau_ramp\nrule = gd\nlr = 0.1\nmax_iters = 80\n",
    )
    .unwrap();
    std::fs::write(
        &cand_cfg,
        "task = plateau_ramp\nrule = gd\nlr = 0.1\nmax_iters = 80\ntransform = rotation\nalpha = -0.7853981633974483\npolicy = adaptive\n",
    )
    .unwrap();

    let report_path = temp_path("report.json");
    let out = ccopt()
        .arg("compare")
        .arg(&base_cfg)
        .arg(&cand_cfg)
        .args(["--seeds", "3", "--out"])
        .arg(&report_path)
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("iteration ratio"));

    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report_path).unwrap()).unwrap();
    assert_eq!(doc["baseline"]["success_rate"], 0.0);
    assert_eq!(doc["candidate"]["success_rate"], 1.0);
}

#[test]
fn compare_detects_seed_mismatch() {
    let base_cfg = temp_path("mismatch_a.cfg");
    let cand_cfg = temp_path("mismatch_b.cfg");
    std::fs::write(&base_cfg, "task = quadratic\nseeds = 2\n").unwrap();
    std::fs::write(&cand_cfg, "task = quadratic\nseeds = 3\n").unwrap();
    let out = ccopt().arg("compare").arg(&base_cfg).arg(&cand_cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().contains("seed"));
}

#[test]
fn config_file_flag_precedence() {
    let cfg = temp_path("precedence.cfg");
    std::fs::write(&cfg, "task = quadratic\nrule = gd\nlr = 0.01\nseeds = 1\nthreshold = 1e-6\nmax_iters = 200\n").unwrap();
    // the flag overrides lr = 0.01 with the fast 0.4 setting
    let out = ccopt()
        .args(["run", "--config"])
        .arg(&cfg)
        .args(["--lr", "0.4"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().nth(1).unwrap().split(',').nth(6).unwrap(), "5");
}

#[test]
fn bad_flag_value_exits_one() {
    let out = ccopt()
        .args(["run", "--task", "quadratic", "--seeds", "abc"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn thread_cap_env_is_respected() {
    // Serial and parallel execution must produce the same CSV (minus wall_ms).
    let strip = |s: &str| -> String {
        s.lines()
            .map(|l| l.rsplit_once(',').map_or(l.to_string(), |(h, _)| h.to_string()))
            .collect::<Vec<_>>()
            .join("\n")
    };
    let run_with = |threads: &str| {
        let out = ccopt()
            .env("CCOPT_THREADS", threads)
            .args(["run", "--task", "quadratic", "--rule", "gd", "--lr", "0.4", "--threshold", "1e-6", "--seeds", "6"])
            .output()
            .unwrap();
        assert!(out.status.success());
        String::from_utf8(out.stdout).unwrap()
    };
    assert_eq!(strip(&run_with("1")), strip(&run_with("4")));
    assert_eq!(strip(&run_with("1")), strip(&run_with("0")));
}
