//! End-to-end smoke tests for the `paravi` binary: the documented invocations
//! run with their stated exit codes and artifacts.

use std::path::Path;
use std::process::{Command, Output};

fn paravi(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_paravi"))
        .args(args)
        .current_dir(dir)
        .env_remove("PARAVI_OUT_DIR")
        .output()
        .expect("binary launches")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn run_inertial_on_benchmark_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = paravi(
        dir.path(),
        &[
            "run", "--problem", "paper-sec5", "--mode", "discrete-inertial",
            "--family", "powerlawD", "--p", "0.5", "--q", "0.5",
            "--deltaP", "1", "--thetaP", "1", "--lambdaP", "0.5",
            "--tol", "1e-3", "--out-dir", "out",
        ],
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let csv = std::fs::read_to_string(dir.path().join("out/iterates.csv")).unwrap();
    assert!(csv.starts_with("n,z_1,z_2,z_3,residual,feas_violation,step_norm\n"));
    assert!(csv.lines().count() > 10);
    let summary = std::fs::read_to_string(dir.path().join("out/summary.json")).unwrap();
    assert!(summary.contains("\"stop_reason\": \"tol\""), "{summary}");
}

#[test]
fn run_counterexample_records_infeasibility() {
    let dir = tempfile::tempdir().unwrap();
    let out = paravi(
        dir.path(),
        &[
            "run", "--problem", "remark-counterexample",
            "--mode", "continuous-second-order", "--t-end", "4.8",
            "--out-dir", "out",
        ],
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let csv = std::fs::read_to_string(dir.path().join("out/trajectory.csv")).unwrap();
    let pi = std::f64::consts::PI;
    let mut violated_inside_window = false;
    for line in csv.lines().skip(1) {
        let fields: Vec<f64> = line.split(',').map(|f| f.parse().unwrap()).collect();
        let (t, feas) = (fields[0], fields[3]);
        if t > pi && t < 1.5 * pi && feas > 0.0 {
            violated_inside_window = true;
        }
    }
    assert!(violated_inside_window, "feas_violation must be positive on (pi, 3pi/2)");
}

#[test]
fn validate_rejects_h_at_boundary_with_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = paravi(
        dir.path(),
        &["validate", "--family", "powerlawA", "--h", "2", "--s", "0.3", "--p", "0.5", "--q", "0.4"],
    );
    assert_eq!(code(&out), 2, "{}", stderr(&out));
    assert!(stderr(&out).contains("h>2"), "must name the violated inequality: {}", stderr(&out));
}

#[test]
fn validate_accepts_families_with_exit_0() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["validate", "--family", "powerlawA", "--h", "3", "--s", "0.3", "--p", "0.5", "--q", "0.4"],
        vec!["validate", "--family", "powerlawB", "--h", "2.5", "--s", "0.35", "--q", "0.71", "--u", "1"],
        vec!["validate", "--family", "powerlawD", "--p", "0.5", "--q", "0.5", "--deltaP", "1", "--thetaP", "1", "--lambdaP", "0.5"],
    ] {
        let out = paravi(dir.path(), &args);
        assert_eq!(code(&out), 0, "{args:?}: {}", stderr(&out));
        let text = String::from_utf8_lossy(&out.stdout).into_owned();
        assert!(text.contains("satisfied: yes"), "{text}");
    }
}

#[test]
fn reproduce_fig3_manifest_lists_both_methods_with_matching_horizons() {
    let dir = tempfile::tempdir().unwrap();
    let out = paravi(dir.path(), &["reproduce", "fig3", "--out-dir", "out", "--max-iters", "2000"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("out/manifest.json")).unwrap())
            .unwrap();
    let files = manifest["files"].as_array().unwrap();
    let inertial: Vec<_> = files
        .iter()
        .filter(|f| f["config"]["mode"] == "discrete-inertial")
        .collect();
    let direct: Vec<_> = files
        .iter()
        .filter(|f| f["config"]["mode"] == "discrete-direct")
        .collect();
    assert!(inertial.len() >= 2);
    assert_eq!(direct.len(), 1);
    let horizon = &direct[0]["config"]["max_iters"];
    assert!(files.iter().all(|f| &f["config"]["max_iters"] == horizon));
    for f in files {
        assert!(dir.path().join("out").join(f["path"].as_str().unwrap()).exists());
    }
}

#[test]
fn reproduce_fig1_varies_h_with_fixed_exponents() {
    let dir = tempfile::tempdir().unwrap();
    let out = paravi(dir.path(), &["reproduce", "fig1", "--out-dir", "out", "--t-end", "5"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("out/manifest.json")).unwrap())
            .unwrap();
    let files = manifest["files"].as_array().unwrap();
    assert!(files.len() >= 2);
    let mut hs = Vec::new();
    for f in files {
        assert_eq!(f["config"]["u"], 1.0);
        assert_eq!(f["config"]["s"], 0.35);
        assert_eq!(f["config"]["q"], 0.71);
        hs.push(f["config"]["h"].as_f64().unwrap());
    }
    hs.dedup();
    assert!(hs.len() >= 2, "need curves for at least two h values: {hs:?}");
}

#[test]
fn reproduce_unknown_figure_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let out = paravi(dir.path(), &["reproduce", "fig9", "--out-dir", "out"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn bad_flag_value_exits_1_naming_the_key() {
    let dir = tempfile::tempdir().unwrap();
    let out = paravi(
        dir.path(),
        &["run", "--problem", "paper-sec5", "--mode", "discrete-inertial", "--x0", "1,zz,0"],
    );
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("x0"), "{}", stderr(&out));

    let out = paravi(dir.path(), &["run", "--problem", "paper-sec5", "--mode", "no-such-mode"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("mode"), "{}", stderr(&out));
}

#[test]
fn unvalidated_schedule_run_exits_2_without_override() {
    let dir = tempfile::tempdir().unwrap();
    // beta1 + xi = 2.3 > 2 violates the convex window.
    std::fs::write(
        dir.path().join("sched.csv"),
        "n,beta0,beta1,xi,eta\n0,0.5,1.5,0.8,0\n1,0.4,1.5,0.8,0\n2,0.3,1.5,0.8,0\n",
    )
    .unwrap();
    let out = paravi(
        dir.path(),
        &[
            "run", "--problem", "paper-sec5", "--mode", "discrete-inertial",
            "--family", "custom-discrete", "--csv", "sched.csv",
            "--q1", "0.5", "--q2", "0.5", "--out-dir", "out",
        ],
    );
    assert_eq!(code(&out), 2, "{}", stderr(&out));
    assert!(stderr(&out).contains("beta1"), "{}", stderr(&out));
}

#[test]
fn diverging_run_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    // beta1 = 5 puts a root of the two-term recursion at -4: iterates blow up.
    std::fs::write(
        dir.path().join("sched.csv"),
        "n,beta0,beta1,xi,eta\n0,0.0,5.0,0.0,0\n1,0.0,5.0,0.0,0\n",
    )
    .unwrap();
    let out = paravi(
        dir.path(),
        &[
            "run", "--problem", "paper-sec5", "--mode", "discrete-inertial",
            "--family", "custom-discrete", "--csv", "sched.csv",
            "--allow-unvalidated", "--tol", "0", "--max-iters", "100000",
            "--out-dir", "out",
        ],
    );
    assert_eq!(code(&out), 3, "{}", stderr(&out));
    assert!(stderr(&out).contains("divergence"), "{}", stderr(&out));
}

#[test]
fn config_file_and_problem_json_drive_a_run() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("problem.json"),
        r#"{
            "dimension": 2,
            "operator": {"kind": "identity"},
            "set": {"kind": "ball", "center": [0, 0], "radius": 1.0},
            "reference_solution": [0, 0]
        }"#,
    )
    .unwrap();
    std::fs::write(
        dir.path().join("run.json"),
        r#"{
            "problem": "problem.json",
            "mode": "discrete-direct",
            "tau": 0.75,
            "stop": {"residual_tol": 1e-4, "max_iters": 100000},
            "x0": [1.0, 0.0],
            "out_dir": "out"
        }"#,
    )
    .unwrap();
    let out = paravi(dir.path(), &["run", "--config", "run.json"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(dir.path().join("out/iterates.csv").exists());
    let summary = std::fs::read_to_string(dir.path().join("out/summary.json")).unwrap();
    assert!(summary.contains("discrete-direct"));
}

#[test]
fn out_dir_env_var_overrides_flag() {
    let dir = tempfile::tempdir().unwrap();
    let forced = dir.path().join("forced");
    let out = Command::new(env!("CARGO_BIN_EXE_paravi"))
        .args([
            "run", "--problem", "identity-ball", "--mode", "discrete-direct",
            "--tau", "0.75", "--x0", "0.5,0,0", "--tol", "1e-3",
            "--out-dir", "ignored",
        ])
        .current_dir(dir.path())
        .env("PARAVI_OUT_DIR", &forced)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(forced.join("iterates.csv").exists());
    assert!(!dir.path().join("ignored").exists());
}

#[test]
fn compare_mode_writes_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = paravi(
        dir.path(),
        &[
            "run", "--problem", "paper-sec5", "--mode", "compare",
            "--tol", "1e-3", "--max-iters", "100000", "--out-dir", "out",
        ],
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let csv = std::fs::read_to_string(dir.path().join("out/comparison.csv")).unwrap();
    assert!(csv.starts_with("method,schedule,iters_to_tol,final_residual,wall_ms\n"));
    assert!(csv.contains("inertial"));
    assert!(csv.contains("direct"));
}
