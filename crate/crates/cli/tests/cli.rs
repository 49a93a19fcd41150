//! Black-box tests of the command-line binary: artifact layout, exit
//! codes, configuration precedence, and the sweep driver.

use std::fs;
use std::process::{Command, Output};

fn run_cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bicluster"))
        .args(args)
        .output()
        .expect("failed to spawn binary")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn read_json(path: &std::path::Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(path).expect("read json")).expect("parse json")
}

#[test]
fn presets_subcommand_lists_catalog() {
    let out = run_cli(&["presets"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    for name in ["example-6-1", "two-particle", "three-particle", "theorem-5-1-negative"] {
        assert!(text.contains(name), "catalog output missing {name}:\n{text}");
    }
}

#[test]
fn run_writes_artifacts_and_reports_certificates() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("out");
    let out = run_cli(&[
        "run",
        "--preset",
        "two-particle",
        "--dump-states",
        "--out-dir",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));

    for file in ["run.csv", "states.csv", "summary.json"] {
        assert!(out_dir.join(file).is_file(), "{file} missing");
    }
    let summary = read_json(&out_dir.join("summary.json"));
    assert_eq!(summary["preset"], "two-particle");
    assert_eq!(summary["samples"], 201);
    assert_eq!(summary["t_final"], 2.0);
    assert!(summary["diverged"].is_null());
    assert_eq!(summary["outputs"]["states"], "states.csv");

    let csv = fs::read_to_string(out_dir.join("run.csv")).unwrap();
    let header = csv.lines().next().unwrap();
    assert_eq!(
        header,
        "t,m2,m2_hat,center_sep,dx,dv,dy,dw,min_inter_dist,psi_d_upper,psi_s_lower"
    );
    assert_eq!(csv.lines().count(), 202);
}

#[test]
fn certificate_outcomes_are_printed() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_cli(&[
        "run",
        "--preset",
        "lyapunov-negative",
        "--out-dir",
        dir.path().join("out").to_str().unwrap(),
    ]);
    // Violations alone do not fail the run without --strict.
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    let text = stdout_of(&out);
    assert!(text.contains("certificate theorem31_hypotheses: Holds"), "{text}");
    assert!(text.contains("certificate lyapunov_functionals: Violated"), "{text}");
}

#[test]
fn strict_mode_exits_4_on_violation() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_cli(&[
        "run",
        "--preset",
        "lyapunov-negative",
        "--strict",
        "--out-dir",
        dir.path().join("out").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(4), "stderr: {}", stderr_of(&out));
    // Artifacts are still written for the failed gate.
    assert!(dir.path().join("out/summary.json").is_file());
}

#[test]
fn unknown_preset_exits_2() {
    let out = run_cli(&["run", "--preset", "no-such-preset"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("no-such-preset"));
}

#[test]
fn malformed_config_exits_2_with_line_number() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.cfg");
    fs::write(&path, "model.n1 = 4\nthis line has no equals\n").unwrap();
    let out = run_cli(&["run", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr_of(&out);
    assert!(err.contains("line 2"), "missing line number: {err}");

    let path = dir.path().join("unknown.cfg");
    fs::write(&path, "model.unheard_of = 3\n").unwrap();
    let out = run_cli(&["run", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("model.unheard_of"));
}

#[test]
fn config_file_and_flags_layer_over_preset() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("override.cfg");
    fs::write(&path, "# tighten the run\nmodel.kappa_d = 2.5\nseed = 9\nsim.t_end = 1\n").unwrap();
    let out_dir = dir.path().join("out");
    let out = run_cli(&[
        "run",
        "--preset",
        "two-particle",
        "--config",
        path.to_str().unwrap(),
        "--seed",
        "11",
        "--out-dir",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    let summary = read_json(&out_dir.join("summary.json"));
    // Precedence: preset < config file < command-line flags.
    assert_eq!(summary["seed"], 11);
    assert_eq!(summary["config"]["model.kappa_d"], "2.5e0");
    assert_eq!(summary["config"]["sim.t_end"], "1e0");
    assert_eq!(summary["config"]["model.n1"], "1");
    assert_eq!(summary["t_final"], 1.0);
}

#[test]
fn divergence_exits_3_and_keeps_partial_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("blowup.cfg");
    fs::write(
        &path,
        "model.n1 = 1\nmodel.n2 = 1\nmodel.dim = 1\nmodel.kappa_d = 10\n\
         init.kind = explicit\ninit.x = 0\ninit.v = 1e307\ninit.y = 0\ninit.w = -1e307\n\
         sim.dt = 1e-2\nsim.t_end = 1\ncertificates = none\n",
    )
    .unwrap();
    let out_dir = dir.path().join("out");
    let out = run_cli(&[
        "run",
        "--config",
        path.to_str().unwrap(),
        "--out-dir",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3), "stderr: {}", stderr_of(&out));
    assert!(stderr_of(&out).contains("diverged"));

    let summary = read_json(&out_dir.join("summary.json"));
    let t = summary["diverged"]["t"].as_f64().expect("divergence time");
    assert!(t > 0.0 && t <= 1.0, "odd divergence time {t}");
    // The surviving prefix is still recorded.
    let csv = fs::read_to_string(out_dir.join("run.csv")).unwrap();
    assert!(csv.lines().count() >= 2, "no samples survived:\n{csv}");
}

#[test]
fn sweep_writes_rows_and_run_dirs() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("sweep");
    let out = run_cli(&[
        "sweep",
        "--preset",
        "two-particle",
        "--axis",
        "model.kappa_s",
        "--values",
        "1,0",
        "--parallelism",
        "2",
        "--out-dir",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));

    let csv = fs::read_to_string(out_dir.join("sweep.csv")).unwrap();
    let mut lines = csv.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("value,dir,error,diverged_t,"), "header: {header}");
    // Rows come back sorted by axis value.
    let first: Vec<&str> = lines.next().unwrap().split(',').collect();
    let second: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!((first[0], first[1]), ("0.0000000000000000e0", "run-000"));
    assert_eq!((second[0], second[1]), ("1.0000000000000000e0", "run-001"));
    for idx in 0..2 {
        let summary = read_json(&out_dir.join(format!("run-{idx:03}/summary.json")));
        assert_eq!(summary["samples"], 201);
    }
}
