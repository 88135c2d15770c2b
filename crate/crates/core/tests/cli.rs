use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn dir(tag: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("stokes2d-cli-{}-{tag}", std::process::id()));
    let _ = std::fs::remove_dir_all(&d);
    std::fs::create_dir_all(&d).unwrap();
    d
}

fn run(args: &[&str], config: &str, out: &Path) -> Output {
    let cfg = out.join("config.json");
    std::fs::write(&cfg, config).unwrap();
    Command::new(env!("CARGO_BIN_EXE_stokes2d"))
        .args(args)
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(out.join("results"))
        .env_remove("STOKES2D_THREADS")
        .output()
        .unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn unknown_key_is_a_config_error_with_suggestion() {
    let d = dir("typo");
    let o = run(&["solve-dirichlet"], r#"{"lamda": [1, 0]}"#, &d);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("lambda"), "{}", stderr(&o));
}

#[test]
fn theta_out_of_range_names_the_field() {
    let d = dir("theta");
    let o = run(&["solve-dirichlet"], r#"{"theta": 2.0}"#, &d);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("theta"), "{}", stderr(&o));
}

#[test]
fn syntax_error_reports_position() {
    let d = dir("syntax");
    let o = run(&["solve-dirichlet"], "{\n  \"theta\": ,\n}", &d);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
}

#[test]
fn mismatched_command_is_rejected() {
    let d = dir("mismatch");
    let o = run(&["solve-dirichlet"], r#"{"command": "semigroup"}"#, &d);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn incompatible_data_exit_three() {
    let d = dir("incompatible");
    let o = run(&["solve-dirichlet"], r#"{"dirichlet": {"levels": [8], "data": {"kind": "normal", "amplitude": 1.0}}}"#, &d);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("compatibility condition"), "{}", stderr(&o));
}

#[test]
fn zero_threads_is_a_config_error() {
    let d = dir("threads");
    let o = run(&["verify-kernels", "--threads", "0"], "{}", &d);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn dirichlet_writes_outputs_and_hash() {
    let d = dir("outputs");
    let o = run(&["solve-dirichlet", "--threads", "1"], r#"{"dirichlet": {"levels": [8, 16]}}"#, &d);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let res = d.join("results");
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(res.join("report.json")).unwrap()).unwrap();
    let hash = report["config_hash"].as_str().unwrap();
    assert_eq!(hash.len(), 64);
    assert!(String::from_utf8_lossy(&o.stdout).contains(hash));
    let echo: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(res.join("resolved_config.json")).unwrap()).unwrap();
    assert_eq!(echo["command"], "solve-dirichlet");
    assert_eq!(echo["mesh"]["panels"], 32);
    assert_eq!(echo["mesh"]["nodes_per_panel"], 8);
    let csv = std::fs::read_to_string(res.join("dirichlet_levels.csv")).unwrap();
    assert!(csv.starts_with("panels,nodes,unknowns,rel_error"));
    assert!(!csv.contains('\r'));
}

#[test]
fn single_point_lambda_grid_runs_but_flags_coverage() {
    let d = dir("coverage");
    let cfg = r#"{"lambda_grid": {"moduli": [1.0], "arguments": [0.0]},
                  "sweep": {"exponents": [2.0],
                            "coarse": {"panels": 4, "nodes_per_panel": 6, "grid": 12},
                            "fine": {"panels": 8, "nodes_per_panel": 6, "grid": 16}}}"#;
    let o = run(&["resolvent-sweep"], cfg, &d);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("FAIL lambda coverage: insufficient coverage"), "{stdout}");
    let csv = std::fs::read_to_string(d.join("results/sweep.csv")).unwrap();
    assert!(csv.starts_with("lambda_re,lambda_im,abs_lambda,q,ratio,mesh_N,grid_N\n"));
}
