//! End-to-end checks of the command-line driver: exit codes, report files,
//! and byte-level determinism of CSV bodies.

use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_traceform"))
}

fn tmp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("traceform-cli-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_file(dir: &Path, name: &str, contents: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

/// CSV body: everything except `#` comment lines.
fn csv_body(path: &Path) -> String {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn converge_writes_reports_and_is_deterministic() {
    let dir = tmp_dir("converge");
    let cfg = write_file(
        &dir,
        "cfg.json",
        r#"{
            "kernel": {"type": "exponential1d"},
            "sequence": {"family": "truncated-exponential", "rate": 0.5, "n_max": 10, "schedule": [1,2,3,4,5,6,7,8,9,10]},
            "grid": {"lo": -15, "hi": 15, "step": 0.01},
            "k_max": 3
        }"#,
    );
    for run in ["a", "b"] {
        let out = dir.join(run);
        let status = bin()
            .args(["converge", "--config"])
            .arg(&cfg)
            .arg("--out")
            .arg(&out)
            .arg("--trials")
            .arg("20")
            .status()
            .unwrap();
        assert!(status.success(), "converge run {run} failed");
        assert!(out.join("report.csv").exists());
        assert!(out.join("operator_bound.csv").exists());
        assert!(out.join("summary.json").exists());
    }
    assert_eq!(
        csv_body(&dir.join("a/report.csv")),
        csv_body(&dir.join("b/report.csv")),
        "CSV bodies must be byte-identical across reruns"
    );
    assert_eq!(
        csv_body(&dir.join("a/operator_bound.csv")),
        csv_body(&dir.join("b/operator_bound.csv"))
    );

    // Header columns as documented.
    let body = csv_body(&dir.join("a/report.csv"));
    assert!(body.starts_with("n,k,E_n_k,bound_n,gap_k,ratio_k"));
    // Config hash embedded in the comments.
    let full = std::fs::read_to_string(dir.join("a/report.csv")).unwrap();
    assert!(full.contains("# config-hash: "));
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("a/summary.json")).unwrap())
            .unwrap();
    assert_eq!(summary["schema_version"], "1");
    assert_eq!(summary["pass"], true);
    assert!(summary["config_hash"].is_string());
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn malformed_config_exits_1_without_reports() {
    let dir = tmp_dir("badcfg");
    let cfg = write_file(&dir, "bad.json", "{ this is not json");
    let out = dir.join("out");
    let status = bin()
        .args(["converge", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(1));
    assert!(!out.exists(), "no partial reports on config errors");
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn usage_error_exits_1() {
    let status = bin().arg("no-such-command").status().unwrap();
    assert_eq!(status.code(), Some(1));
}

#[test]
fn ball_eig_summary_fields() {
    let dir = tmp_dir("balleig");
    let status = bin()
        .args(["ball-eig", "--m", "0", "--tol", "1e-8", "--out"])
        .arg(&dir)
        .status()
        .unwrap();
    assert!(status.success());
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("summary.json")).unwrap()).unwrap();
    let value = summary["value"].as_f64().unwrap();
    let coth1_minus_1 = 1.0 / 1.0_f64.tanh() - 1.0;
    assert!((value - coth1_minus_1).abs() < 1e-8);
    assert_eq!(summary["multiplicity"], 1);
    assert!(summary["tail_bound"].as_f64().unwrap() < 1e-8);
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn spectrum_command_reports_hardy_interval() {
    let dir = tmp_dir("spectrum");
    let cfg = write_file(
        &dir,
        "cfg.json",
        r#"{
            "kernel": {"type": "exponential1d"},
            "measure": {"type": "atomic", "points": [0, 1], "weights": [1, 1]},
            "grid": {"lo": -5, "hi": 5, "step": 0.01}
        }"#,
    );
    let out = dir.join("out");
    let status = bin()
        .args(["spectrum", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    let lo = summary["hardy_lower"].as_f64().unwrap();
    let hi = summary["hardy_upper"].as_f64().unwrap();
    let lam = 0.5 * (1.0 + (-1.0_f64).exp());
    assert!((lo - lam).abs() < 1e-12);
    assert!(hi >= lo - 1e-12);
    let body = csv_body(&out.join("spectrum.csv"));
    assert!(body.starts_with("k,lambda,energy,group"));
    assert_eq!(body.lines().count(), 3); // header + two eigenvalues
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn kato_check_verdicts_drive_exit_codes() {
    let dir = tmp_dir("kato");
    let lebesgue = write_file(&dir, "lebesgue.json", r#"{"type":"lebesgue","a":0,"b":1}"#);
    let atom = write_file(
        &dir,
        "atom.json",
        r#"{"type":"atomic","points":[0],"weights":[1]}"#,
    );

    let out = dir.join("pass");
    let status = bin()
        .args([
            "kato-check",
            "--kernel",
            "riesz",
            "--d",
            "1",
            "--alpha",
            "0.5",
            "--radii",
            "0.1,0.01,0.001",
            "--measure",
        ])
        .arg(&lebesgue)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["verdict"], "pass");

    // A point atom with beta = 1/2 fails, but the reports are still written.
    let out = dir.join("fail");
    let status = bin()
        .args([
            "kato-check",
            "--kernel",
            "riesz",
            "--d",
            "1",
            "--alpha",
            "0.5",
            "--radii",
            "0.1,0.01,0.001",
            "--measure",
        ])
        .arg(&atom)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
    assert!(out.join("kato.csv").exists());
    assert!(out.join("summary.json").exists());
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn graph1d_validate_and_annulus_gap_pass() {
    let dir = tmp_dir("g1d");
    let status = bin()
        .args([
            "graph1d-validate",
            "--rate",
            "0.5",
            "--n",
            "10",
            "--tol",
            "1e-9",
            "--out",
        ])
        .arg(&dir)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["pass"], true);
    assert!(summary["bare_boundary_discrepancy"].as_f64().unwrap() > 1e-3);

    let out = dir.join("gap");
    let status = bin()
        .args(["annulus-gap", "--n", "2,4,8,16,32", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    let slope = summary["slope"].as_f64().unwrap();
    assert!((slope + 1.0).abs() <= 0.1);
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn stationary_compare_over_thinning_shell() {
    let dir = tmp_dir("stationary");
    let cfg = write_file(
        &dir,
        "cfg.json",
        r#"{
            "kernel": {"type": "newtonian", "d": 3},
            "sequence": {"family": "thinning-shell", "schedule": [2, 3, 4], "slices_per_band": 3},
            "grid": {"lo": 0, "hi": 3, "step": 0.02},
            "alpha": 1.0
        }"#,
    );
    let out = dir.join("out");
    let status = bin()
        .args(["stationary", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let body = csv_body(&out.join("stationary_compare.csv"));
    assert!(body.starts_with("n,sup_diff,bound,identity_residual,pass"));
    assert_eq!(body.lines().count(), 4);
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn stationary_solve_single_family() {
    let dir = tmp_dir("stsolve");
    let cfg = write_file(
        &dir,
        "cfg.json",
        r#"{
            "kernel": {"type": "newtonian", "d": 3},
            "measure": {"type": "spheres", "radii": [1.0], "masses": [1.0]},
            "grid": {"lo": 0, "hi": 3, "step": 0.05},
            "alpha": 12.566370614359172
        }"#,
    );
    let out = dir.join("out");
    let status = bin()
        .args(["stationary", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    // alpha = 4π halves the plain potential: u = 1/(8π) inside the sphere.
    let body = csv_body(&out.join("stationary_field.csv"));
    let (_, u) = body
        .lines()
        .skip(1)
        .map(|l| {
            let mut cells = l.split(',');
            let r: f64 = cells.next().unwrap().parse().unwrap();
            let u: f64 = cells.next().unwrap().parse().unwrap();
            (r, u)
        })
        .find(|(r, _)| (r - 0.7).abs() < 1e-9)
        .expect("row near r = 0.7");
    assert!((u - 1.0 / (8.0 * std::f64::consts::PI)).abs() < 1e-12);
    let _ = std::fs::remove_dir_all(&dir);
}
