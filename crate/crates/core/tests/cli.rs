use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qubit-pair"))
}

fn example(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("examples")
        .join(name)
}

fn run(args: &[&str], config: &Path, out_dir: &Path) -> Output {
    bin()
        .args(args)
        .arg("--quiet")
        .arg("--config")
        .arg(config)
        .arg("--out-dir")
        .arg(out_dir)
        .output()
        .unwrap()
}

fn summary(out_dir: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(out_dir.join("summary.json")).unwrap()).unwrap()
}

#[test]
fn simulate_writes_series_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["simulate"], &example("gral-like.json"), dir.path());
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(out.stdout.is_empty());

    let csv = fs::read_to_string(dir.path().join("series.csv")).unwrap();
    assert!(csv.starts_with("t,mag00,mag01,mag10,mag11,envelope\n"));
    // floor(8.4e-9 / 2e-12) + 1 rows
    assert_eq!(csv.lines().count(), 1 + 4201);

    let s = summary(dir.path());
    for key in [
        "final_magnitudes",
        "analytic_magnitudes",
        "rms_vs_analytic",
        "rms_vs_balanced",
        "theta_used",
        "calibrated_V_s",
        "dt",
        "steps",
        "norm_drift",
    ] {
        assert!(s.get(key).is_some(), "summary lacks {key}");
    }
    assert!(s["rms_vs_balanced"].as_f64().unwrap() <= 0.07);
    assert_eq!(s["steps"], 4200);
}

#[test]
fn derive_analytic_and_calibrate() {
    let dir = tempfile::tempdir().unwrap();
    let config = example("gral-like.json");

    assert!(run(&["derive"], &config, &dir.path().join("d"))
        .status
        .success());
    let d = summary(&dir.path().join("d"));
    let gamma = d["derived"]["gamma"].as_f64().unwrap();
    assert!((gamma - 0.55 / 55.55).abs() < 1e-12);

    assert!(run(&["analytic"], &config, &dir.path().join("a"))
        .status
        .success());
    let a = summary(&dir.path().join("a"));
    assert!((a["theta"].as_f64().unwrap() - std::f64::consts::PI).abs() < 1e-9);
    assert_eq!(a["evolution_matrix"].as_array().unwrap().len(), 4);

    let out = run(
        &["calibrate", "--target-theta", "1.5707963267948966"],
        &config,
        &dir.path().join("c"),
    );
    assert!(out.status.success());
    let c = summary(&dir.path().join("c"));
    let half = c["calibrated_V_s"].as_f64().unwrap();
    let full = a["V_s"].as_f64().unwrap();
    assert!((2.0 * half - full).abs() < 1e-12 * full);
}

#[test]
fn sweep_table_is_ordered() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &["sweep", "--axis", "phi_d", "--values", "0.3,-0.2,0"],
        &example("gral-like-odd.json"),
        dir.path(),
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    let keys: Vec<&str> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap())
        .collect();
    assert_eq!(keys, ["0.3", "-0.2", "0.0"]);
}

#[test]
fn empty_sweep_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &["sweep", "--axis", "dt", "--values", ""],
        &example("gral-like.json"),
        dir.path(),
    );
    assert!(out.status.success());
    let csv = fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1);
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let text = fs::read_to_string(example("gral-like.json")).unwrap();

    let bad = dir.path().join("bad.json");
    fs::write(&bad, text.replace("0.55e-15", "-0.55e-15")).unwrap();
    let out = run(&["simulate"], &bad, &dir.path().join("o"));
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("circuit.C_g"));

    let typo = dir.path().join("typo.json");
    fs::write(&typo, text.replace("pulse.phi_d", "pulse.phi")).unwrap();
    assert_eq!(
        run(&["simulate"], &typo, &dir.path().join("o"))
            .status
            .code(),
        Some(2)
    );

    let missing = dir.path().join("nope.json");
    assert_eq!(
        run(&["derive"], &missing, &dir.path().join("o"))
            .status
            .code(),
        Some(2)
    );

    let out = run(
        &["sweep", "--axis", "carrier", "--values", "1"],
        &example("gral-like.json"),
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));

    assert_eq!(
        bin().arg("simulate").output().unwrap().status.code(),
        Some(2)
    );
}

#[test]
fn numerical_failure_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let text = fs::read_to_string(example("gral-like.json")).unwrap();
    // Overflows the drive Hamiltonian; the propagator reports the step.
    let cfg = dir.path().join("huge.json");
    fs::write(
        &cfg,
        text.replace(
            "\"calibrate_to_theta\": 3.141592653589793",
            "\"pulse.V_s\": 1e300",
        ),
    )
    .unwrap();
    let out = run(&["simulate"], &cfg, &dir.path().join("o"));
    assert_eq!(
        out.status.code(),
        Some(3),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}
