use std::path::Path;
use std::process::Command;

use qubit_pair::verify::{self, CriterionOutcome};

fn simulate_twice(config: &Path) -> (Vec<u8>, Vec<u8>) {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for run in ["a", "b"] {
        let out_dir = dir.path().join(run);
        let status = Command::new(env!("CARGO_BIN_EXE_qubit-pair"))
            .args(["simulate", "--quiet", "--config"])
            .arg(config)
            .arg("--out-dir")
            .arg(&out_dir)
            .status()
            .unwrap();
        assert!(status.success());
        outputs.push((
            std::fs::read(out_dir.join("series.csv")).unwrap(),
            std::fs::read(out_dir.join("summary.json")).unwrap(),
        ));
    }
    let (a, b) = (&outputs[0], &outputs[1]);
    assert_eq!(a.1, b.1, "summary.json differs between runs");
    (a.0.clone(), b.0.clone())
}

// Runs without the libtest harness so the criterion lines are always shown.
fn main() {
    let mut outcomes: Vec<CriterionOutcome> = verify::verify_all();

    // The in-process determinism check is backed by two separate processes.
    let config = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/gral-like.json");
    let (a, b) = simulate_twice(&config);
    let c9 = outcomes.iter_mut().find(|o| o.id == 9).unwrap();
    c9.passed &= a == b && !a.is_empty();
    c9.detail.push_str(&format!(
        "; two CLI processes, {} CSV bytes, identical: {}",
        a.len(),
        a == b
    ));

    for o in &outcomes {
        println!("{}", o.line());
    }
    let failed: Vec<u8> = outcomes
        .iter()
        .filter(|o| !o.passed)
        .map(|o| o.id)
        .collect();
    assert_eq!(outcomes.len(), 9);
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
    println!("acceptance: all 9 criteria passed");
}
