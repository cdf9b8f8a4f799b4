//! Calibrated even-mode pulse from the ground state. Pass an output
//! directory to also write `series.csv` and `summary.json`.

use qubit_pair::harness::{parse_config, run_simulate, GRAL_LIKE_CONFIG};

fn main() -> qubit_pair::Result<()> {
    let cfg = parse_config(GRAL_LIKE_CONFIG)?;
    let out = run_simulate(&cfg)?;
    let r = &out.report;
    println!("steps            {}", r.steps);
    println!("final |c|        {:.5?}", r.final_magnitudes);
    println!(
        "closed form |c|  {:.5?}",
        r.analytic_magnitudes.unwrap_or_default()
    );
    println!("rms vs balanced  {:.4}", r.rms_vs_balanced);
    println!(
        "rms vs analytic  {:.4}",
        r.rms_vs_analytic.unwrap_or(f64::NAN)
    );

    if let Some(dir) = std::env::args().nth(1) {
        out.write(dir.as_ref())?;
        println!("wrote {dir}/series.csv and {dir}/summary.json");
    }
    Ok(())
}
