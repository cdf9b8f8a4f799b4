//! Sweeps the coupling ratio and prints the resulting table.
//!
//! `cargo run --example parameter_sweep -- <axis> <v1,v2,...>` sweeps any
//! axis (`V_s`, `sigma_t`, `gamma`, `dt`, `phi_d`).

use qubit_pair::harness::{
    parse_config, parse_values, run_sweep, sweep_csv, SweepAxis, GRAL_LIKE_CONFIG,
};

fn main() -> qubit_pair::Result<()> {
    let mut args = std::env::args().skip(1);
    let axis: SweepAxis = args.next().as_deref().unwrap_or("gamma").parse()?;
    let values = match args.next() {
        Some(list) => parse_values(&list)?,
        None => vec![0.005, 0.01, 0.02, 0.05, 0.1],
    };
    let cfg = parse_config(GRAL_LIKE_CONFIG)?;
    let rows = run_sweep(&cfg, axis, &values)?;
    print!("{}", sweep_csv(axis, &rows));
    Ok(())
}
