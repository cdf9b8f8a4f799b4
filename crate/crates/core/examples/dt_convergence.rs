//! Step-size study: error against a fine reference falls as dt^2.

use qubit_pair::harness::{parse_config, GRAL_LIKE_CONFIG};
use qubit_pair::verify::convergence_study;

fn main() -> qubit_pair::Result<()> {
    let cfg = parse_config(GRAL_LIKE_CONFIG)?;
    let study = convergence_study(&cfg)?;
    println!("reference dt {:e} s", study.reference_dt);
    for (dt, err) in study.dt.iter().zip(&study.error) {
        println!("dt {dt:.4e}  error {err:.4e}");
    }
    println!("log-log slope {:.3}", study.slope);
    Ok(())
}
