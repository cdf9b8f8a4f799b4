//! The interaction-picture result mapped back to the lab frame agrees with a
//! direct lab-frame integration, and the gap shrinks with the step.

use qubit_pair::harness::{parse_config, GRAL_LIKE_CONFIG};
use qubit_pair::pulse::DriveMode;
use qubit_pair::verify::frame_identity_error;

fn main() -> qubit_pair::Result<()> {
    let even = parse_config(GRAL_LIKE_CONFIG)?;
    let odd = even.with_mode(DriveMode::Odd)?;
    println!("{:>16} {:>12} {:>12}", "steps/period", "even", "odd");
    for steps in [250.0, 500.0, 1000.0, 2000.0] {
        println!(
            "{steps:>16} {:>12.3e} {:>12.3e}",
            frame_identity_error(&even, steps)?,
            frame_identity_error(&odd, steps)?
        );
    }
    Ok(())
}
