//! Rotating-wave end states over a range of shift angles.

use qubit_pair::analytic::{end_state, evolution_matrix, SpectralParams};
use qubit_pair::operators::unitarity_defect;
use qubit_pair::pulse::DriveMode;

fn main() {
    let sp = SpectralParams::from_gamma(0.05, 1.0);
    println!("rho_c {:.6}  rho_s {:.6}", sp.rho_c, sp.rho_s);
    for mode in [DriveMode::Even, DriveMode::Odd] {
        println!("{} mode:", mode.as_str());
        for k in 0..=4 {
            let theta = k as f64 * std::f64::consts::PI / 4.0;
            let psi = end_state(mode, &sp, theta);
            let defect = unitarity_defect(&evolution_matrix(mode, &sp, theta));
            println!(
                "  theta {theta:.4}  |c| {:.4?}  unitarity defect {defect:.1e}",
                psi.magnitudes()
            );
        }
    }
}
