//! Circuit elements to coupling ratio, frequencies and drive coefficients.

use qubit_pair::analytic::spectral_params;
use qubit_pair::circuit::{drive_coefficients, CircuitParams};

fn main() -> qubit_pair::Result<()> {
    for (label, circuit) in [
        ("representative", CircuitParams::representative()),
        ("weak coupling", CircuitParams::weak_coupling()),
    ] {
        let d = circuit.derive()?;
        let sp = spectral_params(&d)?;
        println!("{label}:");
        println!("  gamma        {:.6}", d.gamma);
        println!("  C_s          {:e} F", d.c_s);
        println!("  omega_1      {:e} rad/s", d.omega_1);
        println!("  omega_g      {:e} rad/s", d.omega_g);
        println!("  lambda_sigma {:e} rad/s", sp.lambda_sigma);
        println!("  lambda_delta {:e} rad/s", sp.lambda_delta);
        println!("  sigma_phi    {:e} Wb", d.sigma_phi());

        for (mode, v2) in [("even", 1.0), ("odd", -1.0)] {
            let c = drive_coefficients(&d, 1.0, v2);
            println!(
                "  {mode:4} per volt: qubit 1 {:e}, qubit 2 {:e}",
                c.qubit1_total(),
                c.qubit2_total()
            );
        }
    }
    Ok(())
}
