//! Source voltage for a target shift angle, checked by quadrature.

use std::f64::consts::PI;

use qubit_pair::circuit::CircuitParams;
use qubit_pair::pulse::{
    calibrate_voltage, shift_angle_quadrature, DriveMode, PulseConfig, QuadratureWindow,
};

fn main() -> qubit_pair::Result<()> {
    let d = CircuitParams::weak_coupling().derive()?;
    let sigma_t = 0.7e-9;
    let carrier = (1.0 + d.gamma * d.gamma / 4.0).sqrt() * d.omega_r();

    println!(
        "{:>5} {:>8} {:>14} {:>12}",
        "mode", "theta", "V_s [V]", "quadrature"
    );
    for mode in [DriveMode::Even, DriveMode::Odd] {
        for theta in [PI / 2.0, PI, 2.0 * PI] {
            let v_s = calibrate_voltage(theta, mode, &d, sigma_t)?;
            let pulse = PulseConfig {
                v_s,
                sigma_t,
                carrier,
                phi_d: 0.0,
                t_center: 0.0,
                mode,
            };
            let check = shift_angle_quadrature(&pulse, &d, QuadratureWindow::default())?;
            println!(
                "{:>5} {theta:>8.4} {v_s:>14.6e} {check:>12.8}",
                mode.as_str()
            );
        }
    }
    Ok(())
}
