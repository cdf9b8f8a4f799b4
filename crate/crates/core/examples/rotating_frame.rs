//! Numeric `exp(i H0 t)` against the closed-form rotating-frame unitary.

use qubit_pair::analytic::{closed_form_rotating_frame, SpectralParams};
use qubit_pair::circuit::{derive_params, CircuitParams, UnitMode};
use qubit_pair::operators::build_h0;
use qubit_pair::propagator::rotating_frame_unitary;

fn main() -> qubit_pair::Result<()> {
    for gamma in [0.01, 0.05, 0.1] {
        let circuit = CircuitParams::symmetric(1.0, 0.9, 0.1, 0.0).with_gamma(gamma)?;
        let d = derive_params(&circuit, UnitMode::Dimensionless)?;
        let sp = SpectralParams::from_gamma(d.gamma, d.omega_r());
        let h0 = build_h0(&d);

        let span = 3.0 * std::f64::consts::TAU / sp.lambda_delta;
        let mut worst = 0.0f64;
        for k in 0..100 {
            let t = span * k as f64 / 99.0;
            let diff = rotating_frame_unitary(&h0, t)? - closed_form_rotating_frame(&sp, t);
            worst = worst.max(diff.iter().map(|c| c.norm()).fold(0.0, f64::max));
        }
        println!(
            "gamma {gamma:<5} beta_sigma {:.6}  max |U_num - U_closed| = {worst:.2e}",
            sp.beta_sigma
        );
    }
    Ok(())
}
