//! Any `Fn(f64) -> ComplexMatrix4` can drive the propagator. Here a resonant
//! square pulse on qubit 1 alone.

use qubit_pair::circuit::{derive_params, CircuitParams, UnitMode};
use qubit_pair::operators::{build_h0, build_hd, DriveAmplitudes, StateVector};
use qubit_pair::propagator::Propagator;
use qubit_pair::pulse::TimeGrid;

fn main() -> qubit_pair::Result<()> {
    let circuit = CircuitParams::symmetric(1.0, 0.9, 0.1, 0.0).with_gamma(0.02)?;
    let d = derive_params(&circuit, UnitMode::Dimensionless)?;
    let carrier = d.omega_1;
    let drive = move |t: f64| {
        build_hd(DriveAmplitudes {
            qubit1: 0.01 * (carrier * t).sin(),
            qubit2: 0.0,
        })
    };

    let grid = TimeGrid::new(0.0, 400.0, std::f64::consts::TAU / carrier / 100.0)?;
    let propagator = Propagator::new(build_h0(&d))?;
    let result = propagator.propagate(&drive, &grid, &StateVector::ground())?;
    for k in (0..result.times.len()).step_by(result.times.len() / 8) {
        println!(
            "t {:>7.1}  |c| {:.4?}",
            result.times[k], result.magnitudes[k]
        );
    }
    println!("final |c| {:.4?}", result.final_magnitudes());
    Ok(())
}
