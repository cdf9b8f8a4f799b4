//! Simulation and closed-form analysis of two capacitively coupled
//! superconducting qubits.
//!
//! The crate follows one pipeline from lumped circuit elements to a
//! verified two-qubit end state:
//!
//! * [`circuit`] turns inductances and capacitances into the coupling ratio,
//!   qubit frequencies and drive coefficients.
//! * [`operators`] builds the truncated 4x4 Hamiltonians from Kronecker
//!   extended Pauli matrices and exponentiates them by eigendecomposition.
//! * [`pulse`] generates Gaussian-windowed drives and calibrates the source
//!   voltage for a requested shift angle.
//! * [`propagator`] integrates the drive in the interaction (Dirac) picture,
//!   with a lab-frame integrator for cross-checks.
//! * [`analytic`] holds the rotating-wave closed forms the simulation is
//!   checked against.
//! * [`harness`] parses run configs and produces CSV series and summaries;
//!   [`verify`] runs the acceptance checks.
//!
//! Basis order everywhere is `[|00>, |01>, |10>, |11>]` with qubit 1 as the
//! left Kronecker factor.
//!
//! ```
//! use qubit_pair::{analytic, circuit::CircuitParams, pulse::DriveMode};
//!
//! let derived = CircuitParams::representative().derive().unwrap();
//! let spectral = analytic::spectral_params(&derived).unwrap();
//! let psi = analytic::end_state(DriveMode::Even, &spectral, std::f64::consts::PI);
//! assert!((psi.norm() - 1.0).abs() < 1e-12);
//! ```

pub mod analytic;
pub mod circuit;
pub mod error;
pub mod harness;
pub mod operators;
pub mod propagator;
pub mod pulse;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
