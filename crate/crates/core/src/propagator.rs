//! Interaction-picture propagation.
//!
//! The static Hamiltonian is removed with `U_rf(t) = exp(i H0 (t - t0))`, the
//! drive is rotated into that frame, and the frame-drive evolution `U_d` is
//! accumulated as a time-ordered product of midpoint step exponentials. Each
//! step diagonalizes the rotated drive, applies the phases and recomposes, so
//! a drive with a fixed eigenbasis reproduces the single-diagonalization
//! formula exactly. `t0` is [`Propagator::frame_origin`].

use serde::Serialize;

use crate::error::{Error, Result};
use crate::operators::{
    ensure_hermitian, hermitian_expm, unitarity_defect, ComplexMatrix4, HermitianEigen, StateVector,
};
use crate::pulse::{PulseDrive, TimeGrid};

/// Largest accepted deviation of `||psi||` from 1 during propagation.
pub const NORM_DRIFT_LIMIT: f64 = 1e-8;

/// `exp(i H0 t)`.
pub fn rotating_frame_unitary(h0: &ComplexMatrix4, t: f64) -> Result<ComplexMatrix4> {
    hermitian_expm(h0, t)
}

/// `U_rf H_d U_rf^dagger`.
pub fn rotate_drive(hd: &ComplexMatrix4, urf: &ComplexMatrix4) -> ComplexMatrix4 {
    urf * hd * urf.adjoint()
}

/// A lab-frame drive Hamiltonian `H_d(t)`.
pub trait Drive: Sync {
    fn hamiltonian(&self, t: f64) -> ComplexMatrix4;
}

impl Drive for PulseDrive {
    fn hamiltonian(&self, t: f64) -> ComplexMatrix4 {
        PulseDrive::hamiltonian(self, t)
    }
}

impl<F> Drive for F
where
    F: Fn(f64) -> ComplexMatrix4 + Sync,
{
    fn hamiltonian(&self, t: f64) -> ComplexMatrix4 {
        self(t)
    }
}

/// Zero drive.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoDrive;

impl Drive for NoDrive {
    fn hamiltonian(&self, _t: f64) -> ComplexMatrix4 {
        ComplexMatrix4::zeros()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StepRecord {
    /// Midpoint time at which the rotated drive was sampled.
    pub t: f64,
    /// Eigenvalues of the rotated drive at `t`.
    pub eigenvalues: [f64; 4],
    #[serde(skip)]
    pub snapshot: Option<ComplexMatrix4>,
}

#[derive(Debug, Clone)]
pub struct PropagatorBundle {
    /// Rotating-frame unitary at the final time.
    pub u_rf: ComplexMatrix4,
    /// Accumulated frame-drive evolution.
    pub u_d: ComplexMatrix4,
    pub steps: Vec<StepRecord>,
    /// Largest `||U_d^dagger U_d - I||_F` seen over all steps.
    pub max_unitarity_defect: f64,
}

#[derive(Debug, Clone)]
pub struct SimulationResult {
    pub grid: TimeGrid,
    /// Grid times `t_start + k dt`, `k = 0..=steps`.
    pub times: Vec<f64>,
    /// `|c_00|, |c_01|, |c_10|, |c_11|` at each grid time.
    pub magnitudes: Vec<[f64; 4]>,
    pub final_state: StateVector,
    pub bundle: PropagatorBundle,
    pub max_norm_drift: f64,
}

impl SimulationResult {
    pub fn final_time(&self) -> f64 {
        *self.times.last().expect("grid has at least one point")
    }

    pub fn final_magnitudes(&self) -> [f64; 4] {
        self.final_state.magnitudes()
    }
}

/// Dirac-picture integrator for a fixed static Hamiltonian.
#[derive(Debug, Clone)]
pub struct Propagator {
    h0: ComplexMatrix4,
    h0_eigen: HermitianEigen,
    /// Time at which the rotating frame coincides with the lab frame.
    pub frame_origin: f64,
    /// Keep a copy of every rotated drive matrix in the step records.
    pub record_snapshots: bool,
}

impl Propagator {
    pub fn new(h0: ComplexMatrix4) -> Result<Self> {
        let h0_eigen = HermitianEigen::new(&h0)?;
        Ok(Propagator {
            h0,
            h0_eigen,
            frame_origin: 0.0,
            record_snapshots: false,
        })
    }

    pub fn with_frame_origin(mut self, t0: f64) -> Self {
        self.frame_origin = t0;
        self
    }

    pub fn with_snapshots(mut self, on: bool) -> Self {
        self.record_snapshots = on;
        self
    }

    pub fn h0(&self) -> &ComplexMatrix4 {
        &self.h0
    }

    /// `U_rf` at lab time `t`.
    pub fn frame_unitary(&self, t: f64) -> ComplexMatrix4 {
        self.h0_eigen.exp_i(t - self.frame_origin)
    }

    pub fn rotated_drive<D: Drive + ?Sized>(&self, drive: &D, t: f64) -> ComplexMatrix4 {
        rotate_drive(&drive.hamiltonian(t), &self.frame_unitary(t))
    }

    /// Maps a frame state at time `t` back to the lab frame.
    pub fn to_lab_frame(&self, psi: &StateVector, t: f64) -> StateVector {
        &self.frame_unitary(t).adjoint() * psi
    }

    pub fn propagate<D: Drive + ?Sized>(
        &self,
        drive: &D,
        grid: &TimeGrid,
        psi0: &StateVector,
    ) -> Result<SimulationResult> {
        grid.validate()?;
        let steps = grid.steps();
        let mut times = Vec::with_capacity(steps + 1);
        let mut magnitudes = Vec::with_capacity(steps + 1);
        let mut records = Vec::with_capacity(steps);
        times.push(grid.t_start);
        magnitudes.push(psi0.magnitudes());

        let mut u_d = ComplexMatrix4::identity();
        let mut psi = *psi0;
        let mut max_norm_drift = (psi0.norm() - 1.0).abs();
        let mut max_unitarity_defect = 0.0f64;

        for k in 0..steps {
            let t_mid = grid.t_start + (k as f64 + 0.5) * grid.dt;
            let rotated = self.rotated_drive(drive, t_mid);
            let eig = HermitianEigen::new(&rotated).map_err(|e| Error::Numerical {
                step: k,
                reason: e.to_string(),
            })?;
            u_d = eig.exp_i(-grid.dt) * u_d;
            psi = &u_d * psi0;

            let drift = (psi.norm() - 1.0).abs();
            max_norm_drift = max_norm_drift.max(drift);
            if drift.is_nan() || drift > NORM_DRIFT_LIMIT {
                return Err(Error::Numerical {
                    step: k,
                    reason: format!("state norm drifted by {drift:e}"),
                });
            }
            max_unitarity_defect = max_unitarity_defect.max(unitarity_defect(&u_d));

            times.push(grid.time(k + 1));
            magnitudes.push(psi.magnitudes());
            records.push(StepRecord {
                t: t_mid,
                eigenvalues: eig.values.into(),
                snapshot: self.record_snapshots.then_some(rotated),
            });
        }

        let t_final = grid.time(steps);
        Ok(SimulationResult {
            grid: *grid,
            times,
            magnitudes,
            final_state: psi,
            bundle: PropagatorBundle {
                u_rf: self.frame_unitary(t_final),
                u_d,
                steps: records,
                max_unitarity_defect,
            },
            max_norm_drift,
        })
    }

    /// Integrates the full Hamiltonian `H0 + H_d(t)` in the lab frame with
    /// the same midpoint step exponentials. The start state is `psi0`
    /// mapped out of the rotating frame at `t_start`, so the result should
    /// equal `U_rf^dagger(t_final) psi_frame(t_final)`.
    pub fn lab_frame_reference<D: Drive + ?Sized>(
        &self,
        drive: &D,
        grid: &TimeGrid,
        psi0: &StateVector,
    ) -> Result<StateVector> {
        grid.validate()?;
        let mut psi = self.to_lab_frame(psi0, grid.t_start);
        for k in 0..grid.steps() {
            let t_mid = grid.t_start + (k as f64 + 0.5) * grid.dt;
            let h = self.h0 + drive.hamiltonian(t_mid);
            ensure_hermitian(&h).map_err(|e| Error::Numerical {
                step: k,
                reason: e.to_string(),
            })?;
            psi = &hermitian_expm(&h, -grid.dt)? * &psi;
            let drift = (psi.norm() - 1.0).abs();
            if drift.is_nan() || drift > NORM_DRIFT_LIMIT {
                return Err(Error::Numerical {
                    step: k,
                    reason: format!("lab-frame norm drifted by {drift:e}"),
                });
            }
        }
        Ok(psi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::SpectralParams;
    use crate::circuit::{derive_params, CircuitParams, DerivedParams, UnitMode};
    use crate::operators::{build_h0, build_hd, DriveAmplitudes};
    use crate::pulse::{calibrate_voltage, DriveMode, PulseConfig};
    use crate::C64;
    use std::f64::consts::PI;

    fn derived(gamma: f64) -> DerivedParams {
        let p = CircuitParams::symmetric(1.0, 0.9, 0.1, 0.0);
        let p = if gamma > 0.0 {
            p.with_gamma(gamma).unwrap()
        } else {
            p
        };
        derive_params(&p, UnitMode::Dimensionless).unwrap()
    }

    fn calibrated(
        d: &DerivedParams,
        mode: DriveMode,
        carrier_sigma: f64,
    ) -> (PulseDrive, TimeGrid) {
        let sp = SpectralParams::from_gamma(d.gamma, d.omega_r());
        let sigma_t = carrier_sigma / sp.lambda_sigma;
        let pulse = PulseConfig {
            v_s: calibrate_voltage(PI, mode, d, sigma_t).unwrap(),
            sigma_t,
            carrier: sp.lambda_sigma,
            phi_d: 0.0,
            t_center: 0.0,
            mode,
        };
        let grid = TimeGrid::around_pulse(&pulse, 6.0, pulse.carrier_period() / 100.0).unwrap();
        (PulseDrive::new(pulse, *d), grid)
    }

    #[test]
    fn frame_unitary_identity_at_zero() {
        let h0 = build_h0(&derived(0.05));
        let u = rotating_frame_unitary(&h0, 0.0).unwrap();
        assert!((u - ComplexMatrix4::identity()).norm() < 1e-14);
    }

    #[test]
    fn decoupled_frame_is_diagonal_phases() {
        let d = derived(0.0);
        let w = d.omega_r();
        let t = 2.3;
        let u = rotating_frame_unitary(&build_h0(&d), t).unwrap();
        let expected = [
            C64::from_polar(1.0, -w * t),
            C64::from(1.0),
            C64::from(1.0),
            C64::from_polar(1.0, w * t),
        ];
        for k in 0..4 {
            assert!((u[(k, k)] - expected[k]).norm() < 1e-14);
        }
    }

    #[test]
    fn rotate_drive_properties() {
        let d = derived(0.05);
        let hd = build_hd(DriveAmplitudes {
            qubit1: 0.3,
            qubit2: -0.1,
        });
        assert_eq!(rotate_drive(&hd, &ComplexMatrix4::identity()), hd);
        let urf = rotating_frame_unitary(&build_h0(&d), 4.2).unwrap();
        let rotated = rotate_drive(&hd, &urf);
        let a = HermitianEigen::new(&hd).unwrap().sorted_values();
        let b = HermitianEigen::new(&rotated).unwrap().sorted_values();
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() < 1e-14);
        }
    }

    #[test]
    fn zero_drive_leaves_state_alone() {
        let d = derived(0.05);
        let prop = Propagator::new(build_h0(&d)).unwrap();
        let psi0 = StateVector::renormalized([
            C64::new(0.6, 0.1),
            C64::new(0.0, 0.3),
            C64::from(0.2),
            C64::from(0.1),
        ])
        .unwrap();
        let grid = TimeGrid::new(0.0, 30.0, 0.05).unwrap();
        let res = prop.propagate(&NoDrive, &grid, &psi0).unwrap();
        assert!((res.bundle.u_d - ComplexMatrix4::identity()).norm() < 1e-15);
        assert_eq!(res.final_state, psi0);
        assert!(res.magnitudes.iter().all(|m| *m == psi0.magnitudes()));
        assert_eq!(res.magnitudes.len(), grid.steps() + 1);

        // Lab frame: free evolution exp(-i H0 t_end) psi0.
        let lab = prop.lab_frame_reference(&NoDrive, &grid, &psi0).unwrap();
        let free = &hermitian_expm(prop.h0(), -res.final_time()).unwrap() * &psi0;
        assert!((lab.as_vector() - free.as_vector()).norm() < 1e-12);
        assert!((lab.norm() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn drive_eigenvalues_are_traceless() {
        let d = derived(0.05);
        let (drive, grid) = calibrated(&d, DriveMode::Even, 20.0);
        let prop = Propagator::new(build_h0(&d)).unwrap().with_snapshots(true);
        let res = prop
            .propagate(&drive, &grid, &StateVector::ground())
            .unwrap();
        for rec in &res.bundle.steps {
            assert!(rec.eigenvalues.iter().sum::<f64>().abs() < 1e-12);
            assert!(rec.snapshot.is_some());
        }
        assert!(res.bundle.max_unitarity_defect < 1e-10);
        assert!(unitarity_defect(&res.bundle.u_rf) < 1e-10);
        for m in &res.magnitudes {
            assert!((m.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn frame_identity_for_offset_origin() {
        let d = derived(0.03);
        let (drive, _) = calibrated(&d, DriveMode::Odd, 15.0);
        let period = drive.pulse.carrier_period();
        let grid = TimeGrid::around_pulse(&drive.pulse, 6.0, period / 2000.0).unwrap();
        let prop = Propagator::new(build_h0(&d))
            .unwrap()
            .with_frame_origin(1.7);
        let res = prop
            .propagate(&drive, &grid, &StateVector::ground())
            .unwrap();
        let lab = prop
            .lab_frame_reference(&drive, &grid, &StateVector::ground())
            .unwrap();
        let mapped = prop.to_lab_frame(&res.final_state, res.final_time());
        let err = (lab.as_vector() - mapped.as_vector()).norm();
        assert!(err < 1e-5, "frame identity error {err}");
    }

    #[test]
    fn global_phase_does_not_change_magnitudes() {
        let d = derived(0.02);
        let (drive, grid) = calibrated(&d, DriveMode::Even, 20.0);
        let prop = Propagator::new(build_h0(&d)).unwrap();
        let psi0 = StateVector::renormalized([
            C64::from(0.8),
            C64::new(0.0, 0.6),
            C64::from(0.0),
            C64::from(0.0),
        ])
        .unwrap();
        let a = prop.propagate(&drive, &grid, &psi0).unwrap();
        let b = prop
            .propagate(&drive, &grid, &psi0.with_global_phase(1.234))
            .unwrap();
        for (x, y) in a.magnitudes.iter().zip(&b.magnitudes) {
            for k in 0..4 {
                assert!((x[k] - y[k]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn linear_response_for_weak_drive() {
        let d = derived(0.02);
        let (drive, grid) = calibrated(&d, DriveMode::Even, 20.0);
        let prop = Propagator::new(build_h0(&d)).unwrap();
        let psi0 = StateVector::ground();
        let deviation = |eps: f64| {
            let mut weak = drive;
            weak.pulse.v_s *= eps;
            let res = prop.propagate(&weak, &grid, &psi0).unwrap();
            (res.final_state.as_vector() - psi0.as_vector()).norm()
        };
        let (a, b) = (deviation(1e-3), deviation(1e-4));
        assert!((a / b - 10.0).abs() < 0.05, "ratio {}", a / b);
    }

    #[test]
    fn calibrated_even_pulse_reaches_balanced_magnitudes() {
        let d = derived(0.01);
        let (drive, grid) = calibrated(&d, DriveMode::Even, 20.0);
        let prop = Propagator::new(build_h0(&d)).unwrap();
        let res = prop
            .propagate(&drive, &grid, &StateVector::ground())
            .unwrap();
        let rms = (res
            .final_magnitudes()
            .iter()
            .map(|m| (m - 0.5).powi(2))
            .sum::<f64>()
            / 4.0)
            .sqrt();
        assert!(
            rms <= 0.07,
            "rms {rms}, magnitudes {:?}",
            res.final_magnitudes()
        );
    }

    #[test]
    fn non_hermitian_drive_is_a_numerical_failure() {
        let d = derived(0.02);
        let prop = Propagator::new(build_h0(&d)).unwrap();
        let bad = |t: f64| {
            let mut m = ComplexMatrix4::zeros();
            if t > 1.0 {
                m[(0, 1)] = C64::from(1.0);
            }
            m
        };
        let grid = TimeGrid::new(0.0, 2.0, 0.1).unwrap();
        match prop.propagate(&bad, &grid, &StateVector::ground()) {
            Err(Error::Numerical { step, .. }) => assert_eq!(step, 10),
            other => panic!("expected numerical failure, got {other:?}"),
        }
    }
}
