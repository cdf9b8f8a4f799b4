//! Lumped-element circuit model.
//!
//! Two LC resonators (inductance `L_i`, junction capacitance `C_J`) are each
//! driven through `C_d` and coupled to each other through `C_g`. Eliminating
//! the node charges gives an effective self capacitance `C_M`, a coupling
//! ratio `gamma = C_g / C_s` and the drive lever arms `mu_d`, `mu_g`.

use serde::{Deserialize, Serialize};
use std::f64::consts::SQRT_2;

use crate::error::{Error, Result};

/// Reduced Planck constant in J s.
pub const HBAR_SI: f64 = 1.054_571_817e-34;

/// Selects the value of hbar used in the flux scale `sigma_phi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnitMode {
    /// Farads, henries, volts, seconds; hbar in J s.
    #[default]
    Si,
    /// hbar = 1; inputs are used as given.
    Dimensionless,
}

impl UnitMode {
    pub fn hbar(self) -> f64 {
        match self {
            UnitMode::Si => HBAR_SI,
            UnitMode::Dimensionless => 1.0,
        }
    }
}

/// Raw circuit elements.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircuitParams {
    pub l1: f64,
    pub l2: f64,
    pub c_j: f64,
    pub c_d: f64,
    pub c_g: f64,
}

impl CircuitParams {
    /// Identical-resonator circuit with the given element values.
    pub fn symmetric(l: f64, c_j: f64, c_d: f64, c_g: f64) -> Self {
        CircuitParams {
            l1: l,
            l2: l,
            c_j,
            c_d,
            c_g,
        }
    }

    /// Representative grAl-like values (not measured data): 20 nH, 50 fF
    /// junction, 5 fF drive and 5 fF coupling capacitors.
    pub fn representative() -> Self {
        Self::symmetric(20e-9, 50e-15, 5e-15, 5e-15)
    }

    /// Weak-coupling variant of [`representative`](Self::representative)
    /// with `C_g = 0.55 fF` (gamma just under 0.01).
    pub fn weak_coupling() -> Self {
        Self::symmetric(20e-9, 50e-15, 5e-15, 0.55e-15)
    }

    pub fn validate(&self) -> Result<()> {
        for (field, value) in [
            ("L1", self.l1),
            ("L2", self.l2),
            ("C_J", self.c_j),
            ("C_d", self.c_d),
            ("C_g", self.c_g),
        ] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::domain(
                    field,
                    format!("must be finite and strictly positive, got {value:e}"),
                ));
            }
        }
        Ok(())
    }

    /// Derives all circuit quantities in SI units.
    pub fn derive(&self) -> Result<DerivedParams> {
        derive_params(self, UnitMode::Si)
    }

    /// Element values with `C_g` replaced so that `C_g / C_s = gamma`.
    pub fn with_gamma(&self, gamma: f64) -> Result<Self> {
        if !(gamma.is_finite() && gamma > 0.0 && gamma < 1.0) {
            return Err(Error::domain(
                "gamma",
                format!("must lie in (0, 1), got {gamma}"),
            ));
        }
        Ok(CircuitParams {
            c_g: gamma * (self.c_j + self.c_d) / (1.0 - gamma),
            ..*self
        })
    }
}

/// Quantities derived from [`CircuitParams`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivedParams {
    pub l1: f64,
    pub l2: f64,
    pub c_d: f64,
    /// Total node capacitance `C_J + C_d + C_g`.
    pub c_s: f64,
    pub gamma: f64,
    /// Effective self capacitance `C_s (1 - gamma^2)`.
    pub c_m: f64,
    /// Effective mutual capacitance `C_s (1/gamma - gamma)`; infinite when
    /// the qubits are uncoupled. Only informational.
    pub c_cross: f64,
    pub mu_d: f64,
    pub mu_g: f64,
    pub omega_1: f64,
    pub omega_2: f64,
    pub omega_g: f64,
    pub sigma_phi1: f64,
    pub sigma_phi2: f64,
    pub hbar: f64,
}

/// Derives the normalized-Hamiltonian parameters from raw circuit elements.
///
/// `C_g = 0` is accepted here (the decoupled limit) even though
/// [`CircuitParams::validate`] rejects it for configured runs.
pub fn derive_params(p: &CircuitParams, units: UnitMode) -> Result<DerivedParams> {
    for (field, value) in [("L1", p.l1), ("L2", p.l2), ("C_J", p.c_j), ("C_d", p.c_d)] {
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::domain(
                field,
                format!("must be finite and strictly positive, got {value:e}"),
            ));
        }
    }
    if !(p.c_g.is_finite() && p.c_g >= 0.0) {
        return Err(Error::domain(
            "C_g",
            format!("must be finite and non-negative, got {:e}", p.c_g),
        ));
    }

    let c_s = p.c_j + p.c_d + p.c_g;
    let gamma = p.c_g / c_s;
    if !(0.0..1.0).contains(&gamma) {
        return Err(Error::domain(
            "C_g",
            format!("coupling ratio {gamma} outside [0, 1)"),
        ));
    }
    let c_m = c_s * (1.0 - gamma * gamma);
    let c_cross = if gamma > 0.0 {
        c_s * (1.0 / gamma - gamma)
    } else {
        f64::INFINITY
    };
    let mu_d = p.c_d / c_s / (1.0 - gamma * gamma);
    let mu_g = gamma * mu_d;

    let omega_1 = 1.0 / (p.l1 * c_m).sqrt();
    let omega_2 = 1.0 / (p.l2 * c_m).sqrt();
    let omega_g = 0.5 * gamma * (omega_1 * omega_2).sqrt();

    let hbar = units.hbar();
    let sigma_phi1 = (hbar * (p.l1 / c_m).sqrt()).sqrt();
    let sigma_phi2 = (hbar * (p.l2 / c_m).sqrt()).sqrt();

    Ok(DerivedParams {
        l1: p.l1,
        l2: p.l2,
        c_d: p.c_d,
        c_s,
        gamma,
        c_m,
        c_cross,
        mu_d,
        mu_g,
        omega_1,
        omega_2,
        omega_g,
        sigma_phi1,
        sigma_phi2,
        hbar,
    })
}

impl DerivedParams {
    /// True when the two resonators share one inductance (to 1e-12 relative).
    pub fn is_symmetric(&self) -> bool {
        (self.l1 - self.l2).abs() <= 1e-12 * self.l1.max(self.l2)
    }

    /// Common resonator frequency `omega_r` in the symmetric case.
    pub fn omega_r(&self) -> f64 {
        self.omega_1
    }

    /// Flux scale of qubit 1, used as the single `sigma_phi` of the
    /// identical-resonator formulas.
    pub fn sigma_phi(&self) -> f64 {
        self.sigma_phi1
    }
}

/// Drive amplitudes (rad/s) produced by a pair of source voltages.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DriveCoefficients {
    pub omega_d1d: f64,
    pub omega_d2g: f64,
    pub omega_d1g: f64,
    pub omega_d2d: f64,
    /// `(mu_d + mu_g) V_d1 / (sqrt 2 sigma_phi)`.
    pub omega_de: f64,
    /// `(mu_d - mu_g) V_d1 / (sqrt 2 sigma_phi)`.
    pub omega_do: f64,
    /// `C_d / (C_s (1 - gamma)) V_d1 / sigma_phi`, the Gaussian-peak form.
    pub omega_e_peak: f64,
}

impl DriveCoefficients {
    /// Total amplitude multiplying `sigma_y` of qubit 1.
    pub fn qubit1_total(&self) -> f64 {
        self.omega_d1d + self.omega_d2g
    }

    /// Total amplitude multiplying `sigma_y` of qubit 2.
    pub fn qubit2_total(&self) -> f64 {
        self.omega_d1g + self.omega_d2d
    }
}

pub fn drive_coefficients(d: &DerivedParams, v_d1: f64, v_d2: f64) -> DriveCoefficients {
    let k1 = 1.0 / (SQRT_2 * d.sigma_phi1);
    let k2 = 1.0 / (SQRT_2 * d.sigma_phi2);
    DriveCoefficients {
        omega_d1d: d.mu_d * v_d1 * k1,
        omega_d2g: d.mu_g * v_d2 * k1,
        omega_d1g: d.mu_g * v_d1 * k2,
        omega_d2d: d.mu_d * v_d2 * k2,
        omega_de: (d.mu_d + d.mu_g) * v_d1 * k1,
        omega_do: (d.mu_d - d.mu_g) * v_d1 * k1,
        omega_e_peak: d.c_d / (d.c_s * (1.0 - d.gamma)) * v_d1 / d.sigma_phi1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    const FF: f64 = 1e-15;

    #[test]
    fn decoupled_limit() {
        let p = CircuitParams::symmetric(20e-9, 50.0 * FF, 5.0 * FF, 0.0);
        let d = derive_params(&p, UnitMode::Si).unwrap();
        assert_eq!(d.gamma, 0.0);
        assert_eq!(d.c_m, d.c_s);
        assert_eq!(d.mu_g, 0.0);
        assert_eq!(d.omega_g, 0.0);
        assert!(d.c_cross.is_infinite());
        assert_relative_eq!(d.mu_d, 5.0 / 55.0, max_relative = 1e-15);
    }

    #[test]
    fn hand_arithmetic_values() {
        let p = CircuitParams::symmetric(20e-9, 50.0 * FF, 5.0 * FF, 5.0 * FF);
        let d = p.derive().unwrap();
        assert_relative_eq!(d.c_s, 60.0 * FF, max_relative = 1e-14);
        assert_relative_eq!(d.gamma, 1.0 / 12.0, max_relative = 1e-14);
        assert_relative_eq!(d.c_m, 59.583_333_333 * FF, max_relative = 1e-9);
        assert_relative_eq!(d.mu_d, 0.083_916_083_9, max_relative = 1e-9);
        assert_relative_eq!(d.mu_g, 0.006_993_007, max_relative = 1e-8);
    }

    #[test]
    fn symmetric_frequencies() {
        let d = CircuitParams::representative().derive().unwrap();
        let omega = 1.0 / (20e-9 * d.c_m).sqrt();
        assert_eq!(d.omega_1, d.omega_2);
        assert_relative_eq!(d.omega_1, omega, max_relative = 1e-15);
        assert_relative_eq!(d.omega_g, 0.5 * d.gamma * omega, max_relative = 1e-15);
        assert!(d.is_symmetric());
    }

    #[test]
    fn sigma_phi_uses_hbar() {
        let p = CircuitParams::representative();
        let si = derive_params(&p, UnitMode::Si).unwrap();
        let nd = derive_params(&p, UnitMode::Dimensionless).unwrap();
        assert_relative_eq!(
            si.sigma_phi1 / nd.sigma_phi1,
            HBAR_SI.sqrt(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn rejects_non_positive_fields() {
        let mut p = CircuitParams::representative();
        p.c_g = -1e-15;
        let err = p.validate().unwrap_err();
        assert!(err.to_string().contains("C_g"), "{err}");
        let mut p = CircuitParams::representative();
        p.l2 = 0.0;
        assert!(p.derive().unwrap_err().to_string().contains("L2"));
        let mut p = CircuitParams::representative();
        p.c_j = f64::NAN;
        assert!(p.validate().unwrap_err().to_string().contains("C_J"));
    }

    #[test]
    fn zero_drive_gives_zero_coefficients() {
        let d = CircuitParams::representative().derive().unwrap();
        let c = drive_coefficients(&d, 0.0, 0.0);
        assert_eq!(c.qubit1_total(), 0.0);
        assert_eq!(c.qubit2_total(), 0.0);
        assert_eq!(c.omega_de, 0.0);
        assert_eq!(c.omega_e_peak, 0.0);
    }

    #[test]
    fn even_drive_totals_match_omega_de() {
        let d = CircuitParams::representative().derive().unwrap();
        let v = 3e-6;
        let c = drive_coefficients(&d, v, v);
        let expected = (d.mu_d + d.mu_g) * v / (SQRT_2 * d.sigma_phi());
        assert_relative_eq!(c.qubit1_total(), expected, max_relative = 1e-14);
        assert_relative_eq!(c.qubit2_total(), expected, max_relative = 1e-14);
        assert_relative_eq!(c.omega_de, expected, max_relative = 1e-14);
    }

    #[test]
    fn odd_drive_totals_are_opposite() {
        let d = CircuitParams::representative().derive().unwrap();
        let v = 3e-6;
        let c = drive_coefficients(&d, v, -v);
        let expected = (d.mu_d - d.mu_g) * v / (SQRT_2 * d.sigma_phi());
        assert_relative_eq!(c.qubit1_total(), expected, max_relative = 1e-14);
        assert_relative_eq!(c.qubit2_total(), -expected, max_relative = 1e-14);
        assert_relative_eq!(c.omega_do, expected, max_relative = 1e-14);
    }

    #[test]
    fn peak_form_is_sqrt2_times_even_total() {
        let d = CircuitParams::weak_coupling().derive().unwrap();
        let c = drive_coefficients(&d, 1e-6, 1e-6);
        assert_relative_eq!(c.omega_e_peak, SQRT_2 * c.omega_de, max_relative = 1e-14);
    }

    #[test]
    fn with_gamma_hits_requested_ratio() {
        let p = CircuitParams::representative().with_gamma(0.03).unwrap();
        assert_relative_eq!(p.derive().unwrap().gamma, 0.03, max_relative = 1e-14);
        assert!(CircuitParams::representative().with_gamma(1.0).is_err());
    }

    fn circuit() -> impl Strategy<Value = CircuitParams> {
        (
            1e-9..1e-7f64,
            1e-9..1e-7f64,
            1e-15..1e-13f64,
            1e-16..1e-14f64,
            1e-16..1e-13f64,
        )
            .prop_map(|(l1, l2, c_j, c_d, c_g)| CircuitParams {
                l1,
                l2,
                c_j,
                c_d,
                c_g,
            })
    }

    proptest! {
        #[test]
        fn lever_arm_ratio_is_gamma(p in circuit()) {
            let d = p.derive().unwrap();
            prop_assert!((d.mu_g / d.mu_d - d.gamma).abs() <= 4.0 * f64::EPSILON * d.gamma);
            prop_assert!((d.c_m / d.c_s + d.gamma * d.gamma - 1.0).abs() < 4.0 * f64::EPSILON);
            prop_assert!(d.gamma >= 0.0 && d.gamma < 1.0);
            prop_assert!((d.omega_g - 0.5 * d.gamma * (d.omega_1 * d.omega_2).sqrt()).abs()
                <= 1e-14 * d.omega_g);
        }

        #[test]
        fn capacitance_scaling(p in circuit(), k in 0.1..10.0f64) {
            let d = p.derive().unwrap();
            let scaled = CircuitParams { c_j: k * p.c_j, c_d: k * p.c_d, c_g: k * p.c_g, ..p };
            let s = scaled.derive().unwrap();
            prop_assert!((s.gamma - d.gamma).abs() <= 1e-14 * d.gamma.max(1e-300));
            prop_assert!((s.mu_d - d.mu_d).abs() <= 1e-13 * d.mu_d);
            prop_assert!((s.mu_g - d.mu_g).abs() <= 1e-13 * d.mu_g);
            prop_assert!((s.c_s - k * d.c_s).abs() <= 1e-13 * k * d.c_s);
            prop_assert!((s.c_m - k * d.c_m).abs() <= 1e-13 * k * d.c_m);
            prop_assert!((s.c_cross - k * d.c_cross).abs() <= 1e-12 * k * d.c_cross);
        }

        #[test]
        fn frequency_decreases_with_inductance_and_capacitance(p in circuit(), k in 1.01..5.0f64) {
            let d = p.derive().unwrap();
            let more_l = CircuitParams { l1: k * p.l1, ..p }.derive().unwrap();
            prop_assert!(more_l.omega_1 < d.omega_1);
            let more_c = CircuitParams { c_j: k * p.c_j, ..p }.derive().unwrap();
            prop_assert!(more_c.c_m > d.c_m);
            prop_assert!(more_c.omega_1 < d.omega_1 && more_c.omega_2 < d.omega_2);
        }
    }
}
