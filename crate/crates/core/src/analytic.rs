//! Rotating-wave closed forms for identical resonators.
//!
//! With `L1 = L2` the static Hamiltonian splits into a `{|00>, |11>}` block
//! with eigenvalues `+-lambda_sigma` and a `{|01>, |10>}` block with
//! `+-lambda_delta`. A carrier at `lambda_sigma` then drives a three-level
//! ladder whose couplings are weighted by `rho_c` and `rho_s`, and a
//! Gaussian pulse acts as a rotation by the shift angle `theta`.

use log::warn;
use nalgebra::Matrix4;
use serde::Serialize;
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, PI, SQRT_2};

use crate::circuit::DerivedParams;
use crate::error::{Error, Result};
use crate::operators::{ComplexMatrix4, StateVector};
use crate::pulse::{shift_angle_gain, DriveMode, RWA_MIN_CARRIER_SIGMA};
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralParams {
    pub gamma: f64,
    pub omega_r: f64,
    pub lambda_delta: f64,
    pub lambda_sigma: f64,
    /// `pi - atan(gamma / 2)` (principal branch), in `(pi/2, pi]`.
    pub beta_sigma: f64,
    pub rho_c: f64,
    pub rho_s: f64,
}

impl SpectralParams {
    pub fn from_gamma(gamma: f64, omega_r: f64) -> Self {
        let beta_sigma = PI - (gamma / 2.0).atan();
        SpectralParams {
            gamma,
            omega_r,
            lambda_delta: 0.5 * gamma * omega_r,
            lambda_sigma: (1.0 + 0.25 * gamma * gamma).sqrt() * omega_r,
            beta_sigma,
            rho_c: FRAC_1_SQRT_2 * (FRAC_PI_4 - beta_sigma).cos(),
            rho_s: FRAC_1_SQRT_2 * (FRAC_PI_4 - beta_sigma).sin(),
        }
    }
}

pub fn spectral_params(d: &DerivedParams) -> Result<SpectralParams> {
    if !d.is_symmetric() {
        return Err(Error::AsymmetricCircuit { l1: d.l1, l2: d.l2 });
    }
    Ok(SpectralParams::from_gamma(d.gamma, d.omega_r()))
}

/// Closed form of `exp(i H0 t)`.
pub fn closed_form_rotating_frame(sp: &SpectralParams, t: f64) -> ComplexMatrix4 {
    let (ss, cs) = (sp.lambda_sigma * t).sin_cos();
    let (sd, cd) = (sp.lambda_delta * t).sin_cos();
    let f_plus = C64::new(cs, ss * sp.beta_sigma.cos());
    let f_minus = C64::new(cs, -ss * sp.beta_sigma.cos());
    let g_sigma = ss * sp.beta_sigma.sin();
    let z = C64::new(0.0, 0.0);
    let f_delta = C64::new(cd, 0.0);
    let ig_sigma = C64::new(0.0, -g_sigma);
    let ig_delta = C64::new(0.0, sd);
    #[rustfmt::skip]
    let m = Matrix4::new(
        f_plus,   z,        z,        ig_sigma,
        z,        f_delta,  ig_delta, z,
        z,        ig_delta, f_delta,  z,
        ig_sigma, z,        z,        f_minus,
    );
    m
}

/// Entries `(h_a, h_b)` of the rotated even drive `U_rf H_d U_rf^dagger`
/// before the rotating-wave approximation: `h_a` sits at rows `|01>`,
/// `|10>` of column `|00>`, `h_b` at row `|11>` of columns `|01>`, `|10>`.
pub fn rotated_drive_entries(sp: &SpectralParams, omega_de: f64, t: f64) -> (C64, C64) {
    let (s, c) = (sp.lambda_sigma * t).sin_cos();
    let phase = C64::from_polar(1.0, sp.lambda_delta * t);
    let a = C64::new(SQRT_2 * (FRAC_PI_4 - sp.beta_sigma).cos() * s, c);
    let b = C64::new(SQRT_2 * (FRAC_PI_4 - sp.beta_sigma).sin() * s, c);
    (phase * a * omega_de, phase.conj() * b * omega_de)
}

/// Slowly varying parts of `h_a`, `h_b` for a Gaussian pulse at the
/// `lambda_sigma` carrier:
/// `h_a = -omega_e rho_c G(t) exp(-i lambda_delta t)`,
/// `h_b = -omega_e rho_s G(t) exp(+i lambda_delta t)`.
pub fn rwa_envelopes(sp: &SpectralParams, omega_e: f64, sigma_t: f64, t: f64) -> (C64, C64) {
    if sp.lambda_sigma * sigma_t < RWA_MIN_CARRIER_SIGMA {
        warn!(
            "lambda_sigma * sigma_t = {:.3} is below {RWA_MIN_CARRIER_SIGMA}; rotating-wave terms are unreliable",
            sp.lambda_sigma * sigma_t
        );
    }
    let g = (-0.5 * (t / sigma_t).powi(2)).exp();
    let phase = C64::from_polar(1.0, -sp.lambda_delta * t);
    (
        phase * (-omega_e * sp.rho_c * g),
        phase.conj() * (-omega_e * sp.rho_s * g),
    )
}

/// Closed-form shift angle for a Gaussian pulse of peak voltage `v_s`.
pub fn shift_angle(
    mode: DriveMode,
    d: &DerivedParams,
    sp: &SpectralParams,
    v_s: f64,
    sigma_t: f64,
) -> f64 {
    shift_angle_gain(mode, d, sp.lambda_delta, sigma_t) * v_s
}

struct Angles {
    s2: f64,
    s4sq: f64,
    c4sq: f64,
}

impl Angles {
    fn new(theta: f64) -> Self {
        let s4 = (theta / 4.0).sin();
        let c4 = (theta / 4.0).cos();
        Angles {
            s2: (theta / 2.0).sin(),
            s4sq: s4 * s4,
            c4sq: c4 * c4,
        }
    }
}

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn im(x: f64) -> C64 {
    C64::new(0.0, x)
}

/// Rotating-wave evolution matrix for a pulse of shift angle `theta`.
///
/// The odd matrix carries `rho_c` in entries `(|01>, |11>)` and
/// `(|10>, |11>)`, mirroring its last row; see
/// [`printed_odd_evolution_matrix`] for the variant with `rho_s` there,
/// which is not unitary for `gamma > 0`.
pub fn evolution_matrix(mode: DriveMode, sp: &SpectralParams, theta: f64) -> ComplexMatrix4 {
    let a = Angles::new(theta);
    let (rc, rs) = (sp.rho_c, sp.rho_s);
    match mode {
        DriveMode::Even => {
            let corner = re(-4.0 * rc * rs * a.s4sq);
            #[rustfmt::skip]
            let m = Matrix4::new(
                re(1.0 - 4.0 * rc * rc * a.s4sq), im(rc * a.s2),  im(rc * a.s2),  corner,
                im(rc * a.s2),                    re(a.c4sq),     re(-a.s4sq),    im(rs * a.s2),
                im(rc * a.s2),                    re(-a.s4sq),    re(a.c4sq),     im(rs * a.s2),
                corner,                           im(rs * a.s2),  im(rs * a.s2),  re(1.0 - 4.0 * rs * rs * a.s4sq),
            );
            m
        }
        DriveMode::Odd => {
            let corner = re(4.0 * rc * rs * a.s4sq);
            #[rustfmt::skip]
            let m = Matrix4::new(
                re(1.0 - 4.0 * rs * rs * a.s4sq), im(rs * a.s2),   im(-rs * a.s2), corner,
                im(rs * a.s2),                    re(a.c4sq),      re(a.s4sq),     im(-rc * a.s2),
                im(-rs * a.s2),                   re(a.s4sq),      re(a.c4sq),     im(rc * a.s2),
                corner,                           im(-rc * a.s2),  im(rc * a.s2),  re(1.0 - 4.0 * rc * rc * a.s4sq),
            );
            m
        }
    }
}

/// Odd evolution matrix with `rho_s` in entries `(|01>, |11>)` and
/// `(|10>, |11>)`. Kept to quantify its unitarity defect; use
/// [`evolution_matrix`] for computation.
pub fn printed_odd_evolution_matrix(sp: &SpectralParams, theta: f64) -> ComplexMatrix4 {
    let mut m = evolution_matrix(DriveMode::Odd, sp, theta);
    let s2 = (theta / 2.0).sin();
    m[(1, 3)] = im(-sp.rho_s * s2);
    m[(2, 3)] = im(sp.rho_s * s2);
    m
}

/// End state reached from `|00>`.
pub fn end_state(mode: DriveMode, sp: &SpectralParams, theta: f64) -> StateVector {
    let u = evolution_matrix(mode, sp, theta);
    StateVector::from_vector_unchecked(u.column(0).into_owned())
}

/// Closed-form result of one pulse.
#[derive(Debug, Clone, PartialEq)]
pub struct RwaEndState {
    pub mode: DriveMode,
    pub theta: f64,
    pub matrix: ComplexMatrix4,
    pub psi: StateVector,
}

impl RwaEndState {
    pub fn new(mode: DriveMode, sp: &SpectralParams, theta: f64) -> Self {
        RwaEndState {
            mode,
            theta,
            matrix: evolution_matrix(mode, sp, theta),
            psi: end_state(mode, sp, theta),
        }
    }
}
