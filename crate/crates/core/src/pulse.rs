//! Gaussian-windowed sinusoidal drives and voltage calibration.

use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, SQRT_2, TAU};

use crate::circuit::{drive_coefficients, DerivedParams};
use crate::error::{Error, Result};
use crate::operators::{build_hd, ComplexMatrix4, DriveAmplitudes};

/// Equal (`Even`) or opposite (`Odd`) source voltages on the two qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DriveMode {
    #[default]
    Even,
    Odd,
}

impl DriveMode {
    /// Sign of the qubit-2 source voltage relative to qubit 1.
    pub fn sign(self) -> f64 {
        match self {
            DriveMode::Even => 1.0,
            DriveMode::Odd => -1.0,
        }
    }

    /// `1 - gamma` for even drive, `1 + gamma` for odd.
    pub fn lever_denominator(self, gamma: f64) -> f64 {
        1.0 - self.sign() * gamma
    }

    pub fn as_str(self) -> &'static str {
        match self {
            DriveMode::Even => "even",
            DriveMode::Odd => "odd",
        }
    }
}

/// Carrier periods times `sigma_t` below which the rotating-wave closed
/// forms are not trusted.
pub const RWA_MIN_CARRIER_SIGMA: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PulseConfig {
    /// Gaussian peak source voltage.
    pub v_s: f64,
    pub sigma_t: f64,
    /// Carrier angular frequency; normally `lambda_sigma`.
    pub carrier: f64,
    pub phi_d: f64,
    pub t_center: f64,
    pub mode: DriveMode,
}

impl PulseConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.sigma_t.is_finite() && self.sigma_t > 0.0) {
            return Err(Error::domain(
                "sigma_t",
                format!("must be positive, got {:e}", self.sigma_t),
            ));
        }
        if !(self.carrier.is_finite() && self.carrier > 0.0) {
            return Err(Error::domain(
                "carrier",
                format!("must be positive, got {:e}", self.carrier),
            ));
        }
        for (field, v) in [
            ("V_s", self.v_s),
            ("phi_d", self.phi_d),
            ("t_center", self.t_center),
        ] {
            if !v.is_finite() {
                return Err(Error::domain(field, "must be finite"));
            }
        }
        Ok(())
    }

    /// `carrier * sigma_t`, the number that decides whether the
    /// rotating-wave comparison is meaningful.
    pub fn carrier_sigma(&self) -> f64 {
        self.carrier * self.sigma_t
    }

    pub fn rwa_valid(&self) -> bool {
        self.carrier_sigma() >= RWA_MIN_CARRIER_SIGMA
    }

    pub fn carrier_period(&self) -> f64 {
        TAU / self.carrier
    }

    /// Gaussian window times carrier, without the amplitude.
    pub fn waveform(&self, t: f64) -> f64 {
        let x = (t - self.t_center) / self.sigma_t;
        (-0.5 * x * x).exp() * (self.carrier * (t - self.t_center) - self.phi_d).sin()
    }
}

/// Peak drive amplitude (rad/s) for source voltage `v_s`:
/// `C_d / (C_s (1 -+ gamma)) * v_s / sigma_phi`.
pub fn peak_amplitude(mode: DriveMode, d: &DerivedParams, v_s: f64) -> f64 {
    d.c_d / (d.c_s * mode.lever_denominator(d.gamma)) * v_s / d.sigma_phi()
}

/// Drive amplitude on qubit 1 at time `t`.
pub fn drive_envelope(cfg: &PulseConfig, d: &DerivedParams, t: f64) -> f64 {
    peak_amplitude(cfg.mode, d, cfg.v_s) * cfg.waveform(t)
}

/// Time-dependent drive Hamiltonian for a [`PulseConfig`].
///
/// Per-qubit amplitudes keep the cross-coupling structure of
/// [`drive_coefficients`] (so unequal inductances are handled) with the
/// overall normalization of [`peak_amplitude`]; for identical resonators
/// qubit 1 sees exactly [`drive_envelope`].
#[derive(Debug, Clone, Copy)]
pub struct PulseDrive {
    pub pulse: PulseConfig,
    pub derived: DerivedParams,
}

impl PulseDrive {
    pub fn new(pulse: PulseConfig, derived: DerivedParams) -> Self {
        PulseDrive { pulse, derived }
    }

    pub fn amplitudes(&self, t: f64) -> DriveAmplitudes {
        let v = self.pulse.v_s * self.pulse.waveform(t);
        let c = drive_coefficients(&self.derived, v, self.pulse.mode.sign() * v);
        DriveAmplitudes {
            qubit1: SQRT_2 * c.qubit1_total(),
            qubit2: SQRT_2 * c.qubit2_total(),
        }
    }

    pub fn hamiltonian(&self, t: f64) -> ComplexMatrix4 {
        build_hd(self.amplitudes(t))
    }
}

/// Discretization of a propagation window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimeGrid {
    pub t_start: f64,
    pub t_end: f64,
    pub dt: f64,
}

/// Minimum number of steps per carrier period.
pub const MIN_STEPS_PER_PERIOD: f64 = 50.0;

impl TimeGrid {
    pub fn new(t_start: f64, t_end: f64, dt: f64) -> Result<Self> {
        let grid = TimeGrid { t_start, t_end, dt };
        grid.validate()?;
        Ok(grid)
    }

    /// Grid covering `t_center +- half_width_sigmas * sigma_t`.
    pub fn around_pulse(pulse: &PulseConfig, half_width_sigmas: f64, dt: f64) -> Result<Self> {
        let half = half_width_sigmas * pulse.sigma_t;
        Self::new(pulse.t_center - half, pulse.t_center + half, dt)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_start.is_finite() && self.t_end.is_finite()) {
            return Err(Error::domain("grid", "window bounds must be finite"));
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::domain(
                "dt",
                format!("must be positive, got {:e}", self.dt),
            ));
        }
        if self.t_end <= self.t_start {
            return Err(Error::domain("t_end", "must be greater than t_start"));
        }
        Ok(())
    }

    /// Rejects steps coarser than `1 / MIN_STEPS_PER_PERIOD` of the carrier period.
    pub fn check_resolution(&self, carrier: f64) -> Result<()> {
        let limit = TAU / carrier / MIN_STEPS_PER_PERIOD;
        if self.dt > limit * (1.0 + 1e-9) {
            return Err(Error::domain(
                "dt",
                format!(
                    "{:e} exceeds the resolution floor {limit:e} (carrier period / 50)",
                    self.dt
                ),
            ));
        }
        Ok(())
    }

    /// Number of full steps, `floor((t_end - t_start) / dt)`.
    pub fn steps(&self) -> usize {
        // The small slack keeps e.g. (1.0 - 0.0) / 0.1 from rounding down to 9.
        ((self.t_end - self.t_start) / self.dt * (1.0 + 1e-12)).floor() as usize
    }

    pub fn time(&self, k: usize) -> f64 {
        self.t_start + k as f64 * self.dt
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.steps()).map(|k| self.time(k))
    }
}

/// Half-width and density of the shift-angle quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureWindow {
    pub half_width_sigmas: f64,
    pub points_per_sigma: usize,
}

impl Default for QuadratureWindow {
    fn default() -> Self {
        QuadratureWindow {
            half_width_sigmas: 8.0,
            points_per_sigma: 64,
        }
    }
}

/// Shift angle obtained by integrating the rotating-wave envelope
/// numerically: `theta = 2 |int Omega_e exp(-t^2 / 2 sigma_t^2) exp(-i lambda_delta t) dt|`
/// with composite Simpson over the window. Independent of the closed form in
/// [`crate::analytic::shift_angle`].
pub fn shift_angle_quadrature(
    cfg: &PulseConfig,
    d: &DerivedParams,
    window: QuadratureWindow,
) -> Result<f64> {
    if window.half_width_sigmas < 6.0 {
        return Err(Error::Precondition(format!(
            "quadrature window +-{} sigma_t is narrower than +-6 sigma_t",
            window.half_width_sigmas
        )));
    }
    if window.points_per_sigma < 2 {
        return Err(Error::Precondition(
            "need at least 2 quadrature points per sigma_t".into(),
        ));
    }
    cfg.validate()?;
    let omega_e = peak_amplitude(cfg.mode, d, cfg.v_s);
    let lambda_delta = d.omega_g;
    let half = window.half_width_sigmas * cfg.sigma_t;
    let mut intervals =
        (2.0 * window.half_width_sigmas * window.points_per_sigma as f64).ceil() as usize;
    intervals += intervals % 2;
    let h = 2.0 * half / intervals as f64;

    let (mut re, mut im) = (0.0, 0.0);
    for k in 0..=intervals {
        let t = -half + k as f64 * h;
        let weight = if k == 0 || k == intervals {
            1.0
        } else if k % 2 == 1 {
            4.0
        } else {
            2.0
        };
        let g = (-0.5 * (t / cfg.sigma_t).powi(2)).exp();
        re += weight * g * (lambda_delta * t).cos();
        im -= weight * g * (lambda_delta * t).sin();
    }
    let integral = omega_e * h / 3.0 * re.hypot(im);
    Ok(2.0 * integral.abs())
}

/// Closed-form shift angle per volt of Gaussian peak voltage,
/// `2 sqrt(2 pi) C_d / (C_s (1 -+ gamma)) sigma_t exp(-lambda_delta^2 sigma_t^2 / 2) / sigma_phi`.
pub fn shift_angle_gain(
    mode: DriveMode,
    d: &DerivedParams,
    lambda_delta: f64,
    sigma_t: f64,
) -> f64 {
    2.0 * (2.0 * PI).sqrt()
        * peak_amplitude(mode, d, 1.0)
        * sigma_t
        * (-0.5 * (lambda_delta * sigma_t).powi(2)).exp()
}

/// Source voltage whose closed-form shift angle equals `target_theta`.
pub fn calibrate_voltage(
    target_theta: f64,
    mode: DriveMode,
    d: &DerivedParams,
    sigma_t: f64,
) -> Result<f64> {
    if !(target_theta.is_finite() && target_theta >= 0.0) {
        return Err(Error::domain(
            "target_theta",
            format!("must be non-negative, got {target_theta}"),
        ));
    }
    if !(sigma_t.is_finite() && sigma_t > 0.0) {
        return Err(Error::domain(
            "sigma_t",
            format!("must be positive, got {sigma_t:e}"),
        ));
    }
    if !(d.sigma_phi().is_finite() && d.sigma_phi() > 0.0) {
        return Err(Error::domain("sigma_phi", "degenerate flux scale"));
    }
    let gain = shift_angle_gain(mode, d, d.omega_g, sigma_t);
    if !(gain.is_finite() && gain > 0.0) {
        return Err(Error::domain(
            "sigma_t",
            "detuning suppression exp(-lambda_delta^2 sigma_t^2 / 2) underflows",
        ));
    }
    Ok(target_theta / gain)
}
