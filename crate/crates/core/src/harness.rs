//! Run configuration, simulation workflow and file outputs.
//!
//! Configs are flat JSON objects with dotted keys:
//!
//! ```json
//! {
//!   "circuit.L1": 20e-9, "circuit.L2": 20e-9,
//!   "circuit.C_J": 50e-15, "circuit.C_d": 5e-15, "circuit.C_g": 0.55e-15,
//!   "pulse.sigma_t": 7e-10, "pulse.mode": "even",
//!   "calibrate_to_theta": 3.141592653589793
//! }
//! ```
//!
//! Optional keys: `pulse.V_s` (exclusive with `calibrate_to_theta`),
//! `pulse.phi_d`, `pulse.carrier_override`, `pulse.t_center`,
//! `grid.t_start`, `grid.t_end`, `grid.dt`, `unit_mode` (`"si"` or
//! `"dimensionless"`), `initial_state` (four `[re, im]` pairs) and a free-text
//! `comment`. Any other key is rejected.

use log::warn;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::analytic::{self, SpectralParams};
use crate::circuit::{derive_params, CircuitParams, DerivedParams, UnitMode};
use crate::error::{Error, Result};
use crate::operators::{build_h0, HermitianEigen, StateVector};
use crate::propagator::{Propagator, SimulationResult};
use crate::pulse::{
    calibrate_voltage, drive_envelope, DriveMode, PulseConfig, PulseDrive, TimeGrid,
};
use crate::C64;

/// Window half-width, in units of `sigma_t`, used when the grid is not given.
pub const DEFAULT_HALF_WINDOW_SIGMAS: f64 = 6.0;
/// Default steps per carrier period.
pub const DEFAULT_STEPS_PER_PERIOD: f64 = 100.0;
/// Magnitudes of the even-balanced target state.
pub const BALANCED_MAGNITUDES: [f64; 4] = [0.5; 4];

#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(default)]
    comment: Option<String>,
    #[serde(rename = "circuit.L1")]
    l1: f64,
    #[serde(rename = "circuit.L2")]
    l2: f64,
    #[serde(rename = "circuit.C_J")]
    c_j: f64,
    #[serde(rename = "circuit.C_d")]
    c_d: f64,
    #[serde(rename = "circuit.C_g")]
    c_g: f64,
    #[serde(rename = "pulse.V_s", default)]
    v_s: Option<f64>,
    #[serde(rename = "pulse.sigma_t")]
    sigma_t: f64,
    #[serde(rename = "pulse.phi_d", default)]
    phi_d: Option<f64>,
    #[serde(rename = "pulse.mode", default)]
    mode: Option<DriveMode>,
    #[serde(rename = "pulse.carrier_override", default)]
    carrier_override: Option<f64>,
    #[serde(rename = "pulse.t_center", default)]
    t_center: Option<f64>,
    #[serde(rename = "grid.t_start", default)]
    t_start: Option<f64>,
    #[serde(rename = "grid.t_end", default)]
    t_end: Option<f64>,
    #[serde(rename = "grid.dt", default)]
    dt: Option<f64>,
    #[serde(default)]
    unit_mode: Option<UnitMode>,
    #[serde(default)]
    calibrate_to_theta: Option<f64>,
    #[serde(default)]
    initial_state: Option<[[f64; 2]; 4]>,
}

/// A validated run. Defaulted quantities (carrier, window, step) are
/// re-derived when a sweep changes a parameter they depend on.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub circuit: CircuitParams,
    pub pulse: PulseConfig,
    pub grid: TimeGrid,
    pub initial_state: StateVector,
    pub unit_mode: UnitMode,
    pub calibrate_to_theta: Option<f64>,
    raw: RawConfig,
}

fn config_key(field: &str) -> &str {
    match field {
        "L1" => "circuit.L1",
        "L2" => "circuit.L2",
        "C_J" => "circuit.C_J",
        "C_d" => "circuit.C_d",
        "C_g" => "circuit.C_g",
        "sigma_t" => "pulse.sigma_t",
        "carrier" => "pulse.carrier_override",
        "V_s" => "pulse.V_s",
        "phi_d" => "pulse.phi_d",
        "t_center" => "pulse.t_center",
        "dt" => "grid.dt",
        "t_end" => "grid.t_end",
        "grid" => "grid.t_start",
        "target_theta" => "calibrate_to_theta",
        other => other,
    }
}

fn keyed(e: Error) -> Error {
    match e {
        Error::Domain { field, reason } => {
            Error::Config(format!("`{}`: {reason}", config_key(field)))
        }
        other => other,
    }
}

/// Highest eigenvalue of the static Hamiltonian; `lambda_sigma` for
/// identical resonators.
pub fn default_carrier(d: &DerivedParams) -> Result<f64> {
    let eig = HermitianEigen::new(&build_h0(d))?;
    Ok(eig.sorted_values()[3])
}

impl RawConfig {
    fn resolve(self) -> Result<RunConfig> {
        let circuit = CircuitParams {
            l1: self.l1,
            l2: self.l2,
            c_j: self.c_j,
            c_d: self.c_d,
            c_g: self.c_g,
        };
        circuit.validate().map_err(keyed)?;
        let unit_mode = self.unit_mode.unwrap_or_default();
        let derived = derive_params(&circuit, unit_mode).map_err(keyed)?;

        let carrier = match self.carrier_override {
            Some(c) => c,
            None => default_carrier(&derived)?,
        };
        let sigma_t = self.sigma_t;
        if !(sigma_t.is_finite() && sigma_t > 0.0) {
            return Err(Error::Config(format!(
                "`pulse.sigma_t`: must be positive, got {sigma_t:e}"
            )));
        }
        let half = DEFAULT_HALF_WINDOW_SIGMAS * sigma_t;
        let t_start = self.t_start.unwrap_or(0.0);
        let (t_center, t_end) = match (self.t_center, self.t_end) {
            (Some(c), Some(e)) => (c, e),
            (None, Some(e)) => (0.5 * (t_start + e), e),
            (Some(c), None) => (c, c + half),
            (None, None) => (t_start + half, t_start + 2.0 * half),
        };
        let dt = match self.dt {
            Some(dt) => dt,
            None => std::f64::consts::TAU / carrier / DEFAULT_STEPS_PER_PERIOD,
        };

        let v_s = match (self.v_s, self.calibrate_to_theta) {
            (Some(_), Some(_)) => {
                return Err(Error::Config(
                    "`pulse.V_s` and `calibrate_to_theta` are mutually exclusive".into(),
                ))
            }
            (None, None) => {
                return Err(Error::Config(
                    "one of `pulse.V_s` or `calibrate_to_theta` is required".into(),
                ))
            }
            (Some(v), None) => v,
            (None, Some(theta)) => {
                calibrate_voltage(theta, self.mode.unwrap_or_default(), &derived, sigma_t)
                    .map_err(keyed)?
            }
        };

        let pulse = PulseConfig {
            v_s,
            sigma_t,
            carrier,
            phi_d: self.phi_d.unwrap_or(0.0),
            t_center,
            mode: self.mode.unwrap_or_default(),
        };
        pulse.validate().map_err(keyed)?;
        if !pulse.rwa_valid() {
            warn!(
                "carrier * sigma_t = {:.3} is below {}; rotating-wave comparisons are unreliable",
                pulse.carrier_sigma(),
                crate::pulse::RWA_MIN_CARRIER_SIGMA
            );
        }

        let grid = TimeGrid::new(t_start, t_end, dt).map_err(keyed)?;
        grid.check_resolution(carrier).map_err(keyed)?;

        let initial_state = match self.initial_state {
            None => StateVector::ground(),
            Some(pairs) => StateVector::new(pairs.map(|[re, im]| C64::new(re, im)))
                .map_err(|e| Error::Config(format!("`initial_state`: {e}")))?,
        };

        Ok(RunConfig {
            circuit,
            pulse,
            grid,
            initial_state,
            unit_mode,
            calibrate_to_theta: self.calibrate_to_theta,
            raw: self,
        })
    }
}

/// Parses and validates a config document.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let raw: RawConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    raw.resolve()
}

pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text)
}

/// The shipped even-mode example config.
pub const GRAL_LIKE_CONFIG: &str = include_str!("../examples/gral-like.json");

/// A scalar a sweep can vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    VoltagePeak,
    SigmaT,
    /// Coupling ratio, realized by adjusting `C_g`.
    Gamma,
    Dt,
    PhiD,
}

impl FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "V_s" => Ok(SweepAxis::VoltagePeak),
            "sigma_t" => Ok(SweepAxis::SigmaT),
            "gamma" => Ok(SweepAxis::Gamma),
            "dt" => Ok(SweepAxis::Dt),
            "phi_d" => Ok(SweepAxis::PhiD),
            other => Err(Error::UnknownAxis(other.to_string())),
        }
    }
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::VoltagePeak => "V_s",
            SweepAxis::SigmaT => "sigma_t",
            SweepAxis::Gamma => "gamma",
            SweepAxis::Dt => "dt",
            SweepAxis::PhiD => "phi_d",
        }
    }
}

impl RunConfig {
    pub fn derived(&self) -> Result<DerivedParams> {
        derive_params(&self.circuit, self.unit_mode)
    }

    pub fn mode(&self) -> DriveMode {
        self.pulse.mode
    }

    /// Copy with the drive mode switched (re-calibrating if requested).
    pub fn with_mode(&self, mode: DriveMode) -> Result<Self> {
        let mut raw = self.raw.clone();
        raw.mode = Some(mode);
        raw.resolve()
    }

    /// Copy with one swept parameter replaced. Setting `V_s` turns off
    /// calibration; every other axis keeps it.
    pub fn with_axis(&self, axis: SweepAxis, value: f64) -> Result<Self> {
        let mut raw = self.raw.clone();
        match axis {
            SweepAxis::VoltagePeak => {
                raw.v_s = Some(value);
                raw.calibrate_to_theta = None;
            }
            SweepAxis::SigmaT => raw.sigma_t = value,
            SweepAxis::Gamma => {
                let c = self.circuit.with_gamma(value).map_err(keyed)?;
                raw.c_g = c.c_g;
            }
            SweepAxis::Dt => raw.dt = Some(value),
            SweepAxis::PhiD => raw.phi_d = Some(value),
        }
        raw.resolve()
    }
}

/// Root-mean-square difference over the four components.
pub fn rms_difference(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    (a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>() / 4.0).sqrt()
}

fn state_pairs(psi: &StateVector) -> [[f64; 2]; 4] {
    psi.amplitudes().map(|c| [c.re, c.im])
}

/// Summary of one simulated run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub mode: DriveMode,
    pub final_magnitudes: [f64; 4],
    /// Closed-form end-state magnitudes; absent for unequal inductances.
    pub analytic_magnitudes: Option<[f64; 4]>,
    pub rms_vs_analytic: Option<f64>,
    pub max_abs_deviation_vs_analytic: Option<f64>,
    pub rms_vs_balanced: f64,
    /// Closed-form shift angle for the pulse that was run.
    pub theta_used: Option<f64>,
    #[serde(rename = "calibrated_V_s")]
    pub calibrated_v_s: Option<f64>,
    #[serde(rename = "V_s")]
    pub v_s: f64,
    pub carrier: f64,
    pub sigma_t: f64,
    pub gamma: f64,
    pub dt: f64,
    pub steps: usize,
    pub norm_drift: f64,
    pub max_unitarity_defect: f64,
    pub final_state: [[f64; 2]; 4],
    pub analytic_state: Option<[[f64; 2]; 4]>,
}

/// Full output of [`run_simulate`].
#[derive(Debug, Clone)]
pub struct SimulationOutput {
    pub report: RunReport,
    pub result: SimulationResult,
    /// Qubit-1 drive amplitude at each grid time.
    pub envelope: Vec<f64>,
}

impl SimulationOutput {
    /// `t,mag00,mag01,mag10,mag11,envelope`, one row per grid time. Numbers use
    /// the shortest representation that parses back to the same value.
    pub fn series_csv(&self) -> String {
        let mut out = String::from("t,mag00,mag01,mag10,mag11,envelope\n");
        for ((t, m), e) in self
            .result
            .times
            .iter()
            .zip(&self.result.magnitudes)
            .zip(&self.envelope)
        {
            writeln!(
                out,
                "{t:?},{:?},{:?},{:?},{:?},{e:?}",
                m[0], m[1], m[2], m[3]
            )
            .expect("write to String");
        }
        out
    }

    pub fn summary_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.report).expect("report serializes");
        s.push('\n');
        s
    }

    /// Writes `series.csv` and `summary.json` into `out_dir`.
    pub fn write(&self, out_dir: &Path) -> Result<()> {
        fs::create_dir_all(out_dir)?;
        fs::write(out_dir.join("series.csv"), self.series_csv())?;
        fs::write(out_dir.join("summary.json"), self.summary_json())?;
        Ok(())
    }
}

/// Runs the full derive, build, propagate and compare workflow.
pub fn run_simulate(cfg: &RunConfig) -> Result<SimulationOutput> {
    let derived = cfg.derived()?;
    let h0 = build_h0(&derived);
    let drive = PulseDrive::new(cfg.pulse, derived);
    // The frame clock starts at the pulse center, where the carrier phase is
    // referenced.
    let propagator = Propagator::new(h0)?.with_frame_origin(cfg.pulse.t_center);
    let result = propagator.propagate(&drive, &cfg.grid, &cfg.initial_state)?;
    let envelope = result
        .times
        .iter()
        .map(|&t| drive_envelope(&cfg.pulse, &derived, t))
        .collect();

    let final_magnitudes = result.final_magnitudes();
    let spectral = analytic::spectral_params(&derived).ok();
    let analytic = spectral.map(|sp: SpectralParams| {
        let theta = analytic::shift_angle(
            cfg.pulse.mode,
            &derived,
            &sp,
            cfg.pulse.v_s,
            cfg.pulse.sigma_t,
        );
        (theta, analytic::end_state(cfg.pulse.mode, &sp, theta))
    });
    let analytic_magnitudes = analytic.as_ref().map(|(_, psi)| psi.magnitudes());

    let report = RunReport {
        mode: cfg.pulse.mode,
        final_magnitudes,
        analytic_magnitudes,
        rms_vs_analytic: analytic_magnitudes.map(|a| rms_difference(&final_magnitudes, &a)),
        max_abs_deviation_vs_analytic: analytic_magnitudes.map(|a| {
            final_magnitudes
                .iter()
                .zip(a)
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max)
        }),
        rms_vs_balanced: rms_difference(&final_magnitudes, &BALANCED_MAGNITUDES),
        theta_used: analytic.as_ref().map(|(theta, _)| *theta),
        calibrated_v_s: cfg.calibrate_to_theta.map(|_| cfg.pulse.v_s),
        v_s: cfg.pulse.v_s,
        carrier: cfg.pulse.carrier,
        sigma_t: cfg.pulse.sigma_t,
        gamma: derived.gamma,
        dt: cfg.grid.dt,
        steps: cfg.grid.steps(),
        norm_drift: result.max_norm_drift,
        max_unitarity_defect: result.bundle.max_unitarity_defect,
        final_state: state_pairs(&result.final_state),
        analytic_state: analytic.as_ref().map(|(_, psi)| state_pairs(psi)),
    };
    Ok(SimulationOutput {
        report,
        result,
        envelope,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub value: f64,
    pub report: RunReport,
}

/// One independent run per value, results in input order.
pub fn run_sweep(template: &RunConfig, axis: SweepAxis, values: &[f64]) -> Result<Vec<SweepRow>> {
    values
        .par_iter()
        .map(|&value| {
            let cfg = template.with_axis(axis, value)?;
            let report = run_simulate(&cfg)?.report;
            Ok(SweepRow { value, report })
        })
        .collect()
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:?}")).unwrap_or_default()
}

/// Sweep table keyed by the swept value.
pub fn sweep_csv(axis: SweepAxis, rows: &[SweepRow]) -> String {
    let mut out = format!(
        "{},mag00,mag01,mag10,mag11,rms_vs_balanced,rms_vs_analytic,theta_used,V_s,dt,steps,norm_drift\n",
        axis.name()
    );
    for row in rows {
        let r = &row.report;
        let m = r.final_magnitudes;
        writeln!(
            out,
            "{:?},{:?},{:?},{:?},{:?},{:?},{},{},{:?},{:?},{},{:?}",
            row.value,
            m[0],
            m[1],
            m[2],
            m[3],
            r.rms_vs_balanced,
            opt(r.rms_vs_analytic),
            opt(r.theta_used),
            r.v_s,
            r.dt,
            r.steps,
            r.norm_drift
        )
        .expect("write to String");
    }
    out
}

/// Parses a comma-separated list of numbers; an empty string is an empty list.
pub fn parse_values(list: &str) -> Result<Vec<f64>> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .map_err(|_| Error::Config(format!("`--values`: cannot parse `{s}`")))
        })
        .collect()
}
