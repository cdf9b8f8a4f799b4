use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::{error, info};
use serde_json::{json, Value};

use qubit_pair::circuit::drive_coefficients;
use qubit_pair::harness::{
    load_config, parse_values, run_simulate, run_sweep, sweep_csv, RunConfig, SweepAxis,
};
use qubit_pair::operators::ComplexMatrix4;
use qubit_pair::pulse::{calibrate_voltage, peak_amplitude};
use qubit_pair::{analytic, verify, Result};

#[derive(Parser)]
#[command(
    name = "qubit-pair",
    version,
    about = "Coupled two-qubit drive simulation"
)]
struct Cli {
    /// Only report errors.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Io {
    #[arg(long)]
    config: PathBuf,
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Derived circuit quantities, spectrum and drive coefficients.
    Derive(Io),
    /// Propagate the configured pulse; writes series.csv and summary.json.
    Simulate(Io),
    /// Closed-form end state for the configured pulse.
    Analytic(Io),
    /// Source voltage for a requested shift angle.
    Calibrate {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        target_theta: f64,
    },
    /// One run per value of a parameter; writes sweep.csv.
    Sweep {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        axis: String,
        /// Comma-separated values; may be empty.
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        values: String,
    },
    /// Run the acceptance checks; writes summary.json.
    Verify {
        #[arg(long, default_value = "out")]
        out_dir: PathBuf,
    },
}

fn write_summary(out_dir: &Path, value: &Value) -> Result<()> {
    fs::create_dir_all(out_dir)?;
    let mut text = serde_json::to_string_pretty(value).expect("json value serializes");
    text.push('\n');
    fs::write(out_dir.join("summary.json"), text)?;
    Ok(())
}

fn matrix_json(m: &ComplexMatrix4) -> Value {
    let rows: Vec<Vec<[f64; 2]>> = (0..4)
        .map(|i| (0..4).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect();
    json!(rows)
}

fn derive(cfg: &RunConfig, out_dir: &Path) -> Result<()> {
    let d = cfg.derived()?;
    let spectral = analytic::spectral_params(&d).ok();
    let sign = cfg.mode().sign();
    let coefficients = drive_coefficients(&d, 1.0, sign);
    write_summary(
        out_dir,
        &json!({
            "derived": d,
            "spectral": spectral,
            "drive_coefficients_per_volt": coefficients,
            "mode": cfg.mode(),
            "carrier": cfg.pulse.carrier,
            "carrier_sigma": cfg.pulse.carrier_sigma(),
        }),
    )?;
    info!("gamma = {:.6}, omega_r = {:.6e}", d.gamma, d.omega_r());
    Ok(())
}

fn analytic_end_state(cfg: &RunConfig, out_dir: &Path) -> Result<()> {
    let d = cfg.derived()?;
    let sp = analytic::spectral_params(&d)?;
    let theta = analytic::shift_angle(cfg.mode(), &d, &sp, cfg.pulse.v_s, cfg.pulse.sigma_t);
    let end = analytic::RwaEndState::new(cfg.mode(), &sp, theta);
    write_summary(
        out_dir,
        &json!({
            "mode": cfg.mode(),
            "theta": theta,
            "V_s": cfg.pulse.v_s,
            "spectral": sp,
            "end_state": end.psi.amplitudes().map(|c| [c.re, c.im]),
            "end_magnitudes": end.psi.magnitudes(),
            "evolution_matrix": matrix_json(&end.matrix),
        }),
    )?;
    info!(
        "theta = {theta:.6}, magnitudes = {:?}",
        end.psi.magnitudes()
    );
    Ok(())
}

fn calibrate(cfg: &RunConfig, out_dir: &Path, target_theta: f64) -> Result<()> {
    let d = cfg.derived()?;
    let v_s = calibrate_voltage(target_theta, cfg.mode(), &d, cfg.pulse.sigma_t)?;
    write_summary(
        out_dir,
        &json!({
            "mode": cfg.mode(),
            "target_theta": target_theta,
            "sigma_t": cfg.pulse.sigma_t,
            "calibrated_V_s": v_s,
            "peak_drive_amplitude": peak_amplitude(cfg.mode(), &d, v_s),
        }),
    )?;
    info!("V_s = {v_s:e} V for theta = {target_theta}");
    Ok(())
}

fn simulate(cfg: &RunConfig, out_dir: &Path) -> Result<()> {
    let out = run_simulate(cfg)?;
    out.write(out_dir)?;
    let r = &out.report;
    info!(
        "{} steps, final magnitudes {:?}, rms vs balanced {:.4}",
        r.steps, r.final_magnitudes, r.rms_vs_balanced
    );
    Ok(())
}

fn sweep(cfg: &RunConfig, out_dir: &Path, axis: &str, values: &str) -> Result<()> {
    let axis: SweepAxis = axis.parse()?;
    let values = parse_values(values)?;
    let rows = run_sweep(cfg, axis, &values)?;
    fs::create_dir_all(out_dir)?;
    fs::write(out_dir.join("sweep.csv"), sweep_csv(axis, &rows))?;
    info!("{} runs over {}", rows.len(), axis.name());
    Ok(())
}

/// Returns whether every criterion passed.
fn run_verify(out_dir: &Path) -> Result<bool> {
    let outcomes = verify::verify_all();
    for o in &outcomes {
        if o.passed {
            info!("{}", o.line());
        } else {
            error!("{}", o.line());
        }
    }
    let passed = outcomes.iter().all(|o| o.passed);
    write_summary(out_dir, &json!({ "passed": passed, "criteria": outcomes }))?;
    Ok(passed)
}

fn run(command: Command) -> Result<bool> {
    match command {
        Command::Derive(io) => derive(&load_config(&io.config)?, &io.out_dir),
        Command::Simulate(io) => simulate(&load_config(&io.config)?, &io.out_dir),
        Command::Analytic(io) => analytic_end_state(&load_config(&io.config)?, &io.out_dir),
        Command::Calibrate { io, target_theta } => {
            calibrate(&load_config(&io.config)?, &io.out_dir, target_theta)
        }
        Command::Sweep { io, axis, values } => {
            sweep(&load_config(&io.config)?, &io.out_dir, &axis, &values)
        }
        Command::Verify { out_dir } => return run_verify(&out_dir),
    }
    .map(|()| true)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let level = if cli.quiet { "error" } else { "info" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .init();

    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(3),
        Err(e) => {
            error!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
