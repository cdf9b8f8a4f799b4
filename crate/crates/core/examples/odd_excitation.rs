//! Calibrated odd-mode pulse (opposite source polarities) from the ground
//! state, with the drive amplitude at a few times through the pulse.

use qubit_pair::harness::{parse_config, run_simulate, GRAL_LIKE_CONFIG};
use qubit_pair::pulse::{DriveMode, PulseDrive};

fn main() -> qubit_pair::Result<()> {
    let cfg = parse_config(GRAL_LIKE_CONFIG)?.with_mode(DriveMode::Odd)?;
    let drive = PulseDrive::new(cfg.pulse, cfg.derived()?);
    for s in [-1.0, 0.0, 1.0] {
        let t = cfg.pulse.t_center + s * cfg.pulse.sigma_t + 0.25 * cfg.pulse.carrier_period();
        let a = drive.amplitudes(t);
        println!(
            "t_center {s:+} sigma: qubit 1 {:+.4e}, qubit 2 {:+.4e}",
            a.qubit1, a.qubit2
        );
    }

    let r = run_simulate(&cfg)?.report;
    println!("calibrated V_s   {:e} V", r.v_s);
    println!("final |c|        {:.5?}", r.final_magnitudes);
    println!(
        "closed form |c|  {:.5?}",
        r.analytic_magnitudes.unwrap_or_default()
    );
    println!("rms vs balanced  {:.4}", r.rms_vs_balanced);
    Ok(())
}
