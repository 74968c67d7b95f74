//! The fundamental TM mode (zero longitudinal wavenumber) is never excited
//! by the plasma sheet: its frequency is constant and its coupling row and
//! column vanish, so it stays on free evolution to machine precision.
//!
//! ```bash
//! cargo run --example zero_mode
//! ```

use dce_cavity::config::RunConfig;
use dce_cavity::evolve::run;

fn main() {
    let cfg = RunConfig::parse(
        "mode.ell_max = 9\npulse.n_pulses = 4\npulse.period_ps = 105\nintegrator.steps_per_period = 1024\noutput.samples_per_period = 4\n",
    )
    .unwrap();
    let cavity = cfg.cavity().unwrap();
    let profile = cfg.profile().unwrap();
    let units = cfg.units();

    println!(
        "zero mode frequency: {:.4} GHz (transverse cutoff, k_z = 0), constant in time",
        units.omega_to_ghz(cavity.omega_static(0))
    );
    let samples = run(&cavity, &profile, &cfg.run_options()).unwrap();
    let i0 = cavity.index_of_p(0);
    let i1 = cavity.index_of_p(1);
    println!();
    println!("{:>9} {:>13} {:>13}", "t_ps", "N_0 (zero)", "N_1 (driven)");
    for s in samples.iter().step_by(4) {
        println!(
            "{:9.1} {:13.3e} {:13.4e}",
            units.natural_to_ps(s.t),
            s.result.n[i0],
            s.result.n[i1]
        );
    }
    let n0_max = samples.iter().map(|s| s.result.n[i0]).fold(0.0, f64::max);
    println!();
    println!("max N_0 over the whole run: {n0_max:.3e} (no parametric enhancement)");
}
