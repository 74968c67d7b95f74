//! Build the pulsed plasma-strength waveform and show its shape and
//! smoothness at the pulse junctions.
//!
//! ```bash
//! cargo run --example pulse_profile
//! ```

use dce_cavity::config::RunConfig;

fn main() {
    let cfg = RunConfig::parse("pulse.n_pulses = 2").expect("default config");
    let units = cfg.units();
    let profile = cfg.profile().expect("valid pulse");

    println!("driving period      : {:.1} ps", cfg.period_ps);
    println!("peak strength V*L_z : {}", cfg.v_max_lz);
    println!("split               : {:.0}% excitation / {:.0}% plateau / {:.0}% relaxation",
        100.0 * cfg.excitation_fraction,
        100.0 * cfg.plateau_fraction,
        100.0 * (1.0 - cfg.excitation_fraction - cfg.plateau_fraction));
    println!();
    println!("{:>8}  {:>12}  {:>14}", "t_ps", "V*L_z", "dV/dt per ps");
    for i in 0..=40 {
        let t_ps = i as f64 * 2.0 * cfg.period_ps / 40.0;
        let t = units.ps_to_natural(t_ps);
        println!(
            "{:8.1}  {:12.5}  {:14.5}",
            t_ps,
            profile.eval(t),
            units.rate_to_per_ps(profile.eval_derivative(t))
        );
    }

    // Smoothness across the pulse junction.
    let tj = profile.period();
    let eps = 1e-9;
    println!();
    println!("junction residual |V(T+) - V(T-)|      : {:.3e} (budget 1e-12 * V_max)",
        (profile.eval(tj + eps) - profile.eval(tj - eps)).abs());
    println!("junction slope gap |V'(T+) - V'(T-)|   : {:.3e}",
        (profile.eval_derivative(tj + eps) - profile.eval_derivative(tj - eps)).abs());
}
