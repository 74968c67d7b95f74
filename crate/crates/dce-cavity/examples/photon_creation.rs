//! Photon creation in a resonantly driven TM cavity: per-mode photon
//! numbers and the unitarity defect over a short pulse train.
//!
//! ```bash
//! cargo run --example photon_creation
//! ```

use dce_cavity::config::RunConfig;
use dce_cavity::evolve::run;

fn main() {
    // Reduced truncation keeps the example fast; the acceptance suite runs
    // the full-size version.
    let cfg = RunConfig::parse(
        "mode.ell_max = 15\npulse.n_pulses = 6\npulse.period_ps = 105\nintegrator.steps_per_period = 2048\noutput.samples_per_period = 2\n",
    )
    .unwrap();
    let cavity = cfg.cavity().unwrap();
    let profile = cfg.profile().unwrap();
    let units = cfg.units();
    println!(
        "TM (0,1) ladder, eta = {}, V L_z = {}, T = {} ps, {} pulses",
        cfg.eta, cfg.v_max_lz, cfg.period_ps, cfg.n_pulses,
    );

    let samples = run(&cavity, &profile, &cfg.run_options()).unwrap();
    println!();
    println!("{:>9} {:>12} {:>12} {:>12} {:>12} {:>11}", "t_ps", "N_1", "N_3", "N_5", "N_total", "defect_max");
    for s in samples.iter().filter(|s| s.field_free) {
        let total: f64 = s.result.n.iter().sum();
        let defect = s.result.unitarity_defect.iter().cloned().fold(0.0, f64::max);
        println!(
            "{:9.1} {:12.4e} {:12.4e} {:12.4e} {:12.4e} {:11.2e}",
            units.natural_to_ps(s.t),
            s.result.n[cavity.index_of_p(1)],
            s.result.n[cavity.index_of_p(3)],
            s.result.n[cavity.index_of_p(5)],
            total,
            defect
        );
    }
    println!();
    println!("With the sheet at the midpoint the even branches decouple exactly");
    println!("(node at the sheet), so creation flows through the odd ladder.");
    let even_max = samples
        .iter()
        .map(|s| s.result.n[cavity.index_of_p(2)])
        .fold(0.0, f64::max);
    println!("max N_2 over the run: {even_max:.2e}");

    // Detector-facing rate for a user-chosen train repetition interval.
    let total: f64 = samples.last().unwrap().result.n.iter().sum();
    let repetition_s = 10e-3;
    println!(
        "at one train per {} ms: {:.2} photons/s",
        repetition_s * 1e3,
        dce_cavity::evolve::photon_rate_per_second(total, repetition_s)
    );
}
