//! Tuning dependence of photon creation: one run per driving period,
//! showing the parametric resonance around the half-period of the driven
//! mode.
//!
//! ```bash
//! cargo run --example tuning_sweep
//! ```

use dce_cavity::cli::{sweep_tuning, Value};
use dce_cavity::config::RunConfig;

fn main() {
    let cfg = RunConfig::parse(
        "mode.ell_max = 9\npulse.v_max_lz = 1\npulse.n_pulses = 8\nintegrator.steps_per_period = 1024\nrun.t_final_ps = 950\n",
    )
    .unwrap();
    let periods: Vec<f64> = (100..=110).map(|t| t as f64).collect();
    println!(
        "TM (0,1), V L_z = {}, {} pulses, final time {} ps",
        cfg.v_max_lz, cfg.n_pulses, 950
    );
    println!("static half-period of the driven mode: 103.6 ps");
    println!();
    let table = sweep_tuning(&cfg, &periods, 0);
    println!("{:>7} {:>13} {:>12}", "T_ps", "N_1(final)", "defect_max");
    let mut best = (0.0, f64::NEG_INFINITY);
    for row in &table.rows {
        if let (Value::F(t), Value::F(defect), Value::F(n1)) = (&row[0], &row[2], &row[4]) {
            println!("{t:7.1} {n1:13.4e} {defect:12.2e}");
            if *n1 > best.1 {
                best = (*t, *n1);
            }
        }
    }
    println!();
    println!("resonant period of this configuration: {} ps", best.0);
}
