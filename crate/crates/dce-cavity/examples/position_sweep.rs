//! Position dependence of photon creation: one run per sheet location, with
//! the mirror pair eta and 1-eta giving identical yields.
//!
//! ```bash
//! cargo run --example position_sweep
//! ```

use dce_cavity::cli::{sweep_position, Value};
use dce_cavity::config::RunConfig;

fn main() {
    let cfg = RunConfig::parse(
        "mode.ell_max = 9\npulse.v_max_lz = 1\npulse.n_pulses = 6\npulse.period_ps = 105\nintegrator.steps_per_period = 1024\n",
    )
    .unwrap();
    let etas = [0.3, 0.4, 0.5, 0.6, 0.7];
    println!(
        "TM (0,1), V L_z = {}, T = {} ps, {} pulses",
        cfg.v_max_lz, cfg.period_ps, cfg.n_pulses
    );
    println!();
    let table = sweep_position(&cfg, &etas, &cfg.sweep_eta_period_overrides, 0);
    println!("{:>6} {:>8} {:>13} {:>12}", "eta", "T_ps", "N_1(final)", "defect_max");
    let mut yields = Vec::new();
    for row in &table.rows {
        if let (Value::F(eta), Value::F(t), Value::F(defect), Value::F(n1)) =
            (&row[0], &row[1], &row[3], &row[5])
        {
            println!("{eta:6.2} {t:8.1} {n1:13.4e} {defect:12.2e}");
            yields.push((*eta, *n1));
        }
    }
    println!();
    let at = |eta: f64| yields.iter().find(|(e, _)| (e - eta).abs() < 1e-9).unwrap().1;
    println!("mirror symmetry: N(0.3) / N(0.7) = {:.6}", at(0.3) / at(0.7));
    println!("spread max/min across positions: {:.2}",
        yields.iter().map(|(_, n)| *n).fold(f64::NEG_INFINITY, f64::max)
        / yields.iter().map(|(_, n)| *n).fold(f64::INFINITY, f64::min));
}
