//! Drude polarization-loss diagnostics for the dominant mode: the two
//! mitigation routes are a thinner irradiated layer (|P| linear in the
//! penetration depth) and a shorter recombination time (Im/Re = omega0 tau).
//!
//! ```bash
//! cargo run --example drude_losses
//! ```

use dce_cavity::config::RunConfig;
use dce_cavity::losses::{loss_report, polarization_single_mode, susceptibility_time, DrudeParams};
use dce_cavity::transverse::Polarization;

fn main() {
    let cfg = RunConfig::default();
    let params = cfg.drude().unwrap();
    let omega0 = cfg.omega0_rad_per_s().unwrap();
    println!("dominant mode: omega0 = {:.3e} rad/s ({:.2} GHz)", omega0, omega0 / (2.0 * std::f64::consts::PI) / 1e9);
    println!("carriers: n_s = {:.1e} /m^2, delta_d = {} um, tau = {} ps", params.n_s, params.delta_d * 1e6, params.tau * 1e12);
    println!();

    println!("{:>8} {:>10} {:>12} {:>10}", "tau_ps", "omega0*tau", "|P|/E0", "low loss");
    for tau_ps in [1.0, 3.0, 10.0, 30.0, 100.0] {
        let p = DrudeParams { tau: tau_ps * 1e-12, ..params };
        let report = loss_report(&p, omega0, Polarization::Tm);
        println!(
            "{:8.1} {:10.4} {:12.4e} {:>10}",
            tau_ps,
            report.im_re_ratio,
            report.p_over_e.norm(),
            if report.low_loss { "yes" } else { "no" }
        );
    }
    println!();

    println!("{:>10} {:>12}   (|P| is linear in the penetration depth)", "delta_um", "|P|/E0");
    for delta_um in [50.0, 25.0, 5.0, 0.5] {
        let p = DrudeParams { delta_d: delta_um * 1e-6, ..params };
        let pol = polarization_single_mode(&p, 1.0, omega0, 0.0);
        println!("{delta_um:10.1} {:12.4e}", pol.norm());
    }
    println!();

    let te = loss_report(&params, omega0, Polarization::Te);
    println!("TE input: polarization-loss channel is zero ({})", te.lossless_channel);
    println!("causality: chi(dt = -1 ps) = {}", susceptibility_time(&params, -1e-12));
}
