//! Time-dependent longitudinal wavenumbers over one laser pulse: TE branches
//! shift up from the static ladder, TM branches shift down, and even TE
//! branches stay pinned when the sheet sits at the midpoint.
//!
//! ```bash
//! cargo run --example frequency_shift
//! ```

use dce_cavity::pulse::PulseProfile;
use dce_cavity::spectrum::{trajectory, CavityConfig};
use dce_cavity::transverse::Polarization;
use dce_cavity::units::UnitMap;

fn main() {
    let units = UnitMap::new(100.0);
    let period = units.ps_to_natural(113.0);
    for v_max in [5000.0, 1.0] {
        let profile = PulseProfile::build(
            0.4 * period / 8.5,
            0.2 * period,
            0.4 * period / 8.5,
            period,
            v_max,
            1,
        )
        .unwrap();
        println!("== V_max L_z = {v_max}");
        for pol in [Polarization::Te, Polarization::Tm] {
            let (n, m) = match pol {
                Polarization::Te => (1, 1),
                Polarization::Tm => (0, 1),
            };
            let cfg = CavityConfig::new(1.0, 0.25, 0.5, pol, n, m, 4).unwrap();
            let traj = trajectory(&profile, &cfg, 200).unwrap();
            println!("  {} branches: k_p L_z range over the pulse (static p*pi)", pol.label());
            for (bi, &p) in traj.branch_p.iter().enumerate() {
                if p == 0 {
                    continue;
                }
                let lo = traj.k[bi].iter().cloned().fold(f64::INFINITY, f64::min);
                let hi = traj.k[bi].iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                println!(
                    "    p={p}: [{:9.5}, {:9.5}]  (static {:8.5}, max |shift| {:.2e})",
                    lo,
                    hi,
                    cfg.static_k(p),
                    (hi - cfg.static_k(p)).abs().max((lo - cfg.static_k(p)).abs())
                );
            }
        }
        println!();
    }
}
