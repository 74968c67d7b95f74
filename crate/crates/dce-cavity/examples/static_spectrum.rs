//! Static (field-free) mode table of the cylindrical cavity: frequencies of
//! the lowest TE and TM modes and their resonant driving periods.
//!
//! ```bash
//! cargo run --example static_spectrum
//! ```

use dce_cavity::spectrum::CavityConfig;
use dce_cavity::transverse::Polarization;
use dce_cavity::units::UnitMap;

fn main() {
    let units = UnitMap::new(100.0);
    println!("cavity: L_z = 100 mm, R = 25 mm");
    println!();
    println!("{:>8} {:>4} {:>12} {:>16}", "mode", "p", "f (GHz)", "pi/omega (ps)");
    for (pol, n, m) in [(Polarization::Te, 1, 1), (Polarization::Tm, 0, 1)] {
        let cfg = CavityConfig::new(1.0, 0.25, 0.5, pol, n, m, 4).unwrap();
        for p in cfg.branches() {
            let omega = cfg.omega_static(p);
            let f_ghz = units.omega_to_ghz(omega);
            let t_res_ps = units.natural_to_ps(std::f64::consts::PI / omega);
            println!(
                "{:>5}{}{}{} {:>4} {:>12.4} {:>16.2}",
                pol.label(), n, m, p, p, f_ghz, t_res_ps,
            );
        }
        println!();
    }
    println!("The second fundamental TM mode (TM011) sits at 4.83 GHz with a");
    println!("resonant pulse period of about 103 ps; TE111 at 3.83 GHz / 131 ps.");
}
