//! Reconstruct the electromagnetic field of a cavity mode from its Hertz
//! scalar on a radial/axial grid.
//!
//! ```bash
//! cargo run --example field_pattern
//! ```

use dce_cavity::modes::{build_mode, reconstruct_fields, CylindricalPoint};
use dce_cavity::spectrum::CavityConfig;
use dce_cavity::transverse::Polarization;

fn main() {
    // Static TM (0,1) mode with p = 1 (the second fundamental TM mode).
    let cfg = CavityConfig::new(1.0, 0.25, 0.5, Polarization::Tm, 0, 1, 2).unwrap();
    let mode = build_mode(1, cfg.static_k(1), 0.0, &cfg).unwrap();
    let omega = cfg.omega_static(1);

    println!("TM011 field magnitudes (arbitrary units), phi = 0:");
    println!("{:>8} {:>8} {:>10} {:>10} {:>10} {:>10}", "rho/R", "z/L", "|E_rho|", "|E_z|", "|B_phi|", "|B_z|");
    for iz in [0.0f64, 0.25, 0.5] {
        for ir in [0.0f64, 0.5, 1.0] {
            let point = CylindricalPoint { rho: ir * cfg.r, phi: 0.0, z: iz * cfg.l_z };
            let f = reconstruct_fields(&cfg, &mode, omega, point).unwrap();
            println!(
                "{:8.2} {:8.2} {:10.4} {:10.4} {:10.4} {:10.4}",
                ir,
                iz,
                f.e[0].norm(),
                f.e[2].norm(),
                f.b[1].norm(),
                f.b[2].norm()
            );
        }
    }
    println!();

    // TE mode: E_z vanishes identically and tangential E dies on the wall.
    let te = CavityConfig::new(1.0, 0.25, 0.5, Polarization::Te, 1, 1, 2).unwrap();
    let te_mode = build_mode(1, te.static_k(1), 0.0, &te).unwrap();
    let omega_te = te.omega_static(1);
    let wall = reconstruct_fields(&te, &te_mode, omega_te, CylindricalPoint { rho: te.r, phi: 0.4, z: 0.3 })
        .unwrap();
    let inside = reconstruct_fields(&te, &te_mode, omega_te, CylindricalPoint { rho: 0.1, phi: 0.4, z: 0.3 })
        .unwrap();
    println!("TE111 checks:");
    println!("  E_z everywhere       : {:.1e} (identically zero)", inside.e[2].norm());
    println!("  |E_phi| at rho = R   : {:.2e} (conductor wall)", wall.e[1].norm());
    println!("  |E_phi| at rho = 0.4R: {:.4}", inside.e[1].norm());
}
