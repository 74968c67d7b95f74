//! Instantaneous longitudinal mode functions against the plasma sheet:
//! matching conditions at the sheet, unit norm and orthogonality.
//!
//! ```bash
//! cargo run --example mode_functions
//! ```

use dce_cavity::modes::build_mode;
use dce_cavity::spectrum::{solve_branch, CavityConfig};
use dce_cavity::transverse::Polarization;

fn main() {
    let v = 5000.0;
    for pol in [Polarization::Te, Polarization::Tm] {
        let (n, m) = match pol {
            Polarization::Te => (1, 1),
            Polarization::Tm => (0, 1),
        };
        let cfg = CavityConfig::new(1.0, 0.25, 0.4, pol, n, m, 3).unwrap();
        println!("== {} modes, eta = {}, V L_z = {v}", pol.label(), cfg.eta);
        let mut modes = Vec::new();
        for p in cfg.branches() {
            let k = if p == 0 {
                0.0
            } else {
                // Continue gradually from the static root.
                let mut k = cfg.static_k(p);
                for w in [1.0, 10.0, 100.0, 1000.0, v] {
                    k = solve_branch(p, w, k, &cfg).unwrap();
                }
                k
            };
            let mode = build_mode(p, k, v, &cfg).unwrap();
            if p >= 1 {
                let (value_l, value_r) = mode.sheet_values();
                let (dz_l, dz_r) = mode.sheet_derivatives();
                match pol {
                    Polarization::Te => println!(
                        "  p={p}: k L_z = {k:8.5}, psi(d) continuity gap {:.1e}, \
                         derivative jump / psi(d) = {:.6} (expect {v})",
                        (value_r - value_l).abs(),
                        mode.derivative_jump() / value_l
                    ),
                    Polarization::Tm => println!(
                        "  p={p}: k L_z = {k:8.5}, dz phi continuity gap {:.1e}, \
                         value jump / dz phi(d) = {:.6e} (expect {:.6e})",
                        (dz_r - dz_l).abs(),
                        mode.value_jump() / dz_l,
                        -v / (cfg.k_perp() * cfg.k_perp())
                    ),
                }
            }
            modes.push(mode);
        }
        // Orthonormality by quadrature.
        let mut worst = 0.0f64;
        for (i, a) in modes.iter().enumerate() {
            for (j, b) in modes.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((a.overlap_quadrature(b, 1e-12) - target).abs());
            }
        }
        println!("  worst orthonormality residual: {worst:.2e}");
        println!();
    }
}
