//! Snapshot of the intermode coupling matrix M(t) mid-flank: antisymmetry,
//! the vanishing zero-mode row/column, and closed-form vs quadrature
//! agreement.
//!
//! ```bash
//! cargo run --example coupling_matrix
//! ```

use dce_cavity::config::RunConfig;
use dce_cavity::evolve::Assembler;
use dce_cavity::modes::{build_mode_with_rates, coupling_matrix_quadrature};
use dce_cavity::spectrum::{dk_dt, solve_branch};

fn main() {
    let cfg_text = "mode.ell_max = 5\npulse.n_pulses = 1\n";
    let run_cfg = RunConfig::parse(cfg_text).unwrap();
    let cavity = run_cfg.cavity().unwrap();
    let profile = run_cfg.profile().unwrap();
    let units = run_cfg.units();

    // Mid-excitation instant: V and dV/dt both substantial.
    let t = 0.3 * profile.period();
    let mut asm = Assembler::new(&cavity, &profile).unwrap();
    let sys = asm.system_at(t).unwrap();
    println!(
        "t = {:.1} ps: V L_z = {:.1}, branches p = 0..{}",
        units.natural_to_ps(t),
        sys.v,
        run_cfg.ell_max
    );
    println!();
    println!("M(t) in 1/ps (rows: source branch m, columns: target n):");
    let n = sys.m.n;
    for mi in 0..n {
        for ni in 0..n {
            print!("{:11.4e} ", units.rate_to_per_ps(sys.m.get(mi, ni)));
        }
        println!();
    }

    let mut asym = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            asym = asym.max((sys.m.get(i, j) + sys.m.get(j, i)).abs());
        }
    }
    println!();
    println!("antisymmetry residual max |M_mn + M_nm| : {asym:.2e}");

    // Cross-check against the quadrature fallback path.
    let v = profile.eval(t);
    let v_dot = profile.eval_derivative(t);
    let states: Vec<_> = cavity
        .branches()
        .iter()
        .map(|&p| {
            let (k, kd) = if p == 0 {
                (0.0, 0.0)
            } else {
                let k = solve_branch(p, v, cavity.static_k(p), &cavity).unwrap();
                (k, dk_dt(k, v, v_dot, &cavity).unwrap())
            };
            build_mode_with_rates(p, k, kd, v, v_dot, &cavity, None).unwrap()
        })
        .collect();
    let quad = coupling_matrix_quadrature(&states, &cavity, 1e-11);
    let mut diff = 0.0f64;
    for i in 0..n * n {
        diff = diff.max((sys.m.values[i] - quad.values[i]).abs());
    }
    println!("closed form vs quadrature max |delta|   : {diff:.2e}");
    let zero = cavity.index_of_p(0);
    println!(
        "zero-mode row/column exactly zero        : {}",
        (0..n).all(|j| sys.m.get(zero, j) == 0.0 && sys.m.get(j, zero) == 0.0)
    );
}
