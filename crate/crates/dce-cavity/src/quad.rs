//! Adaptive Simpson quadrature.
//!
//! Used as the cross-validation fallback for the closed-form overlap
//! integrals and by the normalization/orthogonality checks. The integrands
//! here are smooth trigonometric or Bessel products, for which Simpson
//! refinement converges quickly. Refinement stops at the integrand's own
//! roundoff floor, so a tolerance below machine noise cannot trigger
//! runaway subdivision.

/// Integrate `f` over `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    // Noise floor: Simpson sums cannot resolve below the roundoff of the
    // sampled values times the interval.
    let scale = fa.abs().max(fm.abs()).max(fb.abs());
    let floor = 8.0 * f64::EPSILON * scale * (b - a).abs();
    simpson_step(&f, a, b, fa, fm, fb, whole, tol.max(floor), MAX_DEPTH)
}

const MAX_DEPTH: u32 = 30;
/// Subdivide unconditionally for the first levels: periodic integrands can
/// alias the coarse Simpson nodes into a spuriously small error estimate.
const FORCED_LEVELS: u32 = 4;

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    // Interval collapsed to adjacent floats: nothing left to refine.
    if !(a < lm && lm < m && m < rm && rm < b) {
        return whole;
    }
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    let converged = delta.abs() <= 15.0 * tol && depth <= MAX_DEPTH - FORCED_LEVELS;
    if depth == 0 || converged {
        left + right + delta / 15.0
    } else {
        let child_tol = 0.5 * tol;
        simpson_step(f, a, m, fa, flm, fm, left, child_tol, depth - 1)
            + simpson_step(f, m, b, fm, frm, fb, right, child_tol, depth - 1)
    }
}
