//! Primitive trigonometric integrals over `[0, X]` and the sine/cosine
//! product integrals assembled from them.
//!
//! Every overlap integral between piecewise-sinusoidal mode functions
//! reduces to the four primitives `int cos(cz)`, `int sin(cz)`,
//! `int z cos(cz)`, `int z sin(cz)` at sum and difference frequencies.
//! Closed forms divide by powers of `c`, so small `|c X|` switches to the
//! ascending series; the crossover at 0.1 keeps both branches at ~1e-13
//! relative accuracy.

const SMALL: f64 = 0.1;

/// `int_0^x cos(c z) dz`.
pub fn int_cos(c: f64, x: f64) -> f64 {
    int_cos_pre(c, x, (c * x).sin())
}

/// `int_0^x sin(c z) dz`.
pub fn int_sin(c: f64, x: f64) -> f64 {
    int_sin_pre(c, x, (c * x).cos())
}

/// `int_0^x z cos(c z) dz`.
pub fn int_z_cos(c: f64, x: f64) -> f64 {
    let (s, co) = (c * x).sin_cos();
    int_z_cos_pre(c, x, s, co)
}

/// `int_0^x z sin(c z) dz`.
pub fn int_z_sin(c: f64, x: f64) -> f64 {
    let (s, co) = (c * x).sin_cos();
    int_z_sin_pre(c, x, s, co)
}

/// Variant of [`int_cos`] taking a precomputed `sin(c x)`.
pub fn int_cos_pre(c: f64, x: f64, sin_cx: f64) -> f64 {
    let u = c * x;
    if u.abs() < SMALL {
        // x * (1 - u^2/3! + u^4/5! - ...)
        let mut term = 1.0;
        let mut sum = 1.0;
        let uu = u * u;
        for j in 1..12 {
            let tj = 2.0 * j as f64;
            term *= -uu / (tj * (tj + 1.0));
            sum += term;
            if term.abs() < 1e-18 {
                break;
            }
        }
        x * sum
    } else {
        sin_cx / c
    }
}

/// Variant of [`int_sin`] taking a precomputed `cos(c x)`.
pub fn int_sin_pre(c: f64, x: f64, cos_cx: f64) -> f64 {
    let u = c * x;
    if u.abs() < SMALL {
        // x * (u/2! - u^3/4! + ...)
        let mut term = 0.5 * u;
        let mut sum = term;
        let uu = u * u;
        for j in 1..12 {
            let tj = 2.0 * j as f64;
            term *= -uu / ((tj + 1.0) * (tj + 2.0));
            sum += term;
            if term.abs() < 1e-18 {
                break;
            }
        }
        x * sum
    } else {
        (1.0 - cos_cx) / c
    }
}

/// Variant of [`int_z_cos`] taking precomputed `sin(c x)`, `cos(c x)`.
pub fn int_z_cos_pre(c: f64, x: f64, sin_cx: f64, cos_cx: f64) -> f64 {
    let u = c * x;
    if u.abs() < SMALL {
        // x^2 * sum_j (-1)^j u^{2j} / ((2j+2) (2j)!)
        let mut term = 0.5;
        let mut sum = term;
        let uu = u * u;
        for j in 1..12 {
            let tj = 2.0 * j as f64;
            term *= -uu / ((tj + 2.0) * (tj - 1.0));
            sum += term;
            if term.abs() < 1e-18 {
                break;
            }
        }
        x * x * sum
    } else {
        (cos_cx - 1.0 + u * sin_cx) / (c * c)
    }
}

/// Variant of [`int_z_sin`] taking precomputed `sin(c x)`, `cos(c x)`.
pub fn int_z_sin_pre(c: f64, x: f64, sin_cx: f64, cos_cx: f64) -> f64 {
    let u = c * x;
    if u.abs() < SMALL {
        // x^2 * sum_j (-1)^j u^{2j+1} / ((2j+3) (2j+1)!)
        let mut fact_term = u; // u^{2j+1}/(2j+1)!
        let mut sum = fact_term / 3.0;
        let uu = u * u;
        for j in 1..12 {
            let tj = 2.0 * j as f64;
            fact_term *= -uu / (tj * (tj + 1.0));
            let contrib = fact_term / (tj + 3.0);
            sum += contrib;
            if contrib.abs() < 1e-18 {
                break;
            }
        }
        x * x * sum
    } else {
        (sin_cx - u * cos_cx) / (c * c)
    }
}

/// Cached sine/cosine of one branch wavenumber times the two sub-interval
/// lengths, reused across all pairings of that branch.
#[derive(Debug, Clone, Copy)]
pub struct BranchTrig {
    pub k: f64,
    pub sin_kx: f64,
    pub cos_kx: f64,
}

impl BranchTrig {
    pub fn new(k: f64, x: f64) -> Self {
        let (sin_kx, cos_kx) = (k * x).sin_cos();
        Self { k, sin_kx, cos_kx }
    }
}

/// Product integrals over `[0, X]` for a pair of wavenumbers, computed from
/// cached single-frequency sines/cosines via angle addition.
#[derive(Debug, Clone, Copy)]
pub struct PairIntegrals {
    /// `int sin(k_a z) sin(k_b z)`
    pub ss: f64,
    /// `int cos(k_a z) cos(k_b z)`
    pub cc: f64,
    /// `int z cos(k_a z) sin(k_b z)`
    pub zcs: f64,
    /// `int z sin(k_a z) cos(k_b z)`
    pub zsc: f64,
}

impl PairIntegrals {
    pub fn new(a: &BranchTrig, b: &BranchTrig, x: f64) -> Self {
        let c_minus = a.k - b.k;
        let c_plus = a.k + b.k;
        let sin_minus = a.sin_kx * b.cos_kx - a.cos_kx * b.sin_kx;
        let cos_minus = a.cos_kx * b.cos_kx + a.sin_kx * b.sin_kx;
        let sin_plus = a.sin_kx * b.cos_kx + a.cos_kx * b.sin_kx;
        let cos_plus = a.cos_kx * b.cos_kx - a.sin_kx * b.sin_kx;

        let ci_minus = int_cos_pre(c_minus, x, sin_minus);
        let ci_plus = int_cos_pre(c_plus, x, sin_plus);
        let zs_minus = int_z_sin_pre(c_minus, x, sin_minus, cos_minus);
        let zs_plus = int_z_sin_pre(c_plus, x, sin_plus, cos_plus);

        Self {
            ss: 0.5 * (ci_minus - ci_plus),
            cc: 0.5 * (ci_minus + ci_plus),
            zcs: 0.5 * (zs_plus - zs_minus),
            zsc: 0.5 * (zs_plus + zs_minus),
        }
    }
}
