//! Bessel functions of the first kind, their derivatives, and their positive
//! roots.
//!
//! Evaluation uses the ascending power series for small arguments and
//! Miller's normalized backward recurrence beyond, so the module carries no
//! external dependency. The switch point at `x = 12` keeps the series'
//! alternating-term cancellation below ~1e-12 absolute; the backward
//! recurrence is accurate to near machine precision for the arguments used
//! here (x <= a few hundred).

/// Series/recurrence crossover argument.
const SERIES_LIMIT: f64 = 12.0;

/// Bessel function of the first kind `J_n(x)` for `n >= 0`, `x >= 0`.
pub fn bessel_j(n: u32, x: f64) -> f64 {
    debug_assert!(x >= 0.0, "bessel_j domain is x >= 0");
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    if x < SERIES_LIMIT {
        bessel_j_series(n, x)
    } else {
        bessel_j_miller(n, x)
    }
}

/// Derivative `J_n'(x)`, via `J_0' = -J_1` and
/// `J_n' = (J_{n-1} - J_{n+1}) / 2`.
pub fn bessel_j_prime(n: u32, x: f64) -> f64 {
    if n == 0 {
        -bessel_j(1, x)
    } else {
        0.5 * (bessel_j(n - 1, x) - bessel_j(n + 1, x))
    }
}

/// Ascending series `J_n(x) = sum_k (-1)^k (x/2)^{n+2k} / (k! (n+k)!)`.
fn bessel_j_series(n: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    // Leading term (x/2)^n / n!, built incrementally to postpone overflow
    // and underflow for large n.
    let mut term = 1.0;
    for k in 1..=n {
        term *= half / k as f64;
    }
    let mut sum = term;
    let hh = half * half;
    for k in 1..200 {
        let kf = k as f64;
        term *= -hh / (kf * (n as f64 + kf));
        sum += term;
        if term.abs() < 1e-18 * sum.abs().max(1e-300) {
            break;
        }
    }
    sum
}

/// Miller's algorithm: backward recurrence from a start order well above
/// both `n` and `x`, normalized by `J_0 + 2 sum_{k even} J_2k = 1`.
fn bessel_j_miller(n: u32, x: f64) -> f64 {
    let start = miller_start(n, x);
    let mut fkp1 = 0.0_f64;
    let mut fk = 1e-300;
    let mut norm = 0.0;
    let mut target = 0.0;
    let mut k = start;
    while k > 0 {
        let fkm1 = (2.0 * k as f64 / x) * fk - fkp1;
        fkp1 = fk;
        fk = fkm1;
        // k-1 is the order fk now represents.
        if (k - 1) % 2 == 0 && k - 1 > 0 {
            norm += 2.0 * fk;
        }
        if k - 1 == n {
            target = fk;
        }
        if fk.abs() > 1e250 {
            let scale = 1e-250;
            fk *= scale;
            fkp1 *= scale;
            norm *= scale;
            target *= scale;
        }
        k -= 1;
    }
    norm += fk; // J_0 contribution (fk holds order 0 here)
    target / norm
}

fn miller_start(n: u32, x: f64) -> u32 {
    let base = x + 15.0 * x.cbrt() + 40.0;
    let start = (n as f64 + 20.0).max(base) as u32;
    start + (start % 2) // even start keeps the norm accumulation aligned
}

/// Which function a root request refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootKind {
    /// Roots of `J_n(x) = 0` (Dirichlet, TM).
    J,
    /// Roots of `J_n'(x) = 0` (Neumann, TE).
    JPrime,
}

/// The `m`-th positive root (`m >= 1`) of `J_n` or `J_n'`.
///
/// For `J_0'` the trivial root at the origin is excluded, so the first root
/// is `j'_{0,1} = 3.8317...` (the first positive extremum of `J_0`).
///
/// Brackets are located by scanning sign changes outward from the origin in
/// steps safely below the asymptotic root spacing, so the result is always
/// the m-th root and never a neighbor; brackets are then bisected to full
/// precision. McMahon's expansion is used only as a scan cutoff sanity bound.
pub fn bessel_root(kind: RootKind, n: u32, m: u32) -> f64 {
    assert!(m >= 1, "root ordinal m must be >= 1");
    let f = |x: f64| match kind {
        RootKind::J => bessel_j(n, x),
        RootKind::JPrime => bessel_j_prime(n, x),
    };
    // J_n and J_n' are positive just right of the origin for n >= 1;
    // J_0 starts at 1 and J_0' dips negative immediately, so start the
    // J_0' scan past zero with a positive-definite reference sign skipped.
    let mut lo = match kind {
        RootKind::J => 1e-9 + 0.5 * n as f64,
        RootKind::JPrime => {
            if n == 0 {
                // J_0'(x) = -J_1(x) < 0 on (0, j_{1,1}); count its zeros.
                1e-9
            } else {
                1e-9 + 0.5 * n as f64
            }
        }
    };
    let step = std::f64::consts::PI / 8.0;
    let cutoff = mcmahon_estimate(kind, n, m) + 4.0 * std::f64::consts::PI;
    let mut flo = f(lo);
    let mut found = 0;
    while lo < cutoff {
        let hi = lo + step;
        let fhi = f(hi);
        if flo == 0.0 {
            // Landed exactly on a root; nudge.
            lo += 1e-12;
            flo = f(lo);
            continue;
        }
        if flo * fhi < 0.0 {
            found += 1;
            if found == m {
                return bisect(&f, lo, hi);
            }
        }
        lo = hi;
        flo = fhi;
    }
    unreachable!("scan cutoff passed before reaching root {m} of order {n}");
}

/// McMahon's large-root expansion, used as a scan upper bound.
fn mcmahon_estimate(kind: RootKind, n: u32, m: u32) -> f64 {
    use std::f64::consts::PI;
    let mu = 4.0 * (n as f64) * (n as f64);
    match kind {
        RootKind::J => {
            let beta = (m as f64 + 0.5 * n as f64 - 0.25) * PI;
            beta - (mu - 1.0) / (8.0 * beta)
        }
        RootKind::JPrime => {
            let beta = (m as f64 + 0.5 * n as f64 - 0.75) * PI;
            beta - (mu + 3.0) / (8.0 * beta)
        }
    }
}

fn bisect(f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        let fmid = f(mid);
        if fmid == 0.0 {
            return mid;
        }
        if flo * fmid < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            flo = fmid;
        }
    }
    0.5 * (lo + hi)
}
