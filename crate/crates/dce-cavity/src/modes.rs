//! Instantaneous longitudinal mode functions, the intermode coupling matrix,
//! and field reconstruction from the Hertz scalars.
//!
//! A longitudinal mode is piecewise sinusoidal on `[0, d]` and `[d, L]`,
//! matched at the sheet by a continuity condition and a jump condition and
//! normalized to unit spatial norm. The amplitude pair `(a, b)` is the null
//! vector of the 2x2 matching system; the system's determinant is the
//! eigenvalue residual, so on a solved root the two conditions give parallel
//! constraints and the better-conditioned one is used.
//!
//! Jump conventions across the sheet (at `z = d`, writing `g(d+) - g(d-)`
//! as the forward difference):
//!
//! - TE: `psi` continuous, `d_z psi(d+) - d_z psi(d-) = V psi(d)`;
//! - TM: `d_z phi` continuous, `phi(d-) - phi(d+) = -(V / k_perp^2) d_z phi(d)`.
//!
//! The TM value jump is oriented so that it is consistent with the
//! down-shifting branch of the eigenvalue relation.

use num_complex::Complex64;
use thiserror::Error;

use crate::quad::adaptive_simpson;
use crate::spectrum::CavityConfig;
use crate::transverse::Polarization;
use crate::trig::{int_z_sin, BranchTrig, PairIntegrals};

#[derive(Debug, Error, PartialEq)]
pub enum ModeError {
    #[error("degenerate matching for branch p={p} at k={k:.6e}: both matching rows vanish")]
    DegenerateMatching { p: usize, k: f64 },
    #[error("point (rho={rho}, z={z}) outside the cavity")]
    OutOfDomain { rho: f64, z: f64 },
}

/// One normalized instantaneous longitudinal mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LongitudinalMode {
    pub branch: usize,
    pub polarization: Polarization,
    pub k: f64,
    /// Amplitude of the `[0, d]` piece.
    pub a: f64,
    /// Amplitude of the `[d, L]` piece (argument `k (L - z)`).
    pub b: f64,
    d: f64,
    l: f64,
}

impl LongitudinalMode {
    /// Mode function at `z`.
    pub fn eval(&self, z: f64) -> f64 {
        self.eval_side(z, z > self.d)
    }

    /// Mode function at `z` with the sheet side chosen explicitly. TM modes
    /// jump at the sheet, so integrals over `[d, L]` must take the right
    /// side at `z = d`.
    pub fn eval_side(&self, z: f64, right_of_sheet: bool) -> f64 {
        match (self.polarization, right_of_sheet) {
            (Polarization::Te, false) => self.a * (self.k * z).sin(),
            (Polarization::Te, true) => self.b * (self.k * (self.l - z)).sin(),
            (Polarization::Tm, false) => self.a * (self.k * z).cos(),
            (Polarization::Tm, true) => self.b * (self.k * (self.l - z)).cos(),
        }
    }

    /// Spatial derivative at `z` (one-sided at the sheet: the piece
    /// containing `z` decides, with `z = d` counted in the left piece).
    pub fn eval_dz(&self, z: f64) -> f64 {
        match self.polarization {
            Polarization::Te => {
                if z <= self.d {
                    self.a * self.k * (self.k * z).cos()
                } else {
                    -self.b * self.k * (self.k * (self.l - z)).cos()
                }
            }
            Polarization::Tm => {
                if z <= self.d {
                    -self.a * self.k * (self.k * z).sin()
                } else {
                    self.b * self.k * (self.k * (self.l - z)).sin()
                }
            }
        }
    }

    /// Value just left / right of the sheet.
    pub fn sheet_values(&self) -> (f64, f64) {
        match self.polarization {
            Polarization::Te => (
                self.a * (self.k * self.d).sin(),
                self.b * (self.k * (self.l - self.d)).sin(),
            ),
            Polarization::Tm => (
                self.a * (self.k * self.d).cos(),
                self.b * (self.k * (self.l - self.d)).cos(),
            ),
        }
    }

    /// Derivative just left / right of the sheet.
    pub fn sheet_derivatives(&self) -> (f64, f64) {
        match self.polarization {
            Polarization::Te => (
                self.a * self.k * (self.k * self.d).cos(),
                -self.b * self.k * (self.k * (self.l - self.d)).cos(),
            ),
            Polarization::Tm => (
                -self.a * self.k * (self.k * self.d).sin(),
                self.b * self.k * (self.k * (self.l - self.d)).sin(),
            ),
        }
    }

    /// TE derivative jump `d_z psi(d+) - d_z psi(d-)`.
    pub fn derivative_jump(&self) -> f64 {
        let (dl, dr) = self.sheet_derivatives();
        dr - dl
    }

    /// TM value jump `phi(d-) - phi(d+)`.
    pub fn value_jump(&self) -> f64 {
        let (vl, vr) = self.sheet_values();
        vl - vr
    }

    /// Closed-form spatial norm (should be 1 after construction).
    pub fn norm_sq(&self) -> f64 {
        let (n1, n2) = piece_norms(self.polarization, self.k, self.d, self.l);
        self.a * self.a * n1 + self.b * self.b * n2
    }

    /// Overlap `int_0^L this * other dz` by closed form. Both modes must
    /// share geometry and polarization.
    pub fn overlap(&self, other: &LongitudinalMode) -> f64 {
        let x1 = self.d;
        let x2 = self.l - self.d;
        let a1 = BranchTrig::new(self.k, x1);
        let b1 = BranchTrig::new(other.k, x1);
        let a2 = BranchTrig::new(self.k, x2);
        let b2 = BranchTrig::new(other.k, x2);
        let p1 = PairIntegrals::new(&a1, &b1, x1);
        let p2 = PairIntegrals::new(&a2, &b2, x2);
        match self.polarization {
            Polarization::Te => self.a * other.a * p1.ss + self.b * other.b * p2.ss,
            Polarization::Tm => self.a * other.a * p1.cc + self.b * other.b * p2.cc,
        }
    }

    /// Overlap by adaptive quadrature (the fallback/cross-check path).
    pub fn overlap_quadrature(&self, other: &LongitudinalMode, tol: f64) -> f64 {
        adaptive_simpson(|z| self.eval_side(z, false) * other.eval_side(z, false), 0.0, self.d, tol)
            + adaptive_simpson(|z| self.eval_side(z, true) * other.eval_side(z, true), self.d, self.l, tol)
    }
}

/// Time derivatives of a mode's defining parameters along a trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeRates {
    pub k_dot: f64,
    pub a_dot: f64,
    pub b_dot: f64,
}

/// A branch at one instant: the mode and its parameter velocities.
#[derive(Debug, Clone, Copy)]
pub struct InstantaneousBranch {
    pub mode: LongitudinalMode,
    pub rates: ModeRates,
}

/// Sub-interval norms `int shape^2` for unit amplitudes.
fn piece_norms(pol: Polarization, k: f64, d: f64, l: f64) -> (f64, f64) {
    let t1 = BranchTrig::new(k, d);
    let t2 = BranchTrig::new(k, l - d);
    let p1 = PairIntegrals::new(&t1, &t1, d);
    let p2 = PairIntegrals::new(&t2, &t2, l - d);
    match pol {
        Polarization::Te => (p1.ss, p2.ss),
        Polarization::Tm => (p1.cc, p2.cc),
    }
}

/// `d/dk` of the sub-interval norms.
fn piece_norms_dk(pol: Polarization, k: f64, d: f64, l: f64) -> (f64, f64) {
    match pol {
        // d/dk int sin^2(kz) = int z sin(2kz) ; d/dk int cos^2 = -that
        Polarization::Te => (int_z_sin(2.0 * k, d), int_z_sin(2.0 * k, l - d)),
        Polarization::Tm => (-int_z_sin(2.0 * k, d), -int_z_sin(2.0 * k, l - d)),
    }
}

/// Raw (unnormalized) amplitude pair and its partials in `(k, V)`, from the
/// better conditioned matching row.
struct RawAmplitudes {
    r_a: f64,
    r_b: f64,
    dk: (f64, f64),
    dv: (f64, f64),
}

fn raw_amplitudes(p: usize, k: f64, v: f64, cfg: &CavityConfig) -> Result<RawAmplitudes, ModeError> {
    let d = cfg.d();
    let ld = cfg.l_z - d;
    let (s_d, c_d) = (k * d).sin_cos();
    let (s_ld, c_ld) = (k * ld).sin_cos();
    match cfg.polarization {
        Polarization::Te => {
            // Null vectors of the continuity row and of the jump row.
            let n1 = (s_ld, s_d);
            let n2 = (k * c_ld, -(k * c_d + v * s_d));
            let m1 = n1.0 * n1.0 + n1.1 * n1.1;
            let m2 = n2.0 * n2.0 + n2.1 * n2.1;
            if m1 <= 1e-24 && m2 <= 1e-24 * (1.0 + k * k) {
                return Err(ModeError::DegenerateMatching { p, k });
            }
            if m1 >= m2 / (1.0 + k * k) {
                Ok(RawAmplitudes {
                    r_a: n1.0,
                    r_b: n1.1,
                    dk: (ld * c_ld, d * c_d),
                    dv: (0.0, 0.0),
                })
            } else {
                Ok(RawAmplitudes {
                    r_a: n2.0,
                    r_b: n2.1,
                    dk: (
                        c_ld - k * ld * s_ld,
                        -(c_d - k * d * s_d + v * d * c_d),
                    ),
                    dv: (0.0, -s_d),
                })
            }
        }
        Polarization::Tm => {
            let kp2 = cfg.k_perp() * cfg.k_perp();
            let gamma = v * k / kp2;
            let n1 = (s_ld, -s_d);
            let n2 = (c_ld, c_d - gamma * s_d);
            let m1 = n1.0 * n1.0 + n1.1 * n1.1;
            let m2 = n2.0 * n2.0 + n2.1 * n2.1;
            if m1 <= 1e-24 && m2 <= 1e-24 {
                return Err(ModeError::DegenerateMatching { p, k });
            }
            if m1 >= m2 {
                Ok(RawAmplitudes {
                    r_a: n1.0,
                    r_b: n1.1,
                    dk: (ld * c_ld, -d * c_d),
                    dv: (0.0, 0.0),
                })
            } else {
                Ok(RawAmplitudes {
                    r_a: n2.0,
                    r_b: n2.1,
                    dk: (
                        -ld * s_ld,
                        -d * s_d - (v / kp2) * (s_d + k * d * c_d),
                    ),
                    dv: (0.0, -(k / kp2) * s_d),
                })
            }
        }
    }
}

/// Build the normalized mode for branch `p` at `(k, V)`. The overall sign
/// makes `a >= 0` (or `b > 0` when the left piece is negligible).
pub fn build_mode(p: usize, k: f64, v: f64, cfg: &CavityConfig) -> Result<LongitudinalMode, ModeError> {
    build_mode_aligned(p, k, v, cfg, None)
}

/// Build the normalized mode, choosing the sign that maximizes overlap with
/// `reference` (sign continuity along a trajectory).
pub fn build_mode_aligned(
    p: usize,
    k: f64,
    v: f64,
    cfg: &CavityConfig,
    reference: Option<&LongitudinalMode>,
) -> Result<LongitudinalMode, ModeError> {
    Ok(build_mode_with_rates(p, k, 0.0, v, 0.0, cfg, reference)?.mode)
}

/// Build the normalized mode and its parameter velocities given `dk/dt` and
/// `dV/dt`. The zero mode (TM `p = 0`) is constant in time by construction.
pub fn build_mode_with_rates(
    p: usize,
    k: f64,
    k_dot: f64,
    v: f64,
    v_dot: f64,
    cfg: &CavityConfig,
    reference: Option<&LongitudinalMode>,
) -> Result<InstantaneousBranch, ModeError> {
    let d = cfg.d();
    let l = cfg.l_z;
    if p == 0 {
        debug_assert!(cfg.polarization == Polarization::Tm);
        let mode = LongitudinalMode {
            branch: 0,
            polarization: Polarization::Tm,
            k: 0.0,
            a: 1.0 / l.sqrt(),
            b: 1.0 / l.sqrt(),
            d,
            l,
        };
        return Ok(InstantaneousBranch { mode, rates: ModeRates { k_dot: 0.0, a_dot: 0.0, b_dot: 0.0 } });
    }
    let raw = raw_amplitudes(p, k, v, cfg)?;
    let (n1, n2) = piece_norms(cfg.polarization, k, d, l);
    let norm_sq = raw.r_a * raw.r_a * n1 + raw.r_b * raw.r_b * n2;
    let norm = norm_sq.sqrt();
    let mut mode = LongitudinalMode {
        branch: p,
        polarization: cfg.polarization,
        k,
        a: raw.r_a / norm,
        b: raw.r_b / norm,
        d,
        l,
    };
    // Sign: continuity against the reference when given, else a >= 0.
    let flip = match reference {
        Some(reference) => mode.overlap(reference) < 0.0,
        None => {
            if mode.a.abs() > 1e-8 {
                mode.a < 0.0
            } else {
                mode.b < 0.0
            }
        }
    };
    let sigma = if flip { -1.0 } else { 1.0 };
    mode.a *= sigma;
    mode.b *= sigma;

    // Chain rule through (k, V) for the normalized amplitudes.
    let r_a_dot = raw.dk.0 * k_dot + raw.dv.0 * v_dot;
    let r_b_dot = raw.dk.1 * k_dot + raw.dv.1 * v_dot;
    let (n1_k, n2_k) = piece_norms_dk(cfg.polarization, k, d, l);
    let norm_sq_dot = 2.0 * (raw.r_a * r_a_dot * n1 + raw.r_b * r_b_dot * n2)
        + (raw.r_a * raw.r_a * n1_k + raw.r_b * raw.r_b * n2_k) * k_dot;
    let a_dot = sigma * (r_a_dot / norm - raw.r_a * norm_sq_dot / (2.0 * norm_sq * norm));
    let b_dot = sigma * (r_b_dot / norm - raw.r_b * norm_sq_dot / (2.0 * norm_sq * norm));
    Ok(InstantaneousBranch { mode, rates: ModeRates { k_dot, a_dot, b_dot } })
}

/// Antisymmetric intermode coupling matrix `M_mn = int (d_t Psi_m) Psi_n dz`
/// at one instant, for all branches of one transverse mode.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingMatrix {
    pub n: usize,
    /// Row-major `[m * n + n_col]`; row index = source branch position.
    pub values: Vec<f64>,
}

impl CouplingMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, values: vec![0.0; n * n] }
    }

    #[inline]
    pub fn get(&self, m: usize, ncol: usize) -> f64 {
        self.values[m * self.n + ncol]
    }

    #[inline]
    fn set(&mut self, m: usize, ncol: usize, v: f64) {
        self.values[m * self.n + ncol] = v;
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }
}

/// Assemble the coupling matrix from per-branch instantaneous states by
/// closed-form product integrals.
///
/// The diagonal is identically zero (norm conservation), the zero-mode
/// row/column (TM `p = 0`) is zero by construction, and the matrix is
/// antisymmetrized exactly: the `(m, n)` and `(n, m)` integrals are
/// evaluated independently (their raw agreement is a cross-check, see the
/// quadrature path) and averaged, since the underlying operator is
/// antisymmetric identically.
pub fn coupling_matrix(branches: &[InstantaneousBranch], cfg: &CavityConfig) -> CouplingMatrix {
    let n = branches.len();
    let d = cfg.d();
    let ld = cfg.l_z - d;
    let trig_d: Vec<BranchTrig> = branches.iter().map(|b| BranchTrig::new(b.mode.k, d)).collect();
    let trig_ld: Vec<BranchTrig> = branches.iter().map(|b| BranchTrig::new(b.mode.k, ld)).collect();
    let mut out = CouplingMatrix::zeros(n);
    for mi in 0..n {
        let bm = &branches[mi];
        if bm.mode.branch == 0 {
            continue; // zero-mode row vanishes identically
        }
        for ni in 0..n {
            if ni == mi || branches[ni].mode.branch == 0 {
                continue; // diagonal and zero-mode column vanish identically
            }
            let bn = &branches[ni];
            let p1 = PairIntegrals::new(&trig_d[mi], &trig_d[ni], d);
            let p2 = PairIntegrals::new(&trig_ld[mi], &trig_ld[ni], ld);
            let value = match cfg.polarization {
                Polarization::Te => {
                    bm.rates.a_dot * bn.mode.a * p1.ss
                        + bm.rates.k_dot * bm.mode.a * bn.mode.a * p1.zcs
                        + bm.rates.b_dot * bn.mode.b * p2.ss
                        + bm.rates.k_dot * bm.mode.b * bn.mode.b * p2.zcs
                }
                Polarization::Tm => {
                    bm.rates.a_dot * bn.mode.a * p1.cc
                        - bm.rates.k_dot * bm.mode.a * bn.mode.a * p1.zsc
                        + bm.rates.b_dot * bn.mode.b * p2.cc
                        - bm.rates.k_dot * bm.mode.b * bn.mode.b * p2.zsc
                }
            };
            out.set(mi, ni, value);
        }
    }
    for mi in 0..n {
        for ni in mi + 1..n {
            let avg = 0.5 * (out.get(mi, ni) - out.get(ni, mi));
            out.set(mi, ni, avg);
            out.set(ni, mi, -avg);
        }
    }
    out
}

/// Coupling matrix by adaptive quadrature of `int (d_t Psi_m) Psi_n dz`,
/// with `d_t Psi_m` assembled from the same parameter velocities. Fallback
/// and cross-validation path for [`coupling_matrix`].
pub fn coupling_matrix_quadrature(
    branches: &[InstantaneousBranch],
    cfg: &CavityConfig,
    tol: f64,
) -> CouplingMatrix {
    let n = branches.len();
    let d = cfg.d();
    let l = cfg.l_z;
    let mut out = CouplingMatrix::zeros(n);
    for mi in 0..n {
        let bm = &branches[mi];
        if bm.mode.branch == 0 {
            continue;
        }
        let dt_psi = |z: f64, right: bool| {
            let m = &bm.mode;
            match (cfg.polarization, right) {
                (Polarization::Te, false) => {
                    bm.rates.a_dot * (m.k * z).sin() + m.a * bm.rates.k_dot * z * (m.k * z).cos()
                }
                (Polarization::Te, true) => {
                    bm.rates.b_dot * (m.k * (l - z)).sin()
                        + m.b * bm.rates.k_dot * (l - z) * (m.k * (l - z)).cos()
                }
                (Polarization::Tm, false) => {
                    bm.rates.a_dot * (m.k * z).cos() - m.a * bm.rates.k_dot * z * (m.k * z).sin()
                }
                (Polarization::Tm, true) => {
                    bm.rates.b_dot * (m.k * (l - z)).cos()
                        - m.b * bm.rates.k_dot * (l - z) * (m.k * (l - z)).sin()
                }
            }
        };
        for ni in 0..n {
            if ni == mi || branches[ni].mode.branch == 0 {
                continue;
            }
            let bn = &branches[ni];
            let value = adaptive_simpson(|z| dt_psi(z, false) * bn.mode.eval_side(z, false), 0.0, d, tol)
                + adaptive_simpson(|z| dt_psi(z, true) * bn.mode.eval_side(z, true), d, l, tol);
            out.set(mi, ni, value);
        }
    }
    out
}

/// A point inside the cavity in cylindrical coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CylindricalPoint {
    pub rho: f64,
    pub phi: f64,
    pub z: f64,
}

/// Complex field vectors in cylindrical components `(rho, phi, z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldVectors {
    pub e: [Complex64; 3],
    pub b: [Complex64; 3],
}

/// Reconstruct the electromagnetic field of one instantaneous mode from its
/// Hertz scalar, with unit amplitude and harmonic time dependence
/// `e^{-i omega t}` evaluated at `t = 0`.
///
/// The transverse Laplacian is evaluated through the Bessel eigenvalue
/// identity `lap_perp f = -(root/R)^2 f`, so `E_z` (TM) and `B_z` (TE) come
/// out proportional to the scalar itself. TE modes have `E_z = 0`
/// identically; TM modes have `B_z = 0`.
pub fn reconstruct_fields(
    cfg: &CavityConfig,
    mode: &LongitudinalMode,
    omega: f64,
    point: CylindricalPoint,
) -> Result<FieldVectors, ModeError> {
    if !(0.0..=cfg.l_z).contains(&point.z) || !(0.0..=cfg.r).contains(&point.rho) {
        return Err(ModeError::OutOfDomain { rho: point.rho, z: point.z });
    }
    let tv = &cfg.transverse;
    let n = tv.n as f64;
    let kp2 = tv.k_perp * tv.k_perp;
    let zval = mode.eval(point.z);
    let zdz = mode.eval_dz(point.z);
    let f = tv
        .eigenfunction(point.rho, point.phi)
        .map_err(|_| ModeError::OutOfDomain { rho: point.rho, z: point.z })?;
    let f_rho = tv
        .eigenfunction_drho(point.rho, point.phi)
        .map_err(|_| ModeError::OutOfDomain { rho: point.rho, z: point.z })?;
    // (1/rho) f with the on-axis limit: J_n(c rho)/rho -> c/2 for n = 1,
    // 0 for n >= 2 (and the n = 0 angular terms carry a factor n = 0).
    let f_over_rho = if point.rho > 0.0 {
        f / point.rho
    } else if tv.n == 1 {
        Complex64::from_polar(tv.norm_constant() * tv.k_perp / 2.0, point.phi)
    } else {
        Complex64::new(0.0, 0.0)
    };
    let i = Complex64::i();
    let dt = -i * omega; // d/dt of e^{-i omega t} at t = 0
    let dphi = i * n; // d/dphi of e^{i n phi}
    let (e, b) = match cfg.polarization {
        Polarization::Te => {
            let e_rho = -dphi * dt * zval * f_over_rho;
            let e_phi = dt * zval * f_rho;
            let b_rho = zdz * f_rho;
            let b_phi = dphi * zdz * f_over_rho;
            let b_z = kp2 * zval * f;
            ([e_rho, e_phi, Complex64::new(0.0, 0.0)], [b_rho, b_phi, b_z])
        }
        Polarization::Tm => {
            let e_rho = zdz * f_rho;
            let e_phi = dphi * zdz * f_over_rho;
            let e_z = kp2 * zval * f;
            let b_rho = dphi * dt * zval * f_over_rho;
            let b_phi = -dt * zval * f_rho;
            ([e_rho, e_phi, e_z], [b_rho, b_phi, Complex64::new(0.0, 0.0)])
        }
    };
    Ok(FieldVectors { e, b })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::{dk_dt, solve_branch};
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn te_cfg(eta: f64) -> CavityConfig {
        CavityConfig::new(1.0, 0.25, eta, Polarization::Te, 1, 1, 6).unwrap()
    }

    fn tm_cfg(eta: f64) -> CavityConfig {
        CavityConfig::new(1.0, 0.25, eta, Polarization::Tm, 0, 1, 6).unwrap()
    }

    /// Solve branch p at strength v by gradual continuation from static.
    fn continue_to(p: usize, v: f64, cfg: &CavityConfig) -> f64 {
        let mut k = cfg.static_k(p);
        let mut w = v.min(1.0);
        loop {
            k = solve_branch(p, w, k, cfg).unwrap();
            if w == v {
                return k;
            }
            w = (w * 10.0).min(v);
        }
    }

    #[test]
    fn static_te_mode_is_global_sine() {
        let cfg = te_cfg(0.5);
        for p in 1..=4usize {
            let mode = build_mode(p, cfg.static_k(p), 0.0, &cfg).unwrap();
            for i in 0..50 {
                let z = i as f64 / 49.0;
                let expect = (2.0f64).sqrt() * (p as f64 * PI * z).sin();
                assert!(
                    (mode.eval(z) - expect).abs() < 1e-10,
                    "p={p}, z={z}: {} vs {expect}",
                    mode.eval(z)
                );
            }
        }
    }

    #[test]
    fn static_tm_modes() {
        let cfg = tm_cfg(0.4);
        // Zero mode: constant 1/sqrt(L).
        let zero = build_mode(0, 0.0, 123.0, &cfg).unwrap();
        assert_eq!(zero.eval(0.3), 1.0);
        assert_eq!(zero.eval(0.9), 1.0);
        // p >= 1: global cosine.
        for p in 1..=3usize {
            let mode = build_mode(p, cfg.static_k(p), 0.0, &cfg).unwrap();
            for i in 0..40 {
                let z = i as f64 / 39.0;
                let expect = (2.0f64).sqrt() * (p as f64 * PI * z).cos();
                assert!((mode.eval(z) - expect).abs() < 1e-10, "p={p} z={z}");
            }
        }
    }

    #[test]
    fn unit_norm_and_orthogonality_with_sheet() {
        for (cfg, v) in [
            (te_cfg(0.5), 5000.0),
            (te_cfg(0.37), 812.0),
            (tm_cfg(0.5), 5000.0),
            (tm_cfg(0.62), 75.0),
        ] {
            let modes: Vec<_> = cfg
                .branches()
                .iter()
                .map(|&p| {
                    let k = if p == 0 { 0.0 } else { continue_to(p, v, &cfg) };
                    build_mode(p, k, v, &cfg).unwrap()
                })
                .collect();
            for (i, m) in modes.iter().enumerate() {
                let norm = m.overlap_quadrature(m, 1e-12);
                assert!((norm - 1.0).abs() < 1e-10, "p={} norm {norm}", m.branch);
                for other in modes.iter().skip(i + 1) {
                    let ov = m.overlap_quadrature(other, 1e-12);
                    assert!(ov.abs() < 1e-8, "p={} q={}: overlap {ov}", m.branch, other.branch);
                }
            }
        }
    }

    #[test]
    fn te_jump_condition() {
        let cfg = te_cfg(0.5);
        let v = 5000.0;
        let k = continue_to(1, v, &cfg);
        let mode = build_mode(1, k, v, &cfg).unwrap();
        let (psi_l, psi_r) = mode.sheet_values();
        assert!((psi_l - psi_r).abs() < 1e-10 * psi_l.abs().max(1.0), "continuity");
        let ratio = mode.derivative_jump() / psi_l;
        assert_relative_eq!(ratio, v, max_relative = 1e-6);
    }

    #[test]
    fn tm_jump_condition() {
        let cfg = tm_cfg(0.4);
        let v = 700.0;
        let kp2 = cfg.k_perp() * cfg.k_perp();
        let k = continue_to(1, v, &cfg);
        let mode = build_mode(1, k, v, &cfg).unwrap();
        let (dl, dr) = mode.sheet_derivatives();
        assert!((dl - dr).abs() < 1e-8 * dl.abs().max(1.0), "dz continuity");
        let expected = -(v / kp2) * dl;
        assert_relative_eq!(mode.value_jump(), expected, max_relative = 1e-8);
    }

    #[test]
    fn closed_form_overlap_matches_quadrature_randomized() {
        // Deterministic pseudo-random (k, v, eta) samples.
        let mut st = 0x243F6A8885A308D3u64;
        let mut rnd = || {
            st = st.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (st >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..40 {
            let eta = 0.2 + 0.6 * rnd();
            let v = 10.0f64.powf(4.0 * rnd() - 1.0);
            let pol_te = rnd() < 0.5;
            let cfg = if pol_te { te_cfg(eta) } else { tm_cfg(eta) };
            let p1 = 1 + (rnd() * 4.0) as usize;
            let p2 = 1 + (rnd() * 4.0) as usize;
            let ka = continue_to(p1, v, &cfg);
            let kb = continue_to(p2, v, &cfg);
            let ma = build_mode(p1, ka, v, &cfg).unwrap();
            let mb = build_mode(p2, kb, v, &cfg).unwrap();
            let closed = ma.overlap(&mb);
            let quad = ma.overlap_quadrature(&mb, 1e-13);
            assert!(
                (closed - quad).abs() <= 1e-9,
                "eta={eta} v={v} p=({p1},{p2}): {closed} vs {quad}"
            );
        }
    }

    /// Assemble all branch states at pulse phase `t` for coupling tests.
    fn branch_states(
        cfg: &CavityConfig,
        profile: &crate::pulse::PulseProfile,
        t: f64,
        reference: Option<&[LongitudinalMode]>,
    ) -> Vec<InstantaneousBranch> {
        let v = profile.eval(t);
        let v_dot = profile.eval_derivative(t);
        cfg.branches()
            .iter()
            .enumerate()
            .map(|(i, &p)| {
                let (k, kd) = if p == 0 {
                    (0.0, 0.0)
                } else {
                    let k = continue_to(p, v, cfg);
                    (k, dk_dt(k, v, v_dot, cfg).unwrap())
                };
                build_mode_with_rates(p, k, kd, v, v_dot, cfg, reference.map(|r| &r[i])).unwrap()
            })
            .collect()
    }

    fn test_profile() -> crate::pulse::PulseProfile {
        crate::pulse::PulseProfile::build(0.4 * 0.34 / 8.5, 0.2 * 0.34, 0.4 * 0.34 / 8.5, 0.34, 5000.0, 3)
            .unwrap()
    }

    #[test]
    fn coupling_vanishes_at_static_instant() {
        let profile = crate::pulse::PulseProfile::build(0.016, 0.068, 0.016, 0.34, 0.0, 2).unwrap();
        for cfg in [te_cfg(0.5), tm_cfg(0.5)] {
            let states = branch_states(&cfg, &profile, 0.1, None);
            let m = coupling_matrix(&states, &cfg);
            assert!(m.max_abs() <= 1e-10, "static coupling {}", m.max_abs());
        }
    }

    #[test]
    fn coupling_antisymmetry_and_zero_row() {
        let profile = test_profile();
        for cfg in [te_cfg(0.43), tm_cfg(0.43)] {
            // Mid-flank instant where both V and dV/dt are substantial.
            let states = branch_states(&cfg, &profile, 0.06, None);
            let m = coupling_matrix(&states, &cfg);
            for i in 0..m.n {
                assert_eq!(m.get(i, i), 0.0);
                for j in 0..m.n {
                    assert_eq!(m.get(i, j), -m.get(j, i), "({i},{j})");
                }
            }
            if cfg.polarization == Polarization::Tm {
                let zi = cfg.index_of_p(0);
                for j in 0..m.n {
                    assert_eq!(m.get(zi, j), 0.0);
                    assert_eq!(m.get(j, zi), 0.0);
                }
            }
        }
    }

    #[test]
    fn raw_coupling_directions_agree() {
        // The (m, n) and (n, m) integrals are computed independently before
        // antisymmetrization; the unsymmetrized quadrature path shows how
        // well they agree, including near the plateau where the branch
        // shifts are deepest.
        let profile = test_profile();
        for cfg in [te_cfg(0.5), tm_cfg(0.43)] {
            for t_frac in [0.18, 0.55] {
                let states = branch_states(&cfg, &profile, t_frac * profile.period(), None);
                let raw = coupling_matrix_quadrature(&states, &cfg, 1e-12);
                let scale = raw.max_abs();
                if scale == 0.0 {
                    continue;
                }
                for i in 0..raw.n {
                    for j in 0..raw.n {
                        let asym = (raw.get(i, j) + raw.get(j, i)).abs();
                        assert!(
                            asym <= 1e-7 * scale,
                            "({i},{j}): raw asym {asym:.2e} vs scale {scale:.2e}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn coupling_closed_form_matches_quadrature() {
        let profile = test_profile();
        for cfg in [te_cfg(0.5), tm_cfg(0.37)] {
            let states = branch_states(&cfg, &profile, 0.05, None);
            let closed = coupling_matrix(&states, &cfg);
            let quad = coupling_matrix_quadrature(&states, &cfg, 1e-12);
            let scale = closed.max_abs();
            for i in 0..closed.n {
                for j in 0..closed.n {
                    let diff = (closed.get(i, j) - quad.get(i, j)).abs();
                    assert!(diff <= 1e-8 * scale, "({i},{j}): {diff} vs scale {scale}");
                }
            }
        }
    }

    #[test]
    fn coupling_matches_finite_difference_of_modes() {
        // Oracle: M_mn ~ int (Psi_m(t+h) - Psi_m(t-h)) / 2h * Psi_n dz by
        // quadrature, order-2 in h.
        let profile = test_profile();
        let cfg = tm_cfg(0.5);
        let t0 = 0.055;
        let center = branch_states(&cfg, &profile, t0, None);
        let center_modes: Vec<_> = center.iter().map(|s| s.mode).collect();
        let m = coupling_matrix(&center, &cfg);
        // FD mode differences carry ~eps/h pointwise noise, so the
        // quadrature tolerance must sit above it.
        let h = 1e-5;
        let quad_tol = 1e-9;
        let plus = branch_states(&cfg, &profile, t0 + h, Some(&center_modes));
        let minus = branch_states(&cfg, &profile, t0 - h, Some(&center_modes));
        let scale = m.max_abs();
        for mi in 0..m.n {
            for ni in 0..m.n {
                if mi == ni {
                    continue;
                }
                let fd_mode_m = |z: f64| (plus[mi].mode.eval(z) - minus[mi].mode.eval(z)) / (2.0 * h);
                let fd = adaptive_simpson(|z| fd_mode_m(z) * center[ni].mode.eval(z), 0.0, cfg.d(), quad_tol)
                    + adaptive_simpson(|z| fd_mode_m(z) * center[ni].mode.eval(z), cfg.d(), 1.0, quad_tol);
                let diff = (m.get(mi, ni) - fd).abs();
                assert!(diff <= 1e-5 * scale.max(1e-12), "({mi},{ni}): {} vs {fd}", m.get(mi, ni));
            }
        }
    }

    #[test]
    fn field_reconstruction_boundary_behavior() {
        // TE: tangential E vanishes on the curved wall; E_z is identically 0.
        let cfg = te_cfg(0.5);
        let k = cfg.static_k(1);
        let mode = build_mode(1, k, 0.0, &cfg).unwrap();
        let omega = cfg.omega_from_k(k);
        let at_wall = reconstruct_fields(&cfg, &mode, omega, CylindricalPoint { rho: 0.25, phi: 0.3, z: 0.4 })
            .unwrap();
        assert!(at_wall.e[1].norm() < 1e-8, "E_phi at wall: {}", at_wall.e[1].norm());
        assert_eq!(at_wall.e[2], Complex64::new(0.0, 0.0));
        let inside = reconstruct_fields(&cfg, &mode, omega, CylindricalPoint { rho: 0.11, phi: 1.0, z: 0.73 })
            .unwrap();
        assert_eq!(inside.e[2], Complex64::new(0.0, 0.0));
        assert!(inside.e[1].norm() > 1e-6, "field should not vanish in the interior");
    }

    #[test]
    fn tm_axis_field() {
        // TM (0,1): E_z on axis = (x01/R)^2 * Phi(z) * r_01(0), B_z = 0.
        let cfg = tm_cfg(0.5);
        let k = cfg.static_k(1);
        let mode = build_mode(1, k, 0.0, &cfg).unwrap();
        let omega = cfg.omega_from_k(k);
        let z = 0.2;
        let fields = reconstruct_fields(&cfg, &mode, omega, CylindricalPoint { rho: 0.0, phi: 0.0, z })
            .unwrap();
        let r01_axis = cfg.transverse.eigenfunction(0.0, 0.0).unwrap().re;
        let expected = cfg.k_perp() * cfg.k_perp() * mode.eval(z) * r01_axis;
        assert_relative_eq!(fields.e[2].re, expected, max_relative = 1e-12);
        assert_eq!(fields.b[2], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn rejects_out_of_domain_point() {
        let cfg = tm_cfg(0.5);
        let mode = build_mode(1, cfg.static_k(1), 0.0, &cfg).unwrap();
        let res = reconstruct_fields(&cfg, &mode, 1.0, CylindricalPoint { rho: 0.3, phi: 0.0, z: 0.5 });
        assert!(matches!(res, Err(ModeError::OutOfDomain { .. })));
    }
}
