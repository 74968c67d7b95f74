//! Time-dependent longitudinal spectrum of the cavity with a plasma sheet at
//! `z = d`.
//!
//! The longitudinal wavenumbers solve a transcendental relation whose
//! quotient form is singular exactly where a mode has a node at the sheet,
//! so the solver works with the cleared-denominator residual
//!
//! - TE: `F(k) = k sin(k L) + V sin(k (L-d)) sin(k d)`
//! - TM: `F(k) = k_perp^2 sin(k L) - V k sin(k (L-d)) sin(k d)`
//!
//! whose zeros include the factorized solutions (node at the sheet). Each
//! branch `p` is confined to one spacing of the static ladder — TE branches
//! shift up from `p pi / L`, TM branches down — and is continued in time by
//! re-solving near the previous value.

use thiserror::Error;

use crate::pulse::PulseProfile;
use crate::transverse::{Polarization, TransverseMode};

#[derive(Debug, Error, PartialEq)]
pub enum SpectrumError {
    #[error("invalid cavity config: {0}")]
    InvalidConfig(String),
    #[error("no root in bracket for branch p={p} at V={v:.6e} (sampling step too coarse?)")]
    NoRootInBracket { p: usize, v: f64 },
    #[error("root solve for branch p={p} did not converge")]
    ConvergenceFailure { p: usize },
    #[error("stationary denominator dF/dk ~ 0 at k={k:.6e} (degenerate root)")]
    StationaryDenominator { k: f64 },
    #[error("branch continuity violated for p={p} at t={t:.6e}: |dk| = {dk:.3e}")]
    BranchDiscontinuity { p: usize, t: f64, dk: f64 },
}

/// Geometry, polarization and truncation of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct CavityConfig {
    /// Cavity length (1.0 in natural units).
    pub l_z: f64,
    /// Cavity radius in units of `l_z`.
    pub r: f64,
    /// Sheet position `d / L_z`.
    pub eta: f64,
    pub polarization: Polarization,
    pub transverse: TransverseMode,
    /// Longitudinal truncation: branches run to `p = ell_max`.
    pub ell_max: usize,
}

impl CavityConfig {
    pub fn new(
        l_z: f64,
        r: f64,
        eta: f64,
        polarization: Polarization,
        n: u32,
        m: u32,
        ell_max: usize,
    ) -> Result<Self, SpectrumError> {
        if !(l_z > 0.0) || !(r > 0.0) {
            return Err(SpectrumError::InvalidConfig(format!(
                "dimensions must be positive: l_z={l_z}, r={r}"
            )));
        }
        if !(eta > 0.0 && eta < 1.0) {
            return Err(SpectrumError::InvalidConfig(format!("eta must lie in (0,1), got {eta}")));
        }
        if ell_max < 1 {
            return Err(SpectrumError::InvalidConfig("ell_max must be >= 1".into()));
        }
        if m < 1 {
            return Err(SpectrumError::InvalidConfig("radial index m must be >= 1".into()));
        }
        let transverse = TransverseMode::new(polarization, n, m, r);
        Ok(Self { l_z, r, eta, polarization, transverse, ell_max })
    }

    /// Sheet position along the axis.
    pub fn d(&self) -> f64 {
        self.eta * self.l_z
    }

    pub fn k_perp(&self) -> f64 {
        self.transverse.k_perp
    }

    /// Longitudinal branch indices: TM includes the zero mode `p = 0`.
    pub fn branches(&self) -> Vec<usize> {
        match self.polarization {
            Polarization::Te => (1..=self.ell_max).collect(),
            Polarization::Tm => (0..=self.ell_max).collect(),
        }
    }

    pub fn n_branches(&self) -> usize {
        match self.polarization {
            Polarization::Te => self.ell_max,
            Polarization::Tm => self.ell_max + 1,
        }
    }

    /// Branch index `p` for a matrix row/column position.
    pub fn p_of_index(&self, idx: usize) -> usize {
        match self.polarization {
            Polarization::Te => idx + 1,
            Polarization::Tm => idx,
        }
    }

    /// Matrix position of branch `p`.
    pub fn index_of_p(&self, p: usize) -> usize {
        match self.polarization {
            Polarization::Te => p - 1,
            Polarization::Tm => p,
        }
    }

    /// Static (field-free) wavenumber of branch `p`.
    pub fn static_k(&self, p: usize) -> f64 {
        p as f64 * std::f64::consts::PI / self.l_z
    }

    /// Instantaneous angular frequency from a longitudinal wavenumber.
    pub fn omega_from_k(&self, k: f64) -> f64 {
        let kp = self.k_perp();
        (kp * kp + k * k).sqrt()
    }

    pub fn omega_static(&self, p: usize) -> f64 {
        self.omega_from_k(self.static_k(p))
    }
}

/// Cleared-denominator residual of the eigenvalue relation.
pub fn residual(k: f64, v: f64, cfg: &CavityConfig) -> f64 {
    let l = cfg.l_z;
    let d = cfg.d();
    let s_d = (k * d).sin();
    let s_ld = (k * (l - d)).sin();
    match cfg.polarization {
        Polarization::Te => k * (k * l).sin() + v * s_ld * s_d,
        Polarization::Tm => {
            let kp2 = cfg.k_perp() * cfg.k_perp();
            kp2 * (k * l).sin() - v * k * s_ld * s_d
        }
    }
}

/// Residual together with its analytic partials in `k` and `V`.
pub fn residual_partials(k: f64, v: f64, cfg: &CavityConfig) -> (f64, f64, f64) {
    let l = cfg.l_z;
    let d = cfg.d();
    let (s_d, c_d) = (k * d).sin_cos();
    let (s_ld, c_ld) = (k * (l - d)).sin_cos();
    let (s_l, c_l) = (k * l).sin_cos();
    match cfg.polarization {
        Polarization::Te => {
            let f = k * s_l + v * s_ld * s_d;
            let f_k = s_l + k * l * c_l + v * (d * c_d * s_ld + (l - d) * c_ld * s_d);
            let f_v = s_ld * s_d;
            (f, f_k, f_v)
        }
        Polarization::Tm => {
            let kp2 = cfg.k_perp() * cfg.k_perp();
            let f = kp2 * s_l - v * k * s_ld * s_d;
            let f_k = kp2 * l * c_l
                - v * (s_ld * s_d + k * d * c_d * s_ld + k * (l - d) * c_ld * s_d);
            let f_v = -k * s_ld * s_d;
            (f, f_k, f_v)
        }
    }
}

/// Confinement interval of branch `p`: the root never leaves one spacing of
/// the static ladder (TE up-shifts, TM down-shifts).
pub fn confinement(p: usize, cfg: &CavityConfig) -> (f64, f64) {
    let pi_l = std::f64::consts::PI / cfg.l_z;
    match cfg.polarization {
        Polarization::Te => (p as f64 * pi_l, (p as f64 + 1.0) * pi_l),
        Polarization::Tm => ((p as f64 - 1.0) * pi_l, p as f64 * pi_l),
    }
}

/// Residual magnitude that counts as "on the root" for endpoint detection,
/// relative to the natural size of the residual's terms.
fn residual_scale(k: f64, v: f64, cfg: &CavityConfig) -> f64 {
    match cfg.polarization {
        Polarization::Te => k.abs() + v.abs(),
        Polarization::Tm => {
            let kp2 = cfg.k_perp() * cfg.k_perp();
            kp2 + v.abs() * k.abs().max(1.0)
        }
    }
}

/// Solve for the branch-`p` root nearest `k_prev` inside the confinement
/// interval, to 1e-12 relative accuracy.
pub fn solve_branch(p: usize, v: f64, k_prev: f64, cfg: &CavityConfig) -> Result<f64, SpectrumError> {
    assert!(p >= 1, "branch p=0 is the TM zero mode with k identically 0");
    let k0 = cfg.static_k(p);
    if v == 0.0 {
        return Ok(k0);
    }
    // When the first-order shift is below the root tolerance the static
    // ladder point already is the answer; the residual there is pure trig
    // roundoff and bracketing on it would be noise-driven.
    let shift_bound = match cfg.polarization {
        Polarization::Te => v.abs() / (p as f64 * std::f64::consts::PI),
        Polarization::Tm => v.abs() * k0 / (cfg.k_perp().powi(2) * cfg.l_z),
    };
    if shift_bound <= 1e-13 * k0 {
        return Ok(k0);
    }
    let (lo, hi) = confinement(p, cfg);
    // Factorized roots sit exactly on an interval endpoint (mode with a node
    // at the sheet): TE at the lower wall, TM at the upper wall. The noise
    // floor of the cleared residual at the endpoint is trig roundoff
    // amplified by the residual's own scale.
    let endpoint = match cfg.polarization {
        Polarization::Te => lo,
        Polarization::Tm => hi,
    };
    let f_end = residual(endpoint, v, cfg);
    let noise = 64.0
        * f64::EPSILON
        * (p as f64 + 1.0)
        * std::f64::consts::PI
        * residual_scale(endpoint, v, cfg);
    if f_end.abs() <= noise {
        return Ok(endpoint);
    }
    // Bracket: the residual has opposite signs at consecutive ladder points.
    // The far (non-anchor) end coincides with the neighboring branch's
    // ladder point, where the residual can be mathematically zero (its
    // factorized root); inset it so roundoff cannot flip the sign there.
    // Roots never approach the far end for physical strengths.
    let inset = 1e-9 * std::f64::consts::PI / cfg.l_z;
    let (mut a, mut b) = match cfg.polarization {
        Polarization::Te => (lo, hi - inset),
        Polarization::Tm => (lo + inset, hi),
    };
    let mut fa = residual(a, v, cfg);
    let fb = residual(b, v, cfg);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa * fb > 0.0 {
        return Err(SpectrumError::NoRootInBracket { p, v });
    }
    // Newton accelerated, bisection safeguarded.
    let mut x = k_prev.clamp(a, b);
    let tol = 1e-13 * cfg.static_k(p);
    for _ in 0..300 {
        let (f, f_k, _) = residual_partials(x, v, cfg);
        if f == 0.0 {
            return Ok(x);
        }
        if f * fa < 0.0 {
            b = x;
        } else {
            a = x;
            fa = f;
        }
        if (b - a) <= tol {
            return Ok(0.5 * (a + b));
        }
        let newton = x - f / f_k;
        x = if newton.is_finite() && newton > a && newton < b {
            newton
        } else {
            0.5 * (a + b)
        };
    }
    Err(SpectrumError::ConvergenceFailure { p })
}

/// Implicit time derivative of a root: `dk/dt = -(dF/dV) Vdot / (dF/dk)`.
pub fn dk_dt(k: f64, v: f64, dv_dt: f64, cfg: &CavityConfig) -> Result<f64, SpectrumError> {
    if dv_dt == 0.0 {
        return Ok(0.0);
    }
    let (_, f_k, f_v) = residual_partials(k, v, cfg);
    let scale = match cfg.polarization {
        Polarization::Te => 1.0 + k.abs() * cfg.l_z + v.abs() * cfg.l_z,
        Polarization::Tm => cfg.k_perp().powi(2) * cfg.l_z + v.abs() * (1.0 + k.abs() * cfg.l_z),
    };
    if f_k.abs() <= 1e-12 * scale {
        return Err(SpectrumError::StationaryDenominator { k });
    }
    Ok(-f_v / f_k * dv_dt)
}

/// Warm-start continuation state: one wavenumber per branch, advanced by
/// re-solving at each requested time.
#[derive(Debug, Clone)]
pub struct BranchContinuation {
    k: Vec<f64>,
}

impl BranchContinuation {
    pub fn new(cfg: &CavityConfig) -> Self {
        Self { k: cfg.branches().iter().map(|&p| cfg.static_k(p)).collect() }
    }

    /// Solve every branch at plasma strength `v`, updating the warm starts.
    /// Branch `p = 0` (TM) keeps `k = 0` exactly.
    pub fn solve_all(&mut self, v: f64, cfg: &CavityConfig) -> Result<&[f64], SpectrumError> {
        for (i, &p) in cfg.branches().iter().enumerate() {
            self.k[i] = if p == 0 { 0.0 } else { solve_branch(p, v, self.k[i], cfg)? };
        }
        Ok(&self.k)
    }

    /// Solve without mutating the stored warm starts (for probe evaluations
    /// at nearby times).
    pub fn solve_all_probe(&self, v: f64, cfg: &CavityConfig) -> Result<Vec<f64>, SpectrumError> {
        let mut out = self.k.clone();
        for (i, &p) in cfg.branches().iter().enumerate() {
            out[i] = if p == 0 { 0.0 } else { solve_branch(p, v, self.k[i], cfg)? };
        }
        Ok(out)
    }
}

/// Sampled spectrum over a time window.
#[derive(Debug, Clone)]
pub struct SpectrumTrajectory {
    pub times: Vec<f64>,
    /// Branch indices, aligned with the outer dimension of the arrays.
    pub branch_p: Vec<usize>,
    /// `k[branch][time]`.
    pub k: Vec<Vec<f64>>,
    /// `dk_dt[branch][time]`.
    pub dk_dt: Vec<Vec<f64>>,
    /// `omega[branch][time]`.
    pub omega: Vec<Vec<f64>>,
}

/// Sample every branch over the pulse train at `samples_per_period` points
/// per driving period, re-solving (never interpolating) at each sample.
pub fn trajectory(
    profile: &PulseProfile,
    cfg: &CavityConfig,
    samples_per_period: usize,
) -> Result<SpectrumTrajectory, SpectrumError> {
    let dt = profile.period() / samples_per_period as f64;
    let n_samples = samples_per_period * profile.n_pulses() as usize + 1;
    let branches = cfg.branches();
    let mut cont = BranchContinuation::new(cfg);
    let mut times = Vec::with_capacity(n_samples);
    let mut k = vec![Vec::with_capacity(n_samples); branches.len()];
    let mut kd = vec![Vec::with_capacity(n_samples); branches.len()];
    let mut om = vec![Vec::with_capacity(n_samples); branches.len()];
    let continuity_limit = 0.5 * std::f64::consts::PI / cfg.l_z;
    for i in 0..n_samples {
        let t = profile.t_start() + i as f64 * dt;
        let v = profile.eval(t);
        let v_dot = profile.eval_derivative(t);
        for (bi, &p) in branches.iter().enumerate() {
            let prev = cont.k[bi];
            let ki = if p == 0 { 0.0 } else { solve_branch(p, v, prev, cfg)? };
            if i > 0 && (ki - prev).abs() >= continuity_limit {
                return Err(SpectrumError::BranchDiscontinuity { p, t, dk: (ki - prev).abs() });
            }
            cont.k[bi] = ki;
            let kdot = if p == 0 { 0.0 } else { dk_dt(ki, v, v_dot, cfg)? };
            k[bi].push(ki);
            kd[bi].push(kdot);
            om[bi].push(cfg.omega_from_k(ki));
        }
        times.push(t);
    }
    Ok(SpectrumTrajectory { times, branch_p: branches, k, dk_dt: kd, omega: om })
}
