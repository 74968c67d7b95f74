//! Integration of the coupled amplitude equations and extraction of
//! Bogolyubov coefficients, photon numbers and the unitarity defect.
//!
//! The amplitude matrix `P[m][s]` (one column per in-mode `s`) obeys the
//! coupled second-order system
//!
//! ```text
//! Pdd_n = -omega_n^2(t) P_n - sum_m [ 2 M_mn Pd_m + Md_mn P_m + ... ]
//! ```
//!
//! Internally the stepping uses the algebraically equivalent first-order
//! form in the projected velocity `S_n = Pd_n + sum_m M_mn P_m`:
//!
//! ```text
//! Pd_n = S_n - sum_m M_mn P_m,        Sd_n = -omega_n^2 P_n + sum_q M_nq S_q
//! ```
//!
//! which eliminates `Md` from the right-hand side entirely. The pulse
//! profile is only C1 at the plateau tangencies, so `Md` jumps there;
//! stepping the second-order form across that jump costs O(dt) per crossing,
//! while the first-order form sees a continuous right-hand side and keeps
//! full integrator accuracy. It also conserves the Bogolyubov norm exactly
//! at the level of the continuous (truncated) dynamics.
//!
//! A fixed-step classical fourth-order scheme advances the state;
//! frequencies and couplings are re-solved from the eigenvalue relation at
//! every stage time, never interpolated.

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::modes::{
    build_mode_with_rates, coupling_matrix, CouplingMatrix, InstantaneousBranch, LongitudinalMode,
    ModeError,
};
use crate::pulse::PulseProfile;
use crate::spectrum::{dk_dt, solve_branch, CavityConfig, SpectrumError};

#[derive(Debug, Error, PartialEq)]
pub enum EvolveError {
    #[error("initial plasma strength V(t0) = {v:.3e} is not zero (tolerance {tol:.1e})")]
    NonzeroInitialV { v: f64, tol: f64 },
    #[error(
        "step rejected: phase advance omega_max * dt = {phase:.3} exceeds {limit} \
         (local error estimate above tolerance; raise steps_per_period)"
    )]
    StepTooLarge { phase: f64, limit: f64 },
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
    #[error(transparent)]
    Mode(#[from] ModeError),
}

/// Complex matrix, row-major, rows = mode positions, columns = in-modes.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat {
    pub n: usize,
    pub values: Vec<Complex64>,
}

impl CMat {
    pub fn zeros(n: usize) -> Self {
        Self { n, values: vec![Complex64::new(0.0, 0.0); n * n] }
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.values[row * self.n + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, v: Complex64) {
        self.values[row * self.n + col] = v;
    }

    fn row(&self, row: usize) -> &[Complex64] {
        &self.values[row * self.n..(row + 1) * self.n]
    }
}

/// Evolution state: complex amplitudes and their time derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionState {
    pub t: f64,
    pub p: CMat,
    pub p_dot: CMat,
}

/// Everything the right-hand side needs at one instant.
#[derive(Debug, Clone)]
pub struct System {
    pub t: f64,
    pub v: f64,
    pub omega: Vec<f64>,
    pub omega_sq: Vec<f64>,
    pub m: CouplingMatrix,
}

/// Re-solves spectrum and modes at requested times, carrying warm starts and
/// sign references between calls.
pub struct Assembler<'a> {
    cfg: &'a CavityConfig,
    profile: &'a PulseProfile,
    k_warm: Vec<f64>,
    sign_ref: Vec<LongitudinalMode>,
    cached: Option<System>,
}

impl<'a> Assembler<'a> {
    pub fn new(cfg: &'a CavityConfig, profile: &'a PulseProfile) -> Result<Self, EvolveError> {
        let branches = cfg.branches();
        let k_warm: Vec<f64> = branches.iter().map(|&p| cfg.static_k(p)).collect();
        let sign_ref = branches
            .iter()
            .map(|&p| Ok(build_mode_with_rates(p, cfg.static_k(p), 0.0, 0.0, 0.0, cfg, None)?.mode))
            .collect::<Result<Vec<_>, ModeError>>()?;
        Ok(Self { cfg, profile, k_warm, sign_ref, cached: None })
    }

    /// Branch states at time `t`, advancing the warm starts and sign
    /// references.
    fn branch_states(&mut self, t: f64) -> Result<Vec<InstantaneousBranch>, EvolveError> {
        let v = self.profile.eval(t);
        let v_dot = self.profile.eval_derivative(t);
        let branches = self.cfg.branches();
        let mut out = Vec::with_capacity(branches.len());
        for (i, &p) in branches.iter().enumerate() {
            let (k, kd) = if p == 0 {
                (0.0, 0.0)
            } else {
                let k = solve_branch(p, v, self.k_warm[i], self.cfg)?;
                (k, dk_dt(k, v, v_dot, self.cfg)?)
            };
            let align = self.sign_ref[i];
            let state = build_mode_with_rates(p, k, kd, v, v_dot, self.cfg, Some(&align))?;
            self.k_warm[i] = k;
            self.sign_ref[i] = state.mode;
            out.push(state);
        }
        Ok(out)
    }

    /// Assemble frequencies and the coupling matrix at time `t`.
    pub fn system_at(&mut self, t: f64) -> Result<System, EvolveError> {
        if let Some(sys) = &self.cached {
            if sys.t == t {
                return Ok(sys.clone());
            }
        }
        let center = self.branch_states(t)?;
        let m = coupling_matrix(&center, self.cfg);
        let omega: Vec<f64> = center.iter().map(|s| self.cfg.omega_from_k(s.mode.k)).collect();
        let omega_sq: Vec<f64> = omega.iter().map(|w| w * w).collect();
        let sys = System { t, v: self.profile.eval(t), omega, omega_sq, m };
        self.cached = Some(sys.clone());
        Ok(sys)
    }

    /// Time derivative of the coupling matrix by centered difference, for
    /// diagnostics. Not used by the stepping itself.
    pub fn coupling_rate(&mut self, t: f64, h: f64) -> Result<CouplingMatrix, EvolveError> {
        let plus = self.branch_states(t + h)?;
        let m_plus = coupling_matrix(&plus, self.cfg);
        let minus = self.branch_states(t - h)?;
        let m_minus = coupling_matrix(&minus, self.cfg);
        let n = m_plus.n;
        let mut out = CouplingMatrix::zeros(n);
        for i in 0..n * n {
            out.values[i] = (m_plus.values[i] - m_minus.values[i]) / (2.0 * h);
        }
        Ok(out)
    }
}

/// Initial in-region state: `P = diag(1/sqrt(2 omega_s))`,
/// `Pd = diag(-i sqrt(omega_s / 2))`, frequencies static.
pub fn initial_state(cfg: &CavityConfig, profile: &PulseProfile) -> Result<EvolutionState, EvolveError> {
    initial_state_at(cfg, profile, profile.t_start())
}

/// [`initial_state`] anchored at an arbitrary start time; `V(t0)` must be
/// zero (up to the pulse junction residual) for the static basis to apply.
pub fn initial_state_at(
    cfg: &CavityConfig,
    profile: &PulseProfile,
    t0: f64,
) -> Result<EvolutionState, EvolveError> {
    let v0 = profile.eval(t0);
    let tol = 1e-9 * profile.v_max().max(1.0);
    if v0.abs() > tol {
        return Err(EvolveError::NonzeroInitialV { v: v0, tol });
    }
    let branches = cfg.branches();
    let n = branches.len();
    let mut p = CMat::zeros(n);
    let mut p_dot = CMat::zeros(n);
    for (i, &pb) in branches.iter().enumerate() {
        let w0 = cfg.omega_static(pb);
        p.set(i, i, Complex64::new(1.0 / (2.0 * w0).sqrt(), 0.0));
        p_dot.set(i, i, Complex64::new(0.0, -(w0 / 2.0).sqrt()));
    }
    Ok(EvolutionState { t: t0, p, p_dot })
}

/// `out = S - M^T P`: the time derivative of `P`, rows in parallel.
fn d_p(sys: &System, p: &CMat, s_mat: &CMat, out: &mut CMat) {
    let n = p.n;
    out.values.par_chunks_mut(n).enumerate().for_each(|(row, out_row)| {
        out_row.copy_from_slice(s_mat.row(row));
        for m in 0..n {
            let c = sys.m.get(m, row);
            if c == 0.0 {
                continue;
            }
            for (o, pv) in out_row.iter_mut().zip(p.row(m)) {
                *o -= c * pv;
            }
        }
    });
}

/// `out = -diag(omega^2) P + M S`: the time derivative of `S`, rows in
/// parallel.
fn d_s(sys: &System, p: &CMat, s_mat: &CMat, out: &mut CMat) {
    let n = p.n;
    out.values.par_chunks_mut(n).enumerate().for_each(|(row, out_row)| {
        let w2 = sys.omega_sq[row];
        for (o, pv) in out_row.iter_mut().zip(p.row(row)) {
            *o = -w2 * pv;
        }
        for q in 0..n {
            let c = sys.m.get(row, q);
            if c == 0.0 {
                continue;
            }
            for (o, sv) in out_row.iter_mut().zip(s_mat.row(q)) {
                *o += c * sv;
            }
        }
    });
}

fn axpy(dst: &mut CMat, a: f64, x: &CMat) {
    dst.values.iter_mut().zip(&x.values).for_each(|(d, v)| *d += a * v);
}

/// `S = Pd + M^T P`: projected velocity from the plain time derivative.
fn to_projected(sys: &System, p: &CMat, p_dot: &CMat) -> CMat {
    let n = p.n;
    let mut s_mat = p_dot.clone();
    for m in 0..n {
        for l in 0..n {
            let c = sys.m.get(l, m);
            if c == 0.0 {
                continue;
            }
            for (d, pv) in s_mat.values[m * n..(m + 1) * n].iter_mut().zip(&p.values[l * n..l * n + n]) {
                *d += c * pv;
            }
        }
    }
    s_mat
}

/// `Pd = S - M^T P`.
fn from_projected(sys: &System, p: &CMat, s_mat: &CMat) -> CMat {
    let n = p.n;
    let mut p_dot = s_mat.clone();
    for m in 0..n {
        for l in 0..n {
            let c = sys.m.get(l, m);
            if c == 0.0 {
                continue;
            }
            for (d, pv) in p_dot.values[m * n..(m + 1) * n].iter_mut().zip(&p.values[l * n..l * n + n]) {
                *d -= c * pv;
            }
        }
    }
    p_dot
}

/// Advance the state by one classical fourth-order step of size `dt`.
///
/// `max_phase` bounds the per-step phase advance of the fastest mode; the
/// local truncation error scales as its fifth power, so exceeding the bound
/// rejects the step.
pub fn step(
    state: &EvolutionState,
    assembler: &mut Assembler,
    dt: f64,
    max_phase: f64,
) -> Result<EvolutionState, EvolveError> {
    let s1 = assembler.system_at(state.t)?;
    let w_max = s1.omega.iter().cloned().fold(0.0, f64::max);
    if w_max * dt > max_phase {
        return Err(EvolveError::StepTooLarge { phase: w_max * dt, limit: max_phase });
    }
    let s2 = assembler.system_at(state.t + 0.5 * dt)?;
    let s3 = assembler.system_at(state.t + dt)?;
    let n = state.p.n;

    let p0 = &state.p;
    let v0 = to_projected(&s1, p0, &state.p_dot);

    let mut k1p = CMat::zeros(n);
    let mut k1v = CMat::zeros(n);
    d_p(&s1, p0, &v0, &mut k1p);
    d_s(&s1, p0, &v0, &mut k1v);

    let mut p_tmp = p0.clone();
    let mut v_tmp = v0.clone();
    axpy(&mut p_tmp, 0.5 * dt, &k1p);
    axpy(&mut v_tmp, 0.5 * dt, &k1v);
    let mut k2p = CMat::zeros(n);
    let mut k2v = CMat::zeros(n);
    d_p(&s2, &p_tmp, &v_tmp, &mut k2p);
    d_s(&s2, &p_tmp, &v_tmp, &mut k2v);

    let mut p_tmp = p0.clone();
    let mut v_tmp = v0.clone();
    axpy(&mut p_tmp, 0.5 * dt, &k2p);
    axpy(&mut v_tmp, 0.5 * dt, &k2v);
    let mut k3p = CMat::zeros(n);
    let mut k3v = CMat::zeros(n);
    d_p(&s2, &p_tmp, &v_tmp, &mut k3p);
    d_s(&s2, &p_tmp, &v_tmp, &mut k3v);

    let mut p_tmp = p0.clone();
    let mut v_tmp = v0.clone();
    axpy(&mut p_tmp, dt, &k3p);
    axpy(&mut v_tmp, dt, &k3v);
    let mut k4p = CMat::zeros(n);
    let mut k4v = CMat::zeros(n);
    d_p(&s3, &p_tmp, &v_tmp, &mut k4p);
    d_s(&s3, &p_tmp, &v_tmp, &mut k4v);

    let sixth = dt / 6.0;
    let mut p = p0.clone();
    let mut s_new = v0;
    axpy(&mut p, sixth, &k1p);
    axpy(&mut p, 2.0 * sixth, &k2p);
    axpy(&mut p, 2.0 * sixth, &k3p);
    axpy(&mut p, sixth, &k4p);
    axpy(&mut s_new, sixth, &k1v);
    axpy(&mut s_new, 2.0 * sixth, &k2v);
    axpy(&mut s_new, 2.0 * sixth, &k3v);
    axpy(&mut s_new, sixth, &k4v);

    let p_dot = from_projected(&s3, &p, &s_new);
    Ok(EvolutionState { t: state.t + dt, p, p_dot })
}

/// Bogolyubov coefficients, per-mode photon numbers and the per-row
/// unitarity defect.
#[derive(Debug, Clone, PartialEq)]
pub struct BogolyubovResult {
    pub beta: CMat,
    pub alpha: CMat,
    /// Photon number per mode row: `N_m = sum_n |beta_mn|^2`.
    pub n: Vec<f64>,
    /// `| sum_n (|alpha_mn|^2 - |beta_mn|^2) - 1 |` per mode row.
    pub unitarity_defect: Vec<f64>,
}

/// Project the state onto the instantaneous basis:
/// `beta_mn = sqrt(omega_m/2) P_mn - i / sqrt(2 omega_m)
///            [Pd_mn + sum_l M_lm P_ln]`,
/// with `alpha_mn` its `+i` counterpart.
pub fn bogolyubov(state: &EvolutionState, sys: &System) -> BogolyubovResult {
    let n = state.p.n;
    // mt_p[m][s] = sum_l M_lm P_ls
    let mut mt_p = CMat::zeros(n);
    for m in 0..n {
        for l in 0..n {
            let c = sys.m.get(l, m);
            if c == 0.0 {
                continue;
            }
            let p_row = state.p.row(l);
            let dst = &mut mt_p.values[m * n..(m + 1) * n];
            for s in 0..n {
                dst[s] += c * p_row[s];
            }
        }
    }
    let mut beta = CMat::zeros(n);
    let mut alpha = CMat::zeros(n);
    let mut photon = vec![0.0; n];
    let mut defect = vec![0.0; n];
    for m in 0..n {
        let w = sys.omega[m];
        let amp = (w / 2.0).sqrt();
        let inv = 1.0 / (2.0 * w).sqrt();
        let mut n_sum = 0.0;
        let mut u_sum = 0.0;
        for s in 0..n {
            let bracket = state.p_dot.get(m, s) + mt_p.get(m, s);
            let re_part = amp * state.p.get(m, s);
            let im_part = Complex64::i() * inv * bracket;
            let b = re_part - im_part;
            let a = re_part + im_part;
            beta.set(m, s, b);
            alpha.set(m, s, a);
            n_sum += b.norm_sqr();
            u_sum += a.norm_sqr() - b.norm_sqr();
        }
        photon[m] = n_sum;
        defect[m] = (u_sum - 1.0).abs();
    }
    BogolyubovResult { beta, alpha, n: photon, unitarity_defect: defect }
}

/// Detector-facing photon rate from a per-train yield and the train
/// repetition interval. The simulation itself only reports per-train
/// numbers; what a detector sees depends on how often the train repeats,
/// which is an experimental knob supplied by the caller.
pub fn photon_rate_per_second(n_per_train: f64, repetition_interval_s: f64) -> f64 {
    assert!(repetition_interval_s > 0.0);
    n_per_train / repetition_interval_s
}

/// Integrator and output cadence controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    pub steps_per_period: usize,
    pub samples_per_period: usize,
    /// Final time (natural units); defaults to the end of the pulse train.
    pub t_final: Option<f64>,
    /// Phase-advance bound used for step rejection.
    pub max_phase_step: f64,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { steps_per_period: 4096, samples_per_period: 16, t_final: None, max_phase_step: 0.5 }
    }
}

/// One output sample of a run.
#[derive(Debug, Clone)]
pub struct RunSample {
    pub t: f64,
    /// True at pulse junctions and after the train, where `V` is at its
    /// inter-pulse floor and photon numbers are sharpest to interpret.
    pub field_free: bool,
    pub result: BogolyubovResult,
}

/// Evolve from the static in-region through the pulse train, sampling the
/// Bogolyubov data at the configured cadence. Deterministic for a fixed
/// config regardless of thread count.
pub fn run(
    cfg: &CavityConfig,
    profile: &PulseProfile,
    opts: &RunOptions,
) -> Result<Vec<RunSample>, EvolveError> {
    assert!(
        opts.steps_per_period % opts.samples_per_period.max(1) == 0,
        "samples_per_period must divide steps_per_period"
    );
    let mut assembler = Assembler::new(cfg, profile)?;
    let mut state = initial_state(cfg, profile)?;
    let dt = profile.period() / opts.steps_per_period as f64;
    let t_final = opts.t_final.unwrap_or_else(|| profile.t_end());
    let n_steps = ((t_final - profile.t_start()) / dt).round() as usize;
    let sample_every = opts.steps_per_period / opts.samples_per_period.max(1);
    let junction_every = opts.steps_per_period;

    let mut samples = Vec::new();
    let sys0 = assembler.system_at(state.t)?;
    samples.push(RunSample { t: state.t, field_free: true, result: bogolyubov(&state, &sys0) });
    for i in 1..=n_steps {
        state = step(&state, &mut assembler, dt, opts.max_phase_step)?;
        if i % sample_every == 0 || i == n_steps {
            let sys = assembler.system_at(state.t)?;
            let in_train = state.t <= profile.t_end() + 0.25 * dt;
            let field_free = !in_train || i % junction_every == 0;
            samples.push(RunSample { t: state.t, field_free, result: bogolyubov(&state, &sys) });
        }
    }
    Ok(samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transverse::Polarization;
    use approx::assert_relative_eq;

    fn tm_cfg(eta: f64, ell: usize) -> CavityConfig {
        CavityConfig::new(1.0, 0.25, eta, Polarization::Tm, 0, 1, ell).unwrap()
    }

    /// Pulse with the default 40/20/40 split at 8.5-sigma tails.
    fn pulse(period: f64, v_max: f64, n_pulses: u32) -> PulseProfile {
        PulseProfile::build(0.4 * period / 8.5, 0.2 * period, 0.4 * period / 8.5, period, v_max, n_pulses)
            .unwrap()
    }

    #[test]
    fn initial_state_matches_phase_convention() {
        let cfg = tm_cfg(0.5, 4);
        let profile = pulse(0.34, 100.0, 2);
        let st = initial_state(&cfg, &profile).unwrap();
        for (i, &p) in cfg.branches().iter().enumerate() {
            let w0 = cfg.omega_static(p);
            assert_relative_eq!(st.p.get(i, i).norm_sqr(), 1.0 / (2.0 * w0), max_relative = 1e-14);
            let ratio = st.p_dot.get(i, i) / st.p.get(i, i);
            assert_relative_eq!(ratio.im, -w0, max_relative = 1e-14);
            assert_relative_eq!(ratio.re, 0.0, epsilon = 1e-14);
            for j in 0..st.p.n {
                if j != i {
                    assert_eq!(st.p.get(i, j), Complex64::new(0.0, 0.0));
                }
            }
        }
    }

    #[test]
    fn rejects_nonzero_initial_v() {
        let cfg = tm_cfg(0.5, 2);
        let profile = pulse(0.34, 50.0, 2);
        // Anchoring the static basis on the plateau violates V(t0) = 0.
        assert!(matches!(
            initial_state_at(&cfg, &profile, profile.plateau_center()),
            Err(EvolveError::NonzeroInitialV { .. })
        ));
        assert!(initial_state(&cfg, &profile).is_ok());
    }

    #[test]
    fn free_oscillator_phase_accuracy() {
        // V = 0: each diagonal amplitude is exp(-i w t) / sqrt(2 w).
        let cfg = tm_cfg(0.5, 2);
        let w1 = cfg.omega_static(1);
        let mode_period = std::f64::consts::TAU / w1;
        let profile = pulse(mode_period, 0.0, 10);
        let opts = RunOptions { steps_per_period: 4096, samples_per_period: 1, ..Default::default() };
        let samples = run(&cfg, &profile, &opts).unwrap();
        let last = samples.last().unwrap();
        let t = profile.t_end();
        let i1 = cfg.index_of_p(1);
        // Recover P from beta/alpha: P = (alpha + beta) / sqrt(2 w).
        let p11 = (last.result.alpha.get(i1, i1) + last.result.beta.get(i1, i1)) / (2.0 * w1).sqrt();
        let expect = Complex64::from_polar(1.0 / (2.0 * w1).sqrt(), -w1 * t);
        assert!((p11 - expect).norm() < 1e-8, "free phase drift: {:?} vs {:?}", p11, expect);
        // No photons without drive.
        for s in &samples {
            for &nm in &s.result.n {
                assert!(nm <= 1e-10, "photons from nothing: {nm}");
            }
            for &d in &s.result.unitarity_defect {
                assert!(d <= 1e-10, "defect without drive: {d}");
            }
        }
    }

    #[test]
    fn beta_zero_at_start() {
        let cfg = tm_cfg(0.5, 4);
        let profile = pulse(0.34, 5000.0, 1);
        let mut asm = Assembler::new(&cfg, &profile).unwrap();
        let st = initial_state(&cfg, &profile).unwrap();
        let sys = asm.system_at(st.t).unwrap();
        let res = bogolyubov(&st, &sys);
        for m in 0..st.p.n {
            for s in 0..st.p.n {
                assert!(res.beta.get(m, s).norm() < 1e-12);
            }
            assert!(res.n[m] < 1e-12);
            assert!(res.unitarity_defect[m] < 1e-12);
            // alpha is diagonal with unit modulus before irradiation.
            assert_relative_eq!(res.alpha.get(m, m).norm(), 1.0, max_relative = 1e-12);
        }
    }

    #[test]
    fn zero_mode_stays_on_free_evolution() {
        // TM p=0: constant frequency, vanishing coupling row/column; its
        // off-diagonal amplitudes stay exactly zero and the diagonal matches
        // a standalone free oscillator to the bit.
        let cfg = tm_cfg(0.5, 3);
        let profile = pulse(0.34, 5000.0, 2);
        let opts = RunOptions { steps_per_period: 512, samples_per_period: 1, ..Default::default() };
        let samples = run(&cfg, &profile, &opts).unwrap();

        // Standalone RK4 on the same diagonal column.
        let w0 = cfg.k_perp();
        let dt = profile.period() / 512.0;
        let mut y = Complex64::new(1.0 / (2.0 * w0).sqrt(), 0.0);
        let mut yd = Complex64::new(0.0, -(w0 / 2.0).sqrt());
        let n_steps = 2 * 512;
        for _ in 0..n_steps {
            let acc = |p: Complex64| -w0 * w0 * p;
            let k1p = yd;
            let k1v = acc(y);
            let k2p = yd + 0.5 * dt * k1v;
            let k2v = acc(y + 0.5 * dt * k1p);
            let k3p = yd + 0.5 * dt * k2v;
            let k3v = acc(y + 0.5 * dt * k2p);
            let k4p = yd + dt * k3v;
            let k4v = acc(y + dt * k3p);
            y += dt / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
            yd += dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        }
        let last = samples.last().unwrap();
        let i0 = cfg.index_of_p(0);
        let p00 = (last.result.alpha.get(i0, i0) + last.result.beta.get(i0, i0)) / (2.0 * w0).sqrt();
        assert!((p00 - y).norm() <= 1e-13 * y.norm(), "zero mode left free evolution");
        for s in &samples {
            assert!(s.result.n[i0] <= 1e-12, "zero-mode photons: {}", s.result.n[i0]);
        }
    }

    #[test]
    fn resonant_single_mode_growth_matches_independent_integrator() {
        // ell_max = 1 keeps one dynamical branch (plus the inert zero mode):
        // a pure parametric oscillator. Check monotone pulse-over-pulse
        // growth and agreement with an independent high-accuracy integrator.
        let cfg = tm_cfg(0.5, 1);
        let w1 = cfg.omega_static(1);
        let period = std::f64::consts::PI / w1;
        let profile = pulse(period, 2000.0, 6);
        let opts = RunOptions { steps_per_period: 2048, samples_per_period: 1, ..Default::default() };
        let samples = run(&cfg, &profile, &opts).unwrap();
        let i1 = cfg.index_of_p(1);
        let n_at_junctions: Vec<f64> =
            samples.iter().filter(|s| s.field_free).map(|s| s.result.n[i1]).collect();
        for w in n_at_junctions.windows(2).skip(1) {
            assert!(w[1] > w[0], "parametric growth must be monotone: {w:?}");
        }

        // Independent integrator: velocity-Verlet-style RK4 replacement at
        // 8x resolution on the scalar equation, own spectrum solves.
        let dt = period / (8.0 * 2048.0);
        let mut t = 0.0;
        let mut y = Complex64::new(1.0 / (2.0 * w1).sqrt(), 0.0);
        let mut yd = Complex64::new(0.0, -(w1 / 2.0).sqrt());
        let mut k_warm = cfg.static_k(1);
        let omega_sq_at = |t: f64, k_warm: &mut f64| {
            let v = profile.eval(t);
            let k = if v == 0.0 { cfg.static_k(1) } else { solve_branch(1, v, *k_warm, &cfg).unwrap() };
            *k_warm = k;
            let w = cfg.omega_from_k(k);
            w * w
        };
        let steps = (profile.t_end() / dt).round() as usize;
        for i in 0..steps {
            let t0 = i as f64 * dt;
            let w2_0 = omega_sq_at(t0, &mut k_warm);
            let w2_h = omega_sq_at(t0 + 0.5 * dt, &mut k_warm);
            let w2_1 = omega_sq_at(t0 + dt, &mut k_warm);
            let k1p = yd;
            let k1v = -w2_0 * y;
            let k2p = yd + 0.5 * dt * k1v;
            let k2v = -w2_h * (y + 0.5 * dt * k1p);
            let k3p = yd + 0.5 * dt * k2v;
            let k3v = -w2_h * (y + 0.5 * dt * k2p);
            let k4p = yd + dt * k3v;
            let k4v = -w2_1 * (y + dt * k3p);
            y += dt / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
            yd += dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
            t = t0 + dt;
        }
        let _ = t;
        let last = samples.last().unwrap();
        let p11 = (last.result.alpha.get(i1, i1) + last.result.beta.get(i1, i1)) / (2.0 * w1).sqrt();
        assert!(
            (p11 - y).norm() <= 1e-5 * y.norm().max(1.0),
            "single-mode run disagrees with independent integrator: {p11:?} vs {y:?}"
        );
    }

    #[test]
    fn step_halving_converges() {
        let cfg = tm_cfg(0.5, 4);
        let w1 = cfg.omega_static(1);
        let period = std::f64::consts::PI / w1;
        let profile = pulse(period, 3000.0, 3);
        let coarse = run(
            &cfg,
            &profile,
            &RunOptions { steps_per_period: 1024, samples_per_period: 1, ..Default::default() },
        )
        .unwrap();
        let fine = run(
            &cfg,
            &profile,
            &RunOptions { steps_per_period: 2048, samples_per_period: 1, ..Default::default() },
        )
        .unwrap();
        let nc = &coarse.last().unwrap().result.n;
        let nf = &fine.last().unwrap().result.n;
        let i1 = cfg.index_of_p(1);
        assert!(nf[i1] > 1e-6, "resonant run should create photons, got {}", nf[i1]);
        for (c, f) in nc.iter().zip(nf) {
            let denom = f.max(1e-9);
            assert!((c - f).abs() / denom < 1e-4, "step halving moved N: {c} vs {f}");
        }
    }

    #[test]
    fn step_rejection_on_coarse_grid() {
        let cfg = tm_cfg(0.5, 4);
        let profile = pulse(0.34, 100.0, 1);
        let mut asm = Assembler::new(&cfg, &profile).unwrap();
        let st = initial_state(&cfg, &profile).unwrap();
        let err = step(&st, &mut asm, 0.2, 0.5).unwrap_err();
        assert!(matches!(err, EvolveError::StepTooLarge { .. }));
    }

    #[test]
    fn unitarity_defect_small_for_converged_run() {
        // Short resonant run at low power: the defect tightens to the 1e-6
        // scale once the truncation is generous enough.
        let cfg = tm_cfg(0.5, 12);
        let w1 = cfg.omega_static(1);
        let period = std::f64::consts::PI / w1;
        let profile = pulse(period, 1.0, 3);
        let samples = run(
            &cfg,
            &profile,
            &RunOptions { steps_per_period: 4096, samples_per_period: 4, ..Default::default() },
        )
        .unwrap();
        for s in &samples {
            for &d in &s.result.unitarity_defect {
                assert!(d <= 1e-6, "defect {d} at t={}", s.t);
            }
        }
    }
}
