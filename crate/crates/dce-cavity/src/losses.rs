//! Drude-model polarization-loss estimator for the dominant mode.
//!
//! A diagnostic side-channel: the reported losses are not fed back into the
//! evolution, so photon numbers from [`crate::evolve`] are upper bounds.
//! This module alone works in SI units (coulombs, kilograms, seconds); the
//! conversion from the natural-unit core happens at the call boundary.
//!
//! Only TM modes suffer polarization losses here — the electric Hertz
//! vector couples to in-plane carrier motion, the magnetic one does not —
//! so TE input yields an explicitly zero loss channel.

use num_complex::Complex64;

use crate::transverse::Polarization;

/// Elementary charge, C.
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
/// Electron mass, kg.
pub const ELECTRON_MASS: f64 = 9.109_383_701_5e-31;

/// Drude free-carrier parameters of the irradiated sheet, SI units.
///
/// The effective volume density follows the `n_v = n_s * delta_d`
/// convention, with `n_s` the areal carrier density and `delta_d` the laser
/// penetration depth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DrudeParams {
    /// Areal carrier density, 1/m^2.
    pub n_s: f64,
    /// Penetration depth, m.
    pub delta_d: f64,
    /// Relaxation (recombination) time, s.
    pub tau: f64,
    /// Effective carrier mass, kg.
    pub m_eff: f64,
    /// Carrier charge, C.
    pub charge: f64,
}

impl DrudeParams {
    pub fn validate(&self) -> Result<(), String> {
        for (name, v) in [
            ("n_s", self.n_s),
            ("delta_d", self.delta_d),
            ("tau", self.tau),
            ("m_eff", self.m_eff),
            ("charge", self.charge),
        ] {
            if !(v > 0.0) {
                return Err(format!("Drude parameter {name} must be positive, got {v}"));
            }
        }
        Ok(())
    }

    fn n_v(&self) -> f64 {
        self.n_s * self.delta_d
    }

    /// Drude prefactor `n_v e^2 / m_*`.
    fn strength(&self) -> f64 {
        self.n_v() * self.charge * self.charge / self.m_eff
    }
}

/// Frequency-domain susceptibility
/// `chi(omega) = -(n_v e^2 / m_*) / (omega (omega + i/tau))`.
pub fn susceptibility_freq(params: &DrudeParams, omega: f64) -> Complex64 {
    debug_assert!(omega > 0.0);
    let denom = omega * Complex64::new(omega, 1.0 / params.tau);
    -params.strength() / denom
}

/// Causal real-time susceptibility kernel:
/// `(n_v e^2 tau / m_*) exp(-dt / tau)` for `dt >= 0`, exactly zero before.
pub fn susceptibility_time(params: &DrudeParams, dt: f64) -> f64 {
    if dt < 0.0 {
        return 0.0;
    }
    params.strength() * params.tau * (-dt / params.tau).exp()
}

/// Single-mode polarization response
/// `P(t) = E0 (delta_d n_s e^2 tau / m_*) e^{-i omega0 t} / (1/tau - i omega0)`.
pub fn polarization_single_mode(params: &DrudeParams, e0: f64, omega0: f64, t: f64) -> Complex64 {
    debug_assert!(omega0 > 0.0);
    let lorentzian = Complex64::new(1.0 / params.tau, -omega0).inv();
    e0 * params.strength() * params.tau * lorentzian * Complex64::from_polar(1.0, -omega0 * t)
}

/// Regime threshold for the "low loss" flag: `omega0 tau < 0.1` keeps the
/// reactive (real) response an order of magnitude above the dissipative one.
pub const LOW_LOSS_OMEGA_TAU: f64 = 0.1;

/// Tabulated loss diagnostic for the dominant mode.
#[derive(Debug, Clone, PartialEq)]
pub struct LossReport {
    pub polarization: Polarization,
    /// Dominant mode angular frequency, rad/s.
    pub omega0: f64,
    pub tau: f64,
    pub delta_d: f64,
    /// `P(0) / E0`: the complex polarization amplitude per unit field.
    pub p_over_e: Complex64,
    /// `Im/Re` of the Lorentzian factor; equals `omega0 tau`.
    pub im_re_ratio: f64,
    pub low_loss: bool,
    /// TE modes carry no polarization-loss channel.
    pub lossless_channel: bool,
}

/// Build the loss report. Halving `delta_d` halves `|P|` (the linear route
/// to lower losses); the other route is shrinking `omega0 tau`.
pub fn loss_report(params: &DrudeParams, omega0: f64, polarization: Polarization) -> LossReport {
    match polarization {
        Polarization::Te => LossReport {
            polarization,
            omega0,
            tau: params.tau,
            delta_d: params.delta_d,
            p_over_e: Complex64::new(0.0, 0.0),
            im_re_ratio: 0.0,
            low_loss: true,
            lossless_channel: true,
        },
        Polarization::Tm => {
            let p = polarization_single_mode(params, 1.0, omega0, 0.0);
            let ratio = omega0 * params.tau;
            LossReport {
                polarization,
                omega0,
                tau: params.tau,
                delta_d: params.delta_d,
                p_over_e: p,
                im_re_ratio: ratio,
                low_loss: ratio < LOW_LOSS_OMEGA_TAU,
                lossless_channel: false,
            }
        }
    }
}
