//! Periodic laser-induced plasma-strength profile `V(t)` and its analytic
//! time derivative.
//!
//! One pulse is a rising Gaussian flank, a flat plateau at `v_max`, and a
//! falling Gaussian flank, filling exactly one period. The flank durations
//! are chosen so both Gaussian tails reach the pulse junction at the same
//! depth, which makes consecutive pulses join continuously; the tails must
//! have decayed below `1e-12 * v_max` at the junction for the slope mismatch
//! there to stay inside the same budget, otherwise construction fails.

use thiserror::Error;

/// Junction residual budget, relative to `v_max`.
pub const JUNCTION_BUDGET: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum PulseError {
    #[error("negative parameter: {name} = {value}")]
    NegativeParameter { name: &'static str, value: f64 },
    #[error("period must be positive, got {0}")]
    NonPositivePeriod(f64),
    #[error(
        "no C1 matching inside the period: tails meet at {ratio:.2} sigma \
         (residual {residual:.3e} exceeds budget {budget:.1e}); widen the \
         period or narrow the Gaussians"
    )]
    InconsistentDurations { ratio: f64, residual: f64, budget: f64 },
}

/// Periodic plasma-strength waveform, immutable after construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseProfile {
    sigma_e: f64,
    t_plateau: f64,
    sigma_tau: f64,
    period: f64,
    v_max: f64,
    n_pulses: u32,
    t_start: f64,
    /// Rise duration `s * sigma_e`.
    t_rise: f64,
    /// Tail depth in sigmas at the pulse junction.
    junction_sigmas: f64,
}

impl PulseProfile {
    /// Build a profile from the Gaussian widths, plateau duration, period
    /// and peak strength. Irradiation starts at `t_start = 0`.
    pub fn build(
        sigma_e: f64,
        t_plateau: f64,
        sigma_tau: f64,
        period: f64,
        v_max: f64,
        n_pulses: u32,
    ) -> Result<Self, PulseError> {
        Self::build_with_start(sigma_e, t_plateau, sigma_tau, period, v_max, n_pulses, 0.0)
    }

    pub fn build_with_start(
        sigma_e: f64,
        t_plateau: f64,
        sigma_tau: f64,
        period: f64,
        v_max: f64,
        n_pulses: u32,
        t_start: f64,
    ) -> Result<Self, PulseError> {
        for (name, value) in [
            ("sigma_e", sigma_e),
            ("t_plateau", t_plateau),
            ("sigma_tau", sigma_tau),
            ("v_max", v_max),
        ] {
            if value < 0.0 || !value.is_finite() {
                return Err(PulseError::NegativeParameter { name, value });
            }
        }
        if period <= 0.0 || !period.is_finite() {
            return Err(PulseError::NonPositivePeriod(period));
        }
        // Both flanks must close within the period: the common tail depth in
        // sigmas follows from the leftover duration.
        let flank = period - t_plateau;
        let widths = sigma_e + sigma_tau;
        if flank <= 0.0 || widths <= 0.0 {
            return Err(PulseError::InconsistentDurations {
                ratio: 0.0,
                residual: 1.0,
                budget: JUNCTION_BUDGET,
            });
        }
        let s = flank / widths;
        let residual = (-0.5 * s * s).exp();
        if residual > JUNCTION_BUDGET {
            return Err(PulseError::InconsistentDurations { ratio: s, residual, budget: JUNCTION_BUDGET });
        }
        Ok(Self {
            sigma_e,
            t_plateau,
            sigma_tau,
            period,
            v_max,
            n_pulses,
            t_start,
            t_rise: s * sigma_e,
            junction_sigmas: s,
        })
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn v_max(&self) -> f64 {
        self.v_max
    }

    pub fn n_pulses(&self) -> u32 {
        self.n_pulses
    }

    pub fn t_start(&self) -> f64 {
        self.t_start
    }

    /// End of the pulse train; `V = 0` from here on.
    pub fn t_end(&self) -> f64 {
        self.t_start + self.n_pulses as f64 * self.period
    }

    /// Instants where the drive is at its inter-pulse minimum (pulse
    /// junctions and the train boundaries). `V` there is below
    /// `JUNCTION_BUDGET * v_max`.
    pub fn field_free_instants(&self) -> Vec<f64> {
        (0..=self.n_pulses).map(|j| self.t_start + j as f64 * self.period).collect()
    }

    /// Center of the plateau of the first pulse.
    pub fn plateau_center(&self) -> f64 {
        self.t_start + self.t_rise + 0.5 * self.t_plateau
    }

    /// `V(t)`.
    pub fn eval(&self, t: f64) -> f64 {
        match self.phase(t) {
            Phase::Off => 0.0,
            Phase::Rising(u) => self.v_max * (-0.5 * u * u).exp(),
            Phase::Plateau => self.v_max,
            Phase::Falling(u) => self.v_max * (-0.5 * u * u).exp(),
        }
    }

    /// Analytic `dV/dt`.
    pub fn eval_derivative(&self, t: f64) -> f64 {
        match self.phase(t) {
            Phase::Off | Phase::Plateau => 0.0,
            Phase::Rising(u) => -self.v_max * u / self.sigma_e * (-0.5 * u * u).exp(),
            Phase::Falling(u) => -self.v_max * u / self.sigma_tau * (-0.5 * u * u).exp(),
        }
    }

    /// Analytic `d2V/dt2` (the flanks are plain Gaussians).
    pub fn eval_second_derivative(&self, t: f64) -> f64 {
        match self.phase(t) {
            Phase::Off | Phase::Plateau => 0.0,
            Phase::Rising(u) => {
                self.v_max * (u * u - 1.0) / (self.sigma_e * self.sigma_e) * (-0.5 * u * u).exp()
            }
            Phase::Falling(u) => {
                self.v_max * (u * u - 1.0) / (self.sigma_tau * self.sigma_tau) * (-0.5 * u * u).exp()
            }
        }
    }

    /// Where `t` falls within the pulse train; flank phases carry the
    /// distance from the nearest plateau edge in units of the flank sigma.
    fn phase(&self, t: f64) -> Phase {
        let u = t - self.t_start;
        let train = self.n_pulses as f64 * self.period;
        if u < 0.0 || u >= train || self.v_max == 0.0 {
            return Phase::Off;
        }
        let phi = u - self.period * (u / self.period).floor();
        if phi < self.t_rise {
            Phase::Rising((phi - self.t_rise) / self.sigma_e)
        } else if phi <= self.t_rise + self.t_plateau {
            Phase::Plateau
        } else {
            Phase::Falling((phi - self.t_rise - self.t_plateau) / self.sigma_tau)
        }
    }
}

enum Phase {
    Off,
    /// Argument of the excitation Gaussian, in sigmas (negative).
    Rising(f64),
    Plateau,
    /// Argument of the relaxation Gaussian, in sigmas (positive).
    Falling(f64),
}
