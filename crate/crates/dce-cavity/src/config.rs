//! Run configuration: a flat `section.key = value` text format with `#`
//! comments, strict unknown-key rejection, and reference-experiment defaults.
//!
//! An empty file (or [`RunConfig::default`]) describes the reference setup:
//! a 100 mm x 25 mm cylindrical cavity, sheet at the midpoint, TM (0,1)
//! transverse mode, 51 longitudinal branches, ten 113 ps pulses at peak
//! strength `V L_z = 5000`.

use thiserror::Error;

use crate::evolve::RunOptions;
use crate::losses::{DrudeParams, ELECTRON_MASS, ELEMENTARY_CHARGE};
use crate::pulse::{PulseError, PulseProfile};
use crate::spectrum::{CavityConfig, SpectrumError};
use crate::transverse::Polarization;
use crate::units::UnitMap;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: expected `section.key = value`, got `{text}`")]
    Syntax { line: usize, text: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: invalid value for `{key}`: {reason}")]
    BadValue { line: usize, key: String, reason: String },
    #[error("invalid `{field}`: {reason}")]
    Domain { field: String, reason: String },
}

/// Full run description in laboratory units.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    // geometry
    pub l_z_mm: f64,
    pub r_mm: f64,
    pub eta: f64,
    // mode
    pub polarization: Polarization,
    /// Angular index; `None` defaults per polarization (TM: 0, TE: 1).
    pub n: Option<u32>,
    pub m: u32,
    pub ell_max: usize,
    // pulse
    pub period_ps: f64,
    pub v_max_lz: f64,
    pub n_pulses: u32,
    pub excitation_fraction: f64,
    pub plateau_fraction: f64,
    pub tail_sigmas: f64,
    // integrator
    pub steps_per_period: usize,
    pub max_phase_step: f64,
    // output
    pub samples_per_period: usize,
    pub spectrum_samples_per_period: usize,
    pub t_final_ps: Option<f64>,
    // sweeps
    pub sweep_periods_ps: Vec<f64>,
    pub sweep_etas: Vec<f64>,
    pub sweep_eta_period_overrides: Vec<(f64, f64)>,
    pub jobs: usize,
    // losses
    pub n_s_per_m2: f64,
    pub delta_d_um: f64,
    pub tau_ps: f64,
    pub m_eff_me: f64,
    /// Dominant-mode angular frequency override, rad/s; defaults to the
    /// static frequency of the configured mode's first longitudinal branch.
    pub omega0_rad_per_s: Option<f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            l_z_mm: 100.0,
            r_mm: 25.0,
            eta: 0.5,
            polarization: Polarization::Tm,
            n: None,
            m: 1,
            ell_max: 51,
            period_ps: 113.0,
            v_max_lz: 5000.0,
            n_pulses: 10,
            excitation_fraction: 0.4,
            plateau_fraction: 0.2,
            tail_sigmas: 8.5,
            steps_per_period: 4096,
            max_phase_step: 0.5,
            samples_per_period: 16,
            spectrum_samples_per_period: 400,
            t_final_ps: None,
            sweep_periods_ps: Vec::new(),
            sweep_etas: Vec::new(),
            sweep_eta_period_overrides: Vec::new(),
            jobs: 0,
            n_s_per_m2: 1e19,
            delta_d_um: 50.0,
            tau_ps: 10.0,
            m_eff_me: 0.067,
            omega0_rad_per_s: None,
        }
    }
}

impl RunConfig {
    /// Parse the documented key-value grammar; unknown keys are errors.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = RunConfig::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| ConfigError::Syntax { line, text: raw.trim().to_string() })?;
            let key = key.trim();
            let value = value.trim();
            if key.is_empty() || value.is_empty() || !key.contains('.') {
                return Err(ConfigError::Syntax { line, text: raw.trim().to_string() });
            }
            cfg.apply(key, value, line)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn apply(&mut self, key: &str, value: &str, line: usize) -> Result<(), ConfigError> {
        let bad = |reason: &str| ConfigError::BadValue {
            line,
            key: key.to_string(),
            reason: reason.to_string(),
        };
        let f = |v: &str| v.parse::<f64>().map_err(|e| bad(&e.to_string()));
        let u = |v: &str| v.parse::<usize>().map_err(|e| bad(&e.to_string()));
        match key {
            "geometry.l_z_mm" => self.l_z_mm = f(value)?,
            "geometry.r_mm" => self.r_mm = f(value)?,
            "geometry.eta" => self.eta = f(value)?,
            "mode.polarization" => {
                self.polarization = match value.to_ascii_lowercase().as_str() {
                    "te" => Polarization::Te,
                    "tm" => Polarization::Tm,
                    other => return Err(bad(&format!("expected te|tm, got {other}"))),
                }
            }
            "mode.n" => self.n = Some(u(value)? as u32),
            "mode.m" => self.m = u(value)? as u32,
            "mode.ell_max" => self.ell_max = u(value)?,
            "pulse.period_ps" => self.period_ps = f(value)?,
            "pulse.v_max_lz" => self.v_max_lz = f(value)?,
            "pulse.n_pulses" => self.n_pulses = u(value)? as u32,
            "pulse.excitation_fraction" => self.excitation_fraction = f(value)?,
            "pulse.plateau_fraction" => self.plateau_fraction = f(value)?,
            "pulse.tail_sigmas" => self.tail_sigmas = f(value)?,
            "integrator.steps_per_period" => self.steps_per_period = u(value)?,
            "integrator.max_phase_step" => self.max_phase_step = f(value)?,
            "output.samples_per_period" => self.samples_per_period = u(value)?,
            "spectrum.samples_per_period" => self.spectrum_samples_per_period = u(value)?,
            "run.t_final_ps" => self.t_final_ps = Some(f(value)?),
            "sweep.periods_ps" => {
                self.sweep_periods_ps =
                    value.split(',').map(|s| f(s.trim())).collect::<Result<_, _>>()?
            }
            "sweep.etas" => {
                self.sweep_etas = value.split(',').map(|s| f(s.trim())).collect::<Result<_, _>>()?
            }
            "sweep.eta_period_overrides" => {
                self.sweep_eta_period_overrides = value
                    .split(',')
                    .map(|pair| {
                        let (eta, t) = pair
                            .trim()
                            .split_once(':')
                            .ok_or_else(|| bad("expected eta:period_ps pairs"))?;
                        Ok((f(eta.trim())?, f(t.trim())?))
                    })
                    .collect::<Result<_, ConfigError>>()?
            }
            "sweep.jobs" => self.jobs = u(value)?,
            "losses.n_s_per_m2" => self.n_s_per_m2 = f(value)?,
            "losses.delta_d_um" => self.delta_d_um = f(value)?,
            "losses.tau_ps" => self.tau_ps = f(value)?,
            "losses.m_eff_me" => self.m_eff_me = f(value)?,
            "losses.omega0_rad_per_s" => self.omega0_rad_per_s = Some(f(value)?),
            _ => return Err(ConfigError::UnknownKey { line, key: key.to_string() }),
        }
        Ok(())
    }

    /// Check every module-level precondition, naming the violated field.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let domain = |field: &str, reason: String| ConfigError::Domain {
            field: field.to_string(),
            reason,
        };
        if !(self.eta > 0.0 && self.eta < 1.0) {
            return Err(domain("geometry.eta", format!("must lie in (0, 1), got {}", self.eta)));
        }
        self.cavity().map_err(|e| domain("geometry/mode", e.to_string()))?;
        self.profile().map_err(|e| domain("pulse", e.to_string()))?;
        if self.samples_per_period == 0
            || self.steps_per_period % self.samples_per_period != 0
        {
            return Err(domain(
                "output.samples_per_period",
                format!(
                    "must divide integrator.steps_per_period ({} / {})",
                    self.steps_per_period, self.samples_per_period
                ),
            ));
        }
        if !(self.max_phase_step > 0.0) {
            return Err(domain("integrator.max_phase_step", "must be positive".into()));
        }
        if self.spectrum_samples_per_period < 2 {
            return Err(domain("spectrum.samples_per_period", "must be at least 2".into()));
        }
        for &(eta, t) in &self.sweep_eta_period_overrides {
            if !(eta > 0.0 && eta < 1.0) || !(t > 0.0) {
                return Err(domain("sweep.eta_period_overrides", format!("bad pair {eta}:{t}")));
            }
        }
        self.drude().map_err(|e| domain("losses", e))?;
        Ok(())
    }

    /// Angular index with the polarization-dependent default.
    pub fn angular_index(&self) -> u32 {
        self.n.unwrap_or(match self.polarization {
            Polarization::Te => 1,
            Polarization::Tm => 0,
        })
    }

    pub fn units(&self) -> UnitMap {
        UnitMap::new(self.l_z_mm)
    }

    /// Natural-unit cavity description.
    pub fn cavity(&self) -> Result<CavityConfig, SpectrumError> {
        CavityConfig::new(
            1.0,
            self.r_mm / self.l_z_mm,
            self.eta,
            self.polarization,
            self.angular_index(),
            self.m,
            self.ell_max,
        )
    }

    /// Natural-unit pulse profile. The driving period splits into
    /// excitation flank / plateau / relaxation flank by the configured
    /// fractions, with flanks `tail_sigmas` wide in their Gaussian sigma.
    pub fn profile(&self) -> Result<PulseProfile, PulseError> {
        let relax = 1.0 - self.excitation_fraction - self.plateau_fraction;
        if !(self.excitation_fraction > 0.0) || !(relax > 0.0) || self.plateau_fraction < 0.0 {
            return Err(PulseError::NegativeParameter {
                name: "pulse fractions",
                value: relax,
            });
        }
        let period = self.units().ps_to_natural(self.period_ps);
        PulseProfile::build(
            self.excitation_fraction * period / self.tail_sigmas,
            self.plateau_fraction * period,
            relax * period / self.tail_sigmas,
            period,
            self.v_max_lz, // V * L_z is the natural-unit strength directly
            self.n_pulses,
        )
    }

    pub fn run_options(&self) -> RunOptions {
        RunOptions {
            steps_per_period: self.steps_per_period,
            samples_per_period: self.samples_per_period,
            t_final: self.t_final_ps.map(|t| self.units().ps_to_natural(t)),
            max_phase_step: self.max_phase_step,
        }
    }

    pub fn drude(&self) -> Result<DrudeParams, String> {
        let p = DrudeParams {
            n_s: self.n_s_per_m2,
            delta_d: self.delta_d_um * 1e-6,
            tau: self.tau_ps * 1e-12,
            m_eff: self.m_eff_me * ELECTRON_MASS,
            charge: ELEMENTARY_CHARGE,
        };
        p.validate()?;
        Ok(p)
    }

    /// Dominant-mode angular frequency in rad/s for the loss report.
    pub fn omega0_rad_per_s(&self) -> Result<f64, SpectrumError> {
        if let Some(w) = self.omega0_rad_per_s {
            return Ok(w);
        }
        let cavity = self.cavity()?;
        Ok(self.units().omega_to_rad_per_s(cavity.omega_static(1)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_reference_defaults() {
        let cfg = RunConfig::parse("").unwrap();
        assert_eq!(cfg, RunConfig::default());
        assert_eq!(cfg.l_z_mm, 100.0);
        assert_eq!(cfg.r_mm, 25.0);
        assert_eq!(cfg.eta, 0.5);
        assert_eq!(cfg.polarization, Polarization::Tm);
        assert_eq!(cfg.angular_index(), 0);
        assert_eq!(cfg.m, 1);
        assert_eq!(cfg.ell_max, 51);
        assert_eq!(cfg.period_ps, 113.0);
        assert_eq!(cfg.v_max_lz, 5000.0);
        assert_eq!(cfg.n_pulses, 10);
    }

    #[test]
    fn parses_reference_default_file() {
        let text = "\
# reference configuration
geometry.l_z_mm = 100
geometry.r_mm = 25
geometry.eta = 0.5
mode.polarization = tm
mode.n = 0
mode.m = 1
mode.ell_max = 51
pulse.period_ps = 113
pulse.v_max_lz = 5000
pulse.n_pulses = 10
";
        let cfg = RunConfig::parse(text).unwrap();
        assert_eq!(cfg.ell_max, 51);
        assert_eq!(cfg.n, Some(0));
        assert!(cfg.cavity().is_ok());
        assert!(cfg.profile().is_ok());
    }

    #[test]
    fn rejects_eta_out_of_bounds_naming_field() {
        let err = RunConfig::parse("geometry.eta = 1.2").unwrap_err();
        match err {
            ConfigError::Domain { field, reason } => {
                assert_eq!(field, "geometry.eta");
                assert!(reason.contains("(0, 1)"), "{reason}");
            }
            other => panic!("wrong error {other:?}"),
        }
    }

    #[test]
    fn rejects_unknown_keys_and_syntax() {
        let err = RunConfig::parse("geometry.widht_mm = 3").unwrap_err();
        assert!(matches!(err, ConfigError::UnknownKey { line: 1, .. }));
        let err = RunConfig::parse("just some words").unwrap_err();
        assert!(matches!(err, ConfigError::Syntax { line: 1, .. }));
        let err = RunConfig::parse("\n\nmode.polarization = qp").unwrap_err();
        assert!(matches!(err, ConfigError::BadValue { line: 3, .. }));
    }

    #[test]
    fn comments_and_lists() {
        let cfg = RunConfig::parse(
            "sweep.periods_ps = 102, 103, 104 # tuning grid\nsweep.eta_period_overrides = 0.4:107\n",
        )
        .unwrap();
        assert_eq!(cfg.sweep_periods_ps, vec![102.0, 103.0, 104.0]);
        assert_eq!(cfg.sweep_eta_period_overrides, vec![(0.4, 107.0)]);
    }

    #[test]
    fn te_default_angular_index() {
        let cfg = RunConfig::parse("mode.polarization = te").unwrap();
        assert_eq!(cfg.angular_index(), 1);
    }

    #[test]
    fn cadence_must_divide_steps() {
        let err = RunConfig::parse("output.samples_per_period = 17").unwrap_err();
        assert!(matches!(err, ConfigError::Domain { .. }));
    }
}
