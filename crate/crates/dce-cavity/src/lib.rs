//! Photon creation by a laser-driven plasma sheet in a cylindrical microwave
//! cavity.
//!
//! A thin semiconductor diaphragm inside a superconducting cylindrical cavity
//! is periodically irradiated by a picosecond laser. The irradiation turns
//! the sheet into a plasma whose strength `V(t)` modulates the cavity's
//! longitudinal mode spectrum, pumping photon pairs out of the vacuum
//! (the dynamical Casimir effect). This crate computes:
//!
//! - the pulsed plasma-strength profile and its derivatives ([`pulse`]),
//! - cylindrical transverse eigenfunctions and Bessel machinery
//!   ([`transverse`], [`bessel`]),
//! - the time-dependent longitudinal spectrum `k_p(t)`, `omega_p(t)` from a
//!   transcendental eigenvalue relation ([`spectrum`]),
//! - instantaneous longitudinal mode functions, their intermode coupling
//!   matrix, and field reconstruction from the Hertz scalars ([`modes`]),
//! - the coupled amplitude evolution, Bogolyubov coefficients, per-mode
//!   photon numbers and the unitarity defect ([`evolve`]),
//! - a Drude-model polarization-loss diagnostic ([`losses`]),
//! - config parsing, parameter sweeps and deterministic CSV output
//!   ([`cli`]).
//!
//! Natural units are used internally (`c = 1`, lengths in units of the
//! cavity length); every external surface takes and returns mm, ps and GHz
//! through [`units::UnitMap`].
//!
//! The `examples/` directory carries one runnable program per capability;
//! the `dce-cavity` binary exposes the same operations as subcommands that
//! emit CSV.

pub mod bessel;
pub mod cli;
pub mod config;
pub mod evolve;
pub mod losses;
pub mod modes;
pub mod pulse;
pub mod quad;
pub mod spectrum;
pub mod transverse;
pub mod trig;
pub mod units;

pub use config::RunConfig;
pub use evolve::{BogolyubovResult, EvolutionState};
pub use modes::{CouplingMatrix, LongitudinalMode};
pub use pulse::PulseProfile;
pub use spectrum::{CavityConfig, SpectrumTrajectory};
pub use transverse::{Polarization, TransverseMode};
