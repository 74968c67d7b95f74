//! Normalized transverse eigenfunctions of the cylindrical cross-section.
//!
//! TE modes use the m-th positive root `y_nm` of `J_n'`, TM modes the m-th
//! root `x_nm` of `J_n`. Index convention throughout the crate: the first
//! index is the angular order `n`, the second the root ordinal `m`.

use num_complex::Complex64;
use thiserror::Error;

use crate::bessel::{bessel_j, bessel_j_prime, bessel_root, RootKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarization {
    Te,
    Tm,
}

impl Polarization {
    pub fn label(&self) -> &'static str {
        match self {
            Polarization::Te => "TE",
            Polarization::Tm => "TM",
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum TransverseError {
    #[error("radial coordinate {rho} outside cavity of radius {radius}")]
    OutOfDomain { rho: f64, radius: f64 },
}

/// One transverse cavity mode: polarization, indices, Bessel root and the
/// transverse wavenumber `root / R`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransverseMode {
    pub polarization: Polarization,
    pub n: u32,
    pub m: u32,
    pub root: f64,
    pub k_perp: f64,
    radius: f64,
}

impl TransverseMode {
    /// `radius` in the caller's length unit; `k_perp` comes out in its
    /// inverse.
    pub fn new(polarization: Polarization, n: u32, m: u32, radius: f64) -> Self {
        let kind = match polarization {
            Polarization::Te => RootKind::JPrime,
            Polarization::Tm => RootKind::J,
        };
        let root = bessel_root(kind, n, m);
        Self { polarization, n, m, root, k_perp: root / radius, radius }
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Normalization constant multiplying `J_n(root * rho / R) e^{i n phi}`,
    /// fixed so the squared eigenfunction integrates to one over the
    /// cross-section.
    pub fn norm_constant(&self) -> f64 {
        let sqrt_pi = std::f64::consts::PI.sqrt();
        match self.polarization {
            Polarization::Te => {
                let nn = self.n as f64;
                let factor = (1.0 - nn * nn / (self.root * self.root)).sqrt();
                1.0 / (sqrt_pi * self.radius * bessel_j(self.n, self.root) * factor)
            }
            Polarization::Tm => 1.0 / (sqrt_pi * self.radius * bessel_j(self.n + 1, self.root)),
        }
    }

    /// The eigenfunction `v_nm` (TE) or `r_nm` (TM) at `(rho, phi)`.
    pub fn eigenfunction(&self, rho: f64, phi: f64) -> Result<Complex64, TransverseError> {
        if !(0.0..=self.radius).contains(&rho) {
            return Err(TransverseError::OutOfDomain { rho, radius: self.radius });
        }
        let radial = self.norm_constant() * bessel_j(self.n, self.root * rho / self.radius);
        Ok(radial * Complex64::from_polar(1.0, self.n as f64 * phi))
    }

    /// Radial derivative of the eigenfunction at `(rho, phi)`.
    pub fn eigenfunction_drho(&self, rho: f64, phi: f64) -> Result<Complex64, TransverseError> {
        if !(0.0..=self.radius).contains(&rho) {
            return Err(TransverseError::OutOfDomain { rho, radius: self.radius });
        }
        let c = self.root / self.radius;
        let radial = self.norm_constant() * c * bessel_j_prime(self.n, c * rho);
        Ok(radial * Complex64::from_polar(1.0, self.n as f64 * phi))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::adaptive_simpson;
    use approx::assert_relative_eq;
    use std::f64::consts::TAU;

    /// Quadrature oracle for `integral |f|^2 rho drho dphi` over the section.
    fn norm_quadrature(mode: &TransverseMode) -> f64 {
        let radial = adaptive_simpson(
            |rho| {
                let f = mode.eigenfunction(rho, 0.0).unwrap().norm();
                f * f * rho
            },
            0.0,
            mode.radius(),
            1e-12,
        );
        radial * TAU
    }

    #[test]
    fn eigenfunctions_are_unit_norm() {
        for (pol, n, m) in [
            (Polarization::Tm, 0, 1),
            (Polarization::Tm, 0, 2),
            (Polarization::Tm, 1, 1),
            (Polarization::Te, 1, 1),
            (Polarization::Te, 1, 2),
            (Polarization::Te, 2, 1),
            (Polarization::Te, 0, 1),
        ] {
            let mode = TransverseMode::new(pol, n, m, 0.25);
            let norm = norm_quadrature(&mode);
            assert!((norm - 1.0).abs() < 1e-8, "{pol:?} ({n},{m}): norm {norm}");
        }
    }

    #[test]
    fn distinct_radial_modes_are_orthogonal() {
        for pol in [Polarization::Tm, Polarization::Te] {
            let a = TransverseMode::new(pol, 1, 1, 0.25);
            let b = TransverseMode::new(pol, 1, 2, 0.25);
            let overlap = adaptive_simpson(
                |rho| {
                    let fa = a.eigenfunction(rho, 0.0).unwrap().re;
                    let fb = b.eigenfunction(rho, 0.0).unwrap().re;
                    fa * fb * rho
                },
                0.0,
                0.25,
                1e-12,
            ) * TAU;
            assert!(overlap.abs() < 1e-8, "{pol:?}: overlap {overlap}");
        }
    }

    #[test]
    fn tm_vanishes_at_wall() {
        let mode = TransverseMode::new(Polarization::Tm, 0, 1, 0.25);
        assert!(mode.eigenfunction(0.25, 1.3).unwrap().norm() < 1e-12);
        let mode = TransverseMode::new(Polarization::Tm, 2, 3, 0.25);
        assert!(mode.eigenfunction(0.25, 0.0).unwrap().norm() < 1e-11);
    }

    #[test]
    fn te_radial_derivative_vanishes_at_wall() {
        let mode = TransverseMode::new(Polarization::Te, 1, 1, 0.25);
        assert!(mode.eigenfunction_drho(0.25, 0.7).unwrap().norm() < 1e-11);
    }

    #[test]
    fn tm01_on_axis_value() {
        // Direct substitution: r_01(0) = 1 / (sqrt(pi) R J_1(x_01)).
        let r = 0.25;
        let mode = TransverseMode::new(Polarization::Tm, 0, 1, r);
        let expected = 1.0 / (std::f64::consts::PI.sqrt() * r * bessel_j(1, mode.root));
        let got = mode.eigenfunction(0.0, 0.0).unwrap();
        assert_relative_eq!(got.re, expected, max_relative = 1e-12);
        assert_eq!(got.im, 0.0);
    }

    #[test]
    fn rejects_out_of_domain_radius() {
        let mode = TransverseMode::new(Polarization::Tm, 0, 1, 0.25);
        assert!(mode.eigenfunction(0.2500001, 0.0).is_err());
        assert!(mode.eigenfunction(-0.01, 0.0).is_err());
    }

    #[test]
    fn azimuthal_phase_factor() {
        let mode = TransverseMode::new(Polarization::Te, 1, 1, 0.25);
        let f0 = mode.eigenfunction(0.1, 0.0).unwrap();
        let f1 = mode.eigenfunction(0.1, 0.9).unwrap();
        assert_relative_eq!(f1.arg(), 0.9, max_relative = 1e-12);
        assert_relative_eq!(f0.norm(), f1.norm(), max_relative = 1e-12);
    }
}
