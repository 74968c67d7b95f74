//! Unit conversions between the natural units used internally and the
//! laboratory units used at every external interface.
//!
//! Internally the cavity length sets the scale: lengths are measured in units
//! of `L_z`, times in units of `L_z/c`, and `c = 1`. This removes both `c`
//! and `L_z` from the dynamical equations. External interfaces speak mm, ps
//! and GHz and convert through [`UnitMap`].

use std::f64::consts::TAU;

/// Speed of light in mm per ps.
pub const C_MM_PER_PS: f64 = 0.299_792_458;

/// Conversion context anchored on the physical cavity length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitMap {
    /// Cavity length in mm; one natural time unit is `l_z_mm / c`.
    pub l_z_mm: f64,
}

impl UnitMap {
    pub fn new(l_z_mm: f64) -> Self {
        Self { l_z_mm }
    }

    /// One natural time unit expressed in ps.
    pub fn natural_time_ps(&self) -> f64 {
        self.l_z_mm / C_MM_PER_PS
    }

    pub fn ps_to_natural(&self, t_ps: f64) -> f64 {
        t_ps * C_MM_PER_PS / self.l_z_mm
    }

    pub fn natural_to_ps(&self, t: f64) -> f64 {
        t * self.l_z_mm / C_MM_PER_PS
    }

    /// Angular frequency in natural units to ordinary frequency in GHz
    /// (`omega / 2 pi`, expressed in GHz).
    pub fn omega_to_ghz(&self, omega: f64) -> f64 {
        // omega * c / L_z is rad/ps; 1 rad/ps = 1000/(2 pi) GHz.
        omega * C_MM_PER_PS / self.l_z_mm * 1000.0 / TAU
    }

    /// Angular frequency in natural units to rad/s.
    pub fn omega_to_rad_per_s(&self, omega: f64) -> f64 {
        omega * C_MM_PER_PS / self.l_z_mm * 1e12
    }

    /// A rate (inverse natural time) to inverse ps.
    pub fn rate_to_per_ps(&self, rate: f64) -> f64 {
        rate * C_MM_PER_PS / self.l_z_mm
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn round_trips() {
        let u = UnitMap::new(100.0);
        assert_relative_eq!(u.natural_to_ps(u.ps_to_natural(113.0)), 113.0, max_relative = 1e-15);
        // L_z/c for a 100 mm cavity is about a third of a nanosecond.
        assert_relative_eq!(u.natural_time_ps(), 333.564, max_relative = 1e-4);
    }

    #[test]
    fn frequency_conversion() {
        let u = UnitMap::new(100.0);
        // omega = 2 pi in natural units is one cycle per L_z/c.
        let f = u.omega_to_ghz(TAU);
        assert_relative_eq!(f, 1000.0 / u.natural_time_ps(), max_relative = 1e-12);
        // rad/s agrees with GHz conversion up to 2 pi and SI prefix.
        assert_relative_eq!(u.omega_to_rad_per_s(1.7), u.omega_to_ghz(1.7) * TAU * 1e9, max_relative = 1e-12);
    }
}
