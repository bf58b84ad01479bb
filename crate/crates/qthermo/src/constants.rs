//! Physical constants (SI, CODATA 2018 exact definitions).
//!
//! Every SI unit entering the crate goes through [`PhysicalConstants`] so a
//! single override point exists for testing.

use std::f64::consts::PI;

/// Planck constant, J s (exact by SI definition).
pub const PLANCK_H: f64 = 6.62607015e-34;
/// Reduced Planck constant, J s.
pub const HBAR: f64 = PLANCK_H / (2.0 * PI);
/// Boltzmann constant, J/K (exact).
pub const K_B: f64 = 1.380649e-23;
/// Speed of light in vacuum, m/s (exact).
pub const SPEED_OF_LIGHT: f64 = 299792458.0;

/// Bundle of the constants used by the physics routines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Reduced Planck constant, J s.
    pub hbar: f64,
    /// Boltzmann constant, J/K.
    pub k_b: f64,
    /// Speed of light, m/s.
    pub c: f64,
    /// Stefan-Boltzmann constant, W m^-2 K^-4. Always derived from the
    /// other three; see [`PhysicalConstants::sigma_consistency`].
    pub sigma: f64,
}

impl PhysicalConstants {
    /// CODATA 2018 values.
    pub fn codata() -> Self {
        Self::from_base(HBAR, K_B, SPEED_OF_LIGHT)
    }

    /// Build from base constants, deriving sigma = pi^2 k_B^4 / (60 hbar^3 c^2).
    pub fn from_base(hbar: f64, k_b: f64, c: f64) -> Self {
        let sigma = PI * PI * k_b.powi(4) / (60.0 * hbar.powi(3) * c * c);
        Self { hbar, k_b, c, sigma }
    }

    /// Relative deviation of the stored sigma from its defining expression.
    pub fn sigma_consistency(&self) -> f64 {
        let derived = PI * PI * self.k_b.powi(4) / (60.0 * self.hbar.powi(3) * self.c * self.c);
        ((self.sigma - derived) / derived).abs()
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::codata()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_matches_defining_expression() {
        let pc = PhysicalConstants::codata();
        assert!(pc.sigma_consistency() < 1e-12);
    }

    #[test]
    fn sigma_matches_published_value() {
        // CODATA lists 5.670374419e-8 W m^-2 K^-4.
        let pc = PhysicalConstants::codata();
        assert!((pc.sigma - 5.670374419e-8).abs() / 5.670374419e-8 < 1e-9);
    }

    #[test]
    fn hbar_matches_planck_over_two_pi() {
        assert!((HBAR - 1.054571817e-34).abs() / 1.054571817e-34 < 1e-9);
    }
}
