//! Single-mode Gaussian states in the quadrature representation.
//!
//! Quadratures are dimensionless with vacuum variance 1/2, so a state is
//! fully described by a mean vector (x, p) and a 2x2 covariance matrix.

use nalgebra::{Matrix2, Vector2};

use crate::error::{Error, Result};

/// Absolute slack on det(cov) >= 1/4 to absorb roundoff from channel maps.
pub const PHYSICALITY_TOL: f64 = 1e-12;

/// Preparation parameters for a displaced squeezed thermal state.
///
/// The covariance before displacement is
/// (n0 + 1/2) diag(e^{2 r0}, e^{-2 r0}): positive r0 anti-squeezes x.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InputStateParams {
    /// Mean x quadrature.
    pub x0: f64,
    /// Mean p quadrature.
    pub p0: f64,
    /// Thermal occupation of the seed state, >= 0.
    pub n0: f64,
    /// Squeezing parameter, any sign.
    pub r0: f64,
}

impl InputStateParams {
    pub fn new(x0: f64, p0: f64, n0: f64, r0: f64) -> Result<Self> {
        if !n0.is_finite() || n0 < 0.0 {
            return Err(Error::InvalidParameter {
                name: "n0",
                reason: "thermal occupation must be finite and >= 0",
                value: n0,
            });
        }
        for (name, v) in [("x0", x0), ("p0", p0), ("r0", r0)] {
            if !v.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    reason: "must be finite",
                    value: v,
                });
            }
        }
        Ok(Self { x0, p0, n0, r0 })
    }

    pub fn vacuum() -> Self {
        Self { x0: 0.0, p0: 0.0, n0: 0.0, r0: 0.0 }
    }

    /// Coherent state carrying `nbar` mean photons, displaced along x.
    pub fn coherent(nbar: f64) -> Self {
        Self { x0: (2.0 * nbar).sqrt(), p0: 0.0, n0: 0.0, r0: 0.0 }
    }

    /// Squeezed vacuum carrying `nbar` mean photons.
    pub fn squeezed_vacuum(nbar: f64) -> Self {
        Self { x0: 0.0, p0: 0.0, n0: 0.0, r0: nbar.sqrt().asinh() }
    }

    /// Mean photon number of the prepared state:
    /// (n0 + 1/2) cosh(2 r0) + (x0^2 + p0^2)/2 - 1/2.
    pub fn mean_photon_number(&self) -> f64 {
        (self.n0 + 0.5) * (2.0 * self.r0).cosh() + 0.5 * (self.x0 * self.x0 + self.p0 * self.p0)
            - 0.5
    }
}

/// First and second moments of a single-mode Gaussian state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianState {
    /// Mean quadrature vector (x, p).
    pub mean: Vector2<f64>,
    /// Symmetrized covariance matrix.
    pub cov: Matrix2<f64>,
}

impl GaussianState {
    pub fn vacuum() -> Self {
        Self {
            mean: Vector2::zeros(),
            cov: Matrix2::from_diagonal_element(0.5),
        }
    }

    /// Mean photon number from the moments:
    /// (tr cov + |mean|^2 - 1) / 2. Errors on unphysical states.
    pub fn mean_photon_number(&self) -> Result<f64> {
        validate_physical(self)?;
        Ok(0.5 * (self.cov.trace() + self.mean.norm_squared() - 1.0))
    }
}

/// Build the moments of a displaced squeezed thermal state.
pub fn make_gaussian_state(p: &InputStateParams) -> Result<GaussianState> {
    // Re-run the parameter checks so raw struct literals are covered too.
    let p = InputStateParams::new(p.x0, p.p0, p.n0, p.r0)?;
    let v = p.n0 + 0.5;
    let cov = Matrix2::new(v * (2.0 * p.r0).exp(), 0.0, 0.0, v * (-2.0 * p.r0).exp());
    Ok(GaussianState {
        mean: Vector2::new(p.x0, p.p0),
        cov,
    })
}

/// Check symmetry, positive variances and the uncertainty relation
/// det(cov) >= 1/4.
pub fn validate_physical(s: &GaussianState) -> Result<()> {
    let c = &s.cov;
    if !(c[(0, 0)].is_finite() && c[(1, 1)].is_finite() && c[(0, 1)].is_finite()) {
        return Err(Error::InvalidState("covariance has non-finite entries".into()));
    }
    let asym = (c[(0, 1)] - c[(1, 0)]).abs();
    let scale = c[(0, 0)].abs().max(c[(1, 1)].abs()).max(1.0);
    if asym > 1e-9 * scale {
        return Err(Error::InvalidState(format!(
            "covariance not symmetric (off-diagonal mismatch {asym:.3e})"
        )));
    }
    if c[(0, 0)] <= 0.0 || c[(1, 1)] <= 0.0 {
        return Err(Error::InvalidState("non-positive quadrature variance".into()));
    }
    let det = c[(0, 0)] * c[(1, 1)] - c[(0, 1)] * c[(1, 0)];
    if det < 0.25 - PHYSICALITY_TOL {
        return Err(Error::InvalidState(format!(
            "uncertainty relation violated: det(cov) = {det:.12} < 1/4"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn vacuum_has_isotropic_half_variance() {
        let s = make_gaussian_state(&InputStateParams::vacuum()).unwrap();
        assert_eq!(s.cov, Matrix2::new(0.5, 0.0, 0.0, 0.5));
        assert_eq!(s.mean, Vector2::zeros());
        assert_eq!(s.mean_photon_number().unwrap(), 0.0);
    }

    #[test]
    fn unit_squeezing_variances() {
        let p = InputStateParams::new(0.0, 0.0, 0.0, 1.0).unwrap();
        let s = make_gaussian_state(&p).unwrap();
        // e^2/2 and e^-2/2
        assert_relative_eq!(s.cov[(0, 0)], 3.694528049465325, max_relative = 1e-15);
        assert_relative_eq!(s.cov[(1, 1)], 0.06766764161830635, max_relative = 1e-15);
        // sinh^2(1)
        assert_relative_eq!(p.mean_photon_number(), 1.3810978455418157, max_relative = 1e-14);
    }

    #[test]
    fn coherent_sqrt2_displacement_is_one_photon() {
        let p = InputStateParams::new(std::f64::consts::SQRT_2, 0.0, 0.0, 0.0).unwrap();
        assert_relative_eq!(p.mean_photon_number(), 1.0, max_relative = 1e-15);
    }

    #[test]
    fn moment_form_matches_parameter_form() {
        for &(x0, p0, n0, r0) in &[
            (0.0, 0.0, 0.0, 0.0),
            (1.3, -0.4, 0.2, 0.9),
            (0.0, 2.0, 1.5, -1.2),
            (4.0, 4.0, 0.0, 0.3),
        ] {
            let p = InputStateParams::new(x0, p0, n0, r0).unwrap();
            let s = make_gaussian_state(&p).unwrap();
            assert_relative_eq!(
                s.mean_photon_number().unwrap(),
                p.mean_photon_number(),
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn det_cov_independent_of_squeezing() {
        for &r0 in &[-2.0, -0.5, 0.0, 0.7, 2.5] {
            let p = InputStateParams::new(0.0, 0.0, 0.8, r0).unwrap();
            let s = make_gaussian_state(&p).unwrap();
            assert_relative_eq!(s.cov.determinant(), 1.3f64 * 1.3, max_relative = 1e-12);
        }
    }

    #[test]
    fn negative_thermal_occupation_rejected() {
        assert!(InputStateParams::new(0.0, 0.0, -0.1, 0.0).is_err());
        let raw = InputStateParams { x0: 0.0, p0: 0.0, n0: -0.1, r0: 0.0 };
        assert!(make_gaussian_state(&raw).is_err());
    }

    #[test]
    fn sub_heisenberg_covariance_rejected() {
        let s = GaussianState {
            mean: Vector2::zeros(),
            cov: Matrix2::new(0.4, 0.0, 0.0, 0.4),
        };
        assert!(validate_physical(&s).is_err());
        assert!(s.mean_photon_number().is_err());
    }

    #[test]
    fn squeezed_vacuum_helper_hits_requested_energy() {
        for &nbar in &[0.5, 1.0, 2.0, 4.0, 1e6] {
            let p = InputStateParams::squeezed_vacuum(nbar);
            assert_relative_eq!(p.mean_photon_number(), nbar, max_relative = 1e-9);
            let c = InputStateParams::coherent(nbar);
            assert_relative_eq!(c.mean_photon_number(), nbar, max_relative = 1e-12);
        }
    }
}
