//! Quantum Fisher information and temperature precision bounds.
//!
//! The phase sensitivity of a single-mode Gaussian probe is evaluated in the
//! frame where the covariance is diagonal (a phase rotation is absorbed into
//! the reference, which leaves the information unchanged). Temperature enters
//! through the thermo-optic coupling d phi / dT = alpha.

use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};
use crate::gaussian::{validate_physical, GaussianState};

/// Relative tolerance under which a covariance counts as diagonal.
const DIAGONAL_TOL: f64 = 1e-9;

/// Quantum Fisher information for the phase of a Gaussian state.
///
/// For diagonal covariance diag(A, B) with means (x, p):
/// Q = 4 (B - A)^2 / (1 + 4 A B) + x^2 / B + p^2 / A.
/// A non-diagonal covariance is first diagonalized by a rotation.
pub fn qfi_phase(s: &GaussianState) -> Result<f64> {
    validate_physical(s)?;
    let (a, b, x, p) = diagonal_frame(s);
    Ok(quadratic_term(a, b) + x * x / b + p * p / a)
}

fn quadratic_term(a: f64, b: f64) -> f64 {
    let d = b - a;
    4.0 * d * d / (1.0 + 4.0 * a * b)
}

/// Rotate the state into the frame with diagonal covariance; returns
/// (var_x, var_p, mean_x, mean_p) in that frame.
fn diagonal_frame(s: &GaussianState) -> (f64, f64, f64, f64) {
    let a = s.cov[(0, 0)];
    let b = s.cov[(1, 1)];
    let c = 0.5 * (s.cov[(0, 1)] + s.cov[(1, 0)]);
    if c.abs() <= DIAGONAL_TOL * a.max(b) {
        return (a, b, s.mean[0], s.mean[1]);
    }
    let theta = 0.5 * (2.0 * c).atan2(a - b);
    let (sn, cs) = theta.sin_cos();
    let a2 = cs * cs * a + 2.0 * sn * cs * c + sn * sn * b;
    let b2 = sn * sn * a - 2.0 * sn * cs * c + cs * cs * b;
    let x2 = cs * s.mean[0] + sn * s.mean[1];
    let p2 = -sn * s.mean[0] + cs * s.mean[1];
    (a2, b2, x2, p2)
}

/// Coefficients of the symmetric logarithmic derivative for phase,
/// L = c_xp (x~ o p~) + c_x x~ + c_p p~, with x~, p~ the mean-centered
/// quadratures and o the symmetrized product.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SldForm {
    pub c_xp: f64,
    pub c_x: f64,
    pub c_p: f64,
}

impl SldForm {
    /// Tr[rho L]: vanishes identically in the diagonal frame.
    pub fn mean(&self, s: &GaussianState) -> f64 {
        let c12 = 0.5 * (s.cov[(0, 1)] + s.cov[(1, 0)]);
        self.c_xp * c12
    }

    /// Tr[rho L^2] from Gaussian moment rules; equals the phase information
    /// when the coefficients come from [`sld_phase`] on the same state.
    pub fn mean_square(&self, s: &GaussianState) -> f64 {
        let a = s.cov[(0, 0)];
        let b = s.cov[(1, 1)];
        let c12 = 0.5 * (s.cov[(0, 1)] + s.cov[(1, 0)]);
        // <(x~ o p~)^2> = A B + c12^2 + 1/4 for a Gaussian state; odd moments
        // of centered quadratures vanish.
        self.c_xp * self.c_xp * (a * b + c12 * c12 + 0.25)
            + self.c_x * self.c_x * a
            + self.c_p * self.c_p * b
            + 2.0 * self.c_x * self.c_p * c12
    }
}

/// SLD coefficients in the diagonal (phase-reference) frame:
/// c_xp = 4 (B - A) / (1 + 4 A B), c_x = p / A, c_p = -x / B.
///
/// Errors if the covariance is not diagonal; rotate the state into the
/// reference frame first.
pub fn sld_phase(s: &GaussianState) -> Result<SldForm> {
    validate_physical(s)?;
    let a = s.cov[(0, 0)];
    let b = s.cov[(1, 1)];
    let c = 0.5 * (s.cov[(0, 1)] + s.cov[(1, 0)]);
    if c.abs() > DIAGONAL_TOL * a.max(b) {
        return Err(Error::InvalidState(format!(
            "covariance must be diagonal in the phase-reference frame (off-diagonal {c:.3e})"
        )));
    }
    Ok(SldForm {
        c_xp: 4.0 * (b - a) / (1.0 + 4.0 * a * b),
        c_x: s.mean[1] / a,
        c_p: -s.mean[0] / b,
    })
}

/// Temperature information from phase information: Q_T = alpha^2 Q_phi.
pub fn qfi_temperature(q_phi: f64, alpha: f64) -> f64 {
    alpha * alpha * q_phi
}

/// Quantum Cramer-Rao bound for `k` independent probes: 1 / sqrt(k Q).
pub fn cramer_rao(q: f64, k: f64) -> Result<f64> {
    if !(k.is_finite() && k >= 1.0) {
        return Err(Error::InvalidParameter {
            name: "k",
            reason: "probe count must be >= 1",
            value: k,
        });
    }
    if !q.is_finite() || q < 0.0 {
        return Err(Error::InvalidParameter {
            name: "q",
            reason: "information must be finite and >= 0",
            value: q,
        });
    }
    if q == 0.0 {
        return Err(Error::NoInformation(
            "quantum Fisher information is zero; the probe carries no temperature signal".into(),
        ));
    }
    Ok(1.0 / (k * q).sqrt())
}

/// Classical error propagation delta_theta = delta_A / |dA/d theta|.
pub fn error_propagation(da_dtheta: f64, delta_a: f64) -> Result<f64> {
    if !delta_a.is_finite() || delta_a < 0.0 {
        return Err(Error::InvalidParameter {
            name: "delta_a",
            reason: "observable noise must be finite and >= 0",
            value: delta_a,
        });
    }
    if da_dtheta == 0.0 || !da_dtheta.is_finite() {
        return Err(Error::Insensitive(
            "observable does not respond to the parameter (zero derivative)".into(),
        ));
    }
    Ok(delta_a / da_dtheta.abs())
}

fn check_bound_args(eta: f64, n_res: f64, nbar: f64, alpha: f64) -> Result<()> {
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(Error::InvalidParameter {
            name: "eta",
            reason: "transmissivity must lie in (0, 1]",
            value: eta,
        });
    }
    if !n_res.is_finite() || n_res < 0.0 {
        return Err(Error::InvalidParameter {
            name: "n_res",
            reason: "reservoir occupation must be finite and >= 0",
            value: n_res,
        });
    }
    if !nbar.is_finite() || nbar <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "nbar",
            reason: "probe energy must be finite and > 0",
            value: nbar,
        });
    }
    if alpha == 0.0 || !alpha.is_finite() {
        return Err(Error::InvalidParameter {
            name: "alpha",
            reason: "thermo-optic coupling must be finite and nonzero",
            value: alpha,
        });
    }
    Ok(())
}

/// Large-energy statistical bound for a squeezed-vacuum probe:
/// (1/alpha) sqrt((1 - eta)(1 + 2 n_res) / (4 eta nbar)).
///
/// At eta = 1 the leading term vanishes; 0 is returned and callers should
/// surface [`BoundWarning::LosslessLimit`].
pub fn asymptotic_bound_squeezed(eta: f64, n_res: f64, nbar: f64, alpha: f64) -> Result<f64> {
    check_bound_args(eta, n_res, nbar, alpha)?;
    if eta == 1.0 {
        return Ok(0.0);
    }
    Ok(((1.0 - eta) * (1.0 + 2.0 * n_res) / (4.0 * eta * nbar)).sqrt() / alpha.abs())
}

/// Large-energy statistical bound for a coherent probe:
/// (1/alpha) sqrt((1 + 2 (1 - eta) n_res) / (4 eta nbar)).
pub fn asymptotic_bound_coherent(eta: f64, n_res: f64, nbar: f64, alpha: f64) -> Result<f64> {
    check_bound_args(eta, n_res, nbar, alpha)?;
    Ok(((1.0 + 2.0 * (1.0 - eta) * n_res) / (4.0 * eta * nbar)).sqrt() / alpha.abs())
}

/// Temperature rise of the sample from absorbed probe energy:
/// (1 - eta) hbar omega nbar / (mass specific_heat).
pub fn heating_disturbance(
    pc: &PhysicalConstants,
    nbar: f64,
    eta: f64,
    omega: f64,
    mass: f64,
    specific_heat: f64,
) -> Result<f64> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::InvalidParameter {
            name: "eta",
            reason: "transmissivity must lie in [0, 1]",
            value: eta,
        });
    }
    for (name, v) in [("nbar", nbar), ("omega", omega)] {
        if !v.is_finite() || v < 0.0 {
            return Err(Error::InvalidParameter {
                name,
                reason: "must be finite and >= 0",
                value: v,
            });
        }
    }
    for (name, v) in [("mass", mass), ("specific_heat", specific_heat)] {
        if !v.is_finite() || v <= 0.0 {
            return Err(Error::InvalidParameter {
                name,
                reason: "must be finite and > 0",
                value: v,
            });
        }
    }
    Ok((1.0 - eta) * pc.hbar * omega * nbar / (mass * specific_heat))
}

/// Which estimation strategy a [`PrecisionBound`] refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    /// Cramer-Rao bound of the numerically optimized Gaussian probe.
    ExactQfi,
    /// Large-energy squeezed-vacuum formula.
    AsymptoticSqueezed,
    /// Large-energy coherent formula.
    AsymptoticCoherent,
    /// Blackbody radiation benchmark.
    Pyrometer,
}

/// Strategies available to [`total_bound`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AsymptoticKind {
    Squeezed,
    Coherent,
}

/// Non-fatal conditions attached to a bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundWarning {
    /// eta = 1: the asymptotic statistical term degenerates to zero and the
    /// quoted bound is heating-only.
    LosslessLimit,
}

/// A temperature resolution bound split into its statistical and
/// back-action parts; delta_t = statistical + heating.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrecisionBound {
    pub delta_t: f64,
    pub statistical: f64,
    pub heating: f64,
    pub kind: BoundKind,
    pub warning: Option<BoundWarning>,
}

/// Statistical bound plus sample heating for one of the asymptotic probes.
#[allow(clippy::too_many_arguments)]
pub fn total_bound(
    pc: &PhysicalConstants,
    kind: AsymptoticKind,
    eta: f64,
    n_res: f64,
    nbar: f64,
    alpha: f64,
    omega: f64,
    mass: f64,
    specific_heat: f64,
) -> Result<PrecisionBound> {
    let statistical = match kind {
        AsymptoticKind::Squeezed => asymptotic_bound_squeezed(eta, n_res, nbar, alpha)?,
        AsymptoticKind::Coherent => asymptotic_bound_coherent(eta, n_res, nbar, alpha)?,
    };
    let heating = heating_disturbance(pc, nbar, eta, omega, mass, specific_heat)?;
    let warning = (kind == AsymptoticKind::Squeezed && eta == 1.0)
        .then_some(BoundWarning::LosslessLimit);
    Ok(PrecisionBound {
        delta_t: statistical + heating,
        statistical,
        heating,
        kind: match kind {
            AsymptoticKind::Squeezed => BoundKind::AsymptoticSqueezed,
            AsymptoticKind::Coherent => BoundKind::AsymptoticCoherent,
        },
        warning,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{apply_channel, ChannelParams};
    use crate::gaussian::{make_gaussian_state, InputStateParams};
    use approx::assert_relative_eq;
    use nalgebra::{Matrix2, Vector2};
    use proptest::prelude::*;

    fn state(x0: f64, p0: f64, n0: f64, r0: f64) -> GaussianState {
        make_gaussian_state(&InputStateParams::new(x0, p0, n0, r0).unwrap()).unwrap()
    }

    #[test]
    fn lossless_coherent_information_is_four_nbar() {
        for &nbar in &[0.5, 1.0, 5.0] {
            let s = make_gaussian_state(&InputStateParams::coherent(nbar)).unwrap();
            assert_relative_eq!(qfi_phase(&s).unwrap(), 4.0 * nbar, max_relative = 1e-13);
        }
    }

    #[test]
    fn lossless_squeezed_vacuum_information() {
        // 2 sinh^2(2 r) = 8 nbar (nbar + 1)
        for &nbar in &[0.5, 1.0, 5.0] {
            let s = make_gaussian_state(&InputStateParams::squeezed_vacuum(nbar)).unwrap();
            assert_relative_eq!(
                qfi_phase(&s).unwrap(),
                8.0 * nbar * (nbar + 1.0),
                max_relative = 1e-12
            );
        }
        let s = state(0.0, 0.0, 0.0, 1.0);
        assert_relative_eq!(qfi_phase(&s).unwrap(), 26.30823283601649, max_relative = 1e-12);
    }

    #[test]
    fn vacuum_carries_no_phase_information() {
        let q = qfi_phase(&GaussianState::vacuum()).unwrap();
        assert_eq!(q, 0.0);
        assert!(matches!(cramer_rao(q, 1.0), Err(Error::NoInformation(_))));
    }

    #[test]
    fn information_invariant_under_rotated_input() {
        let s = state(1.2, -0.7, 0.3, 0.9);
        let q0 = qfi_phase(&s).unwrap();
        for &theta in &[0.3, 1.0, 2.2, -0.8] {
            let rotated = apply_channel(&s, &ChannelParams { phi: theta, eta: 1.0, n_res: 0.0 }).unwrap();
            assert!(rotated.cov[(0, 1)].abs() > 1e-3, "rotation should mix quadratures");
            assert_relative_eq!(qfi_phase(&rotated).unwrap(), q0, max_relative = 1e-10);
        }
    }

    #[test]
    fn sld_of_lossless_coherent_state() {
        let x = 2.0f64;
        let s = state(x, 0.0, 0.0, 0.0);
        let l = sld_phase(&s).unwrap();
        assert_eq!(l.c_xp, 0.0);
        assert_eq!(l.c_x, 0.0);
        assert_relative_eq!(l.c_p, -2.0 * x, max_relative = 1e-15);
    }

    #[test]
    fn sld_of_unit_squeezed_vacuum() {
        let s = state(0.0, 0.0, 0.0, 1.0);
        let l = sld_phase(&s).unwrap();
        assert_relative_eq!(l.c_xp, -2.0 * (2.0f64).sinh(), max_relative = 1e-13);
        assert_eq!(l.c_x, 0.0);
        assert_eq!(l.c_p, 0.0);
    }

    #[test]
    fn sld_requires_diagonal_covariance() {
        let s = GaussianState {
            mean: Vector2::zeros(),
            cov: Matrix2::new(1.0, 0.3, 0.3, 1.0),
        };
        assert!(sld_phase(&s).is_err());
    }

    #[test]
    fn balanced_variances_kill_the_quadratic_coefficient() {
        let s = state(1.0, 0.5, 0.7, 0.0);
        let l = sld_phase(&s).unwrap();
        assert_eq!(l.c_xp, 0.0);
    }

    #[test]
    fn cramer_rao_scalings() {
        assert_relative_eq!(cramer_rao(25.0, 1.0).unwrap(), 0.2, max_relative = 1e-15);
        assert_relative_eq!(
            cramer_rao(25.0, 4.0).unwrap(),
            0.1,
            max_relative = 1e-15
        );
        assert!(cramer_rao(1.0, 0.5).is_err());
    }

    #[test]
    fn error_propagation_edge_cases() {
        assert_relative_eq!(error_propagation(2.0, 3.0).unwrap(), 1.5, max_relative = 1e-15);
        assert!(matches!(error_propagation(0.0, 1.0), Err(Error::Insensitive(_))));
        assert!(error_propagation(1.0, -1.0).is_err());
    }

    #[test]
    fn squeezed_and_coherent_bounds_coincide_up_to_loss_factor_at_cold_reservoir() {
        let (eta, nbar, alpha) = (0.83, 1e9, 1.5);
        let sq = asymptotic_bound_squeezed(eta, 0.0, nbar, alpha).unwrap();
        let coh = asymptotic_bound_coherent(eta, 0.0, nbar, alpha).unwrap();
        assert_relative_eq!(sq, coh * (1.0 - eta).sqrt(), max_relative = 1e-13);
    }

    #[test]
    fn lossless_limit_of_squeezed_bound_is_flagged() {
        assert_eq!(asymptotic_bound_squeezed(1.0, 0.0, 1e6, 1.5).unwrap(), 0.0);
        let pc = PhysicalConstants::codata();
        let b = total_bound(&pc, AsymptoticKind::Squeezed, 1.0, 0.0, 1e6, 1.5, 1.77e15, 0.003, 688.0)
            .unwrap();
        assert_eq!(b.warning, Some(BoundWarning::LosslessLimit));
        assert_eq!(b.statistical, 0.0);
        assert_eq!(b.delta_t, b.heating);
    }

    #[test]
    fn heating_matches_crystal_benchmark() {
        let pc = PhysicalConstants::codata();
        let eta = (-0.0002f64).exp();
        let omega = 2.0 * std::f64::consts::PI * pc.c / 1.064e-6;
        let d = heating_disturbance(&pc, 1e14, eta, omega, 0.003, 688.0).unwrap();
        assert_relative_eq!(d, 1.8088892523873377e-9, max_relative = 1e-12);
    }

    #[test]
    fn statistical_term_approaches_exact_bound_from_below() {
        // The exact squeezed-vacuum Cramer-Rao bound exceeds the asymptotic
        // formula by a positive remainder that shrinks like 1/nbar.
        let (eta, n_res, alpha) = (0.8, 0.0, 1.0);
        let mut last_dev = f64::INFINITY;
        let mut scaled = Vec::new();
        for &nbar in &[1e4, 1e6, 1e8] {
            let s = make_gaussian_state(&InputStateParams::squeezed_vacuum(nbar)).unwrap();
            let out = apply_channel(&s, &ChannelParams { phi: 0.0, eta, n_res }).unwrap();
            let exact = cramer_rao(qfi_temperature(qfi_phase(&out).unwrap(), alpha), 1.0).unwrap();
            let asym = asymptotic_bound_squeezed(eta, n_res, nbar, alpha).unwrap();
            assert!(exact >= asym, "exact bound must dominate the asymptote");
            let dev = exact / asym - 1.0;
            assert!(dev < last_dev, "remainder must shrink with energy");
            last_dev = dev;
            scaled.push(dev * nbar);
        }
        // O(1/nbar) remainder: dev * nbar roughly constant.
        assert!(scaled[2] / scaled[0] > 0.5 && scaled[2] / scaled[0] < 2.0);
        assert!(last_dev < 1e-6);
    }

    proptest! {
        #[test]
        fn sld_moments_reproduce_information(
            x0 in -3.0f64..3.0, p0 in -3.0f64..3.0,
            n0 in 0.0f64..2.0, r0 in -1.5f64..1.5,
            eta in 0.05f64..1.0, n_res in 0.0f64..2.0,
        ) {
            let s = state(x0, p0, n0, r0);
            let out = apply_channel(&s, &ChannelParams { phi: 0.0, eta, n_res }).unwrap();
            let q = qfi_phase(&out).unwrap();
            let l = sld_phase(&out).unwrap();
            prop_assert!(l.mean(&out).abs() <= 1e-12);
            prop_assert!((l.mean_square(&out) - q).abs() <= 1e-10 * q.max(1.0));
        }

        #[test]
        fn information_monotone_in_loss_and_noise(
            n0 in 0.0f64..1.0, r0 in 0.2f64..1.5,
            x0 in 0.0f64..2.0,
        ) {
            let s = state(x0, 0.0, n0, r0);
            let q = |eta: f64, n_res: f64| {
                let out = apply_channel(&s, &ChannelParams { phi: 0.0, eta, n_res }).unwrap();
                qfi_phase(&out).unwrap()
            };
            // more transmission -> more information
            prop_assert!(q(0.9, 0.5) >= q(0.6, 0.5) - 1e-12);
            // hotter reservoir -> less information
            prop_assert!(q(0.7, 0.1) >= q(0.7, 1.0) - 1e-12);
        }

        #[test]
        fn temperature_information_scales_with_coupling_squared(
            q in 0.1f64..1e6, alpha in 0.1f64..10.0,
        ) {
            let qt = qfi_temperature(q, alpha);
            prop_assert!((qt - alpha * alpha * q).abs() <= 1e-12 * qt);
        }
    }
}
