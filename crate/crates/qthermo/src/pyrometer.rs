//! Radiation-flux thermometry benchmark.
//!
//! An ideal detector of area S integrating blackbody flux for a time dt
//! resolves temperature to sqrt(k_B / (4 sigma S dt T)). The same number is
//! reached two independent ways: shot noise of the integrated flux, and the
//! spectral Fisher information of thermal photon counting; both reduce to
//! frequency integrals evaluated here by adaptive quadrature.

use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};

/// Upper limit of the dimensionless spectral variable x = hbar omega / k_B T.
/// The integrands decay like x^4 e^{-x}; beyond 100 the tail is < 1e-36 of
/// the total.
const SPECTRAL_CUTOFF: f64 = 100.0;
/// Relative accuracy target of the spectral quadrature.
const QUAD_REL_TOL: f64 = 1e-9;

/// Detector parameters, SI units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PyrometerConfig {
    /// Collection area, m^2.
    pub area: f64,
    /// Integration time, s.
    pub integration_time: f64,
    /// Sample temperature, K.
    pub temperature: f64,
}

impl PyrometerConfig {
    pub fn new(area: f64, integration_time: f64, temperature: f64) -> Result<Self> {
        for (name, v) in [
            ("area", area),
            ("integration_time", integration_time),
            ("temperature", temperature),
        ] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::InvalidParameter {
                    name,
                    reason: "must be finite and > 0",
                    value: v,
                });
            }
        }
        Ok(Self { area, integration_time, temperature })
    }
}

/// Radiated power per unit area, sigma T^4.
pub fn stefan_boltzmann_flux(pc: &PhysicalConstants, temperature: f64) -> Result<f64> {
    if !temperature.is_finite() || temperature < 0.0 {
        return Err(Error::InvalidParameter {
            name: "temperature",
            reason: "must be finite and >= 0",
            value: temperature,
        });
    }
    Ok(pc.sigma * temperature.powi(4))
}

/// Shot-noise spectral density of the flux, sqrt(4 k_B sigma T^5).
pub fn flux_noise(pc: &PhysicalConstants, temperature: f64) -> Result<f64> {
    if !temperature.is_finite() || temperature <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "temperature",
            reason: "must be finite and > 0",
            value: temperature,
        });
    }
    Ok((4.0 * pc.k_b * pc.sigma * temperature.powi(5)).sqrt())
}

/// Photon statistics of a single thermal mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalPhotonStats {
    /// Mean occupation.
    pub occupation: f64,
    /// Number variance N (N + 1).
    pub variance: f64,
    /// Temperature derivative of the occupation.
    pub d_occupation_dt: f64,
}

impl ThermalPhotonStats {
    /// Statistics at frequency `omega` and temperature `t`.
    pub fn at(pc: &PhysicalConstants, omega: f64, t: f64) -> Result<Self> {
        let n = crate::channel::thermal_occupation(pc, omega, t)?;
        if t <= 0.0 {
            return Ok(Self { occupation: 0.0, variance: 0.0, d_occupation_dt: 0.0 });
        }
        let variance = n * (n + 1.0);
        let d_occupation_dt = pc.hbar * omega / (pc.k_b * t * t) * variance;
        Ok(Self { occupation: n, variance, d_occupation_dt })
    }
}

/// Probability of counting `n` photons in a thermal mode of mean `occupation`.
pub fn thermal_pmf(n: u64, occupation: f64) -> Result<f64> {
    if !occupation.is_finite() || occupation < 0.0 {
        return Err(Error::InvalidParameter {
            name: "occupation",
            reason: "must be finite and >= 0",
            value: occupation,
        });
    }
    if occupation == 0.0 {
        return Ok(if n == 0 { 1.0 } else { 0.0 });
    }
    let nf = n as f64;
    Ok((nf * occupation.ln() - (nf + 1.0) * occupation.ln_1p()).exp())
}

/// Temperature Fisher information of photon counting at one frequency:
/// (hbar omega / k_B T^2)^2 N (N + 1).
pub fn fisher_single_frequency(pc: &PhysicalConstants, omega: f64, t: f64) -> Result<f64> {
    if !t.is_finite() || t <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "temperature",
            reason: "must be finite and > 0",
            value: t,
        });
    }
    let stats = ThermalPhotonStats::at(pc, omega, t)?;
    let c = pc.hbar * omega / (pc.k_b * t * t);
    Ok(c * c * stats.variance)
}

/// Free-space mode density omega^2 / (4 pi^2 c^2) per unit emitting area.
fn mode_density(pc: &PhysicalConstants, omega: f64) -> f64 {
    omega * omega / (4.0 * std::f64::consts::PI.powi(2) * pc.c * pc.c)
}

/// Flux noise recomputed from the spectral integral of (hbar omega dN)^2
/// over the mode density; agrees with [`flux_noise`].
pub fn flux_noise_quadrature(pc: &PhysicalConstants, t: f64) -> Result<f64> {
    if !t.is_finite() || t <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "temperature",
            reason: "must be finite and > 0",
            value: t,
        });
    }
    let omega_scale = pc.k_b * t / pc.hbar;
    let f = |x: f64| -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        let omega = x * omega_scale;
        let stats = ThermalPhotonStats::at(pc, omega, t).expect("positive arguments");
        let e = pc.hbar * omega;
        e * e * stats.variance * mode_density(pc, omega)
    };
    let integral = adaptive_simpson(&f, 0.0, SPECTRAL_CUTOFF, QUAD_REL_TOL)? * omega_scale;
    Ok(integral.sqrt())
}

/// Spectrally integrated temperature Fisher information per unit area and
/// time; closed form 4 sigma T / k_B.
pub fn fisher_total(pc: &PhysicalConstants, t: f64) -> Result<f64> {
    if !t.is_finite() || t <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "temperature",
            reason: "must be finite and > 0",
            value: t,
        });
    }
    let omega_scale = pc.k_b * t / pc.hbar;
    let f = |x: f64| -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        let omega = x * omega_scale;
        let fisher = fisher_single_frequency(pc, omega, t).expect("positive arguments");
        fisher * mode_density(pc, omega)
    };
    adaptive_simpson(&f, 0.0, SPECTRAL_CUTOFF, QUAD_REL_TOL).map(|v| v * omega_scale)
}

/// Temperature resolution of the ideal pyrometer,
/// sqrt(k_B / (4 sigma S dt T)).
pub fn pyrometer_precision(pc: &PhysicalConstants, cfg: &PyrometerConfig) -> Result<f64> {
    let cfg = PyrometerConfig::new(cfg.area, cfg.integration_time, cfg.temperature)?;
    Ok((pc.k_b / (4.0 * pc.sigma * cfg.area * cfg.integration_time * cfg.temperature)).sqrt())
}

/// Same bound through the Fisher route, 1 / sqrt(S dt F_T).
pub fn pyrometer_precision_fisher(pc: &PhysicalConstants, cfg: &PyrometerConfig) -> Result<f64> {
    let cfg = PyrometerConfig::new(cfg.area, cfg.integration_time, cfg.temperature)?;
    let f_t = fisher_total(pc, cfg.temperature)?;
    Ok(1.0 / (cfg.area * cfg.integration_time * f_t).sqrt())
}

// -- Adaptive quadrature --

fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
    h / 6.0 * (fa + 4.0 * fm + fb)
}

/// Adaptive Simpson integration with Richardson acceptance test.
///
/// The absolute tolerance is anchored to a 128-interval composite estimate;
/// a plain 3-point first guess can miss a narrow peak entirely and would
/// anchor the tolerance many orders of magnitude too low.
fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> Result<f64> {
    let panels = 128;
    let h = (b - a) / panels as f64;
    let mut scale = 0.0;
    for k in 0..panels {
        let x0 = a + k as f64 * h;
        scale += simpson(f(x0), f(x0 + 0.5 * h), f(x0 + h), h);
    }
    let abs_tol = rel_tol * scale.abs().max(f64::MIN_POSITIVE);
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = simpson(fa, fm, fb, b - a);
    let mut evals: usize = 2 * panels + 4;
    let v = simpson_recurse(f, a, b, fa, fm, fb, whole, abs_tol, 60, &mut evals)?;
    if !v.is_finite() {
        return Err(Error::Numeric("quadrature produced a non-finite result".into()));
    }
    Ok(v)
}

#[allow(clippy::too_many_arguments)]
fn simpson_recurse(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    abs_tol: f64,
    depth: u32,
    evals: &mut usize,
) -> Result<f64> {
    if depth == 0 || *evals > 2_000_000 {
        return Err(Error::Numeric(format!(
            "quadrature did not converge on [{a:.6e}, {b:.6e}]"
        )));
    }
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let (flm, frm) = (f(lm), f(rm));
    *evals += 2;
    let left = simpson(fa, flm, fm, m - a);
    let right = simpson(fm, frm, fb, b - m);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * abs_tol {
        return Ok(left + right + delta / 15.0);
    }
    let half_tol = 0.5 * abs_tol;
    Ok(
        simpson_recurse(f, a, m, fa, flm, fm, left, half_tol, depth - 1, evals)?
            + simpson_recurse(f, m, b, fm, frm, fb, right, half_tol, depth - 1, evals)?,
    )
}
