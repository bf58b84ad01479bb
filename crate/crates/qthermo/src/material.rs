//! Optical material data and the key=value config format.
//!
//! Values are stored in SI; config files may attach a unit suffix from a
//! small whitelist (cm, g, cm^-1, nm) which is converted on load.

use std::fmt::Write as _;
use std::path::Path;

use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};

/// Unit suffixes accepted in config files and CLI quantities:
/// (suffix, SI unit, factor to SI).
pub const UNIT_WHITELIST: &[(&str, &str, f64)] = &[
    ("cm", "m", 1e-2),
    ("g", "kg", 1e-3),
    ("cm^-1", "m^-1", 1e2),
    ("nm", "m", 1e-9),
];

/// Transparent solid probed by the interferometer.
#[derive(Debug, Clone, PartialEq)]
pub struct Material {
    pub name: Option<String>,
    /// Refractive index at the probe wavelength.
    pub n: f64,
    /// Thermo-optic coefficient dn/dT, 1/K.
    pub n_prime: f64,
    /// Linear thermal expansion coefficient, 1/K.
    pub alpha_t: f64,
    /// Optical path length, m.
    pub length: f64,
    /// Sample mass, kg.
    pub mass: f64,
    /// Specific heat capacity, J/(kg K).
    pub specific_heat: f64,
    /// Absorption coefficient, 1/m.
    pub alpha_abs: f64,
}

impl Material {
    /// Periodically poled KTP crystal, 1 cm x 3 g, at 1064 nm.
    pub fn ppktp() -> Self {
        Self {
            name: Some("ppktp".into()),
            n: 1.74,
            n_prime: 0.6e-5,
            alpha_t: 1.1e-5,
            length: 0.01,
            mass: 0.003,
            specific_heat: 688.0,
            alpha_abs: 0.02,
        }
    }

    /// Look up a built-in material by name.
    pub fn builtin(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "ppktp" => Some(Self::ppktp()),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.n.is_finite() || self.n < 1.0 {
            return Err(Error::Validation(format!(
                "refractive index n = {} must be >= 1",
                self.n
            )));
        }
        for (key, v) in [("n_prime", self.n_prime), ("alpha_T", self.alpha_t)] {
            if !v.is_finite() {
                return Err(Error::Validation(format!("{key} must be finite")));
            }
        }
        for (key, v) in [
            ("length", self.length),
            ("mass", self.mass),
            ("specific_heat", self.specific_heat),
        ] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::Validation(format!("{key} = {v} must be > 0")));
            }
        }
        if !self.alpha_abs.is_finite() || self.alpha_abs < 0.0 {
            return Err(Error::Validation(format!(
                "alpha_abs = {} must be >= 0",
                self.alpha_abs
            )));
        }
        Ok(())
    }

    /// Thermo-optic phase coupling d phi / dT = (omega L / c)(n alpha_T + n').
    pub fn phase_coupling(&self, pc: &PhysicalConstants, omega: f64) -> Result<f64> {
        if !omega.is_finite() || omega <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "omega",
                reason: "frequency must be finite and > 0",
                value: omega,
            });
        }
        Ok(omega * self.length / pc.c * (self.n * self.alpha_t + self.n_prime))
    }

    /// Single-pass power transmissivity e^{-L alpha_abs}.
    pub fn transmissivity(&self) -> f64 {
        (-self.length * self.alpha_abs).exp()
    }

    /// Parse the key=value config format. Unknown, repeated or missing keys
    /// are reported by name.
    pub fn parse_config(text: &str) -> Result<Self> {
        let mut name: Option<String> = None;
        let mut fields: [(& str, Option<f64>); 7] = [
            ("n", None),
            ("n_prime", None),
            ("alpha_T", None),
            ("length", None),
            ("mass", None),
            ("specific_heat", None),
            ("alpha_abs", None),
        ];
        for (lineno, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(i) => &raw[..i],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Parse {
                    field: format!("line {}", lineno + 1),
                    reason: "expected `key = value`".into(),
                });
            };
            let key = key.trim();
            let value = value.trim();
            if key == "name" {
                if name.is_some() {
                    return Err(Error::Parse {
                        field: "name".into(),
                        reason: "duplicate key".into(),
                    });
                }
                name = Some(value.to_string());
                continue;
            }
            let Some(slot) = fields.iter_mut().find(|(k, _)| *k == key) else {
                return Err(Error::Parse {
                    field: key.to_string(),
                    reason: "unknown key".into(),
                });
            };
            if slot.1.is_some() {
                return Err(Error::Parse {
                    field: key.to_string(),
                    reason: "duplicate key".into(),
                });
            }
            let dim = match key {
                "length" => Dimension::Length,
                "mass" => Dimension::Mass,
                "alpha_abs" => Dimension::InverseLength,
                _ => Dimension::Bare,
            };
            slot.1 = Some(parse_quantity(value, dim).map_err(|reason| Error::Parse {
                field: key.to_string(),
                reason,
            })?);
        }
        let get = |key: &str| -> Result<f64> {
            fields
                .iter()
                .find(|(k, _)| *k == key)
                .and_then(|(_, v)| *v)
                .ok_or_else(|| Error::Parse {
                    field: key.to_string(),
                    reason: "missing required key".into(),
                })
        };
        let m = Material {
            n: get("n")?,
            n_prime: get("n_prime")?,
            alpha_t: get("alpha_T")?,
            length: get("length")?,
            mass: get("mass")?,
            specific_heat: get("specific_heat")?,
            alpha_abs: get("alpha_abs")?,
            name,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse_config(&text)
    }

    /// Render as a config string in SI units; parses back field-for-field.
    pub fn to_config_string(&self) -> String {
        let mut s = String::new();
        if let Some(name) = &self.name {
            let _ = writeln!(s, "name = {name}");
        }
        let _ = writeln!(s, "n = {:.17e}", self.n);
        let _ = writeln!(s, "n_prime = {:.17e}", self.n_prime);
        let _ = writeln!(s, "alpha_T = {:.17e}", self.alpha_t);
        let _ = writeln!(s, "length = {:.17e}", self.length);
        let _ = writeln!(s, "mass = {:.17e}", self.mass);
        let _ = writeln!(s, "specific_heat = {:.17e}", self.specific_heat);
        let _ = writeln!(s, "alpha_abs = {:.17e}", self.alpha_abs);
        s
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        self.validate()?;
        std::fs::write(path, self.to_config_string())?;
        Ok(())
    }
}

/// Dimension a config value is expected to carry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    /// Dimensionless or already-SI scalar; no suffix allowed.
    Bare,
    Length,
    Mass,
    InverseLength,
    Wavelength,
}

/// Parse a number with an optional whitelisted unit suffix into SI.
pub fn parse_quantity(value: &str, dim: Dimension) -> std::result::Result<f64, String> {
    let value = value.trim();
    let (num_str, unit) = match value.split_once(char::is_whitespace) {
        Some((n, u)) => (n.trim(), Some(u.trim())),
        None => {
            // allow a glued suffix like `1cm`
            let split = value
                .char_indices()
                .find(|(_, c)| c.is_ascii_alphabetic() && *c != 'e' && *c != 'E')
                .map(|(i, _)| i);
            match split {
                Some(i) if i > 0 => (&value[..i], Some(value[i..].trim())),
                _ => (value, None),
            }
        }
    };
    let num: f64 = num_str
        .parse()
        .map_err(|_| format!("`{num_str}` is not a number"))?;
    let Some(unit) = unit.filter(|u| !u.is_empty()) else {
        return Ok(num);
    };
    let Some(&(_, _, factor)) = UNIT_WHITELIST.iter().find(|(u, _, _)| *u == unit) else {
        return Err(format!("unknown unit `{unit}`"));
    };
    let allowed = matches!(
        (dim, unit),
        (Dimension::Length, "cm")
            | (Dimension::Mass, "g")
            | (Dimension::InverseLength, "cm^-1")
            | (Dimension::Wavelength, "nm")
    );
    if !allowed {
        return Err(format!("unit `{unit}` not valid here"));
    }
    Ok(num * factor)
}

/// Angular frequency of light at vacuum wavelength `lambda` (m).
pub fn omega_from_wavelength(pc: &PhysicalConstants, lambda: f64) -> Result<f64> {
    if !lambda.is_finite() || lambda <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "lambda",
            reason: "wavelength must be finite and > 0",
            value: lambda,
        });
    }
    Ok(2.0 * std::f64::consts::PI * pc.c / lambda)
}
