//! Drude dielectric model and material presets.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Drude metal ε(ω) = ε∞ − ωp²/(ω² + iΓpω) embedded in a background ε_b.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DrudeMaterial {
    /// High-frequency permittivity ε∞.
    pub eps_inf: f64,
    /// Plasma frequency ωp (rad/s).
    pub omega_p: f64,
    /// Electron collision rate Γp (rad/s).
    pub gamma_p: f64,
    /// Background (host) relative permittivity ε_b.
    pub eps_background: f64,
}

impl DrudeMaterial {
    /// Drude parameters mimicking gold in the visible range.
    pub fn gold() -> Self {
        Self { eps_inf: 1.0, omega_p: 1.26e16, gamma_p: 1.41e14, eps_background: 1.0 }
    }

    /// Drude parameters mimicking silver in the visible range.
    pub fn silver() -> Self {
        Self { eps_inf: 6.0, omega_p: 1.20e16, gamma_p: 7.74e13, eps_background: 1.0 }
    }

    /// Looks up a preset by name.
    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "gold-drude" => Some(Self::gold()),
            "silver-drude" => Some(Self::silver()),
            _ => None,
        }
    }

    /// Names of the built-in presets.
    pub fn preset_names() -> &'static [&'static str] {
        &["gold-drude", "silver-drude"]
    }

    pub fn validate(&self) -> Result<()> {
        if self.eps_inf < 1.0 || self.eps_background < 1.0 {
            return Err(Error::InvalidMaterial(format!(
                "eps_inf = {} and eps_background = {} must both be >= 1",
                self.eps_inf, self.eps_background
            )));
        }
        if self.omega_p <= 0.0 || self.gamma_p <= 0.0 {
            return Err(Error::InvalidMaterial(
                "omega_p and gamma_p must be positive".into(),
            ));
        }
        Ok(())
    }

    /// Complex relative permittivity of the metal at `omega` (rad/s).
    pub fn epsilon(&self, omega: f64) -> Result<Complex64> {
        if omega <= 0.0 {
            return Err(Error::NonPositiveFrequency(omega));
        }
        let denom = Complex64::new(omega * omega, self.gamma_p * omega);
        Ok(Complex64::new(self.eps_inf, 0.0) - self.omega_p * self.omega_p / denom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn presets_store_caption_values() {
        let au = DrudeMaterial::gold();
        assert_eq!((au.eps_inf, au.omega_p, au.gamma_p), (1.0, 1.26e16, 1.41e14));
        let ag = DrudeMaterial::silver();
        assert_eq!((ag.eps_inf, ag.omega_p, ag.gamma_p), (6.0, 1.20e16, 7.74e13));
        assert!(DrudeMaterial::preset("silver-drude").is_some());
        assert!(DrudeMaterial::preset("copper").is_none());
    }

    #[test]
    fn epsilon_high_frequency_limit() {
        let au = DrudeMaterial::gold();
        let eps = au.epsilon(1e20).unwrap();
        assert_relative_eq!(eps.re, 1.0, max_relative = 1e-6);
    }

    #[test]
    fn epsilon_no_carriers() {
        let m = DrudeMaterial { omega_p: 1e-30, ..DrudeMaterial::silver() };
        let eps = m.epsilon(3e15).unwrap();
        assert_relative_eq!(eps.re, 6.0, max_relative = 1e-12);
    }

    #[test]
    fn epsilon_passivity() {
        let ag = DrudeMaterial::silver();
        for i in 1..60 {
            let w = 1e14 * i as f64;
            assert!(ag.epsilon(w).unwrap().im > 0.0);
        }
    }

    #[test]
    fn epsilon_rejects_nonpositive_frequency() {
        assert!(DrudeMaterial::silver().epsilon(0.0).is_err());
        assert!(DrudeMaterial::silver().epsilon(-1.0).is_err());
    }
}
