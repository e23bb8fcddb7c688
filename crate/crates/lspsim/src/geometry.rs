//! Sphere geometry and emitter ensembles.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Metal nanosphere centered at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphereGeometry {
    /// Radius R (m).
    pub radius: f64,
}

/// Dipole orientation expressed in the local spherical frame of the emitter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Orientation {
    /// Along ê_r (perpendicular to the sphere surface).
    Radial,
    /// Along ê_θ (tangent to the sphere, in the meridian plane).
    Polar,
    /// Along ê_φ (tangent to the sphere, along the circle of latitude).
    Azimuthal,
}

impl Orientation {
    /// Unit vector components (a_r, a_θ, a_φ) in the local spherical frame.
    pub fn components(self) -> [f64; 3] {
        match self {
            Orientation::Radial => [1.0, 0.0, 0.0],
            Orientation::Polar => [0.0, 1.0, 0.0],
            Orientation::Azimuthal => [0.0, 0.0, 1.0],
        }
    }
}

/// Point-dipole emitter outside the sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Emitter {
    /// Radial coordinate (m), measured from the sphere center.
    pub r: f64,
    /// Polar angle θ (rad).
    pub theta: f64,
    /// Azimuthal angle φ (rad).
    pub phi: f64,
    /// Dipole vector (C·m) in the local spherical frame (d_r, d_θ, d_φ).
    pub dipole: [f64; 3],
}

impl Emitter {
    pub fn new(r: f64, theta: f64, phi: f64, dipole_moment: f64, orientation: Orientation) -> Self {
        let a = orientation.components();
        Self {
            r,
            theta,
            phi,
            dipole: [dipole_moment * a[0], dipole_moment * a[1], dipole_moment * a[2]],
        }
    }

    pub fn dipole_norm(&self) -> f64 {
        self.dipole.iter().map(|d| d * d).sum::<f64>().sqrt()
    }
}

/// N_e identical emitters sharing a transition frequency and free-space rate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmitterEnsemble {
    pub emitters: Vec<Emitter>,
    /// Transition angular frequency ω0 (rad/s).
    pub omega0: f64,
    /// Free-space decay rate γ0 (rad/s).
    pub gamma0: f64,
}

impl EmitterEnsemble {
    /// Ring of `count` emitters homogeneously spread on the equator at radius
    /// R + h, all with the same dipole moment and orientation.
    pub fn ring(
        count: usize,
        geometry: &SphereGeometry,
        height: f64,
        dipole_moment: f64,
        orientation: Orientation,
        omega0: f64,
        gamma0: f64,
    ) -> Self {
        let r = geometry.radius + height;
        let emitters = (0..count)
            .map(|j| {
                let phi = 2.0 * PI * j as f64 / count as f64;
                Emitter::new(r, PI / 2.0, phi, dipole_moment, orientation)
            })
            .collect();
        Self { emitters, omega0, gamma0 }
    }

    /// `count` coincident emitters at a single equatorial point (ideal
    /// configuration).
    pub fn coincident(
        count: usize,
        geometry: &SphereGeometry,
        height: f64,
        dipole_moment: f64,
        orientation: Orientation,
        omega0: f64,
        gamma0: f64,
    ) -> Self {
        let r = geometry.radius + height;
        let emitters = (0..count)
            .map(|_| Emitter::new(r, PI / 2.0, 0.0, dipole_moment, orientation))
            .collect();
        Self { emitters, omega0, gamma0 }
    }

    pub fn len(&self) -> usize {
        self.emitters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.emitters.is_empty()
    }

    pub fn validate(&self, geometry: &SphereGeometry) -> Result<()> {
        for e in &self.emitters {
            if e.r <= geometry.radius {
                return Err(Error::EmitterInsideSphere { r: e.r, radius: geometry.radius });
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn ring_positions() {
        let geom = SphereGeometry { radius: 8e-9 };
        let ens = EmitterEnsemble::ring(4, &geom, 2e-9, 1e-29, Orientation::Polar, 4e15, 2e9);
        assert_eq!(ens.len(), 4);
        for (j, e) in ens.emitters.iter().enumerate() {
            assert_relative_eq!(e.r, 10e-9, max_relative = 1e-12);
            assert_relative_eq!(e.theta, PI / 2.0, max_relative = 1e-12);
            assert_relative_eq!(e.phi, PI / 2.0 * j as f64, max_relative = 1e-12);
        }
        assert!(ens.validate(&geom).is_ok());
    }

    #[test]
    fn emitter_inside_sphere_rejected() {
        let geom = SphereGeometry { radius: 8e-9 };
        let ens = EmitterEnsemble::ring(1, &geom, -1e-9, 1e-29, Orientation::Radial, 4e15, 2e9);
        assert!(ens.validate(&geom).is_err());
    }
}
