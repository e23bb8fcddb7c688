//! Lamb and dipole-dipole shifts: effective-model closed forms, the classical
//! Green-function term, and the quantum correction that bridges them.
//!
//! Sign convention: a shift is reported as the amount by which the emission
//! peak is pulled below the bare frequency, so the quasi-static limit is
//! positive while the quantum correction Δω_c comes out negative. The exact
//! pole decomposition of β_n(ω) makes effective = classical + correction an
//! algebraic identity at machine precision, for any background permittivity.

use num_complex::Complex64;

use crate::error::Result;
use crate::geometry::{Emitter, Orientation, SphereGeometry};
use crate::greens::{scaled_kernel, scaled_kernel_static};
use crate::material::DrudeMaterial;
use crate::modes::ModeSet;
use crate::units::{EPS0, HBAR};
use std::f64::consts::PI;

/// Lamb (or dipole-dipole) shift split into its three flavors (rad/s).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftResult {
    /// Effective-model closed form.
    pub effective: f64,
    /// Classical term Re K(ω0)/(ħε0).
    pub classical: f64,
    /// Δω_c = effective − classical.
    pub quantum_correction: f64,
    /// Quasi-static limit Δω(0), when requested.
    pub static_limit: Option<f64>,
}

/// Single-mode dispersive profile (Ω − ω0)/((ω0 − Ω)² + Γ²/4).
fn dispersive(omega0: f64, omega_n: f64, gamma_n: f64) -> f64 {
    let det = omega_n - omega0;
    det / (det * det + 0.25 * gamma_n * gamma_n)
}

/// Effective-model Lamb shift of emitter `j`:
/// Δω_jj = Σ_n g_n² (ω_n − ω0)/((ω0 − ω_n)² + Γ_n²/4).
pub fn lamb_shift_effective(set: &ModeSet, j: usize, omega0: f64) -> f64 {
    set.params
        .iter()
        .zip(&set.couplings)
        .map(|(mp, g)| g[j] * g[j] * dispersive(omega0, mp.omega_n, mp.gamma_n))
        .sum()
}

/// Effective-model dipole-dipole shift between emitters `i` and `j`:
/// Δω_ij = Σ_n g_n^(i) g_n^(j) μ_n^(ij) (ω_n − ω0)/((ω0 − ω_n)² + Γ_n²/4).
pub fn dipole_dipole_effective(set: &ModeSet, i: usize, j: usize, omega0: f64) -> f64 {
    set.params
        .iter()
        .enumerate()
        .map(|(idx, mp)| {
            let g = &set.couplings[idx];
            let mu = set.overlaps[idx][(i, j)];
            g[i] * g[j] * mu * dispersive(omega0, mp.omega_n, mp.gamma_n)
        })
        .sum()
}

/// Classical shift Re K_jj(ω0)/(ħε0), the driven-dipole (real Green tensor)
/// term.
pub fn lamb_shift_classical(
    material: &DrudeMaterial,
    geometry: &SphereGeometry,
    emitter: &Emitter,
    omega0: f64,
    nmax: usize,
) -> Result<f64> {
    Ok(scaled_kernel(material, geometry, emitter, emitter, omega0, nmax)?.re / (HBAR * EPS0))
}

/// Classical cross term Re K_ij(ω0)/(ħε0).
pub fn dipole_dipole_classical(
    material: &DrudeMaterial,
    geometry: &SphereGeometry,
    ei: &Emitter,
    ej: &Emitter,
    omega0: f64,
    nmax: usize,
) -> Result<f64> {
    Ok(scaled_kernel(material, geometry, ei, ej, omega0, nmax)?.re / (HBAR * EPS0))
}

/// Per-mode correction factor −[β_n(∞) + Re(R_n/(ω0 + ω_n + iΓ_n/2))]/R_n,
/// so that g² times it is the order-n quantum correction.
fn correction_weight(omega0: f64, mp: &crate::greens::ModeParams) -> f64 {
    let neg = Complex64::new(mp.residue, 0.0)
        / Complex64::new(omega0 + mp.omega_n, 0.5 * mp.gamma_n);
    -(mp.beta_inf + neg.re) / mp.residue
}

/// Quantum correction to the Lamb shift of emitter `j`, in closed form:
/// Δω_c = −Σ_n (g_n²/R_n)[β_n(∞) + Re(R_n/(ω0 + ω_n + iΓ_n/2))].
///
/// Exactly equals `lamb_shift_effective` minus `lamb_shift_classical` because
/// the pole decomposition of β_n is exact.
pub fn quantum_correction(set: &ModeSet, j: usize, omega0: f64) -> f64 {
    set.params
        .iter()
        .zip(&set.couplings)
        .map(|(mp, g)| g[j] * g[j] * correction_weight(omega0, mp))
        .sum()
}

/// Quantum correction to the dipole-dipole shift between `i` and `j`.
pub fn dipole_dipole_correction(set: &ModeSet, i: usize, j: usize, omega0: f64) -> f64 {
    set.params
        .iter()
        .enumerate()
        .map(|(idx, mp)| {
            let g = &set.couplings[idx];
            let mu = set.overlaps[idx][(i, j)];
            g[i] * g[j] * mu * correction_weight(omega0, mp)
        })
        .sum()
}

/// Quasi-static shift Δω(0) from the closed geometric sums. `dipole_moment`
/// in C·m, `height` above the surface in m, truncated at order `nmax`.
///
/// Perpendicular (radial) dipoles weight each order by (n+1)²; tangential
/// (polar or azimuthal) by n(n+1)/2.
pub fn static_shift(
    geometry: &SphereGeometry,
    eps_b: f64,
    orientation: Orientation,
    dipole_moment: f64,
    height: f64,
    nmax: usize,
) -> f64 {
    let y = 1.0 / (1.0 + height / geometry.radius);
    let pref = dipole_moment * dipole_moment
        / (4.0 * PI * HBAR * EPS0 * eps_b * geometry.radius.powi(3));
    let sum: f64 = (1..=nmax)
        .map(|n| {
            let nf = n as f64;
            let w = match orientation {
                Orientation::Radial => (nf + 1.0) * (nf + 1.0),
                Orientation::Polar | Orientation::Azimuthal => 0.5 * nf * (nf + 1.0),
            };
            w * y.powi(2 * n as i32 + 4)
        })
        .sum();
    pref * sum
}

/// All three Lamb-shift flavors of emitter `j`, plus the static limit.
pub fn lamb_shift(
    set: &ModeSet,
    material: &DrudeMaterial,
    geometry: &SphereGeometry,
    emitter: &Emitter,
    j: usize,
    omega0: f64,
    nmax: usize,
) -> Result<ShiftResult> {
    let effective = lamb_shift_effective(set, j, omega0);
    let classical = lamb_shift_classical(material, geometry, emitter, omega0, nmax)?;
    let static_limit =
        scaled_kernel_static(geometry, material.eps_background, emitter, emitter, nmax)
            / (HBAR * EPS0);
    Ok(ShiftResult {
        effective,
        classical,
        quantum_correction: effective - classical,
        static_limit: Some(static_limit),
    })
}
