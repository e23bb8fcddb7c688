//! Physical constants and unit conversions.
//!
//! Internally everything runs in SI: angular frequencies in rad/s, lengths in
//! meters, dipole moments in C·m. User-facing quantities (eV, nm, Debye) are
//! converted at the boundary with the helpers below.

use std::f64::consts::PI;

/// Reduced Planck constant (J·s).
pub const HBAR: f64 = 1.054_571_817e-34;
/// Vacuum permittivity (F/m).
pub const EPS0: f64 = 8.854_187_812_8e-12;
/// Speed of light in vacuum (m/s).
pub const C: f64 = 2.997_924_58e8;
/// Elementary charge (C); also J per eV.
pub const E_CHARGE: f64 = 1.602_176_634e-19;
/// One Debye in C·m.
pub const DEBYE: f64 = 3.335_64e-30;

/// Photon energy in eV to angular frequency in rad/s.
pub fn ev_to_rad_s(ev: f64) -> f64 {
    ev * E_CHARGE / HBAR
}

/// Angular frequency in rad/s to photon energy in eV.
pub fn rad_s_to_ev(omega: f64) -> f64 {
    omega * HBAR / E_CHARGE
}

/// Dipole moment in Debye to C·m.
pub fn debye_to_si(d: f64) -> f64 {
    d * DEBYE
}

/// Length in nm to m.
pub fn nm_to_m(nm: f64) -> f64 {
    nm * 1e-9
}

/// Spontaneous emission rate of a dipole `d` (C·m) at `omega0` (rad/s) in a
/// homogeneous background of relative permittivity `eps_b`:
/// γ0 = ω0³ d² √ε_b / (3π ε0 ħ c³).
pub fn free_space_rate(d: f64, omega0: f64, eps_b: f64) -> f64 {
    omega0.powi(3) * d * d * eps_b.sqrt() / (3.0 * PI * EPS0 * HBAR * C.powi(3))
}
