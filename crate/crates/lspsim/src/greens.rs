//! Scattered Green function of a metal nanosphere in the quasi-static
//! multipole approximation, projected onto emitter dipoles.
//!
//! The central object is the scaled kernel
//! K_ij(ω) = (ω²/c²) dᵢ·G_scatt(rᵢ, rⱼ, ω)·dⱼ = Σ_n F_n^{ij} β_n(ω),
//! where F_n^{ij} is a purely geometric factor (double gradient of the
//! scalar-potential expansion) and β_n(ω) = n(ε−ε_b)/(nε+(n+1)ε_b) is the
//! multipole response of the sphere. For a Drude metal β_n decomposes exactly
//! into a constant plus a resonant/antiresonant pole pair, which is what the
//! mode extraction and all closed-form shift expressions build on.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::{Emitter, SphereGeometry};
use crate::material::DrudeMaterial;
use crate::units::{C, EPS0, HBAR};

/// Lorentzian pole parameters of one multipole order of a Drude sphere.
///
/// β_n(ω) = beta_inf − residue/(ω − ω_n + iΓ_n/2) + residue/(ω + ω_n + iΓ_n/2),
/// exactly, for any Drude parameters with ω̃_n² > Γ_n²/4.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeParams {
    pub order: usize,
    /// Resonance angular frequency ω_n (rad/s).
    pub omega_n: f64,
    /// Mode linewidth Γ_n (rad/s); equals Γp for every order.
    pub gamma_n: f64,
    /// Pole residue |R_n| (rad/s).
    pub residue: f64,
    /// High-frequency limit β_n(∞).
    pub beta_inf: f64,
}

impl ModeParams {
    /// β_n(ω) from the pole decomposition.
    pub fn beta(&self, omega: f64) -> Complex64 {
        let half = Complex64::new(0.0, 0.5 * self.gamma_n);
        let res = Complex64::new(self.residue, 0.0);
        Complex64::new(self.beta_inf, 0.0) - res / (omega - self.omega_n + half)
            + res / (omega + self.omega_n + half)
    }
}

/// Pole parameters of multipole order `n`.
pub fn mode_params(material: &DrudeMaterial, n: usize) -> Result<ModeParams> {
    if n == 0 {
        return Err(Error::InvalidOrder);
    }
    material.validate()?;
    let nf = n as f64;
    let a = nf * material.eps_inf + (nf + 1.0) * material.eps_background;
    let wt2 = nf * material.omega_p * material.omega_p / a;
    let disc = wt2 - 0.25 * material.gamma_p * material.gamma_p;
    if disc <= 0.0 {
        return Err(Error::InvalidMaterial(format!(
            "overdamped multipole order {n}: omega_tilde^2 <= gamma_p^2/4"
        )));
    }
    let omega_n = disc.sqrt();
    let residue = (2.0 * nf + 1.0) * material.eps_background * wt2 / (2.0 * omega_n * a);
    let beta_inf = nf * (material.eps_inf - material.eps_background) / a;
    Ok(ModeParams { order: n, omega_n, gamma_n: material.gamma_p, residue, beta_inf })
}

/// β_n(ω) evaluated directly from the dielectric functions.
pub fn beta_direct(material: &DrudeMaterial, n: usize, omega: f64) -> Result<Complex64> {
    if n == 0 {
        return Err(Error::InvalidOrder);
    }
    let eps = material.epsilon(omega)?;
    let nf = n as f64;
    let eps_b = material.eps_background;
    Ok(nf * (eps - eps_b) / (nf * eps + (nf + 1.0) * eps_b))
}

/// Quasi-static multipole polarizability α_n(ω) = R^(2n+1) β_n(ω) (m^(2n+1)).
///
/// Underflows f64 for nanometric R at large n; internal kernels use the
/// scale-free ratio form instead.
pub fn multipole_polarizability(
    material: &DrudeMaterial,
    geometry: &SphereGeometry,
    n: usize,
    omega: f64,
) -> Result<Complex64> {
    let beta = beta_direct(material, n, omega)?;
    Ok(beta * geometry.radius.powi(2 * n as i32 + 1))
}

/// Legendre polynomial P_n(u) with first and second derivatives, by the
/// three-term recurrences (stable on |u| <= 1).
pub fn legendre_derivs(n: usize, u: f64) -> (f64, f64, f64) {
    if n == 0 {
        return (1.0, 0.0, 0.0);
    }
    let (mut p0, mut p1) = (1.0, u);
    let (mut d0, mut d1) = (0.0, 1.0);
    let (mut s0, mut s1) = (0.0, 0.0);
    for k in 1..n {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0) * u * p1 - kf * p0) / (kf + 1.0);
        let d2 = d0 + (2.0 * kf + 1.0) * p1;
        let s2 = s0 + (2.0 * kf + 1.0) * d1;
        p0 = p1;
        p1 = p2;
        d0 = d1;
        d1 = d2;
        s0 = s1;
        s1 = s2;
    }
    (p1, d1, s1)
}

/// Cosine of the angle between the two emitter directions and its partial
/// derivatives with respect to the angular coordinates.
struct AngleKernel {
    u: f64,
    u_ti: f64,
    u_tj: f64,
    u_fi: f64,
    u_fj: f64,
    u_titj: f64,
    u_tifj: f64,
    u_fitj: f64,
    u_fifj: f64,
}

fn angle_kernel(ei: &Emitter, ej: &Emitter) -> AngleKernel {
    let (sti, cti) = ei.theta.sin_cos();
    let (stj, ctj) = ej.theta.sin_cos();
    let (sdf, cdf) = (ei.phi - ej.phi).sin_cos();
    AngleKernel {
        u: cti * ctj + sti * stj * cdf,
        u_ti: -sti * ctj + cti * stj * cdf,
        u_tj: -cti * stj + sti * ctj * cdf,
        u_fi: -sti * stj * sdf,
        u_fj: sti * stj * sdf,
        u_titj: sti * stj + cti * ctj * cdf,
        u_tifj: cti * stj * sdf,
        u_fitj: -sti * ctj * sdf,
        u_fifj: sti * stj * cdf,
    }
}

/// Geometric factor F_n^{ij} (dipole moments included) such that
/// K_ij(ω) = Σ_n F_n^{ij} β_n(ω).
pub fn geometry_factor(
    geometry: &SphereGeometry,
    eps_b: f64,
    ei: &Emitter,
    ej: &Emitter,
    n: usize,
) -> f64 {
    let rr = geometry.radius;
    let scale = ((rr / ei.r).powi(n as i32 + 1) * (rr / ej.r).powi(n as i32 + 1)) / rr;
    let ak = angle_kernel(ei, ej);
    let (p, p1, p2) = legendre_derivs(n, ak.u);
    let np1 = n as f64 + 1.0;
    let (ri, rj) = (ei.r, ej.r);
    let (sti, stj) = (ei.theta.sin(), ej.theta.sin());
    let [ari, ati, afi] = ei.dipole;
    let [arj, atj, afj] = ej.dipole;

    let mut sum = 0.0;
    sum += ari * arj * np1 * np1 / (ri * rj) * p;
    sum -= ari * atj * np1 / (ri * rj) * p1 * ak.u_tj;
    sum -= ari * afj * np1 / (ri * rj * stj) * p1 * ak.u_fj;
    sum -= ati * arj * np1 / (ri * rj) * p1 * ak.u_ti;
    sum -= afi * arj * np1 / (ri * rj * sti) * p1 * ak.u_fi;
    sum += ati * atj / (ri * rj) * (p2 * ak.u_ti * ak.u_tj + p1 * ak.u_titj);
    sum += ati * afj / (ri * rj * stj) * (p2 * ak.u_ti * ak.u_fj + p1 * ak.u_tifj);
    sum += afi * atj / (ri * rj * sti) * (p2 * ak.u_fi * ak.u_tj + p1 * ak.u_fitj);
    sum += afi * afj / (ri * rj * sti * stj) * (p2 * ak.u_fi * ak.u_fj + p1 * ak.u_fifj);

    scale * sum / (4.0 * PI * eps_b)
}

/// Dipole-projected scattered Green value with per-order resolution,
/// in the convention E_scatt = (ω²/ε0 c²) G·d (units m⁻¹·(C·m)²).
#[derive(Debug, Clone)]
pub struct GreenProjection {
    pub total: Complex64,
    pub orders: Vec<Complex64>,
    /// False when the last retained order still contributes more than 1e-10
    /// of the running sum.
    pub converged: bool,
}

/// Scaled kernel K_ij(ω) = (ω²/c²) dᵢ·G·dⱼ, per multipole order.
pub fn scaled_kernel_orders(
    material: &DrudeMaterial,
    geometry: &SphereGeometry,
    ei: &Emitter,
    ej: &Emitter,
    omega: f64,
    nmax: usize,
) -> Result<Vec<Complex64>> {
    if nmax == 0 {
        return Err(Error::InvalidOrder);
    }
    (1..=nmax)
        .map(|n| {
            let f = geometry_factor(geometry, material.eps_background, ei, ej, n);
            Ok(mode_params(material, n)?.beta(omega) * f)
        })
        .collect()
}

/// Total scaled kernel K_ij(ω).
pub fn scaled_kernel(
    material: &DrudeMaterial,
    geometry: &SphereGeometry,
    ei: &Emitter,
    ej: &Emitter,
    omega: f64,
    nmax: usize,
) -> Result<Complex64> {
    Ok(scaled_kernel_orders(material, geometry, ei, ej, omega, nmax)?
        .into_iter()
        .sum())
}

/// Static limit K_ij(0) (β_n(0) = 1 exactly for a Drude metal).
pub fn scaled_kernel_static(
    geometry: &SphereGeometry,
    eps_b: f64,
    ei: &Emitter,
    ej: &Emitter,
    nmax: usize,
) -> f64 {
    (1..=nmax).map(|n| geometry_factor(geometry, eps_b, ei, ej, n)).sum()
}

/// Projected Green value G_ij(ω) = K_ij(ω)·c²/ω² with per-order terms.
pub fn green_projection(
    material: &DrudeMaterial,
    geometry: &SphereGeometry,
    ei: &Emitter,
    ej: &Emitter,
    omega: f64,
    nmax: usize,
) -> Result<GreenProjection> {
    if omega <= 0.0 {
        return Err(Error::NonPositiveFrequency(omega));
    }
    for e in [ei, ej] {
        if e.r <= geometry.radius {
            return Err(Error::EmitterInsideSphere { r: e.r, radius: geometry.radius });
        }
    }
    let k = scaled_kernel_orders(material, geometry, ei, ej, omega, nmax)?;
    let factor = C * C / (omega * omega);
    let orders: Vec<Complex64> = k.into_iter().map(|v| v * factor).collect();
    let total: Complex64 = orders.iter().sum();
    let converged = match orders.last() {
        Some(last) => last.norm() <= 1e-10 * total.norm().max(f64::MIN_POSITIVE),
        None => false,
    };
    Ok(GreenProjection { total, orders, converged })
}

/// Cooperative decay rate Γ_ij(ω) = (2ω²/ħε0c²)·Im[dᵢ·G·dⱼ] = 2 Im K_ij/(ħε0).
pub fn cooperative_rate(
    material: &DrudeMaterial,
    geometry: &SphereGeometry,
    ei: &Emitter,
    ej: &Emitter,
    omega: f64,
    nmax: usize,
) -> Result<f64> {
    Ok(2.0 * scaled_kernel(material, geometry, ei, ej, omega, nmax)?.im / (HBAR * EPS0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Orientation;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn geom() -> SphereGeometry {
        SphereGeometry { radius: 8e-9 }
    }

    #[test]
    fn legendre_reference_values() {
        let (p, p1, p2) = legendre_derivs(2, 0.3);
        assert_relative_eq!(p, 0.5 * (3.0 * 0.09 - 1.0), max_relative = 1e-14);
        assert_relative_eq!(p1, 3.0 * 0.3, max_relative = 1e-14);
        assert_relative_eq!(p2, 3.0, max_relative = 1e-14);
        for n in 1..40 {
            let (p, p1, _) = legendre_derivs(n, 1.0);
            assert_relative_eq!(p, 1.0, max_relative = 1e-10);
            assert_relative_eq!(p1, n as f64 * (n as f64 + 1.0) / 2.0, max_relative = 1e-10);
        }
    }

    #[test]
    fn beta_pole_decomposition_is_exact() {
        for material in [DrudeMaterial::silver(), DrudeMaterial::gold()] {
            for n in [1usize, 2, 5, 17, 40] {
                let mp = mode_params(&material, n).unwrap();
                for omega in [5e14, 2.5e15, 4.2e15, 6.0e15, 1.5e16] {
                    let direct = beta_direct(&material, n, omega).unwrap();
                    let modal = mp.beta(omega);
                    assert_relative_eq!(direct.re, modal.re, max_relative = 1e-10, epsilon = 1e-12);
                    assert_relative_eq!(direct.im, modal.im, max_relative = 1e-10, epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn beta_static_limit_is_unity() {
        let ag = DrudeMaterial::silver();
        for n in [1usize, 3, 12] {
            let b = mode_params(&ag, n).unwrap().beta(0.0);
            assert_relative_eq!(b.re, 1.0, max_relative = 1e-4);
        }
    }

    #[test]
    fn dipolar_resonance_location() {
        // Re[epsilon] = -2 eps_b at omega ~ omega_p / sqrt(eps_inf + 2 eps_b).
        let ag = DrudeMaterial::silver();
        let mp = mode_params(&ag, 1).unwrap();
        let expected = ag.omega_p / (ag.eps_inf + 2.0).sqrt();
        assert_relative_eq!(mp.omega_n, expected, max_relative = 1e-3);
        assert_relative_eq!(crate::units::rad_s_to_ev(mp.omega_n), 2.79, max_relative = 0.01);
        // Large-n accumulation point omega_p / sqrt(eps_inf + eps_b).
        let hi = mode_params(&ag, 400).unwrap();
        assert_relative_eq!(hi.omega_n, ag.omega_p / 7.0f64.sqrt(), max_relative = 1e-3);
    }

    #[test]
    fn index_matched_sphere_is_invisible() {
        let m = DrudeMaterial { eps_inf: 1.0, omega_p: 1e-30, gamma_p: 1.0, eps_background: 1.0 };
        for n in 1..5 {
            assert!(beta_direct(&m, n, 3e15).unwrap().norm() < 1e-60);
            let a = multipole_polarizability(&m, &geom(), n, 3e15).unwrap();
            assert!(a.norm() < 1e-80 * geom().radius.powi(2 * n as i32 + 1));
        }
    }

    fn fd_geometry_factor(g: &SphereGeometry, eps_b: f64, ei: &Emitter, ej: &Emitter, n: usize) -> f64 {
        // Brute-force double directional derivative of the scalar-potential
        // term, computed in Cartesian coordinates.
        let to_cart = |e: &Emitter| {
            let (st, ct) = e.theta.sin_cos();
            let (sp, cp) = e.phi.sin_cos();
            [e.r * st * cp, e.r * st * sp, e.r * ct]
        };
        let dip_cart = |e: &Emitter| {
            let (st, ct) = e.theta.sin_cos();
            let (sp, cp) = e.phi.sin_cos();
            let er = [st * cp, st * sp, ct];
            let et = [ct * cp, ct * sp, -st];
            let ef = [-sp, cp, 0.0];
            let [a, b, c] = e.dipole;
            [
                a * er[0] + b * et[0] + c * ef[0],
                a * er[1] + b * et[1] + c * ef[1],
                a * er[2] + b * et[2] + c * ef[2],
            ]
        };
        let s = |xi: [f64; 3], xj: [f64; 3]| {
            let ri = (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]).sqrt();
            let rj = (xj[0] * xj[0] + xj[1] * xj[1] + xj[2] * xj[2]).sqrt();
            let u = (xi[0] * xj[0] + xi[1] * xj[1] + xi[2] * xj[2]) / (ri * rj);
            let (p, _, _) = legendre_derivs(n, u.clamp(-1.0, 1.0));
            (g.radius / ri).powi(n as i32 + 1) * (g.radius / rj).powi(n as i32 + 1) / g.radius * p
                / (4.0 * PI * eps_b)
        };
        let (xi, xj) = (to_cart(ei), to_cart(ej));
        let (di, dj) = (dip_cart(ei), dip_cart(ej));
        let ni = ei.dipole_norm();
        let nj = ej.dipole_norm();
        let h = 1e-5 * ei.r;
        let shift = |x: [f64; 3], d: [f64; 3], nrm: f64, s_: f64| {
            [x[0] + s_ * h * d[0] / nrm, x[1] + s_ * h * d[1] / nrm, x[2] + s_ * h * d[2] / nrm]
        };
        let v = s(shift(xi, di, ni, 1.0), shift(xj, dj, nj, 1.0))
            - s(shift(xi, di, ni, 1.0), shift(xj, dj, nj, -1.0))
            - s(shift(xi, di, ni, -1.0), shift(xj, dj, nj, 1.0))
            + s(shift(xi, di, ni, -1.0), shift(xj, dj, nj, -1.0));
        v / (4.0 * h * h) * ni * nj
    }

    #[test]
    fn geometry_factor_matches_finite_differences() {
        let g = geom();
        let d = crate::units::debye_to_si(24.0);
        let cases = [
            (1.0e-8, PI / 2.0, 0.0, Orientation::Polar, 1.2e-8, PI / 2.0, 1.1, Orientation::Polar),
            (1.0e-8, PI / 2.0, 0.3, Orientation::Radial, 1.0e-8, PI / 2.0, 2.0, Orientation::Azimuthal),
            (1.1e-8, 0.7, 0.2, Orientation::Azimuthal, 1.3e-8, 1.9, 4.0, Orientation::Radial),
            (1.0e-8, 1.2, 5.1, Orientation::Polar, 1.0e-8, 2.1, 0.4, Orientation::Radial),
            (1.4e-8, 0.4, 2.2, Orientation::Azimuthal, 1.2e-8, 2.8, 5.9, Orientation::Polar),
        ];
        for (ri, ti, fi, oi, rj, tj, fj, oj) in cases {
            let ei = Emitter::new(ri, ti, fi, d, oi);
            let ej = Emitter::new(rj, tj, fj, d, oj);
            for n in [1usize, 2, 3, 7] {
                let analytic = geometry_factor(&g, 1.0, &ei, &ej, n);
                let numeric = fd_geometry_factor(&g, 1.0, &ei, &ej, n);
                assert_relative_eq!(analytic, numeric, max_relative = 1e-5, epsilon = 1e-22);
            }
        }
    }

    #[test]
    fn diagonal_factors_closed_form() {
        let g = geom();
        let d = 1.0e-29;
        let r = 1.0e-8;
        let pref = d * d / (4.0 * PI * g.radius.powi(3));
        for n in 1..20 {
            let x = (g.radius / r).powi(2 * n as i32 + 4);
            let perp = Emitter::new(r, PI / 2.0, 0.0, d, Orientation::Radial);
            let fperp = geometry_factor(&g, 1.0, &perp, &perp, n);
            let np1 = (n as f64 + 1.0).powi(2);
            assert_relative_eq!(fperp, pref * np1 * x, max_relative = 1e-12);
            for o in [Orientation::Polar, Orientation::Azimuthal] {
                let par = Emitter::new(r, PI / 2.0, 0.0, d, o);
                let fpar = geometry_factor(&g, 1.0, &par, &par, n);
                let nn = n as f64 * (n as f64 + 1.0) / 2.0;
                assert_relative_eq!(fpar, pref * nn * x, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn kernel_reciprocity_and_dissipation() {
        let g = geom();
        let m = DrudeMaterial::silver();
        let d = 1.0e-29;
        let ei = Emitter::new(1.0e-8, 1.1, 0.3, d, Orientation::Polar);
        let ej = Emitter::new(1.2e-8, 2.0, 2.7, d, Orientation::Radial);
        let w = crate::units::ev_to_rad_s(2.8);
        let kij = scaled_kernel(&m, &g, &ei, &ej, w, 30).unwrap();
        let kji = scaled_kernel(&m, &g, &ej, &ei, w, 30).unwrap();
        assert_relative_eq!(kij.re, kji.re, max_relative = 1e-12);
        assert_relative_eq!(kij.im, kji.im, max_relative = 1e-12);
        assert!(scaled_kernel(&m, &g, &ei, &ei, w, 30).unwrap().im > 0.0);
        assert!(cooperative_rate(&m, &g, &ei, &ei, w, 30).unwrap() > 0.0);
    }

    #[test]
    fn green_projection_orders_sum_and_convergence() {
        let g = geom();
        let m = DrudeMaterial::silver();
        let e = Emitter::new(1.0e-8, PI / 2.0, 0.0, 1e-29, Orientation::Polar);
        let w = crate::units::ev_to_rad_s(2.8);
        let proj = green_projection(&m, &g, &e, &e, w, 110).unwrap();
        let sum: Complex64 = proj.orders.iter().sum();
        assert_relative_eq!(sum.re, proj.total.re, max_relative = 1e-12);
        assert!(proj.converged);
        let short = green_projection(&m, &g, &e, &e, w, 3).unwrap();
        assert!(!short.converged);
    }
}
