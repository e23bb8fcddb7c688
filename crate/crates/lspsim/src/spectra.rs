//! Emission spectral density by three routes: continuous-model matrix solve,
//! dressed-state expansion, and the coincident-ensemble rank-one closed form.
//!
//! All routes evaluate D(ω) = (γ0/2π)|a†x(ω)|² for a normalized initial
//! amplitude vector a over the emitter states. The modal kernel
//! M_ij(ω) = −Σ_n g_n^(i) g_n^(j) μ_n^(ij)/(ω − ω_n + iΓ_n/2) is exactly the
//! emitter-sector Schur complement of the effective Hamiltonian, which makes
//! the first two routes algebraically identical.

use ndarray::{Array1, Array2};
use ndarray_linalg::Solve;
use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::EmitterEnsemble;
use crate::greens::scaled_kernel;
use crate::hamiltonian::DressedStates;
use crate::material::DrudeMaterial;
use crate::modes::ModeSet;
use crate::shifts::dipole_dipole_correction;
use crate::units::{EPS0, HBAR};

/// Whether the kernel keeps the quantum correction to its dispersive part.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Correction {
    On,
    Off,
}

/// Spectral density samples on a frequency grid (rad/s, per rad/s).
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub omega: Vec<f64>,
    pub density: Vec<f64>,
}

impl Spectrum {
    pub fn peak(&self) -> f64 {
        self.density.iter().cloned().fold(0.0, f64::max)
    }

    /// Density scaled to unit peak.
    pub fn peak_normalized(&self) -> Vec<f64> {
        let p = self.peak();
        if p <= 0.0 {
            return self.density.clone();
        }
        self.density.iter().map(|d| d / p).collect()
    }
}

/// Uniform grid of `points` frequencies centered on `center` (rad/s).
pub fn frequency_grid(center: f64, half_width: f64, points: usize) -> Vec<f64> {
    let n = points.max(2);
    (0..n)
        .map(|k| center - half_width + 2.0 * half_width * k as f64 / (n - 1) as f64)
        .collect()
}

/// Modal kernel M(ω) in closed form. `Correction::Off` subtracts the quantum
/// correction Δω_c^(ij)(ω), leaving the classical dispersive part.
pub fn kernel_matrix(set: &ModeSet, omega: f64, correction: Correction) -> Array2<Complex64> {
    let ne = set.overlaps.first().map_or(0, |m| m.nrows());
    let mut m = Array2::<Complex64>::zeros((ne, ne));
    for (idx, mp) in set.params.iter().enumerate() {
        let g = &set.couplings[idx];
        let mu = &set.overlaps[idx];
        let pole = Complex64::new(omega - mp.omega_n, 0.5 * mp.gamma_n);
        for i in 0..ne {
            for j in 0..ne {
                m[(i, j)] -= Complex64::new(g[i] * g[j] * mu[(i, j)], 0.0) / pole;
            }
        }
    }
    if correction == Correction::Off {
        for i in 0..ne {
            for j in 0..ne {
                m[(i, j)] -= Complex64::new(dipole_dipole_correction(set, i, j, omega), 0.0);
            }
        }
    }
    m
}

/// Kernel via the exact Drude permittivity: K_ij(ω)/(ħε0), whose real part is
/// the classical dispersive term and whose imaginary part is Γ_ij(ω)/2.
pub fn kernel_matrix_classical(
    material: &DrudeMaterial,
    geometry: &crate::geometry::SphereGeometry,
    ensemble: &EmitterEnsemble,
    omega: f64,
    nmax: usize,
) -> Result<Array2<Complex64>> {
    let ne = ensemble.len();
    let mut m = Array2::<Complex64>::zeros((ne, ne));
    for i in 0..ne {
        for j in i..ne {
            let k = scaled_kernel(
                material,
                geometry,
                &ensemble.emitters[i],
                &ensemble.emitters[j],
                omega,
                nmax,
            )? / (HBAR * EPS0);
            m[(i, j)] = k;
            m[(j, i)] = k;
        }
    }
    Ok(m)
}

/// Emitter-sector amplitude a†[(ω − ω0 + iγ0/2)I + M(ω)]⁻¹ a at one ω.
pub fn continuous_amplitude(
    set: &ModeSet,
    ensemble: &EmitterEnsemble,
    initial: &[Complex64],
    omega: f64,
    correction: Correction,
) -> Result<Complex64> {
    let ne = ensemble.len();
    let mut m = kernel_matrix(set, omega, correction);
    let diag = Complex64::new(omega - ensemble.omega0, 0.5 * ensemble.gamma0);
    for k in 0..ne {
        m[(k, k)] += diag;
    }
    let rhs = Array1::from_vec(initial.to_vec());
    let x = m.solve(&rhs).map_err(|_| Error::SingularKernel(omega))?;
    Ok(initial.iter().zip(x.iter()).map(|(a, xi)| a.conj() * xi).sum())
}

/// Continuous-model spectrum: per-ω N_e×N_e linear solve.
pub fn spectrum_continuous(
    set: &ModeSet,
    ensemble: &EmitterEnsemble,
    initial: &[Complex64],
    grid: &[f64],
    correction: Correction,
) -> Result<Spectrum> {
    let norm: f64 = initial.iter().map(|a| a.norm_sqr()).sum();
    let pref = ensemble.gamma0 / (2.0 * PI * norm);
    let density = grid
        .iter()
        .map(|&w| {
            continuous_amplitude(set, ensemble, initial, w, correction)
                .map(|amp| pref * amp.norm_sqr())
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(Spectrum { omega: grid.to_vec(), density })
}

/// Dressed-state spectrum: D(ω) = (γ0/2π)|Σ_m (a†v_m) η_m/(ω − Λ_m)|².
///
/// Exactly equal to the continuous route when the dressed states come from
/// the matching effective Hamiltonian.
pub fn spectrum_effective(
    dressed: &DressedStates,
    initial: &[Complex64],
    gamma0: f64,
    grid: &[f64],
) -> Spectrum {
    let dim = dressed.eigenvalues.len();
    let norm: f64 = initial.iter().map(|a| a.norm_sqr()).sum();
    let weights: Vec<Complex64> = (0..dim)
        .map(|m| {
            let overlap: Complex64 = initial
                .iter()
                .enumerate()
                .map(|(l, a)| a.conj() * dressed.vectors[(l, m)])
                .sum();
            overlap * dressed.eta[m]
        })
        .collect();
    let pref = gamma0 / (2.0 * PI * norm);
    let density = grid
        .iter()
        .map(|&w| {
            let amp: Complex64 = weights
                .iter()
                .zip(&dressed.eigenvalues)
                .map(|(wt, lam)| wt / (Complex64::new(w, 0.0) - lam))
                .sum();
            pref * amp.norm_sqr()
        })
        .collect();
    Spectrum { omega: grid.to_vec(), density }
}

/// Rank-one closed form for N_e coincident emitters:
/// D(ω) = (γ0/2π)|ω − ω0 + iγ0/2 + N_e M11(ω)|⁻².
///
/// `set` must describe the single shared emitter position.
pub fn spectrum_ideal(
    set: &ModeSet,
    omega0: f64,
    gamma0: f64,
    ne: usize,
    grid: &[f64],
    correction: Correction,
) -> Spectrum {
    let pref = gamma0 / (2.0 * PI);
    let density = grid
        .iter()
        .map(|&w| {
            let m11 = kernel_matrix(set, w, correction)[(0, 0)];
            let den = Complex64::new(w - omega0, 0.5 * gamma0) + ne as f64 * m11;
            pref / den.norm_sqr()
        })
        .collect();
    Spectrum { omega: grid.to_vec(), density }
}

/// Principal value ∫₀^Ωmax f(ω′)/(ω′ − ω0) dω′ by singularity subtraction:
/// ∫ (f(ω′) − f(ω0))/(ω′ − ω0) dω′ + f(ω0) ln((Ωmax − ω0)/ω0).
///
/// Composite Simpson on a uniform grid with a half-resolution residual check.
pub fn pv_transform(
    f: &dyn Fn(f64) -> f64,
    omega0: f64,
    cutoff: f64,
    points: usize,
) -> Result<f64> {
    if omega0 <= 0.0 || omega0 >= cutoff {
        return Err(Error::NonPositiveFrequency(omega0));
    }
    let f0 = f(omega0);
    let reg = |w: f64| {
        if (w - omega0).abs() < 1e-9 * omega0 {
            // Central difference for the removable singularity.
            let h = 1e-6 * omega0;
            (f(w + h) - f(w - h)) / (2.0 * h)
        } else {
            (f(w) - f0) / (w - omega0)
        }
    };
    let n = points.max(64) | 1; // odd count for Simpson
    let simpson = |n: usize| {
        let h = cutoff / (n - 1) as f64;
        let mut s = reg(1e-12 * cutoff) + reg(cutoff);
        for k in 1..n - 1 {
            let w = k as f64 * h;
            s += if k % 2 == 1 { 4.0 } else { 2.0 } * reg(w);
        }
        s * h / 3.0
    };
    let fine = simpson(n);
    let coarse = simpson((n / 2) | 1);
    let tail = f0 * ((cutoff - omega0) / omega0).ln();
    let value = fine + tail;
    let scale = value.abs().max(f0.abs()).max(f64::MIN_POSITIVE);
    let residual = (fine - coarse).abs() / scale;
    if residual > 1e-3 {
        return Err(Error::Quadrature { residual, tol: 1e-3 });
    }
    Ok(value)
}

/// Kernel entry via PV quadrature of the exact Drude kernel: the validation
/// route for the closed-form dispersive part.
#[allow(clippy::too_many_arguments)]
pub fn kernel_entry_pv(
    material: &DrudeMaterial,
    geometry: &crate::geometry::SphereGeometry,
    ensemble: &EmitterEnsemble,
    i: usize,
    j: usize,
    omega: f64,
    nmax: usize,
    points: usize,
) -> Result<Complex64> {
    let cutoff = 20.0 * material.omega_p;
    let ei = &ensemble.emitters[i];
    let ej = &ensemble.emitters[j];
    let f = |w: f64| {
        if w <= 0.0 {
            return 0.0;
        }
        scaled_kernel(material, geometry, ei, ej, w, nmax)
            .map(|k| k.im / (PI * HBAR * EPS0))
            .unwrap_or(0.0)
    };
    let shift = pv_transform(&f, omega, cutoff, points)?;
    let rate = scaled_kernel(material, geometry, ei, ej, omega, nmax)?.im / (HBAR * EPS0);
    Ok(Complex64::new(shift, rate))
}
