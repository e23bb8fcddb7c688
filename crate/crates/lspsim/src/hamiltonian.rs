//! Single-excitation effective Hamiltonians and their dressed states.
//!
//! The Löwdin-form Hamiltonian couples N_e emitter states to N × N_ind
//! orthonormal plasmon modes; the ideal (coincident) and symmetric-ring
//! configurations reduce to an (N+1) arrow matrix in the bright collective
//! basis. Matrices are complex symmetric (non-Hermitian, dissipative).

use ndarray::{Array1, Array2};
use ndarray_linalg::{Eig, Solve};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::EmitterEnsemble;
use crate::greens::ModeParams;
use crate::modes::{bright_couplings, LowdinModes, ModeSet};

/// Default cap on the Hamiltonian dimension.
pub const DIMENSION_CAP: usize = 6000;

/// Basis state of the single-excitation Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisLabel {
    /// |e^{(j)}, ∅⟩: emitter j excited.
    Emitter(usize),
    /// |g, 1_n^{(l)}⟩: one quantum in Löwdin mode l of multipole order n.
    Mode { order: usize, lowdin: usize },
    /// Bright collective emitter state |B, ∅⟩ (arrow-matrix builds).
    Bright,
}

/// H/ħ as a complex matrix with basis bookkeeping.
#[derive(Debug, Clone)]
pub struct EffectiveHamiltonian {
    pub matrix: Array2<Complex64>,
    pub labels: Vec<BasisLabel>,
    /// Number of emitter states leading the basis.
    pub n_emitters: usize,
}

impl EffectiveHamiltonian {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }
}

/// Builds the Löwdin-form Hamiltonian: emitter block, plasmon block, and
/// emitter-plasmon couplings g_n^{(jl)}.
pub fn build_effective(
    ensemble: &EmitterEnsemble,
    modes: &ModeSet,
    lowdin: &LowdinModes,
) -> Result<EffectiveHamiltonian> {
    let ne = ensemble.len();
    let n_modes: usize = lowdin.n_independent.iter().sum();
    let dim = ne + n_modes;
    if dim > DIMENSION_CAP {
        return Err(Error::DimensionCap { dim, cap: DIMENSION_CAP });
    }
    let mut h = Array2::<Complex64>::zeros((dim, dim));
    let mut labels = Vec::with_capacity(dim);
    for j in 0..ne {
        h[(j, j)] = Complex64::new(ensemble.omega0, -0.5 * ensemble.gamma0);
        labels.push(BasisLabel::Emitter(j));
    }
    let mut col = ne;
    for (idx, mp) in modes.params.iter().enumerate() {
        let c = &lowdin.couplings[idx];
        for l in 0..lowdin.n_independent[idx] {
            h[(col, col)] = Complex64::new(mp.omega_n, -0.5 * mp.gamma_n);
            for j in 0..ne {
                let g = Complex64::new(c[(j, l)], 0.0);
                h[(j, col)] = g;
                h[(col, j)] = g;
            }
            labels.push(BasisLabel::Mode { order: mp.order, lowdin: l });
            col += 1;
        }
    }
    Ok(EffectiveHamiltonian { matrix: h, labels, n_emitters: ne })
}

/// Arrow matrix in the basis {|B,∅⟩, |g,1_1⟩, ..., |g,1_N⟩} with the given
/// bright couplings.
fn build_arrow(
    omega0: f64,
    gamma0: f64,
    params: &[ModeParams],
    couplings: &[f64],
) -> EffectiveHamiltonian {
    let n = params.len();
    let mut h = Array2::<Complex64>::zeros((n + 1, n + 1));
    let mut labels = vec![BasisLabel::Bright];
    h[(0, 0)] = Complex64::new(omega0, -0.5 * gamma0);
    for (k, mp) in params.iter().enumerate() {
        h[(k + 1, k + 1)] = Complex64::new(mp.omega_n, -0.5 * mp.gamma_n);
        let g = Complex64::new(couplings[k], 0.0);
        h[(0, k + 1)] = g;
        h[(k + 1, 0)] = g;
        labels.push(BasisLabel::Mode { order: mp.order, lowdin: 0 });
    }
    EffectiveHamiltonian { matrix: h, labels, n_emitters: 1 }
}

/// Ideal-configuration arrow matrix: N_e coincident emitters coupling √N_e·g_n
/// to one Löwdin mode per order.
pub fn build_ideal(
    omega0: f64,
    gamma0: f64,
    params: &[ModeParams],
    single_couplings: &[f64],
    ne: usize,
) -> EffectiveHamiltonian {
    let scaled: Vec<f64> = single_couplings.iter().map(|g| g * (ne as f64).sqrt()).collect();
    build_arrow(omega0, gamma0, params, &scaled)
}

/// Bright-sector arrow matrix of a symmetric ensemble (equatorial ring or
/// coincident), with collective couplings from the overlap row sums.
pub fn build_ring_bright(ensemble: &EmitterEnsemble, modes: &ModeSet) -> EffectiveHamiltonian {
    let couplings = bright_couplings(modes);
    build_arrow(ensemble.omega0, ensemble.gamma0, &modes.params, &couplings)
}

/// Composition of one dressed state.
#[derive(Debug, Clone)]
pub struct StateWeights {
    /// Summed weight on the emitter (or bright) states.
    pub emitter: f64,
    /// Weight on the n = 1 (dipolar) plasmon modes.
    pub lsp1: f64,
    /// Weight on all n >= 2 plasmon modes.
    pub higher: f64,
    /// Normalized |component|² per basis state.
    pub per_component: Vec<f64>,
}

/// Eigen-decomposition of an effective Hamiltonian together with the exact
/// expansion of an initial state.
#[derive(Debug, Clone)]
pub struct DressedStates {
    /// Λ_m = Ω_m − iΓ_m/2 (rad/s).
    pub eigenvalues: Vec<Complex64>,
    /// Right eigenvectors as columns.
    pub vectors: Array2<Complex64>,
    /// Expansion coefficients of the initial state: V η = ψ(0).
    pub eta: Vec<Complex64>,
    pub labels: Vec<BasisLabel>,
    pub weights: Vec<StateWeights>,
}

impl DressedStates {
    /// Real dressed frequency Ω_m (rad/s).
    pub fn omega(&self, m: usize) -> f64 {
        self.eigenvalues[m].re
    }

    /// Full linewidth Γ_m (rad/s).
    pub fn gamma(&self, m: usize) -> f64 {
        -2.0 * self.eigenvalues[m].im
    }
}

/// Diagonalizes H and expands `initial` (full-dimension amplitudes, or
/// emitter-sector amplitudes padded with zeros) on the dressed states.
pub fn dressed_states(h: &EffectiveHamiltonian, initial: &[Complex64]) -> Result<DressedStates> {
    let dim = h.dim();
    let (vals, vecs) = h
        .matrix
        .eig()
        .map_err(|e| Error::Linalg(format!("eigendecomposition: {e}")))?;
    let mut psi0 = Array1::<Complex64>::zeros(dim);
    for (k, a) in initial.iter().enumerate() {
        psi0[k] = *a;
    }
    let eta = vecs
        .solve(&psi0)
        .map_err(|e| Error::Linalg(format!("eigenvector solve: {e}")))?;
    let mut weights = Vec::with_capacity(dim);
    for m in 0..dim {
        let col = vecs.column(m);
        let norm: f64 = col.iter().map(|c| c.norm_sqr()).sum();
        let per: Vec<f64> = col.iter().map(|c| c.norm_sqr() / norm).collect();
        let mut w = StateWeights { emitter: 0.0, lsp1: 0.0, higher: 0.0, per_component: per };
        for (k, label) in h.labels.iter().enumerate() {
            match label {
                BasisLabel::Emitter(_) | BasisLabel::Bright => w.emitter += w.per_component[k],
                BasisLabel::Mode { order: 1, .. } => w.lsp1 += w.per_component[k],
                BasisLabel::Mode { .. } => w.higher += w.per_component[k],
            }
        }
        weights.push(w);
    }
    Ok(DressedStates {
        eigenvalues: vals.to_vec(),
        vectors: vecs,
        eta: eta.to_vec(),
        labels: h.labels.clone(),
        weights,
    })
}

/// Symmetric bright initial state over the emitter sector.
pub fn bright_initial_state(h: &EffectiveHamiltonian) -> Vec<Complex64> {
    let ne = h.n_emitters;
    let a = Complex64::new(1.0 / (ne as f64).sqrt(), 0.0);
    (0..ne).map(|_| a).collect()
}
