//! Collective strong coupling of quantum emitters to localized surface
//! plasmon modes of a metal nanosphere, in the quasi-static multipole
//! approximation.

pub mod error;
pub mod geometry;
pub mod greens;
pub mod hamiltonian;
pub mod material;
pub mod modes;
pub mod shifts;
pub mod spectra;
pub mod units;

pub use error::{Error, Result};
pub use geometry::{Emitter, EmitterEnsemble, Orientation, SphereGeometry};
pub use greens::{GreenProjection, ModeParams};
pub use hamiltonian::{BasisLabel, DressedStates, EffectiveHamiltonian, StateWeights};
pub use material::DrudeMaterial;
pub use modes::{LowdinModes, ModeSet};
pub use shifts::ShiftResult;
pub use spectra::{Correction, Spectrum};
