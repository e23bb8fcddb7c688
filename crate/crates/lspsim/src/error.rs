use thiserror::Error;

/// Errors produced by the simulation library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("angular frequency must be positive, got {0} rad/s")]
    NonPositiveFrequency(f64),
    #[error("multipole order must be >= 1")]
    InvalidOrder,
    #[error("emitter at r = {r} m lies inside the sphere of radius {radius} m")]
    EmitterInsideSphere { r: f64, radius: f64 },
    #[error("invalid material parameters: {0}")]
    InvalidMaterial(String),
    #[error("overlap matrix for order {order} has negative eigenvalue {value}")]
    InvalidOverlap { order: usize, value: f64 },
    #[error("Hamiltonian dimension {dim} exceeds the configured cap {cap}")]
    DimensionCap { dim: usize, cap: usize },
    #[error("linear algebra failure: {0}")]
    Linalg(String),
    #[error("kernel matrix singular at omega = {0} rad/s")]
    SingularKernel(f64),
    #[error("quadrature residual {residual:e} above tolerance {tol:e}")]
    Quadrature { residual: f64, tol: f64 },
    #[error("mode profile deviates from a Lorentzian (residual {0:e} of peak)")]
    NonLorentzian(f64),
    #[error("degenerate coupling: kappa vanishes at the mode frequency")]
    DegenerateCoupling,
}

pub type Result<T> = std::result::Result<T, Error>;
