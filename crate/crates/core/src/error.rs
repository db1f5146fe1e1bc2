use thiserror::Error;

/// Errors surfaced by the physics modules.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid Hilbert space: {0}")]
    InvalidSpace(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("operators live on different spaces: {0}")]
    SpaceMismatch(String),

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(
        "unstable regime: coupling exceeds the critical value \
         (omega_minus^2 = {omega_minus_sq:.6e} rad^2/s^2)"
    )]
    UnstableRegime { omega_minus_sq: f64 },

    #[error("singular spin-polariton coupling: omega_minus = 0 at the critical point")]
    SingularCoupling,

    #[error("outside the dispersive regime: zeta = {zeta:.4} >= 1")]
    NonDispersive { zeta: f64 },

    #[error("mean-field solver failed to converge: {0}")]
    NonConvergence(String),

    #[error(
        "trace drift {drift:.3e} exceeded 1e-6 at step {step} \
         (dt = {dt:.3e} s); reduce the step size"
    )]
    TraceDrift { drift: f64, step: usize, dt: f64 },

    #[error(
        "Fock truncation too small: edge occupancy {occupancy:.3e} exceeds 1e-6 \
         (n_max = {n_max})"
    )]
    TruncationTooSmall { occupancy: f64, n_max: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
