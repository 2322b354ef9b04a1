use thiserror::Error;

/// Errors produced by the simulator and measurement toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian: max |A - A†| entry = {defect:.3e} (tolerance {tol:.1e})")]
    NotHermitian { defect: f64, tol: f64 },

    #[error("matrix is not positive semidefinite: min eigenvalue = {min_eig:.3e}")]
    NotPsd { min_eig: f64 },

    #[error("invalid qubit subset: {0}")]
    InvalidSubset(String),

    #[error("invalid qubit permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("invalid time grid: {0}")]
    InvalidGrid(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid sweep spec: {0}")]
    InvalidSweep(String),

    #[error(
        "evolved-state invariant violated ({variant}, q={q}, gamma/nu={gamma_ratio}, nu*t={t}): {detail}"
    )]
    StateInvariant {
        variant: String,
        q: f64,
        gamma_ratio: f64,
        t: f64,
        detail: String,
    },

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("empty table")]
    EmptyTable,

    #[error("unknown format: {0}")]
    UnknownFormat(String),

    #[error("unknown preset: {0:?}")]
    UnknownPreset(String),
}

pub type Result<T> = std::result::Result<T, Error>;
