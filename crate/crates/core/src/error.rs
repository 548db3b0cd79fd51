use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("mode index {index} out of range for {n_modes} modes")]
    ModeOutOfRange { index: usize, n_modes: usize },

    #[error("{requested} modes exceeds the configured cap of {cap}")]
    DimensionCap { requested: usize, cap: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{what}: constraint violated by {margin:.3e}")]
    Constraint { what: &'static str, margin: f64 },

    #[error("state is not pure: |Γ² − Γ| = {defect:.3e}")]
    NotPure { defect: f64 },

    #[error("{name} must be {requirement}, got {value}")]
    InvalidArgument {
        name: &'static str,
        requirement: &'static str,
        value: f64,
    },

    #[error("pairing order p = {0} outside 1..=6")]
    PairingOrder(usize),

    #[error("{what} did not converge (achieved {achieved:.3e})")]
    Convergence { what: &'static str, achieved: f64 },

    #[error("mode blocks overlap at mode {0}")]
    OverlappingBlocks(usize),

    #[error("{0}")]
    Config(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn argument(name: &'static str, requirement: &'static str, value: f64) -> Self {
        Error::InvalidArgument {
            name,
            requirement,
            value,
        }
    }
}
