use serde::{Deserialize, Serialize};

/// Every numerical threshold used by validation and self-checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Hermiticity, unitarity, trace and positivity checks.
    pub identity: f64,
    /// Round trips through the oracle.
    pub round_trip: f64,
    /// Eigenvalues this close to 0 or 1 are snapped.
    pub snap: f64,
    /// Operator-norm threshold for Γ² = Γ.
    pub purity: f64,
    /// Eigenvalues of γ this close to 1 count as filled modes.
    pub filled: f64,
    /// Eigenvalue clustering in the Bogoliubov diagonalization.
    pub degeneracy: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            identity: 1e-10,
            round_trip: 1e-9,
            snap: 1e-12,
            purity: 1e-8,
            filled: 1e-9,
            degeneracy: 1e-9,
        }
    }
}
