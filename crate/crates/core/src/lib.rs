//! Fermionic quasi-free states on finite mode spaces, an exact dense Fock-space
//! oracle to check them against, and the Dirac-vacuum pair-creation estimates
//! built on top (trial-state energies, optimized constants, and the lower bound
//! on the static pair-creation probability).

pub mod bdf_rep;
pub mod constants;
pub mod error;
pub mod fock_oracle;
pub mod linalg;
pub mod quasifree;
pub mod sampling;
pub mod tolerances;
pub mod vacuum_energy;
pub mod verify;
pub mod wick;

pub use error::{Error, Result};
pub use linalg::{CMatrix, CVector, C64};
pub use tolerances::Tolerances;
