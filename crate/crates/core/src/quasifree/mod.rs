//! Closed-form statistics of quasi-free states: generating functions,
//! particle-number distributions and their bounds, canonical forms, and the
//! Bogoliubov diagonalization behind the mixed-state vacuum bound.

pub(crate) mod bls;
mod bounds;
mod hf;
mod pure;
mod spec;

pub use bls::{bls_diagonalize, BogoliubovDiag};
pub use bounds::{interpolated_vacuum_bound, interpolation_coefficients, mixed_vacuum_bound};
pub use hf::{filled_modes, hf_generating_function, hf_sector_distribution, sector_tail_bounds, TailKind};
pub use pure::{
    pure_hfb_canonical_form, pure_hfb_generating_function, pure_hfb_k0_parity, CanonicalBlocks,
    PairBlock, ParityStructure,
};
pub use spec::{validate, Check, QuasiFreeSpec, SpecJson, ValidationReport};
