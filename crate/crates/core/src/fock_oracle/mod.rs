//! Exact dense Fock-space engine used as ground truth for every closed form.

mod basis;
mod field;
mod operator;
mod product;
mod state;

pub use basis::{annihilate, apply_monomial, create, jw_sign, FockBasis, Ladder, MODE_CAP};
pub use field::{apply_product, FieldOperator};
pub use operator::{exp_number, mode_operators, number_operator, sector_projector, DenseOperator};
pub use product::{isometry_gram, product_state_assemble, ModeBlock, TensorLayout};
pub use state::{
    bogoliubov_vacuum, expectation, quasi_free_oracle_state, quasi_free_oracle_state_with,
    sector_distribution, OracleState, StateDefects, VacuumLayout,
};
