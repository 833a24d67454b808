//! Exact integer-lattice algebra: normal forms, unimodular basis completion,
//! block extraction and direct-limit invariants.

mod basis;
mod limit;
mod matrix;
mod normal_form;

pub use basis::{complete_basis, conjugate_and_extract, BasisChange};
pub use limit::{
    eventual_rank_mod, free_group, is_nilpotent_mod, primes_up_to, DirectLimit, DEFAULT_MAX_PRIME,
};
pub use matrix::IntMatrix;
pub use normal_form::{hnf, inverse_unimodular, is_unimodular, snf, Hermite, Smith};
