//! Exact matrix arithmetic over `Z` and `Z/m`, and the membership predicates
//! for the congruence filtration of `SL_n(Z)`.

mod int;
mod modular;

pub use int::{
    elementary, in_congruence, in_lower, in_upper, mat_inv, mat_mul, mennicke_in_e,
    mennicke_violation, parse_matrix, product, random_elementary_product, reduce_mod, CongruenceLevel, IntMatrix,
};
pub use modular::{inv_mod, ModMatrix};
pub(crate) use modular::{mul_into, mulmod, pow_mod};
