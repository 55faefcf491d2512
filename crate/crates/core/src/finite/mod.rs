//! Finite quotients `SL_n(Z/m)`: enumeration, word value sets, widths,
//! covering and closure exponents, and sums of conjugates in `sl_n(F_p)`.

pub(crate) mod cover;
pub(crate) mod lie;
pub(crate) mod linalg;
mod set;
mod table;

pub use cover::{diff_rank, generates, greedy_cover};
pub use lie::{
    conj_sum_decompose, conj_sum_decompose_with, curve_point, is_prime, ladder_bound, random_lie, two_squares,
    ConjSum, LieMatrix, Rung,
};
pub use set::{
    closure, closure_exponent, power_product, value_set, value_set_with, width, width_with, SymSet, ValueSetOptions,
    Width,
};
pub use table::{enumerate_group, enumerate_group_with_budget, sl_order, FiniteGroupTable, DEFAULT_ELEMENT_BUDGET};
