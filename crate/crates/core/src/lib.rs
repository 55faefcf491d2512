//! Exact computations around word width in `SL_n(Z)`.
//!
//! The crate is organized by subsystem:
//!
//! * [`matrix`] integer and modular matrices, congruence predicates;
//! * [`words`] free-group words, parsing and evaluation;
//! * [`decomposition`] elementary relations, unipotent factorizations and
//!   replayable certificates;
//! * [`finite`] value sets, widths and closure computations in finite groups;
//! * [`padic`] truncated `p`-adic lifting and coset covers;
//! * [`constants`] the constant chain of the uniform bounds.

pub mod constants;
pub mod decomposition;
pub mod error;
pub mod finite;
pub mod matrix;
pub mod padic;
pub mod words;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/matrices.md")]
    mod matrices {}
    #[doc = include_str!("../../../book/src/words.md")]
    mod words {}
    #[doc = include_str!("../../../book/src/decomposition.md")]
    mod decomposition {}
    #[doc = include_str!("../../../book/src/finite.md")]
    mod finite {}
    #[doc = include_str!("../../../book/src/padic.md")]
    mod padic {}
}
