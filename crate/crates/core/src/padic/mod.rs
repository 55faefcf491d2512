//! Truncated `p`-adic arithmetic: polynomial maps, Newton lifting, the map
//! `Φ_{g,h}`, sampled coset covers and width bounds over `SL_n(Z/p^K)`.

mod bound;
mod cover;
mod matrix;
mod newton;
mod phi;
mod poly;
mod solve;

pub use bound::{
    jordan_bracket_rank, level_k, padic_width_bound, padic_width_bound_with, roots_of_unity, BoundCase, PadicBound,
};
pub use cover::{
    word_coset_cover, word_coset_cover_with, BasePair, CoverOptions, CoverSample, CoverStatus, LiftCertificate,
    LiftVerification, WordFactor, COVER_EXPONENT,
};
pub use matrix::TruncatedPadicMatrix;
pub use newton::{newton_lift, NewtonLift};
pub use phi::phi_map;
pub use poly::{pval, Poly, PolyMapDescriptor};
pub use solve::{linear_solve_mod, valuation};
