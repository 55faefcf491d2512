//! Elementary relations, unipotent factorizations and their certificates.

mod alternating;
mod blocks;
mod certificate;
mod lattice;
mod peel;
mod pipeline;
mod relations;
mod unipotent;
mod witness;

pub(crate) use certificate::Fields;
pub use blocks::{block_diag_factor, corner_factor, corner_factor_at, BlockDiagFactors, Corner};
pub use certificate::{
    class_sequence, ClassifiedFactor, FactorCertificate, FactorClass, ParsedFactorCertificate,
    UcWitness, Verification, VerifyFailure,
};
pub use relations::{commutator_bridge, elementary_product, steinberg_conjugate, BridgeIdentity, Elementary};
pub use peel::{factor_e, factor_e_parts, peel_once, stable_range_coeffs, EFactorization, PeelStep};
pub use alternating::{
    alternating_factor3, alternating_factor3_with, framed_factor3, AlternatingFactorization,
    AlternatingFailure, AlternatingOutcome, SearchLimits,
};
pub use pipeline::{factor_lu3u, factor_lu3u_with, Lu3uOutcome};
pub use unipotent::{superdiag_conjugator, tridiagonal_cover};
pub use witness::{q_witness, QWitness};
