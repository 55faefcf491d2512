//! The bookkeeping behind the uniform width bounds.

use crate::padic::COVER_EXPONENT;

/// Word values needed for one conjugated unipotent factor.
pub const UNIPOTENT_CAPTURE: usize = 16;

/// Top-level factor classes of the congruence factorization.
pub const PIPELINE_CLASSES: [&str; 5] = ["L", "Uc", "Uc", "Uc", "U"];

/// One row of the constant chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstantStep {
    pub name: &'static str,
    pub value: usize,
    pub basis: String,
}

/// `16 · 5 = 80` for the congruence subgroup, then `80 + 7 = 87` overall.
pub fn constant_chain() -> Vec<ConstantStep> {
    let capture = UNIPOTENT_CAPTURE;
    let pipeline = PIPELINE_CLASSES.len();
    let congruence = capture * pipeline;
    let adelic = COVER_EXPONENT;
    vec![
        ConstantStep {
            name: "unipotent capture",
            value: capture,
            basis: "word values per conjugated unipotent factor".into(),
        },
        ConstantStep {
            name: "pipeline factors",
            value: pipeline,
            basis: format!("{} of the congruence factorization", PIPELINE_CLASSES.join(", ")),
        },
        ConstantStep {
            name: "congruence bound",
            value: congruence,
            basis: format!("= {capture} * {pipeline}, congruence subgroup step"),
        },
        ConstantStep {
            name: "adelic exponent",
            value: adelic,
            basis: "3 values mod p, then 4 values on gh*SL_n(Z_p; p)".into(),
        },
        ConstantStep {
            name: "global bound",
            value: congruence + adelic,
            basis: format!("= {congruence} + {adelic}, congruence bound plus adelic cover"),
        },
    ]
}
