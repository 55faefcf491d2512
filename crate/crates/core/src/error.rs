use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix is not unimodular (determinant {det})")]
    NotUnimodular { det: String },

    #[error("invalid index ({i}, {j}) for dimension {n}")]
    InvalidIndex { n: usize, i: usize, j: usize },

    #[error("modulus must be at least 2, got {0}")]
    InvalidModulus(u64),

    #[error("congruence level must be at least 1")]
    InvalidLevel,

    #[error("matrix text parse error at offset {offset}: {message}")]
    MatrixParse { offset: usize, message: String },

    #[error("word parse error at offset {offset}: {message}")]
    WordParse { offset: usize, message: String },

    #[error("tuple has {got} elements but the word uses {needed} generators")]
    TupleTooShort { needed: usize, got: usize },

    #[error("the word is trivial in the free group")]
    TrivialWord,

    #[error("elementaries e_({r},{s}) and e_({i},{j}) fall outside the commutator relations")]
    OutOfRelation { r: usize, s: usize, i: usize, j: usize },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("budget exceeded: {what} needs {needed}, budget is {budget}")]
    BudgetExceeded {
        what: &'static str,
        needed: u128,
        budget: u128,
    },

    #[error("differential is rank deficient mod p: rank {rank}, needed {needed}")]
    RankDeficient { rank: usize, needed: usize },

    #[error("certificate parse error on line {line}: {message}")]
    CertificateParse { line: usize, message: String },

    #[error("internal invariant broken: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
