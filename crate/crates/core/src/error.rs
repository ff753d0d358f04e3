use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("no value assigned to indeterminate `{0}`")]
    MissingAssignment(String),

    #[error("coefficient {0} is not an integer and the target ring has no rational scaling")]
    NonIntegerCoefficient(String),

    #[error("truncation orders differ: {0} vs {1}")]
    TruncationMismatch(usize, usize),

    #[error("constant term is not the ring identity")]
    NotUnitConstant,

    #[error("ring is not Q-linear: {0}")]
    NotRational(String),

    #[error("polynomial is not symmetric under the transposition ({0} {1})")]
    NotSymmetric(String, String),

    #[error("elements belong to different models: `{0}` vs `{1}`")]
    ModelMismatch(String, String),

    #[error("invalid model `{model}`: {reason}")]
    InvalidModel { model: String, reason: String },

    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),

    #[error("element has components in degrees of the wrong parity: {0}")]
    WrongParity(String),

    #[error("form is not closed: {0}")]
    NotClosed(String),

    #[error("arity mismatch: triple has rank {rank}, perturbation has {given} entries")]
    ArityMismatch { rank: usize, given: usize },

    #[error("character groups differ")]
    GroupMismatch,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("cache i/o: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}
