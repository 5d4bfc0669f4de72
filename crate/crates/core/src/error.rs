use thiserror::Error;

/// Errors raised by the decision procedures and generators.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("unsupported representation: {0}")]
    UnsupportedRepresentation(String),

    #[error("precondition violated at index {index}: {detail}")]
    Precondition { index: usize, detail: String },

    #[error("rejection sampling exhausted after {attempts} attempts")]
    RetryExhausted { attempts: usize },

    #[error("counterexample check `{check}` failed: {detail}")]
    CounterexampleInvalid { check: String, detail: String },

    #[error("colorful intersection fails at tuple {}", display_tuple(.tuple))]
    ColorfulViolation { tuple: Vec<usize> },

    #[error("certificate inconsistency: {0}")]
    CertificateInconsistency(String),

    #[error("wrong ambient dimension: expected {expected}, found {found}")]
    WrongDimension { expected: usize, found: usize },

    #[error("family {family} has {found} members, expected k + 2 = {expected}")]
    WrongFamilySize {
        family: usize,
        expected: usize,
        found: usize,
    },

    #[error("no family admits its transversal on a valid instance")]
    TheoremViolation,

    #[error("invalid transversal witness: {0}")]
    WitnessInvalid(String),

    #[error("internal solver inconsistency: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Renders a 0-based tuple in the 1-based form used in reports.
pub fn display_tuple(tuple: &[usize]) -> String {
    let parts: Vec<String> = tuple.iter().map(|i| (i + 1).to_string()).collect();
    format!("({})", parts.join(","))
}
