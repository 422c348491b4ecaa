use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Gl2Error {
    /// A defining bracket identity fails on the supplied operators.
    #[error("bracket relation violated: {relation}")]
    BracketFailure { relation: String },
    /// A generalized eigenspace fails to be free over the base ring, which
    /// signals violated flatness of the input module.
    #[error("generalized eigenspace is not free over the base: {detail}")]
    NotFree { detail: String },
}
