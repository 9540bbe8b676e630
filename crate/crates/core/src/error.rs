use thiserror::Error;

/// Errors raised by the algebra, unification and admissibility routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown symbol `{symbol}` at byte {pos}")]
    UnknownSymbol { symbol: String, pos: usize },
    #[error("symbol `{symbol}` at byte {pos} expects {expected} argument(s), got {found}")]
    Arity {
        symbol: String,
        pos: usize,
        expected: usize,
        found: usize,
    },
    #[error("variable `{0}` is not bound")]
    UnboundVariable(String),
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("partition is not a congruence: {0}")]
    NotCongruence(String),
    #[error("map is not an injective homomorphism: {0}")]
    NotEmbedding(String),
    #[error("empty generating set and no constants in the signature")]
    EmptyGeneration,
    #[error("not unifiable: {0}")]
    NotUnifiable(String),
    #[error("clause is not admissible: {0}")]
    NotAdmissible(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
