use thiserror::Error;

/// Errors raised by the algebra, Lazard, Steenrod and MGL modules.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("rewrite guard exceeded while normalizing (depth {0}); the rewrite rules do not terminate")]
    RewriteLimit(usize),

    #[error("coefficient ring or generator table mismatch")]
    RingMismatch,

    #[error("invalid generator table: {0}")]
    InvalidTable(String),

    #[error("inner series has a nonzero constant term")]
    NonzeroConstantTerm,

    #[error("series does not start with x (leading coefficient must be 1)")]
    NotInvertible,

    #[error("requested {what} beyond truncation {bound}")]
    BeyondTruncation { what: String, bound: u32 },

    #[error("element has weight {got}, expected {expected}")]
    WrongWeight { got: u32, expected: String },

    #[error("bidegree window exceeded: first degree {needed} > {max}")]
    WindowExceeded { needed: i64, max: i64 },

    #[error("invalid context: {0}")]
    InvalidContext(String),

    #[error("generator search infeasible in weight {0}")]
    Infeasible(u32),

    #[error("inadequate generator set: {0}")]
    Inadequate(String),

    #[error("matrix is singular in weight {0}")]
    Singular(u32),

    #[error("not a subsequence of the generator set: {0}")]
    NotSubsequence(String),

    #[error("left-ideal expansion is not triangular: {0}")]
    NotTriangular(String),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("serialization error: {0}")]
    Serde(String),
}

pub type Result<T> = std::result::Result<T, Error>;
