use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("operands live in different fields")]
    FieldMismatch,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("the zero polynomial is not allowed here")]
    ZeroPolynomial,
    #[error("a non-constant polynomial is required")]
    ConstantPolynomial,
    #[error("polynomial {0} is not irreducible")]
    NotIrreducible(String),
    #[error("polynomial {0} is not square-free")]
    NotSquarefree(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("completed L-function division by the trivial factor left remainder {remainder} (modulus {modulus})")]
    InexactCompletion { modulus: String, remainder: i128 },
    #[error("consistency check failed: {0}")]
    Consistency(String),
    #[error("family is empty")]
    EmptyFamily,
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
}

impl Error {
    /// True for errors that signal a broken internal invariant rather than bad input.
    pub fn is_invariant_violation(&self) -> bool {
        matches!(self, Error::InexactCompletion { .. } | Error::Consistency(_) | Error::Overflow(_))
    }
}
