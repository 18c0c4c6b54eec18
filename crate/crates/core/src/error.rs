use crate::syntax::VarId;

/// Errors raised by the library. Semantic checks never use this type for
/// their verdicts; violations found by checkers land in a [`crate::Report`].
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("syntax error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("expected a {expected}, found a {found}")]
    WrongSort {
        expected: &'static str,
        found: &'static str,
    },
    #[error("term is not closed")]
    OpenTerm,
    #[error("formula is not a sentence (free variables: {0})")]
    NotSentence(String),
    #[error("formula contains quantifiers")]
    Quantified,
    #[error("assignment does not cover variable {0}")]
    MissingVariable(VarId),
    #[error("sequence must be non-empty")]
    EmptySequence,
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("index {index} out of range 0..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("not a permutation: {0}")]
    InvalidPermutation(String),
    #[error("variable clash: {0}")]
    VariableClash(String),
    #[error("recursion cap exceeded: {0}")]
    CapExceeded(String),
    #[error("valuation has no value for atom {0}")]
    MissingAtom(usize),
    #[error("formula refers to atom {0} not present in the atom table")]
    AtomTableMismatch(usize),
    #[error("class order is not antisymmetric: {0}")]
    Antisymmetry(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
