use thiserror::Error;

/// Errors raised by the engine. Variants map one-to-one onto the failure
/// modes of the individual operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("signature has no symbols")]
    EmptySignature,
    #[error("symbol `{0}` declared more than once")]
    DuplicateSymbol(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("symbol `{symbol}` expects {expected} argument(s), got {found}")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("atom `{0}` has no binding in the substitution")]
    UnboundAtom(String),
    #[error("`{0}` is declared both as a variable and as a parameter")]
    NameClash(String),
    #[error("`{0}` is declared more than once")]
    DuplicateName(String),
    #[error("undeclared name `{0}`")]
    UndeclaredName(String),
    #[error("no equation for variable `{0}`")]
    MissingEquation(String),
    #[error("`{0}` is reserved for the cutting symbol")]
    ReservedParameter(String),
    #[error("size limit exceeded: {needed} > budget {budget}")]
    SizeLimitExceeded { needed: u128, budget: u64 },
    #[error("trees are built over different signatures")]
    SignatureMismatch,
    #[error("state index {0} out of range")]
    InvalidState(usize),
    #[error("no assignment for parameter `{0}`")]
    MissingAssignment(String),
    #[error("signature is not unary: `{0}` has arity {1}")]
    NonUnarySignature(String, usize),
    #[error("tree has parameter leaves")]
    HasParameters,
    #[error("lasso period is empty")]
    EmptyPeriod,
    #[error("variable `{0}` uses a parameter inside a term; flatten it first")]
    ParameterAtom(String),
    #[error("parameters of the first system do not match the variables of the second")]
    ParameterMismatch,
    #[error("anchor is not a coalgebra-to-algebra morphism")]
    InvalidAnchor,
    #[error("`{0}` is not an element of the carrier")]
    UnknownElement(String),
    #[error("table for `{symbol}` has {found} entries, expected {expected}")]
    IncompleteTable {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("probe size {given} is below the minimum {required}")]
    ProbeTooSmall { given: usize, required: usize },
    #[error("no symbol of arity at least 2")]
    NoLargeAritySymbol,
    #[error("axiom side uses a parameter atom `{0}`; axioms range over variables")]
    AxiomParameter(String),
    #[error("term uses atom `{0}` outside the given atom set")]
    ForeignAtom(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
