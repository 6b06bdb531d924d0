use thiserror::Error;

use crate::format::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable `{0}` occurs in no atom")]
    VariableWithoutAtom(String),

    #[error("unknown vertex id {0}")]
    UnknownVertex(usize),

    #[error("decomposition refers to unknown {0}")]
    IdMismatch(String),

    #[error("decomposition tree is malformed: {0}")]
    MalformedTree(String),

    #[error("decomposition is invalid: {0}")]
    DecompositionInvalid(String),

    #[error("decomposition is not a join tree (guard size must be one)")]
    WidthNotOne,

    #[error("decomposition is not a hingetree decomposition: {0}")]
    NotHinge(String),

    #[error("hypergraph is not acyclic")]
    NotAcyclic,

    #[error("query is not quantifier-free")]
    NotQuantifierFree,

    #[error("input too large for exhaustive search: {0}")]
    TooLarge(String),

    #[error("search budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("predicate `{predicate}` used with arity {used} but the relation has arity {stored}")]
    ArityMismatch { predicate: String, used: usize, stored: usize },

    #[error("missing decomposition: {0}")]
    MissingDecomposition(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::TooLarge(_) | Error::BudgetExceeded(_) => 2,
            Error::Internal(_) => 3,
            _ => 1,
        }
    }
}
