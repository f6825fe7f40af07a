use thiserror::Error;

/// Errors raised by the analysis routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{what} = {value} exceeds the configured limit {limit}")]
    LimitExceeded {
        what: &'static str,
        value: usize,
        limit: usize,
    },
    #[error("set index {index} is outside 1..={r}")]
    IndexOutOfRange { index: usize, r: usize },
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("invalid system: {0}")]
    InvalidSystem(String),
    #[error("element {0} is not a canonical coset representative")]
    NonCanonicalElement(String),
    #[error("family sets are not pairwise disjoint: {0} occurs twice")]
    NotDisjoint(String),
    #[error("family is empty")]
    EmptyFamily,
    #[error("the identity rotation fixes every point")]
    IdentityInput,
    #[error("subgroup generator {0} is a proper power")]
    ProperPower(String),
    #[error("base point collision between {0} and {1}")]
    PointCollision(String, String),
    #[error("every fallback base point collides")]
    FallbacksExhausted,
    #[error("{statements} statements but only {generators} generators")]
    TooManyStatements {
        statements: usize,
        generators: usize,
    },
    #[error("statement {index} is improper ({reason}); completeness fails for improper statements, e.g. A1 ~ {{}} forces A1 A2 ~ A2")]
    ImproperStatement { index: usize, reason: String },
    #[error("precondition failed on statement {statement}: {detail}")]
    PreconditionFailed { statement: usize, detail: String },
    #[error("path length {length} exceeds the enumeration budget {budget}")]
    BudgetExceeded { length: usize, budget: usize },
    #[error("system is not numerically consistent")]
    NotNumericallyConsistent,
    #[error("family violates the witnessed statements")]
    FamilyDoesNotSatisfy,
    #[error("inconsistent evidence for {node}: {detail}")]
    InconsistentEvidence { node: String, detail: String },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown set name `{name}` at line {line}, column {column}")]
    UnknownSetName {
        name: String,
        line: usize,
        column: usize,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
