use thiserror::Error;

/// Errors raised anywhere in the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("element {0} is not a two-sided identity")]
    NoIdentity(usize),
    #[error("table is not a Latin square: {axis} {index} repeats element {value}")]
    NotLatinSquare {
        axis: &'static str,
        index: usize,
        value: usize,
    },
    #[error("element {0} has no two-sided inverse")]
    NoInverse(usize),
    #[error("associativity fails for ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),

    #[error("invalid permutation: {0}")]
    InvalidPerm(String),
    #[error("action is not a homomorphism at ({0}, {1})")]
    NotHomomorphism(usize, usize),
    #[error("action is not effective: element {0} acts trivially")]
    NotEffective(usize),

    #[error("order limit exceeded: {size} > {cap}")]
    OrderLimitExceeded { size: usize, cap: usize },
    #[error("search budget of {0} nodes exhausted")]
    SearchBudgetExceeded(u64),

    #[error("invalid base pair: {0}")]
    InvalidBasePair(String),
    #[error("unknown zoo name: {0}")]
    UnknownName(String),

    #[error("nonzero diagonal entry at {0}")]
    NonzeroDiagonal(usize),
    #[error("asymmetric entry at ({0}, {1})")]
    AsymmetricEntry(usize, usize),
    #[error("off-diagonal entry at ({0}, {1}) is not positive")]
    NegativeOrZeroOffDiagonal(usize, usize),
    #[error("triangle inequality fails at ({0}, {1}, {2})")]
    TriangleViolation(usize, usize, usize),
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("invalid separation input: {0}")]
    InvalidSeparation(String),
    #[error("no admissible shrinking found for pair ({0}, {1})")]
    InfeasibleSeparation(usize, usize),
    #[error("perturbation budget underflow at step {0}")]
    BudgetUnderflow(usize),
    #[error("metric is not invariant under the action")]
    NotInvariant,
    #[error("map lies in the symmetrized hull of the left translations")]
    NotOutsideHull,
    #[error("group is not abelian")]
    NotAbelian,

    #[error("(group order, points) = (1, 2) admits no exact realization")]
    ForbiddenCardinality,
    #[error("action is not hull-closed")]
    NotHullClosed,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("classification routes disagree: {0}")]
    RouteMismatch(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// True for errors caused by exhausting a search or size cap.
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            Error::SearchBudgetExceeded(_) | Error::OrderLimitExceeded { .. } | Error::BudgetUnderflow(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
