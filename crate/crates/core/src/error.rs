use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
    #[error("idempotent search incomplete: {0}")]
    IdempotentSearchIncomplete(String),
    #[error("algebra is infinite dimensional (no closure within path length {0})")]
    InfiniteDimensional(usize),
    #[error("malformed input, line {line}: {msg}")]
    MalformedSpec { line: usize, msg: String },
    #[error("no realization available for {0}")]
    RealizationUnavailable(String),
    #[error("composition data unavailable in {0}")]
    CompositionUnavailable(String),
    #[error("rank unknown: model has no registered silting object")]
    RankUnknown,
    #[error("mutation undefined: {0}")]
    MutationUndefined(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("no silting subcategory contains {0}")]
    NoSiltingExtension(String),
    #[error("extremum not unique: {0}")]
    NonUniqueExtremum(String),
    #[error("witness search exhausted (multiplicity bound {bound}): {what}")]
    WitnessSearchExhausted { what: String, bound: usize },
    #[error("undecided identity between {0} and {1}")]
    UndecidedIdentity(String, String),
    #[error("rewriting failed: {0}")]
    RewritingFailed(String),
    #[error("homomorphism count budget exceeded: {0}")]
    HomCountBudgetExceeded(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn malformed(line: usize, msg: impl Into<String>) -> Error {
    Error::MalformedSpec { line, msg: msg.into() }
}
