use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty set not an element of the power monoid")]
    EmptySet,

    #[error("empty interval: {0} > {1}")]
    EmptyInterval(i64, i64),

    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),

    #[error("set of {size} elements exceeds the limit of {limit}")]
    TooLarge { size: u128, limit: u128 },

    #[error("malformed set literal: unexpected token `{0}`")]
    Parse(String),

    #[error("invalid run profile: {0}")]
    InvalidRuns(String),

    #[error("{0} is not in the reduced monoid (0 missing)")]
    NotZeroSet(String),

    #[error("bounds ({lo},{hi}) do not straddle 0")]
    BadBounds { lo: i64, hi: i64 },

    #[error("image undefined for {0}")]
    ImageUndefined(String),

    #[error("table is not injective: {0} has two preimages")]
    NotInjective(String),

    #[error("not a valid image pair: {0}")]
    InvalidImagePair(String),

    #[error("precondition k >= max(x-, x+) violated: k = {k}, need at least {need}")]
    KTooSmall { k: u64, need: u64 },

    #[error("not a consistent pair: {0}")]
    InconsistentPair(String),

    #[error("divergence precondition violated: {0}")]
    Divergence(String),

    #[error("c = {c} is below the minimal admissible value c0 = {c0}")]
    CBelowMinimum { c: i64, c0: i64 },

    #[error("window half-width {0} outside 1..=6")]
    WindowOutOfRange(u32),

    #[error("window map invalid: {0}")]
    InvalidWindowMap(String),
}
