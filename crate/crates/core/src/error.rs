use thiserror::Error;

use crate::word::Word;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("base must be at least 2, got {0}")]
    InvalidBase(u32),

    #[error("digit {digit} is out of range for base {base}")]
    InvalidDigit { digit: u32, base: u32 },

    #[error("base mismatch: {left} vs {right}")]
    BaseMismatch { left: u32, right: u32 },

    #[error("splitting count must be positive")]
    InvalidSplitCount,

    #[error("family index m must be positive")]
    InvalidFamilyIndex,

    #[error("{what} would generate {needed} items, exceeding the cap of {cap}")]
    CapExceeded {
        what: &'static str,
        needed: u128,
        cap: usize,
    },

    #[error("denominator is zero")]
    ZeroDenominator,

    #[error("denominator {den} is divisible by {base}: not a {base}-adic integer")]
    NotAnInteger { den: String, base: u32 },

    #[error("leaf counts differ: {source_leaves} vs {target_leaves}")]
    LeafCountMismatch {
        source_leaves: usize,
        target_leaves: usize,
    },

    #[error("not a tile: {0}")]
    NotATile(#[from] TileViolation),

    #[error("invalid leaf bijection: {0}")]
    InvalidBijection(String),

    #[error("need at least {needed} digits, have {available}")]
    InsufficientPrecision { needed: usize, available: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

/// First condition a candidate leaf set violates.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TileViolation {
    #[error("empty leaf set")]
    Empty,

    #[error("the trivial tile {{ε}} is excluded")]
    Trivial,

    #[error("leaf {0} appears twice")]
    Duplicate(Word),

    #[error("prefix-freeness violated: {prefix} is a prefix of {word}")]
    NotPrefixFree { prefix: Word, word: Word },

    #[error("completeness violated: {0} has no leaf prefix")]
    Uncovered(Word),

    #[error("leaf {word} has base {found}, expected {expected}")]
    MixedBase {
        word: Word,
        expected: u32,
        found: u32,
    },
}
