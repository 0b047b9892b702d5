use thiserror::Error;

/// Errors surfaced by the library's fallible operations.
///
/// Internal invariant violations (e.g. a non-exact division in the
/// Macdonald formula) are not represented here; those abort with a
/// diagnostic because they indicate a bug, not bad input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid permutation word: {0}")]
    InvalidPermutation(String),
    #[error("invalid composition: {0}")]
    InvalidComposition(String),
    #[error("size {n} exceeds the supported bound {max}")]
    SizeBound { n: usize, max: usize },
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("subset cardinalities differ: {left} vs {right}")]
    CardinalityMismatch { left: usize, right: usize },
    #[error("grid sizes differ: {left} vs {right}")]
    GridMismatch { left: usize, right: usize },
    #[error("({row},{col}) is not a box of the diagram")]
    NotABox { row: usize, col: usize },
    #[error("({row},{col}) is not a pivot: no blank cell above it in its column")]
    NotAPivot { row: usize, col: usize },
    #[error("enumeration exceeded the configured cap of {cap} leaves")]
    LeafCapExceeded { cap: u64 },
    #[error("pattern {0} is not one of the twelve bound patterns")]
    UnsupportedPattern(String),
}
