//! Sum-free sets generated by binary sequences, and the machinery around them:
//! morphic words and their lazily extended fixed points, the bijection between
//! zero-one sequences and sum-free sets, the period-k-folding morphism family,
//! a non-standard positional numeration system, mechanical (Sturmian) words
//! with exact quadratic-surd arithmetic, and subword-complexity profiles.
//!
//! Every claimed identity between these objects is exposed as an executable
//! check that compares prefixes of two independently computed sequences and
//! reports the first mismatching index, exactly — no tolerances anywhere.
//!
//! With the default `parallel` feature the heavy inner loops (suffix sorting,
//! kernel grids) run on rayon; disabling default features yields a fully
//! sequential build with identical results.

pub mod complexity;
pub mod folding;
pub mod sturmian;
pub mod sumfree;
pub mod surd;
pub mod wnum;
pub mod words;

pub use words::{Letter, Morphism, MorphicStream, Word};

/// Library error type.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("letter {letter} outside alphabet of size {alphabet_size}")]
    LetterOutOfRange { letter: u32, alphabet_size: u32 },
    #[error("morphism has no image for letter {letter}")]
    MissingImage { letter: u32 },
    #[error("morphism image for letter {letter} is empty")]
    EmptyImage { letter: u32 },
    #[error("no iterative fixed point reachable from letter {seed}")]
    NoFixedPoint { seed: u32 },
    #[error("word contains fewer than two occurrences of 1")]
    InsufficientOnes,
    #[error("set is not sum-free: {x} + {y} = {z}")]
    NotSumFree { x: u64, y: u64, z: u64 },
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("digit {digit} exceeds the maximal digit {max} of the numeration system")]
    DigitTooLarge { digit: u32, max: u32 },
    #[error("slope must be an irrational number in (0, 1)")]
    InvalidSlope,
    #[error("stream violates a required hypothesis at index {index}: {detail}")]
    HypothesisViolated { index: u64, detail: String },
    #[error("difference value {value} at position {index} is outside {{1, 2}}")]
    PatternViolation { index: u64, value: u64 },
}

/// Outcome of an exact prefix-equality check.
///
/// Failures carry the first mismatching index (in the indexing convention of
/// the sequence being checked) and a human-readable description of the two
/// sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail { index: u64, detail: String },
}

impl Verdict {
    pub fn fail(index: u64, detail: impl Into<String>) -> Self {
        Verdict::Fail {
            index,
            detail: detail.into(),
        }
    }

    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }

    pub fn fail_index(&self) -> Option<u64> {
        match self {
            Verdict::Pass => None,
            Verdict::Fail { index, .. } => Some(*index),
        }
    }
}
