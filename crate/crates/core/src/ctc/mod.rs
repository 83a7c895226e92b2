//! Connectionist temporal classification.
//!
//! A CTC output layer emits one distribution over `K` tokens plus a blank per
//! frame. A label sequence `y` is scored by summing, over every frame-level
//! token string that collapses to `y`, the product of its frame
//! probabilities.

mod alphabet;
mod collapse;
mod forward_backward;
mod homophone;
mod posterior;

use thiserror::Error;

pub use alphabet::{PhonemeAlphabet, TokenId, BLANK_GLYPH, SILENCE};
pub use collapse::{collapse, enumerate_alignments, LabelSequence, MAX_ORACLE_FRAMES};
pub use forward_backward::{ctc_grad, ctc_log_prob};
pub use homophone::{homophone_mle, PositionalCategorical};
pub use posterior::{PosteriorSequence, BINARY_MAGIC, ROW_SUM_TOLERANCE};

#[derive(Debug, Error, PartialEq)]
pub enum CtcError {
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),
    #[error("token id {0} is outside the alphabet")]
    InvalidToken(TokenId),
    #[error("unknown token `{0}`")]
    UnknownToken(String),
    #[error("posterior has no frames")]
    NoFrames,
    #[error("frame {frame}: expected {expected} columns, found {found}")]
    ColumnMismatch { frame: usize, expected: usize, found: usize },
    #[error("frame {frame}: entry {column} is {value}, not a probability")]
    InvalidEntry { frame: usize, column: usize, value: f64 },
    #[error("frame {frame}: row sums to {sum}")]
    RowSum { frame: usize, sum: f64 },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{frames} frames exceeds the enumeration limit of {limit}")]
    TooManyFrames { frames: usize, limit: usize },
    #[error("label sequence has zero probability")]
    ZeroLikelihood,
    #[error("no words given")]
    EmptyInput,
    #[error("words differ in length")]
    UnequalLengths,
    #[error("position {position} sums to {sum}")]
    NotADistribution { position: usize, sum: f64 },
}
