//! Backoff n-gram language models: ARPA text I/O, Katz estimation and
//! recursive backoff scoring. Values are log10 probabilities.

mod arpa;
mod katz;

use thiserror::Error;

pub use arpa::{lm_log_prob, parse_arpa, serialize_arpa, ArpaLm, NgramEntry, LOG10_ZERO};
pub use katz::{train_katz, DEFAULT_DISCOUNT_THRESHOLD, FALLBACK_DISCOUNT, MAX_ORDER};

pub const BOS: &str = "<s>";
pub const EOS: &str = "</s>";
pub const UNK: &str = "<unk>";

#[derive(Debug, Error, PartialEq)]
pub enum LmError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("order {order}: header declares {declared} n-grams, found {found}")]
    CountMismatch { order: usize, declared: usize, found: usize },
    #[error("missing section {0}")]
    MissingSection(String),
    #[error("n-gram `{0}` has no prefix at the order below")]
    PrefixClosure(String),
    #[error("n-gram `{0}` has a log10 probability above 0")]
    ProbabilityOutOfRange(String),
    #[error("word `{0}` is not in the vocabulary and the model has no <unk>")]
    OutOfVocabulary(String),
    #[error("empty corpus")]
    EmptyCorpus,
    #[error("order {0} is outside 1..=5")]
    UnsupportedOrder(usize),
    #[error("{0}")]
    Invalid(String),
}

/// Splits corpus text into sentences: one per nonblank line, whitespace
/// tokens.
pub fn parse_corpus(text: &str) -> Vec<Vec<String>> {
    text.lines().filter(|l| !l.trim().is_empty()).map(|l| l.split_whitespace().map(str::to_string).collect()).collect()
}
