//! Evaluation: Levenshtein alignments, pooled error rates with bootstrap
//! standard errors, and confusion / insertion-deletion summaries.

mod confusion;
mod edit;
mod rate;

use thiserror::Error;

pub use confusion::{confusion_counts, ConfusionSummary};
pub use edit::{edit_distance, AlignmentTrace, EditOp};
pub use rate::{bootstrap_se, error_rate, tokenize, ErrorReport, Unit, DEFAULT_RESAMPLES, MIN_RESAMPLES};

#[derive(Debug, Error, PartialEq)]
pub enum MetricsError {
    #[error("no utterance pairs")]
    EmptyPairs,
    #[error("total reference length is zero")]
    ZeroReferenceLength,
    #[error("{0} bootstrap resamples is below the minimum of {MIN_RESAMPLES}")]
    TooFewResamples(usize),
    #[error("token id {token} is outside an alphabet of {size}")]
    TokenOutOfRange { token: usize, size: usize },
    #[error("csv: {0}")]
    Csv(String),
}
