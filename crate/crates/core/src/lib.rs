//! Phoneme-lattice decoding.
//!
//! Per-frame phoneme posteriors (a CTC output layer) are scored and decoded
//! to words through a composed `T ∘ L ∘ G` transducer: `T` collapses CTC
//! repeats and blanks, `L` maps phoneme strings to words and `G` is a backoff
//! n-gram model. The crate also carries the evaluation side: edit-distance
//! alignments, pooled error rates with bootstrap standard errors, and
//! phoneme confusion counts.

pub mod automata;
pub mod ctc;
pub mod decode;
pub mod graphs;
pub mod lm;
pub mod metrics;
pub mod simulate;

pub use automata::{Semiring, SymbolTable, Wfst};
pub use ctc::{PhonemeAlphabet, PosteriorSequence};
pub use decode::{DecodeConfig, Hypothesis};
pub use graphs::Lexicon;
pub use lm::ArpaLm;
pub use metrics::{AlignmentTrace, ErrorReport};
