//! Decoding transducers: the CTC topology `T`, the lexicon `L`, the grammar
//! `G` and their composition `TLG`.
//!
//! Symbol tables chain as frame tokens → phonemes → words. `T` and `L` carry
//! weight one on every path, so TLG path weights are grammar weights.

mod ctc_topology;
mod grammar;
mod lexicon;
mod tlg;

use thiserror::Error;

use crate::automata::FstError;
use crate::ctc::CtcError;

pub use ctc_topology::build_ctc_fst;
pub use grammar::{build_grammar_fst, build_unigram_fst, VocabFrequency, LN_10};
pub use lexicon::{build_lexicon_fst, Lexicon};
pub use tlg::compile_tlg;

#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("lexicon has no entries")]
    EmptyLexicon,
    #[error("word `{word}` has an empty pronunciation")]
    EmptyPronunciation { word: String },
    #[error("phoneme id {0} is not in the alphabet")]
    UnknownPhoneme(u32),
    #[error("n-gram `{0}` uses a word missing from the unigram section")]
    UnknownWord(String),
    #[error("frequency list is empty")]
    EmptyFrequencies,
    #[error("word `{0}` has count 0")]
    ZeroCount(String),
    #[error("smoothing must be finite and ≥ 0, got {0}")]
    InvalidSmoothing(f64),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Ctc(#[from] CtcError),
    #[error(transparent)]
    Fst(#[from] FstError),
}
