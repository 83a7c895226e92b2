//! Frame-synchronous Viterbi beam search over a compiled TLG graph, an
//! exhaustive oracle decoder for checking it, and a parallel batch driver.

mod batch;
mod oracle;
mod search;

use thiserror::Error;

use crate::automata::{Label, SymbolTable};
use crate::ctc::CtcError;
use crate::lm::LmError;

pub use batch::decode_batch;
pub use oracle::{grammar_cost, oracle_decode, Convention, OracleLimits, OracleLm};
pub use search::decode;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecodeConfig {
    /// Most hypotheses kept after each frame.
    pub beam_width: usize,
    /// Multiplier on `−ln p(token | frame)`.
    pub acoustic_scale: f64,
    /// Cost added per emitted word.
    pub word_insertion_penalty: f64,
    /// Distinct word sequences returned.
    pub nbest: usize,
}

impl Default for DecodeConfig {
    fn default() -> Self {
        DecodeConfig { beam_width: 64, acoustic_scale: 1.0, word_insertion_penalty: 0.0, nbest: 1 }
    }
}

impl DecodeConfig {
    pub fn validate(&self) -> Result<(), DecodeError> {
        if self.beam_width == 0 {
            return Err(DecodeError::InvalidConfig("beam width must be at least 1".into()));
        }
        if !(self.acoustic_scale > 0.0 && self.acoustic_scale.is_finite()) {
            return Err(DecodeError::InvalidConfig(format!("acoustic scale must be > 0, got {}", self.acoustic_scale)));
        }
        if !self.word_insertion_penalty.is_finite() {
            return Err(DecodeError::InvalidConfig("word insertion penalty must be finite".into()));
        }
        if self.nbest == 0 {
            return Err(DecodeError::InvalidConfig("nbest must be at least 1".into()));
        }
        Ok(())
    }
}

/// A decoded word sequence and its total cost (`−ln` score).
#[derive(Debug, Clone, PartialEq)]
pub struct Hypothesis {
    pub words: Vec<Label>,
    pub cost: f64,
}

impl Hypothesis {
    /// Words as text; unknown ids render as `#id`.
    pub fn text(&self, words: &SymbolTable) -> String {
        self.words
            .iter()
            .map(|&w| words.symbol(w).map_or_else(|| format!("#{w}"), str::to_string))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Ascending cost, then lexicographic word ids.
pub(crate) fn rank(a: &Hypothesis, b: &Hypothesis) -> std::cmp::Ordering {
    a.cost.total_cmp(&b.cost).then_with(|| a.words.cmp(&b.words))
}

#[derive(Debug, Error, PartialEq)]
pub enum DecodeError {
    #[error("graph input symbols do not match the posterior alphabet")]
    AlphabetMismatch,
    #[error("decoding graph is empty")]
    EmptyGraph,
    #[error("decoding graph must use the tropical semiring")]
    NotTropical,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("frame {frame}: negative-cost epsilon cycle")]
    EpsilonCycle { frame: usize },
    #[error("oracle limits exceeded: {0}")]
    LimitsExceeded(String),
    #[error(transparent)]
    Ctc(#[from] CtcError),
    #[error(transparent)]
    Lm(#[from] LmError),
}
