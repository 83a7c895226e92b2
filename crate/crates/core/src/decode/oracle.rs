//! Exhaustive decoding for small instances: every word sequence within the
//! limits is scored over every pronunciation and every CTC alignment.

use std::collections::{BTreeSet, HashMap};

use super::{rank, DecodeConfig, DecodeError, Hypothesis};
use crate::automata::{log_add, Label, StateId, Wfst, EPSILON};
use crate::ctc::{enumerate_alignments, LabelSequence, PosteriorSequence, TokenId};
use crate::graphs::{Lexicon, LN_10};
use crate::lm::{lm_log_prob, ArpaLm};

pub const MAX_ORACLE_FRAMES: usize = 8;
pub const MAX_ORACLE_VOCABULARY: usize = 6;
pub const MAX_ORACLE_WORDS: usize = 3;

/// How alignments of one word sequence combine.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convention {
    /// Best single alignment, as the beam search scores.
    Viterbi,
    /// Sum over all alignments: the CTC likelihood.
    FullSum,
}

/// Source of the language-model cost of a word sequence.
#[derive(Debug, Clone, Copy)]
pub enum OracleLm<'a> {
    /// `−ln` of the ARPA sentence probability, markers included.
    Arpa(&'a ArpaLm),
    /// Cheapest accepting path through a grammar acceptor.
    Grammar(&'a Wfst),
    /// No language model: every sequence costs zero.
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimits {
    pub max_words: usize,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits { max_words: MAX_ORACLE_WORDS }
    }
}

/// Cheapest path of `g` accepting exactly `words`, ε-arcs included.
pub fn grammar_cost(g: &Wfst, words: &[Label]) -> Result<Option<f64>, DecodeError> {
    let Some(start) = g.start() else { return Ok(None) };
    let mut dist: HashMap<StateId, f64> = HashMap::from([(start, 0.0)]);
    epsilon_closure(g, &mut dist)?;
    for &w in words {
        let mut next: HashMap<StateId, f64> = HashMap::new();
        for (&s, &d) in &dist {
            for a in g.arcs(s).iter().filter(|a| a.ilabel == w) {
                let c = d + a.weight;
                next.entry(a.nextstate).and_modify(|x| *x = x.min(c)).or_insert(c);
            }
        }
        dist = next;
        epsilon_closure(g, &mut dist)?;
    }
    Ok(dist.iter().filter_map(|(&s, &d)| g.final_weight(s).map(|f| d + f)).min_by(f64::total_cmp))
}

/// Bellman-Ford over ε-arcs.
fn epsilon_closure(g: &Wfst, dist: &mut HashMap<StateId, f64>) -> Result<(), DecodeError> {
    for _ in 0..=g.num_states() {
        let mut changed = false;
        let snapshot: Vec<(StateId, f64)> = dist.iter().map(|(&s, &d)| (s, d)).collect();
        for (s, d) in snapshot {
            for a in g.arcs(s).iter().filter(|a| a.ilabel == EPSILON) {
                let c = d + a.weight;
                let slot = dist.entry(a.nextstate).or_insert(f64::INFINITY);
                if c < *slot {
                    *slot = c;
                    changed = true;
                }
            }
        }
        if !changed {
            return Ok(());
        }
    }
    Err(DecodeError::EpsilonCycle { frame: 0 })
}

/// Best word sequence by exhaustive search, ranked like [`decode`]:
/// `acoustic_scale · acoustic + lm + word_insertion_penalty · words`.
///
/// [`decode`]: super::decode
pub fn oracle_decode(
    p: &PosteriorSequence,
    lexicon: &Lexicon,
    lm: OracleLm<'_>,
    cfg: &DecodeConfig,
    limits: OracleLimits,
    convention: Convention,
) -> Result<Option<Hypothesis>, DecodeError> {
    if p.num_frames() > MAX_ORACLE_FRAMES {
        return Err(DecodeError::LimitsExceeded(format!("{} frames > {MAX_ORACLE_FRAMES}", p.num_frames())));
    }
    if lexicon.num_words() > MAX_ORACLE_VOCABULARY {
        return Err(DecodeError::LimitsExceeded(format!("{} words > {MAX_ORACLE_VOCABULARY}", lexicon.num_words())));
    }
    if limits.max_words > MAX_ORACLE_WORDS {
        return Err(DecodeError::LimitsExceeded(format!(
            "{} words per sequence > {MAX_ORACLE_WORDS}",
            limits.max_words
        )));
    }
    let alphabet = p.alphabet().clone();
    let frames = p.num_frames();
    let mut acoustic_cache: HashMap<Vec<TokenId>, Vec<f64>> = HashMap::new();
    let mut alignment_costs = |phones: &[TokenId]| -> Result<Vec<f64>, DecodeError> {
        if let Some(c) = acoustic_cache.get(phones) {
            return Ok(c.clone());
        }
        let y = LabelSequence::new(phones.to_vec(), &alphabet)?;
        let costs: Vec<f64> = if y.min_frames() > frames {
            Vec::new()
        } else {
            enumerate_alignments(&y, frames, &alphabet)?
                .iter()
                .map(|u| u.iter().enumerate().map(|(t, &k)| -p.get(t, k).ln()).sum())
                .collect()
        };
        acoustic_cache.insert(phones.to_vec(), costs.clone());
        Ok(costs)
    };

    let vocab: Vec<Label> = (1..=lexicon.num_words() as Label).collect();
    let mut best: Option<Hypothesis> = None;
    let mut stack: Vec<Vec<Label>> = vec![Vec::new()];
    while let Some(sequence) = stack.pop() {
        if sequence.len() < limits.max_words {
            for &w in &vocab {
                let mut longer = sequence.clone();
                longer.push(w);
                stack.push(longer);
            }
        }
        let lm_cost = match lm {
            OracleLm::None => 0.0,
            OracleLm::Grammar(g) => match grammar_cost(g, &sequence)? {
                Some(c) => c,
                None => continue,
            },
            OracleLm::Arpa(model) => {
                let text: Vec<&str> =
                    sequence.iter().map(|&w| lexicon.words().symbol(w).expect("lexicon word")).collect();
                -lm_log_prob(model, &text)? * LN_10
            }
        };
        // every distinct phoneme string the sequence can be pronounced as
        let mut spellings: BTreeSet<Vec<TokenId>> = BTreeSet::from([Vec::new()]);
        for &w in &sequence {
            spellings = spellings
                .iter()
                .flat_map(|prefix| lexicon.pronunciations(w).map(move |pron| [prefix.as_slice(), pron].concat()))
                .collect();
        }
        let mut acoustic = f64::INFINITY;
        let mut log_sum = f64::NEG_INFINITY;
        for phones in &spellings {
            for c in alignment_costs(phones)? {
                acoustic = acoustic.min(c);
                log_sum = log_add(log_sum, -c);
            }
        }
        let acoustic = match convention {
            Convention::Viterbi => acoustic,
            Convention::FullSum => -log_sum,
        };
        if acoustic == f64::INFINITY || lm_cost == f64::INFINITY {
            continue;
        }
        let cost = cfg.acoustic_scale * acoustic + lm_cost + cfg.word_insertion_penalty * sequence.len() as f64;
        let candidate = Hypothesis { words: sequence, cost };
        if best.as_ref().is_none_or(|b| rank(&candidate, b).is_lt()) {
            best = Some(candidate);
        }
    }
    Ok(best)
}
