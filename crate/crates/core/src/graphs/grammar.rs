use std::collections::HashMap;
use std::sync::Arc as Shared;

use super::GraphError;
use crate::automata::{Arc, Semiring, StateId, SymbolTable, Wfst, WfstBuilder, EPSILON};
use crate::lm::{ArpaLm, BOS, EOS};

/// Converts log10 probabilities to natural-log costs.
pub const LN_10: f64 = std::f64::consts::LN_10;

fn cost(log10: f64) -> f64 {
    -log10 * LN_10
}

/// Backoff grammar acceptor over `words`.
///
/// One state per history (every n-gram below the top order that is not
/// sentence-final, plus the empty history). Word arcs cost `−ln p` and lead
/// to the longest suffix history that exists; ε-arcs cost `−ln backoff` and
/// lead to the history minus its oldest word. `</s>` becomes a final weight.
/// LM words missing from `words` get no arcs.
pub fn build_grammar_fst(lm: &ArpaLm, words: &SymbolTable) -> Result<Wfst, GraphError> {
    let order = lm.order();
    for n in 2..=order {
        for gram in lm.ngrams(n).keys() {
            if let Some(w) = gram.iter().find(|w| !lm.contains_word(w)) {
                return Err(GraphError::UnknownWord(format!("{} ({w})", gram.join(" "))));
            }
        }
    }
    let table = Shared::new(words.clone());
    let mut b = WfstBuilder::new(Semiring::Tropical, table.clone(), table);
    let mut states: HashMap<Vec<String>, StateId> = HashMap::new();
    let mut histories: Vec<Vec<String>> = vec![vec![]];
    for n in 1..order {
        histories.extend(lm.ngrams(n).keys().filter(|g| g.last().is_some_and(|w| w != EOS)).cloned());
    }
    for h in &histories {
        states.insert(h.clone(), b.add_state());
    }
    let longest_suffix = |gram: &[String]| -> StateId {
        let mut start = gram.len().saturating_sub(order - 1);
        loop {
            if let Some(&s) = states.get(&gram[start..]) {
                return s;
            }
            start += 1;
        }
    };
    let start = match states.get(&[BOS.to_string()][..]) {
        Some(&s) if order > 1 => s,
        _ => states[&Vec::new()],
    };
    b.set_start(start);

    for n in 1..=order {
        for (gram, entry) in lm.ngrams(n) {
            let Some(&from) = states.get(&gram[..n - 1]) else { continue };
            let word = gram[n - 1].as_str();
            if word == BOS {
                continue;
            }
            if word == EOS {
                b.set_final(from, cost(entry.log10_prob));
                continue;
            }
            if let Some(id) = words.id(word).filter(|&id| id != EPSILON) {
                b.add_arc(from, Arc::new(id, id, cost(entry.log10_prob), longest_suffix(gram)));
            }
        }
    }
    for h in histories.iter().filter(|h| !h.is_empty()) {
        let bo = lm.get(h).and_then(|e| e.log10_backoff).unwrap_or(0.0);
        b.add_arc(states[h], Arc::new(EPSILON, EPSILON, cost(bo), longest_suffix(&h[1..])));
    }
    Ok(b.build()?)
}

/// Word counts in first-appearance order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct VocabFrequency {
    counts: Vec<(String, u64)>,
}

impl VocabFrequency {
    pub fn new(counts: Vec<(String, u64)>) -> Result<Self, GraphError> {
        if let Some((w, _)) = counts.iter().find(|(_, c)| *c == 0) {
            return Err(GraphError::ZeroCount(w.clone()));
        }
        let mut seen = std::collections::HashSet::new();
        if let Some((w, _)) = counts.iter().find(|(w, _)| !seen.insert(w.as_str())) {
            return Err(GraphError::Parse { line: 0, msg: format!("duplicate word `{w}`") });
        }
        Ok(VocabFrequency { counts })
    }

    /// Counts every token of the sentences.
    pub fn from_corpus(corpus: &[Vec<String>]) -> Self {
        let mut index: HashMap<&str, usize> = HashMap::new();
        let mut counts: Vec<(String, u64)> = Vec::new();
        for w in corpus.iter().flatten() {
            match index.get(w.as_str()) {
                Some(&i) => counts[i].1 += 1,
                None => {
                    index.insert(w, counts.len());
                    counts.push((w.clone(), 1));
                }
            }
        }
        VocabFrequency { counts }
    }

    /// Parses `word count` lines.
    pub fn from_text(text: &str) -> Result<Self, GraphError> {
        let mut counts = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let err = |msg: String| GraphError::Parse { line: i + 1, msg };
            let fields: Vec<&str> = line.split_whitespace().collect();
            match fields.as_slice() {
                [] => continue,
                [w, c] => {
                    let c: u64 = c.parse().map_err(|_| err(format!("bad count `{c}`")))?;
                    counts.push((w.to_string(), c));
                }
                _ => return Err(err("expected `word count`".into())),
            }
        }
        Self::new(counts).map_err(|e| match e {
            GraphError::Parse { msg, .. } => GraphError::Parse { line: 0, msg },
            e => e,
        })
    }

    pub fn to_text(&self) -> String {
        self.counts.iter().map(|(w, c)| format!("{w} {c}\n")).collect()
    }

    pub fn counts(&self) -> &[(String, u64)] {
        &self.counts
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }
}

/// Single-state unigram acceptor: each word in both `freqs` and `words`
/// costs `−ln((count + α) / (total + α·V))`.
pub fn build_unigram_fst(freqs: &VocabFrequency, alpha: f64, words: &SymbolTable) -> Result<Wfst, GraphError> {
    if freqs.is_empty() {
        return Err(GraphError::EmptyFrequencies);
    }
    if !(alpha.is_finite() && alpha >= 0.0) {
        return Err(GraphError::InvalidSmoothing(alpha));
    }
    let total: u64 = freqs.counts.iter().map(|(_, c)| c).sum();
    let denom = total as f64 + alpha * freqs.counts.len() as f64;
    let table = Shared::new(words.clone());
    let mut b = WfstBuilder::new(Semiring::Tropical, table.clone(), table);
    let s = b.add_state();
    b.set_start(s);
    b.set_final(s, 0.0);
    for (w, c) in &freqs.counts {
        if let Some(id) = words.id(w).filter(|&id| id != EPSILON) {
            b.add_arc(s, Arc::new(id, id, -((*c as f64 + alpha) / denom).ln(), s));
        }
    }
    Ok(b.build()?)
}
