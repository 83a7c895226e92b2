//! Katz backoff estimation.
//!
//! Counts above the threshold `k` are kept as is; counts `1..=k` are
//! Good-Turing discounted. The mass freed in each context is handed to the
//! next lower order through that context's backoff weight, scaled so the
//! conditional distribution sums to one. Unigram leftovers are spread
//! uniformly over the vocabulary.

use std::collections::BTreeMap;

use super::arpa::{ArpaLm, NgramEntry, LOG10_ZERO};
use super::{LmError, BOS, EOS};

pub const DEFAULT_DISCOUNT_THRESHOLD: u64 = 5;
/// Absolute discount used when Good-Turing statistics are degenerate.
pub const FALLBACK_DISCOUNT: f64 = 0.5;
pub const MAX_ORDER: usize = 5;

const MASS_EPSILON: f64 = 1e-12;

type Counts = BTreeMap<Vec<String>, u64>;

#[derive(Debug, Clone, PartialEq)]
enum Discount {
    /// Ratio `c*/c` for each count up to the threshold.
    GoodTuring {
        ratios: BTreeMap<u64, f64>,
    },
    Absolute {
        k: u64,
    },
}

impl Discount {
    fn estimate(counts: &Counts, k: u64) -> Discount {
        let mut n_r: BTreeMap<u64, u64> = BTreeMap::new();
        for &c in counts.values() {
            *n_r.entry(c).or_insert(0) += 1;
        }
        let n = |r: u64| n_r.get(&r).copied().unwrap_or(0) as f64;
        if k == 0 {
            return Discount::GoodTuring { ratios: BTreeMap::new() };
        }
        let fallback = Discount::Absolute { k };
        if n(1) == 0.0 {
            return fallback;
        }
        let common = (k + 1) as f64 * n(k + 1) / n(1);
        if common >= 1.0 {
            return fallback;
        }
        let mut ratios = BTreeMap::new();
        for r in (1..=k).filter(|&r| n(r) > 0.0) {
            let d = ((r + 1) as f64 * n(r + 1) / (r as f64 * n(r)) - common) / (1.0 - common);
            if !(d > 0.0 && d <= 1.0) {
                return fallback;
            }
            ratios.insert(r, d);
        }
        Discount::GoodTuring { ratios }
    }

    fn apply(&self, c: u64) -> f64 {
        match self {
            Discount::GoodTuring { ratios } => ratios.get(&c).map_or(c as f64, |d| d * c as f64),
            Discount::Absolute { k } if c <= *k => c as f64 - FALLBACK_DISCOUNT,
            Discount::Absolute { .. } => c as f64,
        }
    }
}

fn count_ngrams(corpus: &[Vec<String>], order: usize) -> Vec<Counts> {
    let mut counts = vec![Counts::new(); order];
    for sentence in corpus {
        let mut padded = Vec::with_capacity(sentence.len() + 2);
        padded.push(BOS.to_string());
        padded.extend(sentence.iter().cloned());
        padded.push(EOS.to_string());
        for (i, table) in counts.iter_mut().enumerate() {
            for window in padded.windows(i + 1) {
                if i == 0 && window[0] == BOS {
                    continue;
                }
                *table.entry(window.to_vec()).or_insert(0) += 1;
            }
        }
    }
    counts
}

/// Estimates a Katz backoff model of the given order from tokenised
/// sentences. Sentence markers are added implicitly.
pub fn train_katz(corpus: &[Vec<String>], order: usize, k: u64) -> Result<ArpaLm, LmError> {
    if corpus.is_empty() {
        return Err(LmError::EmptyCorpus);
    }
    if !(1..=MAX_ORDER).contains(&order) {
        return Err(LmError::UnsupportedOrder(order));
    }
    if corpus.iter().flatten().any(|w| w == BOS || w == EOS) {
        return Err(LmError::Invalid("corpus contains a sentence marker".into()));
    }
    let counts = count_ngrams(corpus, order);
    let mut tables: Vec<BTreeMap<Vec<String>, NgramEntry>> = vec![BTreeMap::new(); order];

    // unigrams
    let unigrams = &counts[0];
    let discount = Discount::estimate(unigrams, k);
    let total: u64 = unigrams.values().sum();
    let explicit: Vec<(&Vec<String>, f64)> =
        unigrams.iter().map(|(w, &c)| (w, discount.apply(c) / total as f64)).collect();
    let leftover = (1.0 - explicit.iter().map(|(_, p)| p).sum::<f64>()).max(0.0);
    let share = leftover / unigrams.len() as f64;
    for (w, p) in explicit {
        tables[0].insert(w.clone(), NgramEntry { log10_prob: (p + share).log10(), log10_backoff: None });
    }
    tables[0].insert(vec![BOS.to_string()], NgramEntry { log10_prob: LOG10_ZERO, log10_backoff: None });

    for n in 2..=order {
        let lower = ArpaLm::new(tables.clone())?;
        let discount = Discount::estimate(&counts[n - 1], k);
        let mut by_context: BTreeMap<&[String], Vec<(&str, u64)>> = BTreeMap::new();
        for (gram, &c) in &counts[n - 1] {
            by_context.entry(&gram[..n - 1]).or_default().push((gram[n - 1].as_str(), c));
        }
        for (context, continuations) in by_context {
            let context_total: u64 = continuations.iter().map(|(_, c)| c).sum();
            let mut probs: Vec<(&str, f64)> =
                continuations.iter().map(|&(w, c)| (w, discount.apply(c) / context_total as f64)).collect();
            let kept: f64 = probs.iter().map(|(_, p)| p).sum();
            let freed = 1.0 - kept;
            let lower_mass: f64 = probs
                .iter()
                .map(|(w, _)| 10f64.powf(lower.conditional_log10(&context[1..], w).expect("seen word is a unigram")))
                .sum();
            let backoff = if freed <= MASS_EPSILON {
                LOG10_ZERO
            } else if 1.0 - lower_mass <= MASS_EPSILON {
                // every outcome already has an explicit estimate
                for (_, p) in probs.iter_mut() {
                    *p /= kept;
                }
                LOG10_ZERO
            } else {
                (freed / (1.0 - lower_mass)).log10()
            };
            for (w, p) in probs {
                let mut gram = context.to_vec();
                gram.push(w.to_string());
                tables[n - 1].insert(gram, NgramEntry { log10_prob: p.log10(), log10_backoff: None });
            }
            tables[n - 2].get_mut(context).expect("context counted at the order below").log10_backoff = Some(backoff);
        }
    }
    ArpaLm::new(tables)
}
