//! Why character-level CTC spreads mass over non-words.
//!
//! Fit an independent categorical per character position to a set of
//! equal-length words by maximum likelihood. The optimum is each position's
//! empirical character frequency, and for homophone spellings such as `fare`
//! and `fair` it puts as much mass on the mixed spellings `faie` and `farr`
//! as on the real words.

use std::collections::BTreeMap;

use super::CtcError;

/// Independent per-position distributions over characters.
#[derive(Debug, Clone, PartialEq)]
pub struct PositionalCategorical {
    positions: Vec<BTreeMap<char, f64>>,
}

impl PositionalCategorical {
    pub fn new(positions: Vec<BTreeMap<char, f64>>) -> Result<Self, CtcError> {
        for (i, dist) in positions.iter().enumerate() {
            let sum: f64 = dist.values().sum();
            if (sum - 1.0).abs() > 1e-9 || dist.values().any(|&p| p < 0.0) {
                return Err(CtcError::NotADistribution { position: i, sum });
            }
        }
        Ok(PositionalCategorical { positions })
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn position(&self, i: usize) -> &BTreeMap<char, f64> {
        &self.positions[i]
    }

    /// Product of per-position probabilities; 0 for a wrong-length word.
    pub fn prob(&self, word: &str) -> f64 {
        let chars: Vec<char> = word.chars().collect();
        if chars.len() != self.positions.len() {
            return 0.0;
        }
        chars.iter().zip(&self.positions).map(|(c, dist)| dist.get(c).copied().unwrap_or(0.0)).product()
    }

    /// Every string over the positionwise supports with its probability,
    /// most probable first, ties in lexicographic order.
    pub fn support(&self) -> Vec<(String, f64)> {
        let mut out = vec![(String::new(), 1.0)];
        for dist in &self.positions {
            let mut next = Vec::with_capacity(out.len() * dist.len());
            for (prefix, p) in &out {
                for (&c, &q) in dist.iter().filter(|(_, &q)| q > 0.0) {
                    let mut s = prefix.clone();
                    s.push(c);
                    next.push((s, p * q));
                }
            }
            out = next;
        }
        out.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        out
    }
}

/// Maximum-likelihood positional model of `words` and the probability of
/// every string it can generate.
pub fn homophone_mle<S: AsRef<str>>(words: &[S]) -> Result<(PositionalCategorical, Vec<(String, f64)>), CtcError> {
    let Some(first) = words.first() else {
        return Err(CtcError::EmptyInput);
    };
    let length = first.as_ref().chars().count();
    let mut counts: Vec<BTreeMap<char, usize>> = vec![BTreeMap::new(); length];
    for w in words {
        let chars: Vec<char> = w.as_ref().chars().collect();
        if chars.len() != length {
            return Err(CtcError::UnequalLengths);
        }
        for (slot, c) in counts.iter_mut().zip(chars) {
            *slot.entry(c).or_insert(0) += 1;
        }
    }
    let n = words.len() as f64;
    let positions = counts.into_iter().map(|m| m.into_iter().map(|(c, k)| (c, k as f64 / n)).collect()).collect();
    let model = PositionalCategorical::new(positions)?;
    let support = model.support();
    Ok((model, support))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn as_map(v: &[(String, f64)]) -> BTreeMap<String, f64> {
        v.iter().cloned().collect()
    }

    #[test]
    fn fare_fair_splits_four_ways() {
        let (model, support) = homophone_mle(&["fare", "fair"]).unwrap();
        let got = as_map(&support);
        let want: Vec<&str> = vec!["faie", "fair", "fare", "farr"];
        assert_eq!(got.keys().map(String::as_str).collect::<Vec<_>>(), want);
        for p in got.values() {
            assert!((p - 0.25).abs() < 1e-12);
        }
        assert!((model.prob("fare") - 0.25).abs() < 1e-12);
        assert_eq!(model.prob("fire"), 0.0);
    }

    #[test]
    fn identical_words_are_certain() {
        let (_, support) = homophone_mle(&["fare", "fare"]).unwrap();
        assert_eq!(support, vec![("fare".to_string(), 1.0)]);
    }

    #[test]
    fn disjoint_pair() {
        let (_, support) = homophone_mle(&["ab", "cd"]).unwrap();
        let got = as_map(&support);
        assert_eq!(got.len(), 4);
        for w in ["ab", "ad", "cb", "cd"] {
            assert!((got[w] - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn errors() {
        assert_eq!(homophone_mle::<&str>(&[]).unwrap_err(), CtcError::EmptyInput);
        assert_eq!(homophone_mle(&["ab", "abc"]).unwrap_err(), CtcError::UnequalLengths);
    }

    #[test]
    fn mle_beats_random_perturbations() {
        use rand::{Rng, SeedableRng};
        let words = ["fare", "fair", "fire"];
        let (model, _) = homophone_mle(&words).unwrap();
        let ll = |m: &PositionalCategorical| words.iter().map(|w| m.prob(w).ln()).sum::<f64>();
        let best = ll(&model);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let positions = (0..model.len())
                .map(|i| {
                    let raw: BTreeMap<char, f64> = model
                        .position(i)
                        .iter()
                        .map(|(&c, &p)| (c, (p * (1.0 + rng.random_range(-0.3..0.3))).max(1e-12)))
                        .collect();
                    let z: f64 = raw.values().sum();
                    raw.into_iter().map(|(c, p)| (c, p / z)).collect()
                })
                .collect();
            let perturbed = PositionalCategorical::new(positions).unwrap();
            assert!(ll(&perturbed) <= best + 1e-12);
        }
    }
}
