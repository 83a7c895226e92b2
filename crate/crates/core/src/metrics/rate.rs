use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::edit::edit_distance;
use super::MetricsError;

pub const MIN_RESAMPLES: usize = 100;
pub const DEFAULT_RESAMPLES: usize = 10_000;

/// Token granularity of an error rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Unit {
    /// Whitespace-separated words.
    Word,
    /// Every character, spaces included, of the trimmed text.
    Char,
    /// Whitespace-separated phoneme symbols.
    Phoneme,
}

pub fn tokenize(text: &str, unit: Unit) -> Vec<String> {
    match unit {
        Unit::Word | Unit::Phoneme => text.split_whitespace().map(str::to_string).collect(),
        Unit::Char => text.split_whitespace().collect::<Vec<_>>().join(" ").chars().map(String::from).collect(),
    }
}

/// Pooled error rate: total edits over total reference length.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    pub rate: f64,
    pub standard_error: Option<f64>,
    pub total_edits: usize,
    pub total_ref_len: usize,
}

fn per_utterance<T: Clone + PartialEq>(pairs: &[(Vec<T>, Vec<T>)]) -> Result<Vec<(usize, usize)>, MetricsError> {
    if pairs.is_empty() {
        return Err(MetricsError::EmptyPairs);
    }
    Ok(pairs.iter().map(|(r, h)| (edit_distance(r, h).0, r.len())).collect())
}

pub fn error_rate<T: Clone + PartialEq>(pairs: &[(Vec<T>, Vec<T>)]) -> Result<ErrorReport, MetricsError> {
    let stats = per_utterance(pairs)?;
    let total_edits: usize = stats.iter().map(|s| s.0).sum();
    let total_ref_len: usize = stats.iter().map(|s| s.1).sum();
    if total_ref_len == 0 {
        return Err(MetricsError::ZeroReferenceLength);
    }
    Ok(ErrorReport {
        rate: total_edits as f64 / total_ref_len as f64,
        standard_error: None,
        total_edits,
        total_ref_len,
    })
}

/// Sample standard deviation of the pooled rate over `resamples` bootstrap
/// draws of whole utterances. Draws with zero reference length are skipped.
pub fn bootstrap_se<T: Clone + PartialEq>(
    pairs: &[(Vec<T>, Vec<T>)],
    resamples: usize,
    seed: u64,
) -> Result<f64, MetricsError> {
    if resamples < MIN_RESAMPLES {
        return Err(MetricsError::TooFewResamples(resamples));
    }
    let stats = per_utterance(pairs)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rates = Vec::with_capacity(resamples);
    for _ in 0..resamples {
        let (mut edits, mut len) = (0usize, 0usize);
        for _ in 0..stats.len() {
            let (e, l) = stats[rng.random_range(0..stats.len())];
            edits += e;
            len += l;
        }
        if len > 0 {
            rates.push(edits as f64 / len as f64);
        }
    }
    if rates.len() < 2 {
        return Ok(0.0);
    }
    let mean = rates.iter().sum::<f64>() / rates.len() as f64;
    let var = rates.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / (rates.len() - 1) as f64;
    Ok(var.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<String> {
        tokenize(s, Unit::Word)
    }

    #[test]
    fn perfect_is_zero() {
        let pairs = vec![(toks("a b c"), toks("a b c"))];
        assert_eq!(error_rate(&pairs).unwrap().rate, 0.0);
    }

    #[test]
    fn pooled_not_averaged() {
        let pairs = vec![(toks("a b c d"), toks("a x c")), (toks("a b c d e f"), toks("a b c d e g"))];
        let r = error_rate(&pairs).unwrap();
        assert_eq!((r.total_edits, r.total_ref_len), (3, 10));
        assert!((r.rate - 0.3).abs() < 1e-15);
    }

    #[test]
    fn insertions_exceed_one() {
        let pairs = vec![(toks("a"), toks("x y z"))];
        assert_eq!(error_rate(&pairs).unwrap().rate, 3.0);
    }

    #[test]
    fn rate_errors() {
        assert_eq!(error_rate::<String>(&[]).unwrap_err(), MetricsError::EmptyPairs);
        assert_eq!(error_rate(&[(toks(""), toks("a"))]).unwrap_err(), MetricsError::ZeroReferenceLength);
        assert_eq!(bootstrap_se(&[(toks("a"), toks("a"))], 10, 0).unwrap_err(), MetricsError::TooFewResamples(10));
    }

    #[test]
    fn char_tokens_keep_single_spaces() {
        assert_eq!(tokenize("  ab  c ", Unit::Char), ["a", "b", " ", "c"]);
    }

    #[test]
    fn bootstrap_identical_pairs_is_zero() {
        let pairs = vec![(toks("a b"), toks("a c")); 20];
        assert_eq!(bootstrap_se(&pairs, 500, 1).unwrap(), 0.0);
    }

    #[test]
    fn bootstrap_is_reproducible() {
        let pairs = vec![(toks("a b"), toks("a c")), (toks("a b c"), toks("a b c")), (toks("d"), toks(""))];
        assert_eq!(bootstrap_se(&pairs, 1000, 9).unwrap().to_bits(), bootstrap_se(&pairs, 1000, 9).unwrap().to_bits());
    }

    #[test]
    fn bootstrap_matches_enumerated_resampling() {
        // (edits, len) = (1, 2) and (3, 4); resamples 11, 12, 21, 22 each
        // with probability 1/4 give rates 1/2, 4/6, 4/6, 3/4.
        let pairs = vec![(toks("a b"), toks("a x")), (toks("a b c d"), toks("x y z d"))];
        let rates = [0.5, 4.0 / 6.0, 4.0 / 6.0, 0.75];
        let mean = rates.iter().sum::<f64>() / 4.0;
        let sd = (rates.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / 4.0).sqrt();
        let se = bootstrap_se(&pairs, 10_000, 3).unwrap();
        assert!((se - sd).abs() / sd < 0.05, "{se} vs {sd}");
    }
}
