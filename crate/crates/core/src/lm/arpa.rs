use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::{LmError, BOS, EOS, UNK};

/// Conventional log10 stand-in for probability zero.
pub const LOG10_ZERO: f64 = -99.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NgramEntry {
    pub log10_prob: f64,
    pub log10_backoff: Option<f64>,
}

/// A backoff n-gram model in the log10 domain.
///
/// `tables[n - 1]` holds the n-grams of order `n`, keyed by their words.
#[derive(Debug, Clone, PartialEq)]
pub struct ArpaLm {
    tables: Vec<BTreeMap<Vec<String>, NgramEntry>>,
}

impl ArpaLm {
    /// Checks prefix closure and probability range.
    pub fn new(tables: Vec<BTreeMap<Vec<String>, NgramEntry>>) -> Result<Self, LmError> {
        if tables.is_empty() {
            return Err(LmError::Invalid("model has no orders".into()));
        }
        for (i, table) in tables.iter().enumerate() {
            for (words, entry) in table {
                if words.len() != i + 1 {
                    return Err(LmError::Invalid(format!("{}-gram stored at order {}", words.len(), i + 1)));
                }
                if entry.log10_prob.is_nan() || entry.log10_prob > 0.0 {
                    return Err(LmError::ProbabilityOutOfRange(words.join(" ")));
                }
                if entry.log10_backoff.is_some_and(|b| !b.is_finite()) {
                    return Err(LmError::Invalid(format!("non-finite backoff for `{}`", words.join(" "))));
                }
                if i > 0 && !tables[i - 1].contains_key(&words[..i]) {
                    return Err(LmError::PrefixClosure(words.join(" ")));
                }
            }
        }
        Ok(ArpaLm { tables })
    }

    pub fn order(&self) -> usize {
        self.tables.len()
    }

    pub fn ngrams(&self, n: usize) -> &BTreeMap<Vec<String>, NgramEntry> {
        &self.tables[n - 1]
    }

    pub fn get<S: AsRef<str>>(&self, words: &[S]) -> Option<&NgramEntry> {
        if words.is_empty() || words.len() > self.order() {
            return None;
        }
        let key: Vec<String> = words.iter().map(|w| w.as_ref().to_string()).collect();
        self.tables[words.len() - 1].get(&key)
    }

    pub fn contains_word(&self, word: &str) -> bool {
        self.tables[0].contains_key(&[word.to_string()][..])
    }

    /// Unigram words in table order, markers included.
    pub fn vocabulary(&self) -> impl Iterator<Item = &str> {
        self.tables[0].keys().map(|k| k[0].as_str())
    }

    /// Words a sentence can contain plus the end marker: the outcome space of
    /// every conditional distribution.
    pub fn outcomes(&self) -> Vec<&str> {
        self.vocabulary().filter(|w| *w != BOS).collect()
    }

    /// `log10 p(word | history)` by recursive backoff. Only the last
    /// `order - 1` history words matter. `None` if `word` is not a unigram.
    pub fn conditional_log10<S: AsRef<str>>(&self, history: &[S], word: &str) -> Option<f64> {
        if !self.contains_word(word) {
            return None;
        }
        let keep = history.len().min(self.order() - 1);
        let mut ngram: Vec<String> = history[history.len() - keep..].iter().map(|w| w.as_ref().to_string()).collect();
        ngram.push(word.to_string());
        let mut penalty = 0.0;
        loop {
            if let Some(e) = self.tables[ngram.len() - 1].get(&ngram) {
                return Some(penalty + e.log10_prob);
            }
            let context = &ngram[..ngram.len() - 1];
            if let Some(bo) = self.tables[context.len() - 1].get(context).and_then(|e| e.log10_backoff) {
                penalty += bo;
            }
            ngram.remove(0);
        }
    }

    fn resolve<'a>(&self, word: &'a str) -> Result<&'a str, LmError> {
        if self.contains_word(word) {
            Ok(word)
        } else if self.contains_word(UNK) {
            Ok(UNK)
        } else {
            Err(LmError::OutOfVocabulary(word.to_string()))
        }
    }
}

/// `log10 p(<s> words </s>)`. Unknown words map to `<unk>` when the model
/// has it.
pub fn lm_log_prob<S: AsRef<str>>(lm: &ArpaLm, words: &[S]) -> Result<f64, LmError> {
    let mut history: Vec<&str> = vec![BOS];
    let mut total = 0.0;
    for w in words.iter().map(|w| w.as_ref()).chain([EOS]) {
        if w == BOS {
            return Err(LmError::Invalid("sentence-begin marker inside a sentence".into()));
        }
        let w = lm.resolve(w)?;
        total += lm.conditional_log10(&history, w).expect("resolved words are unigrams");
        history.push(w);
    }
    Ok(total)
}

fn fmt_log10(v: f64) -> String {
    format!("{v:.7}")
}

/// Canonical ARPA text: orders ascending, n-grams in lexicographic word
/// order, tab-separated fields, seven decimals.
pub fn serialize_arpa(lm: &ArpaLm) -> String {
    let mut out = String::from("\n\\data\\\n");
    for (i, table) in lm.tables.iter().enumerate() {
        let _ = writeln!(out, "ngram {}={}", i + 1, table.len());
    }
    for (i, table) in lm.tables.iter().enumerate() {
        let _ = write!(out, "\n\\{}-grams:\n", i + 1);
        for (words, e) in table {
            let _ = write!(out, "{}\t{}", fmt_log10(e.log10_prob), words.join(" "));
            if let Some(bo) = e.log10_backoff {
                let _ = write!(out, "\t{}", fmt_log10(bo));
            }
            out.push('\n');
        }
    }
    out.push_str("\n\\end\\\n");
    out
}

pub fn parse_arpa(text: &str) -> Result<ArpaLm, LmError> {
    let perr = |line: usize, msg: String| LmError::Parse { line, msg };
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));

    // header
    loop {
        match lines.next() {
            Some((_, "\\data\\")) => break,
            Some(_) => continue,
            None => return Err(LmError::MissingSection("\\data\\".into())),
        }
    }
    let mut declared: Vec<usize> = Vec::new();
    let mut pending = None;
    for (n, line) in lines.by_ref() {
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("ngram ") {
            let (order, count) =
                rest.split_once('=').ok_or_else(|| perr(n, format!("malformed count line `{line}`")))?;
            let order: usize = order.trim().parse().map_err(|_| perr(n, format!("bad order `{order}`")))?;
            let count: usize = count.trim().parse().map_err(|_| perr(n, format!("bad count `{count}`")))?;
            if order != declared.len() + 1 {
                return Err(perr(n, format!("expected count for order {}, got {order}", declared.len() + 1)));
            }
            declared.push(count);
            continue;
        }
        pending = Some((n, line));
        break;
    }
    if declared.is_empty() {
        return Err(LmError::MissingSection("ngram counts".into()));
    }

    let order = declared.len();
    let mut tables: Vec<BTreeMap<Vec<String>, NgramEntry>> = vec![BTreeMap::new(); order];
    let mut seen_end = false;
    let mut current: Option<usize> = None;
    let mut next_section = 1;
    let mut handle = |n: usize, line: &str, current: &mut Option<usize>| -> Result<bool, LmError> {
        if line.is_empty() {
            return Ok(false);
        }
        if line == "\\end\\" {
            return Ok(true);
        }
        if let Some(inner) = line.strip_prefix('\\').and_then(|l| l.strip_suffix("-grams:")) {
            let k: usize = inner.parse().map_err(|_| perr(n, format!("bad section header `{line}`")))?;
            if k != next_section || k > order {
                return Err(perr(n, format!("unexpected section `{line}`")));
            }
            next_section += 1;
            *current = Some(k);
            return Ok(false);
        }
        let Some(k) = *current else {
            return Err(perr(n, format!("entry outside any n-gram section: `{line}`")));
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != k + 1 && fields.len() != k + 2 {
            return Err(perr(n, format!("expected {} or {} fields for a {k}-gram", k + 1, k + 2)));
        }
        let num = |s: &str| s.parse::<f64>().map_err(|_| perr(n, format!("bad number `{s}`")));
        let log10_prob = num(fields[0])?;
        let words: Vec<String> = fields[1..=k].iter().map(|s| s.to_string()).collect();
        let log10_backoff = if fields.len() == k + 2 { Some(num(fields[k + 1])?) } else { None };
        if tables[k - 1].insert(words, NgramEntry { log10_prob, log10_backoff }).is_some() {
            return Err(perr(n, "duplicate n-gram".into()));
        }
        Ok(false)
    };
    if let Some((n, line)) = pending {
        seen_end = handle(n, line, &mut current)?;
    }
    if !seen_end {
        for (n, line) in lines {
            if handle(n, line, &mut current)? {
                seen_end = true;
                break;
            }
        }
    }
    if next_section <= order {
        return Err(LmError::MissingSection(format!("\\{next_section}-grams:")));
    }
    if !seen_end {
        return Err(LmError::MissingSection("\\end\\".into()));
    }
    for (i, (&want, table)) in declared.iter().zip(&tables).enumerate() {
        if want != table.len() {
            return Err(LmError::CountMismatch { order: i + 1, declared: want, found: table.len() });
        }
    }
    ArpaLm::new(tables)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const BIGRAM: &str = "\\data\\
ngram 1=5
ngram 2=4

\\1-grams:
-1.0\t</s>
-99\t<s>\t-0.5
-0.6\ta\t-0.2
-0.7\tb\t-0.1
-0.8\tc

\\2-grams:
-0.3\t<s> a
-0.4\ta b
-0.5\tb </s>
-0.25\ta c

\\end\\
";

    #[test]
    fn minimal_unigram_file() {
        let text = "\\data\\\nngram 1=3\n\n\\1-grams:\n-0.5\ta\n-0.5\t</s>\n-99\t<s>\n\n\\end\\\n";
        let lm = parse_arpa(text).unwrap();
        assert_eq!(lm.order(), 1);
        assert_eq!(lm.ngrams(1).len(), 3);
    }

    #[test]
    fn count_mismatch() {
        let text = BIGRAM.replace("ngram 2=4", "ngram 2=5");
        assert_eq!(parse_arpa(&text).unwrap_err(), LmError::CountMismatch { order: 2, declared: 5, found: 4 });
    }

    #[test]
    fn missing_sections() {
        assert!(matches!(parse_arpa("ngram 1=1\n"), Err(LmError::MissingSection(_))));
        let no_end = BIGRAM.replace("\\end\\\n", "");
        assert!(matches!(parse_arpa(&no_end), Err(LmError::MissingSection(s)) if s == "\\end\\"));
        let no_bigrams = "\\data\\\nngram 1=1\nngram 2=0\n\n\\1-grams:\n-0.1\ta\n\n\\end\\\n";
        assert!(matches!(parse_arpa(no_bigrams), Err(LmError::MissingSection(_))));
    }

    #[test]
    fn prefix_closure_violation() {
        let text = BIGRAM.replace("-0.25\ta c", "-0.25\tz c");
        assert_eq!(parse_arpa(&text).unwrap_err(), LmError::PrefixClosure("z c".into()));
    }

    #[test]
    fn bad_entry_reports_line() {
        let text = BIGRAM.replace("-0.4\ta b", "-0.4\ta b c d");
        assert!(matches!(parse_arpa(&text), Err(LmError::Parse { line: 14, .. })));
    }

    #[test]
    fn explicit_ngrams_sum_directly() {
        let lm = parse_arpa(BIGRAM).unwrap();
        // <s> a b </s>: all three bigrams listed.
        let got = lm_log_prob(&lm, &["a", "b"]).unwrap();
        assert!((got - (-0.3 - 0.4 - 0.5)).abs() < 1e-12);
    }

    #[test]
    fn missing_bigram_backs_off() {
        let lm = parse_arpa(BIGRAM).unwrap();
        // p(c | b) is absent: backoff(b) + p(c) = -0.1 + -0.8
        assert!((lm.conditional_log10(&["b"], "c").unwrap() - (-0.9)).abs() < 1e-12);
        // <s> c </s>: bo(<s>) + p(c), then bo(c) absent (0) + p(</s>)
        let got = lm_log_prob(&lm, &["c"]).unwrap();
        assert!((got - (-0.5 - 0.8 - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn empty_sentence_scores_end_marker() {
        let lm = parse_arpa(BIGRAM).unwrap();
        assert!((lm_log_prob::<&str>(&lm, &[]).unwrap() - (-0.5 - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn oov_handling() {
        let lm = parse_arpa(BIGRAM).unwrap();
        assert_eq!(lm_log_prob(&lm, &["zzz"]).unwrap_err(), LmError::OutOfVocabulary("zzz".into()));
        let with_unk = BIGRAM.replace("ngram 1=5", "ngram 1=6").replace("-0.8\tc\n", "-0.8\tc\n-2.0\t<unk>\n");
        let lm = parse_arpa(&with_unk).unwrap();
        let got = lm_log_prob(&lm, &["zzz"]).unwrap();
        assert!((got - (-0.5 - 2.0 - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn serialize_is_canonical() {
        let lm = parse_arpa(BIGRAM).unwrap();
        let text = serialize_arpa(&lm);
        assert!(text.contains("\n-0.6000000\ta\t-0.2000000\n"));
        assert!(text.contains("\n-99.0000000\t<s>\t-0.5000000\n"));
        assert!(text.find("\n-1.0000000\t</s>\n").unwrap() < text.find("\t<s>\t").unwrap());
        let again = serialize_arpa(&parse_arpa(&text).unwrap());
        assert_eq!(again, text);
    }

    #[test]
    fn declared_empty_section_is_written() {
        let mut tables = vec![BTreeMap::new(), BTreeMap::new()];
        tables[0].insert(vec!["a".to_string()], NgramEntry { log10_prob: -0.3, log10_backoff: None });
        tables[0].insert(vec![EOS.to_string()], NgramEntry { log10_prob: -0.3, log10_backoff: None });
        let lm = ArpaLm::new(tables).unwrap();
        let text = serialize_arpa(&lm);
        assert!(text.contains("ngram 2=0\n"));
        assert!(text.contains("\\2-grams:\n\n\\end\\"));
        assert_eq!(parse_arpa(&text).unwrap(), lm);
    }
}
