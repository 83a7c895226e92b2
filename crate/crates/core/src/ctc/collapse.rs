use super::alphabet::{PhonemeAlphabet, TokenId};
use super::CtcError;

/// Frame limit for [`enumerate_alignments`].
pub const MAX_ORACLE_FRAMES: usize = 12;

/// A label sequence: token ids without blanks.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LabelSequence(Vec<TokenId>);

impl LabelSequence {
    pub fn new(tokens: Vec<TokenId>, alphabet: &PhonemeAlphabet) -> Result<Self, CtcError> {
        if let Some(&t) = tokens.iter().find(|&&t| t >= alphabet.blank_id()) {
            return Err(CtcError::InvalidToken(t));
        }
        Ok(LabelSequence(tokens))
    }

    /// Whitespace-separated token names; the blank is not allowed.
    pub fn parse(text: &str, alphabet: &PhonemeAlphabet) -> Result<Self, CtcError> {
        Self::new(alphabet.parse_tokens(text)?, alphabet)
    }

    pub fn as_slice(&self) -> &[TokenId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_vec(self) -> Vec<TokenId> {
        self.0
    }

    /// Fewest frames any alignment needs: one per label plus a blank between
    /// each adjacent repeat.
    pub fn min_frames(&self) -> usize {
        self.0.len() + self.0.windows(2).filter(|w| w[0] == w[1]).count()
    }
}

/// Merges adjacent duplicates, then drops blanks.
pub fn collapse(u: &[TokenId], alphabet: &PhonemeAlphabet) -> Result<LabelSequence, CtcError> {
    let blank = alphabet.blank_id();
    if let Some(&t) = u.iter().find(|&&t| t > blank) {
        return Err(CtcError::InvalidToken(t));
    }
    let mut out = Vec::new();
    let mut prev = None;
    for &t in u {
        if prev != Some(t) && t != blank {
            out.push(t);
        }
        prev = Some(t);
    }
    Ok(LabelSequence(out))
}

/// Every length-`frames` token string that collapses to `y`, in
/// lexicographic order.
///
/// This is the brute-force inverse of [`collapse`] used as a test oracle:
/// strings are grown one token at a time over the full alphabet and a prefix
/// is abandoned as soon as its collapse stops being a prefix of `y`.
pub fn enumerate_alignments(
    y: &LabelSequence,
    frames: usize,
    alphabet: &PhonemeAlphabet,
) -> Result<Vec<Vec<TokenId>>, CtcError> {
    if frames > MAX_ORACLE_FRAMES {
        return Err(CtcError::TooManyFrames { frames, limit: MAX_ORACLE_FRAMES });
    }
    let target = y.as_slice();
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(frames);
    grow(&mut prefix, frames, target, alphabet, &mut out)?;
    Ok(out)
}

fn grow(
    prefix: &mut Vec<TokenId>,
    frames: usize,
    target: &[TokenId],
    alphabet: &PhonemeAlphabet,
    out: &mut Vec<Vec<TokenId>>,
) -> Result<(), CtcError> {
    let collapsed = collapse(prefix, alphabet)?;
    if !target.starts_with(collapsed.as_slice()) {
        return Ok(());
    }
    if prefix.len() == frames {
        if collapsed.as_slice() == target {
            out.push(prefix.clone());
        }
        return Ok(());
    }
    for t in 0..alphabet.num_columns() as TokenId {
        prefix.push(t);
        grow(prefix, frames, target, alphabet, out)?;
        prefix.pop();
    }
    Ok(())
}
