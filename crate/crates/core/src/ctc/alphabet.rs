use std::collections::HashMap;

use sha2::{Digest, Sha256};

use super::CtcError;
use crate::automata::{Label, SymbolTable, EPSILON_SYMBOL};

/// Index into a posterior row. Linguistic tokens come first; the blank is
/// the last column.
pub type TokenId = u32;

/// Display glyph of the CTC blank.
pub const BLANK_GLYPH: &str = "␣";

/// Name of the silence token in the default inventory.
pub const SILENCE: &str = "sil";

/// Reduced X-SAMPA: 24 consonants, 11 monophthongs, 5 diphthongs.
const DEFAULT_PHONEMES: [&str; 40] = [
    "p", "b", "t", "d", "k", "g", "tS", "dZ", "f", "v", "T", "D", "s", "z", "S", "Z", "h", "m", "n", "N", "l", "r",
    "j", "w", "i", "I", "E", "{", "A", "V", "O", "U", "u", "@", "3`", "eI", "aI", "OI", "aU", "oU",
];

/// Ordered token inventory shared by posteriors, lexica and graphs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhonemeAlphabet {
    tokens: Vec<String>,
    index: HashMap<String, TokenId>,
}

impl PhonemeAlphabet {
    pub fn new<I, S>(tokens: I) -> Result<Self, CtcError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut out = PhonemeAlphabet { tokens: Vec::new(), index: HashMap::new() };
        for t in tokens {
            let t = t.into();
            if t.is_empty() || t.chars().any(char::is_whitespace) {
                return Err(CtcError::InvalidAlphabet(format!("bad token `{t}`")));
            }
            if t == BLANK_GLYPH || t == EPSILON_SYMBOL {
                return Err(CtcError::InvalidAlphabet(format!("`{t}` is reserved")));
            }
            if out.index.contains_key(&t) {
                return Err(CtcError::InvalidAlphabet(format!("duplicate token `{t}`")));
            }
            out.index.insert(t.clone(), out.tokens.len() as TokenId);
            out.tokens.push(t);
        }
        if out.tokens.is_empty() {
            return Err(CtcError::InvalidAlphabet("alphabet is empty".into()));
        }
        Ok(out)
    }

    /// The shipped 40-phoneme inventory plus silence (41 tokens, 42 columns).
    pub fn default_inventory() -> Self {
        Self::new(DEFAULT_PHONEMES.iter().copied().chain([SILENCE])).expect("default inventory is valid")
    }

    /// One token per line; blank lines and `#` comments are skipped.
    pub fn from_text(text: &str) -> Result<Self, CtcError> {
        let tokens: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).collect();
        Self::new(tokens)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for t in &self.tokens {
            out.push_str(t);
            out.push('\n');
        }
        out
    }

    /// Number of linguistic tokens (blank excluded).
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Posterior row width: tokens plus blank.
    pub fn num_columns(&self) -> usize {
        self.tokens.len() + 1
    }

    pub fn blank_id(&self) -> TokenId {
        self.tokens.len() as TokenId
    }

    pub fn id(&self, token: &str) -> Option<TokenId> {
        if token == BLANK_GLYPH {
            return Some(self.blank_id());
        }
        self.index.get(token).copied()
    }

    pub fn token(&self, id: TokenId) -> Option<&str> {
        if id == self.blank_id() {
            return Some(BLANK_GLYPH);
        }
        self.tokens.get(id as usize).map(String::as_str)
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn silence_id(&self) -> Option<TokenId> {
        self.index.get(SILENCE).copied()
    }

    /// Parses whitespace-separated token names.
    pub fn parse_tokens(&self, text: &str) -> Result<Vec<TokenId>, CtcError> {
        text.split_whitespace().map(|t| self.id(t).ok_or_else(|| CtcError::UnknownToken(t.to_string()))).collect()
    }

    /// First 16 hex digits of SHA-256 over the newline-joined tokens.
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.to_text().as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }

    /// FST label of a token (`id + 1`; label 0 is epsilon).
    pub fn label(id: TokenId) -> Label {
        id + 1
    }

    pub fn token_of_label(label: Label) -> TokenId {
        label - 1
    }

    /// Input table of the CTC topology: tokens then the blank glyph.
    pub fn frame_symbols(&self) -> SymbolTable {
        SymbolTable::from_symbols(self.tokens.iter().cloned().chain([BLANK_GLYPH.to_string()]))
            .expect("alphabet tokens are unique")
    }

    /// Phoneme table shared by the CTC output and lexicon input sides.
    pub fn phoneme_symbols(&self) -> SymbolTable {
        SymbolTable::from_symbols(self.tokens.iter().cloned()).expect("alphabet tokens are unique")
    }

    /// Recovers an alphabet from a frame symbol table.
    pub fn from_frame_symbols(table: &SymbolTable) -> Result<Self, CtcError> {
        let names: Vec<&str> = table.iter().map(|(_, s)| s).collect();
        match names.split_last() {
            Some((&last, tokens)) if last == BLANK_GLYPH => Self::new(tokens.iter().copied()),
            _ => Err(CtcError::InvalidAlphabet("frame symbols must end with the blank glyph".into())),
        }
    }
}
