use std::sync::Arc as Shared;

use super::GraphError;
use crate::automata::{Arc, Label, Semiring, SymbolTable, Wfst, WfstBuilder, EPSILON};
use crate::ctc::{PhonemeAlphabet, TokenId};

/// Word pronunciations over a phoneme alphabet. Word ids follow first
/// appearance; a word may have several pronunciations.
#[derive(Debug, Clone, PartialEq)]
pub struct Lexicon {
    alphabet: Shared<PhonemeAlphabet>,
    words: SymbolTable,
    entries: Vec<(Label, Vec<TokenId>)>,
}

impl Lexicon {
    pub fn new(alphabet: Shared<PhonemeAlphabet>) -> Self {
        Lexicon { alphabet, words: SymbolTable::new(), entries: Vec::new() }
    }

    /// Adds one pronunciation; repeated identical entries are kept once.
    pub fn add(&mut self, word: &str, pronunciation: Vec<TokenId>) -> Result<Label, GraphError> {
        if pronunciation.is_empty() {
            return Err(GraphError::EmptyPronunciation { word: word.to_string() });
        }
        if let Some(&p) = pronunciation.iter().find(|&&p| p >= self.alphabet.blank_id()) {
            return Err(GraphError::UnknownPhoneme(p));
        }
        if word.is_empty() || word.chars().any(char::is_whitespace) || self.words.id(word) == Some(EPSILON) {
            return Err(GraphError::Parse { line: 0, msg: format!("invalid word `{word}`") });
        }
        let id = self.words.add(word);
        if !self.entries.iter().any(|(w, p)| *w == id && *p == pronunciation) {
            self.entries.push((id, pronunciation));
        }
        Ok(id)
    }

    /// Parses `word<TAB>phoneme phoneme ...` lines; blank lines and `#`
    /// comments are skipped.
    pub fn from_text(text: &str, alphabet: Shared<PhonemeAlphabet>) -> Result<Self, GraphError> {
        let mut lex = Lexicon::new(alphabet);
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: String| GraphError::Parse { line: i + 1, msg };
            let (word, pron) = line
                .split_once(|c: char| c.is_whitespace())
                .ok_or_else(|| err(format!("`{line}` has no pronunciation")))?;
            let ids = lex.alphabet.parse_tokens(pron).map_err(|e| err(e.to_string()))?;
            if ids.contains(&lex.alphabet.blank_id()) {
                return Err(err("the blank cannot appear in a pronunciation".into()));
            }
            lex.add(word, ids).map_err(|e| err(e.to_string()))?;
        }
        Ok(lex)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (w, pron) in &self.entries {
            let phones: Vec<&str> = pron.iter().map(|&p| self.alphabet.token(p).expect("valid phoneme")).collect();
            out.push_str(&format!("{}\t{}\n", self.words.symbol(*w).expect("valid word"), phones.join(" ")));
        }
        out
    }

    pub fn alphabet(&self) -> &Shared<PhonemeAlphabet> {
        &self.alphabet
    }

    pub fn words(&self) -> &SymbolTable {
        &self.words
    }

    /// `(word id, pronunciation)` pairs in insertion order.
    pub fn entries(&self) -> &[(Label, Vec<TokenId>)] {
        &self.entries
    }

    pub fn pronunciations(&self, word: Label) -> impl Iterator<Item = &[TokenId]> {
        self.entries.iter().filter(move |(w, _)| *w == word).map(|(_, p)| p.as_slice())
    }

    pub fn num_words(&self) -> usize {
        self.words.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Closure over words: any concatenation of pronunciations maps to the word
/// string. The word is emitted on the first phoneme. With `silence`, that
/// token may also appear between words and is dropped.
pub fn build_lexicon_fst(lex: &Lexicon, silence: Option<TokenId>) -> Result<Wfst, GraphError> {
    if lex.is_empty() {
        return Err(GraphError::EmptyLexicon);
    }
    let phonemes = Shared::new(lex.alphabet.phoneme_symbols());
    let words = Shared::new(lex.words.clone());
    let mut b = WfstBuilder::new(Semiring::Tropical, phonemes, words);
    let root = b.add_state();
    b.set_start(root);
    b.set_final(root, 0.0);
    for (word, pron) in &lex.entries {
        let mut state = root;
        for (i, &p) in pron.iter().enumerate() {
            let next = if i + 1 == pron.len() { root } else { b.add_state() };
            let out = if i == 0 { *word } else { EPSILON };
            b.add_arc(state, Arc::new(PhonemeAlphabet::label(p), out, 0.0, next));
            state = next;
        }
    }
    if let Some(sil) = silence {
        if sil >= lex.alphabet.blank_id() {
            return Err(GraphError::UnknownPhoneme(sil));
        }
        b.add_arc(root, Arc::new(PhonemeAlphabet::label(sil), EPSILON, 0.0, root));
    }
    Ok(b.build()?)
}
