//! Shared fixtures for the criterion benches.

use std::sync::Arc;

use phonlat_core::ctc::{LabelSequence, PhonemeAlphabet, PosteriorSequence};
use phonlat_core::graphs::{build_ctc_fst, build_grammar_fst, build_lexicon_fst, compile_tlg, Lexicon};
use phonlat_core::lm::train_katz;
use phonlat_core::simulate::{simulate_posteriors, SimulationConfig};
use phonlat_core::Wfst;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const LEXICON: &str = include_str!("../data/lexicon20.tsv");

/// Template sentence over the bench lexicon.
pub fn sentence<R: Rng>(rng: &mut R) -> Vec<String> {
    let adj = ["big", "red", "lazy", "quick", "brown", "fast"];
    let noun = ["cat", "dog", "fox", "mat", "sun", "hat"];
    let verb = ["sat", "ran", "jumps", "sleeps", "runs"];
    let mut s = vec!["the"];
    if rng.random_bool(0.5) {
        s.push(adj.choose(rng).unwrap());
    }
    s.push(noun.choose(rng).unwrap());
    s.push(verb.choose(rng).unwrap());
    if rng.random_bool(0.4) {
        s.extend([*["on", "over"].choose(rng).unwrap(), "the", noun.choose(rng).unwrap()]);
    }
    s.into_iter().map(String::from).collect()
}

/// The three machines of the bench pipeline.
pub struct Graphs {
    pub lexicon: Lexicon,
    pub t: Wfst,
    pub l: Wfst,
    pub g: Wfst,
}

pub fn graphs() -> Graphs {
    let alphabet = Arc::new(PhonemeAlphabet::default_inventory());
    let lexicon = Lexicon::from_text(LEXICON, alphabet.clone()).expect("bench lexicon");
    let mut rng = ChaCha8Rng::seed_from_u64(100);
    let corpus: Vec<Vec<String>> = (0..500).map(|_| sentence(&mut rng)).collect();
    let lm = train_katz(&corpus, 2, 5).expect("bench LM");
    let g = build_grammar_fst(&lm, lexicon.words()).expect("bench grammar");
    let l = build_lexicon_fst(&lexicon, None).expect("bench lexicon machine");
    Graphs { t: build_ctc_fst(&alphabet), l, g, lexicon }
}

impl Graphs {
    pub fn tlg(&self) -> Wfst {
        compile_tlg(&self.t, &self.l, &self.g).expect("bench TLG")
    }

    /// Phonemes of `words`, first pronunciation each.
    pub fn spell(&self, words: &[String]) -> Vec<u32> {
        let lex = &self.lexicon;
        words.iter().flat_map(|w| lex.pronunciations(lex.words().id(w).unwrap()).next().unwrap().to_vec()).collect()
    }

    /// Noisy posteriors for a random sentence and its phoneme labels.
    pub fn utterance(&self, seed: u64) -> (PosteriorSequence, LabelSequence) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let phonemes = self.spell(&sentence(&mut rng));
        let cfg = SimulationConfig { noise_temperature: 0.5, seed, ..Default::default() };
        let alphabet = self.lexicon.alphabet();
        let p = simulate_posteriors(&phonemes, alphabet.clone(), &cfg).expect("simulated posteriors");
        let y = LabelSequence::new(phonemes, alphabet).expect("label sequence");
        (p, y)
    }
}
