use std::sync::Arc as Shared;

use crate::automata::{Arc, Semiring, Wfst, WfstBuilder, EPSILON};
use crate::ctc::PhonemeAlphabet;

/// Maps frame-token strings to their CTC collapse.
///
/// State 0 means "after a blank or at the start"; state `k + 1` means "token
/// `k` was the last frame". A token different from the last one is emitted, a
/// repeat or a blank is swallowed. Every state is final and every weight is
/// one.
pub fn build_ctc_fst(alphabet: &PhonemeAlphabet) -> Wfst {
    let frames = Shared::new(alphabet.frame_symbols());
    let phonemes = Shared::new(alphabet.phoneme_symbols());
    let mut b = WfstBuilder::new(Semiring::Tropical, frames, phonemes);
    let tokens = alphabet.len() as u32;
    let blank = PhonemeAlphabet::label(alphabet.blank_id());
    for _ in 0..=tokens {
        let s = b.add_state();
        b.set_final(s, 0.0);
    }
    b.set_start(0);
    for s in 0..=tokens {
        b.add_arc(s, Arc::new(blank, EPSILON, 0.0, 0));
        for k in 0..tokens {
            let label = PhonemeAlphabet::label(k);
            let out = if s == k + 1 { EPSILON } else { label };
            b.add_arc(s, Arc::new(label, out, 0.0, k + 1));
        }
    }
    b.build().expect("topology is well formed")
}
