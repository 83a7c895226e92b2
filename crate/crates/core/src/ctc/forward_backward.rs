//! Log-domain forward-backward over the blank-interleaved label lattice.

use super::alphabet::TokenId;
use super::collapse::LabelSequence;
use super::posterior::PosteriorSequence;
use super::CtcError;
use crate::automata::log_add;

const NEG_INF: f64 = f64::NEG_INFINITY;

/// Lattice over the extended label `␣ y1 ␣ y2 … yU ␣`.
struct Lattice<'a> {
    p: &'a PosteriorSequence,
    ext: Vec<TokenId>,
}

impl<'a> Lattice<'a> {
    fn new(p: &'a PosteriorSequence, y: &LabelSequence) -> Result<Self, CtcError> {
        let blank = p.alphabet().blank_id();
        if let Some(&t) = y.as_slice().iter().find(|&&t| t >= blank) {
            return Err(CtcError::InvalidToken(t));
        }
        let mut ext = Vec::with_capacity(2 * y.len() + 1);
        ext.push(blank);
        for &t in y.as_slice() {
            ext.push(t);
            ext.push(blank);
        }
        Ok(Lattice { p, ext })
    }

    fn log_emit(&self, t: usize, s: usize) -> f64 {
        self.p.get(t, self.ext[s]).ln()
    }

    /// Whether `s` may be entered directly from `s - 2`.
    fn can_skip(&self, s: usize) -> bool {
        s >= 2 && self.ext[s] != self.ext[0] && self.ext[s] != self.ext[s - 2]
    }

    /// Forward scores before the emission at each frame, `T × S`.
    fn forward(&self) -> Vec<Vec<f64>> {
        let (frames, states) = (self.p.num_frames(), self.ext.len());
        let mut pre = vec![vec![NEG_INF; states]; frames];
        pre[0][0] = 0.0;
        if states > 1 {
            pre[0][1] = 0.0;
        }
        for t in 1..frames {
            let emitted: Vec<f64> = (0..states).map(|s| pre[t - 1][s] + self.log_emit(t - 1, s)).collect();
            for s in 0..states {
                let mut acc = emitted[s];
                if s >= 1 {
                    acc = log_add(acc, emitted[s - 1]);
                }
                if self.can_skip(s) {
                    acc = log_add(acc, emitted[s - 2]);
                }
                pre[t][s] = acc;
            }
        }
        pre
    }

    /// Backward scores of frames `t+1..T` given state `s` at frame `t`.
    fn backward(&self) -> Vec<Vec<f64>> {
        let (frames, states) = (self.p.num_frames(), self.ext.len());
        let mut beta = vec![vec![NEG_INF; states]; frames];
        beta[frames - 1][states - 1] = 0.0;
        if states > 1 {
            beta[frames - 1][states - 2] = 0.0;
        }
        for t in (0..frames - 1).rev() {
            let next: Vec<f64> = (0..states).map(|s| beta[t + 1][s] + self.log_emit(t + 1, s)).collect();
            for s in 0..states {
                let mut acc = next[s];
                if s + 1 < states {
                    acc = log_add(acc, next[s + 1]);
                }
                if s + 2 < states && self.can_skip(s + 2) {
                    acc = log_add(acc, next[s + 2]);
                }
                beta[t][s] = acc;
            }
        }
        beta
    }

    fn total(&self, pre: &[Vec<f64>]) -> f64 {
        let t = self.p.num_frames() - 1;
        let s = self.ext.len() - 1;
        let mut acc = pre[t][s] + self.log_emit(t, s);
        if s >= 1 {
            acc = log_add(acc, pre[t][s - 1] + self.log_emit(t, s - 1));
        }
        acc
    }
}

/// `ln p(y | x)`: the sum over all alignments collapsing to `y` of the
/// product of their frame probabilities. `-inf` when no alignment fits.
pub fn ctc_log_prob(p: &PosteriorSequence, y: &LabelSequence) -> Result<f64, CtcError> {
    let lattice = Lattice::new(p, y)?;
    if y.min_frames() > p.num_frames() {
        return Ok(NEG_INF);
    }
    Ok(lattice.total(&lattice.forward()))
}

/// Gradient of [`ctc_log_prob`] with respect to every posterior entry,
/// `T × (K+1)`, treating entries as free variables.
pub fn ctc_grad(p: &PosteriorSequence, y: &LabelSequence) -> Result<Vec<Vec<f64>>, CtcError> {
    let lattice = Lattice::new(p, y)?;
    if y.min_frames() > p.num_frames() {
        return Err(CtcError::ZeroLikelihood);
    }
    let pre = lattice.forward();
    let log_total = lattice.total(&pre);
    if log_total == NEG_INF {
        return Err(CtcError::ZeroLikelihood);
    }
    let beta = lattice.backward();
    let mut grad = vec![vec![0.0; p.num_columns()]; p.num_frames()];
    for (t, row) in grad.iter_mut().enumerate() {
        for (s, &k) in lattice.ext.iter().enumerate() {
            let v = pre[t][s] + beta[t][s] - log_total;
            if v > NEG_INF {
                row[k as usize] += v.exp();
            }
        }
    }
    Ok(grad)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::ctc::alphabet::PhonemeAlphabet;

    fn be() -> Arc<PhonemeAlphabet> {
        Arc::new(PhonemeAlphabet::new(["b", "e"]).unwrap())
    }

    #[test]
    fn one_hot_spelling_is_certain() {
        let a = be();
        let p = PosteriorSequence::new(a.clone(), vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]]).unwrap();
        let y = LabelSequence::parse("b e", &a).unwrap();
        assert_eq!(ctc_log_prob(&p, &y).unwrap(), 0.0);
    }

    #[test]
    fn uniform_three_frames() {
        let a = be();
        let third = 1.0 / 3.0;
        let p = PosteriorSequence::new(a.clone(), vec![vec![third; 3]; 3]).unwrap();
        let y = LabelSequence::parse("b e", &a).unwrap();
        let expected = (5.0f64 / 27.0).ln();
        assert!((ctc_log_prob(&p, &y).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn repeat_needs_a_blank() {
        let a = be();
        let p = PosteriorSequence::new(a.clone(), vec![vec![1.0 / 3.0; 3]; 2]).unwrap();
        let y = LabelSequence::parse("b e e", &a).unwrap();
        assert_eq!(ctc_log_prob(&p, &y).unwrap(), f64::NEG_INFINITY);
        assert_eq!(ctc_grad(&p, &y).unwrap_err(), CtcError::ZeroLikelihood);
    }

    #[test]
    fn empty_label_is_all_blanks() {
        let a = be();
        let p = PosteriorSequence::new(a.clone(), vec![vec![0.2, 0.3, 0.5], vec![0.1, 0.1, 0.8]]).unwrap();
        let lp = ctc_log_prob(&p, &LabelSequence::default()).unwrap();
        assert!((lp - (0.5f64 * 0.8).ln()).abs() < 1e-12);
    }

    #[test]
    fn one_hot_gradient_by_hand() {
        // T=2 spelling "b e": the only alignment is (b, e) with p = 1, so
        // d ln p / d p[t][k] = 1 / p[t][k] = 1 on the taken entries and 0
        // elsewhere (no other entry lies on a surviving alignment).
        let a = be();
        let p = PosteriorSequence::new(a.clone(), vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]]).unwrap();
        let y = LabelSequence::parse("b e", &a).unwrap();
        let g = ctc_grad(&p, &y).unwrap();
        assert_eq!(g, vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]]);
    }

    #[test]
    fn mirrored_frames_get_mirrored_gradients() {
        // Frames 0 and 2 are identical and "b" reads the same reversed, so
        // the problem is invariant under time reversal.
        let a = be();
        let r1 = vec![0.2, 0.5, 0.3];
        let r2 = vec![0.6, 0.1, 0.3];
        let p = PosteriorSequence::new(a.clone(), vec![r1.clone(), r2, r1]).unwrap();
        let y = LabelSequence::parse("b", &a).unwrap();
        let g = ctc_grad(&p, &y).unwrap();
        for (a, b) in g[0].iter().zip(&g[2]) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
