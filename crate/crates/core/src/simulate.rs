//! Synthetic posteriors standing in for an acoustic or visual network.
//!
//! Each token becomes `frames_per_token` frames; a blank frame separates
//! repeated tokens and is otherwise inserted with probability
//! `blank_fraction` before a token. At temperature 0 rows are exactly
//! one-hot. Above 0, row logits are `margin / τ` on the target plus standard
//! normal noise on every column, then softmax.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::ctc::{CtcError, PhonemeAlphabet, PosteriorSequence, TokenId};

/// Target logit advantage at temperature 1.
pub const TARGET_MARGIN: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationConfig {
    pub frames_per_token: usize,
    pub blank_fraction: f64,
    pub noise_temperature: f64,
    pub seed: u64,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        SimulationConfig { frames_per_token: 2, blank_fraction: 0.3, noise_temperature: 0.0, seed: 0 }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum SimulationError {
    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Ctc(#[from] CtcError),
}

/// The frame-level target tokens for `phonemes`.
fn frame_targets(phonemes: &[TokenId], blank: TokenId, cfg: &SimulationConfig, rng: &mut ChaCha8Rng) -> Vec<TokenId> {
    let mut frames = Vec::with_capacity(phonemes.len() * (cfg.frames_per_token + 1));
    let mut prev = None;
    for &p in phonemes {
        if prev == Some(p) || rng.random_bool(cfg.blank_fraction) {
            frames.push(blank);
        }
        frames.extend(std::iter::repeat_n(p, cfg.frames_per_token));
        prev = Some(p);
    }
    if frames.is_empty() {
        frames.extend(std::iter::repeat_n(blank, cfg.frames_per_token));
    }
    frames
}

pub fn simulate_posteriors(
    phonemes: &[TokenId],
    alphabet: Arc<PhonemeAlphabet>,
    cfg: &SimulationConfig,
) -> Result<PosteriorSequence, SimulationError> {
    if cfg.frames_per_token == 0 {
        return Err(SimulationError::InvalidConfig("frames per token must be at least 1".into()));
    }
    if !(0.0..=1.0).contains(&cfg.blank_fraction) {
        return Err(SimulationError::InvalidConfig(format!(
            "blank fraction {} is not a probability",
            cfg.blank_fraction
        )));
    }
    if !(cfg.noise_temperature >= 0.0 && cfg.noise_temperature.is_finite()) {
        return Err(SimulationError::InvalidConfig(format!("temperature {} must be ≥ 0", cfg.noise_temperature)));
    }
    let blank = alphabet.blank_id();
    if let Some(&p) = phonemes.iter().find(|&&p| p >= blank) {
        return Err(CtcError::InvalidToken(p).into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let targets = frame_targets(phonemes, blank, cfg, &mut rng);
    let columns = alphabet.num_columns();
    let rows = targets
        .iter()
        .map(|&target| {
            let mut row = vec![0.0; columns];
            if cfg.noise_temperature == 0.0 {
                row[target as usize] = 1.0;
                return row;
            }
            for (k, v) in row.iter_mut().enumerate() {
                let boost = if k == target as usize { TARGET_MARGIN / cfg.noise_temperature } else { 0.0 };
                *v = boost + rng.sample::<f64, _>(StandardNormal);
            }
            let max = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            row.iter_mut().for_each(|v| *v = (*v - max).exp());
            let z: f64 = row.iter().sum();
            row.iter_mut().for_each(|v| *v /= z);
            row
        })
        .collect();
    Ok(PosteriorSequence::new(alphabet, rows)?)
}
