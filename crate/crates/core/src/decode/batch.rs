use rayon::prelude::*;

use super::{decode, DecodeConfig, DecodeError, Hypothesis};
use crate::automata::Wfst;
use crate::ctc::PosteriorSequence;

/// Decodes utterances on `parallelism` threads sharing one graph. Results
/// come back in input order; a failing utterance does not stop the batch.
pub fn decode_batch(
    utterances: &[PosteriorSequence],
    graph: &Wfst,
    cfg: &DecodeConfig,
    parallelism: usize,
) -> Result<Vec<Result<Vec<Hypothesis>, DecodeError>>, DecodeError> {
    cfg.validate()?;
    if parallelism == 0 {
        return Err(DecodeError::InvalidConfig("parallelism must be at least 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism)
        .build()
        .map_err(|e| DecodeError::InvalidConfig(e.to_string()))?;
    Ok(pool.install(|| utterances.par_iter().map(|p| decode(p, graph, cfg)).collect()))
}
