use super::GraphError;
use crate::automata::{arcsort, compose, connect, SortKey, Wfst};

/// `connect(arcsort(T ∘ L ∘ G))`: frame-token strings to weighted word
/// strings, arcs sorted by input label.
pub fn compile_tlg(t: &Wfst, l: &Wfst, g: &Wfst) -> Result<Wfst, GraphError> {
    let tl = compose(t, l)?;
    let tlg = compose(&tl, g)?;
    Ok(connect(&arcsort(&tlg, SortKey::Input)))
}
