use std::sync::Arc as Shared;

use thiserror::Error;

use super::semiring::{Semiring, SemiringError, Weight};
use super::symbols::{Label, SymbolTable};

pub type StateId = u32;

#[derive(Debug, Error, PartialEq)]
pub enum FstError {
    #[error("state {0} does not exist")]
    InvalidState(StateId),
    #[error("label {label} out of range for {side} symbol table of size {size}")]
    InvalidLabel { label: Label, side: &'static str, size: usize },
    #[error("weight {0} is not a valid cost")]
    InvalidWeight(f64),
    #[error(
        "symbol tables do not chain: output table of the left machine differs from input table of the right machine"
    )]
    SymbolMismatch,
    #[error(transparent)]
    Semiring(#[from] SemiringError),
    #[error("operation requires the tropical semiring")]
    NotTropical,
    #[error("negative-weight cycle reachable from the start state")]
    NegativeCycle,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// A labelled, weighted transition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc {
    pub ilabel: Label,
    pub olabel: Label,
    pub weight: f64,
    pub nextstate: StateId,
}

impl Arc {
    pub fn new(ilabel: Label, olabel: Label, weight: f64, nextstate: StateId) -> Self {
        Arc { ilabel, olabel, weight, nextstate }
    }
}

/// An immutable weighted finite-state transducer.
///
/// Weights are plain `f64` costs interpreted in the machine's [`Semiring`];
/// a state is final iff its final weight is not the semiring zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Wfst {
    semiring: Semiring,
    start: Option<StateId>,
    states: Vec<Vec<Arc>>,
    finals: Vec<f64>,
    isymbols: Shared<SymbolTable>,
    osymbols: Shared<SymbolTable>,
}

impl Wfst {
    /// The machine accepting nothing.
    pub fn empty(semiring: Semiring, isymbols: Shared<SymbolTable>, osymbols: Shared<SymbolTable>) -> Self {
        Wfst { semiring, start: None, states: Vec::new(), finals: Vec::new(), isymbols, osymbols }
    }

    pub fn semiring(&self) -> Semiring {
        self.semiring
    }

    pub fn start(&self) -> Option<StateId> {
        self.start
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_arcs(&self) -> usize {
        self.states.iter().map(Vec::len).sum()
    }

    /// True when there is no start state.
    pub fn is_empty(&self) -> bool {
        self.start.is_none()
    }

    pub fn arcs(&self, state: StateId) -> &[Arc] {
        &self.states[state as usize]
    }

    pub fn final_weight(&self, state: StateId) -> Option<f64> {
        let w = self.finals[state as usize];
        (w != self.semiring.zero()).then_some(w)
    }

    pub fn is_final(&self, state: StateId) -> bool {
        self.final_weight(state).is_some()
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> {
        0..self.states.len() as StateId
    }

    pub fn isymbols(&self) -> &Shared<SymbolTable> {
        &self.isymbols
    }

    pub fn osymbols(&self) -> &Shared<SymbolTable> {
        &self.osymbols
    }

    /// A mutable copy for building derived machines.
    pub fn to_builder(&self) -> WfstBuilder {
        WfstBuilder {
            semiring: self.semiring,
            start: self.start,
            states: self.states.clone(),
            finals: self.finals.clone(),
            isymbols: self.isymbols.clone(),
            osymbols: self.osymbols.clone(),
        }
    }

    /// Tags a final weight with this machine's semiring.
    pub fn weight(&self, value: f64) -> Weight {
        Weight::new(value, self.semiring)
    }
}

/// Mutable construction side of [`Wfst`].
#[derive(Debug, Clone)]
pub struct WfstBuilder {
    semiring: Semiring,
    start: Option<StateId>,
    states: Vec<Vec<Arc>>,
    finals: Vec<f64>,
    isymbols: Shared<SymbolTable>,
    osymbols: Shared<SymbolTable>,
}

impl WfstBuilder {
    pub fn new(semiring: Semiring, isymbols: Shared<SymbolTable>, osymbols: Shared<SymbolTable>) -> Self {
        WfstBuilder { semiring, start: None, states: Vec::new(), finals: Vec::new(), isymbols, osymbols }
    }

    pub fn semiring(&self) -> Semiring {
        self.semiring
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn add_state(&mut self) -> StateId {
        self.states.push(Vec::new());
        self.finals.push(self.semiring.zero());
        (self.states.len() - 1) as StateId
    }

    pub fn set_start(&mut self, state: StateId) {
        self.start = Some(state);
    }

    pub fn set_final(&mut self, state: StateId, weight: f64) {
        self.finals[state as usize] = weight;
    }

    pub fn add_arc(&mut self, state: StateId, arc: Arc) {
        self.states[state as usize].push(arc);
    }

    pub fn arcs_mut(&mut self, state: StateId) -> &mut Vec<Arc> {
        &mut self.states[state as usize]
    }

    /// Validates every id, label and weight and freezes the machine.
    pub fn build(self) -> Result<Wfst, FstError> {
        let n = self.states.len();
        let valid = |s: StateId| (s as usize) < n;
        if let Some(s) = self.start {
            if !valid(s) {
                return Err(FstError::InvalidState(s));
            }
        }
        let (isize, osize) = (self.isymbols.len(), self.osymbols.len());
        for arcs in &self.states {
            for a in arcs {
                if !valid(a.nextstate) {
                    return Err(FstError::InvalidState(a.nextstate));
                }
                if a.ilabel as usize >= isize {
                    return Err(FstError::InvalidLabel { label: a.ilabel, side: "input", size: isize });
                }
                if a.olabel as usize >= osize {
                    return Err(FstError::InvalidLabel { label: a.olabel, side: "output", size: osize });
                }
                if a.weight.is_nan() || a.weight == f64::NEG_INFINITY {
                    return Err(FstError::InvalidWeight(a.weight));
                }
            }
        }
        if let Some(&w) = self.finals.iter().find(|w| w.is_nan() || **w == f64::NEG_INFINITY) {
            return Err(FstError::InvalidWeight(w));
        }
        Ok(Wfst {
            semiring: self.semiring,
            start: self.start,
            states: self.states,
            finals: self.finals,
            isymbols: self.isymbols,
            osymbols: self.osymbols,
        })
    }
}

/// One successful path through a machine.
#[derive(Debug, Clone, PartialEq)]
pub struct Path {
    /// `(source state, arc index)` for every arc taken.
    pub arcs: Vec<(StateId, usize)>,
    /// ⊗-product of arc weights and the final weight.
    pub weight: f64,
    pub istring: Vec<Label>,
    pub ostring: Vec<Label>,
}
