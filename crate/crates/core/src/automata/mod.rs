//! Weighted finite-state transducers over the tropical and log semirings.
//!
//! Machines are immutable once built; every operation here is a pure function
//! returning a new [`Wfst`].

mod compose;
mod fst;
mod ops;
mod semiring;
mod shortest_path;
mod symbols;
pub mod text;

pub use compose::compose;
pub use fst::{Arc, FstError, Path, StateId, Wfst, WfstBuilder};
pub use ops::{arcsort, connect, SortKey};
pub use semiring::{log_add, neg_log_sum_exp, semiring_plus, semiring_times, Semiring, SemiringError, Weight};
pub use shortest_path::shortest_path;
pub use symbols::{Label, SymbolError, SymbolTable, EPSILON, EPSILON_SYMBOL};
