use std::collections::hash_map::Entry;
use std::collections::{HashMap, VecDeque};

use super::fst::{Arc, FstError, StateId, Wfst, WfstBuilder};
use super::semiring::SemiringError;
use super::symbols::{Label, EPSILON};

/// Epsilon-sequencing filter state.
///
/// `Clear` allows every move. After the left machine advances alone on an
/// output epsilon the filter is `LeftOnly`; after the right machine advances
/// alone on an input epsilon it is `RightOnly`. Simultaneous epsilon moves are
/// only taken from `Clear`, so each pair of epsilon paths is counted once.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Filter {
    Clear,
    LeftOnly,
    RightOnly,
}

type PairState = (StateId, StateId, Filter);

/// Per-state arcs of the right machine grouped by input label.
struct InputIndex {
    sorted: Vec<Vec<Arc>>,
}

impl InputIndex {
    fn new(f: &Wfst) -> Self {
        let sorted = f
            .states()
            .map(|s| {
                let mut arcs = f.arcs(s).to_vec();
                arcs.sort_by_key(|a| a.ilabel);
                arcs
            })
            .collect();
        InputIndex { sorted }
    }

    fn matching(&self, state: StateId, label: Label) -> &[Arc] {
        let arcs = &self.sorted[state as usize];
        let lo = arcs.partition_point(|a| a.ilabel < label);
        let hi = arcs.partition_point(|a| a.ilabel <= label);
        &arcs[lo..hi]
    }
}

/// Weighted composition `a ∘ b`.
///
/// The result maps `x` to `z` with weight `⊕_y a(x→y) ⊗ b(y→z)`. Only states
/// accessible from the start are created; call [`connect`](super::connect)
/// to also drop dead ends.
pub fn compose(a: &Wfst, b: &Wfst) -> Result<Wfst, FstError> {
    if a.semiring() != b.semiring() {
        return Err(SemiringError::Mismatch(a.semiring(), b.semiring()).into());
    }
    if !std::sync::Arc::ptr_eq(a.osymbols(), b.isymbols()) && a.osymbols() != b.isymbols() {
        return Err(FstError::SymbolMismatch);
    }
    let semiring = a.semiring();
    let mut out = WfstBuilder::new(semiring, a.isymbols().clone(), b.osymbols().clone());
    let (Some(sa), Some(sb)) = (a.start(), b.start()) else {
        return out.build();
    };

    let index = InputIndex::new(b);
    let mut ids: HashMap<PairState, StateId> = HashMap::new();
    let mut queue: VecDeque<(PairState, StateId)> = VecDeque::new();

    let mut lookup =
        |pair: PairState, out: &mut WfstBuilder, queue: &mut VecDeque<(PairState, StateId)>| match ids.entry(pair) {
            Entry::Occupied(e) => *e.get(),
            Entry::Vacant(e) => {
                let id = out.add_state();
                queue.push_back((pair, id));
                *e.insert(id)
            }
        };

    let start = lookup((sa, sb, Filter::Clear), &mut out, &mut queue);
    out.set_start(start);

    while let Some(((qa, qb, filter), src)) = queue.pop_front() {
        if let (Some(fa), Some(fb)) = (a.final_weight(qa), b.final_weight(qb)) {
            out.set_final(src, semiring.times(fa, fb));
        }

        for ea in a.arcs(qa) {
            if ea.olabel != EPSILON {
                for eb in index.matching(qb, ea.olabel) {
                    let dst = lookup((ea.nextstate, eb.nextstate, Filter::Clear), &mut out, &mut queue);
                    out.add_arc(src, Arc::new(ea.ilabel, eb.olabel, semiring.times(ea.weight, eb.weight), dst));
                }
                continue;
            }
            if filter != Filter::RightOnly {
                let dst = lookup((ea.nextstate, qb, Filter::LeftOnly), &mut out, &mut queue);
                out.add_arc(src, Arc::new(ea.ilabel, EPSILON, ea.weight, dst));
            }
            if filter == Filter::Clear {
                for eb in index.matching(qb, EPSILON) {
                    let dst = lookup((ea.nextstate, eb.nextstate, Filter::Clear), &mut out, &mut queue);
                    out.add_arc(src, Arc::new(ea.ilabel, eb.olabel, semiring.times(ea.weight, eb.weight), dst));
                }
            }
        }
        if filter != Filter::LeftOnly {
            for eb in index.matching(qb, EPSILON) {
                let dst = lookup((qa, eb.nextstate, Filter::RightOnly), &mut out, &mut queue);
                out.add_arc(src, Arc::new(EPSILON, eb.olabel, eb.weight, dst));
            }
        }
    }
    out.build()
}

#[cfg(test)]
mod tests {
    use std::sync::Arc as Shared;

    use super::*;
    use crate::automata::semiring::Semiring;
    use crate::automata::symbols::SymbolTable;
    use crate::automata::{connect, shortest_path};

    fn table(names: &[&str]) -> Shared<SymbolTable> {
        Shared::new(SymbolTable::from_symbols(names.iter().copied()).unwrap())
    }

    /// Linear machine accepting exactly `pairs` in order.
    fn linear(pairs: &[(Label, Label, f64)], i: &Shared<SymbolTable>, o: &Shared<SymbolTable>) -> Wfst {
        let mut b = WfstBuilder::new(Semiring::Tropical, i.clone(), o.clone());
        let mut s = b.add_state();
        b.set_start(s);
        for &(il, ol, w) in pairs {
            let n = b.add_state();
            b.add_arc(s, Arc::new(il, ol, w, n));
            s = n;
        }
        b.set_final(s, 0.0);
        b.build().unwrap()
    }

    #[test]
    fn chains_two_transducers() {
        let x = table(&["a", "b"]);
        let y = table(&["p", "q"]);
        let z = table(&["u"]);
        let first = linear(&[(1, 1, 0.5), (2, 0, 0.25)], &x, &y);
        let second = linear(&[(1, 1, 1.0)], &y, &z);
        let c = connect(&compose(&first, &second).unwrap());
        let best = shortest_path(&c, 1).unwrap();
        assert_eq!(best.len(), 1);
        assert_eq!(best[0].istring, vec![1, 2]);
        assert_eq!(best[0].ostring, vec![1]);
        assert!((best[0].weight - 1.75).abs() < 1e-12);
    }

    #[test]
    fn rejecting_right_side_gives_empty_after_connect() {
        let x = table(&["a"]);
        let y = table(&["p", "q"]);
        let first = linear(&[(1, 1, 0.0)], &x, &y);
        let second = linear(&[(2, 2, 0.0)], &y, &y);
        let c = connect(&compose(&first, &second).unwrap());
        assert!(c.is_empty());
        assert_eq!(c.num_states(), 0);
    }

    #[test]
    fn symbol_mismatch() {
        let x = table(&["a"]);
        let y = table(&["p"]);
        let first = linear(&[(1, 1, 0.0)], &x, &x);
        let second = linear(&[(1, 1, 0.0)], &y, &y);
        assert_eq!(compose(&first, &second).unwrap_err(), FstError::SymbolMismatch);
    }

    #[test]
    fn semiring_mismatch() {
        let x = table(&["a"]);
        let first = linear(&[(1, 1, 0.0)], &x, &x);
        let mut b = WfstBuilder::new(Semiring::Log, x.clone(), x.clone());
        let s = b.add_state();
        b.set_start(s);
        let second = b.build().unwrap();
        assert!(matches!(compose(&first, &second), Err(FstError::Semiring(_))));
    }

    #[test]
    fn epsilon_pairs_counted_once() {
        // left: a:ε, right: ε:u. Three interleavings exist; the filter keeps one.
        let x = table(&["a"]);
        let y = table(&["p"]);
        let z = table(&["u"]);
        let first = linear(&[(1, 0, 1.0)], &x, &y);
        let second = linear(&[(0, 1, 2.0)], &y, &z);
        let c = connect(&compose(&first, &second).unwrap());
        let paths = shortest_path(&c, 10).unwrap();
        assert_eq!(paths.len(), 1);
        assert_eq!(paths[0].istring, vec![1]);
        assert_eq!(paths[0].ostring, vec![1]);
        assert!((paths[0].weight - 3.0).abs() < 1e-12);
    }
}
