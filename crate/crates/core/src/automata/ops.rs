use super::fst::{Arc, StateId, Wfst, WfstBuilder};

/// Removes states that are not both accessible and coaccessible.
///
/// Surviving states keep their relative order. A machine whose start cannot
/// reach a final state becomes the empty machine.
pub fn connect(f: &Wfst) -> Wfst {
    let n = f.num_states();
    let Some(start) = f.start() else {
        return Wfst::empty(f.semiring(), f.isymbols().clone(), f.osymbols().clone());
    };

    let mut access = vec![false; n];
    let mut stack = vec![start];
    access[start as usize] = true;
    while let Some(s) = stack.pop() {
        for a in f.arcs(s) {
            if !access[a.nextstate as usize] {
                access[a.nextstate as usize] = true;
                stack.push(a.nextstate);
            }
        }
    }

    let mut reverse: Vec<Vec<StateId>> = vec![Vec::new(); n];
    for s in f.states() {
        for a in f.arcs(s) {
            reverse[a.nextstate as usize].push(s);
        }
    }
    let mut coaccess = vec![false; n];
    let mut stack: Vec<StateId> = f.states().filter(|&s| f.is_final(s)).collect();
    for &s in &stack {
        coaccess[s as usize] = true;
    }
    while let Some(s) = stack.pop() {
        for &p in &reverse[s as usize] {
            if !coaccess[p as usize] {
                coaccess[p as usize] = true;
                stack.push(p);
            }
        }
    }

    let mut builder = WfstBuilder::new(f.semiring(), f.isymbols().clone(), f.osymbols().clone());
    if !(access[start as usize] && coaccess[start as usize]) {
        return builder.build().expect("empty machine is valid");
    }
    let mut remap = vec![None; n];
    for s in f.states() {
        if access[s as usize] && coaccess[s as usize] {
            remap[s as usize] = Some(builder.add_state());
        }
    }
    for s in f.states() {
        let Some(ns) = remap[s as usize] else { continue };
        if let Some(w) = f.final_weight(s) {
            builder.set_final(ns, w);
        }
        for a in f.arcs(s) {
            if let Some(dst) = remap[a.nextstate as usize] {
                builder.add_arc(ns, Arc { nextstate: dst, ..*a });
            }
        }
    }
    builder.set_start(remap[start as usize].expect("start survives"));
    builder.build().expect("connect preserves validity")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SortKey {
    Input,
    Output,
}

/// Stable sort of each state's arcs by the chosen label.
pub fn arcsort(f: &Wfst, by: SortKey) -> Wfst {
    let mut b = f.to_builder();
    for s in f.states() {
        let arcs = b.arcs_mut(s);
        match by {
            SortKey::Input => arcs.sort_by_key(|a| a.ilabel),
            SortKey::Output => arcs.sort_by_key(|a| a.olabel),
        }
    }
    b.build().expect("arcsort preserves validity")
}

#[cfg(test)]
mod tests {
    use std::sync::Arc as Shared;

    use super::*;
    use crate::automata::semiring::Semiring;
    use crate::automata::symbols::SymbolTable;

    fn syms() -> Shared<SymbolTable> {
        Shared::new(SymbolTable::from_symbols(["a", "b", "c"]).unwrap())
    }

    #[test]
    fn drops_unreachable_state() {
        let mut b = WfstBuilder::new(Semiring::Tropical, syms(), syms());
        let s0 = b.add_state();
        let s1 = b.add_state();
        let orphan = b.add_state();
        b.set_start(s0);
        b.set_final(s1, 0.5);
        b.add_arc(s0, Arc::new(1, 2, 1.0, s1));
        b.add_arc(orphan, Arc::new(3, 3, 1.0, s1));
        let f = b.build().unwrap();
        let c = connect(&f);
        assert_eq!(c.num_states(), 2);
        assert_eq!(c.arcs(0), &[Arc::new(1, 2, 1.0, 1)]);
        assert_eq!(c.final_weight(1), Some(0.5));
    }

    #[test]
    fn start_without_final_is_empty() {
        let mut b = WfstBuilder::new(Semiring::Tropical, syms(), syms());
        let s0 = b.add_state();
        let s1 = b.add_state();
        b.set_start(s0);
        b.add_arc(s0, Arc::new(1, 1, 0.0, s1));
        let c = connect(&b.build().unwrap());
        assert!(c.is_empty());
        assert_eq!(c.num_states(), 0);
    }

    #[test]
    fn arcsort_is_a_fixed_point() {
        let mut b = WfstBuilder::new(Semiring::Tropical, syms(), syms());
        let s0 = b.add_state();
        b.set_start(s0);
        b.set_final(s0, 0.0);
        b.add_arc(s0, Arc::new(3, 1, 0.0, s0));
        b.add_arc(s0, Arc::new(1, 3, 0.0, s0));
        b.add_arc(s0, Arc::new(2, 2, 0.0, s0));
        let f = b.build().unwrap();
        let sorted = arcsort(&f, SortKey::Input);
        let labels: Vec<_> = sorted.arcs(0).iter().map(|a| a.ilabel).collect();
        assert_eq!(labels, vec![1, 2, 3]);
        assert_eq!(arcsort(&sorted, SortKey::Input), sorted);
        let by_out = arcsort(&f, SortKey::Output);
        let labels: Vec<_> = by_out.arcs(0).iter().map(|a| a.olabel).collect();
        assert_eq!(labels, vec![1, 2, 3]);
    }

    #[test]
    fn arcsort_empty() {
        let e = Wfst::empty(Semiring::Log, syms(), syms());
        assert_eq!(arcsort(&e, SortKey::Output), e);
    }
}
