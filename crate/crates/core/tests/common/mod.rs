//! Brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc as Shared;

use phonlat_core::automata::{Arc, Label, Semiring, SymbolTable, Wfst, WfstBuilder, EPSILON};
use rand::Rng;

pub type Relation = BTreeMap<(Vec<Label>, Vec<Label>), f64>;

/// Every successful path with at most `max_arcs` arcs, as
/// `(istring, ostring, weight)`.
pub fn enumerate_paths(f: &Wfst, max_arcs: usize) -> Vec<(Vec<Label>, Vec<Label>, f64)> {
    let mut out = Vec::new();
    let Some(start) = f.start() else { return out };
    let mut stack = vec![(start, Vec::new(), Vec::new(), 0.0f64, 0usize)];
    while let Some((s, is, os, w, depth)) = stack.pop() {
        if let Some(fw) = f.final_weight(s) {
            out.push((is.clone(), os.clone(), w + fw));
        }
        if depth == max_arcs {
            continue;
        }
        for a in f.arcs(s) {
            let mut is2 = is.clone();
            let mut os2 = os.clone();
            if a.ilabel != EPSILON {
                is2.push(a.ilabel);
            }
            if a.olabel != EPSILON {
                os2.push(a.olabel);
            }
            stack.push((a.nextstate, is2, os2, w + a.weight, depth + 1));
        }
    }
    out
}

/// ⊕-aggregated weighted relation over paths of at most `max_arcs` arcs.
pub fn relation(f: &Wfst, max_arcs: usize) -> Relation {
    let s = f.semiring();
    let mut rel = Relation::new();
    for (i, o, w) in enumerate_paths(f, max_arcs) {
        let e = rel.entry((i, o)).or_insert(f64::INFINITY);
        *e = s.plus(*e, w);
    }
    rel
}

/// Relation of `a ∘ b` computed by joining the two relations on the middle string.
pub fn join(a: &Relation, b: &Relation, s: Semiring) -> Relation {
    let mut rel = Relation::new();
    for ((x, y), wa) in a {
        for ((y2, z), wb) in b {
            if y == y2 {
                let e = rel.entry((x.clone(), z.clone())).or_insert(f64::INFINITY);
                *e = s.plus(*e, wa + wb);
            }
        }
    }
    rel
}

pub fn assert_relations_close(a: &Relation, b: &Relation, tol: f64) {
    let keys_a: Vec<_> = a.keys().collect();
    let keys_b: Vec<_> = b.keys().collect();
    assert_eq!(keys_a, keys_b, "relation domains differ");
    for (k, wa) in a {
        let wb = b[k];
        assert!((wa - wb).abs() <= tol, "weight mismatch at {k:?}: {wa} vs {wb}");
    }
}

pub fn table(n: usize) -> Shared<SymbolTable> {
    Shared::new(SymbolTable::from_symbols((1..=n).map(|i| format!("s{i}"))).unwrap())
}

/// Random machine; `acyclic` restricts arcs to increasing state ids.
/// Weights are multiples of 1/8 so tropical sums are exact.
#[allow(clippy::too_many_arguments)]
pub fn random_machine<R: Rng>(
    rng: &mut R,
    semiring: Semiring,
    states: usize,
    arcs: usize,
    isyms: &Shared<SymbolTable>,
    osyms: &Shared<SymbolTable>,
    acyclic: bool,
    eps_rate: f64,
) -> Wfst {
    let mut b = WfstBuilder::new(semiring, isyms.clone(), osyms.clone());
    for _ in 0..states {
        b.add_state();
    }
    b.set_start(0);
    let label = |rng: &mut R, n: usize| -> Label {
        if rng.random_bool(eps_rate) {
            EPSILON
        } else {
            rng.random_range(1..n as Label)
        }
    };
    for _ in 0..arcs {
        let (src, dst) = if acyclic {
            let src = rng.random_range(0..states - 1);
            (src, rng.random_range(src + 1..states))
        } else {
            (rng.random_range(0..states), rng.random_range(0..states))
        };
        let il = label(rng, isyms.len());
        let ol = label(rng, osyms.len());
        let w = rng.random_range(0..24) as f64 / 8.0;
        b.add_arc(src as u32, Arc::new(il, ol, w, dst as u32));
    }
    for s in 0..states {
        if s == states - 1 || rng.random_bool(0.25) {
            b.set_final(s as u32, rng.random_range(0..8) as f64 / 8.0);
        }
    }
    b.build().unwrap()
}
