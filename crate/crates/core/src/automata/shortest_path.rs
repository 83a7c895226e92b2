use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use super::fst::{FstError, Path, StateId, Wfst};
use super::semiring::Semiring;
use super::symbols::EPSILON;

/// Extra completed paths collected past `n` when weights tie at the cut-off.
const TIE_SLACK: usize = 256;

/// The `n` lowest-weight successful paths of a tropical machine.
///
/// Paths are returned in ascending weight, ties ordered by output string and
/// then input string. Negative arc weights are allowed as long as no
/// negative-weight cycle lies on a successful path.
pub fn shortest_path(f: &Wfst, n: usize) -> Result<Vec<Path>, FstError> {
    if f.semiring() != Semiring::Tropical {
        return Err(FstError::NotTropical);
    }
    let Some(start) = f.start() else {
        return Ok(Vec::new());
    };
    if n == 0 {
        return Ok(Vec::new());
    }
    let to_final = distances_to_final(f, start)?;

    // Best-first search over path prefixes ordered by g + h with an exact
    // heuristic, so completed paths pop in nondecreasing weight.
    let mut nodes = vec![Node { state: start, parent: None, arc: 0, cost: 0.0 }];
    let mut heap = BinaryHeap::new();
    let mut seq = 0usize;
    let mut push = |heap: &mut BinaryHeap<Reverse<Entry>>, priority: f64, node: usize, complete: bool| {
        heap.push(Reverse(Entry { priority, seq, node, complete }));
        seq += 1;
    };
    push(&mut heap, to_final[start as usize], 0, false);

    let mut done: Vec<Path> = Vec::new();
    let mut cutoff = f64::INFINITY;
    while let Some(Reverse(entry)) = heap.pop() {
        if done.len() >= n && entry.priority > cutoff + 1e-9 * cutoff.abs().max(1.0) {
            break;
        }
        if done.len() >= n + TIE_SLACK {
            break;
        }
        let node = &nodes[entry.node];
        if entry.complete {
            done.push(trace(f, &nodes, entry.node));
            if done.len() == n {
                cutoff = entry.priority;
            }
            continue;
        }
        let (state, cost) = (node.state, node.cost);
        if let Some(w) = f.final_weight(state) {
            push(&mut heap, cost + w, entry.node, true);
        }
        for (i, a) in f.arcs(state).iter().enumerate() {
            let h = to_final[a.nextstate as usize];
            if h == f64::INFINITY {
                continue;
            }
            let g = cost + a.weight;
            nodes.push(Node { state: a.nextstate, parent: Some(entry.node), arc: i, cost: g });
            push(&mut heap, g + h, nodes.len() - 1, false);
        }
    }

    done.sort_by(|x, y| {
        x.weight.total_cmp(&y.weight).then_with(|| x.ostring.cmp(&y.ostring)).then_with(|| x.istring.cmp(&y.istring))
    });
    done.truncate(n);
    Ok(done)
}

struct Node {
    state: StateId,
    parent: Option<usize>,
    arc: usize,
    cost: f64,
}

#[derive(PartialEq)]
struct Entry {
    priority: f64,
    seq: usize,
    node: usize,
    complete: bool,
}

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.priority.total_cmp(&other.priority).then(self.seq.cmp(&other.seq))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn trace(f: &Wfst, nodes: &[Node], leaf: usize) -> Path {
    let mut arcs = Vec::new();
    let mut cur = leaf;
    while let Some(parent) = nodes[cur].parent {
        arcs.push((nodes[parent].state, nodes[cur].arc));
        cur = parent;
    }
    arcs.reverse();
    let mut path = Path { arcs, weight: 0.0, istring: Vec::new(), ostring: Vec::new() };
    for &(s, i) in &path.arcs {
        let a = f.arcs(s)[i];
        path.weight += a.weight;
        if a.ilabel != EPSILON {
            path.istring.push(a.ilabel);
        }
        if a.olabel != EPSILON {
            path.ostring.push(a.olabel);
        }
    }
    let last = nodes[leaf].state;
    path.weight += f.final_weight(last).expect("completed paths end in a final state");
    path
}

/// Shortest distance from every accessible state to a final state (final
/// weight included), by Bellman-Ford so negative arcs are allowed. Cycles off
/// every successful path never relax and are ignored.
fn distances_to_final(f: &Wfst, start: StateId) -> Result<Vec<f64>, FstError> {
    let n = f.num_states();
    let mut accessible = vec![false; n];
    let mut order = vec![start];
    accessible[start as usize] = true;
    let mut i = 0;
    while i < order.len() {
        for a in f.arcs(order[i]) {
            if !accessible[a.nextstate as usize] {
                accessible[a.nextstate as usize] = true;
                order.push(a.nextstate);
            }
        }
        i += 1;
    }
    let mut dist: Vec<f64> = f.states().map(|s| f.final_weight(s).unwrap_or(f64::INFINITY)).collect();
    for round in 0..=order.len() {
        let mut changed = false;
        for &s in order.iter().rev() {
            for a in f.arcs(s) {
                let d = a.weight + dist[a.nextstate as usize];
                if d < dist[s as usize] {
                    dist[s as usize] = d;
                    changed = true;
                }
            }
        }
        if !changed {
            return Ok(dist);
        }
        if round == order.len() {
            break;
        }
    }
    Err(FstError::NegativeCycle)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc as Shared;

    use super::*;
    use crate::automata::fst::{Arc, WfstBuilder};
    use crate::automata::symbols::SymbolTable;

    fn syms() -> Shared<SymbolTable> {
        Shared::new(SymbolTable::from_symbols(["a", "b", "c", "d"]).unwrap())
    }

    #[test]
    fn single_path() {
        let mut b = WfstBuilder::new(Semiring::Tropical, syms(), syms());
        let s0 = b.add_state();
        let s1 = b.add_state();
        b.set_start(s0);
        b.set_final(s1, 0.25);
        b.add_arc(s0, Arc::new(1, 2, 1.0, s1));
        let paths = shortest_path(&b.build().unwrap(), 3).unwrap();
        assert_eq!(paths.len(), 1);
        assert_eq!(paths[0].arcs, vec![(0, 0)]);
        assert_eq!(paths[0].weight, 1.25);
        assert_eq!(paths[0].istring, vec![1]);
        assert_eq!(paths[0].ostring, vec![2]);
    }

    #[test]
    fn diamond_prefers_cheaper_branch() {
        let mut b = WfstBuilder::new(Semiring::Tropical, syms(), syms());
        let s: Vec<_> = (0..4).map(|_| b.add_state()).collect();
        b.set_start(s[0]);
        b.set_final(s[3], 0.0);
        b.add_arc(s[0], Arc::new(1, 1, 2.0, s[2]));
        b.add_arc(s[0], Arc::new(2, 2, 1.0, s[1]));
        b.add_arc(s[1], Arc::new(3, 3, 2.0, s[3]));
        b.add_arc(s[2], Arc::new(4, 4, 2.0, s[3]));
        let paths = shortest_path(&b.build().unwrap(), 2).unwrap();
        assert_eq!(paths[0].weight, 3.0);
        assert_eq!(paths[0].ostring, vec![2, 3]);
        assert_eq!(paths[1].weight, 4.0);
    }

    #[test]
    fn ties_break_on_output_string() {
        let mut b = WfstBuilder::new(Semiring::Tropical, syms(), syms());
        let s0 = b.add_state();
        let s1 = b.add_state();
        b.set_start(s0);
        b.set_final(s1, 0.0);
        b.add_arc(s0, Arc::new(1, 3, 1.0, s1));
        b.add_arc(s0, Arc::new(1, 1, 1.0, s1));
        b.add_arc(s0, Arc::new(1, 2, 1.0, s1));
        let paths = shortest_path(&b.build().unwrap(), 2).unwrap();
        let outs: Vec<_> = paths.iter().map(|p| p.ostring.clone()).collect();
        assert_eq!(outs, vec![vec![1], vec![2]]);
    }

    #[test]
    fn negative_cycle_rejected() {
        let mut b = WfstBuilder::new(Semiring::Tropical, syms(), syms());
        let s0 = b.add_state();
        let s1 = b.add_state();
        b.set_start(s0);
        b.set_final(s1, 0.0);
        b.add_arc(s0, Arc::new(1, 1, -1.0, s0));
        b.add_arc(s0, Arc::new(2, 2, 1.0, s1));
        assert_eq!(shortest_path(&b.build().unwrap(), 1).unwrap_err(), FstError::NegativeCycle);
    }

    #[test]
    fn cyclic_with_positive_weights_enumerates_loops() {
        let mut b = WfstBuilder::new(Semiring::Tropical, syms(), syms());
        let s0 = b.add_state();
        b.set_start(s0);
        b.set_final(s0, 0.0);
        b.add_arc(s0, Arc::new(1, 1, 1.0, s0));
        let paths = shortest_path(&b.build().unwrap(), 3).unwrap();
        let weights: Vec<_> = paths.iter().map(|p| p.weight).collect();
        assert_eq!(weights, vec![0.0, 1.0, 2.0]);
    }

    #[test]
    fn log_semiring_rejected() {
        let mut b = WfstBuilder::new(Semiring::Log, syms(), syms());
        let s0 = b.add_state();
        b.set_start(s0);
        assert_eq!(shortest_path(&b.build().unwrap(), 1).unwrap_err(), FstError::NotTropical);
    }
}
