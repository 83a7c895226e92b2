use std::collections::{HashMap, VecDeque};

use super::{rank, DecodeConfig, DecodeError, Hypothesis};
use crate::automata::{Label, Semiring, StateId, Wfst, EPSILON};
use crate::ctc::{PhonemeAlphabet, PosteriorSequence};

const ROOT: u32 = 0;

/// Word-history trie; each node is one distinct word sequence.
struct Histories {
    nodes: Vec<(u32, Label)>,
    index: HashMap<(u32, Label), u32>,
}

impl Histories {
    fn new() -> Self {
        Histories { nodes: vec![(ROOT, EPSILON)], index: HashMap::new() }
    }

    fn extend(&mut self, parent: u32, word: Label) -> u32 {
        if word == EPSILON {
            return parent;
        }
        let next = self.nodes.len() as u32;
        *self.index.entry((parent, word)).or_insert_with(|| {
            self.nodes.push((parent, word));
            next
        })
    }

    fn words(&self, mut h: u32) -> Vec<Label> {
        let mut out = Vec::new();
        while h != ROOT {
            let (parent, w) = self.nodes[h as usize];
            out.push(w);
            h = parent;
        }
        out.reverse();
        out
    }
}

#[derive(Debug, Clone, Copy)]
struct Token {
    state: StateId,
    history: u32,
    cost: f64,
}

/// Active tokens, one per `(state, history)`, best cost kept.
#[derive(Default)]
struct Frontier {
    tokens: Vec<Token>,
    index: HashMap<(StateId, u32), usize>,
}

impl Frontier {
    /// Index of the token if it was inserted or improved.
    fn relax(&mut self, state: StateId, history: u32, cost: f64) -> Option<usize> {
        match self.index.get(&(state, history)) {
            Some(&i) if self.tokens[i].cost <= cost => None,
            Some(&i) => {
                self.tokens[i].cost = cost;
                Some(i)
            }
            None => {
                self.index.insert((state, history), self.tokens.len());
                self.tokens.push(Token { state, history, cost });
                Some(self.tokens.len() - 1)
            }
        }
    }

    fn prune(&mut self, beam: usize) {
        if self.tokens.len() <= beam {
            return;
        }
        self.tokens
            .sort_by(|a, b| a.cost.total_cmp(&b.cost).then(a.history.cmp(&b.history)).then(a.state.cmp(&b.state)));
        self.tokens.truncate(beam);
        self.index = self.tokens.iter().enumerate().map(|(i, t)| ((t.state, t.history), i)).collect();
    }
}

struct Search<'a> {
    graph: &'a Wfst,
    cfg: &'a DecodeConfig,
    histories: Histories,
}

impl Search<'_> {
    fn word_cost(&self, olabel: Label) -> f64 {
        if olabel == EPSILON {
            0.0
        } else {
            self.cfg.word_insertion_penalty
        }
    }

    /// Follows input-ε arcs to closure. A relaxation chain longer than the
    /// state count means an improving cycle.
    fn close(&mut self, frontier: &mut Frontier, frame: usize) -> Result<(), DecodeError> {
        let bound = self.graph.num_states() + 1;
        let mut depth = vec![0usize; frontier.tokens.len()];
        let mut queue: VecDeque<usize> = (0..frontier.tokens.len()).collect();
        while let Some(i) = queue.pop_front() {
            let tok = frontier.tokens[i];
            for a in self.graph.arcs(tok.state).iter().filter(|a| a.ilabel == EPSILON) {
                let cost = tok.cost + a.weight + self.word_cost(a.olabel);
                let history = self.histories.extend(tok.history, a.olabel);
                if let Some(j) = frontier.relax(a.nextstate, history, cost) {
                    depth.resize(frontier.tokens.len(), 0);
                    depth[j] = depth[i] + 1;
                    if depth[j] > bound {
                        return Err(DecodeError::EpsilonCycle { frame });
                    }
                    queue.push_back(j);
                }
            }
        }
        Ok(())
    }

    fn advance(&mut self, frontier: &Frontier, neg_log: &[f64]) -> Frontier {
        let mut next = Frontier::default();
        for tok in &frontier.tokens {
            for a in self.graph.arcs(tok.state).iter().filter(|a| a.ilabel != EPSILON) {
                let acoustic = neg_log[PhonemeAlphabet::token_of_label(a.ilabel) as usize];
                if acoustic == f64::INFINITY {
                    continue;
                }
                let cost = tok.cost + self.cfg.acoustic_scale * acoustic + a.weight + self.word_cost(a.olabel);
                let history = self.histories.extend(tok.history, a.olabel);
                next.relax(a.nextstate, history, cost);
            }
        }
        next
    }
}

/// Viterbi beam search: each frame consumes one input arc per hypothesis at
/// `acoustic_scale · −ln p(token | frame)` plus the arc weight, follows ε-arcs
/// to closure and keeps the `beam_width` cheapest hypotheses. Returns up to
/// `nbest` distinct word sequences, cheapest first, ties by word ids; empty
/// if no hypothesis reaches a final state.
pub fn decode(p: &PosteriorSequence, graph: &Wfst, cfg: &DecodeConfig) -> Result<Vec<Hypothesis>, DecodeError> {
    cfg.validate()?;
    if graph.semiring() != Semiring::Tropical {
        return Err(DecodeError::NotTropical);
    }
    let Some(start) = graph.start() else {
        return Err(DecodeError::EmptyGraph);
    };
    if **graph.isymbols() != p.alphabet().frame_symbols() {
        return Err(DecodeError::AlphabetMismatch);
    }
    let mut search = Search { graph, cfg, histories: Histories::new() };
    let mut frontier = Frontier::default();
    frontier.relax(start, ROOT, 0.0);
    search.close(&mut frontier, 0)?;
    frontier.prune(cfg.beam_width);
    for t in 0..p.num_frames() {
        let neg_log: Vec<f64> = p.row(t).iter().map(|&q| -q.ln()).collect();
        frontier = search.advance(&frontier, &neg_log);
        search.close(&mut frontier, t)?;
        frontier.prune(cfg.beam_width);
    }

    let mut best: HashMap<u32, f64> = HashMap::new();
    for tok in &frontier.tokens {
        if let Some(w) = graph.final_weight(tok.state) {
            let cost = tok.cost + w;
            best.entry(tok.history).and_modify(|c| *c = c.min(cost)).or_insert(cost);
        }
    }
    let mut out: Vec<Hypothesis> =
        best.into_iter().map(|(h, cost)| Hypothesis { words: search.histories.words(h), cost }).collect();
    out.sort_by(rank);
    out.truncate(cfg.nbest);
    Ok(out)
}
