//! Line-oriented text form of a [`Wfst`].
//!
//! ```text
//! <start|none> <semiring>
//! src ilabel olabel weight dst      (one line per arc)
//! state weight                      (one line per final state)
//! ```
//!
//! Arcs are written state by state, each state's final line after its arcs.
//! Weights carry nine significant digits, so writing a parsed machine
//! reproduces the text byte for byte. Symbol tables travel separately as
//! `symbol id` files (see [`SymbolTable::to_text`]).

use std::fmt::Write as _;
use std::sync::Arc as Shared;

use super::fst::{Arc, FstError, StateId, Wfst, WfstBuilder};
use super::semiring::Semiring;
use super::symbols::{Label, SymbolTable};

/// `%.9g`-style rendering.
pub fn format_weight(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{v:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        trim_zeros(format!("{v:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    let t = s.trim_end_matches('0').trim_end_matches('.');
    t.to_string()
}

pub fn write_text(f: &Wfst) -> String {
    let mut out = String::new();
    match f.start() {
        Some(s) => {
            let _ = writeln!(out, "{s} {}", f.semiring());
        }
        None => {
            let _ = writeln!(out, "none {}", f.semiring());
        }
    }
    for s in f.states() {
        for a in f.arcs(s) {
            let _ = writeln!(out, "{s} {} {} {} {}", a.ilabel, a.olabel, format_weight(a.weight), a.nextstate);
        }
        if let Some(w) = f.final_weight(s) {
            let _ = writeln!(out, "{s} {}", format_weight(w));
        }
    }
    out
}

pub fn read_text(text: &str, isymbols: Shared<SymbolTable>, osymbols: Shared<SymbolTable>) -> Result<Wfst, FstError> {
    let err = |line: usize, msg: String| FstError::Parse { line, msg };
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let Some((_, header)) = lines.next() else {
        return Err(err(1, "missing header line".into()));
    };
    let mut fields = header.split_whitespace();
    let (Some(start), Some(semiring), None) = (fields.next(), fields.next(), fields.next()) else {
        return Err(err(1, "header must be `start semiring`".into()));
    };
    let semiring: Semiring = semiring.parse().map_err(|e| err(1, format!("{e}")))?;
    let start: Option<StateId> = match start {
        "none" => None,
        s => Some(s.parse().map_err(|_| err(1, format!("bad start state `{s}`")))?),
    };

    let mut arcs: Vec<(StateId, Arc)> = Vec::new();
    let mut finals: Vec<(StateId, f64)> = Vec::new();
    let mut max_state = start.map(|s| s as i64).unwrap_or(-1);
    for (n, line) in lines {
        let line_no = n + 1;
        let fields: Vec<&str> = line.split_whitespace().collect();
        let state = |s: &str| s.parse::<StateId>().map_err(|_| err(line_no, format!("bad state `{s}`")));
        let label = |s: &str| s.parse::<Label>().map_err(|_| err(line_no, format!("bad label `{s}`")));
        let weight = |s: &str| s.parse::<f64>().map_err(|_| err(line_no, format!("bad weight `{s}`")));
        match fields.as_slice() {
            [src, il, ol, w, dst] => {
                let (src, dst) = (state(src)?, state(dst)?);
                max_state = max_state.max(src as i64).max(dst as i64);
                arcs.push((src, Arc::new(label(il)?, label(ol)?, weight(w)?, dst)));
            }
            [s, w] => {
                let s = state(s)?;
                max_state = max_state.max(s as i64);
                finals.push((s, weight(w)?));
            }
            _ => return Err(err(line_no, "expected `src ilabel olabel weight dst` or `state weight`".into())),
        }
    }

    let mut b = WfstBuilder::new(semiring, isymbols, osymbols);
    for _ in 0..=max_state {
        b.add_state();
    }
    if let Some(s) = start {
        b.set_start(s);
    }
    for (s, a) in arcs {
        b.add_arc(s, a);
    }
    for (s, w) in finals {
        b.set_final(s, w);
    }
    b.build()
}
