use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

/// Arc label. `0` is epsilon in every table.
pub type Label = u32;

pub const EPSILON: Label = 0;
pub const EPSILON_SYMBOL: &str = "<eps>";

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SymbolError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("duplicate symbol `{0}`")]
    Duplicate(String),
}

/// Dense bidirectional map between strings and labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolTable {
    symbols: Vec<String>,
    index: HashMap<String, Label>,
}

impl Default for SymbolTable {
    fn default() -> Self {
        Self::new()
    }
}

impl SymbolTable {
    /// A table holding only epsilon.
    pub fn new() -> Self {
        let mut index = HashMap::new();
        index.insert(EPSILON_SYMBOL.to_string(), EPSILON);
        SymbolTable { symbols: vec![EPSILON_SYMBOL.to_string()], index }
    }

    /// Builds a table with `symbols` at ids `1..`.
    pub fn from_symbols<I, S>(symbols: I) -> Result<Self, SymbolError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut table = SymbolTable::new();
        for s in symbols {
            let s = s.into();
            if table.index.contains_key(&s) {
                return Err(SymbolError::Duplicate(s));
            }
            table.push(s);
        }
        Ok(table)
    }

    fn push(&mut self, s: String) -> Label {
        let id = self.symbols.len() as Label;
        self.index.insert(s.clone(), id);
        self.symbols.push(s);
        id
    }

    /// Returns the id of `s`, adding it if absent.
    pub fn add(&mut self, s: &str) -> Label {
        match self.index.get(s) {
            Some(&id) => id,
            None => self.push(s.to_string()),
        }
    }

    pub fn id(&self, s: &str) -> Option<Label> {
        self.index.get(s).copied()
    }

    pub fn symbol(&self, id: Label) -> Option<&str> {
        self.symbols.get(id as usize).map(String::as_str)
    }

    /// Number of entries, epsilon included.
    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.len() <= 1
    }

    /// Non-epsilon `(id, symbol)` pairs in id order.
    pub fn iter(&self) -> impl Iterator<Item = (Label, &str)> {
        self.symbols.iter().enumerate().skip(1).map(|(i, s)| (i as Label, s.as_str()))
    }

    /// `symbol id` per line, epsilon first.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, s) in self.symbols.iter().enumerate() {
            let _ = writeln!(out, "{s} {i}");
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, SymbolError> {
        let mut pairs = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line_no = n + 1;
            if line.trim().is_empty() {
                continue;
            }
            let mut fields = line.split_whitespace();
            let (Some(sym), Some(id), None) = (fields.next(), fields.next(), fields.next()) else {
                return Err(SymbolError::Parse { line: line_no, msg: "expected `symbol id`".into() });
            };
            let id: Label =
                id.parse().map_err(|_| SymbolError::Parse { line: line_no, msg: format!("bad id `{id}`") })?;
            pairs.push((line_no, sym.to_string(), id));
        }
        let mut table = SymbolTable { symbols: Vec::new(), index: HashMap::new() };
        for (line_no, sym, id) in pairs {
            if id as usize != table.symbols.len() {
                return Err(SymbolError::Parse {
                    line: line_no,
                    msg: format!("ids must be dense and ascending, got {id}"),
                });
            }
            if id == EPSILON && sym != EPSILON_SYMBOL {
                return Err(SymbolError::Parse { line: line_no, msg: format!("id 0 must be `{EPSILON_SYMBOL}`") });
            }
            if table.index.contains_key(&sym) {
                return Err(SymbolError::Duplicate(sym));
            }
            table.push(sym);
        }
        if table.symbols.is_empty() {
            return Err(SymbolError::Parse { line: 0, msg: "empty symbol table".into() });
        }
        Ok(table)
    }
}
