//! Reading inputs and writing outputs atomically.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc as Shared;

use phonlat_core::automata::{text, SymbolTable, Wfst};
use phonlat_core::ctc::{PhonemeAlphabet, PosteriorSequence, BINARY_MAGIC};
use tempfile::NamedTempFile;

use crate::fail::Failure;

pub fn read_text(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(Failure::io(path))
}

/// Writes `bytes` to a temporary sibling of `path`, then renames it into
/// place, so readers never see a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = NamedTempFile::new_in(dir).map_err(Failure::io(path))?;
    tmp.write_all(bytes).map_err(Failure::io(path))?;
    tmp.as_file().sync_all().map_err(Failure::io(path))?;
    tmp.persist(path).map_err(|e| Failure::io(path)(e.error))?;
    Ok(())
}

/// `path` with `suffix` appended to its full file name.
pub fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

/// An alphabet file, or the default inventory when none is given.
pub fn read_alphabet(path: Option<&Path>) -> Result<Shared<PhonemeAlphabet>, Failure> {
    match path {
        Some(p) => Ok(Shared::new(PhonemeAlphabet::from_text(&read_text(p)?).map_err(Failure::at(p))?)),
        None => Ok(Shared::new(PhonemeAlphabet::default_inventory())),
    }
}

pub fn read_symbols(path: &Path) -> Result<SymbolTable, Failure> {
    SymbolTable::from_text(&read_text(path)?).map_err(Failure::at(path))
}

/// Writes a machine with its symbol tables in `.isym` / `.osym` siblings.
pub fn write_fst(path: &Path, f: &Wfst) -> Result<(), Failure> {
    write_atomic(&sibling(path, ".isym"), f.isymbols().to_text().as_bytes())?;
    write_atomic(&sibling(path, ".osym"), f.osymbols().to_text().as_bytes())?;
    write_atomic(path, text::write_text(f).as_bytes())
}

pub fn read_fst(path: &Path) -> Result<Wfst, Failure> {
    let isyms = Shared::new(read_symbols(&sibling(path, ".isym"))?);
    let osyms = Shared::new(read_symbols(&sibling(path, ".osym"))?);
    text::read_text(&read_text(path)?, isyms, osyms).map_err(Failure::at(path))
}

/// A text or binary posterior file; the format is sniffed from the magic.
pub fn read_posteriors(path: &Path, alphabet: Shared<PhonemeAlphabet>) -> Result<PosteriorSequence, Failure> {
    let bytes = std::fs::read(path).map_err(Failure::io(path))?;
    if bytes.starts_with(BINARY_MAGIC) {
        return PosteriorSequence::from_binary(&bytes, alphabet).map_err(Failure::at(path));
    }
    let text = String::from_utf8(bytes).map_err(|e| Failure::data(path, None, e.to_string()))?;
    PosteriorSequence::from_text(&text, alphabet).map_err(Failure::at(path))
}

/// Non-blank, non-comment lines of a `key<TAB>value` file with their line
/// numbers. The key is the first tab- or space-separated field.
pub fn keyed_lines(path: &Path, text: &str) -> Result<Vec<(usize, String, String)>, Failure> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (key, rest) = match trimmed.split_once(['\t', ' ']) {
            Some((k, r)) => (k, r),
            None => (trimmed, ""),
        };
        if key.is_empty() {
            return Err(Failure::data(path, Some(n + 1), "missing utterance id"));
        }
        out.push((n + 1, key.to_string(), rest.to_string()));
    }
    Ok(out)
}
