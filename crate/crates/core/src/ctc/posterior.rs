use std::fmt::Write as _;
use std::sync::Arc;

use super::alphabet::{PhonemeAlphabet, TokenId};
use super::CtcError;

/// Maximum allowed deviation of a row sum from 1.
pub const ROW_SUM_TOLERANCE: f64 = 1e-6;

/// Leading bytes of the binary posterior format.
pub const BINARY_MAGIC: &[u8; 8] = b"PHLPOST1";

/// `T × (K+1)` row-stochastic matrix of per-frame token distributions.
#[derive(Debug, Clone, PartialEq)]
pub struct PosteriorSequence {
    alphabet: Arc<PhonemeAlphabet>,
    frames: usize,
    data: Vec<f64>,
}

impl PosteriorSequence {
    /// Validates and wraps `rows`. Rows off by more than
    /// [`ROW_SUM_TOLERANCE`] are rejected, never renormalised.
    pub fn new(alphabet: Arc<PhonemeAlphabet>, rows: Vec<Vec<f64>>) -> Result<Self, CtcError> {
        let columns = alphabet.num_columns();
        let frames = rows.len();
        let mut data = Vec::with_capacity(frames * columns);
        for (t, row) in rows.into_iter().enumerate() {
            if row.len() != columns {
                return Err(CtcError::ColumnMismatch { frame: t, expected: columns, found: row.len() });
            }
            data.extend(row);
        }
        Self::from_flat(alphabet, frames, data)
    }

    pub fn from_flat(alphabet: Arc<PhonemeAlphabet>, frames: usize, data: Vec<f64>) -> Result<Self, CtcError> {
        let seq = Self::new_unchecked(alphabet, frames, data);
        seq.validate()?;
        Ok(seq)
    }

    /// Skips the stochasticity checks. Only the shape is asserted; used by
    /// finite-difference and scale tests that need off-simplex rows.
    pub fn new_unchecked(alphabet: Arc<PhonemeAlphabet>, frames: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), frames * alphabet.num_columns(), "posterior shape");
        PosteriorSequence { alphabet, frames, data }
    }

    fn validate(&self) -> Result<(), CtcError> {
        if self.frames == 0 {
            return Err(CtcError::NoFrames);
        }
        (0..self.frames).try_for_each(|t| Self::check_row(self.row(t), t))
    }

    pub fn alphabet(&self) -> &Arc<PhonemeAlphabet> {
        &self.alphabet
    }

    pub fn num_frames(&self) -> usize {
        self.frames
    }

    pub fn num_columns(&self) -> usize {
        self.alphabet.num_columns()
    }

    pub fn row(&self, t: usize) -> &[f64] {
        let c = self.num_columns();
        &self.data[t * c..(t + 1) * c]
    }

    pub fn get(&self, t: usize, k: TokenId) -> f64 {
        self.data[t * self.num_columns() + k as usize]
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.data
    }

    /// Header `T K+1 alphabet_hash`, then one whitespace-separated row per
    /// line in shortest round-trip decimal form.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {} {}", self.frames, self.num_columns(), self.alphabet.hash());
        for t in 0..self.frames {
            let mut first = true;
            for v in self.row(t) {
                if !first {
                    out.push(' ');
                }
                first = false;
                let _ = write!(out, "{v}");
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str, alphabet: Arc<PhonemeAlphabet>) -> Result<Self, CtcError> {
        let err = |line: usize, msg: String| CtcError::Parse { line, msg };
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let Some((n, header)) = lines.next() else {
            return Err(err(1, "missing header".into()));
        };
        let fields: Vec<&str> = header.split_whitespace().collect();
        let [frames, columns, hash] = fields.as_slice() else {
            return Err(err(n + 1, "header must be `T K+1 alphabet_hash`".into()));
        };
        let frames: usize = frames.parse().map_err(|_| err(n + 1, format!("bad frame count `{frames}`")))?;
        let columns: usize = columns.parse().map_err(|_| err(n + 1, format!("bad column count `{columns}`")))?;
        if columns != alphabet.num_columns() {
            return Err(err(n + 1, format!("{columns} columns, alphabet needs {}", alphabet.num_columns())));
        }
        if *hash != alphabet.hash() {
            return Err(err(n + 1, format!("alphabet hash {hash} does not match {}", alphabet.hash())));
        }
        let mut data = Vec::with_capacity(frames * columns);
        let mut rows = 0;
        for (n, line) in lines {
            let before = data.len();
            for v in line.split_whitespace() {
                data.push(v.parse::<f64>().map_err(|_| err(n + 1, format!("bad probability `{v}`")))?);
            }
            if data.len() - before != columns {
                return Err(err(n + 1, format!("expected {columns} values, found {}", data.len() - before)));
            }
            rows += 1;
            if let Err(e) = Self::check_row(&data[before..], rows - 1) {
                return Err(err(n + 1, e.to_string()));
            }
        }
        if rows != frames {
            return Err(err(0, format!("header declares {frames} frames, found {rows}")));
        }
        Self::from_flat(alphabet, frames, data)
    }

    fn check_row(row: &[f64], frame: usize) -> Result<(), CtcError> {
        if let Some(k) = row.iter().position(|&p| p < 0.0 || !p.is_finite()) {
            return Err(CtcError::InvalidEntry { frame, column: k, value: row[k] });
        }
        let sum: f64 = row.iter().sum();
        if (sum - 1.0).abs() > ROW_SUM_TOLERANCE {
            return Err(CtcError::RowSum { frame, sum });
        }
        Ok(())
    }

    /// 16-byte header (8-byte magic, little-endian `u32` T and K+1), then
    /// row-major little-endian `f32` values.
    pub fn to_binary(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(16 + 4 * self.data.len());
        out.extend_from_slice(BINARY_MAGIC);
        out.extend_from_slice(&(self.frames as u32).to_le_bytes());
        out.extend_from_slice(&(self.num_columns() as u32).to_le_bytes());
        for &v in &self.data {
            out.extend_from_slice(&(v as f32).to_le_bytes());
        }
        out
    }

    pub fn from_binary(bytes: &[u8], alphabet: Arc<PhonemeAlphabet>) -> Result<Self, CtcError> {
        let err = |msg: String| CtcError::Parse { line: 0, msg };
        if bytes.len() < 16 || &bytes[..8] != BINARY_MAGIC {
            return Err(err("not a binary posterior file".into()));
        }
        let word = |i: usize| u32::from_le_bytes(bytes[i..i + 4].try_into().expect("4 bytes")) as usize;
        let (frames, columns) = (word(8), word(12));
        if columns != alphabet.num_columns() {
            return Err(err(format!("{columns} columns, alphabet needs {}", alphabet.num_columns())));
        }
        let body = &bytes[16..];
        if body.len() != 4 * frames * columns {
            return Err(err(format!("expected {} payload bytes, found {}", 4 * frames * columns, body.len())));
        }
        let data = body.chunks_exact(4).map(|c| f32::from_le_bytes(c.try_into().expect("4 bytes")) as f64).collect();
        Self::from_flat(alphabet, frames, data)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alphabet() -> Arc<PhonemeAlphabet> {
        Arc::new(PhonemeAlphabet::new(["b", "e"]).unwrap())
    }

    #[test]
    fn rejects_bad_rows() {
        let a = alphabet();
        assert_eq!(PosteriorSequence::new(a.clone(), vec![]).unwrap_err(), CtcError::NoFrames);
        assert!(matches!(
            PosteriorSequence::new(a.clone(), vec![vec![0.5, 0.5, 0.1]]),
            Err(CtcError::RowSum { frame: 0, .. })
        ));
        assert!(matches!(
            PosteriorSequence::new(a.clone(), vec![vec![1.5, -0.5, 0.0]]),
            Err(CtcError::InvalidEntry { frame: 0, column: 1, .. })
        ));
        assert!(matches!(
            PosteriorSequence::new(a.clone(), vec![vec![0.5, 0.5]]),
            Err(CtcError::ColumnMismatch { .. })
        ));
        // within tolerance is accepted as is
        let p = PosteriorSequence::new(a, vec![vec![0.5, 0.5, 5e-7]]).unwrap();
        assert_eq!(p.get(0, 2), 5e-7);
    }

    #[test]
    fn text_round_trip() {
        let a = alphabet();
        let p = PosteriorSequence::new(a.clone(), vec![vec![0.1, 0.2, 0.7], vec![1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0]])
            .unwrap();
        let text = p.to_text();
        assert!(text.starts_with(&format!("2 3 {}\n", a.hash())));
        assert_eq!(PosteriorSequence::from_text(&text, a).unwrap(), p);
    }

    #[test]
    fn text_errors_name_lines() {
        let a = alphabet();
        let bad = format!("2 3 {}\n0.1 0.2 0.7\n0.5 0.5\n", a.hash());
        assert!(matches!(PosteriorSequence::from_text(&bad, a.clone()), Err(CtcError::Parse { line: 3, .. })));
        let wrong_hash = "1 3 0000000000000000\n0 0 1\n";
        assert!(matches!(PosteriorSequence::from_text(wrong_hash, a.clone()), Err(CtcError::Parse { line: 1, .. })));
        let bad_sum = format!("1 3 {}\n0.2 0.2 0.2\n", a.hash());
        assert!(matches!(PosteriorSequence::from_text(&bad_sum, a), Err(CtcError::Parse { line: 2, .. })));
    }

    #[test]
    fn binary_round_trip() {
        let a = alphabet();
        let p = PosteriorSequence::new(a.clone(), vec![vec![0.25, 0.25, 0.5], vec![0.0, 1.0, 0.0]]).unwrap();
        let bytes = p.to_binary();
        assert_eq!(bytes.len(), 16 + 4 * 6);
        assert_eq!(&bytes[8..12], &2u32.to_le_bytes());
        let q = PosteriorSequence::from_binary(&bytes, a.clone()).unwrap();
        assert_eq!(q, p);
        assert!(PosteriorSequence::from_binary(&bytes[..20], a).is_err());
    }
}
