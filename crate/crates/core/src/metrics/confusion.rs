use super::edit::{AlignmentTrace, EditOp};
use super::MetricsError;

/// Per-token tallies over many alignments. `matrix[r][h]` counts reference
/// token `r` aligned to hypothesis token `h`; the diagonal holds matches.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionSummary {
    pub matrix: Vec<Vec<u64>>,
    pub insertions: Vec<u64>,
    pub deletions: Vec<u64>,
}

impl ConfusionSummary {
    pub fn new(size: usize) -> Self {
        ConfusionSummary { matrix: vec![vec![0; size]; size], insertions: vec![0; size], deletions: vec![0; size] }
    }

    pub fn size(&self) -> usize {
        self.insertions.len()
    }

    pub fn correct(&self, token: usize) -> u64 {
        self.matrix[token][token]
    }

    pub fn substitutions(&self) -> u64 {
        let total: u64 = self.matrix.iter().flatten().sum();
        total - (0..self.size()).map(|k| self.correct(k)).sum::<u64>()
    }

    /// Each vector scaled to sum to one (all zeros stay zero).
    pub fn normalized_insertions(&self) -> Vec<f64> {
        normalize(&self.insertions)
    }

    pub fn normalized_deletions(&self) -> Vec<f64> {
        normalize(&self.deletions)
    }

    /// Matrix CSV: one row per reference token, one column per hypothesis
    /// token plus deletions; a final row of insertions.
    pub fn to_csv(&self, labels: &[String]) -> Result<String, MetricsError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let header = std::iter::once("ref\\hyp").chain(labels.iter().map(String::as_str)).chain(["<del>"]);
        w.write_record(header).map_err(csv_err)?;
        for (r, row) in self.matrix.iter().enumerate() {
            let cells = std::iter::once(labels[r].clone())
                .chain(row.iter().map(u64::to_string))
                .chain([self.deletions[r].to_string()]);
            w.write_record(cells).map_err(csv_err)?;
        }
        let ins = std::iter::once("<ins>".to_string())
            .chain(self.insertions.iter().map(u64::to_string))
            .chain([String::new()]);
        w.write_record(ins).map_err(csv_err)?;
        finish(w)
    }

    /// Insertion and deletion counts per token with their normalized rates.
    pub fn profile_csv(&self, labels: &[String]) -> Result<String, MetricsError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["token", "insertions", "deletions", "insertion_share", "deletion_share"]).map_err(csv_err)?;
        let (ins, del) = (self.normalized_insertions(), self.normalized_deletions());
        for k in 0..self.size() {
            let row = [
                labels[k].clone(),
                self.insertions[k].to_string(),
                self.deletions[k].to_string(),
                format!("{:.6}", ins[k]),
                format!("{:.6}", del[k]),
            ];
            w.write_record(row).map_err(csv_err)?;
        }
        finish(w)
    }
}

fn normalize(v: &[u64]) -> Vec<f64> {
    let total: u64 = v.iter().sum();
    v.iter().map(|&c| if total == 0 { 0.0 } else { c as f64 / total as f64 }).collect()
}

fn csv_err(e: csv::Error) -> MetricsError {
    MetricsError::Csv(e.to_string())
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String, MetricsError> {
    let bytes = w.into_inner().map_err(|e| MetricsError::Csv(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| MetricsError::Csv(e.to_string()))
}

/// Tallies every operation of `traces` over token ids `0..size`.
pub fn confusion_counts(traces: &[AlignmentTrace<usize>], size: usize) -> Result<ConfusionSummary, MetricsError> {
    let mut s = ConfusionSummary::new(size);
    let check = |t: usize| if t < size { Ok(t) } else { Err(MetricsError::TokenOutOfRange { token: t, size }) };
    for trace in traces {
        for op in trace.ops() {
            match *op {
                EditOp::Match(t) => s.matrix[check(t)?][t] += 1,
                EditOp::Substitute { reference, hypothesis } => s.matrix[check(reference)?][check(hypothesis)?] += 1,
                EditOp::Insert(t) => s.insertions[check(t)?] += 1,
                EditOp::Delete(t) => s.deletions[check(t)?] += 1,
            }
        }
    }
    Ok(s)
}
