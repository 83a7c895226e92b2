/// One step of an alignment from reference to hypothesis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EditOp<T> {
    Match(T),
    Substitute { reference: T, hypothesis: T },
    Insert(T),
    Delete(T),
}

impl<T> EditOp<T> {
    pub fn cost(&self) -> usize {
        match self {
            EditOp::Match(_) => 0,
            _ => 1,
        }
    }
}

/// Edit operations in reference order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AlignmentTrace<T> {
    ops: Vec<EditOp<T>>,
}

impl<T: Clone + PartialEq> AlignmentTrace<T> {
    pub fn new(ops: Vec<EditOp<T>>) -> Self {
        AlignmentTrace { ops }
    }

    pub fn ops(&self) -> &[EditOp<T>] {
        &self.ops
    }

    /// Number of non-match operations.
    pub fn distance(&self) -> usize {
        self.ops.iter().map(EditOp::cost).sum()
    }

    /// Applies the trace to `reference`; `None` if the trace does not fit it.
    pub fn replay(&self, reference: &[T]) -> Option<Vec<T>> {
        let mut out = Vec::new();
        let mut rest = reference.iter();
        for op in &self.ops {
            match op {
                EditOp::Match(t) => {
                    if rest.next()? != t {
                        return None;
                    }
                    out.push(t.clone());
                }
                EditOp::Substitute { reference, hypothesis } => {
                    if rest.next()? != reference {
                        return None;
                    }
                    out.push(hypothesis.clone());
                }
                EditOp::Insert(t) => out.push(t.clone()),
                EditOp::Delete(t) => {
                    if rest.next()? != t {
                        return None;
                    }
                }
            }
        }
        rest.next().is_none().then_some(out)
    }
}

/// Unit-cost Levenshtein distance and one optimal alignment. The backtrace
/// prefers match or substitution, then deletion, then insertion.
pub fn edit_distance<T: Clone + PartialEq>(reference: &[T], hypothesis: &[T]) -> (usize, AlignmentTrace<T>) {
    let (n, m) = (reference.len(), hypothesis.len());
    let mut d = vec![vec![0usize; m + 1]; n + 1];
    for (i, row) in d.iter_mut().enumerate() {
        row[0] = i;
    }
    for (j, cell) in d[0].iter_mut().enumerate() {
        *cell = j;
    }
    for i in 1..=n {
        for j in 1..=m {
            let diag = d[i - 1][j - 1] + usize::from(reference[i - 1] != hypothesis[j - 1]);
            d[i][j] = diag.min(d[i - 1][j] + 1).min(d[i][j - 1] + 1);
        }
    }
    let mut ops = Vec::with_capacity(n.max(m));
    let (mut i, mut j) = (n, m);
    while i > 0 || j > 0 {
        if i > 0 && j > 0 {
            let same = reference[i - 1] == hypothesis[j - 1];
            if d[i][j] == d[i - 1][j - 1] + usize::from(!same) {
                ops.push(if same {
                    EditOp::Match(reference[i - 1].clone())
                } else {
                    EditOp::Substitute { reference: reference[i - 1].clone(), hypothesis: hypothesis[j - 1].clone() }
                });
                i -= 1;
                j -= 1;
                continue;
            }
        }
        if i > 0 && d[i][j] == d[i - 1][j] + 1 {
            ops.push(EditOp::Delete(reference[i - 1].clone()));
            i -= 1;
        } else {
            ops.push(EditOp::Insert(hypothesis[j - 1].clone()));
            j -= 1;
        }
    }
    ops.reverse();
    (d[n][m], AlignmentTrace { ops })
}
