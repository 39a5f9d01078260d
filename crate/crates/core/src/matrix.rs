//! Labeled confusion matrices and their one-vs-rest reductions.
//!
//! Rows are actual classes and columns are predicted classes. A matrix is
//! validated once at construction and never mutated afterwards.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A square table of (actual, predicted) counts over an ordered label set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionMatrix {
    labels: Vec<String>,
    counts: Vec<Vec<u64>>,
    row_sums: Vec<u64>,
    col_sums: Vec<u64>,
    total: u64,
}

/// One-vs-rest counts for a single class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ClassCounts {
    pub tp: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
    pub tn: u64,
}

impl ClassCounts {
    pub fn new(tp: u64, fp: u64, fn_: u64, tn: u64) -> Self {
        Self { tp, fp, fn_, tn }
    }

    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.fn_ + self.tn
    }
}

impl std::ops::Add for ClassCounts {
    type Output = ClassCounts;

    fn add(self, rhs: ClassCounts) -> ClassCounts {
        ClassCounts {
            tp: self.tp + rhs.tp,
            fp: self.fp + rhs.fp,
            fn_: self.fn_ + rhs.fn_,
            tn: self.tn + rhs.tn,
        }
    }
}

/// JSON interchange form: `{"labels": [...], "matrix": [[...], ...]}`.
///
/// Unknown keys are ignored, so a full evaluation report is also a valid
/// matrix document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixDocument {
    pub labels: Vec<String>,
    pub matrix: Vec<Vec<i64>>,
}

fn check_labels(labels: &[String]) -> Result<()> {
    if labels.len() < 2 {
        return Err(Error::TooFewClasses(labels.len()));
    }
    let mut seen = HashSet::with_capacity(labels.len());
    for label in labels {
        if label.is_empty() {
            return Err(Error::EmptyLabel);
        }
        if !seen.insert(label.as_str()) {
            return Err(Error::DuplicateLabel(label.clone()));
        }
    }
    Ok(())
}

impl ConfusionMatrix {
    /// Counts (actual, predicted) pairs.
    ///
    /// Without `label_order` the labels are the observed labels sorted
    /// lexicographically. With it, the given order is used verbatim and may
    /// include labels that never occur.
    pub fn from_vectors<A, P>(
        actual: &[A],
        predicted: &[P],
        label_order: Option<&[String]>,
    ) -> Result<Self>
    where
        A: AsRef<str>,
        P: AsRef<str>,
    {
        if actual.len() != predicted.len() {
            return Err(Error::VectorLength {
                actual: actual.len(),
                predicted: predicted.len(),
            });
        }
        if actual.is_empty() {
            return Err(Error::EmptyInput);
        }

        let labels: Vec<String> = match label_order {
            Some(order) => order.to_vec(),
            None => actual
                .iter()
                .map(AsRef::as_ref)
                .chain(predicted.iter().map(AsRef::as_ref))
                .collect::<BTreeSet<&str>>()
                .into_iter()
                .map(str::to_owned)
                .collect(),
        };
        if label_order.is_some() {
            // an observed label missing from the order is a sharper
            // diagnostic than the size check
            let known: HashSet<&str> = labels.iter().map(String::as_str).collect();
            for l in actual
                .iter()
                .map(AsRef::as_ref)
                .chain(predicted.iter().map(AsRef::as_ref))
            {
                if !known.contains(l) {
                    return Err(Error::UnknownLabel(l.to_owned()));
                }
            }
        }
        check_labels(&labels)?;

        let index: HashMap<&str, usize> = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.as_str(), i))
            .collect();
        let k = labels.len();
        let mut counts = vec![vec![0u64; k]; k];
        for (a, p) in actual.iter().zip(predicted) {
            let i = index[a.as_ref()];
            let j = index[p.as_ref()];
            counts[i][j] += 1;
        }
        Ok(Self::assemble(labels, counts))
    }

    /// Builds a matrix from an explicit count grid, stored verbatim.
    pub fn from_counts(labels: Vec<String>, grid: Vec<Vec<i64>>) -> Result<Self> {
        let k = labels.len();
        if grid.len() != k {
            return Err(Error::Shape {
                expected: k,
                detail: format!("{} rows", grid.len()),
            });
        }
        for (i, row) in grid.iter().enumerate() {
            if row.len() != k {
                return Err(Error::Shape {
                    expected: k,
                    detail: format!("row {} has {} entries", i, row.len()),
                });
            }
        }
        check_labels(&labels)?;

        let mut counts = vec![vec![0u64; k]; k];
        for (i, row) in grid.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v < 0 {
                    return Err(Error::NegativeCount {
                        row: i,
                        col: j,
                        value: v,
                    });
                }
                counts[i][j] = v as u64;
            }
        }
        if counts.iter().flatten().all(|&c| c == 0) {
            return Err(Error::EmptyInput);
        }
        Ok(Self::assemble(labels, counts))
    }

    /// Same as [`ConfusionMatrix::from_counts`] for already-unsigned grids.
    pub fn from_unsigned(labels: Vec<String>, grid: Vec<Vec<u64>>) -> Result<Self> {
        let k = labels.len();
        if grid.len() != k || grid.iter().any(|r| r.len() != k) {
            return Err(Error::Shape {
                expected: k,
                detail: format!(
                    "row lengths {:?}",
                    grid.iter().map(Vec::len).collect::<Vec<_>>()
                ),
            });
        }
        check_labels(&labels)?;
        if grid.iter().flatten().all(|&c| c == 0) {
            return Err(Error::EmptyInput);
        }
        Ok(Self::assemble(labels, grid))
    }

    pub fn from_document(doc: MatrixDocument) -> Result<Self> {
        Self::from_counts(doc.labels, doc.matrix)
    }

    pub fn from_json(text: &str) -> std::result::Result<Self, MatrixParseError> {
        let doc: MatrixDocument = serde_json::from_str(text)?;
        Ok(Self::from_document(doc)?)
    }

    fn assemble(labels: Vec<String>, counts: Vec<Vec<u64>>) -> Self {
        let k = labels.len();
        let row_sums: Vec<u64> = counts.iter().map(|r| r.iter().sum()).collect();
        let col_sums: Vec<u64> = (0..k).map(|j| counts.iter().map(|r| r[j]).sum()).collect();
        let total = row_sums.iter().sum();
        Self {
            labels,
            counts,
            row_sums,
            col_sums,
            total,
        }
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn num_classes(&self) -> usize {
        self.labels.len()
    }

    pub fn counts(&self) -> &[Vec<u64>] {
        &self.counts
    }

    pub fn row_sums(&self) -> &[u64] {
        &self.row_sums
    }

    pub fn col_sums(&self) -> &[u64] {
        &self.col_sums
    }

    /// Total sample count `n`.
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn trace(&self) -> u64 {
        (0..self.num_classes()).map(|i| self.counts[i][i]).sum()
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_owned()))
    }

    /// Cell lookup by label: `get("COVID", "Healthy")` is the number of
    /// COVID samples predicted as Healthy.
    pub fn get(&self, actual: &str, predicted: &str) -> Result<u64> {
        Ok(self.counts[self.index_of(actual)?][self.index_of(predicted)?])
    }

    pub fn class_counts(&self, class: &str) -> Result<ClassCounts> {
        Ok(self.class_counts_at(self.index_of(class)?))
    }

    /// One-vs-rest reduction for the class at `idx`.
    pub fn class_counts_at(&self, idx: usize) -> ClassCounts {
        let tp = self.counts[idx][idx];
        let fn_ = self.row_sums[idx] - tp;
        let fp = self.col_sums[idx] - tp;
        let tn = self.total - tp - fn_ - fp;
        ClassCounts { tp, fp, fn_, tn }
    }

    pub fn to_document(&self) -> MatrixDocument {
        MatrixDocument {
            labels: self.labels.clone(),
            matrix: self
                .counts
                .iter()
                .map(|r| r.iter().map(|&c| c as i64).collect())
                .collect(),
        }
    }

    /// Fixed-width text table with actual classes as rows.
    pub fn render_text(&self) -> String {
        const CORNER: &str = "Actual \\ Predict";
        let first = self
            .labels
            .iter()
            .map(|l| l.chars().count())
            .max()
            .unwrap_or(0)
            .max(CORNER.len());
        let widths: Vec<usize> = (0..self.num_classes())
            .map(|j| {
                let cell = self.counts.iter().map(|r| digits(r[j])).max().unwrap_or(1);
                cell.max(self.labels[j].chars().count())
            })
            .collect();

        let mut out = String::new();
        let _ = write!(out, "{:<first$}", CORNER);
        for (label, w) in self.labels.iter().zip(&widths) {
            let _ = write!(out, "  {:>w$}", label);
        }
        out.push('\n');
        for (label, row) in self.labels.iter().zip(&self.counts) {
            let _ = write!(out, "{:<first$}", label);
            for (c, w) in row.iter().zip(&widths) {
                let _ = write!(out, "  {:>w$}", c);
            }
            out.push('\n');
        }
        out
    }
}

fn digits(v: u64) -> usize {
    v.to_string().len()
}

/// Failure to read a JSON matrix document.
#[derive(Debug, thiserror::Error)]
pub enum MatrixParseError {
    #[error("malformed matrix document: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Invalid(#[from] Error),
}
