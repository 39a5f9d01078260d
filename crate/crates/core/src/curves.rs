//! Threshold-swept ROC and precision-recall curves.
//!
//! Curves are one-vs-rest: for a chosen class, a sample is predicted
//! positive when its score for that class is at least the threshold.

use std::collections::HashMap;
use std::fmt::{self, Write as _};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::ClassCounts;
use crate::metrics::{metric_from_counts, ClassMetricId, MetricValue};

/// Per-sample class scores with the actual label of each sample.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreMatrix {
    labels: Vec<String>,
    actual: Vec<usize>,
    scores: Vec<Vec<f64>>,
}

impl ScoreMatrix {
    /// Rows need not sum to 1, but every score must lie in `[0, 1]`.
    pub fn new(
        labels: Vec<String>,
        actual: &[impl AsRef<str>],
        scores: Vec<Vec<f64>>,
    ) -> Result<Self> {
        if labels.len() < 2 {
            return Err(Error::TooFewClasses(labels.len()));
        }
        let index: HashMap<&str, usize> = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.as_str(), i))
            .collect();
        if index.len() != labels.len() {
            let dup = labels
                .iter()
                .enumerate()
                .find(|(i, l)| index[l.as_str()] != *i)
                .map(|(_, l)| l.clone())
                .unwrap_or_default();
            return Err(Error::DuplicateLabel(dup));
        }
        if actual.len() != scores.len() {
            return Err(Error::VectorLength {
                actual: actual.len(),
                predicted: scores.len(),
            });
        }
        if actual.is_empty() {
            return Err(Error::EmptyInput);
        }
        let k = labels.len();
        for (row, s) in scores.iter().enumerate() {
            if s.len() != k {
                return Err(Error::Shape {
                    expected: k,
                    detail: format!("score row {} has {} entries", row, s.len()),
                });
            }
            for (col, &v) in s.iter().enumerate() {
                if !(0.0..=1.0).contains(&v) {
                    return Err(Error::InvalidScore { row, col, value: v });
                }
            }
        }
        let actual = actual
            .iter()
            .map(|a| {
                index
                    .get(a.as_ref())
                    .copied()
                    .ok_or_else(|| Error::UnknownLabel(a.as_ref().to_owned()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            labels,
            actual,
            scores,
        })
    }

    /// Parses `actual,<label1>,<label2>,...` CSV with one row per sample.
    pub fn from_csv(text: &str) -> std::result::Result<Self, ScoreParseError> {
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let header = reader.headers()?.clone();
        if header.get(0) != Some("actual") {
            return Err(ScoreParseError::Header);
        }
        let labels: Vec<String> = header.iter().skip(1).map(str::to_owned).collect();
        let mut actual = Vec::new();
        let mut scores = Vec::new();
        for (line, record) in reader.records().enumerate() {
            let record = record?;
            actual.push(record.get(0).unwrap_or_default().to_owned());
            let row = record
                .iter()
                .skip(1)
                .map(|f| {
                    f.parse::<f64>().map_err(|_| ScoreParseError::Number {
                        line: line + 2,
                        field: f.to_owned(),
                    })
                })
                .collect::<std::result::Result<Vec<_>, _>>()?;
            scores.push(row);
        }
        Ok(Self::new(labels, &actual, scores)?)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.actual.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actual.is_empty()
    }

    fn class_index(&self, class: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == class)
            .ok_or_else(|| Error::UnknownLabel(class.to_owned()))
    }

    /// `(score for class, sample is actually class)` per sample.
    fn column(&self, idx: usize) -> impl Iterator<Item = (f64, bool)> + '_ {
        self.scores
            .iter()
            .zip(&self.actual)
            .map(move |(row, &a)| (row[idx], a == idx))
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ScoreParseError {
    #[error("malformed scores CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("scores CSV header must start with `actual`")]
    Header,
    #[error("line {line}: `{field}` is not a number")]
    Number { line: usize, field: String },
    #[error(transparent)]
    Invalid(#[from] Error),
}

/// Counts obtained by calling every sample with `score >= t` positive.
pub fn binarize_at_threshold(sm: &ScoreMatrix, class: &str, t: f64) -> Result<ClassCounts> {
    let idx = sm.class_index(class)?;
    let mut c = ClassCounts::default();
    for (score, positive) in sm.column(idx) {
        match (score >= t, positive) {
            (true, true) => c.tp += 1,
            (true, false) => c.fp += 1,
            (false, true) => c.fn_ += 1,
            (false, false) => c.tn += 1,
        }
    }
    Ok(c)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum CurveKind {
    Roc,
    Pr,
}

impl fmt::Display for CurveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CurveKind::Roc => "ROC",
            CurveKind::Pr => "PR",
        })
    }
}

impl std::str::FromStr for CurveKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "roc" => Ok(CurveKind::Roc),
            "pr" => Ok(CurveKind::Pr),
            other => Err(format!("unknown curve kind `{}`", other)),
        }
    }
}

/// A curve vertex. Anchors added to close a ROC curve have no threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    pub threshold: Option<f64>,
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvePoints {
    pub kind: CurveKind,
    pub class: String,
    pub points: Vec<CurvePoint>,
    pub auc: f64,
}

impl CurvePoints {
    /// Thresholds of the non-anchor points, descending.
    pub fn thresholds(&self) -> Vec<f64> {
        self.points.iter().filter_map(|p| p.threshold).collect()
    }

    /// `threshold,x,y` rows; anchors leave the threshold empty.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("threshold,x,y\n");
        for p in &self.points {
            if let Some(t) = p.threshold {
                let _ = write!(out, "{}", t);
            }
            let _ = writeln!(out, ",{},{}", p.x, p.y);
        }
        out
    }
}

/// Default sweep: every distinct score of the class, descending, preceded by
/// an infinite sentinel at which nothing is called positive.
pub fn default_thresholds(sm: &ScoreMatrix, class: &str) -> Result<Vec<f64>> {
    let idx = sm.class_index(class)?;
    let mut t: Vec<f64> = sm.column(idx).map(|(s, _)| s).collect();
    t.sort_by(|a, b| b.total_cmp(a));
    t.dedup();
    t.insert(0, f64::INFINITY);
    Ok(t)
}

pub fn curve(
    sm: &ScoreMatrix,
    class: &str,
    kind: CurveKind,
    thresholds: Option<&[f64]>,
) -> Result<CurvePoints> {
    let idx = sm.class_index(class)?;
    let thresholds = match thresholds {
        Some(ts) => {
            if let Some(&bad) = ts.iter().find(|t| !(0.0..=1.0).contains(*t)) {
                return Err(Error::InvalidThreshold(bad));
            }
            let mut ts = ts.to_vec();
            ts.sort_by(|a, b| b.total_cmp(a));
            ts.dedup();
            ts
        }
        None => default_thresholds(sm, class)?,
    };

    // scores sorted descending with cumulative positive counts, so each
    // threshold is a binary search instead of a full pass
    let mut column: Vec<(f64, bool)> = sm.column(idx).collect();
    column.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut cum_pos = Vec::with_capacity(column.len() + 1);
    cum_pos.push(0u64);
    for &(_, pos) in &column {
        cum_pos.push(cum_pos.last().unwrap() + pos as u64);
    }
    let positives = *cum_pos.last().unwrap();
    let negatives = column.len() as u64 - positives;
    if positives == 0 || (kind == CurveKind::Roc && negatives == 0) {
        return Err(Error::DegenerateCurve(class.to_owned()));
    }

    let counts_at = |t: f64| {
        let called = column.partition_point(|&(s, _)| s >= t);
        let tp = cum_pos[called];
        let fp = called as u64 - tp;
        ClassCounts {
            tp,
            fp,
            fn_: positives - tp,
            tn: negatives - fp,
        }
    };

    let mut points: Vec<CurvePoint> = Vec::with_capacity(thresholds.len() + 2);
    for &t in &thresholds {
        let c = counts_at(t);
        let tpr = metric_from_counts(c, ClassMetricId::Tpr);
        let (x, y) = match kind {
            CurveKind::Roc => (metric_from_counts(c, ClassMetricId::Fpr), tpr),
            CurveKind::Pr => (tpr, metric_from_counts(c, ClassMetricId::Ppv)),
        };
        // precision is undefined when nothing is called positive
        if let (MetricValue::Defined(x), MetricValue::Defined(y)) = (x, y) {
            points.push(CurvePoint {
                threshold: Some(t),
                x,
                y,
            });
        }
    }
    points.sort_by(|a, b| a.x.total_cmp(&b.x));

    if kind == CurveKind::Roc {
        let at = |p: &CurvePoint, x: f64, y: f64| p.x == x && p.y == y;
        if !points.first().is_some_and(|p| at(p, 0.0, 0.0)) {
            points.insert(
                0,
                CurvePoint {
                    threshold: None,
                    x: 0.0,
                    y: 0.0,
                },
            );
        }
        if !points.last().is_some_and(|p| at(p, 1.0, 1.0)) {
            points.push(CurvePoint {
                threshold: None,
                x: 1.0,
                y: 1.0,
            });
        }
    }
    if points.len() < 2 {
        return Err(Error::DegenerateCurve(class.to_owned()));
    }

    let xy: Vec<(f64, f64)> = points.iter().map(|p| (p.x, p.y)).collect();
    let auc = auc_trapezoid(&xy)?.clamp(0.0, 1.0);
    Ok(CurvePoints {
        kind,
        class: class.to_owned(),
        points,
        auc,
    })
}

/// Trapezoidal area under points sorted by ascending x.
pub fn auc_trapezoid(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::TooFewPoints(points.len()));
    }
    let mut area = 0.0;
    for (i, w) in points.windows(2).enumerate() {
        let ((x1, y1), (x2, y2)) = (w[0], w[1]);
        if x2 < x1 {
            return Err(Error::UnsortedPoints(i + 1));
        }
        area += (x2 - x1) * (y1 + y2) / 2.0;
    }
    Ok(area)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binary(scores: &[f64], positive: &[bool]) -> ScoreMatrix {
        let actual: Vec<&str> = positive
            .iter()
            .map(|&p| if p { "pos" } else { "neg" })
            .collect();
        let rows = scores.iter().map(|&s| vec![1.0 - s, s]).collect();
        ScoreMatrix::new(vec!["neg".into(), "pos".into()], &actual, rows).unwrap()
    }

    fn four_samples() -> ScoreMatrix {
        binary(&[0.9, 0.4, 0.6, 0.1], &[true, false, true, false])
    }

    fn xy(c: &CurvePoints) -> Vec<(f64, f64)> {
        c.points.iter().map(|p| (p.x, p.y)).collect()
    }

    #[test]
    fn binarize_examples() {
        let sm = four_samples();
        assert_eq!(
            binarize_at_threshold(&sm, "pos", 0.5).unwrap(),
            ClassCounts::new(2, 0, 0, 2)
        );
        let floor = binarize_at_threshold(&sm, "pos", 0.0).unwrap();
        assert_eq!(floor.tp + floor.fp, 4);
        let ceil = binarize_at_threshold(&sm, "pos", 0.9 + 1e-9).unwrap();
        assert_eq!((ceil.tp, ceil.fp), (0, 0));
        // equality counts as positive
        assert_eq!(binarize_at_threshold(&sm, "pos", 0.6).unwrap().tp, 2);
        assert!(matches!(
            binarize_at_threshold(&sm, "x", 0.5),
            Err(Error::UnknownLabel(_))
        ));
    }

    #[test]
    fn four_sample_roc() {
        let c = curve(&four_samples(), "pos", CurveKind::Roc, None).unwrap();
        assert_eq!(
            xy(&c),
            vec![(0.0, 0.0), (0.0, 0.5), (0.0, 1.0), (0.5, 1.0), (1.0, 1.0)]
        );
        assert_eq!(c.auc, 1.0);
        assert_eq!(c.thresholds(), vec![f64::INFINITY, 0.9, 0.6, 0.4, 0.1]);

        // explicit thresholds: the (0,0) anchor is synthesized
        let c = curve(
            &four_samples(),
            "pos",
            CurveKind::Roc,
            Some(&[0.1, 0.4, 0.6, 0.9]),
        )
        .unwrap();
        assert_eq!(c.points[0].threshold, None);
        assert_eq!(c.points.len(), 5);
    }

    #[test]
    fn uninformative_scores() {
        let sm = binary(&[0.5; 6], &[true, false, true, false, false, true]);
        let c = curve(&sm, "pos", CurveKind::Roc, None).unwrap();
        assert_eq!(xy(&c), vec![(0.0, 0.0), (1.0, 1.0)]);
        assert_eq!(c.auc, 0.5);
    }

    #[test]
    fn pr_drops_undefined_precision() {
        let c = curve(&four_samples(), "pos", CurveKind::Pr, None).unwrap();
        assert!(c.points.iter().all(|p| p.threshold.is_some()));
        assert_eq!(
            xy(&c),
            vec![(0.5, 1.0), (1.0, 1.0), (1.0, 2.0 / 3.0), (1.0, 0.5)]
        );
        assert!((c.auc - 0.5).abs() < 1e-12);
    }

    #[test]
    fn degenerate_curves() {
        let sm = binary(&[0.2, 0.7], &[false, false]);
        assert_eq!(
            curve(&sm, "pos", CurveKind::Roc, None).unwrap_err(),
            Error::DegenerateCurve("pos".into())
        );
        let sm = binary(&[0.2, 0.7], &[true, true]);
        assert!(curve(&sm, "pos", CurveKind::Roc, None).is_err());
        assert!(curve(&sm, "pos", CurveKind::Pr, None).is_ok());
    }

    #[test]
    fn threshold_validation() {
        assert_eq!(
            curve(&four_samples(), "pos", CurveKind::Roc, Some(&[1.5])).unwrap_err(),
            Error::InvalidThreshold(1.5)
        );
    }

    #[test]
    fn trapezoid() {
        assert_eq!(auc_trapezoid(&[(0.0, 0.0), (1.0, 1.0)]).unwrap(), 0.5);
        assert_eq!(auc_trapezoid(&[(0.0, 1.0), (1.0, 1.0)]).unwrap(), 1.0);
        assert!(
            (auc_trapezoid(&[(0.0, 0.0), (0.25, 0.75), (1.0, 1.0)]).unwrap() - 0.75).abs() < 1e-15
        );
        assert_eq!(
            auc_trapezoid(&[(0.5, 0.0), (0.2, 1.0)]).unwrap_err(),
            Error::UnsortedPoints(1)
        );
        assert_eq!(
            auc_trapezoid(&[(0.0, 0.0)]).unwrap_err(),
            Error::TooFewPoints(1)
        );
    }

    #[test]
    fn csv_input_and_output() {
        let text = "actual,neg,pos\npos,0.1,0.9\nneg,0.6,0.4\npos,0.4,0.6\nneg,0.9,0.1\n";
        let sm = ScoreMatrix::from_csv(text).unwrap();
        assert_eq!(sm.len(), 4);
        let c = curve(&sm, "pos", CurveKind::Roc, None).unwrap();
        assert_eq!(
            c.to_csv(),
            "threshold,x,y\ninf,0,0\n0.9,0,0.5\n0.6,0,1\n0.4,0.5,1\n0.1,1,1\n"
        );

        assert!(matches!(
            ScoreMatrix::from_csv("label,a,b\na,0.1,0.9\n"),
            Err(ScoreParseError::Header)
        ));
        assert!(matches!(
            ScoreMatrix::from_csv("actual,a,b\na,x,0.9\n"),
            Err(ScoreParseError::Number { line: 2, .. })
        ));
        assert!(ScoreMatrix::from_csv("actual,a,b\na,0.1\n").is_err());
        assert!(matches!(
            ScoreMatrix::from_csv("actual,a,b\nc,0.1,0.9\n"),
            Err(ScoreParseError::Invalid(Error::UnknownLabel(_)))
        ));
        assert!(matches!(
            ScoreMatrix::from_csv("actual,a,b\na,1.1,0.9\n"),
            Err(ScoreParseError::Invalid(Error::InvalidScore { .. }))
        ));
    }
}
