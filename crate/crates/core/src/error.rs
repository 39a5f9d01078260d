use thiserror::Error;

use crate::metrics::ClassMetricId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("actual and predicted vectors differ in length ({actual} vs {predicted})")]
    VectorLength { actual: usize, predicted: usize },

    #[error("input contains no samples")]
    EmptyInput,

    #[error("unknown label `{0}`")]
    UnknownLabel(String),

    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),

    #[error("labels must be non-empty text")]
    EmptyLabel,

    #[error("a confusion matrix needs at least 2 classes, got {0}")]
    TooFewClasses(usize),

    #[error("count grid is not {expected}x{expected}: {detail}")]
    Shape { expected: usize, detail: String },

    #[error("negative count {value} at ({row}, {col})")]
    NegativeCount { row: usize, col: usize, value: i64 },

    #[error("micro averaging is not defined for {0}")]
    UnsupportedMicroMetric(ClassMetricId),

    #[error("value {value} falls outside every level of scale `{scale}`")]
    OutOfRange { scale: String, value: f64 },

    #[error("invalid benchmark scale `{scale}`: {reason}")]
    InvalidScale { scale: String, reason: String },

    #[error("unknown benchmark `{0}`")]
    UnknownBenchmark(String),

    #[error("every benchmark is undefined or carries zero weight")]
    AllBenchmarksUndefined,

    #[error("invalid weight: {0}")]
    InvalidWeight(String),

    #[error("comparison needs at least 2 models, got {0}")]
    NotEnoughModels(usize),

    #[error("model `{model}` has labels {found:?}, expected {expected:?}")]
    LabelMismatch {
        model: String,
        expected: Vec<String>,
        found: Vec<String>,
    },

    #[error("curve for class `{0}` is degenerate (no positive or no negative samples)")]
    DegenerateCurve(String),

    #[error("curve points are not sorted by ascending x at index {0}")]
    UnsortedPoints(usize),

    #[error("at least 2 points are needed to integrate a curve, got {0}")]
    TooFewPoints(usize),

    #[error("invalid score {value} at row {row}, column {col}")]
    InvalidScore { row: usize, col: usize, value: f64 },

    #[error("threshold {0} is outside [0, 1]")]
    InvalidThreshold(f64),
}
