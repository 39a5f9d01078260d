//! Confusion-matrix evaluation: per-class and overall statistics with
//! explicit undefined values, ordinal benchmark interpretation, weighted
//! multi-model comparison, and ROC/PR curves.
//!
//! ```
//! use cmeval::{ConfusionMatrix, ClassMetricId, class_metric, overall::overall_accuracy};
//!
//! let labels = ["Healthy", "Flu", "COVID"].map(String::from);
//! let cm = ConfusionMatrix::from_vectors(
//!     &["COVID", "Healthy", "Flu", "Flu", "COVID"],
//!     &["Flu", "Healthy", "COVID", "Flu", "Healthy"],
//!     Some(&labels),
//! )
//! .unwrap();
//! assert_eq!(cm.get("COVID", "Healthy").unwrap(), 1);
//! assert_eq!(overall_accuracy(&cm).value(), Some(0.4));
//! assert_eq!(class_metric(&cm, ClassMetricId::Tpr, "Flu").unwrap().value(), Some(0.5));
//! ```

#[macro_use]
pub mod metrics;

pub mod compare;
pub mod curves;
pub mod error;
pub mod matrix;
pub mod overall;
pub mod report;
pub mod scales;

pub use compare::{
    class_score, compare, overall_score, CompareInput, CompareReport, CompareRow, Weights,
};
pub use curves::{
    auc_trapezoid, binarize_at_threshold, curve, CurveKind, CurvePoints, ScoreMatrix,
};
pub use error::{Error, Result};
pub use matrix::{ClassCounts, ConfusionMatrix, MatrixDocument};
pub use metrics::{class_metric, macro_metric, micro_metric, ClassMetricId, MetricValue};
pub use overall::{LambdaDirection, OverallMetricId};
pub use report::ReportDocument;
pub use scales::{default_scales, BenchmarkResult, BenchmarkScale, ScaleRegistry};
