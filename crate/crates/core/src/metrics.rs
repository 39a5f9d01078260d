//! Per-class metrics and their macro/micro aggregates.
//!
//! Every formula returns a [`MetricValue`]; a zero denominator, a logarithm
//! of a non-positive number or an undefined operand produces
//! [`MetricValue::Undefined`] instead of NaN or infinity.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrix::{ClassCounts, ConfusionMatrix};

/// A real number or the result of an undefined computation.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub enum MetricValue {
    Defined(f64),
    Undefined,
}

use MetricValue::{Defined, Undefined};

impl MetricValue {
    /// Wraps a finite value; NaN and infinities become `Undefined`.
    pub fn new(v: f64) -> Self {
        if v.is_finite() {
            Defined(v)
        } else {
            Undefined
        }
    }

    pub fn ratio(num: f64, den: f64) -> Self {
        if den == 0.0 {
            Undefined
        } else {
            Self::new(num / den)
        }
    }

    pub fn value(self) -> Option<f64> {
        match self {
            Defined(v) => Some(v),
            Undefined => None,
        }
    }

    pub fn is_defined(self) -> bool {
        matches!(self, Defined(_))
    }

    pub fn map(self, f: impl FnOnce(f64) -> f64) -> Self {
        match self {
            Defined(v) => Self::new(f(v)),
            Undefined => Undefined,
        }
    }

    pub fn zip_with(self, other: Self, f: impl FnOnce(f64, f64) -> MetricValue) -> Self {
        match (self, other) {
            (Defined(a), Defined(b)) => f(a, b),
            _ => Undefined,
        }
    }

    /// Division that is undefined on a zero or undefined divisor.
    pub fn over(self, other: Self) -> Self {
        self.zip_with(other, MetricValue::ratio)
    }

    fn clamp(self, lo: f64, hi: f64) -> Self {
        self.map(|v| v.clamp(lo, hi))
    }
}

impl From<Option<f64>> for MetricValue {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Undefined, MetricValue::new)
    }
}

impl fmt::Display for MetricValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Defined(v) => match f.precision() {
                Some(p) => write!(f, "{:.*}", p, v),
                None => write!(f, "{}", v),
            },
            Undefined => f.write_str("None"),
        }
    }
}

impl Serialize for MetricValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Defined(v) => s.serialize_f64(*v),
            Undefined => s.serialize_none(),
        }
    }
}

impl<'de> Deserialize<'de> for MetricValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.into())
    }
}

macro_rules! metric_ids {
    ($(#[$meta:meta])* $name:ident { $($variant:ident => $token:literal),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum $name {
            $($variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn token(self) -> &'static str {
                match self {
                    $($name::$variant => $token),+
                }
            }
        }

        impl ::std::fmt::Display for $name {
            fn fmt(&self, f: &mut ::std::fmt::Formatter<'_>) -> ::std::fmt::Result {
                f.write_str(self.token())
            }
        }

        impl ::std::str::FromStr for $name {
            type Err = String;

            fn from_str(s: &str) -> std::result::Result<Self, String> {
                match s {
                    $($token => Ok($name::$variant),)+
                    other => Err(format!("unknown metric `{}`", other)),
                }
            }
        }

        impl ::serde::Serialize for $name {
            fn serialize<S: ::serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                s.serialize_str(self.token())
            }
        }

        impl<'de> ::serde::Deserialize<'de> for $name {
            fn deserialize<D: ::serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
                let s = <String as ::serde::Deserialize>::deserialize(d)?;
                s.parse().map_err(::serde::de::Error::custom)
            }
        }
    };
}

metric_ids! {
    /// Metrics computed from a single class's one-vs-rest counts.
    ClassMetricId {
        Acc => "ACC",
        Tpr => "TPR",
        Tnr => "TNR",
        Ppv => "PPV",
        Npv => "NPV",
        Fpr => "FPR",
        Fnr => "FNR",
        F1 => "F1",
        Mcc => "MCC",
        Auc => "AUC",
        Plr => "PLR",
        Nlr => "NLR",
        Dp => "DP",
        YuleQ => "YULE_Q",
    }
}

impl ClassMetricId {
    /// Metrics with a pooled-count (micro) form.
    pub const MICRO: &'static [ClassMetricId] = &[
        ClassMetricId::Tpr,
        ClassMetricId::Tnr,
        ClassMetricId::Ppv,
        ClassMetricId::Npv,
        ClassMetricId::Fpr,
        ClassMetricId::Fnr,
        ClassMetricId::F1,
    ];

    pub fn supports_micro(self) -> bool {
        Self::MICRO.contains(&self)
    }
}

/// Applies a class metric formula to raw one-vs-rest counts.
pub fn metric_from_counts(c: ClassCounts, metric: ClassMetricId) -> MetricValue {
    let tp = c.tp as f64;
    let fp = c.fp as f64;
    let fn_ = c.fn_ as f64;
    let tn = c.tn as f64;
    let tpr = || MetricValue::ratio(tp, tp + fn_);
    let tnr = || MetricValue::ratio(tn, tn + fp);
    let fpr = || MetricValue::ratio(fp, fp + tn);
    let fnr = || MetricValue::ratio(fn_, fn_ + tp);

    match metric {
        ClassMetricId::Acc => MetricValue::ratio(tp + tn, tp + fp + fn_ + tn),
        ClassMetricId::Tpr => tpr(),
        ClassMetricId::Tnr => tnr(),
        ClassMetricId::Ppv => MetricValue::ratio(tp, tp + fp),
        ClassMetricId::Npv => MetricValue::ratio(tn, tn + fn_),
        ClassMetricId::Fpr => fpr(),
        ClassMetricId::Fnr => fnr(),
        ClassMetricId::F1 => MetricValue::ratio(2.0 * tp, 2.0 * tp + fp + fn_),
        ClassMetricId::Mcc => {
            let den = ((tp + fp) * (tp + fn_) * (tn + fp) * (tn + fn_)).sqrt();
            MetricValue::ratio(tp * tn - fp * fn_, den).clamp(-1.0, 1.0)
        }
        ClassMetricId::Auc => tpr().zip_with(tnr(), |a, b| Defined((a + b) / 2.0)),
        ClassMetricId::Plr => tpr().over(fpr()),
        ClassMetricId::Nlr => fnr().over(tnr()),
        ClassMetricId::Dp => {
            let ln = |v: MetricValue| match v {
                Defined(x) if x > 0.0 => Defined(x.ln()),
                _ => Undefined,
            };
            let pos = ln(tpr().over(fpr()));
            let neg = ln(tnr().over(fnr()));
            pos.zip_with(neg, |a, b| MetricValue::new(3f64.sqrt() / PI * (a + b)))
        }
        ClassMetricId::YuleQ => MetricValue::ratio(tp * tn - fp * fn_, tp * tn + fp * fn_),
    }
}

pub fn class_metric(
    cm: &ConfusionMatrix,
    metric: ClassMetricId,
    class: &str,
) -> Result<MetricValue> {
    Ok(metric_from_counts(cm.class_counts(class)?, metric))
}

/// Per-class values in label order.
pub fn class_metric_all(cm: &ConfusionMatrix, metric: ClassMetricId) -> Vec<MetricValue> {
    (0..cm.num_classes())
        .map(|i| metric_from_counts(cm.class_counts_at(i), metric))
        .collect()
}

/// Unweighted mean over classes; undefined if any class is undefined.
pub fn macro_metric(cm: &ConfusionMatrix, metric: ClassMetricId) -> MetricValue {
    let values = class_metric_all(cm, metric);
    let mut sum = 0.0;
    for v in &values {
        match v {
            Defined(x) => sum += x,
            Undefined => return Undefined,
        }
    }
    MetricValue::new(sum / values.len() as f64)
}

/// The metric formula applied once to class-pooled counts.
pub fn micro_metric(cm: &ConfusionMatrix, metric: ClassMetricId) -> Result<MetricValue> {
    if !metric.supports_micro() {
        return Err(Error::UnsupportedMicroMetric(metric));
    }
    let pooled = (0..cm.num_classes())
        .map(|i| cm.class_counts_at(i))
        .fold(ClassCounts::default(), |acc, c| acc + c);
    Ok(metric_from_counts(pooled, metric))
}
