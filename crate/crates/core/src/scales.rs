//! Ordinal interpretation scales for statistics.
//!
//! A scale splits the real line into contiguous bands, each carrying a
//! rank. Interpreting a value yields its band and the normalized rank
//! `rank / max_rank`, which is what the composite comparison scores average.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::metrics::{ClassMetricId, MetricValue};
use crate::overall::OverallMetricId;

/// The statistic a scale reads.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BenchmarkMetric {
    Overall(OverallMetricId),
    Class(ClassMetricId),
}

impl fmt::Display for BenchmarkMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BenchmarkMetric::Overall(m) => m.fmt(f),
            BenchmarkMetric::Class(m) => m.fmt(f),
        }
    }
}

impl std::str::FromStr for BenchmarkMetric {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        s.parse()
            .map(BenchmarkMetric::Overall)
            .or_else(|_| s.parse().map(BenchmarkMetric::Class))
    }
}

impl Serialize for BenchmarkMetric {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BenchmarkMetric {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

/// Which end of each band is inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Closed {
    /// `[lower, upper)`; the highest band also includes its upper bound.
    #[default]
    Lower,
    /// `(lower, upper]`; the lowest band also includes its lower bound.
    Upper,
}

/// One interpretation band. Infinite bounds are written as `null` in JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Level {
    pub name: String,
    #[serde(with = "bound::lower")]
    pub lower: f64,
    #[serde(with = "bound::upper")]
    pub upper: f64,
    pub rank: u32,
}

impl Level {
    pub fn new(name: &str, lower: f64, upper: f64, rank: u32) -> Self {
        Self {
            name: name.to_owned(),
            lower,
            upper,
            rank,
        }
    }
}

mod bound {
    macro_rules! side {
        ($name:ident, $inf:expr) => {
            pub mod $name {
                use serde::{Deserialize, Deserializer, Serializer};

                pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
                    if v.is_infinite() {
                        s.serialize_none()
                    } else {
                        s.serialize_f64(*v)
                    }
                }

                pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
                    Ok(Option::<f64>::deserialize(d)?.unwrap_or($inf))
                }
            }
        };
    }
    side!(lower, f64::NEG_INFINITY);
    side!(upper, f64::INFINITY);
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// Larger statistic values map to higher ranks.
    Increasing,
    /// Smaller statistic values map to higher ranks.
    Decreasing,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchmarkScale {
    pub id: String,
    pub metric: BenchmarkMetric,
    pub closed: Closed,
    levels: Vec<Level>,
    #[serde(skip)]
    max_rank: u32,
    #[serde(skip)]
    orientation: Orientation,
}

/// The serialized form accepted by `--scales` override files.
#[derive(Debug, Clone, Deserialize)]
struct ScaleSpec {
    id: String,
    metric: BenchmarkMetric,
    #[serde(default)]
    closed: Closed,
    levels: Vec<Level>,
}

impl<'de> Deserialize<'de> for BenchmarkScale {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let spec = ScaleSpec::deserialize(d)?;
        BenchmarkScale::new(&spec.id, spec.metric, spec.closed, spec.levels)
            .map_err(serde::de::Error::custom)
    }
}

impl BenchmarkScale {
    /// Validates and builds a scale. Levels may be given in any order.
    pub fn new(
        id: &str,
        metric: BenchmarkMetric,
        closed: Closed,
        mut levels: Vec<Level>,
    ) -> Result<Self> {
        let invalid = |reason: String| Error::InvalidScale {
            scale: id.to_owned(),
            reason,
        };
        if levels.len() < 2 {
            return Err(invalid(format!(
                "needs at least 2 levels, got {}",
                levels.len()
            )));
        }
        for l in &levels {
            if l.lower.is_nan() || l.upper.is_nan() || l.lower >= l.upper {
                return Err(invalid(format!("level `{}` has an empty interval", l.name)));
            }
        }
        levels.sort_by(|a, b| a.lower.total_cmp(&b.lower));
        for pair in levels.windows(2) {
            if pair[0].upper != pair[1].lower {
                return Err(invalid(format!(
                    "levels `{}` and `{}` leave a gap or overlap",
                    pair[0].name, pair[1].name
                )));
            }
        }
        let max_rank = levels.len() as u32 - 1;
        let mut seen = vec![false; levels.len()];
        for l in &levels {
            match seen.get_mut(l.rank as usize) {
                Some(s) if !*s => *s = true,
                _ => return Err(invalid(format!("ranks must be exactly 0..={}", max_rank))),
            }
        }
        let orientation = if levels.windows(2).all(|p| p[0].rank < p[1].rank) {
            Orientation::Increasing
        } else if levels.windows(2).all(|p| p[0].rank > p[1].rank) {
            Orientation::Decreasing
        } else {
            return Err(invalid("ranks are not monotone in the statistic".into()));
        };
        Ok(Self {
            id: id.to_owned(),
            metric,
            closed,
            levels,
            max_rank,
            orientation,
        })
    }

    /// Levels ordered by ascending statistic value.
    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    /// The number of ranks minus one, the denominator of normalized scores.
    pub fn max_rank(&self) -> u32 {
        self.max_rank
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    fn contains(&self, idx: usize, v: f64) -> bool {
        let l = &self.levels[idx];
        match self.closed {
            Closed::Lower => {
                (l.lower <= v && v < l.upper) || (idx + 1 == self.levels.len() && v == l.upper)
            }
            Closed::Upper => (l.lower < v && v <= l.upper) || (idx == 0 && v == l.lower),
        }
    }

    pub fn interpret(&self, value: MetricValue) -> Result<BenchmarkResult> {
        let v = match value {
            MetricValue::Defined(v) => v,
            MetricValue::Undefined => {
                return Ok(BenchmarkResult {
                    scale_id: self.id.clone(),
                    level: None,
                    rank: None,
                    normalized: MetricValue::Undefined,
                })
            }
        };
        let idx = (0..self.levels.len())
            .find(|&i| self.contains(i, v))
            .ok_or_else(|| Error::OutOfRange {
                scale: self.id.clone(),
                value: v,
            })?;
        let level = &self.levels[idx];
        Ok(BenchmarkResult {
            scale_id: self.id.clone(),
            level: Some(level.name.clone()),
            rank: Some(level.rank),
            normalized: MetricValue::Defined(level.rank as f64 / self.max_rank as f64),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchmarkResult {
    #[serde(skip)]
    pub scale_id: String,
    pub level: Option<String>,
    pub rank: Option<u32>,
    pub normalized: MetricValue,
}

/// The set of scales used for interpretation and comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaleRegistry {
    scales: Vec<BenchmarkScale>,
}

impl Default for ScaleRegistry {
    fn default() -> Self {
        default_scales()
    }
}

impl ScaleRegistry {
    pub fn scales(&self) -> &[BenchmarkScale] {
        &self.scales
    }

    pub fn len(&self) -> usize {
        self.scales.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scales.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&BenchmarkScale> {
        self.scales.iter().find(|s| s.id == id)
    }

    /// Scales reading whole-matrix statistics, in registry order.
    pub fn overall(&self) -> impl Iterator<Item = (&BenchmarkScale, OverallMetricId)> {
        self.scales.iter().filter_map(|s| match s.metric {
            BenchmarkMetric::Overall(m) => Some((s, m)),
            BenchmarkMetric::Class(_) => None,
        })
    }

    /// Scales reading per-class statistics, in registry order.
    pub fn class(&self) -> impl Iterator<Item = (&BenchmarkScale, ClassMetricId)> {
        self.scales.iter().filter_map(|s| match s.metric {
            BenchmarkMetric::Class(m) => Some((s, m)),
            BenchmarkMetric::Overall(_) => None,
        })
    }

    /// Replaces scales with matching ids. Unknown ids are rejected.
    pub fn with_overrides(mut self, overrides: Vec<BenchmarkScale>) -> Result<Self> {
        for scale in overrides {
            let slot = self
                .scales
                .iter_mut()
                .find(|s| s.id == scale.id)
                .ok_or_else(|| Error::UnknownBenchmark(scale.id.clone()))?;
            *slot = scale;
        }
        Ok(self)
    }

    /// Parses an override file: a JSON list of scale tables.
    pub fn with_override_json(self, text: &str) -> std::result::Result<Self, ScaleFileError> {
        let overrides: Vec<BenchmarkScale> = serde_json::from_str(text)?;
        Ok(self.with_overrides(overrides)?)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ScaleFileError {
    #[error("malformed scale table: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Invalid(#[from] Error),
}

const NEG_INF: f64 = f64::NEG_INFINITY;
const INF: f64 = f64::INFINITY;

fn scale(
    id: &str,
    metric: BenchmarkMetric,
    closed: Closed,
    levels: &[(&str, f64, f64, u32)],
) -> BenchmarkScale {
    let levels = levels
        .iter()
        .map(|&(name, lo, hi, rank)| Level::new(name, lo, hi, rank))
        .collect();
    BenchmarkScale::new(id, metric, closed, levels).expect("built-in scale is valid")
}

/// The seven overall and six class-level interpretation scales.
pub fn default_scales() -> ScaleRegistry {
    use BenchmarkMetric::{Class, Overall};
    use Closed::{Lower, Upper};

    let band5 = [
        ("Negligible", 0.0, 0.2, 0),
        ("Weak", 0.2, 0.4, 1),
        ("Moderate", 0.4, 0.6, 2),
        ("Strong", 0.6, 0.8, 3),
        ("Very Strong", 0.8, 1.0, 4),
    ];
    let mcc = [
        ("Negligible", -1.0, 0.3, 0),
        ("Weak", 0.3, 0.5, 1),
        ("Moderate", 0.5, 0.7, 2),
        ("Strong", 0.7, 0.9, 3),
        ("Very Strong", 0.9, 1.0, 4),
    ];

    let scales = vec![
        scale(
            "LANDIS_KOCH",
            Overall(OverallMetricId::Kappa),
            Lower,
            &[
                ("Poor", NEG_INF, 0.0, 0),
                ("Slight", 0.0, 0.2, 1),
                ("Fair", 0.2, 0.4, 2),
                ("Moderate", 0.4, 0.6, 3),
                ("Substantial", 0.6, 0.8, 4),
                ("Almost Perfect", 0.8, 1.0, 5),
            ],
        ),
        scale(
            "CRAMER",
            Overall(OverallMetricId::CramerV),
            Lower,
            &[
                ("Negligible", 0.0, 0.1, 0),
                ("Weak", 0.1, 0.2, 1),
                ("Moderate", 0.2, 0.4, 2),
                ("Relatively Strong", 0.4, 0.6, 3),
                ("Strong", 0.6, 0.8, 4),
                ("Very Strong", 0.8, 1.0, 5),
            ],
        ),
        scale(
            "MATTHEWS",
            Overall(OverallMetricId::OverallMcc),
            Lower,
            &mcc,
        ),
        scale("LAMBDA_A", Overall(OverallMetricId::LambdaA), Lower, &band5),
        scale("LAMBDA_B", Overall(OverallMetricId::LambdaB), Lower, &band5),
        scale(
            "KRIPPENDORFF",
            Overall(OverallMetricId::KrippendorffAlpha),
            Lower,
            &[
                ("Low", NEG_INF, 0.667, 0),
                ("Tentative", 0.667, 0.8, 1),
                ("High", 0.8, 1.0, 2),
            ],
        ),
        scale(
            "PEARSON_C",
            Overall(OverallMetricId::PearsonC),
            Lower,
            &[
                ("Not Appreciable", 0.0, 0.1, 0),
                ("Weak", 0.1, 0.2, 1),
                ("Medium", 0.2, 0.3, 2),
                ("Strong", 0.3, 1.0, 3),
            ],
        ),
        scale(
            "PLRI",
            Class(ClassMetricId::Plr),
            Lower,
            &[
                ("Negligible", 0.0, 1.0, 0),
                ("Poor", 1.0, 5.0, 1),
                ("Fair", 5.0, 10.0, 2),
                ("Good", 10.0, INF, 3),
            ],
        ),
        scale(
            "NLRI",
            Class(ClassMetricId::Nlr),
            Upper,
            &[
                ("Good", 0.0, 0.1, 3),
                ("Fair", 0.1, 0.2, 2),
                ("Poor", 0.2, 0.5, 1),
                ("Negligible", 0.5, INF, 0),
            ],
        ),
        scale(
            "DPI",
            Class(ClassMetricId::Dp),
            Lower,
            &[
                ("Poor", NEG_INF, 1.0, 0),
                ("Limited", 1.0, 2.0, 1),
                ("Fair", 2.0, 3.0, 2),
                ("Good", 3.0, INF, 3),
            ],
        ),
        scale(
            "AUCI",
            Class(ClassMetricId::Auc),
            Lower,
            &[
                ("Poor", 0.0, 0.6, 0),
                ("Fair", 0.6, 0.7, 1),
                ("Good", 0.7, 0.8, 2),
                ("Very Good", 0.8, 0.9, 3),
                ("Excellent", 0.9, 1.0, 4),
            ],
        ),
        scale("MCCI", Class(ClassMetricId::Mcc), Lower, &mcc),
        scale(
            "QI",
            Class(ClassMetricId::YuleQ),
            Lower,
            &[
                ("Negligible", -1.0, 0.25, 0),
                ("Weak", 0.25, 0.5, 1),
                ("Moderate", 0.5, 0.75, 2),
                ("Strong", 0.75, 1.0, 3),
            ],
        ),
    ];
    ScaleRegistry { scales }
}
