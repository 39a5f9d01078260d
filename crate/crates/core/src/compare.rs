//! Composite benchmark scores and model ranking.
//!
//! Each model gets two scores in `[0, 1]`:
//!
//! * the overall score, a weighted mean of the normalized ranks of the
//!   whole-matrix benchmarks;
//! * the class score, a weighted mean over every (class benchmark, class)
//!   cell, where a cell's weight is the product of its benchmark weight and
//!   its class weight.
//!
//! Undefined benchmark results are dropped and the remaining weights are
//! renormalized, so a score is never penalized for a structurally undefined
//! statistic.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::ConfusionMatrix;
use crate::metrics::{class_metric_all, MetricValue};
use crate::overall::overall_metric;
use crate::scales::ScaleRegistry;

/// Named non-negative weights (class label or scale id to weight).
pub type Weights = BTreeMap<String, f64>;

/// Scores closer than this are treated as tied when picking a best model.
pub const TIE_TOLERANCE: f64 = 1e-12;

/// Normalized benchmark results of one matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchmarkTable {
    /// `(scale id, normalized rank)` for each overall benchmark.
    pub overall: Vec<(String, MetricValue)>,
    /// `(scale id, normalized rank per class in label order)`.
    pub class: Vec<(String, Vec<MetricValue>)>,
    pub labels: Vec<String>,
}

impl BenchmarkTable {
    pub fn new(cm: &ConfusionMatrix, scales: &ScaleRegistry) -> Result<Self> {
        let overall = scales
            .overall()
            .map(|(scale, id)| {
                let r = scale.interpret(overall_metric(cm, id))?;
                Ok((scale.id.clone(), r.normalized))
            })
            .collect::<Result<Vec<_>>>()?;
        let class = scales
            .class()
            .map(|(scale, id)| {
                let cells = class_metric_all(cm, id)
                    .into_iter()
                    .map(|v| scale.interpret(v).map(|r| r.normalized))
                    .collect::<Result<Vec<_>>>()?;
                Ok((scale.id.clone(), cells))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            overall,
            class,
            labels: cm.labels().to_vec(),
        })
    }

    /// Weighted mean over the defined overall benchmarks.
    pub fn overall_score(&self, benchmark_weights: &[f64]) -> Result<f64> {
        weighted_mean(
            self.overall
                .iter()
                .zip(benchmark_weights)
                .map(|((_, v), &w)| (*v, w)),
        )
    }

    /// Weighted mean over the defined (benchmark, class) cells.
    pub fn class_score(&self, benchmark_weights: &[f64], class_weights: &[f64]) -> Result<f64> {
        weighted_mean(
            self.class
                .iter()
                .zip(benchmark_weights)
                .flat_map(|((_, cells), &wb)| {
                    cells
                        .iter()
                        .zip(class_weights)
                        .map(move |(v, &wc)| (*v, wb * wc))
                }),
        )
    }

    /// True when every cell of `self` is defined exactly where `other`'s is
    /// and is at least as large.
    pub fn dominates(&self, other: &BenchmarkTable) -> bool {
        let ge = |a: &MetricValue, b: &MetricValue| match (a, b) {
            (MetricValue::Defined(x), MetricValue::Defined(y)) => x >= y,
            (MetricValue::Undefined, MetricValue::Undefined) => true,
            _ => false,
        };
        self.overall.len() == other.overall.len()
            && self.class.len() == other.class.len()
            && self
                .overall
                .iter()
                .zip(&other.overall)
                .all(|((_, a), (_, b))| ge(a, b))
            && self.class.iter().zip(&other.class).all(|((_, a), (_, b))| {
                a.len() == b.len() && a.iter().zip(b).all(|(x, y)| ge(x, y))
            })
    }
}

fn weighted_mean(cells: impl Iterator<Item = (MetricValue, f64)>) -> Result<f64> {
    let mut acc = 0.0;
    let mut total = 0.0;
    for (v, w) in cells {
        if let MetricValue::Defined(x) = v {
            acc += w * x;
            total += w;
        }
    }
    if total > 0.0 {
        Ok((acc / total).clamp(0.0, 1.0))
    } else {
        Err(Error::AllBenchmarksUndefined)
    }
}

/// Expands an optional weight map over `keys`.
///
/// An absent map is uniform. In a present map, missing keys weigh 0,
/// unknown keys are rejected and at least one weight must be positive.
pub fn resolve_weights(
    weights: Option<&Weights>,
    keys: &[&str],
    unknown: impl Fn(&str) -> Error,
) -> Result<Vec<f64>> {
    let Some(map) = weights else {
        return Ok(vec![1.0; keys.len()]);
    };
    for (k, &w) in map {
        if !keys.contains(&k.as_str()) {
            return Err(unknown(k));
        }
        if !w.is_finite() || w < 0.0 {
            return Err(Error::InvalidWeight(format!("`{}` has weight {}", k, w)));
        }
    }
    let resolved: Vec<f64> = keys
        .iter()
        .map(|k| map.get(*k).copied().unwrap_or(0.0))
        .collect();
    if !resolved.iter().any(|&w| w > 0.0) {
        return Err(Error::InvalidWeight("every weight is zero".into()));
    }
    Ok(resolved)
}

fn overall_ids(scales: &ScaleRegistry) -> Vec<&str> {
    scales.overall().map(|(s, _)| s.id.as_str()).collect()
}

fn class_ids(scales: &ScaleRegistry) -> Vec<&str> {
    scales.class().map(|(s, _)| s.id.as_str()).collect()
}

fn unknown_benchmark(id: &str) -> Error {
    Error::UnknownBenchmark(id.to_owned())
}

fn unknown_label(l: &str) -> Error {
    Error::UnknownLabel(l.to_owned())
}

pub fn overall_score(
    cm: &ConfusionMatrix,
    benchmark_weights: Option<&Weights>,
    scales: &ScaleRegistry,
) -> Result<f64> {
    let w = resolve_weights(benchmark_weights, &overall_ids(scales), unknown_benchmark)?;
    BenchmarkTable::new(cm, scales)?.overall_score(&w)
}

pub fn class_score(
    cm: &ConfusionMatrix,
    class_weights: Option<&Weights>,
    benchmark_weights: Option<&Weights>,
    scales: &ScaleRegistry,
) -> Result<f64> {
    let labels: Vec<&str> = cm.labels().iter().map(String::as_str).collect();
    let wc = resolve_weights(class_weights, &labels, unknown_label)?;
    let wb = resolve_weights(benchmark_weights, &class_ids(scales), unknown_benchmark)?;
    BenchmarkTable::new(cm, scales)?.class_score(&wb, &wc)
}

#[derive(Debug, Clone, Default)]
pub struct CompareInput {
    pub entries: BTreeMap<String, ConfusionMatrix>,
    pub class_weights: Option<Weights>,
    pub class_benchmark_weights: Option<Weights>,
    pub overall_benchmark_weights: Option<Weights>,
    pub by_class: bool,
}

impl CompareInput {
    pub fn new(entries: impl IntoIterator<Item = (String, ConfusionMatrix)>) -> Self {
        Self {
            entries: entries.into_iter().collect(),
            ..Self::default()
        }
    }

    pub fn class_weights(mut self, w: Weights) -> Self {
        self.class_weights = Some(w);
        self
    }

    pub fn by_class(mut self, by_class: bool) -> Self {
        self.by_class = by_class;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareRow {
    pub rank: usize,
    pub name: String,
    pub class_score: f64,
    pub overall_score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareReport {
    pub best: Option<String>,
    pub rows: Vec<CompareRow>,
}

pub fn compare(input: &CompareInput, scales: &ScaleRegistry) -> Result<CompareReport> {
    if input.entries.len() < 2 {
        return Err(Error::NotEnoughModels(input.entries.len()));
    }
    let mut models = input.entries.iter();
    let (_, reference) = models.next().expect("at least two models");
    let labels = reference.labels();
    for (name, cm) in models {
        if cm.labels() != labels {
            return Err(Error::LabelMismatch {
                model: name.clone(),
                expected: labels.to_vec(),
                found: cm.labels().to_vec(),
            });
        }
    }

    let label_refs: Vec<&str> = labels.iter().map(String::as_str).collect();
    let wc = resolve_weights(input.class_weights.as_ref(), &label_refs, unknown_label)?;
    let wcb = resolve_weights(
        input.class_benchmark_weights.as_ref(),
        &class_ids(scales),
        unknown_benchmark,
    )?;
    let wob = resolve_weights(
        input.overall_benchmark_weights.as_ref(),
        &overall_ids(scales),
        unknown_benchmark,
    )?;

    let mut rows = input
        .entries
        .iter()
        .map(|(name, cm)| {
            let table = BenchmarkTable::new(cm, scales)?;
            Ok(CompareRow {
                rank: 0,
                name: name.clone(),
                class_score: table.class_score(&wcb, &wc)?,
                overall_score: table.overall_score(&wob)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    rows.sort_by(|a, b| {
        b.class_score
            .total_cmp(&a.class_score)
            .then(b.overall_score.total_cmp(&a.overall_score))
            .then_with(|| a.name.cmp(&b.name))
    });
    for (i, row) in rows.iter_mut().enumerate() {
        row.rank = i + 1;
    }

    let best = select_best(&rows, input.by_class);
    Ok(CompareReport { best, rows })
}

fn select_best(rows: &[CompareRow], by_class: bool) -> Option<String> {
    let max_class = rows.iter().map(|r| r.class_score).fold(f64::MIN, f64::max);
    let max_overall = rows
        .iter()
        .map(|r| r.overall_score)
        .fold(f64::MIN, f64::max);
    let at_max = |v: f64, max: f64| max - v <= TIE_TOLERANCE;
    let mut winners = rows.iter().filter(|r| {
        at_max(r.class_score, max_class) && (by_class || at_max(r.overall_score, max_overall))
    });
    match (winners.next(), winners.next()) {
        (Some(w), None) => Some(w.name.clone()),
        _ => None,
    }
}

impl CompareReport {
    /// Ranking table with scores at 5 decimal places.
    pub fn render_text(&self) -> String {
        let name_width = self
            .rows
            .iter()
            .map(|r| r.name.chars().count() + 4)
            .max()
            .unwrap_or(0)
            .max(16);
        let mut out = String::new();
        let _ = writeln!(out, "Best : {}", self.best.as_deref().unwrap_or("None"));
        out.push('\n');
        let _ = writeln!(
            out,
            "{:<6}{:<name_width$}{:<18}Overall-Score",
            "Rank", "Name", "Class-Score"
        );
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:<6}{:<name_width$}{:<18}{:.5}",
                r.rank,
                r.name,
                format!("{:.5}", r.class_score),
                r.overall_score
            );
        }
        out
    }
}
