//! Full evaluation report for one confusion matrix.

use std::fmt::Write as _;

use indexmap::IndexMap;
use serde::Serialize;

use crate::error::Result;
use crate::matrix::ConfusionMatrix;
use crate::metrics::{class_metric_all, macro_metric, micro_metric, ClassMetricId, MetricValue};
use crate::overall::{overall_metric, OverallMetricId};
use crate::scales::{BenchmarkResult, ScaleRegistry};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchmarkSection {
    pub overall: IndexMap<String, BenchmarkResult>,
    pub class: IndexMap<String, IndexMap<String, BenchmarkResult>>,
}

/// Everything computed for a matrix. Key order follows label order and
/// metric declaration order, so serialization is stable.
///
/// The `labels`/`matrix` echo makes the JSON form readable as a matrix
/// document.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportDocument {
    pub labels: Vec<String>,
    pub matrix: Vec<Vec<u64>>,
    pub class_stat: IndexMap<String, IndexMap<ClassMetricId, MetricValue>>,
    pub macro_stat: IndexMap<ClassMetricId, MetricValue>,
    pub micro_stat: IndexMap<ClassMetricId, MetricValue>,
    pub overall_stat: IndexMap<OverallMetricId, MetricValue>,
    pub benchmarks: BenchmarkSection,
}

impl ReportDocument {
    pub fn new(cm: &ConfusionMatrix, scales: &ScaleRegistry) -> Result<Self> {
        let labels = cm.labels().to_vec();

        let per_metric: Vec<(ClassMetricId, Vec<MetricValue>)> = ClassMetricId::ALL
            .iter()
            .map(|&id| (id, class_metric_all(cm, id)))
            .collect();
        let class_stat = labels
            .iter()
            .enumerate()
            .map(|(i, label)| {
                let row = per_metric.iter().map(|(id, vs)| (*id, vs[i])).collect();
                (label.clone(), row)
            })
            .collect();

        let macro_stat = ClassMetricId::ALL
            .iter()
            .map(|&id| (id, macro_metric(cm, id)))
            .collect();
        let micro_stat = ClassMetricId::MICRO
            .iter()
            .map(|&id| (id, micro_metric(cm, id).expect("micro-capable metric")))
            .collect();
        let overall_stat = OverallMetricId::ALL
            .iter()
            .map(|&id| (id, overall_metric(cm, id)))
            .collect();

        let overall = scales
            .overall()
            .map(|(scale, id)| Ok((scale.id.clone(), scale.interpret(overall_metric(cm, id))?)))
            .collect::<Result<_>>()?;
        let class = scales
            .class()
            .map(|(scale, id)| {
                let per_class = labels
                    .iter()
                    .zip(class_metric_all(cm, id))
                    .map(|(l, v)| Ok((l.clone(), scale.interpret(v)?)))
                    .collect::<Result<_>>()?;
                Ok((scale.id.clone(), per_class))
            })
            .collect::<Result<_>>()?;

        Ok(Self {
            labels,
            matrix: cm.counts().to_vec(),
            class_stat,
            macro_stat,
            micro_stat,
            overall_stat,
            benchmarks: BenchmarkSection { overall, class },
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Aligned tables with values at 5 decimal places.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let fmt = |v: &MetricValue| format!("{:.5}", v);

        out.push_str("Overall Statistics:\n\n");
        let width = self
            .overall_stat
            .keys()
            .map(|k| k.token().len())
            .max()
            .unwrap_or(0)
            + 2;
        for (id, v) in &self.overall_stat {
            let _ = writeln!(out, "{:<width$}{}", id.token(), fmt(v));
        }
        for (id, v) in &self.macro_stat {
            let _ = writeln!(out, "{:<width$}{}", format!("{}_MACRO", id), fmt(v));
        }
        for (id, v) in &self.micro_stat {
            let _ = writeln!(out, "{:<width$}{}", format!("{}_MICRO", id), fmt(v));
        }

        out.push_str("\nClass Statistics:\n\n");
        let cells: Vec<Vec<String>> = ClassMetricId::ALL
            .iter()
            .map(|id| self.class_stat.values().map(|row| fmt(&row[id])).collect())
            .collect();
        let col_widths: Vec<usize> = self
            .labels
            .iter()
            .enumerate()
            .map(|(j, l)| {
                cells
                    .iter()
                    .map(|r| r[j].len())
                    .max()
                    .unwrap_or(0)
                    .max(l.chars().count())
            })
            .collect();
        let _ = write!(out, "{:<8}", "Classes");
        for (l, w) in self.labels.iter().zip(&col_widths) {
            let _ = write!(out, "  {:>w$}", l);
        }
        out.push('\n');
        for (id, row) in ClassMetricId::ALL.iter().zip(&cells) {
            let _ = write!(out, "{:<8}", id.token());
            for (c, w) in row.iter().zip(&col_widths) {
                let _ = write!(out, "  {:>w$}", c);
            }
            out.push('\n');
        }

        out.push_str("\nBenchmarks:\n\n");
        let level = |r: &BenchmarkResult| r.level.clone().unwrap_or_else(|| "None".into());
        for (id, r) in &self.benchmarks.overall {
            let _ = writeln!(out, "{:<14}{}", id, level(r));
        }
        for (id, per_class) in &self.benchmarks.class {
            let levels: Vec<String> = per_class
                .iter()
                .map(|(l, r)| format!("{}={}", l, level(r)))
                .collect();
            let _ = writeln!(out, "{:<14}{}", id, levels.join(", "));
        }
        out
    }

    /// Long-format CSV: `scope,metric,class,value`, undefined values empty.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let val = |v: &MetricValue| v.value().map(|x| x.to_string()).unwrap_or_default();
        w.write_record(["scope", "metric", "class", "value"])
            .expect("in-memory write");
        for (label, row) in &self.class_stat {
            for (id, v) in row {
                w.write_record(["class", id.token(), label, &val(v)])
                    .expect("in-memory write");
            }
        }
        for (scope, map) in [("macro", &self.macro_stat), ("micro", &self.micro_stat)] {
            for (id, v) in map {
                w.write_record([scope, id.token(), "", &val(v)])
                    .expect("in-memory write");
            }
        }
        for (id, v) in &self.overall_stat {
            w.write_record(["overall", id.token(), "", &val(v)])
                .expect("in-memory write");
        }
        for (id, r) in &self.benchmarks.overall {
            w.write_record(["benchmark", id, "", &val(&r.normalized)])
                .expect("in-memory write");
        }
        for (id, per_class) in &self.benchmarks.class {
            for (label, r) in per_class {
                w.write_record(["benchmark", id, label, &val(&r.normalized)])
                    .expect("in-memory write");
            }
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
    }
}
