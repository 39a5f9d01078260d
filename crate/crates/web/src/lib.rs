//! Browser bindings for `cmeval`.
//!
//! Each export takes and returns JSON text. The `*_json` functions hold the
//! logic and are plain Rust so they can be tested natively.

use std::collections::BTreeMap;

use cmeval::{
    compare, curve, CompareInput, ConfusionMatrix, CurveKind, MatrixDocument, ReportDocument,
    ScaleRegistry, ScoreMatrix, Weights,
};
use serde::Deserialize;
use wasm_bindgen::prelude::*;

/// Full report for a `{"labels": [...], "matrix": [[...]]}` document.
pub fn evaluate_json(matrix: &str) -> Result<String, String> {
    let cm = ConfusionMatrix::from_json(matrix).map_err(|e| e.to_string())?;
    let report = ReportDocument::new(&cm, &ScaleRegistry::default()).map_err(|e| e.to_string())?;
    Ok(report.to_json())
}

#[derive(Deserialize)]
struct CompareRequest {
    models: BTreeMap<String, MatrixDocument>,
    #[serde(default)]
    class_weights: Option<Weights>,
    #[serde(default)]
    by_class: bool,
}

/// Ranks `{"models": {name: matrix document}, "class_weights": {...}?, "by_class": bool?}`.
pub fn compare_json(request: &str) -> Result<String, String> {
    let req: CompareRequest = serde_json::from_str(request).map_err(|e| e.to_string())?;
    let mut entries = BTreeMap::new();
    for (name, doc) in req.models {
        let cm = ConfusionMatrix::from_document(doc).map_err(|e| format!("{}: {}", name, e))?;
        entries.insert(name, cm);
    }
    let input = CompareInput {
        entries,
        class_weights: req.class_weights,
        by_class: req.by_class,
        ..CompareInput::default()
    };
    let report = compare(&input, &ScaleRegistry::default()).map_err(|e| e.to_string())?;
    Ok(serde_json::to_string(&report).expect("report serializes"))
}

/// ROC or PR points for one class of a scores CSV.
pub fn curve_json(scores_csv: &str, class: &str, kind: &str) -> Result<String, String> {
    let sm = ScoreMatrix::from_csv(scores_csv).map_err(|e| e.to_string())?;
    let kind: CurveKind = kind.parse()?;
    let c = curve(&sm, class, kind, None).map_err(|e| e.to_string())?;
    Ok(serde_json::to_string(&c).expect("curve serializes"))
}

/// Class labels from the header of a scores CSV.
pub fn score_labels_json(scores_csv: &str) -> Result<String, String> {
    let sm = ScoreMatrix::from_csv(scores_csv).map_err(|e| e.to_string())?;
    Ok(serde_json::to_string(sm.labels()).expect("labels serialize"))
}

#[wasm_bindgen]
pub fn evaluate(matrix: &str) -> Result<String, JsError> {
    evaluate_json(matrix).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = compareModels)]
pub fn compare_models(request: &str) -> Result<String, JsError> {
    compare_json(request).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = scoreCurve)]
pub fn score_curve(scores_csv: &str, class: &str, kind: &str) -> Result<String, JsError> {
    curve_json(scores_csv, class, kind).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = scoreLabels)]
pub fn score_labels(scores_csv: &str) -> Result<String, JsError> {
    score_labels_json(scores_csv).map_err(|e| JsError::new(&e))
}
