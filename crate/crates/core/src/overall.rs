//! Whole-matrix agreement and association statistics.

use crate::matrix::ConfusionMatrix;
use crate::metrics::MetricValue;

metric_ids! {
    /// Statistics computed over the entire matrix.
    OverallMetricId {
        OverallAcc => "OVERALL_ACC",
        Kappa => "KAPPA",
        Chi2 => "CHI2",
        CramerV => "CRAMER_V",
        PearsonC => "PEARSON_C",
        OverallMcc => "OVERALL_MCC",
        LambdaA => "LAMBDA_A",
        LambdaB => "LAMBDA_B",
        KrippendorffAlpha => "KRIPPENDORFF_ALPHA",
    }
}

/// Conditioning direction for Goodman–Kruskal lambda.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LambdaDirection {
    /// Predict the actual class from the predicted class (columns given).
    A,
    /// Predict the predicted class from the actual class (rows given).
    B,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquare {
    pub chi2: MetricValue,
    pub cramer_v: MetricValue,
    pub pearson_c: MetricValue,
}

pub fn overall_metric(cm: &ConfusionMatrix, id: OverallMetricId) -> MetricValue {
    match id {
        OverallMetricId::OverallAcc => overall_accuracy(cm),
        OverallMetricId::Kappa => cohen_kappa(cm),
        OverallMetricId::Chi2 => chi_square_family(cm).chi2,
        OverallMetricId::CramerV => chi_square_family(cm).cramer_v,
        OverallMetricId::PearsonC => chi_square_family(cm).pearson_c,
        OverallMetricId::OverallMcc => overall_mcc(cm),
        OverallMetricId::LambdaA => goodman_kruskal_lambda(cm, LambdaDirection::A),
        OverallMetricId::LambdaB => goodman_kruskal_lambda(cm, LambdaDirection::B),
        OverallMetricId::KrippendorffAlpha => krippendorff_alpha(cm),
    }
}

pub fn overall_accuracy(cm: &ConfusionMatrix) -> MetricValue {
    MetricValue::ratio(cm.trace() as f64, cm.total() as f64)
}

/// Cohen's kappa; undefined when chance agreement is 1.
pub fn cohen_kappa(cm: &ConfusionMatrix) -> MetricValue {
    let n = cm.total() as f64;
    let po = cm.trace() as f64 / n;
    let pe = cm
        .row_sums()
        .iter()
        .zip(cm.col_sums())
        .map(|(&r, &c)| r as f64 * c as f64)
        .sum::<f64>()
        / (n * n);
    MetricValue::ratio(po - pe, 1.0 - pe)
}

/// Pearson chi-square with Cramér's V and the contingency coefficient.
///
/// Cells whose expected count is zero contribute nothing.
pub fn chi_square_family(cm: &ConfusionMatrix) -> ChiSquare {
    let n = cm.total() as f64;
    let k = cm.num_classes();
    let mut chi2 = 0.0;
    for (i, row) in cm.counts().iter().enumerate() {
        for (j, &obs) in row.iter().enumerate() {
            let expected = cm.row_sums()[i] as f64 * cm.col_sums()[j] as f64 / n;
            if expected > 0.0 {
                let d = obs as f64 - expected;
                chi2 += d * d / expected;
            }
        }
    }
    let chi2 = MetricValue::new(chi2);
    let cramer_v = chi2
        .over(MetricValue::new(n * (k as f64 - 1.0)))
        .map(|v| v.sqrt().clamp(0.0, 1.0));
    let pearson_c = chi2.over(chi2.map(|c| c + n)).map(f64::sqrt);
    ChiSquare {
        chi2,
        cramer_v,
        pearson_c,
    }
}

/// Multi-class Matthews correlation (covariance form).
pub fn overall_mcc(cm: &ConfusionMatrix) -> MetricValue {
    let c = cm.trace() as f64;
    let s = cm.total() as f64;
    let mut pt = 0.0;
    let mut pp = 0.0;
    let mut tt = 0.0;
    for (&t, &p) in cm.row_sums().iter().zip(cm.col_sums()) {
        let (t, p) = (t as f64, p as f64);
        pt += p * t;
        pp += p * p;
        tt += t * t;
    }
    let left = s * s - pp;
    let right = s * s - tt;
    if left == 0.0 || right == 0.0 {
        return MetricValue::Undefined;
    }
    MetricValue::ratio(c * s - pt, (left * right).sqrt()).map(|v| v.clamp(-1.0, 1.0))
}

/// Goodman–Kruskal lambda. See [`LambdaDirection`] for the naming.
pub fn goodman_kruskal_lambda(cm: &ConfusionMatrix, direction: LambdaDirection) -> MetricValue {
    let counts = cm.counts();
    let k = cm.num_classes();
    let (modal_sum, marginal_max) = match direction {
        LambdaDirection::A => (
            (0..k)
                .map(|j| counts.iter().map(|r| r[j]).max().unwrap_or(0))
                .sum::<u64>(),
            cm.row_sums().iter().copied().max().unwrap_or(0),
        ),
        LambdaDirection::B => (
            counts
                .iter()
                .map(|r| r.iter().copied().max().unwrap_or(0))
                .sum::<u64>(),
            cm.col_sums().iter().copied().max().unwrap_or(0),
        ),
    };
    let den = cm.total() - marginal_max;
    MetricValue::ratio(modal_sum as f64 - marginal_max as f64, den as f64)
}

/// Nominal Krippendorff alpha with actual and predicted as two raters.
pub fn krippendorff_alpha(cm: &ConfusionMatrix) -> MetricValue {
    // coincidence matrix o_ij = c_ij + c_ji; its off-diagonal mass is twice
    // the misclassified count and its marginals are row + col sums
    let disagree = 2 * (cm.total() - cm.trace());
    let marg: Vec<f64> = cm
        .row_sums()
        .iter()
        .zip(cm.col_sums())
        .map(|(&r, &c)| (r + c) as f64)
        .collect();
    let big_n: f64 = marg.iter().sum();
    let sq: f64 = marg.iter().map(|m| m * m).sum();
    let observed = disagree as f64 / big_n;
    let expected = (big_n * big_n - sq) / (big_n * (big_n - 1.0));
    MetricValue::ratio(observed, expected).map(|r| 1.0 - r)
}
