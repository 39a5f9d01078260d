//! Brute-force reference implementations, written from the textbook
//! definitions without touching the library.
#![allow(dead_code)]

use rand::Rng;

pub type Grid = Vec<Vec<u64>>;

pub const CLASS_TOKENS: [&str; 14] = [
    "ACC", "TPR", "TNR", "PPV", "NPV", "FPR", "FNR", "F1", "MCC", "AUC", "PLR", "NLR", "DP",
    "YULE_Q",
];
pub const MICRO_TOKENS: [&str; 7] = ["TPR", "TNR", "PPV", "NPV", "FPR", "FNR", "F1"];
pub const OVERALL_TOKENS: [&str; 9] = [
    "OVERALL_ACC",
    "KAPPA",
    "CHI2",
    "CRAMER_V",
    "PEARSON_C",
    "OVERALL_MCC",
    "LAMBDA_A",
    "LAMBDA_B",
    "KRIPPENDORFF_ALPHA",
];

/// (tp, fp, fn, tn) by classifying every cell against class `c`.
pub fn one_vs_rest(grid: &Grid, c: usize) -> [u64; 4] {
    let mut out = [0u64; 4];
    for (i, row) in grid.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            let slot = match (i == c, j == c) {
                (true, true) => 0,
                (false, true) => 1,
                (true, false) => 2,
                (false, false) => 3,
            };
            out[slot] += v;
        }
    }
    out
}

fn div(a: f64, b: f64) -> Option<f64> {
    (b != 0.0).then(|| a / b)
}

pub fn class_metric(token: &str, [tp, fp, fn_, tn]: [u64; 4]) -> Option<f64> {
    let (tp, fp, fn_, tn) = (tp as f64, fp as f64, fn_ as f64, tn as f64);
    let tpr = div(tp, tp + fn_);
    let tnr = div(tn, tn + fp);
    match token {
        "ACC" => div(tp + tn, tp + fp + fn_ + tn),
        "TPR" => tpr,
        "TNR" => tnr,
        "PPV" => div(tp, tp + fp),
        "NPV" => div(tn, tn + fn_),
        "FPR" => div(fp, fp + tn),
        "FNR" => div(fn_, fn_ + tp),
        "F1" => div(2.0 * tp, 2.0 * tp + fp + fn_),
        "MCC" => {
            let prod = (tp + fp) * (tp + fn_) * (tn + fp) * (tn + fn_);
            div(tp * tn - fp * fn_, prod.sqrt())
        }
        "AUC" => Some((tpr? + tnr?) / 2.0),
        "PLR" => div(tpr?, 1.0 - tnr?),
        "NLR" => div(1.0 - tpr?, tnr?),
        "DP" => {
            let (a, b) = (tpr?, tnr?);
            let l1 = div(a, 1.0 - b)?;
            let l2 = div(b, 1.0 - a)?;
            if l1 <= 0.0 || l2 <= 0.0 {
                return None;
            }
            Some(3f64.sqrt() / std::f64::consts::PI * (l1.ln() + l2.ln()))
        }
        "YULE_Q" => div(tp * tn - fp * fn_, tp * tn + fp * fn_),
        other => panic!("unknown class metric {other}"),
    }
}

pub fn macro_metric(grid: &Grid, token: &str) -> Option<f64> {
    let k = grid.len();
    let mut sum = 0.0;
    for c in 0..k {
        sum += class_metric(token, one_vs_rest(grid, c))?;
    }
    Some(sum / k as f64)
}

pub fn micro_metric(grid: &Grid, token: &str) -> Option<f64> {
    let mut pooled = [0u64; 4];
    for c in 0..grid.len() {
        for (p, v) in pooled.iter_mut().zip(one_vs_rest(grid, c)) {
            *p += v;
        }
    }
    class_metric(token, pooled)
}

pub fn overall_metric(grid: &Grid, token: &str) -> Option<f64> {
    let k = grid.len();
    let n: u64 = grid.iter().flatten().sum();
    let rows: Vec<u64> = grid.iter().map(|r| r.iter().sum()).collect();
    let cols: Vec<u64> = (0..k).map(|j| grid.iter().map(|r| r[j]).sum()).collect();
    let trace: u64 = (0..k).map(|i| grid[i][i]).sum();
    let nf = n as f64;

    let chi2 = || {
        let mut s = 0.0;
        for i in 0..k {
            for j in 0..k {
                let e = rows[i] as f64 * cols[j] as f64 / nf;
                if e > 0.0 {
                    s += (grid[i][j] as f64 - e).powi(2) / e;
                }
            }
        }
        s
    };

    match token {
        "OVERALL_ACC" => Some(trace as f64 / nf),
        "KAPPA" => {
            let agree: u64 = rows.iter().zip(&cols).map(|(r, c)| r * c).sum();
            if agree == n * n {
                return None;
            }
            let po = trace as f64 / nf;
            let pe = agree as f64 / (nf * nf);
            Some((po - pe) / (1.0 - pe))
        }
        "CHI2" => Some(chi2()),
        "CRAMER_V" => Some((chi2() / (nf * (k as f64 - 1.0))).sqrt()),
        "PEARSON_C" => {
            let x = chi2();
            Some((x / (x + nf)).sqrt())
        }
        "OVERALL_MCC" => {
            let s = n as i128;
            let pp: i128 = cols.iter().map(|&p| (p * p) as i128).sum();
            let tt: i128 = rows.iter().map(|&t| (t * t) as i128).sum();
            let pt: i128 = rows.iter().zip(&cols).map(|(&t, &p)| (t * p) as i128).sum();
            let (a, b) = (s * s - pp, s * s - tt);
            if a == 0 || b == 0 {
                return None;
            }
            Some((trace as i128 * s - pt) as f64 / ((a as f64) * (b as f64)).sqrt())
        }
        "LAMBDA_A" => {
            let top_row = *rows.iter().max().unwrap();
            let col_modes: u64 = (0..k)
                .map(|j| (0..k).map(|i| grid[i][j]).max().unwrap())
                .sum();
            if n == top_row {
                return None;
            }
            Some((col_modes as f64 - top_row as f64) / (n - top_row) as f64)
        }
        "LAMBDA_B" => {
            let top_col = *cols.iter().max().unwrap();
            let row_modes: u64 = grid.iter().map(|r| *r.iter().max().unwrap()).sum();
            if n == top_col {
                return None;
            }
            Some((row_modes as f64 - top_col as f64) / (n - top_col) as f64)
        }
        "KRIPPENDORFF_ALPHA" => {
            // Expand to units: each sample is a pair of values (actual, predicted).
            let big_n = 2 * n;
            let mut marg = vec![0u64; k];
            let mut disagree = 0u64;
            for i in 0..k {
                for j in 0..k {
                    marg[i] += grid[i][j];
                    marg[j] += grid[i][j];
                    if i != j {
                        disagree += 2 * grid[i][j];
                    }
                }
            }
            let mut exp = 0u64;
            for i in 0..k {
                for j in 0..k {
                    if i != j {
                        exp += marg[i] * marg[j];
                    }
                }
            }
            if exp == 0 {
                return None;
            }
            let d_o = disagree as f64 / big_n as f64;
            let d_e = exp as f64 / (big_n as f64 * (big_n - 1) as f64);
            Some(1.0 - d_o / d_e)
        }
        other => panic!("unknown overall metric {other}"),
    }
}

/// Fraction of (positive, negative) pairs with the positive scored higher,
/// ties counted one half.
pub fn mann_whitney(pos: &[f64], neg: &[f64]) -> f64 {
    let mut wins = 0.0;
    for &p in pos {
        for &q in neg {
            if p > q {
                wins += 1.0;
            } else if p == q {
                wins += 0.5;
            }
        }
    }
    wins / (pos.len() * neg.len()) as f64
}

/// k×k grid with cells in [0, max], never all zero.
pub fn random_grid(rng: &mut impl Rng, k: usize, max: u64) -> Grid {
    loop {
        let g: Grid = (0..k)
            .map(|_| (0..k).map(|_| rng.gen_range(0..=max)).collect())
            .collect();
        if g.iter().flatten().any(|&v| v > 0) {
            return g;
        }
    }
}

pub fn labels(k: usize) -> Vec<String> {
    (0..k).map(|i| format!("c{i}")).collect()
}

/// Both undefined, or both defined and within `tol`.
pub fn agrees(lib: Option<f64>, oracle: Option<f64>, tol: f64) -> bool {
    match (lib, oracle) {
        (None, None) => true,
        (Some(a), Some(b)) => (a - b).abs() <= tol * b.abs().max(1.0),
        _ => false,
    }
}
