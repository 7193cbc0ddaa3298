//! Distinguishability of two switching-current distributions.
//!
//! `p0` is the signal-absent sample set, `p1` the signal-present one. A
//! threshold `θ` labels a switching current "signal" when it is `≥ θ`, so
//! `tpr(θ) = P(p1 ≥ θ)` and `fpr(θ) = P(p0 ≥ θ)`.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{JtdError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RocPoint {
    pub fpr: f64,
    pub tpr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RocResult {
    /// From `(0, 0)` to `(1, 1)`, non-decreasing in both coordinates.
    pub points: Vec<RocPoint>,
    /// Raw trapezoidal area; below 0.5 when `p1` tends to switch lower.
    pub auc: f64,
    pub n0: usize,
    pub n1: usize,
}

impl RocResult {
    /// Orientation-free separability `max(auc, 1 − auc)`.
    pub fn auc_star(&self) -> f64 {
        auc_star(self.auc)
    }
}

pub fn auc_star(auc: f64) -> f64 {
    auc.max(1.0 - auc)
}

fn check_samples(p0: &[f64], p1: &[f64]) -> Result<()> {
    if p0.is_empty() {
        return Err(JtdError::Empty("p0 samples"));
    }
    if p1.is_empty() {
        return Err(JtdError::Empty("p1 samples"));
    }
    if p0.iter().chain(p1).any(|x| x.is_nan()) {
        return Err(JtdError::invalid("samples", "NaN is not a switching current"));
    }
    Ok(())
}

fn sorted(xs: &[f64]) -> Vec<f64> {
    let mut v = xs.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    v
}

/// Threshold scan over the merged, ascending sample values.
///
/// Walking the distinct thresholds from the largest down produces the curve
/// from `(0, 0)` to `(1, 1)`; tied `p0`/`p1` values move both rates in the
/// same step, which the trapezoid rule credits with one half.
pub fn roc_curve(p0: &[f64], p1: &[f64]) -> Result<RocResult> {
    check_samples(p0, p1)?;
    let a = sorted(p0);
    let b = sorted(p1);
    let (n0, n1) = (a.len(), b.len());

    let mut points = Vec::with_capacity(n0 + n1 + 1);
    points.push(RocPoint { fpr: 0.0, tpr: 0.0 });
    // Counts of samples ≥ θ, accumulated while θ descends.
    let (mut i, mut j) = (n0, n1);
    let mut area2 = 0.0f64; // twice the (unnormalised) trapezoid area
    let (mut fp, mut tp) = (0usize, 0usize);
    while i > 0 || j > 0 {
        let theta = match (i, j) {
            (0, _) => b[j - 1],
            (_, 0) => a[i - 1],
            _ => a[i - 1].max(b[j - 1]),
        };
        while i > 0 && a[i - 1] >= theta {
            i -= 1;
        }
        while j > 0 && b[j - 1] >= theta {
            j -= 1;
        }
        let (fp_new, tp_new) = (n0 - i, n1 - j);
        area2 += ((fp_new - fp) as f64) * ((tp + tp_new) as f64);
        fp = fp_new;
        tp = tp_new;
        points.push(RocPoint {
            fpr: fp as f64 / n0 as f64,
            tpr: tp as f64 / n1 as f64,
        });
    }
    let auc = area2 / (2.0 * n0 as f64 * n1 as f64);
    Ok(RocResult {
        points,
        auc,
        n0,
        n1,
    })
}

/// Trapezoidal area under [`roc_curve`].
pub fn auc(p0: &[f64], p1: &[f64]) -> Result<f64> {
    Ok(roc_curve(p0, p1)?.auc)
}

/// `(#{p1 > p0} + ½ #{p1 = p0}) / (n0 n1)` computed by a sorted merge.
pub fn rank_statistic(p0: &[f64], p1: &[f64]) -> Result<f64> {
    check_samples(p0, p1)?;
    let a = sorted(p0);
    let b = sorted(p1);
    let mut wins2 = 0u128; // twice the tie-corrected count
    let (mut lo, mut hi) = (0usize, 0usize);
    for &y in &b {
        while lo < a.len() && a[lo] < y {
            lo += 1;
        }
        if hi < lo {
            hi = lo;
        }
        while hi < a.len() && a[hi] <= y {
            hi += 1;
        }
        wins2 += 2 * lo as u128 + (hi - lo) as u128;
    }
    Ok(wins2 as f64 / (2.0 * a.len() as f64 * b.len() as f64))
}

/// Confusion-matrix rates at threshold `theta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConfusionRates {
    pub tp: f64,
    pub fp: f64,
    pub fn_: f64,
    pub tn: f64,
}

pub fn confusion_rates(p0: &[f64], p1: &[f64], theta: f64) -> Result<ConfusionRates> {
    check_samples(p0, p1)?;
    let frac_at_or_above =
        |xs: &[f64]| xs.iter().filter(|&&x| x >= theta).count() as f64 / xs.len() as f64;
    let tp = frac_at_or_above(p1);
    let fp = frac_at_or_above(p0);
    Ok(ConfusionRates {
        tp,
        fp,
        fn_: 1.0 - tp,
        tn: 1.0 - fp,
    })
}

fn mean_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let ss: f64 = xs.iter().map(|x| (x - mean) * (x - mean)).sum();
    (mean, ss / (n - 1.0))
}

/// Deflection index `|μ1 − μ0| / √((σ1² + σ0²)/2)` with unbiased variances.
///
/// Returns `+∞` when both spreads vanish but the means differ.
pub fn d_kc(p0: &[f64], p1: &[f64]) -> Result<f64> {
    check_samples(p0, p1)?;
    if p0.len() < 2 || p1.len() < 2 {
        return Err(JtdError::invalid("samples", "d_kc needs at least 2 samples per set"));
    }
    let (m0, v0) = mean_var(p0);
    let (m1, v1) = mean_var(p1);
    let spread = (0.5 * (v0 + v1)).sqrt();
    let gap = (m1 - m0).abs();
    if spread == 0.0 {
        if gap == 0.0 {
            return Err(JtdError::Undefined(
                "d_kc is 0/0: both sets are constant and equal",
            ));
        }
        return Ok(f64::INFINITY);
    }
    Ok(gap / spread)
}

/// Summary of one two-sample comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub auc: f64,
    pub auc_star: f64,
    pub n0: usize,
    pub n1: usize,
    /// `None` when undefined (too few samples or 0/0).
    pub d_kc: Option<f64>,
}

pub fn compare(p0: &[f64], p1: &[f64]) -> Result<(RocResult, Comparison)> {
    let roc = roc_curve(p0, p1)?;
    let cmp = Comparison {
        auc: roc.auc,
        auc_star: roc.auc_star(),
        n0: roc.n0,
        n1: roc.n1,
        d_kc: d_kc(p0, p1).ok(),
    };
    Ok((roc, cmp))
}
