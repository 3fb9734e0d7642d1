//! Least-squares scaling-law fits used by the verification studies.

use serde::{Deserialize, Serialize};

/// Result of fitting `y ≈ slope·x + intercept`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual of the fit.
    pub rms_residual: f64,
}

/// Ordinary least squares on `(x, y)` pairs; needs at least two points.
pub fn fit_line(xs: &[f64], ys: &[f64]) -> LineFit {
    assert_eq!(xs.len(), ys.len());
    assert!(xs.len() >= 2, "need at least two points to fit a slope");
    let n = xs.len() as f64;
    let xm = xs.iter().sum::<f64>() / n;
    let ym = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (&x, &y) in xs.iter().zip(ys.iter()) {
        sxx += (x - xm) * (x - xm);
        sxy += (x - xm) * (y - ym);
    }
    let slope = sxy / sxx;
    let intercept = ym - slope * xm;
    let mut ss = 0.0;
    for (&x, &y) in xs.iter().zip(ys.iter()) {
        let e = y - slope * x - intercept;
        ss += e * e;
    }
    LineFit {
        slope,
        intercept,
        rms_residual: (ss / n).sqrt(),
    }
}

/// Slope of `log₂|v|` against the shell index `q` (i.e. against `log₂ λ_q`),
/// the form every scaling law in this crate takes. Non-positive values are
/// rejected by the caller beforehand where signs matter.
pub fn log2_slope_vs_q(qs: &[u32], values: &[f64]) -> LineFit {
    let xs: Vec<f64> = qs.iter().map(|&q| q as f64).collect();
    let ys: Vec<f64> = values.iter().map(|&v| v.abs().log2()).collect();
    fit_line(&xs, &ys)
}
