//! Least-squares lines through log-log data.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    pub max_residual: f64,
    pub points: Vec<(f64, f64)>,
}

/// Ordinary least squares `y = slope·x + intercept` over at least `min_points` points.
pub fn fit_line(points: Vec<(f64, f64)>, min_points: usize) -> Result<SlopeFit> {
    if points.len() < min_points {
        return Err(Error::Input(format!(
            "need at least {min_points} points, got {}",
            points.len()
        )));
    }
    if points.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
        return Err(Error::Input("non-finite point in fit".into()));
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::Input("abscissae are all equal".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let max_residual = points
        .iter()
        .map(|p| (p.1 - slope * p.0 - intercept).abs())
        .fold(0.0, f64::max);
    Ok(SlopeFit {
        slope,
        intercept,
        max_residual,
        points,
    })
}

/// Fit of `ln y` against `ln x`.
pub fn loglog_fit(data: &[(f64, f64)], min_points: usize) -> Result<SlopeFit> {
    if data.iter().any(|&(x, y)| x <= 0.0 || y <= 0.0) {
        return Err(Error::Input("log-log fit needs positive data".into()));
    }
    fit_line(data.iter().map(|&(x, y)| (x.ln(), y.ln())).collect(), min_points)
}
