//! Growth of the truncated second-chaos lower integral as the frequency cutoff increases.

use serde::{Deserialize, Serialize};

use super::time2::{simplex_sine_sq, simplex_sine_sq_limit};
use crate::error::{domain, Error, Result};
use crate::params::ValidatedParams;
use crate::quad::{self, Estimate};

pub const DIVERGENCE_DELTA: f64 = 0.05;

/// Raw `(κ, H)`; κ is not restricted to `(0, 2]` here.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeParams {
    pub kappa: f64,
    pub hurst_space: f64,
}

impl From<&ValidatedParams> for ProbeParams {
    fn from(p: &ValidatedParams) -> Self {
        ProbeParams {
            kappa: p.kappa(),
            hurst_space: p.h(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Convergent,
    Divergent,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub params: ProbeParams,
    pub t: f64,
    pub cutoffs: Vec<f64>,
    pub integrals: Vec<Estimate>,
    /// `I(Ξ_{k+1}) / I(Ξ_k)`.
    pub ratios: Vec<f64>,
    /// `ΔI_{k+1} / ΔI_k` for consecutive increments.
    pub increment_ratios: Vec<f64>,
    pub verdict: Verdict,
}

/// Five cutoffs `100σ·10^k` with `σ = t^{−2/κ}`, so that the time factor is already saturated.
pub fn default_cutoffs(t: f64, kappa: f64) -> Vec<f64> {
    let sigma = t.powf(-2.0 / kappa);
    (0..5).map(|k| 100.0 * sigma * 10f64.powi(k)).collect()
}

/// `I(Ξ) = ∫_0^Ξ dη₁ η₁^{2−4H−κ} ∫_0^∞ dη₂ η₂^{−κ} T(t; η₁^{κ/2}, η₂^{κ/2})`.
///
/// For `κ ≤ 1` the `η₂` integral is itself infinite and is truncated at the same `Ξ`.
pub fn second_chaos_divergence_probe(p: ProbeParams, t: f64, cutoffs: &[f64]) -> Result<ProbeReport> {
    let (k, h) = (p.kappa, p.hurst_space);
    if !(h > 0.0 && h < 0.5) {
        return Err(domain("hurst_space", h, "(0, 1/2)"));
    }
    if !(k > 0.0 && k.is_finite()) {
        return Err(domain("kappa", k, "(0, inf)"));
    }
    if !(t > 0.0) {
        return Err(domain("t", t, "(0, inf)"));
    }
    if cutoffs.len() < 3 || cutoffs[0] <= 0.0 {
        return Err(Error::Input("need at least three positive cutoffs".into()));
    }
    let step = cutoffs[1] / cutoffs[0];
    let geometric = step > 1.0
        && cutoffs
            .windows(2)
            .all(|w| ((w[1] / w[0]) / step - 1.0).abs() < 1e-9);
    if !geometric {
        return Err(Error::Input("cutoffs must be increasing and geometric".into()));
    }

    let sigma = t.powf(-2.0 / k);
    let omega = |e: f64| e.powf(0.5 * k);
    let outer_exp = 2.0 - 4.0 * h - k;

    let inner = |e1: f64, cap: Option<f64>| -> f64 {
        let w1 = omega(e1);
        let x = cap.unwrap_or((1e3 * sigma).max(10.0 * e1));
        let mut edges = vec![0.0];
        edges.extend(quad::geometric_edges(1e-8 * sigma, x, 2.0));
        let body = quad::integrate_best(
            |e2: f64| e2.powf(-k) * simplex_sine_sq(t, w1, omega(e2)),
            &edges,
            0.0,
            1e-8,
            50_000,
        )
        .estimate
        .value;
        match cap {
            Some(_) => body,
            None => body + simplex_sine_sq_limit(t, w1) * x.powf(1.0 - k) / (k - 1.0),
        }
    };

    let segment = |lo: f64, hi: f64, cap: Option<f64>| -> Estimate {
        let mut edges = Vec::new();
        if lo == 0.0 {
            edges.push(0.0);
            edges.extend(quad::geometric_edges(1e-8 * sigma, hi, 2.0));
        } else {
            edges.extend(quad::geometric_edges(lo, hi, 1.25));
        }
        quad::integrate_best(
            |e1: f64| e1.powf(outer_exp) * inner(e1, cap),
            &edges,
            0.0,
            1e-7,
            100_000,
        )
        .estimate
    };

    let mut integrals = Vec::with_capacity(cutoffs.len());
    if k > 1.0 {
        let mut acc = Estimate::exact(0.0);
        let mut lo = 0.0;
        for &c in cutoffs {
            acc += segment(lo, c, None);
            integrals.push(acc);
            lo = c;
        }
    } else {
        for &c in cutoffs {
            integrals.push(segment(0.0, c, Some(c)));
        }
    }

    let values: Vec<f64> = integrals.iter().map(|e| e.value).collect();
    let ratios: Vec<f64> = values.windows(2).map(|w| w[1] / w[0]).collect();
    let incs: Vec<f64> = values.windows(2).map(|w| w[1] - w[0]).collect();
    let increment_ratios: Vec<f64> = incs.windows(2).map(|w| w[1] / w[0]).collect();
    // a convergent power tail shrinks every increment by a fixed factor below one; a divergent
    // one (logarithmic included) keeps them from shrinking
    let increments_persist = *increment_ratios.last().unwrap() >= 1.0 - DIVERGENCE_DELTA;
    let verdict = if increments_persist {
        Verdict::Divergent
    } else {
        Verdict::Convergent
    };
    Ok(ProbeReport {
        params: p,
        t,
        cutoffs: cutoffs.to_vec(),
        integrals,
        ratios,
        increment_ratios,
        verdict,
    })
}
