//! First-chaos increment variances in time and space, and Hölder-rate fits.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::fit::{loglog_fit, SlopeFit};
use crate::params::{exponents, ValidatedParams};
use crate::quad::{self, Estimate, QuadratureSpec, TrigPower};
use crate::special::{one_minus_cos, sinc};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IncrementSample {
    pub offset: f64,
    pub variance: f64,
    pub quadrature_error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeIncrement {
    pub sample: IncrementSample,
    /// Contribution of the shared time interval `[0, t]`.
    pub a_part: Estimate,
    /// Contribution of the new interval `[t, t+h]`.
    pub b_part: Estimate,
}

fn one_minus_sinc(x: f64) -> f64 {
    if x.abs() < 1e-3 {
        let x2 = x * x;
        x2 / 6.0 - x2 * x2 / 120.0
    } else {
        1.0 - x.sin() / x
    }
}

/// `∫_0^∞ f(v) v^e dv` where `f·v^e` equals `tail_terms` beyond the numeric range.
fn frequency_integral<F: Fn(f64) -> f64>(
    f: F,
    fastest: f64,
    tail_terms: &[TrigPower],
    q: &QuadratureSpec,
) -> Result<Estimate> {
    let x = q.frequency_cutoff / fastest;
    let edges = quad::panel_edges(1.0 / fastest, x, 0.5 * PI / fastest);
    let body = quad::integrate(f, &edges, 1e-300, 0.01 * q.tolerance, q.max_subdivisions)?;
    Ok(body + quad::tails(tail_terms, x, q.tail_policy)?)
}

/// Variance of the first-chaos time increment `u₁(t+h) − u₁(t)` under white time noise.
pub fn time_increment_variance(
    t: f64,
    h: f64,
    p: &ValidatedParams,
    q: &QuadratureSpec,
) -> Result<TimeIncrement> {
    p.require_white_wave()?;
    q.validate()?;
    if !(t > 0.0) {
        return Err(domain("t", t, "(0, inf)"));
    }
    if !(h > 0.0 && h <= t) {
        return Err(domain("h", h, "(0, t]"));
    }
    let k = p.kappa();
    // ξ = v^{2/κ} folded onto ξ > 0
    let e = (2.0 / k) * (2.0 - 2.0 * p.h()) - 1.0;
    let pre = 4.0 / k;
    let fast = 2.0 * t + 2.0 * h;

    // |Ĝ_{u+h} − Ĝ_u|² integrated over u ∈ [0, t]
    let a_f = |v: f64| {
        let s = sinc(0.5 * h * v);
        let cross = ((t + h) * v).cos() * (t * v).sin() / (2.0 * v);
        h * h * s * s * (0.5 * t + cross) * v.powf(e)
    };
    let a_tail = [
        TrigPower::power(t, 2.0 - e),
        TrigPower::cos(-t, h, 2.0 - e),
        TrigPower::sin(0.5, 2.0 * t + h, 3.0 - e),
        TrigPower::sin(-0.5, h, 3.0 - e),
        TrigPower::sin(-0.25, 2.0 * t + 2.0 * h, 3.0 - e),
        TrigPower::sin(-0.25, 2.0 * t, 3.0 - e),
        TrigPower::sin(0.25, 2.0 * h, 3.0 - e),
    ];
    let a_part = frequency_integral(a_f, fast, &a_tail, q)? * pre;

    // |Ĝ_u|² integrated over u ∈ [0, h]
    let b_f = |v: f64| 0.5 * h * one_minus_sinc(2.0 * h * v) * v.powf(e - 2.0);
    let b_tail = [
        TrigPower::power(0.5 * h, 2.0 - e),
        TrigPower::sin(-0.25, 2.0 * h, 3.0 - e),
    ];
    let b_part = frequency_integral(b_f, fast, &b_tail, q)? * pre;

    let total = a_part + b_part;
    if total.error > q.tolerance.max(1e-10) * total.value.abs() * 10.0 {
        return Err(Error::Accuracy {
            value: total.value,
            error: total.error,
        });
    }
    Ok(TimeIncrement {
        sample: IncrementSample {
            offset: h,
            variance: total.value,
            quadrature_error: total.error,
        },
        a_part,
        b_part,
    })
}

/// Variance of the first-chaos space increment `u₁(t, x+z) − u₁(t, x)` under white time noise.
pub fn space_increment_variance(
    t: f64,
    z: f64,
    p: &ValidatedParams,
    q: &QuadratureSpec,
) -> Result<IncrementSample> {
    p.require_white_wave()?;
    q.validate()?;
    if !(t > 0.0) {
        return Err(domain("t", t, "(0, inf)"));
    }
    let za = z.abs();
    if za == 0.0 {
        return Ok(IncrementSample {
            offset: z,
            variance: 0.0,
            quadrature_error: 0.0,
        });
    }
    let (k, h) = (p.kappa(), p.h());
    let m = 1.0 - 2.0 * h - k;

    // ∫_0^t sin²(uω) du = t/2 − sin(2tω)/(4ω); the t/2 part is a pure Fourier integral in ξ
    let x = q.frequency_cutoff / za;
    let edges = quad::panel_edges(1.0 / za, x, 0.5 * PI / za);
    let main_body = quad::integrate(
        |xi: f64| one_minus_cos(za * xi) * xi.powf(m),
        &edges,
        1e-300,
        0.01 * q.tolerance,
        q.max_subdivisions,
    )?;
    let main_tail = quad::tails(
        &[TrigPower::power(1.0, -m), TrigPower::cos(-1.0, za, -m)],
        x,
        q.tail_policy,
    )?;
    let main = (main_body + main_tail) * (2.0 * t);

    // remaining oscillatory part; its tail is bounded by one integration by parts in ω
    let a = m + 1.0 - k;
    let tail_bound = |x: f64| (4.0 * x.powf(a) + za * x.powf(a + 1.0) / (-a - 1.0)) / (t * k);
    let target = 0.5 * q.tolerance * main.value.abs();
    let mut x_osc = x;
    while tail_bound(x_osc) > target && x_osc < 1e9 {
        x_osc *= 2.0;
    }
    let osc_f = |xi: f64| {
        let w = xi.powf(0.5 * k);
        -2.0 * t * sinc(2.0 * t * w) * one_minus_cos(za * xi) * xi.powf(m)
    };
    let mut edges = vec![0.0];
    let mut cur = 1e-9 * (1.0 / za).min(t.powf(-2.0 / k));
    edges.push(cur);
    while cur < x_osc {
        let dw = 0.5 * k * cur.powf(0.5 * k - 1.0);
        let step = (0.25 * PI / (2.0 * t * dw)).min(0.5 * PI / za).min(cur);
        cur = (cur + step).min(x_osc);
        edges.push(cur);
    }
    let osc_body = quad::integrate(osc_f, &edges, 1e-300, 0.01 * q.tolerance, q.max_subdivisions)?;
    let osc = osc_body + Estimate::new(0.0, tail_bound(x_osc));

    let total = main + osc;
    Ok(IncrementSample {
        offset: z,
        variance: total.value,
        quadrature_error: total.error,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IncrementKind {
    Time,
    Space,
}

pub const HOLDER_SLACK: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HolderVerdict {
    pub kind: IncrementKind,
    pub fit: SlopeFit,
    pub supremum: f64,
    pub theta_estimate: f64,
    pub consistent: bool,
}

/// Fitted rate `slope/2` compared with the supremum of admissible Hölder orders.
pub fn holder_verdict(
    samples: &[IncrementSample],
    kind: IncrementKind,
    p: &ValidatedParams,
) -> Result<HolderVerdict> {
    if samples.len() < 5 {
        return Err(Error::Input(format!(
            "need at least 5 increment samples, got {}",
            samples.len()
        )));
    }
    for s in samples {
        let l = s.offset.abs().log2();
        if !(s.offset != 0.0 && (l - l.round()).abs() < 1e-9) {
            return Err(Error::Input(format!("offset {} is not dyadic", s.offset)));
        }
    }
    let e = exponents(p)?;
    let supremum = match kind {
        IncrementKind::Time => e.holder_time_sup,
        IncrementKind::Space => e.holder_space_sup,
    };
    let data: Vec<(f64, f64)> = samples.iter().map(|s| (s.offset.abs(), s.variance)).collect();
    let fit = loglog_fit(&data, 5)?;
    let theta = 0.5 * fit.slope;
    let consistent = (theta - supremum).abs() <= HOLDER_SLACK;
    Ok(HolderVerdict {
        kind,
        fit,
        supremum,
        theta_estimate: theta,
        consistent,
    })
}

/// Dyadic offsets `2^{-lo}, …, 2^{-hi}`.
pub fn dyadic_offsets(lo: i32, hi: i32) -> Vec<f64> {
    (lo..=hi).map(|k| 2f64.powi(-k)).collect()
}

/// `|sin((t+h)x) − sin(tx)|` and the cap `C_γ min(|hx|^γ, |hx|)`, `C_γ = 2^{1−γ}/γ`.
pub fn sine_increment_cap(t: f64, h: f64, x: f64, gamma: f64) -> Result<(f64, f64)> {
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(domain("gamma", gamma, "(0, 1]"));
    }
    let lhs = ((t + h) * x).sin() - (t * x).sin();
    let hx = (h * x).abs();
    let c = 2f64.powf(1.0 - gamma) / gamma;
    Ok((lhs.abs(), c * hx.powf(gamma).min(hx)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{validate_params, ModelParams};

    #[test]
    fn synthetic_power_law_is_consistent() {
        let p = validate_params(ModelParams::white(2.0, 0.3)).unwrap();
        let s: Vec<IncrementSample> = dyadic_offsets(4, 9)
            .into_iter()
            .map(|o| IncrementSample {
                offset: o,
                variance: o.powf(0.6),
                quadrature_error: 0.0,
            })
            .collect();
        let v = holder_verdict(&s, IncrementKind::Time, &p).unwrap();
        assert!((v.fit.slope - 0.6).abs() < 1e-12);
        assert!(v.consistent);
        assert!(holder_verdict(&s[..4], IncrementKind::Time, &p).is_err());
    }

    #[test]
    fn space_increment_is_even_and_vanishes() {
        let p = validate_params(ModelParams::white(2.0, 0.3)).unwrap();
        let q = QuadratureSpec::default().with_tolerance(1e-6);
        let a = space_increment_variance(1.0, 0.125, &p, &q).unwrap();
        let b = space_increment_variance(1.0, -0.125, &p, &q).unwrap();
        assert_eq!(a.variance, b.variance);
        assert_eq!(space_increment_variance(1.0, 0.0, &p, &q).unwrap().variance, 0.0);
    }

    #[test]
    fn cap_rejects_bad_gamma() {
        assert!(sine_increment_cap(1.0, 0.1, 2.0, 0.0).is_err());
        let (l, r) = sine_increment_cap(1.0, 0.1, 2.0, 0.5).unwrap();
        assert!(l <= r);
    }
}
