//! Second-moment bound series, growth-exponent fits and the intermittency report.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::chaos::UpperBound;
use crate::error::{domain, Error, Result};
use crate::fit::{fit_line, SlopeFit};
use crate::mc::{mc_mean, ordered_times, McConfig};
use crate::params::{exponents, ValidatedParams};
use crate::quad::{self, Estimate, QuadratureSpec, TrigPower};
use crate::special::{ln_factorial, ln_gamma, log_sum_exp};

/// Largest series order accepted; the index-set sum is evaluated recursively, not enumerated.
pub const MAX_SERIES_ORDER: usize = 4096;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentSeries {
    /// `terms[0] = 1`, then orders `1..=N`.
    pub terms: Vec<f64>,
    pub ln_terms: Vec<f64>,
    pub partial_sum: f64,
    pub log_partial_sum: f64,
    pub tail_bound: f64,
    pub orders_used: usize,
}

impl MomentSeries {
    fn from_logs(ln_terms: Vec<f64>) -> Self {
        let mut all = Vec::with_capacity(ln_terms.len() + 1);
        all.push(0.0);
        all.extend_from_slice(&ln_terms);
        let log_partial_sum = log_sum_exp(&all);
        MomentSeries {
            terms: all.iter().map(|l| l.exp()).collect(),
            partial_sum: log_partial_sum.exp(),
            log_partial_sum,
            ln_terms: all,
            tail_bound: 0.0,
            orders_used: ln_terms.len(),
        }
    }

    /// `ln(1 + max_{n≥1} term_n)`.
    pub fn log_one_plus_max(&self) -> f64 {
        let m = self.ln_terms[1..]
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        crate::special::log_add_exp(0.0, m)
    }

    /// Geometric majorant from the last term ratio, if that ratio is below 1/2 and still falling.
    fn ratio_tail(&self) -> std::result::Result<f64, f64> {
        let l = &self.ln_terms;
        let n = l.len() - 1;
        if l[n] == f64::NEG_INFINITY {
            return Ok(0.0);
        }
        if n < 2 {
            return Err(f64::NAN);
        }
        let r = (l[n] - l[n - 1]).exp();
        let r_prev = (l[n - 1] - l[n - 2]).exp();
        if r < 0.5 && (n < 3 || r <= r_prev) {
            Ok((l[n] + (r / (1.0 - r)).ln()).exp())
        } else {
            Err(r)
        }
    }
}

fn check_series(t: f64, n_max: usize) -> Result<()> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(domain("t", t, "[0, inf)"));
    }
    if n_max == 0 || n_max > MAX_SERIES_ORDER {
        return Err(Error::Capacity {
            what: "series order",
            value: n_max,
            max: MAX_SERIES_ORDER,
        });
    }
    Ok(())
}

/// `1 + Σ_{n≤N}` of the explicit chaos bounds, with a ratio-test tail.
pub fn second_moment_upper_with(bound: &UpperBound, t: f64, n_max: usize) -> Result<MomentSeries> {
    check_series(t, n_max)?;
    let logs = (1..=n_max).map(|n| bound.ln_term(n, t)).collect();
    let mut s = MomentSeries::from_logs(logs);
    match s.ratio_tail() {
        Ok(tail) => {
            s.tail_bound = tail;
            Ok(s)
        }
        Err(last_ratio) => Err(Error::Truncation {
            orders: n_max,
            last_ratio,
        }),
    }
}

pub fn second_moment_upper(t: f64, p: &ValidatedParams, n_max: usize) -> Result<MomentSeries> {
    let b = UpperBound::new(p, &QuadratureSpec::default())?;
    second_moment_upper_with(&b, t, n_max)
}

/// `c = ∫_0^∞ η^{1−2H} / (1+η^κ)² dη`.
pub fn lower_c_constant(p: &ValidatedParams, q: &QuadratureSpec) -> Result<Estimate> {
    q.validate()?;
    let (k, h) = (p.kappa(), p.h());
    let decay = 2.0 * k + 2.0 * h - 2.0;
    if decay <= 0.0 {
        return Err(Error::Divergent(format!(
            "eta^(1-2H)/(1+eta^kappa)^2 is not integrable for kappa = {k}, H = {h}"
        )));
    }
    let x = 1e4f64.powf(1.0 / k);
    let mut edges = vec![0.0];
    edges.extend(quad::geometric_edges(1e-10, x, 2.0));
    let body = quad::integrate(
        |e: f64| e.powf(1.0 - 2.0 * h) / (1.0 + e.powf(k)).powi(2),
        &edges,
        0.0,
        0.1 * q.tolerance,
        q.max_subdivisions,
    )?;
    // (1+y)^{-2} = Σ (j+1)(−1)^j y^{−2−j} for y = η^κ > 1
    let mut tail = 0.0;
    let mut j = 0;
    loop {
        let term = (j as f64 + 1.0) * x.powf(-decay - k * j as f64) / (decay + k * j as f64);
        tail += if j % 2 == 0 { term } else { -term };
        if term < 1e-18 || j > 200 {
            break;
        }
        j += 1;
    }
    Ok(body + Estimate::exact(tail))
}

/// Lower-bound exponents `(g, a)` with terms `cⁿ n! t^{ng} / Γ(an+1)`.
pub fn lower_exponents(p: &ValidatedParams) -> (f64, f64) {
    let (k, h, h0) = (p.kappa(), p.h(), p.h0());
    (2.0 * h0 + 2.0 - (4.0 - 4.0 * h) / k, 4.0 * (1.0 - (1.0 - h) / k))
}

/// Explicit lower-bound terms; the partial sum and `1 + max term` are both lower bounds.
pub fn second_moment_lower(t: f64, p: &ValidatedParams, n_max: usize, c: f64) -> Result<MomentSeries> {
    p.require_wave()?;
    check_series(t, n_max)?;
    if !(c > 0.0) {
        return Err(domain("c", c, "(0, inf)"));
    }
    let (g, a) = lower_exponents(p);
    let logs = (1..=n_max)
        .map(|n| {
            if t == 0.0 {
                return f64::NEG_INFINITY;
            }
            let nf = n as f64;
            nf * c.ln() + ln_factorial(n) + nf * g * t.ln() - ln_gamma(a * nf + 1.0)
        })
        .collect();
    let mut s = MomentSeries::from_logs(logs);
    s.tail_bound = s.ratio_tail().unwrap_or(f64::INFINITY);
    Ok(s)
}

/// Slope of `ln ln M(t)` against `ln t` from pairs `(t, ln M(t))`.
pub fn lyapunov_fit(series: &[(f64, f64)]) -> Result<SlopeFit> {
    if series.len() < 4 {
        return Err(Error::Input(format!(
            "need at least 4 horizons, got {}",
            series.len()
        )));
    }
    for &(t, lm) in series {
        if !(t > 0.0) {
            return Err(domain("t", t, "(0, inf)"));
        }
        if !(lm > 0.0) {
            return Err(domain("log_moment", lm, "(0, inf); the moment must exceed 1"));
        }
    }
    fit_line(series.iter().map(|&(t, lm)| (t.ln(), lm.ln())).collect(), 4)
}

/// Series order large enough to pass the peak term at horizon `t` for either bound.
pub fn default_order(t: f64) -> usize {
    (40.0 + 30.0 * t).min(MAX_SERIES_ORDER as f64) as usize
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthFits {
    pub target: f64,
    pub upper: SlopeFit,
    /// Fit on `ln(1 + max term)` of the lower series.
    pub lower: SlopeFit,
    /// Fit on the lower partial sum, reported for comparison.
    pub lower_partial: SlopeFit,
    pub sandwich_holds: bool,
}

/// Growth-exponent fits of both explicit series over `horizons` (each ≥ 2 is expected).
pub fn growth_fits(p: &ValidatedParams, q: &QuadratureSpec, horizons: &[f64]) -> Result<GrowthFits> {
    let e = exponents(p)?;
    let bound = UpperBound::new(p, q)?;
    let c = lower_c_constant(p, q)?.value;
    let mut up = Vec::new();
    let mut lo = Vec::new();
    let mut lo_sum = Vec::new();
    let mut sandwich = true;
    for &t in horizons {
        let n = default_order(t);
        let u = second_moment_upper_with(&bound, t, n)?;
        let l = second_moment_lower(t, p, n, c)?;
        sandwich &= l.log_partial_sum <= u.log_partial_sum;
        up.push((t, u.log_partial_sum));
        lo.push((t, l.log_one_plus_max()));
        lo_sum.push((t, l.log_partial_sum));
    }
    Ok(GrowthFits {
        target: e.growth,
        upper: lyapunov_fit(&up)?,
        lower: lyapunov_fit(&lo)?,
        lower_partial: lyapunov_fit(&lo_sum)?,
        sandwich_holds: sandwich,
    })
}

/// `ln Σ_n (p−1)^{n/2} √U_n(t)`, the explicit bound on `ln ‖u(t,x)‖_p`.
pub fn log_p_moment_upper(bound: &UpperBound, t: f64, p_exp: f64, n_max: usize) -> Result<f64> {
    check_series(t, n_max)?;
    if !(p_exp >= 2.0) {
        return Err(domain("p", p_exp, "[2, inf)"));
    }
    let mut logs = vec![0.0];
    for n in 1..=n_max {
        logs.push(0.5 * n as f64 * (p_exp - 1.0).ln() + 0.5 * bound.ln_term(n, t));
    }
    Ok(log_sum_exp(&logs))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PScaling {
    /// t-exponent per chaos order of the bound terms.
    pub gamma: f64,
    pub p: f64,
    /// `ln S_p(t)`.
    pub lhs: f64,
    /// `ln S_2((p−1)^{1/γ} t)`.
    pub rhs: f64,
    /// growth / γ, the induced power of p in the exponent.
    pub implied_p_exponent: f64,
    pub p_factor: f64,
}

/// The p-series is the 2-series at a dilated time, which fixes the power of p in the exponent.
pub fn p_scaling_check(bound: &UpperBound, t: f64, p_exp: f64, n_max: usize) -> Result<PScaling> {
    let pr = &bound.params;
    let e = exponents(pr)?;
    let (k, h, h0) = (pr.kappa(), pr.h(), pr.h0());
    let gamma = 2.0 * h0 + 2.0 * ((1.0 - 2.0 / k) + 2.0 * h / k);
    let lhs = log_p_moment_upper(bound, t, p_exp, n_max)?;
    let rhs = log_p_moment_upper(bound, (p_exp - 1.0).powf(1.0 / gamma) * t, 2.0, n_max)?;
    Ok(PScaling {
        gamma,
        p: p_exp,
        lhs,
        rhs,
        implied_p_exponent: e.growth / gamma,
        p_factor: e.p_factor,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeakIntermittency {
    pub horizon: f64,
    pub growth: f64,
    /// `ln(1 + max lower term) / t^e` at p = 2.
    pub lower_exponent: f64,
    /// `(p, p·ln S_p(t) / t^e)`.
    pub upper_exponents: Vec<(f64, f64)>,
    pub intermittent: bool,
}

pub fn weak_intermittency(p: &ValidatedParams, q: &QuadratureSpec, t: f64) -> Result<WeakIntermittency> {
    let e = exponents(p)?;
    let bound = UpperBound::new(p, q)?;
    let c = lower_c_constant(p, q)?.value;
    let n = default_order(t);
    let scale = t.powf(e.growth);
    let lower = second_moment_lower(t, p, n, c)?.log_one_plus_max() / scale;
    let mut upper = Vec::new();
    for pe in [2.0, 4.0, 8.0] {
        let n_p = default_order(t * (pe - 1.0));
        upper.push((pe, pe * log_p_moment_upper(&bound, t, pe, n_p)? / scale));
    }
    let intermittent = lower > 0.0 && upper.iter().all(|u| u.1.is_finite());
    Ok(WeakIntermittency {
        horizon: t,
        growth: e.growth,
        lower_exponent: lower,
        upper_exponents: upper,
        intermittent,
    })
}

/// `A₁(t) = ∫_0^∞ (∫_0^t sin(s η^{κ/2}) ds)² η^{1−2H−κ} dη`.
pub fn a1_value(t: f64, p: &ValidatedParams, q: &QuadratureSpec) -> Result<Estimate> {
    q.validate()?;
    let (k, h) = (p.kappa(), p.h());
    // η = v^{2/κ}: (1 − cos tv)² v^{c} with the Jacobian folded in
    let c = (2.0 / k) * (2.0 - 2.0 * h) - 5.0;
    if !(c < -1.0 && c > -5.0) {
        return Err(Error::Divergent(format!("A1 integrand exponent {c}")));
    }
    let x = q.frequency_cutoff;
    let edges = quad::panel_edges(1.0, x, 0.5 * std::f64::consts::PI / t.max(1.0));
    let body = quad::integrate(
        |v: f64| crate::special::one_minus_cos(t * v).powi(2) * v.powf(c),
        &edges,
        0.0,
        0.1 * q.tolerance,
        q.max_subdivisions,
    )?;
    // (1 − cos)² = 3/2 − 2 cos(tv) + ½ cos(2tv)
    let tail = quad::tails(
        &[
            TrigPower::power(1.5, -c),
            TrigPower::cos(-2.0, t, -c),
            TrigPower::cos(0.5, 2.0 * t, -c),
        ],
        x,
        q.tail_policy,
    )?;
    Ok((body + tail) * (2.0 / k))
}

/// Empirical `A₁(t)/A₁(1)` and the predicted `t^{4(1−(1−H)/κ)}`.
pub fn a1_scaling_check(t: f64, p: &ValidatedParams, q: &QuadratureSpec) -> Result<(f64, f64)> {
    p.require_wave()?;
    if !(t > 0.0) {
        return Err(domain("t", t, "(0, inf)"));
    }
    let at = a1_value(t, p, q)?.value;
    let a1 = a1_value(1.0, p, q)?.value;
    let predicted = t.powf(4.0 * (1.0 - (1.0 - p.h()) / p.kappa()));
    Ok((at / a1, predicted))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LaplaceCheck {
    pub eta: Vec<f64>,
    /// Deterministic nested quadrature (orders 1 and 2), otherwise the Monte Carlo value.
    pub lhs: f64,
    pub lhs_error: f64,
    pub lhs_monte_carlo: f64,
    pub lhs_monte_carlo_error: f64,
    pub rhs: f64,
}

/// `∫_0^∞ e^{−t} ∫_{0<s₁<…<sₙ<t} ∏ sin((s_{j+1}−s_j)|η_j|^{κ/2}) ds dt` against `∏ a/(1+a²)`.
pub fn laplace_sine_product_check(
    p: &ValidatedParams,
    eta: &[f64],
    q: &QuadratureSpec,
    mc: &McConfig,
) -> Result<LaplaceCheck> {
    let n = eta.len();
    if n == 0 || n > 3 {
        return Err(Error::Capacity {
            what: "Laplace check order",
            value: n,
            max: 3,
        });
    }
    let k = p.kappa();
    let a: Vec<f64> = eta.iter().map(|e| e.abs().powf(0.5 * k)).collect();
    let rhs: f64 = a.iter().map(|&x| x / (1.0 + x * x)).product();

    let horizon = 40.0;
    let panels = |lo: f64, hi: f64| -> Vec<f64> {
        let m = (((hi - lo) * (a.iter().fold(1.0f64, |m, &x| m.max(x)))).ceil() as usize).clamp(4, 400);
        (0..=m).map(|j| lo + (hi - lo) * j as f64 / m as f64).collect()
    };
    let tol = 1e-10;
    let quad_lhs = match n {
        1 => Some(quad::integrate(
            |t: f64| {
                (-t).exp()
                    * quad::integrate_best(|s: f64| ((t - s) * a[0]).sin(), &panels(0.0, t), 1e-300, tol, 2000)
                        .estimate
                        .value
            },
            &panels(0.0, horizon),
            1e-300,
            1e-9,
            q.max_subdivisions,
        )?),
        2 => Some(quad::integrate(
            |t: f64| {
                let mid = |s2: f64| {
                    let inner = quad::integrate_best(
                        |s1: f64| ((s2 - s1) * a[0]).sin(),
                        &panels(0.0, s2),
                        1e-300,
                        tol,
                        2000,
                    )
                    .estimate
                    .value;
                    inner * ((t - s2) * a[1]).sin()
                };
                (-t).exp()
                    * quad::integrate_best(mid, &panels(0.0, t), 1e-300, tol, 2000)
                        .estimate
                        .value
            },
            &panels(0.0, horizon),
            1e-300,
            1e-8,
            q.max_subdivisions,
        )?),
        _ => None,
    };
    // t ~ Gamma(n+1) absorbs both e^{−t} and the simplex volume tⁿ/n!
    let est = mc_mean(mc, |rng| {
        let t: f64 = (0..=n).map(|_| -(1.0 - rng.random::<f64>()).ln()).sum();
        let mut s = Vec::with_capacity(n);
        ordered_times(rng, n, t, &mut s);
        let mut prod = 1.0;
        for j in 0..n {
            let next = if j + 1 < n { s[j + 1] } else { t };
            prod *= ((next - s[j]) * a[j]).sin();
        }
        prod
    });
    let (lhs, lhs_error) = match quad_lhs {
        Some(e) => (e.value, e.error + horizon.powi(n as i32) * (-horizon).exp()),
        None => (est.mean, 3.0 * est.std_error),
    };
    Ok(LaplaceCheck {
        eta: eta.to_vec(),
        lhs,
        lhs_error,
        lhs_monte_carlo: est.mean,
        lhs_monte_carlo_error: 3.0 * est.std_error,
        rhs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{validate_params, ModelParams};
    use crate::special::ln_beta;

    fn white(k: f64, h: f64) -> ValidatedParams {
        validate_params(ModelParams::white(k, h)).unwrap()
    }

    #[test]
    fn zero_horizon_series() {
        let s = second_moment_upper(0.0, &white(2.0, 0.3), 20).unwrap();
        assert_eq!(s.partial_sum, 1.0);
        assert_eq!(s.tail_bound, 0.0);
        let l = second_moment_lower(0.0, &white(2.0, 0.3), 20, 0.5).unwrap();
        assert!(l.terms[1..].iter().all(|&x| x == 0.0));
    }

    #[test]
    fn upper_tail_is_small_at_unit_time() {
        let s = second_moment_upper(1.0, &white(2.0, 0.3), 20).unwrap();
        assert!(s.tail_bound < 1e-6 * s.partial_sum, "{s:?}");
        assert_eq!(s.orders_used, 20);
    }

    #[test]
    fn truncation_is_reported() {
        let e = second_moment_upper(30.0, &white(2.0, 0.3), 5).unwrap_err();
        assert!(matches!(e, Error::Truncation { orders: 5, .. }));
    }

    #[test]
    fn c_constant_beta_reduction() {
        let q = QuadratureSpec::default();
        for h in [0.3, 0.45, 0.49] {
            let c = lower_c_constant(&white(2.0, h), &q).unwrap();
            let exact = 0.5 * ln_beta(1.0 - h, 1.0 + h).exp();
            assert!((c.value - exact).abs() < 1e-9, "h={h}");
        }
    }

    #[test]
    fn lower_term_scaling_is_exact() {
        let p = white(2.0, 0.3);
        let (g, _) = lower_exponents(&p);
        let a = second_moment_lower(1.5, &p, 8, 0.58).unwrap();
        let b = second_moment_lower(3.0, &p, 8, 0.58).unwrap();
        for n in 1..=8 {
            let r = b.ln_terms[n] - a.ln_terms[n];
            assert!((r - n as f64 * g * 2f64.ln()).abs() < 1e-10);
        }
    }

    #[test]
    fn lyapunov_synthetic() {
        let pts: Vec<(f64, f64)> = [2.0, 4.0, 8.0, 16.0]
            .iter()
            .map(|&t: &f64| (t, 0.7 * t.powf(1.3125)))
            .collect();
        let f = lyapunov_fit(&pts).unwrap();
        assert!((f.slope - 1.3125).abs() < 1e-6);
        let bad = [(2.0, 0.1), (4.0, 0.0), (8.0, 1.0), (16.0, 2.0)];
        assert!(matches!(lyapunov_fit(&bad), Err(Error::Domain { .. })));
    }

    #[test]
    fn laplace_first_order() {
        let p = white(2.0, 0.3);
        let r = laplace_sine_product_check(&p, &[1.0], &QuadratureSpec::default(), &McConfig::default())
            .unwrap();
        assert!((r.rhs - 0.5).abs() < 1e-15);
        assert!((r.lhs - 0.5).abs() < 1e-8, "{r:?}");
    }
}
