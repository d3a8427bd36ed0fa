//! Numeric values of `n!‖gₙ(·,t,x)‖²` for white-in-time noise.

use std::cell::{Cell, RefCell};

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::alpha::increment_weight;
use super::time2::{simplex_sine_sq, simplex_sine_sq_limit};
use crate::error::{Error, Result};
use crate::greens::green_hat_omega;
use crate::mc::{mc_mean, ordered_times, McConfig};
use crate::params::ValidatedParams;
use crate::quad::{self, Estimate, QuadratureSpec, TrigPower};
use crate::special::{binomial, ln_factorial};

pub const MAX_NUMERIC_ORDER: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormMethod {
    Quadrature,
    MonteCarlo,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChaosOrderResult {
    pub order: usize,
    pub value: f64,
    pub error_estimate: f64,
    pub method: NormMethod,
}

fn check_order(n: usize, t: f64) -> Result<()> {
    if n == 0 || n > MAX_NUMERIC_ORDER {
        return Err(Error::Capacity {
            what: "numeric chaos order",
            value: n,
            max: MAX_NUMERIC_ORDER,
        });
    }
    if !(t >= 0.0 && t.is_finite()) {
        return Err(crate::error::domain("t", t, "[0, inf)"));
    }
    Ok(())
}

/// Orders 1 and 2 by quadrature, 3 and 4 by Monte Carlo.
pub fn chaos_norm_white(
    n: usize,
    t: f64,
    p: &ValidatedParams,
    q: &QuadratureSpec,
    mc: &McConfig,
) -> Result<ChaosOrderResult> {
    p.require_white_wave()?;
    check_order(n, t)?;
    q.validate()?;
    let (est, method) = if t == 0.0 {
        (Estimate::exact(0.0), NormMethod::Quadrature)
    } else {
        match n {
            1 => (first_order(t, p, q)?, NormMethod::Quadrature),
            2 => (second_order(t, p, q)?, NormMethod::Quadrature),
            _ => return chaos_norm_white_mc(n, t, p, mc),
        }
    };
    Ok(ChaosOrderResult {
        order: n,
        value: est.value,
        error_estimate: est.error,
        method,
    })
}

/// Records the first failure of a nested quadrature and the worst relative inner error.
#[derive(Default)]
struct Inner {
    failure: RefCell<Option<Error>>,
    worst: Cell<f64>,
}

impl Inner {
    fn take(&self, r: Result<Estimate>) -> f64 {
        match r {
            Ok(e) => {
                self.worst.set(self.worst.get().max(e.rel_error()));
                e.value
            }
            Err(err) => {
                self.failure.borrow_mut().get_or_insert(err);
                0.0
            }
        }
    }

    fn finish(self, outer: Estimate) -> Result<Estimate> {
        if let Some(e) = self.failure.into_inner() {
            return Err(e);
        }
        Ok(Estimate::new(
            outer.value,
            outer.error + self.worst.get() * outer.value.abs(),
        ))
    }
}

/// `∫_0^t dg ∫_ℝ sin²(g|ξ|^{κ/2}) |ξ|^{1−2H−κ} dξ`.
fn first_order(t: f64, p: &ValidatedParams, q: &QuadratureSpec) -> Result<Estimate> {
    let k = p.kappa();
    let c = (2.0 / k) * (2.0 - 2.0 * p.h()) - 3.0;
    let inner = |g: f64| -> Result<Estimate> {
        // ξ = v^{2/κ} on each half line
        let x = q.frequency_cutoff / g;
        let edges = quad::panel_edges(1.0 / g, x, 0.5 * std::f64::consts::PI / g);
        let body = quad::integrate(
            |v: f64| (g * v).sin().powi(2) * v.powf(c),
            &edges,
            0.0,
            1e-10,
            q.max_subdivisions,
        )?;
        let tail = quad::tails(
            &[TrigPower::power(0.5, -c), TrigPower::cos(-0.5, 2.0 * g, -c)],
            x,
            q.tail_policy,
        )?;
        Ok((body + tail) * (4.0 / k))
    };
    let state = Inner::default();
    let mut edges = vec![0.0];
    edges.extend(quad::geometric_edges(t * 1e-12, t, 4.0));
    let outer = quad::integrate_best(
        |g| state.take(inner(g)),
        &edges,
        0.0,
        0.1 * q.tolerance,
        q.max_subdivisions,
    );
    state.finish(outer.estimate)
}

/// Second chaos: closed-form time factor, then a 2-d frequency integral folded onto
/// `η₁ > 0, η₂ > 0` with analytic tails in both directions.
fn second_order(t: f64, p: &ValidatedParams, q: &QuadratureSpec) -> Result<Estimate> {
    let (k, h) = (p.kappa(), p.h());
    let r = 1.0 - 2.0 * h;
    let sigma = t.powf(-2.0 / k);
    let omega = |eta: f64| eta.powf(0.5 * k);

    // ∫_0^∞ η^{−κ} T(∞, ω(η)) dη
    let c0 = {
        let x = 1e4 * sigma;
        let mut edges = vec![0.0];
        edges.extend(quad::geometric_edges(1e-8 * sigma, x, 2.0));
        let body = quad::integrate(
            |e: f64| e.powf(-k) * simplex_sine_sq_limit(t, omega(e)),
            &edges,
            0.0,
            1e-11,
            q.max_subdivisions,
        )?;
        let osc = x.powf(1.0 - 2.0 * k) / (16.0 * (2.0 * k - 1.0));
        body + Estimate::new(0.125 * t * t * x.powf(1.0 - k) / (k - 1.0) - osc, osc)
    };

    let inner = |e1: f64| -> Result<Estimate> {
        let w1 = omega(e1);
        let x = (8.0 * e1).max(1e3 * sigma);
        let mut edges: Vec<f64> = quad::geometric_edges(1e-8 * sigma, x, 2.0);
        for j in 1..=40 {
            let d = e1 * 0.5f64.powi(j);
            edges.push(e1 - d);
            edges.push(e1 + d);
        }
        edges.push(e1);
        edges.push(0.0);
        edges.retain(|&v| v <= x);
        edges.sort_by(f64::total_cmp);
        edges.dedup();
        let f = |e2: f64| {
            let s = (e2 - e1).abs().powf(r) + (e2 + e1).powf(r);
            e2.powf(-k) * s * simplex_sine_sq(t, w1, omega(e2))
        };
        let body = quad::integrate(f, &edges, 0.0, 1e-9, q.max_subdivisions)?;
        let t_inf = simplex_sine_sq_limit(t, w1);
        let mut tail = 0.0;
        for j in 0..6 {
            let m = 2 * j;
            tail += binomial(r, m) * e1.powi(m as i32) * x.powf(2.0 - 2.0 * h - k - m as f64)
                / (k + 2.0 * h + m as f64 - 2.0);
        }
        tail *= 2.0 * t_inf;
        // |T − T(∞)| ≤ [min(1, (tω₁)²) + min(tω₁, (tω₁)²)] / (8ω₂²)
        let tw = t * w1;
        let dev = (tw * tw).min(1.0) + tw.min(tw * tw);
        let err = dev / 8.0 * 2.0 * 1.125f64.powf(r) * x.powf(2.0 - 2.0 * h - 2.0 * k)
            / (2.0 * k + 2.0 * h - 2.0);
        Ok(body + Estimate::new(tail, err))
    };

    let state = Inner::default();
    let xi = 1e4 * sigma;
    let mut edges = vec![0.0];
    edges.extend(quad::geometric_edges(1e-8 * sigma, xi, 2.0));
    let outer = quad::integrate_best(
        |e1| e1.powf(r - k) * state.take(inner(e1)),
        &edges,
        0.0,
        0.1 * q.tolerance.max(1e-7),
        q.max_subdivisions,
    );
    let body = state.finish(outer.estimate)? * 2.0;

    let lead = 4.0 * c0.value * xi.powf(3.0 - 4.0 * h - k) / (k + 4.0 * h - 3.0);
    let lead_err = 4.0 * c0.error * xi.powf(3.0 - 4.0 * h - k) / (k + 4.0 * h - 3.0);
    let d = inner(xi)?.value - 2.0 * xi.powf(r) * c0.value;
    let corr = 2.0 * d * xi.powf(2.0 - 2.0 * h - k) / (2.0 * k + 4.0 * h - 4.0);
    Ok(body + Estimate::new(lead + corr, lead_err + corr.abs()))
}

/// Tail exponent of the frequency proposal.
fn proposal_exponent(n: usize, k: f64, h: f64) -> f64 {
    let room = if n == 1 {
        2.0 * k + 4.0 * h - 4.0
    } else {
        2.0 * k - 6.0 + 8.0 * h
    };
    (0.5 * room).clamp(0.02, 1.0)
}

/// Ordered-simplex times and heavy-tailed frequency draws; error is three standard errors.
pub fn chaos_norm_white_mc(
    n: usize,
    t: f64,
    p: &ValidatedParams,
    mc: &McConfig,
) -> Result<ChaosOrderResult> {
    p.require_white_wave()?;
    check_order(n, t)?;
    if t == 0.0 {
        return Ok(ChaosOrderResult {
            order: n,
            value: 0.0,
            error_estimate: 0.0,
            method: NormMethod::MonteCarlo,
        });
    }
    let (k, h) = (p.kappa(), p.h());
    let nu = proposal_exponent(n, k, h);
    let sigma = t.powf(-2.0 / k);
    let ln_scale = n as f64 * t.ln() - ln_factorial(n);
    let ln_norm = (nu / (2.0 * sigma)).ln();
    let est = mc_mean(mc, |rng| {
        let mut s = Vec::with_capacity(n);
        ordered_times(rng, n, t, &mut s);
        let mut eta = [0.0f64; MAX_NUMERIC_ORDER];
        let mut ln_w = ln_scale;
        let mut f = 1.0;
        for j in 0..n {
            let u: f64 = 1.0 - rng.random::<f64>();
            let a = sigma * (u.powf(-1.0 / nu) - 1.0);
            let e = if rng.random::<bool>() { a } else { -a };
            eta[j] = e;
            ln_w -= ln_norm - (1.0 + nu) * (a / sigma).ln_1p();
            let gap = if j + 1 < n { s[j + 1] - s[j] } else { t - s[j] };
            let g = green_hat_omega(gap, a.powf(0.5 * k));
            f *= g * g;
        }
        f * increment_weight(&eta[..n], h) * ln_w.exp()
    });
    Ok(ChaosOrderResult {
        order: n,
        value: est.mean,
        error_estimate: 3.0 * est.std_error,
        method: NormMethod::MonteCarlo,
    })
}
