//! Explicit upper bound on `n!‖gₙ‖²` built from the index set and simplex integrals.

use serde::{Deserialize, Serialize};

use super::alpha::{alpha_index_set, beta_entry, beta_total, log_alpha_sum};
use crate::error::{Error, Result};
use crate::params::ValidatedParams;
use crate::quad::{self, Estimate, QuadratureSpec, TrigPower};
use crate::special::{ln_factorial, ln_gamma, log_sum_exp};

/// Exponent `e` in `∫ sin²(η)/η² |η|^e dη` for the entry `a`.
pub fn j_exponent(a: u8, kappa: f64, h: f64) -> f64 {
    (2.0 / kappa) * a as f64 * (1.0 - 2.0 * h) + 2.0 / kappa - 1.0
}

/// `∫_ℝ sin²(η)/η² · |η|^{(2/κ)a(1−2H)+2/κ−1} dη`.
pub fn j_integral(a: u8, p: &ValidatedParams, q: &QuadratureSpec) -> Result<Estimate> {
    q.validate()?;
    let e = j_exponent(a, p.kappa(), p.h());
    if !(e > -1.0 && e < 1.0) {
        return Err(Error::Divergent(format!(
            "sin^2(x) x^{} is not integrable on the half line",
            e - 2.0
        )));
    }
    sine_sq_power(e, q).map(|v| v * 2.0)
}

/// `∫_0^∞ sin²(v) v^{e−2} dv` for `e ∈ (−1, 1)`.
pub(crate) fn sine_sq_power(e: f64, q: &QuadratureSpec) -> Result<Estimate> {
    let p = 2.0 - e;
    let f = |v: f64| {
        let s = crate::special::sinc(v);
        s * s * v.powf(e)
    };
    let x = q.frequency_cutoff;
    let edges = quad::panel_edges(1.0, x, 0.5 * std::f64::consts::PI);
    let body = quad::integrate(f, &edges, 0.0, 0.1 * q.tolerance, q.max_subdivisions)?;
    // sin² v = ½ − ½ cos 2v
    let tail = quad::tails(
        &[TrigPower::power(0.5, p), TrigPower::cos(-0.5, 2.0, p)],
        x,
        q.tail_policy,
    )?;
    let total = body + tail;
    if total.error > q.tolerance * total.value.abs() {
        return Err(Error::Accuracy {
            value: total.value,
            error: total.error,
        });
    }
    Ok(total)
}

/// Upper-bound terms with the three `J` constants evaluated once.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UpperBound {
    pub params: ValidatedParams,
    pub j: [f64; 3],
    pub j_error: [f64; 3],
}

impl UpperBound {
    pub fn new(p: &ValidatedParams, q: &QuadratureSpec) -> Result<Self> {
        p.require_wave()?;
        let mut j = [0.0; 3];
        let mut j_error = [0.0; 3];
        for a in 0..3u8 {
            let e = j_integral(a, p, q)?;
            j[a as usize] = e.value;
            j_error[a as usize] = e.error;
        }
        Ok(UpperBound {
            params: *p,
            j,
            j_error,
        })
    }

    fn log_weights(&self) -> [f64; 3] {
        let h0 = self.params.h0();
        let mut lw = [0.0; 3];
        for a in 0..3u8 {
            let b = beta_entry(a, &self.params);
            lw[a as usize] = self.j[a as usize].ln() / (2.0 * h0) + ln_gamma(1.0 + b);
        }
        lw
    }

    fn assemble(&self, n: usize, t: f64, log_alpha: f64) -> f64 {
        let p = &self.params;
        let (k, h0) = (p.kappa(), p.h0());
        let nf = n as f64;
        let beta = beta_total(n, p);
        let inner = nf / (2.0 * h0) * (2.0 / k).ln() + log_alpha + (nf + beta) * t.ln()
            - ln_gamma(nf + 1.0 + beta);
        (2.0 * h0 - 1.0) * ln_factorial(n) + 2.0 * h0 * inner
    }

    /// Natural log of the order-`n` bound; `-inf` at `t = 0`.
    pub fn ln_term(&self, n: usize, t: f64) -> f64 {
        assert!(n >= 1);
        if t == 0.0 {
            return f64::NEG_INFINITY;
        }
        self.assemble(n, t, log_alpha_sum(n, &self.log_weights()))
    }

    pub fn term(&self, n: usize, t: f64) -> f64 {
        self.ln_term(n, t).exp()
    }

    /// The same bound summed over an explicit enumeration of the index set.
    pub fn ln_term_enumerated(&self, n: usize, t: f64) -> Result<f64> {
        if t == 0.0 {
            return Ok(f64::NEG_INFINITY);
        }
        let lw = self.log_weights();
        let logs: Vec<f64> = alpha_index_set(n)?
            .iter()
            .map(|a| a.entries().iter().map(|&e| lw[e as usize]).sum())
            .collect();
        Ok(self.assemble(n, t, log_sum_exp(&logs)))
    }
}

/// Explicit bound on `n!‖gₙ(·,t,x)‖²` with default quadrature for the constants.
pub fn chaos_norm_upper_bound(n: usize, t: f64, p: &ValidatedParams) -> Result<f64> {
    if n == 0 {
        return Ok(1.0);
    }
    Ok(UpperBound::new(p, &QuadratureSpec::default())?.term(n, t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{validate_params, ModelParams};
    use std::f64::consts::PI;

    #[test]
    fn j_at_zero_entry_is_pi_for_wave() {
        let p = validate_params(ModelParams::white(2.0, 0.3)).unwrap();
        let j = j_integral(0, &p, &QuadratureSpec::default()).unwrap();
        assert!((j.value - PI).abs() < 1e-8, "{j:?}");
    }

    #[test]
    fn j_endpoint_diverges() {
        let p = validate_params(ModelParams::white(2.0, 0.25)).unwrap();
        assert!(matches!(
            j_integral(2, &p, &QuadratureSpec::default()),
            Err(Error::Divergent(_))
        ));
    }

    #[test]
    fn enumeration_agrees_with_recursion() {
        let p = validate_params(ModelParams::colored(1.9, 0.35, 0.7)).unwrap();
        let b = UpperBound::new(&p, &QuadratureSpec::default()).unwrap();
        for n in 1..=10 {
            let a = b.ln_term(n, 1.7);
            let e = b.ln_term_enumerated(n, 1.7).unwrap();
            assert!((a - e).abs() < 1e-12 * a.abs().max(1.0), "n={n}");
        }
    }

    #[test]
    fn zero_horizon_vanishes() {
        let p = validate_params(ModelParams::white(2.0, 0.3)).unwrap();
        assert_eq!(chaos_norm_upper_bound(3, 0.0, &p).unwrap(), 0.0);
    }
}
