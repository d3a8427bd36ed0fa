//! Spectral data of the noise: density, normalizing constant, temporal kernel.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::params::TemporalKind;
use crate::quad::{self, Estimate, QuadratureSpec, TailPolicy, TrigPower};
use crate::special::ln_gamma;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralMeasure {
    pub hurst_space: f64,
}

impl SpectralMeasure {
    pub fn density(&self, xi: f64) -> f64 {
        spectral_density(xi, self.hurst_space)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TemporalKernel {
    pub kind: TemporalKind,
    pub hurst_time: f64,
}

fn check_hurst(h: f64) -> Result<()> {
    if h > 0.0 && h < 1.0 {
        Ok(())
    } else {
        Err(domain("hurst_space", h, "(0, 1)"))
    }
}

/// `Γ(2H+1) sin(πH) / (2π)`.
pub fn c_h(h: f64) -> Result<f64> {
    check_hurst(h)?;
    Ok(ln_gamma(2.0 * h + 1.0).exp() * (PI * h).sin() / (2.0 * PI))
}

/// `|ξ|^{1-2H}`.
pub fn spectral_density(xi: f64, h: f64) -> f64 {
    let a = xi.abs();
    if a == 0.0 {
        return match (1.0 - 2.0 * h).partial_cmp(&0.0) {
            Some(std::cmp::Ordering::Greater) => 0.0,
            Some(std::cmp::Ordering::Equal) => 1.0,
            _ => f64::INFINITY,
        };
    }
    a.powf(1.0 - 2.0 * h)
}

/// `|t|^{2H₀-2}` for the colored kernel.
pub fn temporal_kernel_value(t: f64, k: &TemporalKernel) -> Result<f64> {
    match k.kind {
        TemporalKind::White => Err(Error::Unsupported(
            "white temporal noise has no pointwise kernel",
        )),
        TemporalKind::Colored => {
            if t == 0.0 {
                Err(Error::Singular("colored temporal kernel at t = 0"))
            } else {
                Ok(t.abs().powf(2.0 * k.hurst_time - 2.0))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SineIdentity {
    pub lhs: f64,
    pub rhs: f64,
    pub lhs_error: f64,
}

impl SineIdentity {
    pub fn rel_error(&self) -> f64 {
        (self.lhs - self.rhs).abs() / self.rhs.abs()
    }
}

/// `C_H ∫_ℝ sin(r|η|) sin(s|η|) |η|^{-1-2H} dη` against `¼(|r+s|^{2H} − |r−s|^{2H})`.
pub fn fbm_sine_identity(r: f64, s: f64, h: f64, q: &QuadratureSpec) -> Result<SineIdentity> {
    check_hurst(h)?;
    q.validate()?;
    if !(r > 0.0) {
        return Err(domain("r", r, "(0, inf)"));
    }
    if !(s > 0.0) {
        return Err(domain("s", s, "(0, inf)"));
    }
    let ch = c_h(h)?;
    let rhs = 0.25 * ((r + s).powf(2.0 * h) - (r - s).abs().powf(2.0 * h));
    let p = 1.0 + 2.0 * h;
    let fast = r + s;
    let slow = (r - s).abs();
    // 2 sin(rη) sin(sη) = cos((r−s)η) − cos((r+s)η)
    let f = |eta: f64| 2.0 * (r * eta).sin() * (s * eta).sin() * eta.powf(-p);
    let tail_terms = [
        TrigPower::cos(1.0, slow, p),
        TrigPower::cos(-1.0, fast, p),
    ];
    let mut x = q.frequency_cutoff / fast;
    loop {
        let edges = quad::panel_edges(1.0 / fast, x, 0.5 * PI / fast);
        let body = quad::integrate(f, &edges, 0.0, 0.1 * q.tolerance, q.max_subdivisions)?;
        let tail = quad::tails(&tail_terms, x, q.tail_policy)?;
        let total: Estimate = (body + tail) * ch;
        let budget = 0.5 * q.tolerance * rhs.abs().max(total.value.abs());
        if total.error <= budget {
            return Ok(SineIdentity {
                lhs: total.value,
                rhs,
                lhs_error: total.error,
            });
        }
        if q.tail_policy == TailPolicy::PowerExtrapolate || edges.len() > q.max_subdivisions {
            return Err(Error::Accuracy {
                value: total.value,
                error: total.error,
            });
        }
        x *= 4.0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c_h_examples() {
        assert!((c_h(0.5).unwrap() - 1.0 / (2.0 * PI)).abs() < 1e-15);
        assert!((c_h(0.25).unwrap() - 0.886_226_925_452_758 * 0.707_106_781_186_547_5 / (2.0 * PI)).abs() < 1e-12);
        assert!(c_h(0.0).is_err());
        assert!(c_h(1.0).is_err());
    }

    #[test]
    fn density_examples() {
        assert_eq!(spectral_density(1.0, 0.37), 1.0);
        assert!((spectral_density(4.0, 0.25) - 2.0).abs() < 1e-15);
        assert_eq!(spectral_density(0.0, 0.3), 0.0);
        assert_eq!(spectral_density(-4.0, 0.25), spectral_density(4.0, 0.25));
    }

    #[test]
    fn temporal_kernel_examples() {
        let k = TemporalKernel {
            kind: TemporalKind::Colored,
            hurst_time: 0.75,
        };
        assert_eq!(temporal_kernel_value(1.0, &k).unwrap(), 1.0);
        assert!((temporal_kernel_value(4.0, &k).unwrap() - 0.5).abs() < 1e-15);
        assert!((temporal_kernel_value(-4.0, &k).unwrap() - 0.5).abs() < 1e-15);
        assert!(matches!(temporal_kernel_value(0.0, &k), Err(Error::Singular(_))));
        let w = TemporalKernel {
            kind: TemporalKind::White,
            hurst_time: 0.5,
        };
        assert!(matches!(temporal_kernel_value(1.0, &w), Err(Error::Unsupported(_))));
    }

    #[test]
    fn identity_examples() {
        let q = QuadratureSpec::default();
        let a = fbm_sine_identity(1.0, 1.0, 0.3, &q).unwrap();
        assert!((a.rhs - 0.25 * 2f64.powf(0.6)).abs() < 1e-15);
        assert!(a.rel_error() < 1e-6, "{a:?}");
        let b = fbm_sine_identity(2.0, 1.0, 0.5, &q).unwrap();
        assert!((b.rhs - 0.5).abs() < 1e-15);
        assert!(b.rel_error() < 1e-6, "{b:?}");
        let c = fbm_sine_identity(1.0, 1e-9, 0.3, &q).unwrap();
        assert!(c.rhs.abs() < 1e-8);
    }

    #[test]
    fn envelope_policy_needs_longer_range_but_agrees() {
        let q = QuadratureSpec {
            tolerance: 1e-3,
            tail_policy: TailPolicy::Envelope,
            ..QuadratureSpec::default()
        };
        let a = fbm_sine_identity(2.0, 0.5, 0.45, &q).unwrap();
        assert!(a.rel_error() < 1e-3, "{a:?}");
    }
}
