//! `T(t; ω₁, ω₂) = ∫_{a,b>0, a+b<t} sin²(aω₁) sin²(bω₂) da db` in closed form.

use crate::special::{one_minus_cos, sinc};

const SMALL: f64 = 0.02;

/// Time factor of the second chaos, stable over all `ω₁, ω₂ ≥ 0`.
pub fn simplex_sine_sq(t: f64, w1: f64, w2: f64) -> f64 {
    let (x1, x2) = (w1 * t, w2 * t);
    if x1 < SMALL && x2 < SMALL {
        let (a, b) = (w1 * w1, w2 * w2);
        let t2 = t * t;
        let t6 = t2 * t2 * t2;
        return a * b * t6 / 180.0 - (a * a * b + a * b * b) * t6 * t2 / 2520.0;
    }
    if x1 < SMALL {
        return small_first(t, w1, w2);
    }
    if x2 < SMALL {
        return small_first(t, w2, w1);
    }
    let t2h = 0.5 * t * t;
    let s1 = sinc(x1);
    let s2 = sinc(x2);
    let cross = t * ((w1 + w2) * t).sin() * sinc((w1 - w2) * t) / (2.0 * (w1 + w2));
    0.25 * (t2h - t2h * s1 * s1 - t2h * s2 * s2 + cross)
}

/// `ω₁ t` small: expand `sin²(aω₁) = ω₁²a² − ω₁⁴a⁴/3 + 2ω₁⁶a⁶/45` and integrate each
/// moment `∫_0^t a^k sin²((t−a)ω₂)` exactly.
fn small_first(t: f64, w1: f64, w2: f64) -> f64 {
    let q = 2.0 * w2;
    let c = one_minus_cos(q * t);
    let (t2, t4) = (t * t, t * t * t * t);
    let i3 = t2 / (2.0 * q) - c / (q * q * q);
    let m2 = t4 / 24.0 - i3 / q;
    let i5 = t4 / (24.0 * q) - t2 / (2.0 * q * q * q) + c / (q * q * q * q * q);
    let m4 = t4 * t2 / 60.0 - 12.0 * i5 / q;
    let a = w1 * w1;
    a * m2 - a * a / 3.0 * m4
}

/// `lim_{ω₂→∞} T = (t²/8)(1 − sinc²(ω₁t))`.
pub fn simplex_sine_sq_limit(t: f64, w1: f64) -> f64 {
    let s = sinc(w1 * t);
    0.125 * t * t * (1.0 - s * s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::integrate;

    fn nested(t: f64, w1: f64, w2: f64) -> f64 {
        let inner = |a: f64| {
            let edges: Vec<f64> = (0..=40).map(|k| (t - a) * k as f64 / 40.0).collect();
            integrate(|b: f64| (b * w2).sin().powi(2), &edges, 1e-300, 1e-13, 5000)
                .unwrap()
                .value
                * (a * w1).sin().powi(2)
        };
        let edges: Vec<f64> = (0..=40).map(|k| t * k as f64 / 40.0).collect();
        integrate(inner, &edges, 1e-300, 1e-12, 5000).unwrap().value
    }

    #[test]
    fn closed_form_matches_nested_quadrature() {
        let cases = [
            (1.0, 0.3, 2.5),
            (2.0, 5.0, 7.0),
            (1.0, 0.001, 3.0),
            (1.0, 4.0, 0.015),
            (0.5, 0.01, 0.02),
            (1.0, 2.0, 2.0),
            (1.0, 2.0, 2.0000001),
            (1.0, 0.021, 0.05),
            (3.0, 0.0066, 1.0),
        ];
        for (t, w1, w2) in cases {
            let a = simplex_sine_sq(t, w1, w2);
            let b = nested(t, w1, w2);
            assert!((a - b).abs() <= 1e-7 * b.abs() + 1e-300, "{t} {w1} {w2}: {a} vs {b}");
        }
    }

    #[test]
    fn symmetric_in_frequencies() {
        for &(w1, w2) in &[(0.01, 3.0), (1.0, 2.5), (0.001, 0.003)] {
            let a = simplex_sine_sq(1.3, w1, w2);
            let b = simplex_sine_sq(1.3, w2, w1);
            assert!((a - b).abs() <= 1e-14 * a.abs());
        }
    }

    #[test]
    fn approaches_limit() {
        let a = simplex_sine_sq(1.0, 1.5, 1e7);
        let b = simplex_sine_sq_limit(1.0, 1.5);
        assert!((a - b).abs() < 1e-7);
    }
}
