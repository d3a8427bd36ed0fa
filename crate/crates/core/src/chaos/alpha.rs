//! The index set generated by `x₁ ∏_{j≥2} (x_j + x_{j−1})` and the exponents it induces.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::ValidatedParams;
use crate::special::log_sum_exp;

pub const MAX_ENUMERATED_ORDER: usize = 25;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AlphaIndex(Vec<u8>);

impl AlphaIndex {
    pub fn new(entries: Vec<u8>) -> Result<Self> {
        let a = AlphaIndex(entries);
        if a.is_well_formed() {
            Ok(a)
        } else {
            Err(Error::Input(format!("{:?} is not a valid multi-index", a.0)))
        }
    }

    pub fn entries(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn is_well_formed(&self) -> bool {
        let e = &self.0;
        let n = e.len();
        if n == 0 || e.iter().any(|&a| a > 2) {
            return false;
        }
        if !(e[0] == 1 || e[0] == 2) || e[n - 1] > 1 {
            return false;
        }
        if e.iter().map(|&a| a as usize).sum::<usize>() != n {
            return false;
        }
        e.windows(2).all(|w| (1..=3).contains(&(w[0] + w[1])))
    }

    /// `∏ x_j^{α_j}`.
    pub fn monomial(&self, x: &[f64]) -> f64 {
        self.0
            .iter()
            .zip(x)
            .map(|(&a, &xi)| xi.powi(a as i32))
            .product()
    }
}

/// Expands the generating polynomial; the exponent vectors of its monomials.
pub fn alpha_index_set(n: usize) -> Result<Vec<AlphaIndex>> {
    if n == 0 {
        return Err(Error::Input("order must be at least 1".into()));
    }
    if n > MAX_ENUMERATED_ORDER {
        return Err(Error::Capacity {
            what: "order",
            value: n,
            max: MAX_ENUMERATED_ORDER,
        });
    }
    let mut first = vec![0u8; n];
    first[0] = 1;
    let mut poly: BTreeMap<Vec<u8>, u64> = BTreeMap::new();
    poly.insert(first, 1);
    for j in 1..n {
        let mut next = BTreeMap::new();
        for (mono, c) in poly {
            for k in [j, j - 1] {
                let mut m = mono.clone();
                m[k] += 1;
                *next.entry(m).or_insert(0) += c;
            }
        }
        poly = next;
    }
    debug_assert!(poly.values().all(|&c| c == 1));
    Ok(poly.into_keys().map(AlphaIndex).collect())
}

/// `ln Σ_{α} ∏_j w(α_j)` given `log_w[a] = ln w(a)`, in O(n).
///
/// Each monomial picks, for `j ≥ 2`, either `x_j` or `x_{j−1}` from the j-th factor, so
/// `α_j = [j = 1 or factor j picked x_j] + [factor j+1 picked x_j]`.
pub fn log_alpha_sum(n: usize, log_w: &[f64; 3]) -> f64 {
    assert!(n >= 1);
    // state: did factor j pick its own variable (index 1) or the previous one (index 0)
    let mut state = [f64::NEG_INFINITY, 0.0];
    for _ in 1..n {
        let mut next = [f64::NEG_INFINITY; 2];
        for (c_next, slot) in next.iter_mut().enumerate() {
            let prev_pick = usize::from(c_next == 0);
            let parts = [
                state[0] + log_w[prev_pick],
                state[1] + log_w[1 + prev_pick],
            ];
            *slot = log_sum_exp(&parts);
        }
        state = next;
    }
    log_sum_exp(&[state[0] + log_w[0], state[1] + log_w[1]])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BetaExponents {
    pub betas: Vec<f64>,
    pub total: f64,
}

/// `β(a) = (1/(2H₀))·[2 − 2/κ − (2/κ)·a·(1−2H)]`.
pub fn beta_entry(a: u8, p: &ValidatedParams) -> f64 {
    let (k, h, h0) = (p.kappa(), p.h(), p.h0());
    (2.0 - 2.0 / k - (2.0 / k) * a as f64 * (1.0 - 2.0 * h)) / (2.0 * h0)
}

/// `Σ_j β_j`, which does not depend on α: `(n/H₀)[(1−2/κ) + 2H/κ]`.
pub fn beta_total(n: usize, p: &ValidatedParams) -> f64 {
    let (k, h, h0) = (p.kappa(), p.h(), p.h0());
    n as f64 / h0 * ((1.0 - 2.0 / k) + 2.0 * h / k)
}

impl BetaExponents {
    pub fn new(alpha: &AlphaIndex, p: &ValidatedParams) -> Self {
        let betas: Vec<f64> = alpha.entries().iter().map(|&a| beta_entry(a, p)).collect();
        let total = betas.iter().sum();
        BetaExponents { betas, total }
    }
}

/// `∏_j |η_j − η_{j−1}|^{1−2H}` with `η_0 = 0`.
pub fn increment_weight(eta: &[f64], h: f64) -> f64 {
    let mut prev = 0.0;
    let mut acc = 1.0;
    for &e in eta {
        acc *= (e - prev).abs().powf(1.0 - 2.0 * h);
        prev = e;
    }
    acc
}

/// `Σ_α ∏_j |η_j|^{α_j(1−2H)}`, the pointwise majorant of [`increment_weight`].
pub fn alpha_majorant(eta: &[f64], h: f64) -> f64 {
    // x₁ ∏ (x_j + x_{j−1}) with x_j = |η_j|^{1−2H}
    let x: Vec<f64> = eta.iter().map(|e| e.abs().powf(1.0 - 2.0 * h)).collect();
    let mut acc = x[0];
    for j in 1..x.len() {
        acc *= x[j] + x[j - 1];
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{validate_params, ModelParams};

    #[test]
    fn small_sets() {
        let s1 = alpha_index_set(1).unwrap();
        assert_eq!(s1, vec![AlphaIndex(vec![1])]);
        let s2 = alpha_index_set(2).unwrap();
        assert_eq!(s2, vec![AlphaIndex(vec![1, 1]), AlphaIndex(vec![2, 0])]);
        let s3 = alpha_index_set(3).unwrap();
        assert_eq!(s3.len(), 4);
        assert!(s3.iter().all(|a| a.is_well_formed()));
    }

    #[test]
    fn capacity_and_empty() {
        assert!(matches!(alpha_index_set(26), Err(Error::Capacity { .. })));
        assert!(alpha_index_set(0).is_err());
    }

    #[test]
    fn dp_matches_enumeration() {
        let lw = [0.3_f64.ln(), 1.7_f64.ln(), 0.9_f64.ln()];
        for n in 1..=12 {
            let direct: f64 = alpha_index_set(n)
                .unwrap()
                .iter()
                .map(|a| a.entries().iter().map(|&e| lw[e as usize].exp()).product::<f64>())
                .sum();
            let dp = log_alpha_sum(n, &lw).exp();
            assert!((dp / direct - 1.0).abs() < 1e-12, "n={n}");
        }
    }

    #[test]
    fn beta_total_is_alpha_free() {
        let p = validate_params(ModelParams::colored(1.9, 0.35, 0.7)).unwrap();
        for n in 1..=6 {
            for a in alpha_index_set(n).unwrap() {
                let b = BetaExponents::new(&a, &p);
                assert!((b.total - beta_total(n, &p)).abs() < 1e-12);
                assert!(b.betas.iter().all(|&x| x > 0.0));
            }
        }
    }
}
