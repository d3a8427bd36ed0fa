//! Log-gamma helpers and compensated sums.

use statrs::function::gamma;

pub fn ln_gamma(x: f64) -> f64 {
    gamma::ln_gamma(x)
}

pub fn gamma(x: f64) -> f64 {
    gamma::gamma(x)
}

pub fn ln_factorial(n: usize) -> f64 {
    ln_gamma(n as f64 + 1.0)
}

pub fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

/// `ln(Σ exp(x_i))`, `-inf` for an empty or all `-inf` input.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    if m == f64::INFINITY {
        return m;
    }
    let mut acc = Neumaier::default();
    for &x in xs {
        acc.add((x - m).exp());
    }
    m + acc.sum().ln()
}

pub fn log_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// Kahan-Babuska-Neumaier running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn sum(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for Neumaier {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Neumaier::default();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

pub fn neumaier_sum(xs: impl IntoIterator<Item = f64>) -> f64 {
    xs.into_iter().collect::<Neumaier>().sum()
}

/// Generalized binomial coefficient `C(a, k)`.
pub fn binomial(a: f64, k: usize) -> f64 {
    let mut c = 1.0;
    for j in 0..k {
        c *= (a - j as f64) / (j as f64 + 1.0);
    }
    c
}

pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// `1 - cos x` without cancellation.
pub fn one_minus_cos(x: f64) -> f64 {
    let s = (0.5 * x).sin();
    2.0 * s * s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_sum_exp_matches_direct_sum() {
        let xs = [0.1, -2.0, 3.5, 1.0];
        let direct: f64 = xs.iter().map(|x: &f64| x.exp()).sum::<f64>().ln();
        assert!((log_sum_exp(&xs) - direct).abs() < 1e-14);
        assert_eq!(log_sum_exp(&[]), f64::NEG_INFINITY);
        assert!((log_sum_exp(&[1000.0, 1000.0]) - (1000.0 + 2f64.ln())).abs() < 1e-12);
    }

    #[test]
    fn neumaier_recovers_cancelled_terms() {
        let s = neumaier_sum([1.0, 1e100, 1.0, -1e100]);
        assert_eq!(s, 2.0);
    }

    #[test]
    fn binomial_small_cases() {
        assert_eq!(binomial(5.0, 2), 10.0);
        assert!((binomial(0.5, 2) + 0.125).abs() < 1e-15);
        assert_eq!(binomial(0.4, 0), 1.0);
    }

    #[test]
    fn one_minus_cos_is_accurate_for_tiny_arguments() {
        let x: f64 = 1e-9;
        assert!((one_minus_cos(x) / (x * x / 2.0) - 1.0).abs() < 1e-12);
        assert!((one_minus_cos(2.0) - (1.0 - 2f64.cos())).abs() < 1e-15);
    }

    #[test]
    fn ln_beta_symmetric_value() {
        // B(2, 3) = 1/12
        assert!((ln_beta(2.0, 3.0).exp() - 1.0 / 12.0).abs() < 1e-14);
    }
}
