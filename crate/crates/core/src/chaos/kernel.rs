//! Fourier transform of the n-th chaos kernel.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::greens::green_hat;
use crate::special::ln_factorial;

/// `(1/n!) e^{−ix(ξ₁+…+ξₙ)} ∏_j Ĝ_{s_{j+1}−s_j}(ξ₁+…+ξ_j)` with `s_{n+1} = t`.
pub fn chaos_kernel_hat(
    n: usize,
    s: &[f64],
    xi: &[f64],
    t: f64,
    x: f64,
    kappa: f64,
) -> Result<Complex64> {
    if s.len() != n || xi.len() != n {
        return Err(Error::Input(format!(
            "order {n} needs {n} times and {n} frequencies, got {} and {}",
            s.len(),
            xi.len()
        )));
    }
    if n == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let ordered = s[0] > 0.0 && s.windows(2).all(|w| w[0] < w[1]) && s[n - 1] < t;
    if !ordered {
        return Err(Error::Precondition(format!(
            "times must satisfy 0 < s_1 < ... < s_n < t = {t}, got {s:?}"
        )));
    }
    let mut eta = 0.0;
    let mut prod = 1.0;
    for j in 0..n {
        eta += xi[j];
        let next = if j + 1 < n { s[j + 1] } else { t };
        prod *= green_hat(next - s[j], eta, kappa);
    }
    let scale = (-ln_factorial(n)).exp();
    Ok(Complex64::from_polar(scale * prod, -x * eta))
}

/// The same kernel at arbitrary distinct times: pairs `(s_j, ξ_j)` are sorted by time first.
pub fn chaos_kernel_hat_sorted(s: &[f64], xi: &[f64], t: f64, x: f64, kappa: f64) -> Result<Complex64> {
    if s.len() != xi.len() {
        return Err(Error::Input("times and frequencies differ in length".into()));
    }
    let mut pairs: Vec<(f64, f64)> = s.iter().copied().zip(xi.iter().copied()).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (ss, xs): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
    chaos_kernel_hat(ss.len(), &ss, &xs, t, x, kappa)
}
