//! Fourier symbol of the fractional wave Green's function and the classical 1-d kernel.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreenSymbol {
    pub t: f64,
    pub kappa: f64,
}

impl GreenSymbol {
    pub fn eval(&self, xi: f64) -> f64 {
        green_hat(self.t, xi, self.kappa)
    }
}

/// `sin(t|ξ|^{κ/2}) / |ξ|^{κ/2}`, with the limit `t` at `ξ = 0`.
pub fn green_hat(t: f64, xi: f64, kappa: f64) -> f64 {
    green_hat_omega(t, xi.abs().powf(0.5 * kappa))
}

/// Same symbol written in terms of `ω = |ξ|^{κ/2}`.
pub fn green_hat_omega(t: f64, omega: f64) -> f64 {
    let x = t * omega;
    if x < 1e-4 {
        let x2 = x * x;
        t * (1.0 - x2 / 6.0 + x2 * x2 / 120.0)
    } else {
        x.sin() / omega
    }
}

/// `½·1{|x| < t}`.
pub fn green_wave_1d(t: f64, x: f64) -> f64 {
    if x.abs() < t {
        0.5
    } else {
        0.0
    }
}
