//! Adaptive Gauss-Kronrod quadrature and analytic tails of `cos(ωv+φ)·v^{-p}`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;
use std::ops::{Add, AddAssign, Mul};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

impl Estimate {
    pub fn new(value: f64, error: f64) -> Self {
        Estimate { value, error }
    }

    pub fn exact(value: f64) -> Self {
        Estimate { value, error: 0.0 }
    }

    pub fn rel_error(&self) -> f64 {
        if self.value == 0.0 {
            if self.error == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            self.error / self.value.abs()
        }
    }
}

impl Add for Estimate {
    type Output = Estimate;
    fn add(self, o: Estimate) -> Estimate {
        Estimate::new(self.value + o.value, self.error + o.error)
    }
}

impl AddAssign for Estimate {
    fn add_assign(&mut self, o: Estimate) {
        self.value += o.value;
        self.error += o.error;
    }
}

impl Mul<f64> for Estimate {
    type Output = Estimate;
    fn mul(self, k: f64) -> Estimate {
        Estimate::new(self.value * k, self.error * k.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TailPolicy {
    /// Tail replaced by zero, error bounded by the first integration-by-parts envelope.
    Envelope,
    /// Tail evaluated by its asymptotic expansion with a remainder bound.
    PowerExtrapolate,
}

impl std::str::FromStr for TailPolicy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "envelope" => Ok(TailPolicy::Envelope),
            "power_extrapolate" | "powerextrapolate" | "extrapolate" => {
                Ok(TailPolicy::PowerExtrapolate)
            }
            other => Err(Error::Input(format!("unknown tail policy `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    /// Relative tolerance.
    pub tolerance: f64,
    pub max_subdivisions: usize,
    /// Radians of the slowest oscillation covered numerically before a tail takes over.
    pub frequency_cutoff: f64,
    pub tail_policy: TailPolicy,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            tolerance: 1e-8,
            max_subdivisions: 200_000,
            frequency_cutoff: 200.0,
            tail_policy: TailPolicy::PowerExtrapolate,
        }
    }
}

impl QuadratureSpec {
    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0 && self.tolerance <= 1e-2) {
            return Err(domain("tolerance", self.tolerance, "(0, 1e-2]"));
        }
        if !(self.frequency_cutoff > 0.0 && self.frequency_cutoff.is_finite()) {
            return Err(domain("frequency_cutoff", self.frequency_cutoff, "(0, inf)"));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::Input("max_subdivisions must be positive".into()));
        }
        Ok(())
    }
}

const XGK: [f64; 11] = [
    0.995_657_163_025_808_1,
    0.973_906_528_517_171_7,
    0.930_157_491_355_708_2,
    0.865_063_366_688_984_5,
    0.780_817_726_586_416_9,
    0.679_409_568_299_024_4,
    0.562_757_134_668_604_7,
    0.433_395_394_129_247_2,
    0.294_392_862_701_460_2,
    0.148_874_338_981_631_2,
    0.0,
];
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874,
    0.032_558_162_307_964_73,
    0.054_755_896_574_352,
    0.075_039_674_810_919_95,
    0.093_125_454_583_697_6,
    0.109_387_158_802_297_64,
    0.123_491_976_262_065_85,
    0.134_709_217_311_473_33,
    0.142_775_938_577_060_08,
    0.147_739_104_901_338_5,
    0.149_445_554_002_916_9,
];
const WG: [f64; 5] = [
    0.066_671_344_308_688_14,
    0.149_451_349_150_580_6,
    0.219_086_362_515_982_04,
    0.269_266_719_309_996_35,
    0.295_524_224_714_752_87,
];

fn gk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = WGK[10] * fc;
    let mut gauss = 0.0;
    let mut absk = WGK[10] * fc.abs();
    for j in 0..10 {
        let dx = h * XGK[j];
        let f1 = f(c - dx);
        let f2 = f(c + dx);
        kron += WGK[j] * (f1 + f2);
        absk += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let value = kron * h;
    let err = ((kron - gauss) * h).abs();
    let floor = 50.0 * f64::EPSILON * absk * h.abs();
    (value, err.max(floor))
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Segment {
    fn cmp(&self, o: &Self) -> Ordering {
        self.error
            .total_cmp(&o.error)
            .then_with(|| o.a.total_cmp(&self.a))
    }
}

/// Outcome of a best-effort adaptive run.
#[derive(Debug, Clone, Copy)]
pub struct Adaptive {
    pub estimate: Estimate,
    pub converged: bool,
    pub subdivisions: usize,
}

/// Globally adaptive GK21 over consecutive `edges`. Never fails; reports convergence.
pub fn integrate_best<F: Fn(f64) -> f64>(
    f: F,
    edges: &[f64],
    abs_tol: f64,
    rel_tol: f64,
    max_subdivisions: usize,
) -> Adaptive {
    let mut heap = BinaryHeap::with_capacity(edges.len() * 2);
    let mut frozen = Vec::new();
    for w in edges.windows(2) {
        if w[1] > w[0] {
            let (value, error) = gk21(&f, w[0], w[1]);
            heap.push(Segment {
                a: w[0],
                b: w[1],
                value,
                error,
            });
        }
    }
    let totals = |heap: &BinaryHeap<Segment>, frozen: &[Segment]| {
        let mut v = crate::special::Neumaier::default();
        let mut e = crate::special::Neumaier::default();
        let mut mag = 0.0;
        for s in heap.iter().chain(frozen.iter()) {
            v.add(s.value);
            e.add(s.error);
            mag += s.value.abs();
        }
        (v.sum(), e.sum(), mag)
    };
    // errors at the roundoff floor cannot be reduced further
    let target = |total: f64, mag: f64| abs_tol.max(rel_tol * total.abs()).max(100.0 * f64::EPSILON * mag);
    let (mut total, mut err, mut mag) = totals(&heap, &frozen);
    let mut subdivisions = 0;
    let mut since_resum = 0;
    loop {
        if !total.is_finite() || !err.is_finite() {
            break;
        }
        if err <= target(total, mag) {
            let (t, e, m) = totals(&heap, &frozen);
            total = t;
            err = e;
            mag = m;
            if err <= target(total, mag) {
                return Adaptive {
                    estimate: Estimate::new(total, err),
                    converged: true,
                    subdivisions,
                };
            }
        }
        if subdivisions >= max_subdivisions {
            break;
        }
        let Some(seg) = heap.pop() else { break };
        let mid = 0.5 * (seg.a + seg.b);
        if !(mid > seg.a && mid < seg.b) || (seg.b - seg.a) < 1e-14 * mid.abs() {
            frozen.push(seg);
            continue;
        }
        let (v1, e1) = gk21(&f, seg.a, mid);
        let (v2, e2) = gk21(&f, mid, seg.b);
        total += v1 + v2 - seg.value;
        err += e1 + e2 - seg.error;
        heap.push(Segment {
            a: seg.a,
            b: mid,
            value: v1,
            error: e1,
        });
        heap.push(Segment {
            a: mid,
            b: seg.b,
            value: v2,
            error: e2,
        });
        subdivisions += 1;
        since_resum += 1;
        if since_resum >= 256 {
            let (t, e, m) = totals(&heap, &frozen);
            total = t;
            err = e;
            mag = m;
            since_resum = 0;
        }
    }
    let (total, err, mag) = totals(&heap, &frozen);
    let converged = err <= target(total, mag);
    Adaptive {
        estimate: Estimate::new(total, err),
        converged,
        subdivisions,
    }
}

/// Adaptive GK21; an accuracy error carries the achieved estimate when tolerance is missed.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    edges: &[f64],
    abs_tol: f64,
    rel_tol: f64,
    max_subdivisions: usize,
) -> Result<Estimate> {
    let run = integrate_best(f, edges, abs_tol, rel_tol, max_subdivisions);
    if run.converged {
        Ok(run.estimate)
    } else {
        Err(Error::Accuracy {
            value: run.estimate.value,
            error: run.estimate.error,
        })
    }
}

/// Points `lo, lo·r, lo·r², …` closed by `hi`.
pub fn geometric_edges(lo: f64, hi: f64, ratio: f64) -> Vec<f64> {
    assert!(lo > 0.0 && ratio > 1.0);
    let mut out = vec![lo];
    let mut x = lo;
    while x * ratio < hi {
        x *= ratio;
        out.push(x);
    }
    if hi > lo {
        out.push(hi);
    }
    out
}

/// Edges for `[0, hi]`: geometric refinement toward 0 from `knee`, then panels of at most `step`.
pub fn panel_edges(knee: f64, hi: f64, step: f64) -> Vec<f64> {
    let knee = knee.min(hi);
    let mut out = vec![0.0];
    out.extend(geometric_edges(knee * 1e-12, knee, 4.0));
    let mut x = knee;
    let n = ((hi - knee) / step).ceil().max(0.0) as usize;
    for k in 1..=n {
        let next = knee + (hi - knee) * k as f64 / n as f64;
        if next > x {
            out.push(next);
            x = next;
        }
    }
    out
}

/// A tail summand `coeff · cos(omega·v + phase) · v^{-power}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrigPower {
    pub coeff: f64,
    pub omega: f64,
    pub phase: f64,
    pub power: f64,
}

impl TrigPower {
    pub fn power(coeff: f64, power: f64) -> Self {
        TrigPower {
            coeff,
            omega: 0.0,
            phase: 0.0,
            power,
        }
    }

    pub fn cos(coeff: f64, omega: f64, power: f64) -> Self {
        TrigPower {
            coeff,
            omega,
            phase: 0.0,
            power,
        }
    }

    pub fn sin(coeff: f64, omega: f64, power: f64) -> Self {
        TrigPower {
            coeff,
            omega,
            phase: -0.5 * PI,
            power,
        }
    }

    pub fn eval(&self, v: f64) -> f64 {
        self.coeff * (self.omega * v + self.phase).cos() * v.powf(-self.power)
    }
}

/// Switch-over point (in radians) from numeric to asymptotic evaluation of a tail.
const ASYMPTOTIC_START: f64 = 40.0;

/// `∫_x^∞ term(v) dv` for `x > 0`.
pub fn trig_power_tail(term: &TrigPower, x: f64, policy: TailPolicy) -> Result<Estimate> {
    if term.coeff == 0.0 {
        return Ok(Estimate::exact(0.0));
    }
    let p = term.power;
    if term.omega == 0.0 {
        if p <= 1.0 {
            return Err(Error::Divergent(format!(
                "power tail v^-{p} is not integrable at infinity"
            )));
        }
        let v = term.coeff * term.phase.cos() * x.powf(1.0 - p) / (p - 1.0);
        return Ok(Estimate::exact(v));
    }
    if p <= 0.0 {
        return Err(Error::Divergent(format!(
            "oscillatory tail with v^-{p} has no limit"
        )));
    }
    let w = term.omega.abs();
    let phase = if term.omega < 0.0 { -term.phase } else { term.phase };
    match policy {
        TailPolicy::Envelope => Ok(Estimate::new(
            0.0,
            term.coeff.abs() * 2.0 * x.powf(-p) / w,
        )),
        TailPolicy::PowerExtrapolate => {
            let mut acc = Estimate::exact(0.0);
            let mut start = x;
            if w * x < ASYMPTOTIC_START {
                let end = ASYMPTOTIC_START / w;
                let f = |v: f64| (w * v + phase).cos() * v.powf(-p);
                let mut edges = geometric_edges(x, (1.0 / w).max(x), 2.0);
                let last = *edges.last().unwrap();
                let n = ((end - last) / (0.5 * PI / w)).ceil() as usize;
                for k in 1..=n {
                    edges.push(last + (end - last) * k as f64 / n as f64);
                }
                let run = integrate_best(f, &edges, 0.0, 1e-13, 20_000);
                let scale = x.powf(-p) / w;
                acc += Estimate::new(run.estimate.value, run.estimate.error.max(1e-15 * scale));
                start = end;
            }
            acc += asymptotic_tail(w, phase, p, start);
            Ok(acc * term.coeff)
        }
    }
}

/// Asymptotic expansion of `∫_X^∞ cos(ωv+φ) v^{-p} dv` with a rigorous remainder.
fn asymptotic_tail(w: f64, phase: f64, p: f64, x: f64) -> Estimate {
    let i_omega = Complex64::new(0.0, w);
    let mut sum = Complex64::new(0.0, 0.0);
    // magnitude of term k: (p)_k x^{-p-k} / ω^{k+1}
    let mut coef = Complex64::new(x.powf(-p), 0.0) / i_omega;
    let mut mag = x.powf(-p) / w;
    let mut k = 0usize;
    loop {
        sum += coef;
        let ratio = (p + k as f64) / (w * x);
        let next_mag = mag * ratio;
        if ratio > 0.5 || next_mag < 1e-18 * sum.norm() || k >= 60 {
            let remainder = 2.0 * next_mag;
            let value = -(Complex64::from_polar(1.0, w * x + phase) * sum).re;
            return Estimate::new(value, remainder);
        }
        coef = coef * (p + k as f64) / (x * i_omega);
        mag = next_mag;
        k += 1;
    }
}

/// Sum of tails for a list of terms.
pub fn tails(terms: &[TrigPower], x: f64, policy: TailPolicy) -> Result<Estimate> {
    let mut acc = Estimate::exact(0.0);
    for t in terms {
        acc += trig_power_tail(t, x, policy)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let e = integrate(|x| 3.0 * x * x, &[0.0, 2.0], 1e-14, 1e-14, 10).unwrap();
        assert!((e.value - 8.0).abs() < 1e-13);
    }

    #[test]
    fn endpoint_singularity_converges() {
        // ∫_0^1 x^{-0.7} dx = 1/0.3
        let e = integrate(|x: f64| x.powf(-0.7), &[0.0, 1.0], 0.0, 1e-10, 5000).unwrap();
        assert!((e.value - 1.0 / 0.3).abs() < 1e-8, "{e:?}");
    }

    #[test]
    fn reports_failure_when_budget_exhausted() {
        let r = integrate(|x: f64| (1.0 / x).sin(), &[1e-6, 1.0], 0.0, 1e-14, 3);
        assert!(matches!(r, Err(Error::Accuracy { .. })));
    }

    #[test]
    fn cosine_tail_matches_sine_integral() {
        // ∫_x^∞ sin(v)/v dv = π/2 - Si(x); Si(1) = 0.946083070367183
        let t = TrigPower::sin(1.0, 1.0, 1.0);
        let e = trig_power_tail(&t, 1.0, TailPolicy::PowerExtrapolate).unwrap();
        assert!((e.value - (PI / 2.0 - 0.946_083_070_367_183)).abs() < 1e-12, "{e:?}");
        assert!(e.error < 1e-10);
    }

    #[test]
    fn envelope_bounds_true_tail() {
        let t = TrigPower::cos(1.0, 3.0, 1.4);
        let exact = trig_power_tail(&t, 2.0, TailPolicy::PowerExtrapolate).unwrap();
        let env = trig_power_tail(&t, 2.0, TailPolicy::Envelope).unwrap();
        assert!(exact.value.abs() <= env.error);
    }

    #[test]
    fn pure_power_tail() {
        let e = trig_power_tail(&TrigPower::power(2.0, 3.0), 2.0, TailPolicy::Envelope).unwrap();
        assert!((e.value - 0.25).abs() < 1e-15);
        assert!(trig_power_tail(&TrigPower::power(1.0, 1.0), 1.0, TailPolicy::Envelope).is_err());
    }

    #[test]
    fn asymptotic_and_numeric_paths_agree() {
        let t = TrigPower::cos(1.0, 0.7, 0.4);
        let a = trig_power_tail(&t, 80.0, TailPolicy::PowerExtrapolate).unwrap();
        // compute by splitting at a smaller start and integrating the gap numerically
        let b = trig_power_tail(&t, 5.0, TailPolicy::PowerExtrapolate).unwrap();
        let edges: Vec<f64> = (0..=75).map(|k| 5.0 + k as f64).collect();
        let gap = integrate(|v| t.eval(v), &edges, 0.0, 1e-13, 10_000).unwrap();
        assert!((b.value - gap.value - a.value).abs() < 1e-10);
    }
}
