//! Smooth time test functions and truncated Taylor jets.
//!
//! Pairing a cone distribution against `ψ(t)` needs derivatives of
//! `t^e ψ(t)` and of quotients like `χ(t)/t` to moderate order. Every test
//! function therefore reports its Taylor jet at a point, and the pairing code
//! composes jets instead of differentiating symbolically.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::invalid;
use crate::{Error, Result};

/// Truncated Taylor series `f(t0 + h) = Σ c[i] hⁱ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet(pub Vec<f64>);

impl Jet {
    pub fn zero(order: usize) -> Self {
        Jet(vec![0.0; order + 1])
    }

    pub fn constant(v: f64, order: usize) -> Self {
        let mut c = vec![0.0; order + 1];
        c[0] = v;
        Jet(c)
    }

    /// The identity function `t` expanded at `t0`.
    pub fn variable(t0: f64, order: usize) -> Self {
        let mut c = vec![0.0; order + 1];
        c[0] = t0;
        if order >= 1 {
            c[1] = 1.0;
        }
        Jet(c)
    }

    /// `t^b` at `t0 > 0`: generalized binomial coefficients.
    pub fn t_power(t0: f64, b: i32, order: usize) -> Self {
        let mut c = Vec::with_capacity(order + 1);
        let mut binom = 1.0;
        for i in 0..=order {
            c.push(binom * t0.powi(b - i as i32));
            binom *= (b as f64 - i as f64) / (i as f64 + 1.0);
        }
        Jet(c)
    }

    pub fn order(&self) -> usize {
        self.0.len() - 1
    }

    pub fn value(&self) -> f64 {
        self.0[0]
    }

    /// `f^{(k)}(t0)`.
    pub fn deriv(&self, k: usize) -> f64 {
        let fact: f64 = (1..=k).map(|i| i as f64).product();
        self.0.get(k).copied().unwrap_or(0.0) * fact
    }

    pub fn add(&self, other: &Jet) -> Jet {
        let n = self.0.len().min(other.0.len());
        Jet((0..n).map(|i| self.0[i] + other.0[i]).collect())
    }

    pub fn scale(&self, c: f64) -> Jet {
        Jet(self.0.iter().map(|v| v * c).collect())
    }

    pub fn mul(&self, other: &Jet) -> Jet {
        let n = self.0.len().min(other.0.len());
        let mut c = vec![0.0; n];
        for (i, ci) in c.iter_mut().enumerate() {
            *ci = (0..=i).map(|j| self.0[j] * other.0[i - j]).sum();
        }
        Jet(c)
    }

    /// `d/dt`; the order drops by one.
    pub fn diff(&self) -> Jet {
        if self.0.len() <= 1 {
            return Jet(vec![0.0]);
        }
        Jet((1..self.0.len()).map(|i| i as f64 * self.0[i]).collect())
    }

    pub fn recip(&self) -> Jet {
        let a = &self.0;
        let mut b = vec![0.0; a.len()];
        b[0] = 1.0 / a[0];
        for n in 1..a.len() {
            let s: f64 = (1..=n).map(|k| a[k] * b[n - k]).sum();
            b[n] = -s / a[0];
        }
        Jet(b)
    }

    pub fn exp(&self) -> Jet {
        let a = &self.0;
        let mut b = vec![0.0; a.len()];
        b[0] = a[0].exp();
        for n in 1..a.len() {
            let s: f64 = (1..=n).map(|k| k as f64 * a[k] * b[n - k]).sum();
            b[n] = s / n as f64;
        }
        Jet(b)
    }

    /// `f(−t)` jet from the jet of `f` at the mirrored point.
    pub fn reflect(&self) -> Jet {
        Jet(self.0.iter().enumerate().map(|(i, v)| if i % 2 == 1 { -v } else { *v }).collect())
    }
}

/// A smooth function of time with compact support, described through its
/// Taylor jets.
pub trait TimeTest: Send + Sync {
    /// Closed interval outside which the function vanishes (to all orders).
    fn support(&self) -> (f64, f64);
    /// Jet of order `order` at `t`.
    fn jet(&self, t: f64, order: usize) -> Jet;
    /// Length scale on which the function varies; used for quadrature panels.
    fn scale(&self) -> f64;

    fn value(&self, t: f64) -> f64 {
        self.jet(t, 0).value()
    }

    fn deriv(&self, k: usize, t: f64) -> f64 {
        self.jet(t, k).deriv(k)
    }

    /// Interior points where the function changes character; quadrature
    /// panels start from these.
    fn breakpoints(&self) -> Vec<f64> {
        let (lo, hi) = self.support();
        if !(lo.is_finite() && hi.is_finite()) {
            return Vec::new();
        }
        let n = ((hi - lo) / self.scale()).ceil().clamp(1.0, 32.0) as usize;
        (1..n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect()
    }
}

impl<T: TimeTest + ?Sized> TimeTest for &T {
    fn support(&self) -> (f64, f64) {
        (**self).support()
    }
    fn jet(&self, t: f64, order: usize) -> Jet {
        (**self).jet(t, order)
    }
    fn scale(&self) -> f64 {
        (**self).scale()
    }
    fn breakpoints(&self) -> Vec<f64> {
        (**self).breakpoints()
    }
}

impl<T: TimeTest + ?Sized> TimeTest for Box<T> {
    fn support(&self) -> (f64, f64) {
        (**self).support()
    }
    fn jet(&self, t: f64, order: usize) -> Jet {
        (**self).jet(t, order)
    }
    fn scale(&self) -> f64 {
        (**self).scale()
    }
    fn breakpoints(&self) -> Vec<f64> {
        (**self).breakpoints()
    }
}

/// Gaussians are cut off at this many standard deviations (`e^{−72}`).
const GAUSS_CUT: f64 = 12.0;

fn gaussian_jet(center: f64, sigma: f64, amplitude: f64, t: f64, order: usize) -> Jet {
    let d = t - center;
    let w = 1.0 / (2.0 * sigma * sigma);
    let mut a = vec![0.0; order + 1];
    a[0] = -w * d * d;
    if order >= 1 {
        a[1] = -2.0 * w * d;
    }
    if order >= 2 {
        a[2] = -w;
    }
    Jet(a).exp().scale(amplitude)
}

/// `amplitude · exp(−(t−t0)²/(2σ²))`, treated as supported on `t0 ± 12σ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPulse {
    pub t0: f64,
    pub sigma: f64,
    pub amplitude: f64,
}

impl GaussianPulse {
    pub fn new(t0: f64, sigma: f64) -> Result<Self> {
        if !(sigma > 0.0) || !t0.is_finite() {
            return Err(invalid("gaussian pulse needs sigma > 0"));
        }
        Ok(GaussianPulse { t0, sigma, amplitude: 1.0 })
    }
}

impl TimeTest for GaussianPulse {
    fn support(&self) -> (f64, f64) {
        (self.t0 - GAUSS_CUT * self.sigma, self.t0 + GAUSS_CUT * self.sigma)
    }
    fn jet(&self, t: f64, order: usize) -> Jet {
        let (lo, hi) = self.support();
        if t < lo || t > hi {
            return Jet::zero(order);
        }
        gaussian_jet(self.t0, self.sigma, self.amplitude, t, order)
    }
    fn scale(&self) -> f64 {
        self.sigma
    }
}

/// `amplitude · exp(1 − 1/(1 − z²))`, `z = (t − center)/half_width`; peak
/// value `amplitude`, support `center ± half_width`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bump {
    pub center: f64,
    pub half_width: f64,
    pub amplitude: f64,
}

impl Bump {
    pub fn new(center: f64, half_width: f64) -> Result<Self> {
        if !(half_width > 0.0) || !center.is_finite() {
            return Err(invalid("bump needs a positive half width"));
        }
        Ok(Bump { center, half_width, amplitude: 1.0 })
    }
}

impl TimeTest for Bump {
    fn support(&self) -> (f64, f64) {
        (self.center - self.half_width, self.center + self.half_width)
    }
    fn jet(&self, t: f64, order: usize) -> Jet {
        let z0 = (t - self.center) / self.half_width;
        if !(z0.abs() < 1.0) {
            return Jet::zero(order);
        }
        let mut z = Jet::zero(order);
        z.0[0] = z0;
        if order >= 1 {
            z.0[1] = 1.0 / self.half_width;
        }
        let one_minus = Jet::constant(1.0, order).add(&z.mul(&z).scale(-1.0));
        let expo = Jet::constant(1.0, order).add(&one_minus.recip().scale(-1.0));
        // exp(−1/(1−z²)) underflows well before the edge; the jet is zero there.
        if expo.value() < -700.0 {
            return Jet::zero(order);
        }
        expo.exp().scale(self.amplitude)
    }
    fn scale(&self) -> f64 {
        self.half_width / 4.0
    }
}

/// Jet of the smooth step `R(x) = f(x)/(f(x) + f(1−x))`, `f(x) = e^{−1/x}`,
/// where `x` is itself given as a jet.
fn smooth_step(x: &Jet) -> Jet {
    let order = x.order();
    let x0 = x.value();
    if x0 <= 0.0 {
        return Jet::zero(order);
    }
    if x0 >= 1.0 {
        return Jet::constant(1.0, order);
    }
    let f = |v: &Jet| {
        if v.value() < 1.0 / 700.0 {
            Jet::zero(order)
        } else {
            v.recip().scale(-1.0).exp()
        }
    };
    let a = f(x);
    let b = f(&Jet::constant(1.0, order).add(&x.scale(-1.0)));
    a.mul(&a.add(&b).recip())
}

/// `C^∞` ramp from 0 at `t = 0` to 1 at `t = eps`: a mollified Heaviside step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RampStep {
    pub eps: f64,
}

impl RampStep {
    pub fn new(eps: f64) -> Result<Self> {
        if !(eps > 0.0) {
            return Err(invalid("ramp width must be positive"));
        }
        Ok(RampStep { eps })
    }
}

impl TimeTest for RampStep {
    fn support(&self) -> (f64, f64) {
        (0.0, f64::INFINITY)
    }
    fn jet(&self, t: f64, order: usize) -> Jet {
        smooth_step(&Jet::variable(t / self.eps, order).scale_derivs(1.0 / self.eps))
    }
    fn scale(&self) -> f64 {
        self.eps
    }
    fn breakpoints(&self) -> Vec<f64> {
        alloc::vec![0.0, 0.5 * self.eps, self.eps]
    }
}

impl Jet {
    /// Rescale the linear coefficient chain: jet of `x(t)` with `dx/dt = c`.
    fn scale_derivs(mut self, c: f64) -> Jet {
        let mut f = 1.0;
        for v in self.0.iter_mut().skip(1) {
            f *= c;
            *v *= f;
        }
        self
    }
}

/// Sum of Gaussians `Σ wᵢ vᵢ N(t; tᵢ, σ)` approximating sampled time data,
/// with trapezoid weights and `σ` equal to the sample spacing.
#[derive(Debug, Clone, PartialEq)]
pub struct Mollified {
    times: Vec<f64>,
    weights: Vec<f64>,
    sigma: f64,
}

impl Mollified {
    pub fn new(times: &[f64], values: &[f64]) -> Result<Self> {
        if times.len() < 2 || times.len() != values.len() {
            return Err(invalid("sampled time profile needs at least two samples"));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(invalid("sample times must be strictly increasing"));
        }
        let n = times.len();
        let sigma = (times[n - 1] - times[0]) / (n - 1) as f64;
        let norm = 1.0 / (sigma * (2.0 * core::f64::consts::PI).sqrt());
        let weights = (0..n)
            .map(|i| {
                let left = if i > 0 { times[i] - times[i - 1] } else { 0.0 };
                let right = if i + 1 < n { times[i + 1] - times[i] } else { 0.0 };
                0.5 * (left + right) * values[i] * norm
            })
            .collect();
        Ok(Mollified { times: times.to_vec(), weights, sigma })
    }
}

impl TimeTest for Mollified {
    fn support(&self) -> (f64, f64) {
        let n = self.times.len();
        (self.times[0] - GAUSS_CUT * self.sigma, self.times[n - 1] + GAUSS_CUT * self.sigma)
    }
    fn jet(&self, t: f64, order: usize) -> Jet {
        let mut acc = Jet::zero(order);
        for (ti, wi) in self.times.iter().zip(&self.weights) {
            if (t - ti).abs() <= GAUSS_CUT * self.sigma && *wi != 0.0 {
                acc = acc.add(&gaussian_jet(*ti, self.sigma, *wi, t, order));
            }
        }
        acc
    }
    fn scale(&self) -> f64 {
        self.sigma
    }
}

/// `τ ↦ h(t − τ)`: the time-reversed data profile seen by a convolution at
/// time `t`.
#[derive(Debug, Clone)]
pub struct Reversed<H> {
    pub inner: H,
    pub at: f64,
}

impl<H: TimeTest> TimeTest for Reversed<H> {
    fn support(&self) -> (f64, f64) {
        let (lo, hi) = self.inner.support();
        (self.at - hi, self.at - lo)
    }
    fn jet(&self, t: f64, order: usize) -> Jet {
        self.inner.jet(self.at - t, order).reflect()
    }
    fn scale(&self) -> f64 {
        self.inner.scale()
    }
    fn breakpoints(&self) -> Vec<f64> {
        self.inner.breakpoints().iter().rev().map(|b| self.at - b).collect()
    }
}

/// `ψ(t) · R((t − lo)/(hi − lo))`: cuts `ψ` off smoothly below `lo`.
///
/// Used where the paired distribution is known to vanish below `hi`, so the
/// cutoff changes nothing but keeps the support inside `t > 0`.
#[derive(Debug, Clone)]
pub struct Windowed<H> {
    pub inner: H,
    pub lo: f64,
    pub hi: f64,
}

impl<H: TimeTest> TimeTest for Windowed<H> {
    fn support(&self) -> (f64, f64) {
        let (a, b) = self.inner.support();
        (a.max(self.lo), b)
    }
    fn jet(&self, t: f64, order: usize) -> Jet {
        let (a, b) = self.support();
        if t < a || t > b {
            return Jet::zero(order);
        }
        let w = 1.0 / (self.hi - self.lo);
        let x = Jet::variable((t - self.lo) * w, order).scale_derivs(w);
        self.inner.jet(t, order).mul(&smooth_step(&x))
    }
    fn scale(&self) -> f64 {
        self.inner.scale().min(self.hi - self.lo)
    }
    fn breakpoints(&self) -> Vec<f64> {
        let mut b = self.inner.breakpoints();
        b.push(self.lo);
        b.push(0.5 * (self.lo + self.hi));
        b.push(self.hi);
        b.sort_by(f64::total_cmp);
        b.dedup();
        b
    }
}

/// Check that a test function's support stays inside `t > 0`.
pub fn check_support(psi: &dyn TimeTest) -> Result<(f64, f64)> {
    let (lo, hi) = psi.support();
    if !(lo > 0.0) || !hi.is_finite() || !(hi >= lo) {
        return Err(Error::SupportTouchesZero);
    }
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd(f: impl Fn(f64) -> f64, t: f64, h: f64) -> f64 {
        (f(t - 2.0 * h) - 8.0 * f(t - h) + 8.0 * f(t + h) - f(t + 2.0 * h)) / (12.0 * h)
    }

    #[test]
    fn jet_algebra() {
        // (1/t)' at 2 = −1/4; exp(t)'' at 0 = 1
        let t = Jet::variable(2.0, 3);
        assert!((t.recip().deriv(1) + 0.25).abs() < 1e-15);
        assert!((Jet::variable(0.0, 3).exp().deriv(2) - 1.0).abs() < 1e-15);
        let tp = Jet::t_power(2.0, -3, 3);
        let direct = t.recip().mul(&t.recip()).mul(&t.recip());
        for k in 0..=3 {
            assert!((tp.deriv(k) - direct.deriv(k)).abs() < 1e-14);
        }
        assert_eq!(t.diff().0, vec![1.0, 0.0, 0.0]);
    }

    fn check_derivs(psi: &dyn TimeTest, points: &[f64]) {
        for &t in points {
            let jet = psi.jet(t, 4);
            for k in 1..=3 {
                let num = fd(|s| psi.deriv(k - 1, s), t, 1e-3 * psi.scale());
                let ex = jet.deriv(k);
                assert!((num - ex).abs() < 1e-6 * (1.0 + ex.abs()), "k={k} t={t}: {num} vs {ex}");
            }
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        check_derivs(&GaussianPulse::new(2.0, 0.3).unwrap(), &[1.5, 2.0, 2.4]);
        check_derivs(&Bump::new(1.0, 0.5).unwrap(), &[0.7, 1.0, 1.3]);
        check_derivs(&RampStep::new(0.1).unwrap(), &[0.02, 0.05, 0.08]);
        let rev = Reversed { inner: RampStep::new(0.1).unwrap(), at: 2.0 };
        check_derivs(&rev, &[1.93, 1.95, 1.97]);
        let win = Windowed { inner: rev.clone(), lo: 0.25, hi: 0.5 };
        check_derivs(&win, &[0.3, 0.4, 1.0, 1.95]);
        let m = Mollified::new(&[1.0, 1.1, 1.2, 1.3], &[0.0, 1.0, 2.0, 1.0]).unwrap();
        check_derivs(&m, &[1.05, 1.2, 1.33]);
    }

    #[test]
    fn shapes() {
        let b = Bump::new(1.0, 0.5).unwrap();
        assert_eq!(b.value(1.0), 1.0);
        assert_eq!(b.value(1.5), 0.0);
        let r = RampStep::new(0.01).unwrap();
        assert_eq!(r.value(-1.0), 0.0);
        assert_eq!(r.value(0.5), 1.0);
        assert!((r.value(0.005) - 0.5).abs() < 1e-15);
        let rev = Reversed { inner: r, at: 2.0 };
        assert_eq!(rev.value(1.0), 1.0);
        assert_eq!(rev.value(2.5), 0.0);
        assert!(check_support(&rev).is_err());
        let win = Windowed { inner: rev, lo: 0.25, hi: 0.5 };
        assert_eq!(check_support(&win).unwrap(), (0.25, 2.0));
        assert_eq!(win.value(0.7), 1.0);
    }

    #[test]
    fn mollified_preserves_mass() {
        let times: Vec<f64> = (0..41).map(|i| 1.0 + 0.05 * i as f64).collect();
        let values: Vec<f64> = times.iter().map(|t| (-(t - 2.0) * (t - 2.0) * 8.0).exp()).collect();
        let m = Mollified::new(&times, &values).unwrap();
        let (lo, hi) = m.support();
        let n = 4000;
        let h = (hi - lo) / n as f64;
        let mass: f64 = (0..n).map(|i| m.value(lo + (i as f64 + 0.5) * h) * h).sum();
        let trap: f64 = values.windows(2).map(|w| 0.025 * (w[0] + w[1])).sum();
        assert!((mass - trap).abs() < 1e-9, "{mass} vs {trap}");
    }
}
