//! Poisson kernels `E_j` of the half-space Dirichlet problems, built as
//! [`RadialExpr`] values, plus independently hand-expanded closed forms of the
//! classical special cases.
//!
//! All four constructors share the shape
//! `c · y^m · (−∂_y)^{m−1−j} [A] F`, where `A` is either the identity or
//! `(1/y)∂_y` and `F` is a profile expression.

use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;
use num_traits::ToPrimitive;

use crate::algebra::{Factor, Op, RadialExpr, RadialTerm};
use crate::error::invalid;
use crate::profiles::{Profile, Rational};
use crate::specfun::{bessel_k, gamma_half, Order};
use crate::{Result, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Family {
    Polyharmonic,
    Metaharmonic,
    Wave,
    KleinGordon,
}

impl Family {
    pub fn is_hyperbolic(self) -> bool {
        matches!(self, Family::Wave | Family::KleinGordon)
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Polyharmonic => "polyharmonic",
            Family::Metaharmonic => "metaharmonic",
            Family::Wave => "wave",
            Family::KleinGordon => "klein_gordon",
        }
    }
}

/// Spectral parameter: real `ξ` or complex `p` (`Re p > 0`).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(untagged))]
pub enum Param {
    #[default]
    None,
    Real(f64),
    Complex(C64),
}

/// Which of the two equivalent metaharmonic representations to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Variant {
    /// `(−∂_y)^{m−1−j} H_{(n+1)/2}`
    #[default]
    Eq21,
    /// `−(−∂_y)^{m−1−j} (1/y)∂_y H_{(n−1)/2}`
    Eq22,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct KernelSpec {
    pub family: Family,
    /// Number of `x` variables; for Klein–Gordon the space dimension is `2n+1`.
    pub n: u32,
    pub m: u32,
    pub j: u32,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "is_none"))]
    pub param: Param,
}

#[cfg(feature = "serde")]
fn is_none(p: &Param) -> bool {
    matches!(p, Param::None)
}

impl KernelSpec {
    pub fn new(family: Family, n: u32, m: u32, j: u32, param: Param) -> Result<Self> {
        let spec = KernelSpec { family, n, m, j, param };
        spec.validate()?;
        Ok(spec)
    }

    pub fn polyharmonic(n: u32, m: u32, j: u32) -> Result<Self> {
        KernelSpec::new(Family::Polyharmonic, n, m, j, Param::None)
    }

    pub fn metaharmonic(n: u32, m: u32, j: u32, p: C64) -> Result<Self> {
        KernelSpec::new(Family::Metaharmonic, n, m, j, Param::Complex(p))
    }

    pub fn wave(n: u32, m: u32, j: u32) -> Result<Self> {
        KernelSpec::new(Family::Wave, n, m, j, Param::None)
    }

    pub fn klein_gordon(n: u32, m: u32, j: u32, xi: f64) -> Result<Self> {
        KernelSpec::new(Family::KleinGordon, n, m, j, Param::Real(xi))
    }

    pub fn validate(&self) -> Result<()> {
        if self.m < 1 {
            return Err(invalid("m must be at least 1"));
        }
        if self.j >= self.m {
            return Err(invalid("j must satisfy 0 <= j <= m-1"));
        }
        if self.family != Family::KleinGordon && self.n < 1 {
            return Err(invalid("n must be at least 1"));
        }
        match (self.family, self.param) {
            (Family::Polyharmonic | Family::Wave, Param::None) => Ok(()),
            (Family::Polyharmonic | Family::Wave, _) => Err(invalid("this family takes no spectral parameter")),
            (Family::Metaharmonic, Param::None) => Err(invalid("metaharmonic kernels need xi or p")),
            (Family::Metaharmonic | Family::KleinGordon, Param::Real(0.0)) => {
                Err(invalid("xi must be nonzero"))
            }
            (Family::Metaharmonic, Param::Real(x)) if !x.is_finite() => Err(invalid("xi must be finite")),
            (Family::Metaharmonic, Param::Real(_)) => Ok(()),
            (Family::Metaharmonic, Param::Complex(p)) if !(p.re > 0.0) || !p.im.is_finite() => {
                Err(invalid("Re p must be positive"))
            }
            (Family::Metaharmonic, Param::Complex(_)) => Ok(()),
            (Family::KleinGordon, Param::Real(x)) if x > 0.0 && x.is_finite() => Ok(()),
            (Family::KleinGordon, _) => Err(invalid("Klein-Gordon kernels need a real xi > 0")),
        }
    }

    /// `p` for the metaharmonic family (`|ξ|` for real `ξ`).
    pub fn p(&self) -> Option<C64> {
        match self.param {
            Param::Real(x) => Some(C64::new(x.abs(), 0.0)),
            Param::Complex(p) => Some(p),
            Param::None => None,
        }
    }

    pub fn xi(&self) -> Option<f64> {
        match self.param {
            Param::Real(x) => Some(x),
            _ => None,
        }
    }

    /// Dimension of the `x`-Laplacian in the operator.
    pub fn x_dim(&self) -> u32 {
        match self.family {
            Family::KleinGordon => 2 * self.n + 1,
            _ => self.n,
        }
    }

    /// The operator the kernel is annihilated by, as one algebra step.
    pub fn operator(&self) -> Op {
        match self.family {
            Family::Polyharmonic => Op::Helmholtz(self.n, C64::new(0.0, 0.0)),
            Family::Metaharmonic => Op::Helmholtz(self.n, self.p().unwrap_or_default()),
            Family::Wave => Op::Dalembert(self.n, 0.0),
            Family::KleinGordon => Op::Dalembert(self.x_dim(), self.xi().unwrap_or_default()),
        }
    }

    pub fn label(&self) -> String {
        use core::fmt::Write;
        let mut s = String::new();
        let _ = write!(s, "{} n={} m={} j={}", self.family.name(), self.n, self.m, self.j);
        match self.param {
            Param::None => {}
            Param::Real(x) => {
                let _ = write!(s, " xi={x}");
            }
            Param::Complex(p) => {
                let _ = write!(s, " p={}{:+}i", p.re, p.im);
            }
        }
        s
    }
}

fn factorial(k: u32) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn half(n: i64) -> Rational {
    Rational::new(n, 2)
}

/// `p^{k/2}` on the principal branch.
fn p_half_power(p: C64, k: i32) -> C64 {
    p.sqrt().powi(k)
}

/// `c · y^m · (−∂_y)^{m−1−j} [inner]`
fn finish(spec: &KernelSpec, inner: RadialExpr, c: C64) -> RadialExpr {
    inner
        .op_power(Op::NegDY, spec.m - 1 - spec.j)
        .mul_monomial(spec.m as i32, 0, Rational::from_integer(0))
        .scale(c)
}

fn binomial_prefactor(spec: &KernelSpec) -> f64 {
    1.0 / (factorial(spec.j) * factorial(spec.m - 1 - spec.j))
}

/// `E_j = (2/ω_{n+1}) y^m/(j!(m−1−j)!) (−∂_y)^{m−1−j} s^{−(n+1)/2}`
pub fn polyharmonic_kernel(spec: &KernelSpec) -> Result<RadialExpr> {
    expect_family(spec, Family::Polyharmonic)?;
    let n = spec.n;
    let c = gamma_half((n as f64 + 1.0) / 2.0)? / PI.powf((n as f64 + 1.0) / 2.0) * binomial_prefactor(spec);
    Ok(finish(spec, RadialExpr::profile(Profile::power(n)), real(c)))
}

/// Metaharmonic kernel through either representation; `p = |ξ|` for real `ξ`.
pub fn metaharmonic_kernel(spec: &KernelSpec, variant: Variant) -> Result<RadialExpr> {
    expect_family(spec, Family::Metaharmonic)?;
    let n = spec.n as i64;
    let p = spec.p().ok_or_else(|| invalid("metaharmonic kernels need xi or p"))?;
    let base = binomial_prefactor(spec) / (2f64.powf((n as f64 - 1.0) / 2.0) * PI.powf((n as f64 + 1.0) / 2.0));
    match variant {
        Variant::Eq21 => {
            let h = Profile::bessel_k(Order::from_twice(n as i32 + 1), p)?;
            let c = p_half_power(p, n as i32 + 1) * base;
            Ok(finish(spec, RadialExpr::profile(h), c))
        }
        Variant::Eq22 => {
            let h = Profile::bessel_k(Order::from_twice(n as i32 - 1), p)?;
            let c = -p_half_power(p, n as i32 - 1) * base;
            Ok(finish(spec, RadialExpr::profile(h).inv_y_d_y(), c))
        }
    }
}

/// `E_j = −y^m/(2^{n−1}π^{n/2}Γ(n/2)j!(m−1−j)!) (−∂_y)^{m−1−j}(1/y)∂_y [∂_t^{n−1} u_+^{n/2−1} · s^{−(n−1)/2}]`
pub fn wave_kernel(spec: &KernelSpec) -> Result<RadialExpr> {
    expect_family(spec, Family::Wave)?;
    let n = spec.n;
    let cone = RadialExpr::cone_power(half(n as i64 - 2)).op_power(Op::DT, n - 1);
    let inner = cone.mul_monomial(0, 0, half(-(n as i64 - 1))).inv_y_d_y();
    let c = -binomial_prefactor(spec)
        / (2f64.powi(n as i32 - 1) * PI.powf(n as f64 / 2.0) * gamma_half(n as f64 / 2.0)?);
    Ok(finish(spec, inner, real(c)))
}

/// Klein–Gordon kernel in space dimension `2n+1`:
/// `−y^m/((2π)^{n+1/2} j!(m−1−j)!) (−∂_y)^{m−1−j}(1/y)∂_y Σ_l C(n,l) ξ^{n−2l+1/2} ∂_t^{2l}[P_{n−1/2}(u) s^{−n}]`
/// with `P_λ(u) = u^{λ/2} J_λ(ξ√u)`.
pub fn kleingordon_kernel(spec: &KernelSpec) -> Result<RadialExpr> {
    expect_family(spec, Family::KleinGordon)?;
    let n = spec.n;
    let xi = spec.xi().ok_or_else(|| invalid("Klein-Gordon kernels need a real xi > 0"))?;
    let p = Profile::bessel_j_cone(Order::from_twice(2 * n as i32 - 1), xi)?;
    let base = RadialExpr::profile(p).mul_monomial(0, 0, Rational::from_integer(-(n as i64)));
    let mut sum = RadialExpr::zero();
    let mut term = base;
    for l in 0..=n {
        let binom = factorial(n) / (factorial(l) * factorial(n - l));
        let w = binom * xi.powf(n as f64 - 2.0 * l as f64 + 0.5);
        sum = sum.add(&term.scale(real(w)));
        term = term.d_t().d_t();
    }
    let c = -binomial_prefactor(spec) / (2.0 * PI).powf(n as f64 + 0.5);
    Ok(finish(spec, sum.inv_y_d_y(), real(c)))
}

/// Build the kernel for any family (`Eq21` for metaharmonic).
pub fn build_kernel(spec: &KernelSpec) -> Result<RadialExpr> {
    spec.validate()?;
    match spec.family {
        Family::Polyharmonic => polyharmonic_kernel(spec),
        Family::Metaharmonic => metaharmonic_kernel(spec, Variant::Eq21),
        Family::Wave => wave_kernel(spec),
        Family::KleinGordon => kleingordon_kernel(spec),
    }
}

fn expect_family(spec: &KernelSpec, family: Family) -> Result<()> {
    spec.validate()?;
    if spec.family != family {
        return Err(invalid("kernel constructor called with a spec of another family"));
    }
    Ok(())
}

/// Time antiderivative of a cone expression, `∫_{√s}^t k(τ) dτ`, or a marker
/// asking for numeric time convolution when some term has no closed form.
#[derive(Debug, Clone, PartialEq)]
pub enum TransientExpr {
    Closed(RadialExpr),
    NumericTimeConvolution,
}

/// Response to the boundary data `δ(x) ⊗ Y(t)`: the kernel integrated in time
/// from the cone.
///
/// Closed forms used:
/// - `t^e u^α`, `e` odd: substitute `t dt = du/2` and expand `t^{e−1} = (u+s)^{(e−1)/2}`;
/// - `t^e u^α` with `e + 2α + 3 = 0`: `−t^{e+1} u^{α+1}/((e+1) s)`;
/// - `t^e δ^{(k)}(u)`, `e` odd: expand `t^{e−1}`, use `u^i δ^{(k)} = (−1)^i k!/(k−i)! δ^{(k−i)}`
///   and `∫ t δ^{(k)} = δ^{(k−1)}/2`, `∫ t δ = u_+^0/2`.
pub fn constant_boundary_transient(k: &RadialExpr) -> TransientExpr {
    let mut out: Vec<RadialTerm> = Vec::new();
    for term in k.terms() {
        let ok = match term.factor {
            Factor::ConePower { alpha } => power_antiderivative(term, alpha, &mut out),
            Factor::ConeDelta { k } => delta_antiderivative(term, k, &mut out),
            _ => false,
        };
        if !ok {
            return TransientExpr::NumericTimeConvolution;
        }
    }
    TransientExpr::Closed(RadialExpr::from_terms(out, Vec::new()))
}

fn binom(k: u32, i: u32) -> f64 {
    factorial(k) / (factorial(i) * factorial(k - i))
}

fn power_antiderivative(term: &RadialTerm, alpha: Rational, out: &mut Vec<RadialTerm>) -> bool {
    let e = term.t_pow;
    let one = Rational::from_integer(1);
    if e % 2 == 1 {
        let k = (e - 1) / 2;
        for i in 0..=k {
            let a = alpha + Rational::from_integer(i as i64) + one;
            if a == Rational::from_integer(0) {
                return false;
            }
            let c = 0.5 * binom(k, i) / a.to_f64().unwrap_or(f64::NAN);
            out.push(RadialTerm {
                coeff: term.coeff * c,
                t_pow: 0,
                s_pow: term.s_pow + Rational::from_integer((k - i) as i64),
                factor: Factor::ConePower { alpha: a },
                ..*term
            });
        }
        return true;
    }
    if Rational::from_integer(e as i64 + 3) + alpha * 2 == Rational::from_integer(0) {
        out.push(RadialTerm {
            coeff: term.coeff * (-1.0 / (e as f64 + 1.0)),
            t_pow: e + 1,
            s_pow: term.s_pow - one,
            factor: Factor::ConePower { alpha: alpha + one },
            ..*term
        });
        return true;
    }
    false
}

fn delta_antiderivative(term: &RadialTerm, k: u32, out: &mut Vec<RadialTerm>) -> bool {
    let e = term.t_pow;
    if e.is_multiple_of(2) {
        return false;
    }
    let half_e = (e - 1) / 2;
    for i in 0..=half_e.min(k) {
        // t^{e−1} = Σ C(h,i) s^{h−i} u^i; u^i δ^{(k)} = (−1)^i k!/(k−i)! δ^{(k−i)}
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        let c = binom(half_e, i) * sign * factorial(k) / factorial(k - i) * 0.5;
        let s_pow = term.s_pow + Rational::from_integer((half_e - i) as i64);
        let factor = if k - i == 0 {
            Factor::ConePower { alpha: Rational::from_integer(0) }
        } else {
            Factor::ConeDelta { k: k - i - 1 }
        };
        out.push(RadialTerm { coeff: term.coeff * c, t_pow: 0, s_pow, factor, ..*term });
    }
    true
}

/// Hand-expanded closed forms of the classical special cases, coded without
/// the algebra. `r = |x|`.
pub mod closed_form {
    use super::*;

    fn s(r: f64, y: f64) -> f64 {
        r * r + y * y
    }

    /// `m = 1`: `Γ((n+1)/2)/π^{(n+1)/2} · y/s^{(n+1)/2}`.
    pub fn poisson(n: u32, r: f64, y: f64) -> f64 {
        let q = (n as f64 + 1.0) / 2.0;
        gamma_half(q).unwrap_or(f64::NAN) / PI.powf(q) * y / s(r, y).powf(q)
    }

    /// Biharmonic `E_0 = 2Γ((n+3)/2)/π^{(n+1)/2} · y³/s^{(n+3)/2}`.
    pub fn biharmonic_e0(n: u32, r: f64, y: f64) -> f64 {
        let q = (n as f64 + 1.0) / 2.0;
        2.0 * gamma_half(q + 1.0).unwrap_or(f64::NAN) / PI.powf(q) * y.powi(3) / s(r, y).powf(q + 1.0)
    }

    /// Biharmonic `E_1 = Γ((n+1)/2)/π^{(n+1)/2} · y²/s^{(n+1)/2}`.
    pub fn biharmonic_e1(n: u32, r: f64, y: f64) -> f64 {
        let q = (n as f64 + 1.0) / 2.0;
        gamma_half(q).unwrap_or(f64::NAN) / PI.powf(q) * y * y / s(r, y).powf(q)
    }

    /// Two-dimensional half-plane, last index: `E_{m−1} = y^m/(π (m−1)! (x²+y²))`.
    pub fn last_index_plane(m: u32, r: f64, y: f64) -> f64 {
        y.powi(m as i32) / (PI * factorial(m - 1) * s(r, y))
    }

    /// Metaharmonic `m = 1`:
    /// `y p^{(n+1)/2}/(2^{(n−1)/2}π^{(n+1)/2}) · K_{(n+1)/2}(p√s)/s^{(n+1)/4}`.
    pub fn metaharmonic_m1(n: u32, p: C64, r: f64, y: f64) -> Result<C64> {
        let sv = s(r, y);
        let q = (n as f64 + 1.0) / 2.0;
        let k = bessel_k(Order::from_twice(n as i32 + 1), p * sv.sqrt())?;
        let c = p.sqrt().powi(n as i32 + 1) * y / (2f64.powf((n as f64 - 1.0) / 2.0) * PI.powf(q));
        Ok(c * k / sv.powf(q / 2.0))
    }

    /// Wave, one `x` variable: `E_0 = −(y/π) u^{−3/2}` inside the cone.
    pub fn wave_n1(r: f64, y: f64, t: f64) -> f64 {
        let u = t * t - s(r, y);
        if t <= 0.0 || u <= 0.0 {
            return 0.0;
        }
        -y / PI * u.powf(-1.5)
    }

    /// Wave, one `x` variable, constant boundary data: `U = y t/(π s √u)`.
    pub fn wave_n1_step(r: f64, y: f64, t: f64) -> f64 {
        let sv = s(r, y);
        let u = t * t - sv;
        if t <= 0.0 || u <= 0.0 {
            return 0.0;
        }
        y * t / (PI * sv * u.sqrt())
    }

    /// Wave, two `x` variables: `⟨E_0, ψ⟩ = −(1/2π)(y/√s)(ψ'(√s)/√s − ψ(√s)/s)`.
    pub fn wave_n2_paired(r: f64, y: f64, psi: f64, dpsi: f64) -> f64 {
        let sv = s(r, y);
        let a = sv.sqrt();
        -(y / (2.0 * PI * a)) * (dpsi / a - psi / sv)
    }

    /// Wave, two `x` variables, constant boundary data:
    /// `⟨U, ψ⟩ = (1/2π)(y/√s)(ψ(√s)/√s + Ψ(√s)/s)`, `Ψ(σ) = ∫_σ^∞ ψ`.
    pub fn wave_n2_step_paired(r: f64, y: f64, psi: f64, tail: f64) -> f64 {
        let sv = s(r, y);
        let a = sv.sqrt();
        (y / (2.0 * PI * a)) * (psi / a + tail / sv)
    }

    /// Wave, two `x` variables, constant boundary data, off the front:
    /// `U = (1/2π) y s^{−3/2}` for `t > √s`.
    pub fn wave_n2_step(r: f64, y: f64, t: f64) -> f64 {
        let sv = s(r, y);
        if t * t <= sv || t <= 0.0 {
            return 0.0;
        }
        y / (2.0 * PI * sv.powf(1.5))
    }

    /// Klein–Gordon in one space dimension, `m = 1`:
    /// `E_0 = −(y/π)(ξw sin ξw + cos ξw)/w³`, `w = √u`.
    pub fn kleingordon_n0(xi: f64, r: f64, y: f64, t: f64) -> f64 {
        let u = t * t - s(r, y);
        if t <= 0.0 || u <= 0.0 {
            return 0.0;
        }
        let w = u.sqrt();
        let z = xi * w;
        -(y / PI) * (z * z.sin() + z.cos()) / (w * w * w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Point;

    fn at(r: f64, y: f64) -> Point {
        Point::new(r, y, None)
    }

    #[test]
    fn validation_messages() {
        let e = KernelSpec::new(Family::Metaharmonic, 1, 1, 0, Param::Real(0.0)).unwrap_err();
        assert!(alloc::format!("{e}").contains("xi must be nonzero"));
        assert!(KernelSpec::polyharmonic(1, 2, 2).is_err());
        assert!(KernelSpec::polyharmonic(0, 1, 0).is_err());
        assert!(KernelSpec::metaharmonic(1, 1, 0, C64::new(0.0, 1.0)).is_err());
        assert!(KernelSpec::klein_gordon(0, 1, 0, -1.0).is_err());
        assert!(KernelSpec::klein_gordon(0, 1, 0, 1.0).is_ok());
        assert!(KernelSpec::new(Family::Wave, 1, 1, 0, Param::Real(1.0)).is_err());
    }

    #[test]
    fn polyharmonic_examples() {
        let e = polyharmonic_kernel(&KernelSpec::polyharmonic(1, 1, 0).unwrap()).unwrap();
        assert!((e.evaluate(at(0.0, 1.0)).unwrap().re - 1.0 / PI).abs() < 1e-15);
        let e = polyharmonic_kernel(&KernelSpec::polyharmonic(1, 2, 0).unwrap()).unwrap();
        assert!((e.evaluate(at(0.0, 1.0)).unwrap().re - 2.0 / PI).abs() < 1e-15);
    }

    #[test]
    fn metaharmonic_example() {
        let spec = KernelSpec::new(Family::Metaharmonic, 1, 1, 0, Param::Real(1.0)).unwrap();
        let e = metaharmonic_kernel(&spec, Variant::Eq21).unwrap();
        let v = e.evaluate(at(0.0, 1.0)).unwrap();
        assert!((v.re - 0.60190723019723457474 / PI).abs() < 1e-13);
        assert!(v.im.abs() < 1e-16);
    }

    #[test]
    fn wave_examples() {
        let e = wave_kernel(&KernelSpec::wave(1, 1, 0).unwrap()).unwrap();
        let v = e.evaluate(Point::new(0.0, 0.5, Some(1.0))).unwrap().re;
        assert!((v + 0.5 / (0.75f64.powf(1.5) * PI)).abs() < 1e-14);
        assert!((v + 0.24503506).abs() < 1e-8);
        assert_eq!(e.evaluate(Point::new(0.0, 0.5, Some(0.4))).unwrap().re, 0.0);

        let e2 = wave_kernel(&KernelSpec::wave(2, 1, 0).unwrap()).unwrap();
        assert!(e2.has_delta());
        let deltas: Vec<_> = e2.terms().iter().filter(|t| matches!(t.factor, Factor::ConeDelta { .. })).collect();
        assert_eq!(deltas.len(), e2.terms().len());
    }

    #[test]
    fn transient_closed_forms() {
        let e = wave_kernel(&KernelSpec::wave(1, 1, 0).unwrap()).unwrap();
        let TransientExpr::Closed(u) = constant_boundary_transient(&e) else { panic!("expected closed form") };
        let v = u.evaluate(Point::new(0.0, 1.0, Some(2.0))).unwrap().re;
        assert!((v - 2.0 / (PI * 3f64.sqrt())).abs() < 1e-15);
        assert!((v - 0.3675526).abs() < 1e-7);
        assert_eq!(u.evaluate(Point::new(0.0, 1.0, Some(0.9))).unwrap().re, 0.0);

        let kg = kleingordon_kernel(&KernelSpec::klein_gordon(0, 1, 0, 1.0).unwrap()).unwrap();
        assert_eq!(constant_boundary_transient(&kg), TransientExpr::NumericTimeConvolution);
    }

    #[test]
    fn kleingordon_n0_matches_hand_expansion() {
        let e = kleingordon_kernel(&KernelSpec::klein_gordon(0, 1, 0, 1.0).unwrap()).unwrap();
        let v = e.evaluate(Point::new(0.0, 0.3, Some(1.0))).unwrap().re;
        let want = closed_form::kleingordon_n0(1.0, 0.0, 0.3, 1.0);
        assert!((v - want).abs() < 1e-12 * want.abs(), "{v} vs {want}");
        assert_eq!(e.evaluate(Point::new(0.0, 0.3, Some(0.2))).unwrap().re, 0.0);
    }
}
