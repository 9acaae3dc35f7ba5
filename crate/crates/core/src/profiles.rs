//! Radial profile families closed under differentiation.
//!
//! | family          | function                        | variable | d/d(variable)        |
//! |-----------------|---------------------------------|----------|----------------------|
//! | `Power(n)`      | `s^{−(n+1)/2}`                  | `s`      | `−((n+1)/2)·Power(n+2)` |
//! | `BesselK(λ, p)` | `H_λ = K_λ(p√s)/s^{λ/2}`        | `s`      | `−(p/2)·H_{λ+1}`     |
//! | `TruncPower(α)` | `W_α = u_+^α`                   | `u`      | `α·W_{α−1}`, `W_0' = δ(u)` |
//! | `BesselJCone(λ, ξ)` | `P_λ = u^{λ/2} J_λ(ξ√u)`    | `u`      | `(ξ/2)·P_{λ−1}`      |

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{domain, invalid};
use crate::specfun::{bessel_j_half, bessel_k_run, Order};
use crate::{Error, Result, C64};

/// Exact rational exponent.
pub type Rational = num_rational::Ratio<i64>;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "family", rename_all = "SCREAMING_SNAKE_CASE"))]
pub enum Profile {
    Power { n: u32 },
    BesselK { order: Order, p: C64 },
    TruncPower { alpha: Rational },
    BesselJCone { order: Order, xi: f64 },
}

/// Which variable a profile is a function of.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variable {
    /// `s = |x|² + y²`
    S,
    /// `u = t² − s`, supported on the forward cone.
    U,
}

/// Result of differentiating a profile `k` times.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Shifted {
    Profile(Profile),
    /// `δ^{(k)}(u)`
    Delta(u32),
}

impl Profile {
    pub fn power(n: u32) -> Self {
        Profile::Power { n }
    }

    pub fn bessel_k(order: Order, p: C64) -> Result<Self> {
        if !(p.re > 0.0) || !p.im.is_finite() {
            return Err(invalid("Bessel-K profile needs Re p > 0"));
        }
        if order.twice() < 0 {
            return Err(invalid("Bessel-K profile needs a non-negative order"));
        }
        Ok(Profile::BesselK { order, p })
    }

    pub fn trunc_power(alpha: Rational) -> Self {
        Profile::TruncPower { alpha }
    }

    pub fn bessel_j_cone(order: Order, xi: f64) -> Result<Self> {
        if !(xi > 0.0) || !xi.is_finite() {
            return Err(invalid("Bessel-J cone profile needs xi > 0"));
        }
        if order.is_integer() {
            return Err(invalid("Bessel-J cone profile needs a half-integer order"));
        }
        Ok(Profile::BesselJCone { order, xi })
    }

    pub fn variable(&self) -> Variable {
        match self {
            Profile::Power { .. } | Profile::BesselK { .. } => Variable::S,
            Profile::TruncPower { .. } | Profile::BesselJCone { .. } => Variable::U,
        }
    }

    /// `d^k/dv^k` of this profile as `constant · shifted`.
    pub fn deriv_rule(&self, k: u32) -> (C64, Shifted) {
        let one = C64::new(1.0, 0.0);
        match *self {
            Profile::Power { n } => {
                let q0 = (n as f64 + 1.0) / 2.0;
                let c = (0..k).fold(1.0, |c, i| c * -(q0 + i as f64));
                (C64::new(c, 0.0), Shifted::Profile(Profile::Power { n: n + 2 * k }))
            }
            Profile::BesselK { order, p } => {
                let c = (0..k).fold(one, |c, _| c * (-p / 2.0));
                (c, Shifted::Profile(Profile::BesselK { order: order.shift(k as i32), p }))
            }
            Profile::TruncPower { alpha } => {
                let mut c = 1.0;
                let mut a = alpha;
                for step in 0..k {
                    if a.is_zero() {
                        return (C64::new(c, 0.0), Shifted::Delta(k - step - 1));
                    }
                    c *= a.to_f64().unwrap_or(f64::NAN);
                    a -= Rational::one();
                }
                (C64::new(c, 0.0), Shifted::Profile(Profile::TruncPower { alpha: a }))
            }
            Profile::BesselJCone { order, xi } => {
                let c = (0.5 * xi).powi(k as i32);
                (C64::new(c, 0.0), Shifted::Profile(Profile::BesselJCone { order: order.shift(-(k as i32)), xi }))
            }
        }
    }

    /// `k`-th derivative at `arg` (`s` for radial families, `u` for cone
    /// families; cone families vanish for `u < 0`).
    pub fn eval(&self, k: u32, arg: f64) -> Result<C64> {
        let (c, shifted) = self.deriv_rule(k);
        match shifted {
            Shifted::Delta(_) => Err(Error::DeltaLayerPresent),
            Shifted::Profile(p) => Ok(c * p.eval_base(arg)?),
        }
    }

    /// `[f(arg), f'(arg), …, f^{(kmax)}(arg)]`, sharing Bessel evaluations.
    pub fn eval_run(&self, kmax: u32, arg: f64) -> Result<Vec<C64>> {
        match *self {
            Profile::BesselK { order, p } => {
                check_radial(arg)?;
                let z = p * arg.sqrt();
                let ks = bessel_k_run(order, kmax as usize + 1, z)?;
                Ok((0..=kmax)
                    .map(|k| {
                        let (c, _) = self.deriv_rule(k);
                        let lam = order.shift(k as i32).value();
                        c * ks[k as usize] / arg.powf(lam / 2.0)
                    })
                    .collect())
            }
            _ => (0..=kmax).map(|k| self.eval(k, arg)).collect(),
        }
    }

    fn eval_base(&self, arg: f64) -> Result<C64> {
        match *self {
            Profile::Power { n } => {
                check_radial(arg)?;
                Ok(C64::new(arg.powf(-(n as f64 + 1.0) / 2.0), 0.0))
            }
            Profile::BesselK { order, p } => {
                check_radial(arg)?;
                let ks = bessel_k_run(order, 1, p * arg.sqrt())?;
                Ok(ks[0] / arg.powf(order.value() / 2.0))
            }
            Profile::TruncPower { alpha } => Ok(C64::new(cone_power(alpha, arg)?, 0.0)),
            Profile::BesselJCone { order, xi } => Ok(C64::new(bessel_j_cone(order, xi, arg)?, 0.0)),
        }
    }
}

fn check_radial(s: f64) -> Result<()> {
    if s > 0.0 && s.is_finite() {
        Ok(())
    } else {
        Err(domain("radial profile needs s > 0"))
    }
}

/// `u_+^α`, with `u_+^0` the Heaviside step (`1` on the cone itself).
pub fn cone_power(alpha: Rational, u: f64) -> Result<f64> {
    if u.is_nan() {
        return Err(domain("cone argument is NaN"));
    }
    if u < 0.0 {
        return Ok(0.0);
    }
    if u == 0.0 {
        return if alpha.is_positive() {
            Ok(0.0)
        } else if alpha.is_zero() {
            Ok(1.0)
        } else {
            Err(Error::OnConeSingularity)
        };
    }
    let a = alpha.to_f64().unwrap_or(f64::NAN);
    if alpha.is_integer() {
        Ok(u.powi(a as i32))
    } else if *alpha.denom() == 2 {
        Ok(u.sqrt().powi(*alpha.numer() as i32))
    } else {
        Ok(u.powf(a))
    }
}

/// `P_λ(u) = ξ^{−λ} z^λ J_λ(z)`, `z = ξ√u`, zero for `u < 0`.
fn bessel_j_cone(order: Order, xi: f64, u: f64) -> Result<f64> {
    if u.is_nan() {
        return Err(domain("cone argument is NaN"));
    }
    if u < 0.0 {
        return Ok(0.0);
    }
    if u == 0.0 {
        return if order.twice() > 0 { Ok(0.0) } else { Err(Error::OnConeSingularity) };
    }
    let z = xi * u.sqrt();
    let lam = order.value();
    let j = bessel_j_half(order, z)?;
    Ok(j * (z / xi).powf(lam))
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn examples() {
        let k = Profile::bessel_k(Order::from_twice(1), C64::new(1.0, 0.0)).unwrap();
        let v = k.eval(1, 1.0).unwrap();
        let want = -0.5 * (PI / 2.0).sqrt() * (-1f64).exp() * 2.0;
        assert!((v.re - want).abs() < 1e-14);
        assert!((k.eval(0, 1.0).unwrap().re - 0.46106850444789455844).abs() < 1e-15);

        let p = Profile::power(1);
        assert_eq!(p.eval(0, 4.0).unwrap().re, 0.25);
        assert!((p.eval(2, 3.0).unwrap().re - 2.0 / 27.0).abs() < 1e-16);

        assert_eq!(Profile::trunc_power(r(1, 2)).eval(0, 9.0).unwrap().re, 3.0);
    }

    #[test]
    fn trunc_power_crossing() {
        let w = Profile::trunc_power(r(1, 1));
        assert_eq!(w.deriv_rule(1), (C64::new(1.0, 0.0), Shifted::Profile(Profile::trunc_power(r(0, 1)))));
        assert_eq!(w.deriv_rule(2), (C64::new(1.0, 0.0), Shifted::Delta(0)));
        assert_eq!(w.deriv_rule(4), (C64::new(1.0, 0.0), Shifted::Delta(2)));
        assert_eq!(w.eval(2, 1.0), Err(Error::DeltaLayerPresent));
        let h = Profile::trunc_power(r(-1, 2));
        assert_eq!(h.deriv_rule(2).0, C64::new(0.75, 0.0));
        assert_eq!(h.eval(0, 0.0), Err(Error::OnConeSingularity));
        assert_eq!(h.eval(0, -1.0).unwrap(), C64::new(0.0, 0.0));
    }

    #[test]
    fn j_cone_values() {
        // P_{1/2}(u) = √(2/π) sin(z)/√ξ, P_{−1/2}(u) = √(2ξ/π) cos(z)/z.
        let xi = 1.3;
        let u = 0.8f64;
        let z = xi * u.sqrt();
        let p = Profile::bessel_j_cone(Order::from_twice(1), xi).unwrap();
        let want = (2.0 / PI).sqrt() * z.sin() / xi.sqrt();
        assert!((p.eval(0, u).unwrap().re - want).abs() < 1e-15);
        let want_m = (2.0 * xi / PI).sqrt() * z.cos() / z;
        let pm = Profile::bessel_j_cone(Order::from_twice(-1), xi).unwrap();
        assert!((pm.eval(0, u).unwrap().re - want_m).abs() < 1e-14);
        assert_eq!(p.eval(0, 0.0).unwrap().re, 0.0);
        assert_eq!(pm.eval(0, 0.0), Err(Error::OnConeSingularity));
        assert_eq!(pm.eval(0, -0.5).unwrap().re, 0.0);
    }

    #[test]
    fn validation() {
        assert!(Profile::bessel_k(Order::integer(1), C64::new(0.0, 1.0)).is_err());
        assert!(Profile::bessel_k(Order::integer(-1), C64::new(1.0, 0.0)).is_err());
        assert!(Profile::bessel_j_cone(Order::from_twice(1), 0.0).is_err());
        assert!(Profile::bessel_j_cone(Order::integer(1), 1.0).is_err());
    }

    fn fd_check(p: &Profile, args: &[f64]) {
        for &a in args {
            for k in 1..=3u32 {
                let h = 1e-3 * a;
                let f = |x: f64| p.eval(k - 1, x).unwrap();
                let d1 = (f(a + h) - f(a - h)) / (2.0 * h);
                let d2 = (f(a + 2.0 * h) - f(a - 2.0 * h)) / (4.0 * h);
                let fd = (d1 * 4.0 - d2) / 3.0;
                let exact = p.eval(k, a).unwrap();
                assert!((fd - exact).norm() < 1e-7 * exact.norm().max(1e-300), "{p:?} k={k} at {a}: {fd} vs {exact}");
            }
        }
    }

    #[test]
    fn recurrences_match_finite_differences() {
        let args = [0.3, 1.0, 2.5, 7.0];
        fd_check(&Profile::power(2), &args);
        fd_check(&Profile::bessel_k(Order::from_twice(3), C64::new(1.5, 0.0)).unwrap(), &args);
        fd_check(&Profile::bessel_k(Order::integer(1), C64::new(1.0, 0.7)).unwrap(), &args);
        fd_check(&Profile::trunc_power(r(5, 2)), &args);
        fd_check(&Profile::bessel_j_cone(Order::from_twice(1), 1.0).unwrap(), &args);
        fd_check(&Profile::bessel_j_cone(Order::from_twice(3), 2.0).unwrap(), &args);
    }

    #[test]
    fn j_cone_example_point() {
        let p = Profile::bessel_j_cone(Order::from_twice(1), 1.0).unwrap();
        let u = PI * PI / 4.0;
        let v = p.eval(1, u).unwrap().re;
        // (1/2) P_{−1/2}(u) with z = π/2: (1/2) z^{−1/2} J_{−1/2}(z) = (1/2)√(2/π) cos(z)/z = 0
        assert!(v.abs() < 1e-15);
        let h = 1e-5;
        let fd = (p.eval(0, u + h).unwrap().re - p.eval(0, u - h).unwrap().re) / (2.0 * h);
        assert!((fd - v).abs() < 1e-8);
    }

    #[test]
    fn eval_run_matches_single() {
        let p = Profile::bessel_k(Order::integer(0), C64::new(2.0, 1.0)).unwrap();
        let run = p.eval_run(4, 0.6).unwrap();
        for (k, v) in run.iter().enumerate() {
            let single = p.eval(k as u32, 0.6).unwrap();
            assert!((v - single).norm() <= 1e-14 * single.norm());
        }
    }
}
