//! Pairing in time: `⟨e(r, y, ·), ψ⟩` for a smooth `ψ` supported in `t > 0`.
//!
//! - `⟨t^e δ^{(k)}(u), ψ⟩ = [(−1/(2t) d/dt)^k (t^e ψ/(2t))]_{t=√s}`.
//! - `u_+^α` with `α ≤ −1` is raised through
//!   `⟨u_+^α, χ⟩ = −⟨u_+^{α+1}, d/dt(χ/(2t(α+1)))⟩` until `α > −1`.
//! - `P_λ` with `λ ≤ −1` is raised through
//!   `⟨P_λ, χ⟩ = −⟨P_{λ+1}, d/dt(χ/(ξt))⟩`.
//! - What is left is integrable and goes to tanh–sinh near the cone (with the
//!   distance to `√s` passed in exactly) and Gauss–Kronrod elsewhere.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use num_traits::{One, ToPrimitive};

use super::eval::{s_power, Point};
use super::{Factor, RadialExpr, RadialTerm};
use crate::profiles::{cone_power, Profile, Rational, Shifted, Variable};
use crate::quad::{gauss_kronrod_split, tanh_sinh, Estimate, Tolerance};
use crate::testfn::{check_support, Jet, TimeTest};
use crate::{Error, Result, C64};

#[derive(Debug, Clone, Copy)]
enum Weight {
    Power(Rational),
    Bessel(Profile),
}

/// `coeff · weight(u) · (D∘(1/t))^raises (t^e ψ)`
#[derive(Debug, Clone, Copy)]
struct ConeIntegrand {
    coeff: C64,
    weight: Weight,
    t_pow: u32,
    raises: u32,
}

/// `(D ∘ 1/t)^raises (t^e ψ)` at the jet's base point `t`.
fn chain_value(psi: &Jet, t: f64, t_pow: u32, raises: u32) -> f64 {
    let order = raises as usize;
    let mut chi = Jet::t_power(t, t_pow as i32, order).mul(psi);
    for _ in 0..raises {
        let inv = Jet::t_power(t, -1, chi.order());
        chi = chi.mul(&inv).diff();
    }
    chi.value()
}

/// `[(−1/(2t) d/dt)^k (t^{e−1} ψ/2)]` at the jet's base point.
fn delta_value(psi: &Jet, t: f64, t_pow: u32, k: u32) -> f64 {
    let mut chi = Jet::t_power(t, t_pow as i32 - 1, k as usize).mul(psi).scale(0.5);
    for _ in 0..k {
        let inv = Jet::t_power(t, -1, chi.order() - 1);
        chi = chi.diff().mul(&inv).scale(-0.5);
    }
    chi.value()
}

/// Lower a cone term to an integrable weight, raising the exponent where
/// needed.
fn lower(term: &RadialTerm, profiles: &[Profile], c: C64) -> Result<ConeIntegrand> {
    match term.factor {
        Factor::ConePower { alpha } => {
            let mut alpha = alpha;
            let mut coeff = c;
            let mut raises = 0;
            while alpha <= -Rational::one() {
                if alpha.is_integer() {
                    return Err(Error::Unsupported("negative integer cone power in a time pairing".into()));
                }
                let a1 = (alpha + Rational::one()).to_f64().unwrap_or(f64::NAN);
                coeff *= -1.0 / (2.0 * a1);
                alpha += Rational::one();
                raises += 1;
            }
            Ok(ConeIntegrand { coeff, weight: Weight::Power(alpha), t_pow: term.t_pow, raises })
        }
        Factor::ProfileDeriv { id, k } => {
            let (dc, shifted) = profiles[id].deriv_rule(k);
            let Shifted::Profile(Profile::BesselJCone { mut order, xi }) = shifted else {
                return Err(Error::Unsupported("cone profile without a pairing rule".into()));
            };
            let mut coeff = c * dc;
            let mut raises = 0;
            while order.twice() <= -2 {
                coeff *= -1.0 / xi;
                order = order.shift(1);
                raises += 1;
            }
            let weight = Weight::Bessel(Profile::BesselJCone { order, xi });
            Ok(ConeIntegrand { coeff, weight, t_pow: term.t_pow, raises })
        }
        _ => unreachable!("only cone terms are lowered"),
    }
}

impl Weight {
    fn at(&self, u: f64) -> Result<f64> {
        if !(u > 0.0) {
            return Ok(0.0);
        }
        match *self {
            Weight::Power(alpha) => cone_power(alpha, u),
            Weight::Bessel(p) => Ok(p.eval(0, u)?.re),
        }
    }
}

/// `⟨e(r, y, ·), ψ⟩` with the default tolerance.
pub fn pair_time(e: &RadialExpr, psi: &dyn TimeTest, r: f64, y: f64) -> Result<Estimate<C64>> {
    pair_time_with(e, psi, r, y, Tolerance::new(1e-13, 1e-10))
}

/// `⟨e(r, y, ·), ψ⟩`.
pub fn pair_time_with(e: &RadialExpr, psi: &dyn TimeTest, r: f64, y: f64, tol: Tolerance) -> Result<Estimate<C64>> {
    let (lo, hi) = check_support(psi)?;
    let s = r * r + y * y;
    let root = s.sqrt();
    let at = Point::new(r, y, None);

    let mut result = Estimate::zero();
    let mut flat: Vec<(C64, u32)> = Vec::new();
    let mut cone: Vec<ConeIntegrand> = Vec::new();
    for term in e.terms() {
        let c = term.coeff * y.powi(term.y_pow) * s_power(s, term.s_pow);
        match term.factor {
            Factor::ConeDelta { k } => {
                if root >= lo && root <= hi {
                    let jet = psi.jet(root, k as usize);
                    let v = delta_value(&jet, root, term.t_pow, k);
                    result.value += c * v;
                }
            }
            Factor::ConePower { .. } => cone.push(lower(term, e.profiles(), c)?),
            Factor::ProfileDeriv { id, .. } if e.profiles()[id].variable() == Variable::U => {
                cone.push(lower(term, e.profiles(), c)?)
            }
            _ => {
                let bare = RadialTerm { coeff: C64::new(1.0, 0.0), y_pow: 0, t_pow: 0, s_pow: num_traits::zero(), ..*term };
                let v = RadialExpr::from_terms(alloc::vec![bare], e.profiles().to_vec()).evaluate(at)?;
                flat.push((c * v, term.t_pow));
            }
        }
    }

    let mut breaks = psi.breakpoints();
    breaks.retain(|b| *b > lo && *b < hi);

    if !flat.is_empty() {
        let mut pts = alloc::vec![lo];
        pts.extend(breaks.iter().copied());
        pts.push(hi);
        let est = gauss_kronrod_split(
            |t: f64| flat.iter().fold(C64::new(0.0, 0.0), |acc, (c, e)| acc + c * t.powi(*e as i32)) * psi.value(t),
            &pts,
            tol,
        )?;
        result = result + est;
    }

    if cone.is_empty() {
        return Ok(result);
    }
    let a = root.max(lo);
    if a >= hi {
        return Ok(result);
    }
    let order = cone.iter().map(|c| c.raises).max().unwrap_or(0) as usize;
    let integrand = |t: f64, u: f64| -> Result<C64> {
        let jet = psi.jet(t, order);
        let mut acc = C64::new(0.0, 0.0);
        for ci in &cone {
            let w = ci.weight.at(u)?;
            if w != 0.0 {
                acc += ci.coeff * (w * chain_value(&jet, t, ci.t_pow, ci.raises));
            }
        }
        Ok(acc)
    };

    let mut failure = None;
    let mut guarded = |t: f64, u: f64| match integrand(t, u) {
        Ok(v) => v,
        Err(err) => {
            failure.get_or_insert(err);
            C64::new(0.0, 0.0)
        }
    };

    let mut rest_start = a;
    if root > lo {
        // The cone enters inside the support: singular endpoint at t = √s.
        let near_end = hi.min(a + 2.0 * psi.scale());
        let est = tanh_sinh(|t, dl, _| guarded(t, dl * (t + root)), a, near_end, tol)?;
        result = result + est;
        rest_start = near_end;
    }
    if rest_start < hi {
        let mut pts = alloc::vec![rest_start];
        pts.extend(breaks.iter().copied().filter(|b| *b > rest_start));
        pts.push(hi);
        let est = gauss_kronrod_split(|t: f64| guarded(t, (t - root) * (t + root)), &pts, tol)?;
        result = result + est;
    }
    match failure {
        Some(err) => Err(err),
        None => Ok(result),
    }
}

#[cfg(test)]
mod tests {
    use super::super::rat;
    use super::*;
    use crate::testfn::{Bump, GaussianPulse};

    fn one() -> C64 {
        C64::new(1.0, 0.0)
    }

    #[test]
    fn delta_against_gaussian() {
        let (r, y) = (0.6, 0.8);
        let psi = GaussianPulse::new(1.0, 0.05).unwrap();
        let v = pair_time(&RadialExpr::cone_delta(0), &psi, r, y).unwrap().value;
        assert!((v.re - 0.5).abs() < 1e-15);
    }

    #[test]
    fn heaviside_derivative_is_point_evaluation() {
        // ∂_t u_+^0 = 2t δ(u) pairs to ψ(√s).
        let psi = Bump::new(1.5, 0.8).unwrap();
        let e = RadialExpr::cone_power(rat(0, 1)).d_t();
        let v = pair_time(&e, &psi, 0.0, 1.2).unwrap().value;
        assert!((v.re - psi.value(1.2)).abs() < 1e-14);
    }

    #[test]
    fn integrable_power_is_plain_quadrature() {
        let psi = Bump::new(2.0, 0.5).unwrap();
        let e = RadialExpr::cone_power(rat(-1, 2));
        let v = pair_time(&e, &psi, 0.3, 0.4).unwrap().value;
        let direct = gauss_kronrod_split(
            |t: f64| psi.value(t) / (t * t - 0.25).sqrt(),
            &[1.5, 2.0, 2.5],
            Tolerance::new(0.0, 1e-13),
        )
        .unwrap();
        assert!((v.re - direct.value).abs() < 1e-12 * direct.value.abs());
    }

    #[test]
    fn raised_power_matches_substitution_oracle() {
        // ⟨u_+^{−3/2}, ψ⟩ with √s inside supp ψ. Oracle: with w = √(t² − s),
        // integrate by parts once in w to get a finite-part integral that is
        // plain: ∫ u^{−3/2} ψ dt = ∫_0^∞ w^{−2} ψ(t)/t dw  (dt = w dw / t)
        //   → FP = ∫_0^∞ (g(w) − g(0)) / w² dw − g(0)·∞-part dropped,
        // where g(w) = ψ(√(s+w²))/√(s+w²).
        let s: f64 = 1.0;
        let psi = Bump::new(1.2, 0.6).unwrap();
        let g = |w: f64| {
            let t = (s + w * w).sqrt();
            psi.value(t) / t
        };
        let g0 = g(0.0);
        let wmax = (1.8f64 * 1.8 - s).sqrt();
        let body = gauss_kronrod_split(
            |w: f64| if w == 0.0 { 0.0 } else { (g(w) - g0) / (w * w) },
            &[0.0, 0.2, 0.5, wmax],
            Tolerance::new(0.0, 1e-13),
        )
        .unwrap()
        .value;
        // Hadamard finite part of ∫_0^W (g(w) − g0 + g0)/w² dw: the g0 part
        // contributes −g0/W.
        let oracle = body - g0 / wmax;
        let v = pair_time(&RadialExpr::cone_power(rat(-3, 2)), &psi, 0.0, 1.0).unwrap().value;
        assert!((v.re - oracle).abs() < 1e-8, "{} vs {oracle}", v.re);
    }

    #[test]
    fn support_must_avoid_zero() {
        let psi = GaussianPulse::new(0.5, 0.1).unwrap();
        assert_eq!(pair_time(&RadialExpr::cone_delta(0), &psi, 0.0, 1.0).unwrap_err(), Error::SupportTouchesZero);
    }

    #[test]
    fn time_independent_terms() {
        let psi = Bump::new(2.0, 0.5).unwrap();
        let e = RadialExpr::monomial(one(), 0, 1, rat(-1, 1));
        let v = pair_time(&e, &psi, 1.0, 1.0).unwrap().value;
        let mass = gauss_kronrod_split(|t: f64| t * psi.value(t), &[1.5, 2.0, 2.5], Tolerance::default())
            .unwrap()
            .value;
        assert!((v.re - 0.5 * mass).abs() < 1e-12);
    }
}
