//! Pointwise evaluation.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use num_traits::ToPrimitive;

use super::{Factor, RadialExpr};
use crate::error::domain;
use crate::profiles::{cone_power, Rational, Variable};
use crate::{Error, Result, C64};

/// Evaluation point `(r = |x|, y, t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub r: f64,
    pub y: f64,
    pub t: Option<f64>,
}

impl Point {
    pub fn new(r: f64, y: f64, t: Option<f64>) -> Self {
        Point { r, y, t }
    }

    pub fn s(&self) -> f64 {
        self.r * self.r + self.y * self.y
    }
}

/// Value together with the largest single-term magnitude, the scale against
/// which cancellation is measured.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub value: C64,
    pub max_term: f64,
}

pub(crate) fn s_power(s: f64, q: Rational) -> f64 {
    let (n, d) = (*q.numer(), *q.denom());
    if d == 1 {
        s.powi(n as i32)
    } else if d == 2 {
        s.sqrt().powi(n as i32)
    } else {
        s.powf(q.to_f64().unwrap_or(f64::NAN))
    }
}

impl RadialExpr {
    /// Pointwise value. Fails on any cone layer, on a negative cone power
    /// exactly on the cone, and when a time-dependent term gets no `t`.
    pub fn evaluate(&self, at: Point) -> Result<C64> {
        Ok(self.evaluate_terms(at, false)?.value)
    }

    /// Like [`evaluate`](Self::evaluate), but cone layers count as zero away
    /// from the cone `u = 0`.
    pub fn evaluate_off_cone(&self, at: Point) -> Result<C64> {
        Ok(self.evaluate_terms(at, true)?.value)
    }

    pub fn evaluate_terms(&self, at: Point, off_cone_layers: bool) -> Result<Evaluation> {
        let Point { r, y, t } = at;
        if !(y >= 0.0) || !r.is_finite() || !y.is_finite() {
            return Err(domain("evaluation needs finite r and y >= 0"));
        }
        let s = at.s();
        if !(s > 0.0) {
            return Err(domain("evaluation point is the origin"));
        }
        if self.depends_on_t() && t.is_none() {
            return Err(Error::MissingTime);
        }
        let tv = t.unwrap_or(0.0);
        let u = tv * tv - s;
        let forward = tv > 0.0;

        // Shared runs of profile derivatives.
        let mut runs: Vec<Option<Vec<C64>>> = alloc::vec![None; self.profiles.len()];
        for (id, p) in self.profiles.iter().enumerate() {
            let kmax = self
                .terms
                .iter()
                .filter_map(|t| match t.factor {
                    Factor::ProfileDeriv { id: i, k } if i == id => Some(k),
                    _ => None,
                })
                .max();
            let Some(kmax) = kmax else { continue };
            runs[id] = match p.variable() {
                Variable::S => Some(p.eval_run(kmax, s)?),
                Variable::U if forward => Some(p.eval_run(kmax, u)?),
                Variable::U => Some(alloc::vec![C64::new(0.0, 0.0); kmax as usize + 1]),
            };
        }

        let mut value = C64::new(0.0, 0.0);
        let mut max_term: f64 = 0.0;
        for term in &self.terms {
            let f = match term.factor {
                Factor::One => C64::new(1.0, 0.0),
                Factor::ProfileDeriv { id, k } => runs[id].as_ref().expect("run computed above")[k as usize],
                Factor::ConePower { alpha } => {
                    if !forward {
                        continue;
                    }
                    C64::new(cone_power(alpha, u)?, 0.0)
                }
                Factor::ConeDelta { .. } => {
                    if off_cone_layers && u != 0.0 {
                        continue;
                    }
                    return Err(Error::DeltaLayerPresent);
                }
            };
            if f == C64::new(0.0, 0.0) {
                continue;
            }
            if term.y_pow < 0 && y == 0.0 {
                return Err(domain("negative power of y at y = 0"));
            }
            let mono = y.powi(term.y_pow) * tv.powi(term.t_pow as i32) * s_power(s, term.s_pow);
            let v = term.coeff * mono * f;
            max_term = max_term.max(v.norm());
            value += v;
        }
        Ok(Evaluation { value, max_term })
    }
}

#[cfg(test)]
mod tests {
    use super::super::rat;
    use super::*;
    use core::f64::consts::PI;

    fn one() -> C64 {
        C64::new(1.0, 0.0)
    }

    #[test]
    fn examples() {
        assert_eq!(RadialExpr::zero().evaluate(Point::new(0.3, 0.2, None)).unwrap(), C64::new(0.0, 0.0));
        let e = RadialExpr::monomial(one(), 1, 0, rat(-1, 1));
        assert_eq!(e.evaluate(Point::new(0.0, 1.0, None)).unwrap(), one());
        let p = RadialExpr::monomial(C64::new(1.0 / PI, 0.0), 1, 0, rat(-1, 1));
        assert!((p.evaluate(Point::new(0.0, 1.0, None)).unwrap().re - core::f64::consts::FRAC_1_PI).abs() < 1e-15);
    }

    #[test]
    fn errors() {
        let d = RadialExpr::cone_delta(0);
        assert_eq!(d.evaluate(Point::new(0.0, 1.0, Some(3.0))), Err(Error::DeltaLayerPresent));
        assert_eq!(d.evaluate_off_cone(Point::new(0.0, 1.0, Some(3.0))).unwrap(), C64::new(0.0, 0.0));
        assert_eq!(d.evaluate_off_cone(Point::new(0.0, 1.0, Some(1.0))), Err(Error::DeltaLayerPresent));
        let c = RadialExpr::cone_power(rat(-1, 2));
        assert_eq!(c.evaluate(Point::new(0.0, 1.0, Some(1.0))), Err(Error::OnConeSingularity));
        assert_eq!(c.evaluate(Point::new(0.0, 1.0, None)), Err(Error::MissingTime));
        assert_eq!(c.evaluate(Point::new(0.0, 1.0, Some(0.5))).unwrap(), C64::new(0.0, 0.0));
        assert!(RadialExpr::monomial(one(), 0, 0, rat(-1, 1)).evaluate(Point::new(0.0, 0.0, None)).is_err());
    }

    #[test]
    fn cone_support_is_forward_only() {
        let c = RadialExpr::cone_power(rat(1, 2));
        assert_eq!(c.evaluate(Point::new(0.0, 0.6, Some(1.0))).unwrap().re, 0.8);
        assert_eq!(c.evaluate(Point::new(0.0, 0.6, Some(-1.0))).unwrap().re, 0.0);
    }

    #[test]
    fn max_term_tracks_cancellation() {
        let a = RadialExpr::monomial(one(), 2, 0, rat(0, 1));
        let b = RadialExpr::monomial(-one(), 0, 0, rat(1, 1));
        let ev = a.add(&b).evaluate_terms(Point::new(0.0, 2.0, None), false).unwrap();
        assert_eq!(ev.value, C64::new(0.0, 0.0));
        assert_eq!(ev.max_term, 4.0);
    }
}
