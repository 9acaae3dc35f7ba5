//! Differential operators on [`RadialExpr`].
//!
//! With `ρ = |x|²`, every `x`- and `y`-derivative factors through
//! `D = ∂/∂ρ`, which acts as `d/ds` on radial factors and as `−d/du` on cone
//! factors:
//!
//! - `∂_y (y^a F) = a y^{a−1} F + 2 y^{a+1} D F`
//! - `Δ_n F = 2n D F + 4 (s − y²) D² F`
//! - `∂_t (t^e F) = e t^{e−1} F + 2 t^{e+1} (d/du) F`

use alloc::vec::Vec;

use num_traits::{ToPrimitive, Zero};

use super::{rat_one, Factor, RadialExpr, RadialTerm};
use crate::profiles::Variable;
use crate::C64;

/// Operator tags accepted by [`RadialExpr::op_power`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Op {
    DY,
    NegDY,
    InvYDY,
    DT,
    LapX(u32),
    /// `Δ_n + ∂_y² − p²`
    Helmholtz(u32, C64),
    /// `Δ_n + ∂_y² − ∂_t² − ξ²`
    Dalembert(u32, f64),
}

impl RadialExpr {
    fn map_terms(&self, f: impl Fn(&RadialTerm, &mut Vec<RadialTerm>)) -> RadialExpr {
        let mut out = Vec::with_capacity(3 * self.terms.len());
        for t in &self.terms {
            f(t, &mut out);
        }
        RadialExpr::from_terms(out, self.profiles.clone())
    }

    /// `D` on the `s^q · F` part of a term, keeping `y^a t^e`.
    fn d_rho_term(&self, t: &RadialTerm, out: &mut Vec<RadialTerm>) {
        if !t.s_pow.is_zero() {
            let q = t.s_pow.to_f64().unwrap_or(f64::NAN);
            out.push(RadialTerm { coeff: t.coeff * q, s_pow: t.s_pow - rat_one(), ..*t });
        }
        self.factor_deriv(t, -1.0, true, out);
    }

    /// Derivative of the factor alone. Cone factors get `sign · d/du`; radial
    /// profiles get `d/ds` when `radial` is set and vanish otherwise.
    fn factor_deriv(&self, t: &RadialTerm, sign: f64, radial: bool, out: &mut Vec<RadialTerm>) {
        match t.factor {
            Factor::One => {}
            Factor::ProfileDeriv { id, k } => {
                let f = Factor::ProfileDeriv { id, k: k + 1 };
                match self.profiles[id].variable() {
                    Variable::S if radial => out.push(t.with(t.coeff, f)),
                    Variable::S => {}
                    Variable::U => out.push(t.with(t.coeff * sign, f)),
                }
            }
            Factor::ConePower { alpha } => {
                if alpha.is_zero() {
                    out.push(t.with(t.coeff * sign, Factor::ConeDelta { k: 0 }));
                } else {
                    let a = alpha.to_f64().unwrap_or(f64::NAN);
                    out.push(t.with(t.coeff * (sign * a), Factor::ConePower { alpha: alpha - rat_one() }));
                }
            }
            Factor::ConeDelta { k } => out.push(t.with(t.coeff * sign, Factor::ConeDelta { k: k + 1 })),
        }
    }

    /// `D` applied to every term.
    fn d_rho(&self) -> RadialExpr {
        self.map_terms(|t, out| self.d_rho_term(t, out))
    }

    pub fn d_y(&self) -> RadialExpr {
        let d = self.d_rho();
        let power = self.map_terms(|t, out| {
            if t.y_pow != 0 {
                out.push(RadialTerm { coeff: t.coeff * t.y_pow as f64, y_pow: t.y_pow - 1, ..*t });
            }
        });
        power.add(&d.mul_monomial(1, 0, num_traits::zero()).scale(C64::new(2.0, 0.0)))
    }

    /// `(1/y) ∂_y`
    pub fn inv_y_d_y(&self) -> RadialExpr {
        let d = self.d_rho();
        let power = self.map_terms(|t, out| {
            if t.y_pow != 0 {
                out.push(RadialTerm { coeff: t.coeff * t.y_pow as f64, y_pow: t.y_pow - 2, ..*t });
            }
        });
        power.add(&d.scale(C64::new(2.0, 0.0)))
    }

    pub fn d_t(&self) -> RadialExpr {
        self.map_terms(|t, out| {
            if t.t_pow > 0 {
                out.push(RadialTerm { coeff: t.coeff * t.t_pow as f64, t_pow: t.t_pow - 1, ..*t });
            }
            let mut chain = Vec::new();
            self.factor_deriv(t, 1.0, false, &mut chain);
            out.extend(chain.into_iter().map(|c| RadialTerm { coeff: c.coeff * 2.0, t_pow: c.t_pow + 1, ..c }));
        })
    }

    /// `Δ_n` in the `n` variables `x`.
    pub fn laplacian_x(&self, n: u32) -> RadialExpr {
        let d1 = self.d_rho();
        let d2 = d1.d_rho();
        let zero = num_traits::zero();
        d1.scale(C64::new(2.0 * n as f64, 0.0))
            .add(&d2.mul_monomial(0, 0, rat_one()).scale(C64::new(4.0, 0.0)))
            .sub(&d2.mul_monomial(2, 0, zero).scale(C64::new(4.0, 0.0)))
    }

    pub fn apply(&self, op: Op) -> RadialExpr {
        let mut parts = self.apply_parts(op).into_iter();
        let first = parts.next().unwrap_or_default();
        parts.fold(first, |acc, p| acc.add(&p))
    }

    /// The summands of `op(self)` before they are merged: `Δ_n e`, `∂_y² e`,
    /// `−∂_t² e`, `−c e` for the second-order operators, one piece otherwise.
    pub fn apply_parts(&self, op: Op) -> Vec<RadialExpr> {
        match op {
            Op::DY => alloc::vec![self.d_y()],
            Op::NegDY => alloc::vec![self.d_y().scale(C64::new(-1.0, 0.0))],
            Op::InvYDY => alloc::vec![self.inv_y_d_y()],
            Op::DT => alloc::vec![self.d_t()],
            Op::LapX(n) => alloc::vec![self.laplacian_x(n)],
            Op::Helmholtz(n, p) => {
                alloc::vec![self.laplacian_x(n), self.d_y().d_y(), self.scale(-(p * p))]
            }
            Op::Dalembert(n, xi) => alloc::vec![
                self.laplacian_x(n),
                self.d_y().d_y(),
                self.d_t().d_t().scale(C64::new(-1.0, 0.0)),
                self.scale(C64::new(-xi * xi, 0.0)),
            ],
        }
    }

    /// `op^m (self)`.
    pub fn op_power(&self, op: Op, m: u32) -> RadialExpr {
        (0..m).fold(self.clone(), |e, _| e.apply(op))
    }
}
