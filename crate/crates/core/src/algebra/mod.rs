//! Finite sums of terms `c · y^a · t^e · s^q · F` with `s = |x|² + y²`.
//!
//! `F` is one of
//!
//! - [`Factor::One`],
//! - a profile derivative `G^{(k)}` in `s` (Bessel-K) or in `u = t² − s`
//!   (Bessel-J on the cone),
//! - a truncated cone power `u_+^α`,
//! - a cone layer `δ^{(k)}(u)`.
//!
//! Power-law profiles are folded into `s^q` and truncated-power profiles into
//! [`Factor::ConePower`] on construction, so polyharmonic residuals cancel
//! symbolically. Every cone factor carries an implicit `Y(t)`: it vanishes for
//! `t ≤ 0` even where `u > 0`.

mod eval;
mod ops;
mod pair;

use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::profiles::{Profile, Rational, Variable};
use crate::C64;

pub use eval::Point;
pub use ops::Op;
pub use pair::{pair_time, pair_time_with};

/// Merged coefficients below this fraction of the largest one are dropped.
pub const DROP_RELATIVE: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum Factor {
    One,
    /// `k`-th derivative of `profiles[id]` with respect to its own variable.
    ProfileDeriv { id: usize, k: u32 },
    ConePower { alpha: Rational },
    ConeDelta { k: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RadialTerm {
    pub coeff: C64,
    pub y_pow: i32,
    pub t_pow: u32,
    pub s_pow: Rational,
    pub factor: Factor,
}

impl RadialTerm {
    fn key(&self) -> (Factor, i32, u32, Rational) {
        (self.factor, self.y_pow, self.t_pow, self.s_pow)
    }

    fn with(&self, coeff: C64, factor: Factor) -> RadialTerm {
        RadialTerm { coeff, factor, ..*self }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RadialExpr {
    terms: Vec<RadialTerm>,
    profiles: Vec<Profile>,
}

impl RadialExpr {
    pub fn zero() -> Self {
        RadialExpr::default()
    }

    /// `c · y^a · t^e · s^q`.
    pub fn monomial(coeff: C64, y_pow: i32, t_pow: u32, s_pow: Rational) -> Self {
        RadialExpr::from_terms(
            alloc::vec![RadialTerm { coeff, y_pow, t_pow, s_pow, factor: Factor::One }],
            Vec::new(),
        )
    }

    /// The profile function itself, in canonical form.
    pub fn profile(p: Profile) -> Self {
        let one = C64::new(1.0, 0.0);
        let base = RadialTerm { coeff: one, y_pow: 0, t_pow: 0, s_pow: Rational::zero(), factor: Factor::One };
        match p {
            Profile::Power { n } => {
                let q = Rational::new(-(n as i64 + 1), 2);
                RadialExpr::from_terms(alloc::vec![RadialTerm { s_pow: q, ..base }], Vec::new())
            }
            Profile::TruncPower { alpha } => {
                RadialExpr::from_terms(alloc::vec![base.with(one, Factor::ConePower { alpha })], Vec::new())
            }
            _ => RadialExpr::from_terms(
                alloc::vec![base.with(one, Factor::ProfileDeriv { id: 0, k: 0 })],
                alloc::vec![p],
            ),
        }
    }

    pub fn cone_power(alpha: Rational) -> Self {
        RadialExpr::profile(Profile::TruncPower { alpha })
    }

    pub fn cone_delta(k: u32) -> Self {
        let term = RadialTerm {
            coeff: C64::new(1.0, 0.0),
            y_pow: 0,
            t_pow: 0,
            s_pow: Rational::zero(),
            factor: Factor::ConeDelta { k },
        };
        RadialExpr::from_terms(alloc::vec![term], Vec::new())
    }

    /// Build from raw terms and a profile table, canonicalizing.
    pub fn from_terms(terms: Vec<RadialTerm>, profiles: Vec<Profile>) -> Self {
        let mut e = RadialExpr { terms, profiles };
        e.canonicalize();
        e
    }

    pub fn terms(&self) -> &[RadialTerm] {
        &self.terms
    }

    pub fn profiles(&self) -> &[Profile] {
        &self.profiles
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn has_delta(&self) -> bool {
        self.terms.iter().any(|t| matches!(t.factor, Factor::ConeDelta { .. }))
    }

    /// Whether evaluation needs a time coordinate.
    pub fn depends_on_t(&self) -> bool {
        self.terms.iter().any(|t| t.t_pow > 0 || self.is_cone(&t.factor))
    }

    pub(crate) fn is_cone(&self, f: &Factor) -> bool {
        match f {
            Factor::One => false,
            Factor::ProfileDeriv { id, .. } => self.profiles[*id].variable() == Variable::U,
            Factor::ConePower { .. } | Factor::ConeDelta { .. } => true,
        }
    }

    pub fn scale(&self, c: C64) -> Self {
        let terms = self.terms.iter().map(|t| RadialTerm { coeff: t.coeff * c, ..*t }).collect();
        RadialExpr::from_terms(terms, self.profiles.clone())
    }

    /// Multiply by `y^a · t^e · s^q`.
    pub fn mul_monomial(&self, y_pow: i32, t_pow: u32, s_pow: Rational) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| RadialTerm { y_pow: t.y_pow + y_pow, t_pow: t.t_pow + t_pow, s_pow: t.s_pow + s_pow, ..*t })
            .collect();
        RadialExpr::from_terms(terms, self.profiles.clone())
    }

    pub fn add(&self, other: &RadialExpr) -> Self {
        let mut profiles = self.profiles.clone();
        let remap: Vec<usize> = other.profiles.iter().map(|p| intern(&mut profiles, *p)).collect();
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().map(|t| {
            let factor = match t.factor {
                Factor::ProfileDeriv { id, k } => Factor::ProfileDeriv { id: remap[id], k },
                f => f,
            };
            RadialTerm { factor, ..*t }
        }));
        RadialExpr::from_terms(terms, profiles)
    }

    pub fn sub(&self, other: &RadialExpr) -> Self {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    /// Sort, merge like terms and drop float dust.
    fn canonicalize(&mut self) {
        self.terms.retain(|t| t.coeff != C64::new(0.0, 0.0));
        self.terms.sort_by_key(|t| t.key());
        let mut merged: Vec<RadialTerm> = Vec::with_capacity(self.terms.len());
        for t in self.terms.drain(..) {
            match merged.last_mut() {
                Some(last) if last.key() == t.key() => last.coeff += t.coeff,
                _ => merged.push(t),
            }
        }
        let max = merged.iter().map(|t| t.coeff.norm()).fold(0.0, f64::max);
        merged.retain(|t| t.coeff.norm() > DROP_RELATIVE * max);
        self.terms = merged;
        self.prune_profiles();
    }

    /// Drop profile-table entries that no term references.
    fn prune_profiles(&mut self) {
        let mut used = alloc::vec![false; self.profiles.len()];
        for t in &self.terms {
            if let Factor::ProfileDeriv { id, .. } = t.factor {
                used[id] = true;
            }
        }
        if used.iter().all(|u| *u) {
            return;
        }
        let mut remap = alloc::vec![usize::MAX; self.profiles.len()];
        let mut kept = Vec::new();
        for (i, p) in self.profiles.iter().enumerate() {
            if used[i] {
                remap[i] = kept.len();
                kept.push(*p);
            }
        }
        for t in &mut self.terms {
            if let Factor::ProfileDeriv { id, k } = t.factor {
                t.factor = Factor::ProfileDeriv { id: remap[id], k };
            }
        }
        self.profiles = kept;
        // Renumbering keeps relative order, so the sort is still valid.
    }

    /// Whether the term list is in canonical form (sorted, merged, no zeros).
    pub fn is_canonical(&self) -> bool {
        let mut again = self.clone();
        again.canonicalize();
        again == *self
    }
}

fn intern(table: &mut Vec<Profile>, p: Profile) -> usize {
    match table.iter().position(|q| *q == p) {
        Some(i) => i,
        None => {
            table.push(p);
            table.len() - 1
        }
    }
}

#[cfg(test)]
pub(crate) fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

pub(crate) fn rat_one() -> Rational {
    Rational::one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::Order;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn like_terms_merge_and_cancel() {
        let a = RadialExpr::monomial(c(2.0), 1, 0, rat(-1, 2));
        let b = RadialExpr::monomial(c(3.0), 1, 0, rat(-1, 2));
        let sum = a.add(&b);
        assert_eq!(sum.terms().len(), 1);
        assert_eq!(sum.terms()[0].coeff, c(5.0));
        assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn power_profiles_fold_into_s_pow() {
        let e = RadialExpr::profile(Profile::power(2));
        assert_eq!(e.terms()[0].s_pow, rat(-3, 2));
        assert_eq!(e.terms()[0].factor, Factor::One);
        assert!(e.profiles().is_empty());
        let w = RadialExpr::profile(Profile::trunc_power(rat(1, 2)));
        assert_eq!(w.terms()[0].factor, Factor::ConePower { alpha: rat(1, 2) });
    }

    #[test]
    fn profile_tables_are_shared_on_add() {
        let p = Profile::bessel_k(Order::integer(1), c(1.0)).unwrap();
        let q = Profile::bessel_k(Order::integer(2), c(1.0)).unwrap();
        let e = RadialExpr::profile(p).add(&RadialExpr::profile(q)).add(&RadialExpr::profile(p));
        assert_eq!(e.profiles().len(), 2);
        assert_eq!(e.terms().len(), 2);
        assert_eq!(e.terms()[0].coeff, c(2.0));
        assert!(e.is_canonical());
    }

    #[test]
    fn dust_is_dropped() {
        let a = RadialExpr::monomial(c(1.0), 0, 0, rat(0, 1));
        let b = RadialExpr::monomial(c(1e-17), 2, 0, rat(0, 1));
        assert_eq!(a.add(&b).terms().len(), 1);
    }
}
