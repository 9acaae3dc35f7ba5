//! Numerical integration.
//!
//! Three tools cover every integral in the crate:
//!
//! - [`gauss_kronrod`]: globally adaptive 7/15-point Gauss–Kronrod bisection
//!   for smooth integrands on finite intervals (optionally pre-split at
//!   caller-supplied breakpoints).
//! - [`tanh_sinh`]: double-exponential quadrature for integrable algebraic
//!   endpoint singularities. The integrand receives the distance to both
//!   endpoints so that `t² − s` can be formed without cancellation.
//! - [`wynn_epsilon`]: sequence acceleration for alternating partial sums of
//!   oscillatory tails.

use alloc::vec::Vec;
use core::ops::{Add, Mul, Sub};

#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result, C64};

/// Scalar types an integrator can accumulate.
pub trait QuadValue: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
    fn recip(self) -> Self;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn recip(self) -> Self {
        1.0 / self
    }
}

impl QuadValue for C64 {
    fn zero() -> Self {
        C64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn recip(self) -> Self {
        self.inv()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_intervals: usize,
}

impl Tolerance {
    pub const fn new(abs: f64, rel: f64) -> Self {
        Tolerance { abs, rel, max_intervals: 4000 }
    }

    pub fn target(&self, value: f64) -> f64 {
        self.abs.max(self.rel * value.abs())
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance::new(1e-13, 1e-12)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<T> {
    pub value: T,
    pub error: f64,
}

impl<T: QuadValue> Estimate<T> {
    pub fn zero() -> Self {
        Estimate { value: T::zero(), error: 0.0 }
    }
}

impl<T: QuadValue> Add for Estimate<T> {
    type Output = Self;
    fn add(self, other: Self) -> Self {
        Estimate { value: self.value + other.value, error: self.error + other.error }
    }
}

// Kronrod abscissae (positive half, descending) and weights; Gauss 7-point
// weights attach to the odd-indexed abscissae.
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15<T: QuadValue, F: FnMut(f64) -> T>(f: &mut F, a: f64, b: f64) -> (T, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut fv = [T::zero(); 15];
    fv[7] = f(c);
    for i in 0..7 {
        let dx = h * XGK[i];
        fv[i] = f(c - dx);
        fv[14 - i] = f(c + dx);
    }
    let mut kron = fv[7] * WGK[7];
    let mut gauss = fv[7] * WG[3];
    let mut res_abs = fv[7].magnitude() * WGK[7];
    for i in 0..7 {
        let pair = fv[i] + fv[14 - i];
        kron = kron + pair * WGK[i];
        res_abs += WGK[i] * (fv[i].magnitude() + fv[14 - i].magnitude());
        if i % 2 == 1 {
            gauss = gauss + pair * WG[i / 2];
        }
    }
    let mean = kron * 0.5;
    let mut res_asc = WGK[7] * (fv[7] - mean).magnitude();
    for i in 0..7 {
        res_asc += WGK[i] * ((fv[i] - mean).magnitude() + (fv[14 - i] - mean).magnitude());
    }
    let habs = h.abs();
    let kron = kron * h;
    res_abs *= habs;
    res_asc *= habs;
    let mut err = ((kron - gauss * h).magnitude()).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    (kron, err)
}

/// Adaptive Gauss–Kronrod on `[a, b]`.
pub fn gauss_kronrod<T, F>(f: F, a: f64, b: f64, tol: Tolerance) -> Result<Estimate<T>>
where
    T: QuadValue,
    F: FnMut(f64) -> T,
{
    gauss_kronrod_split(f, &[a, b], tol)
}

/// Adaptive Gauss–Kronrod over the union of consecutive intervals
/// `[p0, p1], [p1, p2], …`. Degenerate pieces are skipped.
pub fn gauss_kronrod_split<T, F>(mut f: F, points: &[f64], tol: Tolerance) -> Result<Estimate<T>>
where
    T: QuadValue,
    F: FnMut(f64) -> T,
{
    struct Piece<T> {
        a: f64,
        b: f64,
        value: T,
        error: f64,
    }

    let mut pieces: Vec<Piece<T>> = Vec::new();
    for w in points.windows(2) {
        let (a, b) = (w[0], w[1]);
        if !(b > a) {
            continue;
        }
        let (value, error) = gk15(&mut f, a, b);
        pieces.push(Piece { a, b, value, error });
    }
    if pieces.is_empty() {
        return Ok(Estimate::zero());
    }

    loop {
        let mut total = T::zero();
        let mut err = 0.0;
        let mut worst = 0;
        for (i, p) in pieces.iter().enumerate() {
            total = total + p.value;
            err += p.error;
            if p.error > pieces[worst].error {
                worst = i;
            }
        }
        let target = tol.target(total.magnitude());
        if err <= target {
            return Ok(Estimate { value: total, error: err });
        }
        let p = &pieces[worst];
        let mid = 0.5 * (p.a + p.b);
        if pieces.len() >= tol.max_intervals || !(mid > p.a && mid < p.b) {
            return Err(Error::Quadrature { estimate: err, requested: target });
        }
        let (a, b) = (p.a, p.b);
        let (v1, e1) = gk15(&mut f, a, mid);
        let (v2, e2) = gk15(&mut f, mid, b);
        pieces[worst] = Piece { a, b: mid, value: v1, error: e1 };
        pieces.push(Piece { a: mid, b, value: v2, error: e2 });
    }
}

/// Tanh–sinh quadrature on `[a, b]`.
///
/// `f(x, x − a, b − x)` gets both endpoint distances computed from the
/// transformation itself, which keeps integrands like `(t² − s)^α` accurate
/// right up to the singular endpoint.
pub fn tanh_sinh<T, F>(mut f: F, a: f64, b: f64, tol: Tolerance) -> Result<Estimate<T>>
where
    T: QuadValue,
    F: FnMut(f64, f64, f64) -> T,
{
    if !(b > a) {
        return Ok(Estimate::zero());
    }
    const T_MAX: f64 = 4.0;
    const MAX_LEVEL: u32 = 12;
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let frac_pi_2 = core::f64::consts::FRAC_PI_2;

    let mut sum = f(mid, half, half) * (half * frac_pi_2);
    // Contribution of the abscissa pair ±t, weight included.
    let mut node = |t: f64| -> T {
        let u = frac_pi_2 * t.sinh();
        let e = (-2.0 * u).exp();
        // Distance from the nearer endpoint: half·(1 − tanh u) = 2·half·e/(1 + e).
        let near = 2.0 * half * e / (1.0 + e);
        let far = 2.0 * half - near;
        let ch = u.cosh();
        let w = half * frac_pi_2 * t.cosh() / (ch * ch);
        if w == 0.0 || near == 0.0 {
            return T::zero();
        }
        (f(a + near, near, far) + f(b - near, far, near)) * w
    };

    let mut h = 1.0;
    let mut k = 1.0;
    while k * h <= T_MAX {
        sum = sum + node(k * h);
        k += 1.0;
    }
    let mut prev = sum * h;
    let mut last_diff = f64::INFINITY;
    for _ in 0..MAX_LEVEL {
        h *= 0.5;
        let mut k = 1.0;
        while k * h <= T_MAX {
            sum = sum + node(k * h);
            k += 2.0;
        }
        let cur = sum * h;
        let diff = (cur - prev).magnitude();
        if diff <= tol.target(cur.magnitude()) {
            return Ok(Estimate { value: cur, error: diff });
        }
        last_diff = diff;
        prev = cur;
    }
    Err(Error::Quadrature { estimate: last_diff, requested: tol.target(prev.magnitude()) })
}

/// Wynn's epsilon algorithm applied to a sequence of partial sums; returns the
/// last well-defined even-column entry together with a crude error estimate
/// (difference of the last two such entries).
pub fn wynn_epsilon<T: QuadValue>(partial: &[T]) -> (T, f64) {
    match partial.len() {
        0 => return (T::zero(), 0.0),
        1 => return (partial[0], f64::INFINITY),
        _ => {}
    }
    // e_prev = ε_{k-1}, e_cur = ε_k columns; even columns are estimates.
    let n = partial.len();
    let mut e_prev: Vec<Option<T>> = alloc::vec![Some(T::zero()); n + 1];
    let mut e_cur: Vec<Option<T>> = partial.iter().map(|&v| Some(v)).collect();
    let mut best = partial[n - 1];
    let mut best_prev = partial[n - 2];
    let mut col = 0usize;
    while e_cur.len() > 1 {
        let mut next = Vec::with_capacity(e_cur.len() - 1);
        for i in 0..e_cur.len() - 1 {
            let v = match (e_cur[i + 1], e_cur[i], e_prev[i + 1]) {
                (Some(a), Some(b), Some(c)) => {
                    let d = a - b;
                    let m = d.magnitude();
                    if m == 0.0 {
                        None
                    } else {
                        Some(c + d.recip())
                    }
                }
                _ => None,
            };
            next.push(v);
        }
        col += 1;
        if col.is_multiple_of(2) {
            let valid: Vec<T> = next.iter().filter_map(|v| *v).collect();
            if valid.len() >= 2 {
                best = valid[valid.len() - 1];
                best_prev = valid[valid.len() - 2];
            } else if valid.len() == 1 {
                best_prev = best;
                best = valid[0];
            }
        }
        e_prev = e_cur;
        e_cur = next;
    }
    (best, (best - best_prev).magnitude())
}
