//! Special functions used by the kernel formulas.
//!
//! Orders are carried exactly as [`Order`] (twice the order, as an integer) so
//! that the half-integer closed forms can be selected without floating-point
//! guesswork.

use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::domain;
use crate::quad::{gauss_kronrod_split, Tolerance};
use crate::{Result, C64};

/// Bessel order `λ = twice / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Order {
    twice: i32,
}

impl Order {
    pub const fn from_twice(twice: i32) -> Self {
        Order { twice }
    }

    pub const fn integer(n: i32) -> Self {
        Order { twice: 2 * n }
    }

    pub const fn twice(self) -> i32 {
        self.twice
    }

    pub fn value(self) -> f64 {
        self.twice as f64 / 2.0
    }

    pub const fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }

    pub const fn abs(self) -> Self {
        Order { twice: self.twice.abs() }
    }

    /// `λ + k`.
    pub const fn shift(self, k: i32) -> Self {
        Order { twice: self.twice + 2 * k }
    }
}

/// `Γ(twice/2)` for any half-integer or integer argument; `None` at the poles
/// `0, −1, −2, …`.
pub fn gamma_twice(twice: i32) -> Option<f64> {
    if twice <= 0 && twice % 2 == 0 {
        return None;
    }
    let (mut q, mut g) = if twice % 2 == 0 { (1.0, 1.0) } else { (0.5, PI.sqrt()) };
    let target = twice as f64 / 2.0;
    while q < target {
        g *= q;
        q += 1.0;
    }
    while q > target {
        q -= 1.0;
        g /= q;
    }
    Some(g)
}

/// `1/Γ(twice/2)`, zero at the poles.
pub fn inv_gamma_twice(twice: i32) -> f64 {
    gamma_twice(twice).map_or(0.0, |g| 1.0 / g)
}

/// `Γ(q)` for a positive half-integer or integer `q`, by the exact recurrence
/// `Γ(q+1) = qΓ(q)` from `Γ(1/2) = √π` or `Γ(1) = 1`.
pub fn gamma_half(q: f64) -> Result<f64> {
    let twice = 2.0 * q;
    if !(q > 0.0) || twice.fract() != 0.0 || twice > 342.0 {
        return Err(domain("gamma_half needs a positive half-integer argument not exceeding 171"));
    }
    Ok(gamma_twice(twice as i32).expect("positive argument has no pole"))
}

/// Surface area `ω_d = 2π^{d/2}/Γ(d/2)` of the unit sphere in `R^d`.
pub fn unit_sphere_area(d: i32) -> Result<f64> {
    if d < 1 {
        return Err(domain("unit sphere dimension must be at least 1"));
    }
    let g = gamma_twice(d).expect("positive argument has no pole");
    Ok(2.0 * PI.powf(d as f64 / 2.0) / g)
}

/// Beyond this real part `K_λ(z)` underflows and is returned as zero.
const K_UNDERFLOW_RE: f64 = 700.0;

/// Modified Bessel function of the second kind `K_λ(z)`, `Re z > 0`, for
/// half-integer or integer `λ` (negative orders use `K_{−λ} = K_λ`).
pub fn bessel_k(order: Order, z: C64) -> Result<C64> {
    Ok(bessel_k_run(order, 1, z)?[0])
}

/// `[K_λ(z), K_{λ+1}(z), …]` with `count` entries, sharing one base
/// evaluation and the upward recurrence `K_{ν+1} = K_{ν−1} + (2ν/z)K_ν`.
pub fn bessel_k_run(start: Order, count: usize, z: C64) -> Result<Vec<C64>> {
    if !(z.re > 0.0) || !z.im.is_finite() {
        return Err(domain("bessel_k needs Re z > 0"));
    }
    if count == 0 {
        return Ok(Vec::new());
    }
    let last = start.shift(count as i32 - 1);
    let top = start.twice().abs().max(last.twice().abs());
    if z.re > K_UNDERFLOW_RE {
        return Ok(alloc::vec![C64::new(0.0, 0.0); count]);
    }
    // table[i] = K_{base + i}, base = 0 or 1/2.
    let (base_twice, k0, k1) = if start.is_integer() {
        (0, k0_quad(z)?, k1_quad(z)?)
    } else {
        let k_half = (C64::new(PI / 2.0, 0.0) / z).sqrt() * (-z).exp();
        (1, k_half, k_half * (C64::new(1.0, 0.0) + z.inv()))
    };
    let len = ((top - base_twice) / 2 + 1).max(2) as usize;
    let mut table = Vec::with_capacity(len);
    table.push(k0);
    table.push(k1);
    while table.len() < len {
        let i = table.len();
        let nu = (base_twice as f64 / 2.0) + (i - 1) as f64;
        let next = table[i - 2] + table[i - 1] * (2.0 * nu) / z;
        table.push(next);
    }
    let out = (0..count)
        .map(|i| {
            let o = start.shift(i as i32).abs();
            table[((o.twice() - base_twice) / 2) as usize]
        })
        .collect();
    Ok(out)
}

fn k_tolerance() -> Tolerance {
    Tolerance { abs: 0.0, rel: 1e-13, max_intervals: 400 }
}

/// Breakpoints on `[0, 7]` for the Gaussian-weighted integrals below; the
/// factor `(1 + w²/(2z))` varies on the scale `√(2|z|)`.
fn k_breakpoints(z: C64) -> Vec<f64> {
    let mut pts = alloc::vec![0.0];
    let mut c = (2.0 * z.norm()).sqrt();
    while c < 7.0 {
        if c > 1e-9 {
            pts.push(c);
        }
        c *= 4.0;
    }
    pts.push(7.0);
    pts
}

// K_ν(z) = √(π/(2z)) e^{−z} / Γ(ν+1/2) · 2∫_0^∞ e^{−w²} w^{2ν} (1 + w²/(2z))^{ν−1/2} dw,
// a Laplace-type representation (substituting t = w²) that stays free of
// oscillation for complex z in the right half-plane.
fn k0_quad(z: C64) -> Result<C64> {
    let inv2z = (2.0 * z).inv();
    let one = C64::new(1.0, 0.0);
    let integral = gauss_kronrod_split(
        |w: f64| (one + inv2z * (w * w)).sqrt().inv() * (-w * w).exp(),
        &k_breakpoints(z),
        k_tolerance(),
    )?;
    Ok((C64::new(2.0, 0.0) / z).sqrt() * (-z).exp() * integral.value)
}

fn k1_quad(z: C64) -> Result<C64> {
    let inv2z = (2.0 * z).inv();
    let one = C64::new(1.0, 0.0);
    let integral = gauss_kronrod_split(
        |w: f64| (one + inv2z * (w * w)).sqrt() * (w * w * (-w * w).exp()),
        &k_breakpoints(z),
        k_tolerance(),
    )?;
    Ok((C64::new(2.0, 0.0) / z).sqrt() * 2.0 * (-z).exp() * integral.value)
}

/// Bessel function of the first kind `J_λ(z)` for half-integer `λ` (either
/// sign), `z ≥ 0`.
///
/// Negative orders run the three-term recurrence downward from `J_{±1/2}`
/// (the growing direction); positive orders use the power series below
/// `z = λ + 2` and the upward recurrence above it.
pub fn bessel_j_half(order: Order, z: f64) -> Result<f64> {
    if order.is_integer() {
        return Err(domain("bessel_j_half needs a half-integer order"));
    }
    if !(z >= 0.0) {
        return Err(domain("bessel_j_half needs z >= 0"));
    }
    let lambda = order.value();
    if z == 0.0 {
        return if lambda > 0.0 { Ok(0.0) } else { Err(domain("J_λ(0) is unbounded for λ < 0")) };
    }
    let c = (2.0 / (PI * z)).sqrt();
    let j_plus = c * z.sin(); // J_{1/2}
    let j_minus = c * z.cos(); // J_{-1/2}
    match order.twice() {
        1 => return Ok(j_plus),
        -1 => return Ok(j_minus),
        _ => {}
    }
    if lambda < 0.0 {
        // J_{μ−1} = (2μ/z) J_μ − J_{μ+1}
        let (mut hi, mut cur) = (j_plus, j_minus);
        let mut mu = -0.5;
        while mu > lambda {
            let next = (2.0 * mu / z) * cur - hi;
            hi = cur;
            cur = next;
            mu -= 1.0;
        }
        return Ok(cur);
    }
    if z < lambda + 2.0 {
        return Ok(j_series(order, z));
    }
    // J_{μ+1} = (2μ/z) J_μ − J_{μ−1}
    let (mut lo, mut cur) = (j_minus, j_plus);
    let mut mu = 0.5;
    while mu < lambda {
        let next = (2.0 * mu / z) * cur - lo;
        lo = cur;
        cur = next;
        mu += 1.0;
    }
    Ok(cur)
}

/// Power series `(z/2)^λ Σ (−z²/4)^m / (m! Γ(m+λ+1))`.
fn j_series(order: Order, z: f64) -> f64 {
    let lambda = order.value();
    let q = -0.25 * z * z;
    // Start at the first non-vanishing term (1/Γ has zeros only at integers,
    // which half-integer orders never hit).
    let mut term = inv_gamma_twice(order.twice() + 2);
    let mut sum = term;
    for m in 1..200 {
        let m = m as f64;
        term *= q / (m * (m + lambda));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    (0.5 * z).powf(lambda) * sum
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: C64, b: C64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(gamma_half(1.0).unwrap(), 1.0);
        assert!((gamma_half(0.5).unwrap() - 1.7724538509055159).abs() < 1e-15);
        assert!((gamma_half(2.5).unwrap() - 0.75 * PI.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn gamma_rejects_bad_input() {
        assert!(gamma_half(0.0).is_err());
        assert!(gamma_half(-1.5).is_err());
        assert!(gamma_half(1.25).is_err());
        assert!(gamma_half(f64::NAN).is_err());
    }

    #[test]
    fn gamma_recurrence_is_exact() {
        for twice in 1..60 {
            let q = twice as f64 / 2.0;
            let lhs = gamma_half(q + 1.0).unwrap();
            let rhs = q * gamma_half(q).unwrap();
            assert!((lhs - rhs).abs() <= 4.0 * f64::EPSILON * lhs, "q = {q}");
        }
    }

    #[test]
    fn gamma_negative_half_integers() {
        // Γ(−1/2) = −2√π, Γ(−3/2) = 4√π/3.
        assert!((gamma_twice(-1).unwrap() + 2.0 * PI.sqrt()).abs() < 1e-14);
        assert!((gamma_twice(-3).unwrap() - 4.0 * PI.sqrt() / 3.0).abs() < 1e-14);
        assert!(gamma_twice(0).is_none());
        assert!(gamma_twice(-4).is_none());
        assert_eq!(inv_gamma_twice(-2), 0.0);
    }

    #[test]
    fn sphere_areas() {
        assert!((unit_sphere_area(1).unwrap() - 2.0).abs() < 1e-15);
        assert!((unit_sphere_area(2).unwrap() - 2.0 * PI).abs() < 1e-14);
        assert!((unit_sphere_area(3).unwrap() - 4.0 * PI).abs() < 1e-14);
        assert!((unit_sphere_area(4).unwrap() - 2.0 * PI * PI).abs() < 1e-13);
        assert!((unit_sphere_area(4).unwrap() - 19.739208802178716).abs() < 1e-12);
        assert!(unit_sphere_area(0).is_err());
    }

    #[test]
    fn k_half_integer_examples() {
        let k = bessel_k(Order::from_twice(1), C64::new(1.0, 0.0)).unwrap();
        assert!((k.re - 0.46106850444789455844).abs() < 1e-15);
        let k = bessel_k(Order::from_twice(3), C64::new(2.0, 0.0)).unwrap();
        assert!((k.re - 0.17990665795209217105).abs() < 1e-15);
        // Negative order folds onto the positive one.
        let km = bessel_k(Order::from_twice(-3), C64::new(2.0, 0.0)).unwrap();
        assert_eq!(k, km);
    }

    // Frozen from an independent arbitrary-precision evaluation.
    const K_TABLE: [(i32, f64, f64, f64, f64); 21] = [
        (0, 0.001, 0.0, 7.0236888005623813436, 0.0),
        (0, 0.5, 0.0, 0.92441907122766586178, 0.0),
        (0, 1.0, 0.0, 0.42102443824070833334, 0.0),
        (0, 2.0, 0.0, 0.11389387274953343565, 0.0),
        (0, 10.0, 0.0, 0.000017780062316167651811, 0.0),
        (0, 50.0, 0.0, 3.4101677497894955139e-23, 0.0),
        (1, 0.001, 0.0, 999.99623815608557428, 0.0),
        (1, 0.5, 0.0, 1.6564411200033008937, 0.0),
        (1, 1.0, 0.0, 0.60190723019723457474, 0.0),
        (1, 2.0, 0.0, 0.13986588181652242728, 0.0),
        (1, 50.0, 0.0, 3.4441022267175556126e-23, 0.0),
        (2, 0.001, 0.0, 1999999.5000009717109, 0.0),
        (2, 1.0, 0.0, 1.6248388986351774828, 0.0),
        (2, 10.0, 0.0, 0.000021509817006932768731, 0.0),
        (0, 2.0, 1.0, 0.037987722915986459255, -0.1017135754613908733),
        (1, 2.0, 1.0, 0.036291592400427045571, -0.12406383457283476224),
        (0, 0.5, 2.0, -0.44690298020642235382, -0.26107140540714554867),
        (1, 0.5, 2.0, -0.53736312546798977928, -0.18334815008505182016),
        (0, 1.0, -3.0, -0.22982355550657931283, -0.11090662292701125466),
        (1, 0.2, 0.1, 3.7647638785839037879, -2.0612399881880611512),
        (0, 20.0, 30.0, 2.5760224381847567726e-10, 3.4352333025467321824e-10),
    ];

    #[test]
    fn k_integer_matches_reference_table() {
        for &(n, re, im, kre, kim) in K_TABLE.iter() {
            let got = bessel_k(Order::integer(n), C64::new(re, im)).unwrap();
            let want = C64::new(kre, kim);
            assert!(rel(got, want) < 1e-12, "K_{n}({re}+{im}i) = {got} vs {want}");
        }
    }

    #[test]
    fn k_complex_half_integer_reference() {
        let got = bessel_k(Order::from_twice(7), C64::new(0.5, 1.0)).unwrap();
        let want = C64::new(-9.1486740793769945369, 10.16775866862402013);
        assert!(rel(got, want) < 1e-13);
    }

    #[test]
    fn k_domain_and_underflow() {
        assert!(bessel_k(Order::integer(0), C64::new(0.0, 1.0)).is_err());
        assert!(bessel_k(Order::integer(0), C64::new(-1.0, 0.0)).is_err());
        assert_eq!(bessel_k(Order::from_twice(1), C64::new(701.0, 0.0)).unwrap(), C64::new(0.0, 0.0));
    }

    #[test]
    fn k_recurrence_consistency() {
        for twice in [1, 3, 5, 7, 0, 2, 4, 6, 8] {
            for x in [0.5, 1.0, 3.0, 10.0] {
                let z = C64::new(x, 0.3 * x);
                let lam = Order::from_twice(twice);
                let run = bessel_k_run(lam.shift(-1), 3, z).unwrap();
                let resid = run[2] - run[0] - run[1] * (2.0 * lam.value()) / z;
                assert!(resid.norm() < 1e-11 * run[2].norm(), "λ={} z={z}", lam.value());
            }
        }
    }

    #[test]
    fn j_examples() {
        let v = bessel_j_half(Order::from_twice(-1), PI).unwrap();
        assert!((v + 2f64.sqrt() / PI).abs() < 1e-15);
        let v = bessel_j_half(Order::from_twice(1), PI / 2.0).unwrap();
        assert!((v - 2.0 / PI).abs() < 1e-15);
        assert_eq!(bessel_j_half(Order::from_twice(1), 0.0).unwrap(), 0.0);
        assert!(bessel_j_half(Order::from_twice(1), -1.0).is_err());
        assert!(bessel_j_half(Order::integer(1), 1.0).is_err());
    }

    #[test]
    fn j_reference_values() {
        let cases = [
            (-7, 0.3, -816.63422761794646884),
            (5, 0.01, 5.3191924109550804572e-7),
            (3, 7.0, -0.19905171329249354882),
            (-11, 2.0, -20.978199575343456861),
            (3, 0.5, 0.091701699625651302638),
            (9, 3.0, 0.077597591180409847421),
        ];
        for (twice, z, want) in cases {
            let got = bessel_j_half(Order::from_twice(twice), z).unwrap();
            assert!(((got - want) / want).abs() < 1e-13, "J_{}({z}) = {got} vs {want}", twice as f64 / 2.0);
        }
    }

    #[test]
    fn j_recurrence_consistency() {
        for twice in [-9, -7, -5, -3, -1, 1, 3, 5, 7] {
            for z in [0.3, 1.0, 2.5, 6.0, 15.0] {
                let lam = Order::from_twice(twice);
                let a = bessel_j_half(lam.shift(-1), z).unwrap();
                let b = bessel_j_half(lam, z).unwrap();
                let c = bessel_j_half(lam.shift(1), z).unwrap();
                let scale = a.abs().max(b.abs()).max(c.abs()) * (1.0 + 2.0 * lam.value().abs() / z);
                assert!((a + c - 2.0 * lam.value() / z * b).abs() < 1e-11 * scale, "λ={} z={z}", lam.value());
            }
        }
    }
}
