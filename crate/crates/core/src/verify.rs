//! Certification suites. Each suite checks one identity numerically and
//! returns one [`Report`] per kernel specification (or per case).
//!
//! Suites are deterministic: every report draws its points from a ChaCha
//! stream keyed by the seed, the suite name and the case label, so results do
//! not depend on the order in which suites run.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{pair_time_with, Op, Point, RadialExpr};
use crate::kernels::{
    build_kernel, closed_form, constant_boundary_transient, kleingordon_kernel, metaharmonic_kernel,
    polyharmonic_kernel, wave_kernel, Family, KernelSpec, Param, TransientExpr, Variant,
};
use crate::quad::{gauss_kronrod, gauss_kronrod_split, tanh_sinh, wynn_epsilon, Tolerance};
use crate::solver::{trace_field, BoundaryData, BoundaryEntry, Ladder, SolveOptions, Solver, SpatialData, TimeProfile};
use crate::specfun::{bessel_k, gamma_half, unit_sphere_area, Order};
use crate::testfn::{Bump, TimeTest};
use crate::{Error, Result, C64};

pub const DEFAULT_SEED: u64 = 7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    Residual,
    Trace,
    Eq2122,
    LaplacePair,
    FourierSlice,
    CauchyZero,
    ClosedForm,
    Normalization,
    Transient,
    KgLimit,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::Residual,
        Suite::Trace,
        Suite::Eq2122,
        Suite::LaplacePair,
        Suite::FourierSlice,
        Suite::CauchyZero,
        Suite::ClosedForm,
        Suite::Normalization,
        Suite::Transient,
        Suite::KgLimit,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Residual => "residual",
            Suite::Trace => "trace",
            Suite::Eq2122 => "eq2122",
            Suite::LaplacePair => "laplace-pair",
            Suite::FourierSlice => "fourier-slice",
            Suite::CauchyZero => "cauchy-zero",
            Suite::ClosedForm => "closed-form",
            Suite::Normalization => "normalization",
            Suite::Transient => "transient",
            Suite::KgLimit => "kg-limit",
        }
    }

    pub fn parse(name: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|s| s.name() == name)
    }

    pub fn tolerance(self) -> f64 {
        match self {
            Suite::Residual => 1e-8,
            Suite::Trace => 1e-3,
            Suite::Eq2122 => 1e-10,
            Suite::LaplacePair => 1e-6,
            Suite::FourierSlice => 1e-6,
            Suite::CauchyZero => 1e-4,
            Suite::ClosedForm => 1e-10,
            Suite::Normalization => 1e-6,
            Suite::Transient => 1e-3,
            Suite::KgLimit => 1e-4,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Info {
    pub key: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Report {
    pub suite: String,
    pub spec: String,
    pub n_points: usize,
    pub max_err: f64,
    pub tol: f64,
    pub pass: bool,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Vec::is_empty"))]
    pub info: Vec<Info>,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub note: Option<String>,
}

impl Report {
    fn new(suite: Suite, spec: String, n_points: usize, max_err: f64) -> Report {
        let tol = suite.tolerance();
        Report {
            suite: suite.name().to_string(),
            spec,
            n_points,
            max_err,
            tol,
            pass: max_err.is_finite() && max_err < tol,
            info: Vec::new(),
            note: None,
        }
    }

    fn failed(suite: Suite, spec: String, err: &Error) -> Report {
        let mut r = Report::new(suite, spec, 0, f64::INFINITY);
        r.note = Some(err.to_string());
        r
    }

    fn with_info(mut self, key: &str, value: f64) -> Report {
        self.info.push(Info { key: key.to_string(), value });
        self
    }

    /// One human-readable line.
    pub fn summary(&self) -> String {
        let mut s = format!(
            "{} {:<13} {:<44} n={:<3} max_err={:.3e} tol={:.0e}",
            if self.pass { "PASS" } else { "FAIL" },
            self.suite,
            self.spec,
            self.n_points,
            self.max_err,
            self.tol
        );
        for i in &self.info {
            s.push_str(&format!(" {}={:.3e}", i.key, i.value));
        }
        if let Some(n) = &self.note {
            s.push_str(" (");
            s.push_str(n);
            s.push(')');
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Points per report for the sampled suites.
    pub n_points: usize,
    /// Specs to check. Empty means every suite runs its default sweep;
    /// otherwise each suite checks the entries it applies to.
    pub specs: Vec<KernelSpec>,
    /// Multiplies the kernel under test; anything but 1 must make the
    /// comparison suites fail.
    pub tamper_scale: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { seed: DEFAULT_SEED, n_points: 20, specs: Vec::new(), tamper_scale: 1.0 }
    }
}

impl VerifyConfig {
    fn tamper(&self, e: RadialExpr) -> RadialExpr {
        if self.tamper_scale == 1.0 {
            e
        } else {
            e.scale(C64::new(self.tamper_scale, 0.0))
        }
    }

    fn specs_or(&self, accept: impl Fn(&KernelSpec) -> bool, default: impl FnOnce() -> Vec<KernelSpec>) -> Vec<KernelSpec> {
        let chosen: Vec<KernelSpec> = self.specs.iter().copied().filter(|s| accept(s)).collect();
        if self.specs.is_empty() {
            default()
        } else {
            chosen
        }
    }
}

fn fnv(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ *b as u64).wrapping_mul(0x0100_0000_01b3))
}

fn rng_for(seed: u64, suite: Suite, label: &str) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(fnv(suite.name().as_bytes()) ^ fnv(label.as_bytes()).rotate_left(17));
    rng
}

/// Points with `0.2 ≤ √s ≤ 5`, `y > 0`; hyperbolic points lie strictly inside
/// the forward cone.
pub fn sample_points(rng: &mut impl Rng, count: usize, hyperbolic: bool, max_radius: f64) -> Vec<Point> {
    (0..count)
        .map(|_| {
            let rad = rng.random_range(0.2..max_radius);
            let th = rng.random_range(0.05..FRAC_PI_2);
            let t = hyperbolic.then(|| rad * (1.0 + rng.random_range(0.05..1.0)));
            Point::new(rad * th.cos(), rad * th.sin(), t)
        })
        .collect()
}

fn each_spec(suite: Suite, specs: &[KernelSpec], f: impl Fn(&KernelSpec) -> Result<Report>) -> Vec<Report> {
    specs.iter().map(|s| f(s).unwrap_or_else(|e| Report::failed(suite, s.label(), &e))).collect()
}

fn sweep(family: Family, ns: core::ops::RangeInclusive<u32>, params: &[Param]) -> Vec<KernelSpec> {
    let mut out = Vec::new();
    for &param in params {
        for n in ns.clone() {
            for m in 1..=3 {
                for j in 0..m {
                    out.push(KernelSpec { family, n, m, j, param });
                }
            }
        }
    }
    out
}

/// Run one suite with its default (or configured) cases.
pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Vec<Report> {
    match suite {
        Suite::Residual => {
            let specs = cfg.specs_or(
                |_| true,
                || {
                    let mut v = sweep(Family::Polyharmonic, 1..=3, &[Param::None]);
                    v.extend(sweep(Family::Metaharmonic, 1..=3, &[Param::Complex(C64::new(2.0, 1.0))]));
                    v.extend(sweep(Family::Wave, 1..=3, &[Param::None]));
                    v.extend(sweep(Family::KleinGordon, 0..=2, &[Param::Real(1.3)]));
                    v
                },
            );
            each_spec(suite, &specs, |s| residual_suite(s, cfg))
        }
        Suite::Trace => {
            let specs = cfg.specs_or(
                |s| !s.family.is_hyperbolic() && s.n <= 2,
                || {
                    let mut v: Vec<_> = sweep(Family::Polyharmonic, 1..=2, &[Param::None]);
                    v.extend(sweep(Family::Metaharmonic, 1..=2, &[Param::Real(1.0)]));
                    // One report per (n, m): the suite covers every j itself.
                    v.retain(|s| s.j == 0);
                    v
                },
            );
            each_spec(suite, &specs, trace_suite)
        }
        Suite::Eq2122 => {
            let specs = cfg.specs_or(
                |s| s.family == Family::Metaharmonic,
                || {
                    sweep(
                        Family::Metaharmonic,
                        1..=3,
                        &[
                            Param::Real(1.0),
                            Param::Real(0.5),
                            Param::Complex(C64::new(2.0, 1.0)),
                            Param::Complex(C64::new(2.0, 2.0)),
                        ],
                    )
                },
            );
            each_spec(suite, &specs, |s| eq21_eq22_crosscheck(s, cfg))
        }
        Suite::LaplacePair => {
            let mut out = Vec::new();
            for n in [1u32, 3] {
                for p in [C64::new(1.0, 0.0), C64::new(2.0, 1.0)] {
                    let label = format!("n={n} p={}{:+}i", p.re, p.im);
                    out.push(laplace_pair_check(n, p, cfg).unwrap_or_else(|e| Report::failed(suite, label, &e)));
                }
            }
            out
        }
        Suite::FourierSlice => {
            let specs = cfg.specs_or(
                |s| s.family == Family::Metaharmonic && matches!(s.param, Param::Real(_)),
                || {
                    let mut v = Vec::new();
                    for xi in [1.0, 2.0, -1.5] {
                        for m in 1..=2 {
                            for j in 0..m {
                                v.push(KernelSpec { family: Family::Metaharmonic, n: 1, m, j, param: Param::Real(xi) });
                            }
                        }
                    }
                    v
                },
            );
            each_spec(suite, &specs, |s| fourier_slice_check(s, cfg))
        }
        Suite::CauchyZero => {
            let specs = cfg.specs_or(
                |s| s.family.is_hyperbolic(),
                || {
                    let mut v = sweep(Family::Wave, 1..=3, &[Param::None]);
                    v.push(KernelSpec { family: Family::KleinGordon, n: 0, m: 1, j: 0, param: Param::Real(1.0) });
                    v.push(KernelSpec { family: Family::KleinGordon, n: 1, m: 1, j: 0, param: Param::Real(1.0) });
                    v
                },
            );
            each_spec(suite, &specs, |s| cauchy_data_vanishing(s, 2 * s.m - 1))
        }
        Suite::ClosedForm => closed_form_suite(cfg),
        Suite::Normalization => {
            let specs = cfg.specs_or(
                |s| (s.family == Family::Polyharmonic || (s.family == Family::Metaharmonic && s.m == 1)) && s.n <= 2,
                || {
                    let mut v = Vec::new();
                    for n in 1..=2 {
                        for m in 1..=3 {
                            v.push(KernelSpec { family: Family::Polyharmonic, n, m, j: 0, param: Param::None });
                        }
                        for xi in [1.0, 0.5] {
                            v.push(KernelSpec { family: Family::Metaharmonic, n, m: 1, j: 0, param: Param::Real(xi) });
                        }
                    }
                    v
                },
            );
            each_spec(suite, &specs, normalization_check)
        }
        Suite::Transient => transient_suite(),
        Suite::KgLimit => alloc::vec![kg_wave_limit(cfg).unwrap_or_else(|e| Report::failed(
            suite,
            "klein_gordon n=0 xi=1e-3 vs wave n=1".into(),
            &e
        ))],
    }
}

/// Every suite in order.
pub fn run_all(cfg: &VerifyConfig) -> Vec<Report> {
    Suite::ALL.iter().flat_map(|s| run_suite(*s, cfg)).collect()
}

/// Relative size of `(operator)^m E` at seeded points, measured against the
/// largest single term among the summands of the last operator application.
pub fn residual_suite(spec: &KernelSpec, cfg: &VerifyConfig) -> Result<Report> {
    let suite = Suite::Residual;
    let mut kernels = alloc::vec![build_kernel(spec)?];
    if spec.family == Family::Metaharmonic {
        kernels.push(metaharmonic_kernel(spec, Variant::Eq22)?);
    }
    let hyperbolic = spec.family.is_hyperbolic();
    let mut rng = rng_for(cfg.seed, suite, &spec.label());
    let points = sample_points(&mut rng, cfg.n_points, hyperbolic, 5.0);
    let mut worst: f64 = 0.0;
    for e in kernels {
        let parts = e.op_power(spec.operator(), spec.m - 1).apply_parts(spec.operator());
        for p in &points {
            let mut value = C64::new(0.0, 0.0);
            let mut scale: f64 = 0.0;
            for part in &parts {
                let ev = part.evaluate_terms(*p, hyperbolic)?;
                value += ev.value;
                scale = scale.max(ev.max_term);
            }
            if scale > 0.0 {
                worst = worst.max(value.norm() / scale);
            }
        }
    }
    Ok(Report::new(suite, spec.label(), points.len(), worst))
}

/// Gaussian bump used as boundary data in the trace suite.
fn trace_bump(dim: usize) -> SpatialData {
    SpatialData::Gaussian { center: alloc::vec![0.0; dim], width: 0.5, amplitude: 1.0 }
}

fn trace_xs(dim: usize) -> Vec<Vec<f64>> {
    match dim {
        1 => alloc::vec![alloc::vec![-0.5], alloc::vec![0.0], alloc::vec![0.35]],
        _ => alloc::vec![alloc::vec![0.0; dim], {
            let mut v = alloc::vec![0.0; dim];
            v[0] = 0.3;
            v[1] = -0.2;
            v
        }],
    }
}

/// The full `(j, k)` table of `∂_y^k (E_j ∗ φ)|_{y=0}` against `δ_{jk} φ`.
pub fn trace_suite(spec: &KernelSpec) -> Result<Report> {
    let suite = Suite::Trace;
    let dim = spec.x_dim() as usize;
    let phi = trace_bump(dim);
    let xs = trace_xs(dim);
    let options = SolveOptions { tol: Tolerance::new(1e-15, 1e-12), ..SolveOptions::default() };
    let ladder = Ladder::default();
    let mut worst: f64 = 0.0;
    let mut unconverged = 0usize;
    let mut n = 0;
    for j in 0..spec.m {
        let entries = (0..spec.m)
            .map(|i| BoundaryEntry { spatial: if i == j { phi.clone() } else { SpatialData::Zero }, time: None })
            .collect();
        let solver = Solver::new(spec, &BoundaryData { entries }, options)?;
        for rep in trace_field(&solver, spec.m - 1, &xs, ladder)? {
            for (x, s) in rep.xs.iter().zip(&rep.samples) {
                let want = if rep.k == j { phi.value(x) } else { 0.0 };
                worst = worst.max((s.value - want).norm());
                if !s.converged || !s.error.is_finite() {
                    unconverged += 1;
                }
                n += 1;
            }
        }
    }
    let label = format!("{} (all j,k)", KernelSpec { j: 0, ..*spec }.label());
    let mut r = Report::new(suite, label, n, worst);
    if unconverged > 0 {
        r = r.with_info("unconverged", unconverged as f64);
    }
    Ok(r)
}

/// Both metaharmonic representations at seeded points.
pub fn eq21_eq22_crosscheck(spec: &KernelSpec, cfg: &VerifyConfig) -> Result<Report> {
    let suite = Suite::Eq2122;
    let a = cfg.tamper(metaharmonic_kernel(spec, Variant::Eq21)?);
    let b = metaharmonic_kernel(spec, Variant::Eq22)?;
    let mut rng = rng_for(cfg.seed, suite, &spec.label());
    let points = sample_points(&mut rng, cfg.n_points, false, 5.0);
    let mut worst: f64 = 0.0;
    for p in &points {
        let ea = a.evaluate_terms(*p, false)?;
        let eb = b.evaluate_terms(*p, false)?;
        let scale = ea.value.norm().max(eb.value.norm()).max(1e-3 * ea.max_term.max(eb.max_term));
        if scale > 0.0 {
            worst = worst.max((ea.value - eb.value).norm() / scale);
        }
    }
    Ok(Report::new(suite, spec.label(), points.len(), worst))
}

/// `√π/(Γ(n/2)(2√s)^{(n−1)/2}) ∫_{√s}^∞ e^{−pt} (t² − s)^{n/2−1} dt` by
/// quadrature.
pub fn laplace_integral(n: u32, p: C64, s: f64) -> Result<C64> {
    let root = s.sqrt();
    let a = n as f64 / 2.0 - 1.0;
    let c = PI.sqrt() / (gamma_half(n as f64 / 2.0)? * (2.0 * root).powf((n as f64 - 1.0) / 2.0));
    let f = |t: f64, d: f64| (-p * t).exp() * (d * (t + root)).powf(a);
    let tol = Tolerance::new(1e-16, 1e-12);
    let near = tanh_sinh(|t, dl, _| f(t, dl), root, root + 1.0, tol)?;
    let reach = 40.0 / p.re + 4.0 * n as f64;
    let far = gauss_kronrod(|t: f64| f(t, t - root), root + 1.0, root + reach, tol)?;
    Ok((near.value + far.value) * c)
}

/// The wave/metaharmonic Laplace pair against `K_{(n−1)/2}(p√s)/p^{(n−1)/2}`.
pub fn laplace_pair_check(n: u32, p: C64, cfg: &VerifyConfig) -> Result<Report> {
    let suite = Suite::LaplacePair;
    let label = format!("n={n} p={}{:+}i", p.re, p.im);
    let mut rng = rng_for(cfg.seed, suite, &label);
    let mut ss = alloc::vec![1.0];
    ss.extend(sample_points(&mut rng, 4, false, 5.0).iter().map(Point::s));
    let mut worst: f64 = 0.0;
    for &s in &ss {
        let lhs = laplace_integral(n, p, s)?;
        let rhs = bessel_k(Order::from_twice(n as i32 - 1), p * s.sqrt())? / p.sqrt().powi(n as i32 - 1);
        worst = worst.max((lhs - rhs).norm() / rhs.norm());
    }
    Ok(Report::new(suite, label, ss.len(), worst))
}

/// `∫_R e^{−iξs'} F(√(r² + s'²), y) ds'` for a radial expression `F` in one
/// more variable: half-period pieces between zeros of `cos(ξs')`, summed with
/// Wynn's epsilon algorithm.
pub fn fourier_slice(f: &RadialExpr, xi: f64, r: f64, y: f64) -> Result<(f64, f64)> {
    let w = xi.abs();
    let half = PI / w;
    let tol = Tolerance::new(1e-17, 1e-13);
    let mut fail = None;
    let mut g = |sp: f64| -> f64 {
        let rr = (r * r + sp * sp).sqrt();
        match f.evaluate(Point::new(rr, y, None)) {
            Ok(v) => 2.0 * (w * sp).cos() * v.re,
            Err(e) => {
                fail.get_or_insert(e);
                0.0
            }
        }
    };
    let scale = (r * r + y * y).sqrt();
    let first_end = 0.5 * half;
    let mut pts = alloc::vec![0.0];
    for c in [0.25, 1.0, 4.0] {
        if c * scale < first_end {
            pts.push(c * scale);
        }
    }
    pts.push(first_end);
    let mut total = gauss_kronrod_split(&mut g, &pts, tol)?.value;
    let mut partial = alloc::vec![total];
    for k in 1..=60 {
        let a = (k as f64 - 0.5) * half;
        let piece = gauss_kronrod(&mut g, a, a + half, tol)?.value;
        total += piece;
        partial.push(total);
        if k >= 8 && piece.abs() < 1e-17 * total.abs() {
            break;
        }
    }
    if let Some(e) = fail {
        return Err(e);
    }
    let last_piece = (partial[partial.len() - 1] - partial[partial.len() - 2]).abs();
    let tail = &partial[partial.len().saturating_sub(16)..];
    let (acc, acc_err) = wynn_epsilon(tail);
    if acc_err.is_finite() && acc_err < last_piece {
        Ok((acc, acc_err))
    } else {
        Ok((total, last_piece))
    }
}

/// Partial Fourier transform of the `(n+1)`-variable polyharmonic kernel
/// against the metaharmonic kernel.
pub fn fourier_slice_check(spec: &KernelSpec, cfg: &VerifyConfig) -> Result<Report> {
    let suite = Suite::FourierSlice;
    let Param::Real(xi) = spec.param else {
        return Err(Error::InvalidSpec("the Fourier slice needs a real xi".into()));
    };
    let upper = polyharmonic_kernel(&KernelSpec::polyharmonic(spec.n + 1, spec.m, spec.j)?)?;
    let meta = cfg.tamper(metaharmonic_kernel(spec, Variant::Eq21)?);
    let mut rng = rng_for(cfg.seed, suite, &spec.label());
    let points = sample_points(&mut rng, cfg.n_points.min(10), false, 5.0);
    let mut worst: f64 = 0.0;
    for p in &points {
        let (slice, _) = fourier_slice(&upper, xi, p.r, p.y)?;
        let ev = meta.evaluate_terms(*p, false)?;
        let scale = ev.value.norm().max(1e-3 * ev.max_term);
        worst = worst.max((slice - ev.value.re).abs().max(ev.value.im.abs()) / scale);
    }
    Ok(Report::new(suite, spec.label(), points.len(), worst))
}

/// Bump `φ` in `(|x|, y)` supported in the open half-space.
const CAUCHY_CENTER: f64 = 0.3;
const CAUCHY_RADIUS: f64 = 0.25;

fn cauchy_phi(rho: f64, y: f64) -> f64 {
    let q = (rho * rho + (y - CAUCHY_CENTER).powi(2)) / (CAUCHY_RADIUS * CAUCHY_RADIUS);
    if q >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - q)).exp()
    }
}

/// `⟨φ ⊗ ψ_ε, e⟩` with `ψ_ε` a bump of half-width `ε/2` centred at `ε`.
pub fn cauchy_pairing(e: &RadialExpr, dim: u32, eps: f64) -> Result<f64> {
    let psi = Bump::new(eps, 0.5 * eps)?;
    let omega = unit_sphere_area(dim as i32)?;
    let tol = Tolerance::new(1e-14, 1e-8);
    let pair_tol = Tolerance::new(1e-14, 1e-10);
    let mut fail = None;
    let outer = gauss_kronrod(
        |y: f64| {
            let reach = (CAUCHY_RADIUS.powi(2) - (y - CAUCHY_CENTER).powi(2)).max(0.0).sqrt();
            let inner = gauss_kronrod(
                |rho: f64| {
                    let phi = cauchy_phi(rho, y);
                    if phi == 0.0 || fail.is_some() {
                        return 0.0;
                    }
                    match pair_time_with(e, &psi, rho, y, pair_tol) {
                        Ok(v) => phi * rho.powi(dim as i32 - 1) * v.value.re,
                        Err(err) => {
                            fail = Some(err);
                            0.0
                        }
                    }
                },
                0.0,
                reach,
                tol,
            );
            inner.map(|v| v.value).unwrap_or_else(|err| {
                fail.get_or_insert(err);
                0.0
            })
        },
        CAUCHY_CENTER - CAUCHY_RADIUS,
        CAUCHY_CENTER + CAUCHY_RADIUS,
        tol,
    )?;
    match fail {
        Some(err) => Err(err),
        None => Ok(omega * outer.value),
    }
}

/// `⟨φ, ∂_t^k E_j(ε)⟩` for `k ≤ kmax` at concentration scale `ε = 10⁻²`.
///
/// The reported `onset_eps` is the scale above which the supports of
/// `φ ⊗ ψ_ε` and the kernel start to overlap; it is informative only.
pub fn cauchy_data_vanishing(spec: &KernelSpec, kmax: u32) -> Result<Report> {
    let suite = Suite::CauchyZero;
    if !spec.family.is_hyperbolic() {
        return Err(Error::InvalidSpec("Cauchy data only exist for hyperbolic families".into()));
    }
    let e = build_kernel(spec)?;
    let dim = spec.x_dim();
    let mut worst: f64 = 0.0;
    let mut d = e.clone();
    for _ in 0..=kmax {
        worst = worst.max(cauchy_pairing(&d, dim, 1e-2)?.abs());
        d = d.apply(Op::DT);
    }
    // ψ_ε reaches 3ε/2 and supp φ starts at √s = CENTER − RADIUS.
    let onset = 2.0 * (CAUCHY_CENTER - CAUCHY_RADIUS) / 3.0;
    let label = format!("{} k<={kmax}", spec.label());
    Ok(Report::new(suite, label, kmax as usize + 1, worst).with_info("onset_eps", onset))
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
}

fn compare<F>(suite: Suite, label: String, points: &[Point], mut f: F) -> Report
where
    F: FnMut(&Point) -> Result<(C64, C64)>,
{
    let mut worst: f64 = 0.0;
    for p in points {
        match f(p) {
            Ok((got, want)) => worst = worst.max(rel(got, want)),
            Err(e) => return Report::failed(suite, label, &e),
        }
    }
    Report::new(suite, label, points.len(), worst)
}

fn re(v: f64) -> C64 {
    C64::new(v, 0.0)
}

/// Algebra-built kernels against independent hand-expanded closed forms.
pub fn closed_form_suite(cfg: &VerifyConfig) -> Vec<Report> {
    let suite = Suite::ClosedForm;
    let mut out = Vec::new();
    let pts = |label: &str, hyperbolic: bool| {
        let mut rng = rng_for(cfg.seed, suite, label);
        sample_points(&mut rng, cfg.n_points, hyperbolic, 5.0)
    };
    let build = |r: Result<RadialExpr>| r.map(|e| cfg.tamper(e));

    for n in 1..=3u32 {
        let label = format!("poisson n={n}");
        let e = build(KernelSpec::polyharmonic(n, 1, 0).and_then(|s| polyharmonic_kernel(&s)));
        out.push(compare(suite, label.clone(), &pts(&label, false), |p| {
            Ok((e.clone()?.evaluate(*p)?, re(closed_form::poisson(n, p.r, p.y))))
        }));
        for j in 0..2u32 {
            let label = format!("biharmonic n={n} j={j}");
            let e = build(KernelSpec::polyharmonic(n, 2, j).and_then(|s| polyharmonic_kernel(&s)));
            out.push(compare(suite, label.clone(), &pts(&label, false), |p| {
                let want = if j == 0 { closed_form::biharmonic_e0(n, p.r, p.y) } else { closed_form::biharmonic_e1(n, p.r, p.y) };
                Ok((e.clone()?.evaluate(*p)?, re(want)))
            }));
        }
    }
    for m in 1..=3u32 {
        let label = format!("half-plane last index m={m}");
        let e = build(KernelSpec::polyharmonic(1, m, m - 1).and_then(|s| polyharmonic_kernel(&s)));
        out.push(compare(suite, label.clone(), &pts(&label, false), |p| {
            Ok((e.clone()?.evaluate(*p)?, re(closed_form::last_index_plane(m, p.r, p.y))))
        }));
    }
    for n in 1..=3u32 {
        for p in [C64::new(1.3, 0.0), C64::new(0.8, 0.6)] {
            let label = format!("metaharmonic m=1 n={n} p={}{:+}i", p.re, p.im);
            let e = build(KernelSpec::metaharmonic(n, 1, 0, p).and_then(|s| metaharmonic_kernel(&s, Variant::Eq21)));
            out.push(compare(suite, label.clone(), &pts(&label, false), |pt| {
                Ok((e.clone()?.evaluate(*pt)?, closed_form::metaharmonic_m1(n, p, pt.r, pt.y)?))
            }));
        }
    }

    let wave1 = build(KernelSpec::wave(1, 1, 0).and_then(|s| wave_kernel(&s)));
    let label = "wave n=1 E_0".to_string();
    out.push(compare(suite, label.clone(), &pts(&label, true), |p| {
        let t = p.t.unwrap_or(0.0);
        Ok((wave1.clone()?.evaluate(*p)?, re(closed_form::wave_n1(p.r, p.y, t))))
    }));
    let label = "wave n=1 constant-data response".to_string();
    out.push(compare(suite, label.clone(), &pts(&label, true), |p| {
        let TransientExpr::Closed(u) = constant_boundary_transient(&wave1.clone()?) else {
            return Err(Error::Unsupported("no closed transient form".into()));
        };
        let t = p.t.unwrap_or(0.0);
        Ok((u.evaluate(*p)?, re(closed_form::wave_n1_step(p.r, p.y, t))))
    }));

    let wave2 = build(KernelSpec::wave(2, 1, 0).and_then(|s| wave_kernel(&s)));
    let tight = Tolerance::new(1e-16, 1e-13);
    // ψ: a bump straddling the front t = √s.
    let bump_at = |p: &Point| {
        let a = p.s().sqrt();
        Bump::new(1.1 * a, 0.6 * a)
    };
    let label = "wave n=2 paired E_0".to_string();
    out.push(compare(suite, label.clone(), &pts(&label, false), |p| {
        let psi = bump_at(p)?;
        let a = p.s().sqrt();
        let got = pair_time_with(&wave2.clone()?, &psi, p.r, p.y, tight)?.value;
        Ok((got, re(closed_form::wave_n2_paired(p.r, p.y, psi.value(a), psi.deriv(1, a)))))
    }));
    let label = "wave n=2 paired constant-data response".to_string();
    out.push(compare(suite, label.clone(), &pts(&label, false), |p| {
        let TransientExpr::Closed(u) = constant_boundary_transient(&wave2.clone()?) else {
            return Err(Error::Unsupported("no closed transient form".into()));
        };
        let psi = bump_at(p)?;
        let a = p.s().sqrt();
        let got = pair_time_with(&u, &psi, p.r, p.y, tight)?.value;
        let tail = gauss_kronrod(|t: f64| psi.value(t), a, psi.support().1, Tolerance::new(1e-17, 1e-13))?.value;
        Ok((got, re(closed_form::wave_n2_step_paired(p.r, p.y, psi.value(a), tail))))
    }));

    for xi in [1.0, 2.5] {
        let label = format!("klein_gordon n=0 xi={xi}");
        let e = build(KernelSpec::klein_gordon(0, 1, 0, xi).and_then(|s| kleingordon_kernel(&s)));
        out.push(compare(suite, label.clone(), &pts(&label, true), |p| {
            let t = p.t.unwrap_or(0.0);
            Ok((e.clone()?.evaluate(*p)?, re(closed_form::kleingordon_n0(xi, p.r, p.y, t))))
        }));
    }
    out
}

/// `∫ E_0 dx` through the solver with constant data: `1` for polyharmonic
/// kernels, `e^{−|ξ| y}` for the metaharmonic `m = 1` kernel.
pub fn normalization_check(spec: &KernelSpec) -> Result<Report> {
    let suite = Suite::Normalization;
    let spec = KernelSpec { j: 0, ..*spec };
    let dim = spec.x_dim() as usize;
    let entries = (0..spec.m)
        .map(|i| BoundaryEntry {
            spatial: if i == 0 { SpatialData::Constant { value: 1.0 } } else { SpatialData::Zero },
            time: None,
        })
        .collect();
    let solver = Solver::new(&spec, &BoundaryData { entries }, SolveOptions::default())?;
    let mut worst: f64 = 0.0;
    let ys = [0.5, 1.0, 2.0];
    for y in ys {
        let x = alloc::vec![0.3; dim];
        let got = solver.value_at(&x, y, None)?.value;
        let want = match spec.param {
            Param::Real(xi) => (-xi.abs() * y).exp(),
            Param::Complex(p) => (-p * y).exp().re,
            Param::None => 1.0,
        };
        worst = worst.max((got - re(want)).norm());
    }
    Ok(Report::new(suite, spec.label(), ys.len(), worst))
}

/// Quadrature-convolution solver output for `δ(x) ⊗ Y(t)` data against the
/// closed-form responses.
pub fn transient_suite() -> Vec<Report> {
    let suite = Suite::Transient;
    let options = SolveOptions { ramp_eps: 1e-3, ..SolveOptions::default() };
    let mut out = Vec::new();
    for n in [1u32, 2] {
        let label = format!("wave n={n} delta x step");
        let run = || -> Result<Report> {
            let spec = KernelSpec::wave(n, 1, 0)?;
            let data = BoundaryData {
                entries: alloc::vec![BoundaryEntry {
                    spatial: SpatialData::unit_mass_gaussian(alloc::vec![0.0; n as usize], 1e-2),
                    time: Some(TimeProfile::Heaviside),
                }],
            };
            let solver = Solver::new(&spec, &data, options)?;
            let cases: &[(f64, f64, f64)] =
                if n == 1 { &[(0.0, 1.0, 2.0), (0.4, 0.7, 1.5)] } else { &[(0.0, 1.0, 2.0), (0.5, 0.8, 1.5)] };
            let mut worst: f64 = 0.0;
            for &(x0, y, t) in cases {
                let mut x = alloc::vec![0.0; n as usize];
                x[0] = x0;
                let got = solver.value_at(&x, y, Some(t))?.value;
                let want = if n == 1 {
                    closed_form::wave_n1_step(x0.abs(), y, t)
                } else {
                    closed_form::wave_n2_step(x0.abs(), y, t)
                };
                worst = worst.max((got - re(want)).norm());
            }
            Ok(Report::new(suite, label.clone(), cases.len(), worst))
        };
        out.push(run().unwrap_or_else(|e| Report::failed(suite, label.clone(), &e)));
    }
    out
}

/// Klein–Gordon (`n = 0`, `ξ = 10⁻³`) against the one-dimensional wave kernel.
pub fn kg_wave_limit(cfg: &VerifyConfig) -> Result<Report> {
    let suite = Suite::KgLimit;
    let label = "klein_gordon n=0 xi=1e-3 vs wave n=1".to_string();
    let kg = cfg.tamper(kleingordon_kernel(&KernelSpec::klein_gordon(0, 1, 0, 1e-3)?)?);
    let wave = wave_kernel(&KernelSpec::wave(1, 1, 0)?)?;
    let mut rng = rng_for(cfg.seed, suite, &label);
    let points = sample_points(&mut rng, cfg.n_points, true, 5.0);
    Ok(compare(suite, label, &points, |p| Ok((kg.evaluate(*p)?, wave.evaluate(*p)?))))
}
