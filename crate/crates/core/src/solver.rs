//! Convolution of Poisson kernels against boundary data, and boundary traces.
//!
//! Kernels are radial in `x`, so `E ∗_x g` reduces to a radial integral of
//! `E(ρ, y)` against the spherical mean of `g` about `x`:
//!
//! `u(x, y) = ω_n ∫_0^∞ E(ρ, y) M_g(x, ρ) ρ^{n−1} dρ`.
//!
//! Elliptic solves substitute `ρ = y tan θ`, which maps the half-line onto
//! `[0, π/2)` with a bounded integrand for every kernel, constant data
//! included, so no truncation radius is needed. Transient solves pair the
//! kernel in time first and integrate `ρ` over the backward cone only.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};
use core::ops::{Add, Mul, Sub};

#[allow(unused_imports)]
use num_traits::Float;

use crate::algebra::{pair_time_with, Point, RadialExpr};
use crate::error::invalid;
use crate::kernels::{build_kernel, KernelSpec};
use crate::quad::{gauss_kronrod_split, Estimate, QuadValue, Tolerance};
use crate::specfun::unit_sphere_area;
use crate::testfn::{GaussianPulse, Jet, Mollified, RampStep, Reversed, TimeTest, Windowed};
use crate::{Error, Result, C64};

/// Largest `x`-dimension the solver integrates over.
pub const MAX_SOLVE_DIM: u32 = 3;

/// Gaussians are treated as zero beyond this many widths (`e^{−800}`).
const GAUSS_REACH: f64 = 40.0;

/// Spatial part of one boundary row.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum SpatialData {
    /// `amplitude · exp(−|x − center|²/(2 width²))`
    Gaussian { center: Vec<f64>, width: f64, amplitude: f64 },
    Constant { value: f64 },
    /// Multilinear interpolation on a tensor grid, zero outside it. `values`
    /// are row-major with the last axis fastest.
    Sampled { axes: Vec<Vec<f64>>, values: Vec<f64> },
    Zero,
}

/// Time part of one boundary row (transient problems).
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum TimeProfile {
    Heaviside,
    GaussianPulse { t0: f64, sigma: f64 },
    Sampled { times: Vec<f64>, values: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BoundaryEntry {
    pub spatial: SpatialData,
    #[cfg_attr(feature = "serde", serde(default))]
    pub time: Option<TimeProfile>,
}

/// Entry `j` carries the data for `∂_y^j u|_{y=0}`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BoundaryData {
    pub entries: Vec<BoundaryEntry>,
}

impl SpatialData {
    /// Gaussian of unit mass in `R^n`, a mollified `δ(x − center)`.
    pub fn unit_mass_gaussian(center: Vec<f64>, width: f64) -> SpatialData {
        let n = center.len() as i32;
        let amplitude = 1.0 / (width * (2.0 * PI).sqrt()).powi(n);
        SpatialData::Gaussian { center, width, amplitude }
    }

    fn validate(&self, dim: usize) -> Result<()> {
        match self {
            SpatialData::Gaussian { center, width, amplitude } => {
                if center.len() != dim {
                    return Err(invalid("gaussian center has the wrong dimension"));
                }
                if !(*width > 0.0) || !amplitude.is_finite() || center.iter().any(|c| !c.is_finite()) {
                    return Err(invalid("gaussian data needs a positive width and finite parameters"));
                }
            }
            SpatialData::Constant { value } if !value.is_finite() => {
                return Err(invalid("constant data must be finite"));
            }
            SpatialData::Sampled { axes, values } => {
                if axes.len() != dim {
                    return Err(invalid("sampled data has the wrong number of axes"));
                }
                if axes.iter().any(|a| a.len() < 2 || a.windows(2).any(|w| !(w[1] > w[0]))) {
                    return Err(invalid("sampled axes need at least two strictly increasing nodes"));
                }
                let count: usize = axes.iter().map(Vec::len).product();
                if values.len() != count {
                    return Err(invalid("sampled values do not match the axes"));
                }
            }
            _ => {}
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        match self {
            SpatialData::Zero => true,
            SpatialData::Constant { value } => *value == 0.0,
            SpatialData::Gaussian { amplitude, .. } => *amplitude == 0.0,
            SpatialData::Sampled { values, .. } => values.iter().all(|v| *v == 0.0),
        }
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        match self {
            SpatialData::Gaussian { center, width, amplitude } => {
                let d2: f64 = x.iter().zip(center).map(|(a, b)| (a - b) * (a - b)).sum();
                amplitude * (-d2 / (2.0 * width * width)).exp()
            }
            SpatialData::Constant { value } => *value,
            SpatialData::Sampled { axes, values } => multilinear(axes, values, x),
            SpatialData::Zero => 0.0,
        }
    }

    /// Radii about `x` outside which the spherical mean vanishes.
    fn reach(&self, x: &[f64]) -> Option<(f64, f64)> {
        match self {
            SpatialData::Zero => None,
            SpatialData::Constant { .. } => Some((0.0, f64::INFINITY)),
            SpatialData::Gaussian { center, width, .. } => {
                let d = distance(x, center);
                Some(((d - GAUSS_REACH * width).max(0.0), d + GAUSS_REACH * width))
            }
            SpatialData::Sampled { axes, .. } => {
                let (mut near, mut far) = (0.0, 0.0);
                for (xi, a) in x.iter().zip(axes) {
                    let (lo, hi) = (a[0], a[a.len() - 1]);
                    let gap = if *xi < lo { lo - xi } else if *xi > hi { xi - hi } else { 0.0 };
                    near += gap * gap;
                    let span = (xi - lo).abs().max((xi - hi).abs());
                    far += span * span;
                }
                Some((near.sqrt(), far.sqrt()))
            }
        }
    }

    /// Radii where the spherical mean changes quickly; used as quadrature
    /// breakpoints.
    fn features(&self, x: &[f64]) -> Vec<f64> {
        match self {
            SpatialData::Gaussian { center, width, .. } => {
                let d = distance(x, center);
                [-8.0, -3.0, -1.0, 0.0, 1.0, 3.0, 8.0]
                    .iter()
                    .map(|k| d + k * width)
                    .filter(|r| *r > 0.0)
                    .collect()
            }
            SpatialData::Sampled { .. } => {
                let (lo, hi) = self.reach(x).unwrap_or((0.0, 0.0));
                (1..8).map(|i| lo + (hi - lo) * i as f64 / 8.0).collect()
            }
            _ => Vec::new(),
        }
    }

    /// Mean of the data over the sphere of radius `rho` about `x`.
    fn spherical_mean(&self, x: &[f64], rho: f64, tol: Tolerance) -> Result<f64> {
        let n = x.len();
        match self {
            SpatialData::Zero => Ok(0.0),
            SpatialData::Constant { value } => Ok(*value),
            SpatialData::Gaussian { center, width, amplitude } => {
                let d = distance(x, center);
                let w2 = width * width;
                let base = amplitude * (-(d - rho) * (d - rho) / (2.0 * w2)).exp();
                if base == 0.0 {
                    return Ok(0.0);
                }
                let a = d * rho / w2;
                let shape = match n {
                    1 => 0.5 * (1.0 + (-2.0 * a).exp()),
                    2 => scaled_i0(a, tol)?,
                    3 if a < 1e-8 => 1.0 - a,
                    3 => -(-2.0 * a).exp_m1() / (2.0 * a),
                    _ => return Err(Error::Unsupported("spherical means beyond three dimensions".into())),
                };
                Ok(base * shape)
            }
            SpatialData::Sampled { .. } => numeric_mean(|p| self.value(p), x, rho, tol),
        }
    }
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| (p - q) * (p - q)).sum::<f64>().sqrt()
}

/// `e^{−a} I_0(a) = (1/π) ∫_0^π e^{−a(1 − cos φ)} dφ`
fn scaled_i0(a: f64, tol: Tolerance) -> Result<f64> {
    if a == 0.0 {
        return Ok(1.0);
    }
    let mut pts = alloc::vec![0.0];
    let mut c = 1.0 / a.sqrt();
    while c < PI {
        pts.push(c);
        c *= 4.0;
    }
    pts.push(PI);
    let est = gauss_kronrod_split(|phi: f64| (-2.0 * a * (0.5 * phi).sin().powi(2)).exp(), &pts, tol)?;
    Ok(est.value / PI)
}

fn numeric_mean(f: impl Fn(&[f64]) -> f64, x: &[f64], rho: f64, tol: Tolerance) -> Result<f64> {
    match x.len() {
        1 => Ok(0.5 * (f(&[x[0] + rho]) + f(&[x[0] - rho]))),
        2 => {
            let est = gauss_kronrod_split(
                |phi: f64| f(&[x[0] + rho * phi.cos(), x[1] + rho * phi.sin()]),
                &[0.0, FRAC_PI_2, PI, 3.0 * FRAC_PI_2, 2.0 * PI],
                tol,
            )?;
            Ok(est.value / (2.0 * PI))
        }
        3 => {
            let mut fail = None;
            let est = gauss_kronrod_split(
                |th: f64| {
                    let (st, ct) = th.sin_cos();
                    let ring = gauss_kronrod_split(
                        |phi: f64| {
                            let (sp, cp) = phi.sin_cos();
                            f(&[x[0] + rho * st * cp, x[1] + rho * st * sp, x[2] + rho * ct])
                        },
                        &[0.0, PI, 2.0 * PI],
                        tol,
                    );
                    match ring {
                        Ok(r) => r.value * st,
                        Err(e) => {
                            fail.get_or_insert(e);
                            0.0
                        }
                    }
                },
                &[0.0, FRAC_PI_2, PI],
                tol,
            )?;
            if let Some(e) = fail {
                return Err(e);
            }
            Ok(est.value / (4.0 * PI))
        }
        _ => Err(Error::Unsupported("spherical means beyond three dimensions".into())),
    }
}

fn multilinear(axes: &[Vec<f64>], values: &[f64], x: &[f64]) -> f64 {
    let dim = axes.len();
    let mut base = Vec::with_capacity(dim);
    let mut frac = Vec::with_capacity(dim);
    for (a, xi) in axes.iter().zip(x) {
        let last = a.len() - 1;
        if *xi < a[0] || *xi > a[last] {
            return 0.0;
        }
        let i = a.partition_point(|v| v <= xi).clamp(1, last) - 1;
        base.push(i);
        frac.push((xi - a[i]) / (a[i + 1] - a[i]));
    }
    let mut acc = 0.0;
    for corner in 0..(1usize << dim) {
        let mut w = 1.0;
        let mut idx = 0;
        for d in 0..dim {
            let up = (corner >> d) & 1 == 1;
            w *= if up { frac[d] } else { 1.0 - frac[d] };
            idx = idx * axes[d].len() + base[d] + up as usize;
        }
        if w != 0.0 {
            acc += w * values[idx];
        }
    }
    acc
}

/// Time signal of a boundary row, as a test function in `t`.
#[derive(Debug, Clone)]
enum Signal {
    Step(RampStep),
    Pulse(GaussianPulse),
    Sampled(Mollified),
}

impl Signal {
    fn new(profile: Option<&TimeProfile>, ramp_eps: f64) -> Result<Signal> {
        let s = match profile {
            None | Some(TimeProfile::Heaviside) => Signal::Step(RampStep::new(ramp_eps)?),
            Some(TimeProfile::GaussianPulse { t0, sigma }) => Signal::Pulse(GaussianPulse::new(*t0, *sigma)?),
            Some(TimeProfile::Sampled { times, values }) => Signal::Sampled(Mollified::new(times, values)?),
        };
        if s.support().0 < 0.0 {
            return Err(invalid("time profiles must be supported in t >= 0"));
        }
        Ok(s)
    }
}

impl TimeTest for Signal {
    fn support(&self) -> (f64, f64) {
        match self {
            Signal::Step(s) => s.support(),
            Signal::Pulse(s) => s.support(),
            Signal::Sampled(s) => s.support(),
        }
    }
    fn jet(&self, t: f64, order: usize) -> Jet {
        match self {
            Signal::Step(s) => s.jet(t, order),
            Signal::Pulse(s) => s.jet(t, order),
            Signal::Sampled(s) => s.jet(t, order),
        }
    }
    fn scale(&self) -> f64 {
        match self {
            Signal::Step(s) => s.scale(),
            Signal::Pulse(s) => s.scale(),
            Signal::Sampled(s) => s.scale(),
        }
    }
    fn breakpoints(&self) -> Vec<f64> {
        match self {
            Signal::Step(s) => s.breakpoints(),
            Signal::Pulse(s) => s.breakpoints(),
            Signal::Sampled(s) => s.breakpoints(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl Axis {
    pub fn new(lo: f64, hi: f64, count: usize) -> Self {
        Axis { lo, hi, count }
    }

    pub fn at(&self, i: usize) -> f64 {
        if self.count <= 1 {
            self.lo
        } else {
            self.lo + (self.hi - self.lo) * i as f64 / (self.count - 1) as f64
        }
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.at(i)).collect()
    }

    fn validate(&self) -> Result<()> {
        if self.count == 0 || !self.lo.is_finite() || !self.hi.is_finite() || self.hi < self.lo {
            return Err(invalid("grid axes need finite lo <= hi and at least one node"));
        }
        Ok(())
    }
}

/// Tensor grid over `x ∈ R^n`, `y > 0` and optionally `t > 0`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Grid {
    pub x: Vec<Axis>,
    pub y: Axis,
    #[cfg_attr(feature = "serde", serde(default))]
    pub t: Option<Axis>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridPoint {
    pub x: Vec<f64>,
    pub y: f64,
    pub t: Option<f64>,
}

impl GridPoint {
    pub fn r(&self) -> f64 {
        self.x.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

impl Grid {
    pub fn validate(&self, dim: usize) -> Result<()> {
        if self.x.len() != dim {
            return Err(invalid("grid has the wrong number of x axes"));
        }
        for a in self.x.iter().chain(core::iter::once(&self.y)).chain(self.t.iter()) {
            a.validate()?;
        }
        if !(self.y.lo > 0.0) {
            return Err(invalid("grid must lie in the open half-space y > 0"));
        }
        if let Some(t) = &self.t {
            if !(t.lo > 0.0) {
                return Err(invalid("time axis must lie in t > 0"));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        let nx: usize = self.x.iter().map(|a| a.count).product();
        nx * self.y.count * self.t.map_or(1, |t| t.count)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Point `i` in row-major order: first `x` axis slowest, `t` fastest.
    pub fn point(&self, mut i: usize) -> GridPoint {
        let t = self.t.map(|a| {
            let v = a.at(i % a.count);
            i /= a.count;
            v
        });
        let y = self.y.at(i % self.y.count);
        i /= self.y.count;
        let mut x = alloc::vec![0.0; self.x.len()];
        for (d, a) in self.x.iter().enumerate().rev() {
            x[d] = a.at(i % a.count);
            i /= a.count;
        }
        GridPoint { x, y, t }
    }

    pub fn points(&self) -> Vec<GridPoint> {
        (0..self.len()).map(|i| self.point(i)).collect()
    }
}

/// Samples of a solution on a grid with per-point error estimates.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    pub spec: KernelSpec,
    pub grid: Grid,
    pub values: Vec<C64>,
    pub errors: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SolveOptions {
    /// Tolerance of the outer radial integral.
    pub tol: Tolerance,
    /// Tolerance of each time pairing (transient solves).
    pub pair_tol: Tolerance,
    /// Width of the `C^∞` ramp that stands in for a Heaviside step.
    pub ramp_eps: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { tol: Tolerance::new(1e-12, 1e-10), pair_tol: Tolerance::new(1e-13, 1e-10), ramp_eps: 1e-2 }
    }
}

struct Row {
    kernel: RadialExpr,
    data: SpatialData,
    signal: Option<Signal>,
}

/// A prepared convolution: kernels built, data validated. Point evaluations
/// are independent and may run concurrently.
pub struct Solver {
    spec: KernelSpec,
    dim: usize,
    omega: f64,
    rows: Vec<Row>,
    options: SolveOptions,
}

/// Kernel rows `E_0 … E_{m−1}` for a spec (its own `j` is ignored).
fn kernel_rows(spec: &KernelSpec) -> Result<Vec<RadialExpr>> {
    (0..spec.m).map(|j| build_kernel(&KernelSpec { j, ..*spec })).collect()
}

impl Solver {
    pub fn new(spec: &KernelSpec, data: &BoundaryData, options: SolveOptions) -> Result<Solver> {
        spec.validate()?;
        let dim = spec.x_dim();
        if dim > MAX_SOLVE_DIM {
            return Err(Error::Unsupported("solves are limited to at most three x dimensions".into()));
        }
        if data.entries.len() != spec.m as usize {
            return Err(invalid("boundary data needs exactly m entries"));
        }
        let transient = spec.family.is_hyperbolic();
        if transient && !(options.ramp_eps > 0.0) {
            return Err(invalid("ramp width must be positive"));
        }
        let kernels = kernel_rows(spec)?;
        let mut rows = Vec::with_capacity(kernels.len());
        for (kernel, entry) in kernels.into_iter().zip(&data.entries) {
            entry.spatial.validate(dim as usize)?;
            let signal = if transient {
                Some(Signal::new(entry.time.as_ref(), options.ramp_eps)?)
            } else {
                if entry.time.is_some() {
                    return Err(invalid("time profiles only apply to transient problems"));
                }
                None
            };
            rows.push(Row { kernel, data: entry.spatial.clone(), signal });
        }
        Ok(Solver { spec: *spec, dim: dim as usize, omega: unit_sphere_area(dim as i32)?, rows, options })
    }

    pub fn spec(&self) -> &KernelSpec {
        &self.spec
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_transient(&self) -> bool {
        self.spec.family.is_hyperbolic()
    }

    /// `u(x, y)` (elliptic) or `u(x, y, t)` (transient).
    pub fn value_at(&self, x: &[f64], y: f64, t: Option<f64>) -> Result<Estimate<C64>> {
        if x.len() != self.dim {
            return Err(invalid("point has the wrong x dimension"));
        }
        if !(y > 0.0) {
            return Err(invalid("points must lie in y > 0"));
        }
        let mut total = Estimate::zero();
        for row in &self.rows {
            if row.data.is_zero() {
                continue;
            }
            let part = match (&row.signal, t) {
                (None, _) => self.elliptic_row(row, x, y)?,
                (Some(sig), Some(t)) => self.transient_row(row, sig, x, y, t)?,
                (Some(_), None) => return Err(Error::MissingTime),
            };
            total = total + part;
        }
        Ok(total)
    }

    fn elliptic_row(&self, row: &Row, x: &[f64], y: f64) -> Result<Estimate<C64>> {
        let Some((lo, hi)) = row.data.reach(x) else { return Ok(Estimate::zero()) };
        let angle = |r: f64| if r.is_infinite() { FRAC_PI_2 } else { (r / y).atan() };
        let (a, b) = (angle(lo), angle(hi));
        let mut pts = alloc::vec![a, b];
        for r in row.data.features(x).into_iter().chain([0.25 * y, y, 4.0 * y]) {
            let th = angle(r);
            if th > a && th < b {
                pts.push(th);
            }
        }
        pts.sort_by(f64::total_cmp);
        pts.dedup();

        let n = self.dim as i32;
        let tol = self.options.tol;
        let mut fail: Option<Error> = None;
        let est = gauss_kronrod_split(
            |th: f64| {
                if fail.is_some() {
                    return C64::new(0.0, 0.0);
                }
                let tan = th.tan();
                let rho = y * tan;
                let res = row.data.spherical_mean(x, rho, tol).and_then(|m| {
                    if m == 0.0 {
                        return Ok(C64::new(0.0, 0.0));
                    }
                    let e = row.kernel.evaluate(Point::new(rho, y, None))?;
                    let jac = y.powi(n) * tan.powi(n - 1) * (1.0 + tan * tan);
                    Ok(e * (m * jac * self.omega))
                });
                res.unwrap_or_else(|e| {
                    fail = Some(e);
                    C64::new(0.0, 0.0)
                })
            },
            &pts,
            tol,
        )?;
        match fail {
            Some(e) => Err(e),
            None => Ok(est),
        }
    }

    fn transient_row(&self, row: &Row, sig: &Signal, x: &[f64], y: f64, t: f64) -> Result<Estimate<C64>> {
        let Some((lo, hi)) = row.data.reach(x) else { return Ok(Estimate::zero()) };
        // ψ_t(τ) = h(t − τ), cut off below y/2 where every kernel vanishes.
        let psi = Windowed { inner: Reversed { inner: sig.clone(), at: t }, lo: 0.25 * y, hi: 0.5 * y };
        let (plo, phi) = psi.support();
        if !(phi > plo) || phi <= y {
            return Ok(Estimate::zero());
        }
        // Backward cone: E(ρ, y, τ) = 0 unless ρ² + y² ≤ τ² ≤ phi².
        let reach = (phi * phi - y * y).sqrt();
        let (a, b) = (lo, hi.min(reach));
        if !(b > a) {
            return Ok(Estimate::zero());
        }
        let mut pts = alloc::vec![a, b];
        for r in row.data.features(x) {
            if r > a && r < b {
                pts.push(r);
            }
        }
        pts.sort_by(f64::total_cmp);
        pts.dedup();

        let n = self.dim as i32;
        let tol = self.options.tol;
        let mut fail: Option<Error> = None;
        let est = gauss_kronrod_split(
            |rho: f64| {
                if fail.is_some() {
                    return Tracked::zero();
                }
                let res = row.data.spherical_mean(x, rho, tol).and_then(|m| {
                    if m == 0.0 {
                        return Ok(Tracked::zero());
                    }
                    let p = pair_time_with(&row.kernel, &psi, rho, y, self.options.pair_tol)?;
                    let w = m * self.omega * rho.powi(n - 1);
                    Ok(Tracked { value: p.value * w, error: p.error * w.abs() })
                });
                res.unwrap_or_else(|e| {
                    fail = Some(e);
                    Tracked::zero()
                })
            },
            &pts,
            tol,
        )?;
        match fail {
            Some(e) => Err(e),
            None => Ok(Estimate { value: est.value.value, error: est.error + est.value.error }),
        }
    }

    /// Evaluate every grid point in order.
    pub fn solve_grid(&self, grid: &Grid) -> Result<Field> {
        grid.validate(self.dim)?;
        if self.is_transient() && grid.t.is_none() {
            return Err(Error::MissingTime);
        }
        let mut values = Vec::with_capacity(grid.len());
        let mut errors = Vec::with_capacity(grid.len());
        for p in grid.points() {
            let est = self.value_at(&p.x, p.y, p.t)?;
            values.push(est.value);
            errors.push(est.error);
        }
        Ok(Field { spec: self.spec, grid: grid.clone(), values, errors })
    }
}

/// Integrand value carrying the accumulated pairing error alongside.
#[derive(Debug, Clone, Copy)]
struct Tracked {
    value: C64,
    error: f64,
}

impl Add for Tracked {
    type Output = Tracked;
    fn add(self, o: Tracked) -> Tracked {
        Tracked { value: self.value + o.value, error: self.error + o.error }
    }
}

impl Sub for Tracked {
    type Output = Tracked;
    fn sub(self, o: Tracked) -> Tracked {
        Tracked { value: self.value - o.value, error: self.error + o.error }
    }
}

impl Mul<f64> for Tracked {
    type Output = Tracked;
    fn mul(self, c: f64) -> Tracked {
        Tracked { value: self.value * c, error: self.error * c.abs() }
    }
}

impl QuadValue for Tracked {
    fn zero() -> Self {
        Tracked { value: C64::new(0.0, 0.0), error: 0.0 }
    }
    fn magnitude(&self) -> f64 {
        self.value.norm()
    }
    fn recip(self) -> Self {
        Tracked { value: self.value.inv(), error: self.error }
    }
}

/// `u = Σ_j E_j ∗_x g_j` on a grid (polyharmonic and metaharmonic families).
pub fn solve_dirichlet(spec: &KernelSpec, data: &BoundaryData, grid: &Grid, options: SolveOptions) -> Result<Field> {
    if spec.family.is_hyperbolic() {
        return Err(invalid("solve_dirichlet takes an elliptic family; use solve_transient"));
    }
    Solver::new(spec, data, options)?.solve_grid(grid)
}

/// `u = Σ_j E_j ∗_{x,t} g_j` on a grid (wave and Klein–Gordon families).
pub fn solve_transient(spec: &KernelSpec, data: &BoundaryData, grid: &Grid, options: SolveOptions) -> Result<Field> {
    if !spec.family.is_hyperbolic() {
        return Err(invalid("solve_transient takes a hyperbolic family; use solve_dirichlet"));
    }
    Solver::new(spec, data, options)?.solve_grid(grid)
}

/// Geometric ladder `y_i = y0 · 2^{−i}`, `i = 0 … levels−1`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Ladder {
    pub y0: f64,
    pub levels: usize,
}

impl Default for Ladder {
    fn default() -> Self {
        Ladder { y0: 0.4, levels: 7 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TraceSample {
    pub value: C64,
    pub error: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TraceReport {
    pub k: u32,
    pub xs: Vec<Vec<f64>>,
    pub samples: Vec<TraceSample>,
}

/// Five-point finite difference for `f^{(k)}` at the centre of
/// `[f(y−2h), f(y−h), f(y), f(y+h), f(y+2h)]`.
fn five_point(f: &[C64; 5], k: u32, h: f64) -> Result<C64> {
    let w: [f64; 5] = match k {
        0 => return Ok(f[2]),
        1 => [1.0, -8.0, 0.0, 8.0, -1.0],
        2 => [-1.0, 16.0, -30.0, 16.0, -1.0],
        3 => [-6.0, 12.0, 0.0, -12.0, 6.0],
        4 => [12.0, -48.0, 72.0, -48.0, 12.0],
        _ => return Err(Error::Unsupported("traces above fourth order".into())),
    };
    let mut acc = C64::new(0.0, 0.0);
    for (c, v) in w.iter().zip(f) {
        acc += v * *c;
    }
    Ok(acc / (12.0 * h.powi(k as i32)))
}

/// Richardson extrapolation to `y = 0` of values on a ratio-2 ladder whose
/// error expands in integer powers of `y`. Returns the value, the difference
/// of the last two diagonal entries, and whether those differences shrank.
pub fn richardson(values: &[C64]) -> TraceSample {
    let n = values.len();
    if n == 0 {
        return TraceSample { value: C64::new(f64::NAN, 0.0), error: f64::INFINITY, converged: false };
    }
    let mut table: Vec<Vec<C64>> = alloc::vec![values.to_vec()];
    for l in 1..n {
        let prev = &table[l - 1];
        let f = 1.0 / (2f64.powi(l as i32) - 1.0);
        let next: Vec<C64> = (1..prev.len()).map(|i| prev[i] + (prev[i] - prev[i - 1]) * f).collect();
        table.push(next);
    }
    let diag: Vec<C64> = table.iter().map(|col| col[col.len() - 1]).collect();
    let value = diag[n - 1];
    if n == 1 {
        return TraceSample { value, error: f64::INFINITY, converged: false };
    }
    let error = (diag[n - 1] - diag[n - 2]).norm();
    let converged = error.is_finite() && (n < 3 || error <= (diag[n - 2] - diag[n - 3]).norm() + 1e-14);
    TraceSample { value, error, converged }
}

/// `lim_{y↘0} ∂_y^k f(y)` for a function smooth up to `y = 0`: five-point
/// differences with `h = y_i/4` on each rung, then Richardson extrapolation.
pub fn trace(f: impl FnMut(f64) -> Result<C64>, k: u32, ladder: Ladder) -> Result<TraceSample> {
    Ok(trace_orders(f, k, ladder)?.pop().expect("orders 0..=k"))
}

/// [`trace`] for every order `0 ..= kmax`, sharing the function evaluations.
pub fn trace_orders(mut f: impl FnMut(f64) -> Result<C64>, kmax: u32, ladder: Ladder) -> Result<Vec<TraceSample>> {
    if ladder.levels == 0 || !(ladder.y0 > 0.0) {
        return Err(invalid("trace ladder needs y0 > 0 and at least one level"));
    }
    // Nodes y_i·{1/2, 3/4, 1, 5/4, 3/2}; y_i/2 is the next rung.
    let mut stencils = Vec::with_capacity(ladder.levels);
    let mut below: Option<C64> = None;
    for i in (0..ladder.levels).rev() {
        let yi = ladder.y0 / 2f64.powi(i as i32);
        let h = 0.25 * yi;
        let f0 = match below {
            Some(v) => v,
            None => f(yi - 2.0 * h)?,
        };
        let fc = f(yi)?;
        stencils.push(([f0, f(yi - h)?, fc, f(yi + h)?, f(yi + 2.0 * h)?], h));
        below = Some(fc);
    }
    // Coarsest rung first.
    stencils.reverse();
    (0..=kmax)
        .map(|k| {
            let rungs = stencils.iter().map(|(st, h)| five_point(st, k, *h)).collect::<Result<Vec<_>>>()?;
            Ok(richardson(&rungs))
        })
        .collect()
}

/// Traces `∂_y^k u`, `k = 0 ..= kmax`, of a solver's field at the given `x`
/// samples; one report per order.
pub fn trace_field(solver: &Solver, kmax: u32, xs: &[Vec<f64>], ladder: Ladder) -> Result<Vec<TraceReport>> {
    if solver.is_transient() {
        return Err(Error::Unsupported("y-traces of transient fields".into()));
    }
    let mut reports: Vec<TraceReport> =
        (0..=kmax).map(|k| TraceReport { k, xs: xs.to_vec(), samples: Vec::new() }).collect();
    for x in xs {
        let per_k = trace_orders(|y| Ok(solver.value_at(x, y, None)?.value), kmax, ladder)?;
        for (rep, s) in reports.iter_mut().zip(per_k) {
            rep.samples.push(s);
        }
    }
    Ok(reports)
}
