use halfspace_core::kernels::{Family, KernelSpec, Param};
use halfspace_core::quad::Tolerance;
use halfspace_core::solver::{BoundaryData, BoundaryEntry, SolveOptions, Solver, SpatialData};
use halfspace_core::C64;
use proptest::prelude::*;

fn gaussian(center: Vec<f64>, width: f64, amplitude: f64) -> BoundaryEntry {
    BoundaryEntry { spatial: SpatialData::Gaussian { center, width, amplitude }, time: None }
}

fn zero() -> BoundaryEntry {
    BoundaryEntry { spatial: SpatialData::Zero, time: None }
}

fn solver(spec: &KernelSpec, entries: Vec<BoundaryEntry>) -> Solver {
    Solver::new(spec, &BoundaryData { entries }, SolveOptions::default()).unwrap()
}

fn elliptic(family: Family, n: u32, m: u32) -> KernelSpec {
    let param = if family == Family::Metaharmonic { Param::Real(1.0) } else { Param::None };
    KernelSpec::new(family, n, m, 0, param).unwrap()
}

fn family() -> impl Strategy<Value = Family> {
    prop::sample::select(vec![Family::Polyharmonic, Family::Metaharmonic])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn superposition_of_rows_and_amplitudes(
        family in family(), n in 1u32..=2, c1 in -1.0f64..1.0, c2 in -1.0f64..1.0,
        w1 in 0.3f64..1.0, w2 in 0.3f64..1.0, a in -2.0f64..2.0,
        x in -1.5f64..1.5, y in 0.2f64..2.0,
    ) {
        let spec = elliptic(family, n, 2);
        let cen = |c: f64| { let mut v = vec![0.0; n as usize]; v[0] = c; v };
        let xs = cen(x);
        let both = solver(&spec, vec![gaussian(cen(c1), w1, a), gaussian(cen(c2), w2, 1.0)]).value_at(&xs, y, None).unwrap();
        let first = solver(&spec, vec![gaussian(cen(c1), w1, 1.0), zero()]).value_at(&xs, y, None).unwrap();
        let second = solver(&spec, vec![zero(), gaussian(cen(c2), w2, 1.0)]).value_at(&xs, y, None).unwrap();
        let expect = first.value * a + second.value;
        let slack = both.error + a.abs() * first.error + second.error;
        prop_assert!((both.value - expect).norm() <= 1e-10 * expect.norm().max(1.0) + slack);
    }

    #[test]
    fn translation_equivariance(
        family in family(), n in 1u32..=2, m in 1u32..=2, shift in -2.0f64..2.0,
        x in -1.5f64..1.5, y in 0.2f64..2.0, w in 0.3f64..1.0,
    ) {
        let spec = elliptic(family, n, m);
        let mut rows = vec![gaussian(vec![0.0; n as usize], w, 1.0)];
        rows.extend((1..m).map(|_| zero()));
        let base = solver(&spec, rows).value_at(&[x, 0.3][..n as usize], y, None).unwrap();
        let mut rows = vec![gaussian([shift, 0.0][..n as usize].to_vec(), w, 1.0)];
        rows.extend((1..m).map(|_| zero()));
        let moved = solver(&spec, rows).value_at(&[x + shift, 0.3][..n as usize], y, None).unwrap();
        prop_assert!((base.value - moved.value).norm() <= 1e-8 + base.error + moved.error);
    }

    #[test]
    fn tighter_tolerance_never_increases_error_estimate(
        family in family(), n in 1u32..=3, x in -1.5f64..1.5, y in 0.2f64..2.0, rel in 1e-10f64..1e-6,
    ) {
        let spec = elliptic(family, n, 1);
        let data = BoundaryData { entries: vec![gaussian(vec![0.2; n as usize], 0.5, 1.0)] };
        let xs = vec![x; n as usize];
        let with = |rel: f64| {
            let options = SolveOptions { tol: Tolerance::new(1e-14, rel), ..SolveOptions::default() };
            Solver::new(&spec, &data, options).unwrap().value_at(&xs, y, None).unwrap().error
        };
        let loose = with(rel);
        let tight = with(rel / 2.0);
        prop_assert!(tight <= loose, "{tight:e} > {loose:e}");
    }
}

/// Fourth-order second difference.
fn d2(f: &dyn Fn(f64) -> C64, x: f64, h: f64) -> C64 {
    (-f(x - 2.0 * h) + f(x - h) * 16.0 - f(x) * 30.0 + f(x + h) * 16.0 - f(x + 2.0 * h)) / (12.0 * h * h)
}

#[test]
fn solved_fields_satisfy_the_equation() {
    for (family, xi2) in [(Family::Polyharmonic, 0.0), (Family::Metaharmonic, 1.0)] {
        let spec = elliptic(family, 1, 1);
        let s = solver(&spec, vec![gaussian(vec![0.3], 0.7, 1.0)]);
        let u = |x: f64, y: f64| s.value_at(&[x], y, None).unwrap().value;
        let h = 0.05;
        for (x, y) in [(0.0, 0.5), (0.8, 1.0), (-1.2, 0.3), (2.0, 2.0)] {
            let lap = d2(&|v| u(v, y), x, h) + d2(&|v| u(x, v), y, h);
            let res = lap - u(x, y) * xi2;
            assert!(res.norm() < 1e-4 * u(x, y).norm(), "{family:?} at ({x}, {y}): residual {res}");
        }
    }
}
