//! The `kernel`, `solve` and `verify` commands.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use halfspace_core::algebra::{pair_time_with, Point};
use halfspace_core::kernels::build_kernel;
use halfspace_core::solver::{Grid, Solver};
use halfspace_core::verify::{run_suite, Report, Suite, VerifyConfig, DEFAULT_SEED};
use halfspace_core::{Error as CoreError, C64};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{parse_time_test, RunConfig};
use crate::error::{config, CliError, Result};
use crate::io::{self, Table, Timing};

/// A resolved configuration plus the directory relative paths refer to.
#[derive(Debug, Clone)]
pub struct Context {
    pub cfg: RunConfig,
    pub base: PathBuf,
}

impl Context {
    pub fn new(cfg: RunConfig, base: impl Into<PathBuf>) -> Self {
        Context { cfg, base: base.into() }
    }

    fn pool(&self) -> Result<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.cfg.threads.unwrap_or(0))
            .build()
            .map_err(|e| config(format!("thread pool: {e}")))
    }

    fn threads(&self, pool: &rayon::ThreadPool) -> usize {
        pool.current_num_threads()
    }
}

/// Evaluate `f` at every grid point in parallel; results keep grid order and
/// the first failing point (in that order) decides the error.
fn evaluate_grid<F>(pool: &rayon::ThreadPool, grid: &Grid, f: F) -> Result<(Vec<C64>, Vec<f64>)>
where
    F: Fn(&halfspace_core::solver::GridPoint) -> halfspace_core::Result<(C64, f64)> + Sync,
{
    let results: Vec<_> = pool.install(|| (0..grid.len()).into_par_iter().map(|i| f(&grid.point(i))).collect());
    let mut values = Vec::with_capacity(results.len());
    let mut errors = Vec::with_capacity(results.len());
    for r in results {
        let (v, e) = r?;
        values.push(v);
        errors.push(e);
    }
    Ok((values, errors))
}

fn emit(out: Option<&Path>, bytes: &[u8], timing: Timing) -> Result<()> {
    match out {
        Some(path) => {
            io::write_file(path, bytes)?;
            io::write_timing(path, &timing)
        }
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|source| CliError::Io { path: "<stdout>".into(), source }),
    }
}

/// Kernel values on a grid. Kernels carrying a cone layer must be paired in
/// time (`pair_with`); the grid then has no `t` axis.
pub fn kernel(ctx: &Context) -> Result<()> {
    let cfg = &ctx.cfg;
    let spec = cfg.spec()?;
    let expr = build_kernel(&spec)?;
    let psi = cfg.pair_with.as_deref().map(parse_time_test).transpose()?;
    if psi.is_none() && expr.has_delta() {
        return Err(CoreError::DeltaLayerPresent.into());
    }
    if psi.is_some() && !spec.family.is_hyperbolic() {
        return Err(config("--pair-with only applies to wave and Klein-Gordon kernels"));
    }
    let grid = cfg.grid()?;
    grid.validate(spec.x_dim() as usize)?;
    match (&psi, grid.t.is_some()) {
        (Some(_), true) => return Err(config("a paired kernel is integrated over t; drop the t axis")),
        (None, false) if expr.depends_on_t() => {
            return Err(config("this kernel depends on t; add a t axis or --pair-with"))
        }
        (None, true) if !spec.family.is_hyperbolic() => return Err(config("elliptic kernels take no t axis")),
        _ => {}
    }
    let tol = cfg.solve_options().pair_tol;
    let pool = ctx.pool()?;
    let started = Instant::now();
    let (values, errors) = evaluate_grid(&pool, &grid, |p| match &psi {
        Some(psi) => pair_time_with(&expr, psi.as_ref(), p.r(), p.y, tol).map(|e| (e.value, e.error)),
        None => expr.evaluate(Point::new(p.r(), p.y, p.t)).map(|v| (v, 0.0)),
    })?;
    let table = Table { spec, grid, values, errors };
    let timing = Timing {
        command: "kernel".into(),
        seconds: started.elapsed().as_secs_f64(),
        threads: ctx.threads(&pool),
        items: table.values.len(),
    };
    emit(cfg.out.as_deref(), &table.encode_for(cfg.out.as_deref())?, timing)
}

/// Convolution of the kernel rows with the configured boundary data.
pub fn solve(ctx: &Context) -> Result<()> {
    let cfg = &ctx.cfg;
    let spec = cfg.spec()?;
    let data = cfg.boundary(&ctx.base)?;
    let solver = Solver::new(&spec, &data, cfg.solve_options())?;
    let grid = cfg.grid()?;
    grid.validate(solver.dim())?;
    match (solver.is_transient(), grid.t.is_some()) {
        (true, false) => return Err(config("transient problems need a t axis")),
        (false, true) => return Err(config("elliptic problems take no t axis")),
        _ => {}
    }
    let pool = ctx.pool()?;
    let started = Instant::now();
    let (values, errors) =
        evaluate_grid(&pool, &grid, |p| solver.value_at(&p.x, p.y, p.t).map(|e| (e.value, e.error)))?;
    let table = Table { spec, grid, values, errors };
    let timing = Timing {
        command: "solve".into(),
        seconds: started.elapsed().as_secs_f64(),
        threads: ctx.threads(&pool),
        items: table.values.len(),
    };
    emit(cfg.out.as_deref(), &table.encode_for(cfg.out.as_deref())?, timing)
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyDoc {
    pub seed: u64,
    pub pass: bool,
    pub reports: Vec<Report>,
}

/// Run one suite or `all`. Summary lines go to stdout, the JSON document to
/// `out`. Any failing report turns into [`CliError::VerifyFailed`] after
/// everything is written.
pub fn verify(ctx: &Context, tamper_scale: f64) -> Result<VerifyDoc> {
    let cfg = &ctx.cfg;
    let suites = match cfg.suite.as_deref().unwrap_or("all") {
        "all" => Suite::ALL.to_vec(),
        name => vec![Suite::parse(name).ok_or_else(|| {
            let known: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
            config(format!("unknown suite `{name}`; expected all or one of {}", known.join(", ")))
        })?],
    };
    if !(tamper_scale.is_finite()) {
        return Err(config("tamper scale must be finite"));
    }
    let vcfg = VerifyConfig {
        seed: cfg.seed.unwrap_or(DEFAULT_SEED),
        n_points: cfg.points.unwrap_or(20),
        specs: cfg.verify_specs()?,
        tamper_scale,
    };
    if vcfg.n_points == 0 {
        return Err(config("points must be positive"));
    }
    let pool = ctx.pool()?;
    let started = Instant::now();
    let reports: Vec<Report> =
        pool.install(|| suites.par_iter().map(|s| run_suite(*s, &vcfg)).collect::<Vec<_>>()).concat();
    if reports.is_empty() {
        return Err(config("none of the selected suites applies to the given kernel"));
    }
    let failed = reports.iter().filter(|r| !r.pass).count();
    let doc = VerifyDoc { seed: vcfg.seed, pass: failed == 0, reports };

    let mut text = String::new();
    for r in &doc.reports {
        text.push_str(&r.summary());
        text.push('\n');
    }
    text.push_str(&format!("{} reports, {failed} failed\n", doc.reports.len()));
    std::io::stdout()
        .write_all(text.as_bytes())
        .map_err(|source| CliError::Io { path: "<stdout>".into(), source })?;

    if let Some(out) = cfg.out.as_deref() {
        let mut bytes =
            serde_json::to_vec_pretty(&doc).map_err(|source| CliError::Json { path: out.into(), source })?;
        bytes.push(b'\n');
        io::write_file(out, &bytes)?;
        let timing = Timing {
            command: "verify".into(),
            seconds: started.elapsed().as_secs_f64(),
            threads: ctx.threads(&pool),
            items: doc.reports.len(),
        };
        io::write_timing(out, &timing)?;
    }
    if failed > 0 {
        return Err(CliError::VerifyFailed { failed, total: doc.reports.len() });
    }
    Ok(doc)
}
