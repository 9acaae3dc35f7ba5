//! Field output (CSV and JSON), sampled boundary data input and the timing
//! sidecar.
//!
//! Numbers are written with Rust's `{:e}` formatting, the shortest
//! scientific representation that round-trips to the same `f64`. It does not
//! depend on the locale.

use std::path::{Path, PathBuf};

use halfspace_core::kernels::KernelSpec;
use halfspace_core::solver::{Grid, SpatialData, TimeProfile};
use halfspace_core::C64;
use serde::Serialize;

use crate::error::{config, CliError, Result};

/// Values on a grid, with one error estimate per point.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub spec: KernelSpec,
    pub grid: Grid,
    pub values: Vec<C64>,
    pub errors: Vec<f64>,
}

pub fn num(v: f64) -> String {
    format!("{v:e}")
}

impl Table {
    pub fn columns(&self) -> Vec<String> {
        let nx = self.grid.x.len();
        let mut cols: Vec<String> = match nx {
            1 => vec!["x".into()],
            _ => (1..=nx).map(|d| format!("x{d}")).collect(),
        };
        cols.push("y".into());
        if self.grid.t.is_some() {
            cols.push("t".into());
        }
        cols.extend(["re", "im", "err"].map(String::from));
        cols
    }

    pub fn rows(&self) -> impl Iterator<Item = Vec<f64>> + '_ {
        (0..self.grid.len()).map(|i| {
            let p = self.grid.point(i);
            let mut row = p.x;
            row.push(p.y);
            row.extend(p.t);
            row.extend([self.values[i].re, self.values[i].im, self.errors[i]]);
            row
        })
    }

    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let wrap = |source| CliError::Csv { path: PathBuf::from("<field>"), source };
        w.write_record(self.columns()).map_err(wrap)?;
        for row in self.rows() {
            w.write_record(row.iter().map(|v| num(*v))).map_err(wrap)?;
        }
        w.into_inner().map_err(|e| config(format!("csv buffer: {e}")))
    }

    pub fn to_json(&self) -> Result<Vec<u8>> {
        #[derive(Serialize)]
        struct Doc<'a> {
            spec: &'a KernelSpec,
            grid: &'a Grid,
            columns: Vec<String>,
            rows: Vec<Vec<f64>>,
        }
        let doc = Doc { spec: &self.spec, grid: &self.grid, columns: self.columns(), rows: self.rows().collect() };
        let mut out = serde_json::to_vec_pretty(&doc).map_err(|source| CliError::Json { path: "<field>".into(), source })?;
        out.push(b'\n');
        Ok(out)
    }

    /// JSON for a `.json` path, CSV otherwise.
    pub fn encode_for(&self, path: Option<&Path>) -> Result<Vec<u8>> {
        match path.and_then(|p| p.extension()).and_then(|e| e.to_str()) {
            Some("json") => self.to_json(),
            _ => self.to_csv(),
        }
    }
}

pub fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|source| CliError::Io { path: path.into(), source })
}

/// `<out>.timing.json`, kept apart so the primary output stays reproducible.
pub fn timing_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".timing.json");
    PathBuf::from(s)
}

#[derive(Debug, Clone, Serialize)]
pub struct Timing {
    pub command: String,
    pub seconds: f64,
    pub threads: usize,
    pub items: usize,
}

pub fn write_timing(out: &Path, timing: &Timing) -> Result<()> {
    let path = timing_path(out);
    let bytes = serde_json::to_vec_pretty(timing).map_err(|source| CliError::Json { path: path.clone(), source })?;
    write_file(&path, &bytes)
}

struct Columns {
    headers: Vec<String>,
    rows: Vec<Vec<f64>>,
}

impl Columns {
    fn read(path: &Path) -> Result<Columns> {
        let wrap = |source| CliError::Csv { path: path.into(), source };
        let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(path).map_err(wrap)?;
        let headers = r.headers().map_err(wrap)?.iter().map(String::from).collect();
        let mut rows = Vec::new();
        for (line, rec) in r.records().enumerate() {
            let rec = rec.map_err(wrap)?;
            let row = rec
                .iter()
                .map(|f| f.parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| config(format!("{}: row {}: {e}", path.display(), line + 1)))?;
            rows.push(row);
        }
        Ok(Columns { headers, rows })
    }

    fn index(&self, name: &str) -> Option<usize> {
        self.headers.iter().position(|h| h == name)
    }

    fn value_column(&self, path: &Path) -> Result<usize> {
        self.index("re")
            .or_else(|| self.index("value"))
            .ok_or_else(|| config(format!("{}: no `re` or `value` column", path.display())))
    }

    fn column(&self, i: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r[i]).collect()
    }

    fn constant(&self, name: &str, path: &Path) -> Result<()> {
        if let Some(i) = self.index(name) {
            let col = self.column(i);
            if col.iter().any(|v| *v != col[0]) {
                return Err(config(format!("{}: boundary samples need a single `{name}` value", path.display())));
            }
        }
        Ok(())
    }
}

/// Tensor-grid samples from columns `x` (or `x1`, `x2`, …) and `re`, in any
/// row order. A `y` or `t` column, if present, must be constant; `im` and
/// `err` are ignored.
pub fn read_spatial_csv(path: &Path) -> Result<SpatialData> {
    let cols = Columns::read(path)?;
    let x_cols: Vec<usize> = match cols.index("x") {
        Some(i) => vec![i],
        None => (1..).map_while(|d| cols.index(&format!("x{d}"))).collect(),
    };
    if x_cols.is_empty() {
        return Err(config(format!("{}: no `x` or `x1` column", path.display())));
    }
    cols.constant("y", path)?;
    cols.constant("t", path)?;
    let vi = cols.value_column(path)?;

    let axes: Vec<Vec<f64>> = x_cols
        .iter()
        .map(|&c| {
            let mut a = cols.column(c);
            a.sort_by(f64::total_cmp);
            a.dedup();
            a
        })
        .collect();
    let total: usize = axes.iter().map(Vec::len).product();
    if total != cols.rows.len() {
        return Err(config(format!(
            "{}: {} rows do not form a full tensor grid of {total} nodes",
            path.display(),
            cols.rows.len()
        )));
    }
    let mut values = vec![f64::NAN; total];
    for row in &cols.rows {
        let mut flat = 0;
        for (axis, &c) in axes.iter().zip(&x_cols) {
            let k = axis.binary_search_by(|v| v.total_cmp(&row[c])).expect("coordinate taken from this column");
            flat = flat * axis.len() + k;
        }
        if !values[flat].is_nan() {
            return Err(config(format!("{}: repeated grid node", path.display())));
        }
        values[flat] = row[vi];
    }
    Ok(SpatialData::Sampled { axes, values })
}

/// Time samples from columns `t` and `re`, sorted by `t`.
pub fn read_time_csv(path: &Path) -> Result<TimeProfile> {
    let cols = Columns::read(path)?;
    let ti = cols.index("t").ok_or_else(|| config(format!("{}: no `t` column", path.display())))?;
    let vi = cols.value_column(path)?;
    let mut pairs: Vec<(f64, f64)> = cols.rows.iter().map(|r| (r[ti], r[vi])).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (times, values) = pairs.into_iter().unzip();
    Ok(TimeProfile::Sampled { times, values })
}
