//! The JSON run configuration and its resolution into core types.
//!
//! Every field is optional so that command-line flags can fill in or
//! override whatever the file leaves out.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use halfspace_core::kernels::{Family, KernelSpec, Param};
use halfspace_core::quad::Tolerance;
use halfspace_core::solver::{Axis, BoundaryData, BoundaryEntry, Grid, SolveOptions, SpatialData, TimeProfile};
use halfspace_core::testfn::{Bump, GaussianPulse, TimeTest};
use halfspace_core::C64;
use serde::{Deserialize, Serialize};

use crate::error::{config, CliError, Result};
use crate::io;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub family: Option<Family>,
    pub n: Option<u32>,
    pub m: Option<u32>,
    pub j: Option<u32>,
    /// Real spectral parameter.
    pub xi: Option<f64>,
    /// Complex spectral parameter as `[re, im]`.
    pub p: Option<[f64; 2]>,
    pub grid: Option<GridConfig>,
    /// Time test function for kernels with cone layers, e.g. `gaussian:2,0.1`.
    pub pair_with: Option<String>,
    pub data: Option<Vec<EntryConfig>>,
    #[serde(default)]
    pub options: OptionsConfig,
    pub suite: Option<String>,
    pub seed: Option<u64>,
    pub points: Option<usize>,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GridConfig {
    Text(String),
    Axes(Grid),
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptionsConfig {
    pub abs_tol: Option<f64>,
    pub rel_tol: Option<f64>,
    pub pair_abs_tol: Option<f64>,
    pub pair_rel_tol: Option<f64>,
    pub ramp_eps: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryConfig {
    pub spatial: SpatialConfig,
    #[serde(default)]
    pub time: Option<TimeConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SpatialConfig {
    Gaussian {
        center: Vec<f64>,
        width: f64,
        #[serde(default = "one")]
        amplitude: f64,
    },
    Constant {
        value: f64,
    },
    Sampled {
        axes: Vec<Vec<f64>>,
        values: Vec<f64>,
    },
    /// Samples read from a CSV file with columns `x…` (or `x1…`) and `re`.
    Csv {
        path: PathBuf,
    },
    Zero,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TimeConfig {
    Heaviside,
    GaussianPulse { t0: f64, sigma: f64 },
    Sampled { times: Vec<f64>, values: Vec<f64> },
    /// Samples read from a CSV file with columns `t` and `re`.
    Csv { path: PathBuf },
}

fn one() -> f64 {
    1.0
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })?;
        serde_json::from_str(&text).map_err(|source| CliError::Json { path: path.into(), source })
    }

    /// Fields set in `other` replace those in `self`.
    pub fn overlay(mut self, other: RunConfig) -> RunConfig {
        macro_rules! take {
            ($($f:ident),*) => { $(if other.$f.is_some() { self.$f = other.$f; })* };
        }
        take!(family, n, m, j, xi, p, grid, pair_with, data, suite, seed, points, out, threads);
        let o = other.options;
        let s = &mut self.options;
        macro_rules! take_opt {
            ($($f:ident),*) => { $(if o.$f.is_some() { s.$f = o.$f; })* };
        }
        take_opt!(abs_tol, rel_tol, pair_abs_tol, pair_rel_tol, ramp_eps);
        self
    }

    /// Spec with defaults `n = 1`, `m = 1`, `j = 0`, validated.
    pub fn spec(&self) -> Result<KernelSpec> {
        let family = self.family.ok_or_else(|| config("no kernel family given"))?;
        self.spec_for(family, self.j.unwrap_or(0))
    }

    fn spec_for(&self, family: Family, j: u32) -> Result<KernelSpec> {
        let param = match (family, self.xi, self.p) {
            (_, Some(_), Some(_)) => return Err(config("give either xi or p, not both")),
            (_, None, Some([re, im])) => Param::Complex(C64::new(re, im)),
            (_, Some(xi), None) => Param::Real(xi),
            (_, None, None) => Param::None,
        };
        Ok(KernelSpec::new(family, self.n.unwrap_or(1), self.m.unwrap_or(1), j, param)?)
    }

    /// Specs to restrict verification to: every `j < m` unless `j` is given.
    pub fn verify_specs(&self) -> Result<Vec<KernelSpec>> {
        let Some(family) = self.family else {
            if self.n.is_some() || self.m.is_some() || self.j.is_some() || self.xi.is_some() || self.p.is_some() {
                return Err(config("kernel parameters need a family"));
            }
            return Ok(Vec::new());
        };
        match self.j {
            Some(j) => Ok(vec![self.spec_for(family, j)?]),
            None => (0..self.m.unwrap_or(1)).map(|j| self.spec_for(family, j)).collect(),
        }
    }

    pub fn grid(&self) -> Result<Grid> {
        match &self.grid {
            None => Err(config("no grid given")),
            Some(GridConfig::Axes(g)) => Ok(g.clone()),
            Some(GridConfig::Text(s)) => s.parse::<GridText>().map(|g| g.0),
        }
    }

    pub fn solve_options(&self) -> SolveOptions {
        let d = SolveOptions::default();
        let o = &self.options;
        SolveOptions {
            tol: Tolerance::new(o.abs_tol.unwrap_or(d.tol.abs), o.rel_tol.unwrap_or(d.tol.rel)),
            pair_tol: Tolerance::new(o.pair_abs_tol.unwrap_or(d.pair_tol.abs), o.pair_rel_tol.unwrap_or(d.pair_tol.rel)),
            ramp_eps: o.ramp_eps.unwrap_or(d.ramp_eps),
        }
    }

    /// Boundary rows, with CSV samples loaded relative to `base`.
    pub fn boundary(&self, base: &Path) -> Result<BoundaryData> {
        let entries = self.data.as_ref().ok_or_else(|| config("no boundary data given"))?;
        let entries = entries
            .iter()
            .map(|e| {
                Ok(BoundaryEntry {
                    spatial: e.spatial.resolve(base)?,
                    time: e.time.as_ref().map(|t| t.resolve(base)).transpose()?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(BoundaryData { entries })
    }
}

impl SpatialConfig {
    fn resolve(&self, base: &Path) -> Result<SpatialData> {
        Ok(match self {
            SpatialConfig::Gaussian { center, width, amplitude } => {
                SpatialData::Gaussian { center: center.clone(), width: *width, amplitude: *amplitude }
            }
            SpatialConfig::Constant { value } => SpatialData::Constant { value: *value },
            SpatialConfig::Sampled { axes, values } => SpatialData::Sampled { axes: axes.clone(), values: values.clone() },
            SpatialConfig::Csv { path } => io::read_spatial_csv(&base.join(path))?,
            SpatialConfig::Zero => SpatialData::Zero,
        })
    }
}

impl TimeConfig {
    fn resolve(&self, base: &Path) -> Result<TimeProfile> {
        Ok(match self {
            TimeConfig::Heaviside => TimeProfile::Heaviside,
            TimeConfig::GaussianPulse { t0, sigma } => TimeProfile::GaussianPulse { t0: *t0, sigma: *sigma },
            TimeConfig::Sampled { times, values } => TimeProfile::Sampled { times: times.clone(), values: values.clone() },
            TimeConfig::Csv { path } => io::read_time_csv(&base.join(path))?,
        })
    }
}

/// Grid in the form `x=-3:3:121,y=0.1:2:20[,t=0.5:2:4]`. Several `x`
/// dimensions are written `x1=…,x2=…` (or `x=…` repeated, in order).
#[derive(Debug, Clone, PartialEq)]
pub struct GridText(pub Grid);

impl FromStr for GridText {
    type Err = CliError;

    fn from_str(s: &str) -> Result<GridText> {
        let mut x: Vec<(usize, Axis)> = Vec::new();
        let (mut y, mut t) = (None, None);
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, range) = part.split_once('=').ok_or_else(|| config(format!("grid entry `{part}` is not key=range")))?;
            let axis = parse_axis(range).ok_or_else(|| config(format!("grid range `{range}` is not lo:hi:count")))?;
            match key.trim() {
                "y" => y = Some(axis),
                "t" => t = Some(axis),
                "x" => x.push((x.len() + 1, axis)),
                k => match k.strip_prefix('x').and_then(|d| d.parse::<usize>().ok()) {
                    Some(d) if d >= 1 => x.push((d, axis)),
                    _ => return Err(config(format!("unknown grid axis `{k}`"))),
                },
            }
        }
        x.sort_by_key(|(d, _)| *d);
        if x.iter().enumerate().any(|(i, (d, _))| *d != i + 1) {
            return Err(config("grid x axes must be numbered 1, 2, … without gaps"));
        }
        let y = y.ok_or_else(|| config("grid needs a y axis"))?;
        Ok(GridText(Grid { x: x.into_iter().map(|(_, a)| a).collect(), y, t }))
    }
}

fn parse_axis(s: &str) -> Option<Axis> {
    let parts: Vec<&str> = s.split(':').map(str::trim).collect();
    match parts.as_slice() {
        [v] => {
            let v = v.parse().ok()?;
            Some(Axis::new(v, v, 1))
        }
        [lo, hi, count] => Some(Axis::new(lo.parse().ok()?, hi.parse().ok()?, count.parse().ok()?)),
        _ => None,
    }
}

/// `gaussian:t0,sigma` or `bump:center,half_width`.
pub fn parse_time_test(s: &str) -> Result<Box<dyn TimeTest>> {
    let bad = || config(format!("--pair-with `{s}` is not gaussian:t0,sigma or bump:center,half_width"));
    let (kind, args) = s.split_once(':').ok_or_else(bad)?;
    let args: Vec<f64> = args.split(',').map(|a| a.trim().parse()).collect::<std::result::Result<_, _>>().map_err(|_| bad())?;
    let [a, b] = args[..] else {
        return Err(bad());
    };
    Ok(match kind.trim() {
        "gaussian" => Box::new(GaussianPulse::new(a, b)?),
        "bump" => Box::new(Bump::new(a, b)?),
        _ => return Err(bad()),
    })
}

/// `re,im` or a single real number.
pub fn parse_complex(s: &str) -> std::result::Result<[f64; 2], String> {
    let parts: Vec<&str> = s.split(',').collect();
    let num = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("`{v}`: {e}"));
    match parts.as_slice() {
        [re] => Ok([num(re)?, 0.0]),
        [re, im] => Ok([num(re)?, num(im)?]),
        _ => Err("expected re,im".into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_text() {
        let g = "x=-3:3:121,y=0.1:2:20".parse::<GridText>().unwrap().0;
        assert_eq!(g.x, vec![Axis::new(-3.0, 3.0, 121)]);
        assert_eq!(g.y, Axis::new(0.1, 2.0, 20));
        assert_eq!(g.t, None);
        let g = "x2=0:1:3, x1=5, y=1, t=1:2:2".parse::<GridText>().unwrap().0;
        assert_eq!(g.x, vec![Axis::new(5.0, 5.0, 1), Axis::new(0.0, 1.0, 3)]);
        assert_eq!(g.t, Some(Axis::new(1.0, 2.0, 2)));
        assert!("x=0:1,y=1".parse::<GridText>().is_err());
        assert!("x=0:1:2".parse::<GridText>().is_err());
        assert!("x3=0,y=1".parse::<GridText>().is_err());
        assert!("z=0,y=1".parse::<GridText>().is_err());
    }

    #[test]
    fn overlay_prefers_flags() {
        let file = RunConfig { n: Some(2), m: Some(3), seed: Some(1), ..Default::default() };
        let flags = RunConfig { seed: Some(9), ..Default::default() };
        let c = file.overlay(flags);
        assert_eq!((c.n, c.m, c.seed), (Some(2), Some(3), Some(9)));
    }

    #[test]
    fn config_schema() {
        let c: RunConfig = serde_json::from_str(
            r#"{"family":"metaharmonic","n":1,"m":2,"p":[2.0,1.0],"grid":"x=0,y=1",
                "data":[{"spatial":{"kind":"constant","value":1.0}},{"spatial":{"kind":"zero"}}]}"#,
        )
        .unwrap();
        assert_eq!(c.spec().unwrap().param, Param::Complex(C64::new(2.0, 1.0)));
        assert_eq!(c.boundary(Path::new(".")).unwrap().entries.len(), 2);
        assert!(serde_json::from_str::<RunConfig>(r#"{"famly":"wave"}"#).is_err());
        let zero = RunConfig { family: Some(Family::Metaharmonic), xi: Some(0.0), ..Default::default() };
        assert!(zero.spec().unwrap_err().to_string().contains("xi must be nonzero"));
        let bad_j = RunConfig { family: Some(Family::Polyharmonic), m: Some(2), j: Some(2), ..Default::default() };
        assert_eq!(bad_j.spec().unwrap_err().exit_code(), 2);
    }

    #[test]
    fn time_tests_and_complex_flags() {
        assert!(parse_time_test("gaussian:2,0.1").is_ok());
        assert!(parse_time_test("bump:2,0.5").is_ok());
        assert!(parse_time_test("gaussian:2").is_err());
        assert!(parse_time_test("step:1,1").is_err());
        assert_eq!(parse_complex("2,1").unwrap(), [2.0, 1.0]);
        assert_eq!(parse_complex("0.5").unwrap(), [0.5, 0.0]);
    }
}
