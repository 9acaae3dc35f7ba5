use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use halfspace::commands::{self, Context};
use halfspace::config::{parse_complex, GridConfig, RunConfig};
use halfspace::CliError;
use halfspace_core::kernels::Family;

#[derive(Parser)]
#[command(name = "halfspace", version, about = "Poisson kernels of half-space Dirichlet problems: evaluate, solve, verify")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON run configuration; flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file (`.json` for JSON, CSV otherwise). Defaults to stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a kernel on a grid.
    Kernel {
        #[command(flatten)]
        spec: SpecArgs,
        /// Pair in time with a test function: `gaussian:t0,sigma` or `bump:center,half_width`.
        #[arg(long)]
        pair_with: Option<String>,
    },
    /// Solve a boundary-value problem given in the configuration file.
    Solve {
        #[command(flatten)]
        spec: SpecArgs,
    },
    /// Run certification suites.
    Verify {
        /// Suite name or `all`.
        suite: Option<String>,
        #[command(flatten)]
        spec: SpecArgs,
        /// Sample points per report.
        #[arg(long)]
        points: Option<usize>,
        #[arg(long, hide = true, default_value_t = 1.0)]
        tamper_scale: f64,
    },
}

#[derive(Args)]
struct SpecArgs {
    #[arg(long, value_enum)]
    family: Option<FamilyArg>,
    #[arg(short = 'n')]
    n: Option<u32>,
    #[arg(short = 'm')]
    m: Option<u32>,
    #[arg(short = 'j')]
    j: Option<u32>,
    /// Real spectral parameter.
    #[arg(long, allow_hyphen_values = true)]
    xi: Option<f64>,
    /// Complex spectral parameter `re,im`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    p: Option<[f64; 2]>,
    /// Grid, e.g. `x=-3:3:121,y=0.1:2:20`.
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Polyharmonic,
    Metaharmonic,
    Wave,
    #[value(alias = "klein_gordon")]
    KleinGordon,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::Polyharmonic => Family::Polyharmonic,
            FamilyArg::Metaharmonic => Family::Metaharmonic,
            FamilyArg::Wave => Family::Wave,
            FamilyArg::KleinGordon => Family::KleinGordon,
        }
    }
}

impl SpecArgs {
    fn into_config(self) -> RunConfig {
        RunConfig {
            family: self.family.map(Family::from),
            n: self.n,
            m: self.m,
            j: self.j,
            xi: self.xi,
            p: self.p,
            grid: self.grid.map(GridConfig::Text),
            ..RunConfig::default()
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let (base_cfg, base) = match &cli.config {
        Some(path) => {
            let dir = path.parent().map(PathBuf::from).unwrap_or_default();
            (RunConfig::load(path)?, dir)
        }
        None => (RunConfig::default(), PathBuf::from(".")),
    };
    let common = RunConfig { out: cli.out, seed: cli.seed, threads: cli.threads, ..RunConfig::default() };
    match cli.command {
        Command::Kernel { spec, pair_with } => {
            let flags = RunConfig { pair_with, ..spec.into_config() }.overlay(common);
            commands::kernel(&Context::new(base_cfg.overlay(flags), base))
        }
        Command::Solve { spec } => {
            let flags = spec.into_config().overlay(common);
            commands::solve(&Context::new(base_cfg.overlay(flags), base))
        }
        Command::Verify { suite, spec, points, tamper_scale } => {
            let flags = RunConfig { suite, points, ..spec.into_config() }.overlay(common);
            commands::verify(&Context::new(base_cfg.overlay(flags), base), tamper_scale).map(|_| ())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
