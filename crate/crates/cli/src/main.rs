//! `niclab`: curvature reports, isotropic-curvature checks, the `F(c)` sweep,
//! the conformal eigen solve and the end-to-end pipeline.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use niclab_core::config::{Command, OutputFormat, RunConfig, Stencil};

use crate::commands::CliError;

#[derive(Parser, Debug)]
#[command(name = "niclab", version, about = "Negative isotropic curvature laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Curvature, σ and the eigenvalues of (s/6)I − W at every grid point.
    CurvatureReport {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        metric: MetricFlags,
    },
    /// Extremal isotropic curvature and NIC verdict at every grid point.
    /// Exits with 2 unless every point is NIC.
    IsotropicCheck {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        metric: MetricFlags,
        #[command(flatten)]
        search: SearchFlags,
    },
    /// Tabulates F(g_c) over a geometric grid of c.
    GlueSweep {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        glue: GlueFlags,
    },
    /// Lowest eigenpair of L on the glued profile at one c, as a JSON record.
    ConformalSolve {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        glue: GlueFlags,
        /// Family parameter.
        #[arg(long)]
        c: Option<f64>,
        /// Also write the per-node table (t, V, sigma, u, sigma_tilde) here.
        #[arg(long)]
        profile_csv: Option<PathBuf>,
    },
    /// Runs the property suite. Exits with 2 if any check fails.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Negate the curvature sign convention (negative control).
        #[arg(long)]
        flip_sign: bool,
    },
    /// Sweep, pick c = 2c*, solve, and certify σ̃ < 0 at every node. Writes a
    /// JSON summary; exits with 2 if F is never negative on the sweep, 3 if
    /// the eigensolver fails, 4 if σ̃ ≥ 0 somewhere.
    Pipeline {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        glue: GlueFlags,
        /// Also write the per-node table of the final solve here.
        #[arg(long)]
        profile_csv: Option<PathBuf>,
    },
}

#[derive(Args, Debug, Default)]
struct Common {
    /// JSON run configuration; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file; standard output when absent.
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    seed: Option<u64>,
    /// Run sequentially even when built with parallel support.
    #[arg(long)]
    sequential: bool,
}

#[derive(Args, Debug, Default)]
struct MetricFlags {
    /// Builtin metric name, replacing the config metric section.
    #[arg(long)]
    metric: Option<String>,
    /// Grid nodes per axis.
    #[arg(long)]
    nodes: Option<usize>,
    #[arg(long, value_enum)]
    stencil: Option<StencilArg>,
    /// Finite-difference step.
    #[arg(long)]
    step: Option<f64>,
    #[arg(long)]
    mu: Option<f64>,
}

#[derive(Args, Debug, Default)]
struct SearchFlags {
    /// Random isotropic frames per search before doubling.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    refinements: Option<usize>,
}

#[derive(Args, Debug, Default)]
struct GlueFlags {
    #[arg(long)]
    c_min: Option<f64>,
    #[arg(long)]
    c_max: Option<f64>,
    #[arg(long)]
    c_steps: Option<usize>,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long)]
    vol0: Option<f64>,
    #[arg(long)]
    area: Option<f64>,
    #[arg(long)]
    ell: Option<f64>,
    #[arg(long)]
    s_cap: Option<f64>,
    #[arg(long)]
    w_cap: Option<f64>,
    #[arg(long)]
    cap_volume: Option<f64>,
    /// Cells of the one-dimensional profile.
    #[arg(long)]
    cells: Option<usize>,
    /// Simpson nodes for band integrals.
    #[arg(long)]
    band_nodes: Option<usize>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StencilArg {
    Analytic,
    Second,
    Fourth,
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

impl Common {
    /// Reads the config, checks its `command` against `expected`, and applies
    /// the shared flags.
    fn load_for(&self, expected: Command) -> Result<RunConfig, CliError> {
        let cfg = self.load()?;
        match cfg.command {
            Some(c) if c != expected => Err(CliError::Usage(format!(
                "config is for {c:?}, not {expected:?}"
            ))),
            _ => Ok(cfg),
        }
    }

    fn load(&self) -> Result<RunConfig, CliError> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
                RunConfig::from_json(&text)?
            }
            None => RunConfig::default(),
        };
        if let Some(p) = &self.output {
            cfg.output.path = Some(p.display().to_string());
        }
        set(
            &mut cfg.output.format,
            self.format.map(|f| match f {
                Format::Csv => OutputFormat::Csv,
                Format::Json => OutputFormat::Json,
            }),
        );
        set(&mut cfg.seed, self.seed);
        if self.sequential {
            cfg.solver.parallel = false;
        }
        Ok(cfg)
    }
}

impl MetricFlags {
    fn apply(&self, cfg: &mut RunConfig) {
        if let Some(name) = &self.metric {
            let m = niclab_core::config::MetricConfig::builtin(name);
            cfg.chart = None;
            cfg.metric = Some(m.metric);
        }
        if let Some(n) = self.nodes {
            cfg.grid = niclab_core::config::GridConfig {
                nodes: Some(n),
                axes: None,
            };
        }
        set(
            &mut cfg.solver.stencil,
            self.stencil.map(|s| match s {
                StencilArg::Analytic => Stencil::Analytic,
                StencilArg::Second => Stencil::Second,
                StencilArg::Fourth => Stencil::Fourth,
            }),
        );
        set(&mut cfg.solver.step, self.step);
        set(&mut cfg.solver.mu, self.mu);
    }
}

impl SearchFlags {
    fn apply(&self, cfg: &mut RunConfig) {
        set(&mut cfg.solver.samples, self.samples);
        set(&mut cfg.solver.refinements, self.refinements);
    }
}

impl GlueFlags {
    fn apply(&self, cfg: &mut RunConfig) {
        let g = &mut cfg.glue;
        set(&mut g.c_min, self.c_min);
        set(&mut g.c_max, self.c_max);
        set(&mut g.c_steps, self.c_steps);
        set(&mut g.vol0, self.vol0);
        set(&mut g.area, self.area);
        set(&mut g.ell, self.ell);
        set(&mut g.s_cap, self.s_cap);
        set(&mut g.w_cap, self.w_cap);
        set(&mut g.cap_volume, self.cap_volume);
        set(&mut cfg.solver.mu, self.mu);
        set(&mut cfg.solver.cells, self.cells);
        set(&mut cfg.solver.band_nodes, self.band_nodes);
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Cmd::CurvatureReport { common, metric } => {
            let mut cfg = common.load_for(Command::CurvatureReport)?;
            metric.apply(&mut cfg);
            commands::curvature_report(&cfg)
        }
        Cmd::IsotropicCheck { common, metric, search } => {
            let mut cfg = common.load_for(Command::IsotropicCheck)?;
            metric.apply(&mut cfg);
            search.apply(&mut cfg);
            commands::isotropic_check(&cfg)
        }
        Cmd::GlueSweep { common, glue } => {
            let mut cfg = common.load_for(Command::GlueSweep)?;
            glue.apply(&mut cfg);
            commands::glue_sweep(&cfg)
        }
        Cmd::ConformalSolve {
            common,
            glue,
            c,
            profile_csv,
        } => {
            let mut cfg = common.load_for(Command::ConformalSolve)?;
            glue.apply(&mut cfg);
            set(&mut cfg.glue.c, c);
            commands::conformal_solve(&cfg, profile_csv.as_deref())
        }
        Cmd::Verify { common, flip_sign } => {
            let cfg = common.load_for(Command::Verify)?;
            commands::verify(&cfg, flip_sign)
        }
        Cmd::Pipeline {
            common,
            glue,
            profile_csv,
        } => {
            let mut cfg = common.load_for(Command::Pipeline)?;
            glue.apply(&mut cfg);
            commands::pipeline(&cfg, profile_csv.as_deref())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("niclab: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
