//! One function per subcommand. Each returns the process exit code.

use std::path::Path;

use niclab_core::config::{ConfigError, OutputFormat, RunConfig};
use niclab_core::conformal::{
    conformal_deform, glued_profile, lowest_eigenpair, ConformalDeformation, EigenSolution, ProfileManifold,
    ProfileOptions,
};
use niclab_core::curvature::{curvature_at, lambda2_operator};
use niclab_core::exec::try_map_indexed;
use niclab_core::gluing::{functional_f, BandOptions, FRow, FTable};
use niclab_core::isotropic::{extremal_isotropic, SearchBudget, SearchOptions, Verdict};
use niclab_core::metric::MetricError;
use niclab_core::verify::{verify as run_suite, VerifyOptions};
use niclab_core::Execution;
use serde::Serialize;
use thiserror::Error;

use crate::output::{csv_table, emit, json, num};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Numeric(_) => 3,
            _ => 1,
        }
    }
}

impl From<MetricError> for CliError {
    fn from(e: MetricError) -> Self {
        CliError::Numeric(e.to_string())
    }
}

fn validated(cfg: &RunConfig) -> Result<(), CliError> {
    cfg.solver.validate()?;
    cfg.glue.constants().validate().map_err(ConfigError::from)?;
    Ok(())
}

fn exec(cfg: &RunConfig) -> Execution {
    cfg.solver.execution()
}

fn metric(cfg: &RunConfig) -> Result<niclab_core::metric::MetricField, CliError> {
    let m = cfg
        .metric_config()
        .ok_or_else(|| CliError::Usage("no metric: pass --metric NAME or a config with a metric section".into()))?;
    let field = m.build()?;
    if field.dim() != 4 {
        return Err(CliError::Usage(format!("curvature needs a 4-dimensional metric, got {}", field.dim())));
    }
    Ok(field)
}

fn point_columns() -> Vec<String> {
    ["x1", "x2", "x3", "x4"].iter().map(|s| s.to_string()).collect()
}

#[derive(Serialize)]
struct CurvatureRecord {
    point: Vec<f64>,
    s: f64,
    weyl_norm: f64,
    sigma: f64,
    q: [f64; 6],
}

pub fn curvature_report(cfg: &RunConfig) -> Result<u8, CliError> {
    validated(cfg)?;
    let m = metric(cfg)?;
    let points = cfg.grid.build(m.chart())?.points(m.chart())?;
    let opts = cfg.solver.curvature_options();
    let records = try_map_indexed(exec(cfg), points.len(), |i| -> Result<CurvatureRecord, MetricError> {
        let d = curvature_at(&m, &points[i], &opts)?;
        Ok(CurvatureRecord {
            point: points[i].clone(),
            s: d.scalar,
            weyl_norm: d.weyl_norm,
            sigma: d.sigma(),
            q: lambda2_operator(&d).q_eigenvalues,
        })
    })?;
    let bytes = match cfg.output.format {
        OutputFormat::Json => json(&records)?,
        OutputFormat::Csv => {
            let mut header = point_columns();
            header.extend(["s", "weyl_norm", "sigma"].map(String::from));
            header.extend((1..=6).map(|k| format!("q{k}")));
            let rows: Vec<Vec<String>> = records
                .iter()
                .map(|r| {
                    r.point
                        .iter()
                        .chain([r.s, r.weyl_norm, r.sigma].iter())
                        .chain(r.q.iter())
                        .map(|v| num(*v))
                        .collect()
                })
                .collect();
            csv_table(&header, &rows)?
        }
    };
    emit(cfg.output.path.as_deref(), &bytes)?;
    Ok(0)
}

#[derive(Serialize)]
struct IsotropicRecord {
    point: Vec<f64>,
    s: f64,
    weyl_norm: f64,
    sigma_mu: f64,
    k_min: f64,
    k_max: f64,
    q_max: f64,
    verdict: Verdict,
}

pub fn isotropic_check(cfg: &RunConfig) -> Result<u8, CliError> {
    validated(cfg)?;
    let m = metric(cfg)?;
    let points = cfg.grid.build(m.chart())?.points(m.chart())?;
    let opts = cfg.solver.curvature_options();
    let search = SearchOptions {
        budget: SearchBudget {
            samples: cfg.solver.samples,
            refinements: cfg.solver.refinements,
        },
        seed: cfg.seed,
        max_doublings: cfg.solver.max_doublings,
        exec: Execution::Sequential,
        ..SearchOptions::default()
    };
    let mu = cfg.solver.mu;
    let records = try_map_indexed(exec(cfg), points.len(), |i| -> Result<IsotropicRecord, MetricError> {
        let d = curvature_at(&m, &points[i], &opts)?;
        let v = extremal_isotropic(&d, &search);
        Ok(IsotropicRecord {
            point: points[i].clone(),
            s: d.scalar,
            weyl_norm: d.weyl_norm,
            sigma_mu: d.sigma_mu(mu),
            k_min: v.k_min,
            k_max: v.k_max,
            q_max: v.q_max,
            verdict: v.verdict,
        })
    })?;
    let bytes = match cfg.output.format {
        OutputFormat::Json => json(&records)?,
        OutputFormat::Csv => {
            let mut header = point_columns();
            header.extend(["s", "weyl_norm", "sigma_mu", "k_min", "k_max", "q_max", "verdict"].map(String::from));
            let rows: Vec<Vec<String>> = records
                .iter()
                .map(|r| {
                    let mut row: Vec<String> = r
                        .point
                        .iter()
                        .chain([r.s, r.weyl_norm, r.sigma_mu, r.k_min, r.k_max, r.q_max].iter())
                        .map(|v| num(*v))
                        .collect();
                    row.push(r.verdict.as_str().to_string());
                    row
                })
                .collect();
            csv_table(&header, &rows)?
        }
    };
    emit(cfg.output.path.as_deref(), &bytes)?;
    let all_nic = records.iter().all(|r| r.verdict == Verdict::Nic);
    Ok(if all_nic { 0 } else { 2 })
}

fn band_options(cfg: &RunConfig) -> BandOptions {
    BandOptions {
        nodes: cfg.solver.band_nodes,
        curvature: cfg.solver.curvature_options(),
    }
}

fn sweep(cfg: &RunConfig) -> Result<FTable, CliError> {
    let grid = cfg.glue.grid()?;
    let base = cfg.glue.family(grid[0])?;
    functional_f(&base, &grid, cfg.solver.mu, &band_options(cfg), exec(cfg)).map_err(|e| CliError::Numeric(e.to_string()))
}

fn f_table_csv(rows: &[FRow]) -> Result<Vec<u8>, CliError> {
    let rows: Vec<Vec<String>> = rows.iter().map(|r| r.values().iter().map(|v| num(*v)).collect()).collect();
    csv_table(&FRow::HEADER, &rows)
}

pub fn glue_sweep(cfg: &RunConfig) -> Result<u8, CliError> {
    validated(cfg)?;
    let table = sweep(cfg)?;
    let bytes = match cfg.output.format {
        OutputFormat::Csv => f_table_csv(&table.rows)?,
        OutputFormat::Json => json(&table)?,
    };
    emit(cfg.output.path.as_deref(), &bytes)?;
    Ok(0)
}

#[derive(Serialize)]
struct SolveRecord {
    c: f64,
    mu: f64,
    nodes: usize,
    lambda: f64,
    #[serde(rename = "F")]
    f: f64,
    vol: f64,
    residual: f64,
    min_u: f64,
    max_u: f64,
    sigma_tilde_max: f64,
}

struct Solved {
    pm: ProfileManifold,
    sol: EigenSolution,
    deformation: ConformalDeformation,
}

impl Solved {
    fn record(&self, c: f64, mu: f64) -> SolveRecord {
        SolveRecord {
            c,
            mu,
            nodes: self.pm.len(),
            lambda: self.sol.lambda,
            f: self.pm.functional(),
            vol: self.pm.total_volume(),
            residual: self.sol.residual,
            min_u: self.sol.min_u(),
            max_u: self.sol.max_u(),
            sigma_tilde_max: self.deformation.max_sigma_tilde,
        }
    }

    fn profile_csv(&self) -> Result<Vec<u8>, CliError> {
        let rows: Vec<Vec<String>> = (0..self.pm.len())
            .map(|i| {
                vec![
                    self.pm.t[i].map(num).unwrap_or_default(),
                    num(self.pm.volume[i]),
                    num(self.pm.sigma[i]),
                    num(self.sol.u[i]),
                    num(self.deformation.from_law[i]),
                ]
            })
            .collect();
        csv_table(&["t", "V", "sigma", "u", "sigma_tilde"], &rows)
    }
}

fn solve(cfg: &RunConfig, c: f64) -> Result<Solved, CliError> {
    let fam = cfg.glue.family(c)?;
    let mu = cfg.solver.mu;
    let opts = ProfileOptions {
        cells: cfg.solver.cells,
        pad: cfg.solver.pad,
        curvature: cfg.solver.curvature_options(),
    };
    let numeric = |e: niclab_core::conformal::ConformalError| CliError::Numeric(e.to_string());
    let pm = glued_profile(&fam, mu, &opts).map_err(numeric)?;
    let sol = lowest_eigenpair(&pm, cfg.solver.tol).map_err(numeric)?;
    let deformation = conformal_deform(&pm, &sol, &niclab_core::conformal::ConformalLaw::new(4, mu)).map_err(numeric)?;
    Ok(Solved { pm, sol, deformation })
}

fn write_profile(solved: &Solved, path: Option<&Path>) -> Result<(), CliError> {
    if let Some(p) = path {
        emit(Some(&p.display().to_string()), &solved.profile_csv()?)?;
    }
    Ok(())
}

pub fn conformal_solve(cfg: &RunConfig, profile_csv: Option<&Path>) -> Result<u8, CliError> {
    validated(cfg)?;
    let solved = solve(cfg, cfg.glue.c)?;
    let record = solved.record(cfg.glue.c, cfg.solver.mu);
    emit(cfg.output.path.as_deref(), &json(&record)?)?;
    write_profile(&solved, profile_csv)?;
    Ok(0)
}

pub fn verify(cfg: &RunConfig, flip_sign: bool) -> Result<u8, CliError> {
    let report = run_suite(&VerifyOptions {
        seed: cfg.seed,
        flip_sign,
        exec: exec(cfg),
    });
    emit(cfg.output.path.as_deref(), &json(&report)?)?;
    Ok(if report.passed { 0 } else { 2 })
}

#[derive(Serialize)]
struct PipelineSummary {
    status: &'static str,
    exit_code: u8,
    mu: f64,
    c_star: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    solve: Option<SolveRecord>,
    /// First node with `σ̃ ≥ 0`.
    #[serde(skip_serializing_if = "Option::is_none")]
    offending_node: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    detail: Option<String>,
    table: Vec<FRow>,
}

pub fn pipeline(cfg: &RunConfig, profile_csv: Option<&Path>) -> Result<u8, CliError> {
    validated(cfg)?;
    let table = sweep(cfg)?;
    let mu = cfg.solver.mu;
    let mut summary = PipelineSummary {
        status: "ok",
        exit_code: 0,
        mu,
        c_star: table.c_star,
        solve: None,
        offending_node: None,
        detail: None,
        table: table.rows.clone(),
    };
    match table.c_star {
        None => {
            summary.status = "F never negative on the sweep range";
            summary.exit_code = 2;
        }
        Some(c_star) => {
            let c = 2.0 * c_star;
            match solve(cfg, c) {
                Err(e) => {
                    summary.status = "eigensolver failure";
                    summary.exit_code = 3;
                    summary.detail = Some(e.to_string());
                }
                Ok(solved) => {
                    summary.solve = Some(solved.record(c, mu));
                    if let Some(node) = solved.deformation.from_law.iter().position(|s| s.is_nan() || *s >= 0.0) {
                        summary.status = "sigma_tilde is not negative everywhere";
                        summary.exit_code = 4;
                        summary.offending_node = Some(node);
                    }
                    write_profile(&solved, profile_csv)?;
                }
            }
        }
    }
    emit(cfg.output.path.as_deref(), &json(&summary)?)?;
    Ok(summary.exit_code)
}
