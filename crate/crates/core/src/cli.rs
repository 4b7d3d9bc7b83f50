//! Configuration-driven experiment runner behind the `kirchhoff-lab` binary.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::branch::{find_roots, KirchhoffParams};
use crate::config::{ExperimentConfig, PerturbationConfig};
use crate::error::{Error, Result};
use crate::grid::{Grid, Shape};
use crate::groundstate::{ground_state, GroundState};
use crate::kirchhoff::homotopy::{uniform_schedule, Homotopy};
use crate::kirchhoff::sweep::{bound_sweep, SweepRegime, SweepSpec, Window};
use crate::kirchhoff::{reconstruct, PerturbationSpec, SolutionRecord};
use crate::report::{fmt_f, fmt_opt, write_csv, write_report, CsvTable};
use crate::shooting::{shooting_oracle_with_steps, DEFAULT_STEPS};
use crate::verify;

#[derive(Debug, Parser)]
#[command(
    name = "kirchhoff-lab",
    version,
    about = "Positive solutions of Kirchhoff-type Dirichlet problems"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// TOML experiment configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output prefix; overrides `output` from the config.
    #[arg(long)]
    pub out: Option<String>,
    /// Worker threads for sweeps (default: all cores).
    #[arg(long)]
    pub threads: Option<usize>,
    /// Override the domain resolution.
    #[arg(long)]
    pub resolution: Option<usize>,
    /// Also dump solution fields as CSV grids.
    #[arg(long)]
    pub field: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve for the ground state and report S(Omega) and S.
    Groundstate(Common),
    /// Classify the regime and list the branch roots.
    Branch(Common),
    /// Reconstruct the Kirchhoff solution on every branch.
    Solve(Common),
    /// Follow the homotopy from t = 0 to t = 1.
    Continuation(Common),
    /// Sweep parameters and report the sup-norm window.
    Sweep(Common),
    /// Radial shooting reference on a disk.
    Oracle(Common),
    /// Run the acceptance suite.
    Verify(Common),
}

impl Command {
    pub fn common(&self) -> &Common {
        match self {
            Command::Groundstate(c)
            | Command::Branch(c)
            | Command::Solve(c)
            | Command::Continuation(c)
            | Command::Sweep(c)
            | Command::Oracle(c)
            | Command::Verify(c) => c,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Command::Groundstate(_) => "groundstate",
            Command::Branch(_) => "branch",
            Command::Solve(_) => "solve",
            Command::Continuation(_) => "continuation",
            Command::Sweep(_) => "sweep",
            Command::Oracle(_) => "oracle",
            Command::Verify(_) => "verify",
        }
    }
}

/// What a finished run produced.
#[derive(Debug)]
pub struct Outcome {
    pub ok: bool,
    pub files: Vec<PathBuf>,
    pub summary: Vec<String>,
}

/// Machine-readable error report printed on failure.
#[derive(Debug, Serialize)]
pub struct ErrorReport {
    pub command: String,
    pub error: &'static str,
    pub message: String,
    pub violations: Vec<String>,
}

impl ErrorReport {
    pub fn new(command: &str, err: &Error) -> Self {
        ErrorReport {
            command: command.to_string(),
            error: err.kind(),
            message: err.to_string(),
            violations: match err {
                Error::Hypothesis(v) => v.clone(),
                _ => Vec::new(),
            },
        }
    }
}

/// Config plus the values resolved from it; embedded in every report.
#[derive(Debug, Serialize)]
struct Resolved<'a> {
    #[serde(flatten)]
    config: &'a ExperimentConfig,
    resolved_perturbation: PerturbationSpec,
    lambda1: Option<f64>,
}

struct Context {
    config: ExperimentConfig,
    prefix: String,
    field: bool,
}

impl Context {
    fn load(common: &Common) -> Result<Self> {
        let path = common
            .config
            .as_ref()
            .ok_or_else(|| Error::Config("--config <path> is required".into()))?;
        let mut config = ExperimentConfig::load(path)?;
        if let Some(n) = common.resolution {
            config.domain.resolution = n;
        }
        if let Some(out) = &common.out {
            config.output = out.clone();
        }
        let prefix = config.output.clone();
        Ok(Context {
            config,
            prefix,
            field: common.field,
        })
    }

    /// Validates against a grid and returns it with the resolved perturbation.
    fn prepare(&self) -> Result<(Grid, PerturbationSpec, Option<f64>)> {
        let bad = self.config.static_violations();
        if !bad.is_empty() {
            return Err(Error::Hypothesis(bad));
        }
        let grid = self.config.grid()?;
        let (pert, l1) = self.config.validate(Some(&grid))?;
        Ok((grid, pert, l1))
    }

    fn resolved(&self, pert: PerturbationSpec, lambda1: Option<f64>) -> Resolved<'_> {
        Resolved {
            config: &self.config,
            resolved_perturbation: pert,
            lambda1,
        }
    }

    fn ground_state(&self, grid: &Grid, p: f64) -> Result<GroundState> {
        ground_state(grid, p, self.config.tolerances.groundstate)
    }
}

pub fn configure_threads(threads: Option<usize>) -> Result<()> {
    if let Some(n) = threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    }
    Ok(())
}

pub fn run(command: &Command) -> Result<Outcome> {
    configure_threads(command.common().threads)?;
    match command {
        Command::Verify(c) => run_verify(c),
        other => {
            let ctx = Context::load(other.common())?;
            match other {
                Command::Groundstate(_) => run_groundstate(&ctx),
                Command::Branch(_) => run_branch(&ctx),
                Command::Solve(_) => run_solve(&ctx),
                Command::Continuation(_) => run_continuation(&ctx),
                Command::Sweep(_) => run_sweep(&ctx),
                Command::Oracle(_) => run_oracle(&ctx),
                Command::Verify(_) => unreachable!(),
            }
        }
    }
}

fn field_table(grid: &Grid, values: &[f64], name: &str) -> CsvTable {
    let mut t = CsvTable::new(&["x", "y", name]);
    for (k, v) in values.iter().enumerate() {
        let (x, y) = grid.coords(k);
        t.push(vec![fmt_f(x), fmt_f(y), fmt_f(*v)]);
    }
    t
}

fn run_groundstate(ctx: &Context) -> Result<Outcome> {
    let (grid, pert, l1) = ctx.prepare()?;
    let gs = ctx.ground_state(&grid, ctx.config.params.p)?;
    let summary = gs.summary();
    let result = json!({ "nodes": grid.len(), "ground_state": summary });
    let mut files = vec![write_report(
        &ctx.prefix,
        "groundstate",
        true,
        &ctx.resolved(pert, l1),
        &result,
    )?];
    files.push(write_csv(
        &ctx.prefix,
        ".csv",
        &field_table(&grid, gs.v.values(), "v"),
    )?);
    Ok(Outcome {
        ok: true,
        files,
        summary: vec![format!(
            "S(Omega) = {:.12}, S = {:.12}, residual {:.2e}",
            summary.s_omega, summary.s, summary.residual
        )],
    })
}

/// Parameter sets for `branch`: one per sweep value, or the base set.
fn branch_cells(config: &ExperimentConfig) -> Result<Vec<KirchhoffParams>> {
    let base = config.params;
    let Some(sw) = &config.sweep else {
        return Ok(vec![base]);
    };
    sw.values
        .iter()
        .map(|&v| {
            let p = match sw.variable.as_str() {
                "a" => base.with_a(v),
                "b" => base.with_b(v),
                "alpha" => KirchhoffParams { alpha: v, ..base },
                "p" => KirchhoffParams { p: v, ..base },
                other => {
                    return Err(Error::Config(format!(
                        "branch sweeps vary a, b, alpha or p, not `{other}`"
                    )))
                }
            };
            p.validate()?;
            Ok(p)
        })
        .collect()
}

fn run_branch(ctx: &Context) -> Result<Outcome> {
    let bad = ctx.config.static_violations();
    if !bad.is_empty() {
        return Err(Error::Hypothesis(bad));
    }
    let cells = branch_cells(&ctx.config)?;
    let fixed_s = ctx.config.branch.and_then(|b| b.s);
    let grid = if fixed_s.is_none() {
        Some(ctx.config.grid()?)
    } else {
        None
    };
    let mut table = CsvTable::new(&[
        "a",
        "b",
        "alpha",
        "p",
        "S",
        "case",
        "predicted_count",
        "tangent",
        "y0",
        "root_index",
        "root",
        "log_root",
        "residual",
    ]);
    let mut reports = Vec::new();
    let mut cached: Option<(f64, f64)> = None;
    for params in cells {
        let s = match (fixed_s, &grid) {
            (Some(s), _) => s,
            (None, Some(g)) => match cached {
                Some((p, s)) if p == params.p => s,
                _ => {
                    let s = ctx.ground_state(g, params.p)?.s;
                    cached = Some((params.p, s));
                    s
                }
            },
            (None, None) => unreachable!(),
        };
        let rep = find_roots(&params, s, ctx.config.tolerances.root)?;
        let lead = |t: &mut CsvTable, idx: String, root: String, lr: String, res: String| {
            t.push(vec![
                fmt_f(params.a),
                fmt_f(params.b),
                fmt_f(params.alpha),
                fmt_f(params.p),
                fmt_f(s),
                rep.case.label().into(),
                rep.predicted_count.to_string(),
                rep.tangent.to_string(),
                fmt_opt(rep.y0),
                idx,
                root,
                lr,
                res,
            ])
        };
        if rep.roots.is_empty() {
            lead(
                &mut table,
                String::new(),
                String::new(),
                String::new(),
                String::new(),
            );
        }
        for i in 0..rep.roots.len() {
            lead(
                &mut table,
                i.to_string(),
                fmt_f(rep.roots[i]),
                fmt_f(rep.log_roots[i]),
                fmt_f(rep.residuals[i]),
            );
        }
        reports.push(json!({ "params": params, "s": s, "regime": rep }));
    }
    let n = reports.len();
    let result = json!({ "cells": reports });
    let files = vec![
        write_report(
            &ctx.prefix,
            "branch",
            true,
            &ctx.resolved(PerturbationSpec::None, None),
            &result,
        )?,
        write_csv(&ctx.prefix, ".csv", &table)?,
    ];
    Ok(Outcome {
        ok: true,
        files,
        summary: vec![format!("{n} parameter set(s), {} row(s)", table.len())],
    })
}

fn record_row(rec: &SolutionRecord, label: String) -> Vec<String> {
    vec![
        label,
        fmt_opt(rec.beta),
        fmt_f(rec.grad_sq),
        fmt_f(rec.sup_norm),
        fmt_f(rec.min_value),
        fmt_f(rec.residual_rel),
        rec.iterations.to_string(),
    ]
}

const RECORD_HEADER: [&str; 7] = [
    "label",
    "beta",
    "grad_sq",
    "sup_norm",
    "min",
    "residual_rel",
    "iterations",
];

fn run_solve(ctx: &Context) -> Result<Outcome> {
    let (grid, _, l1) = ctx.prepare()?;
    let params = ctx.config.params;
    let gs = ctx.ground_state(&grid, params.p)?;
    let rep = find_roots(&params, gs.s, ctx.config.tolerances.root)?;
    let mut table = CsvTable::new(&RECORD_HEADER);
    let mut records = Vec::new();
    let mut files = Vec::new();
    for (i, &beta) in rep.roots.iter().enumerate() {
        let rec = reconstruct(&grid, &gs, beta, &params, i)?;
        table.push(record_row(&rec, format!("root{i}")));
        if ctx.field {
            files.push(write_csv(
                &ctx.prefix,
                &format!(".field{i}.csv"),
                &field_table(&grid, rec.u.values(), "u"),
            )?);
        }
        records.push(rec);
    }
    let result = json!({
        "ground_state": gs.summary(),
        "regime": rep,
        "records": records,
    });
    files.insert(0, write_csv(&ctx.prefix, ".csv", &table)?);
    files.insert(
        0,
        write_report(
            &ctx.prefix,
            "solve",
            true,
            &ctx.resolved(PerturbationSpec::None, l1),
            &result,
        )?,
    );
    Ok(Outcome {
        ok: true,
        files,
        summary: vec![format!(
            "{} case, {} solution(s) reconstructed",
            rep.case.label(),
            records.len()
        )],
    })
}

fn run_continuation(ctx: &Context) -> Result<Outcome> {
    let (grid, pert, l1) = ctx.prepare()?;
    let schedule = ctx
        .config
        .t_schedule
        .clone()
        .unwrap_or_else(|| uniform_schedule(10));
    let h = Homotopy::with_eigenvalue(&grid, ctx.config.params, pert, l1)?;
    let opts = ctx.config.fixed_point_options();
    let init = grid.constant(1.0);
    let (path, failure) = match h.continuation(&schedule, &init, &opts) {
        Ok(path) => (path, None),
        Err(f) => {
            if f.partial.is_empty() {
                return Err(f.error);
            }
            let msg = f.to_string();
            (f.partial, Some(msg))
        }
    };
    let mut table = CsvTable::new(&[
        "t",
        "sup_norm",
        "min",
        "grad_sq",
        "residual_rel",
        "iterations",
    ]);
    for r in &path {
        let t = match r.provenance {
            crate::kirchhoff::Provenance::Homotopy { t } => t,
            _ => f64::NAN,
        };
        table.push(vec![
            fmt_f(t),
            fmt_f(r.sup_norm),
            fmt_f(r.min_value),
            fmt_f(r.grad_sq),
            fmt_f(r.residual_rel),
            r.iterations.to_string(),
        ]);
    }
    let ok = failure.is_none();
    let result = json!({ "schedule": schedule, "path": path, "failure": failure });
    let mut files = vec![
        write_report(
            &ctx.prefix,
            "continuation",
            ok,
            &ctx.resolved(pert, l1),
            &result,
        )?,
        write_csv(&ctx.prefix, ".csv", &table)?,
    ];
    if ctx.field {
        if let Some(end) = path.last() {
            files.push(write_csv(
                &ctx.prefix,
                ".field.csv",
                &field_table(&grid, end.u.values(), "u"),
            )?);
        }
    }
    let end = path.last().expect("non-empty path");
    Ok(Outcome {
        ok,
        files,
        summary: vec![match failure {
            None => format!(
                "{} steps, endpoint residual {:.2e}",
                path.len(),
                end.residual_rel
            ),
            Some(m) => m,
        }],
    })
}

fn sweep_regime(params: &KirchhoffParams, t0: Option<f64>) -> Result<SweepRegime> {
    let gamma = params.gamma();
    if params.p < 1.0 {
        Ok(SweepRegime::Sublinear)
    } else if gamma < 0.0 {
        Ok(SweepRegime::Superlinear)
    } else if gamma > 0.0 {
        Ok(SweepRegime::Intermediate {
            t0: t0.unwrap_or(1.0),
        })
    } else {
        Err(Error::Hypothesis(vec![format!(
            "sweeps need p < 1, 1 < p < 2*alpha + 1 or p > 2*alpha + 1; p = 2*alpha + 1 = {}",
            params.p
        )]))
    }
}

fn pert_with(
    base: PerturbationConfig,
    variable: &str,
    v: f64,
) -> Result<(PerturbationConfig, bool)> {
    match (variable, base) {
        ("mu", PerturbationConfig::Sublinear { q, q1, .. }) => {
            Ok((PerturbationConfig::Sublinear { mu: v, q, q1 }, false))
        }
        ("lambda", PerturbationConfig::Superlinear { q, .. }) => Ok((
            PerturbationConfig::Superlinear {
                lambda: Some(v),
                lambda_fraction: None,
                q,
            },
            false,
        )),
        ("lambda_fraction", PerturbationConfig::Superlinear { q, .. }) => Ok((
            PerturbationConfig::Superlinear {
                lambda: Some(v),
                lambda_fraction: None,
                q,
            },
            true,
        )),
        _ => Err(Error::Config(format!(
            "sweep variable `{variable}` does not match the configured perturbation"
        ))),
    }
}

#[derive(Serialize)]
struct SweepEntry {
    variable: Option<String>,
    value: Option<f64>,
    report: crate::kirchhoff::BoundsReport,
}

/// (outer value, params, domain resolution, spec, t0)
type SweepJob = (Option<f64>, KirchhoffParams, usize, SweepSpec, Option<f64>);

fn run_sweep(ctx: &Context) -> Result<Outcome> {
    let (_, pert, l1) = ctx.prepare()?;
    let config = &ctx.config;
    let opts = config.fixed_point_options();
    let sw = config.sweep.as_ref();
    let t_values = sw
        .and_then(|s| s.t_values.clone())
        .unwrap_or_else(|| vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    let (base_pert, base_fraction) = match config.perturbation {
        PerturbationConfig::Superlinear {
            lambda_fraction: Some(f),
            q,
            ..
        } => (PerturbationSpec::Superlinear { lambda: f, q }, true),
        _ => (pert, false),
    };
    let base_spec = SweepSpec {
        t_values: t_values.clone(),
        b_values: Vec::new(),
        perturbations: vec![base_pert],
        lambda_is_fraction: base_fraction,
    };

    let mut jobs: Vec<SweepJob> = Vec::new();
    let t0 = sw.and_then(|s| s.t0);
    let res = config.domain.resolution;
    match sw {
        None => jobs.push((None, config.params, res, base_spec, t0)),
        Some(s) => match s.variable.as_str() {
            "b" => jobs.push((
                None,
                config.params,
                res,
                SweepSpec {
                    b_values: s.values.clone(),
                    ..base_spec
                },
                t0,
            )),
            "t" if config.params.p < 1.0 || config.params.gamma() < 0.0 => jobs.push((
                None,
                config.params,
                res,
                SweepSpec {
                    t_values: s.values.clone(),
                    ..base_spec
                },
                t0,
            )),
            "t" => {
                for &v in &s.values {
                    jobs.push((Some(v), config.params, res, base_spec.clone(), Some(v)));
                }
            }
            "mu" | "lambda" | "lambda_fraction" => {
                let mut perts = Vec::new();
                let mut fraction = false;
                for &v in &s.values {
                    let (pc, frac) = pert_with(config.perturbation, &s.variable, v)?;
                    fraction = frac;
                    perts.push(match pc {
                        PerturbationConfig::Sublinear { mu, q, q1 } => {
                            PerturbationSpec::Sublinear { mu, q, q1 }
                        }
                        PerturbationConfig::Superlinear { lambda, q, .. } => {
                            PerturbationSpec::Superlinear {
                                lambda: lambda.unwrap_or(0.0),
                                q,
                            }
                        }
                        PerturbationConfig::None => PerturbationSpec::None,
                    });
                }
                jobs.push((
                    None,
                    config.params,
                    res,
                    SweepSpec {
                        perturbations: perts,
                        lambda_is_fraction: fraction,
                        ..base_spec
                    },
                    t0,
                ));
            }
            "a" | "alpha" | "p" | "resolution" => {
                for &v in &s.values {
                    let mut params = config.params;
                    let mut r = res;
                    match s.variable.as_str() {
                        "a" => params.a = v,
                        "alpha" => params.alpha = v,
                        "p" => params.p = v,
                        _ => {
                            if !(v >= 16.0 && v.fract() == 0.0) {
                                return Err(Error::Config(format!(
                                    "resolution sweep value {v} is not an integer >= 16"
                                )));
                            }
                            r = v as usize;
                        }
                    }
                    params.validate()?;
                    jobs.push((Some(v), params, r, base_spec.clone(), t0));
                }
            }
            other => return Err(Error::Config(format!("unknown sweep variable `{other}`"))),
        },
    }

    let mut entries = Vec::new();
    let mut table = CsvTable::new(&[
        "variable",
        "value",
        "b",
        "t",
        "perturbation",
        "mu_or_lambda",
        "converged",
        "sup_norm",
        "min",
        "residual_rel",
        "error",
    ]);
    let mut window: Option<Window> = None;
    let mut failures = 0;
    for (value, params, r, spec, t0) in jobs {
        let grid = Grid::new(config.domain.with_resolution(r))?;
        let regime = sweep_regime(&params, t0)?;
        let gs = match regime {
            SweepRegime::Intermediate { .. } => Some(ctx.ground_state(&grid, params.p)?),
            _ => None,
        };
        let rep = bound_sweep(&grid, &params, regime, &spec, gs.as_ref(), &opts)?;
        failures += rep.failures;
        if let Some(w) = rep.window {
            window = Some(match window {
                None => w,
                Some(o) => Window {
                    min: o.min.min(w.min),
                    max: o.max.max(w.max),
                },
            });
        }
        let var = sw.map(|s| s.variable.clone());
        for c in &rep.cells {
            let (kind, mag) = match c.perturbation {
                PerturbationSpec::None => ("none", None),
                PerturbationSpec::Sublinear { mu, .. } => ("sublinear", Some(mu)),
                PerturbationSpec::Superlinear { lambda, .. } => ("superlinear", Some(lambda)),
            };
            table.push(vec![
                var.clone().unwrap_or_default(),
                fmt_opt(value),
                fmt_f(c.b),
                fmt_f(c.t),
                kind.into(),
                fmt_opt(mag),
                c.converged.to_string(),
                fmt_opt(c.sup_norm),
                fmt_opt(c.min_value),
                fmt_opt(c.residual_rel),
                c.error.clone().unwrap_or_default(),
            ]);
        }
        entries.push(SweepEntry {
            variable: var,
            value,
            report: rep,
        });
    }
    let ok = failures == 0 && window.is_some_and(|w| w.min > 0.0);
    let result = json!({ "window": window, "failures": failures, "sweeps": entries });
    let files = vec![
        write_report(&ctx.prefix, "sweep", ok, &ctx.resolved(pert, l1), &result)?,
        write_csv(&ctx.prefix, ".csv", &table)?,
    ];
    Ok(Outcome {
        ok,
        files,
        summary: vec![match window {
            Some(w) => format!(
                "{} cells, {failures} failures, window [{:.6e}, {:.6e}]",
                table.len(),
                w.min,
                w.max
            ),
            None => format!("{} cells, none converged", table.len()),
        }],
    })
}

fn run_oracle(ctx: &Context) -> Result<Outcome> {
    let bad = ctx.config.static_violations();
    if !bad.is_empty() {
        return Err(Error::Hypothesis(bad));
    }
    let Shape::Disk { radius } = ctx.config.domain.shape else {
        return Err(Error::Config(
            "the shooting oracle needs a disk domain".into(),
        ));
    };
    let p = ctx.config.params.p;
    let steps = DEFAULT_STEPS.max(8 * ctx.config.domain.resolution);
    let prof = shooting_oracle_with_steps(p, radius, ctx.config.tolerances.groundstate, steps)?;
    let mut table = CsvTable::new(&["r", "v"]);
    for (r, v) in prof.r.iter().zip(&prof.v) {
        table.push(vec![fmt_f(*r), fmt_f(*v)]);
    }
    let result = json!({
        "p": prof.p, "radius": prof.radius, "steps": steps, "center": prof.center,
        "grad_sq": prof.grad_sq, "mass": prof.mass, "s_omega": prof.s_omega, "s": prof.s,
        "boundary_residual": prof.boundary_residual,
    });
    let files = vec![
        write_report(
            &ctx.prefix,
            "oracle",
            true,
            &ctx.resolved(PerturbationSpec::None, None),
            &result,
        )?,
        write_csv(&ctx.prefix, ".csv", &table)?,
    ];
    Ok(Outcome {
        ok: true,
        files,
        summary: vec![format!(
            "S(Omega) = {:.12}, v(0) = {:.12}",
            prof.s_omega, prof.center
        )],
    })
}

fn run_verify(common: &Common) -> Result<Outcome> {
    let prefix = match (&common.out, &common.config) {
        (Some(o), _) => o.clone(),
        (None, Some(path)) => ExperimentConfig::load(path)?.output,
        (None, None) => "verify".to_string(),
    };
    let outcomes = verify::run_all();
    let ok = outcomes.iter().all(|o| o.passed);
    let mut table = CsvTable::new(&["id", "name", "passed", "detail"]);
    let mut summary = Vec::new();
    for o in &outcomes {
        table.push(vec![
            o.id.to_string(),
            o.name.into(),
            o.passed.to_string(),
            o.detail.clone(),
        ]);
        summary.push(o.line());
    }
    let passed = outcomes.iter().filter(|o| o.passed).count();
    summary.push(format!(
        "{passed}/{} acceptance checks passed",
        outcomes.len()
    ));
    let result: Value = json!({ "passed": passed, "total": outcomes.len(), "checks": outcomes });
    let files = vec![
        write_report(
            &prefix,
            "verify",
            ok,
            &json!({ "seed": verify::SEED, "samples_per_case": verify::SAMPLES_PER_CASE }),
            &result,
        )?,
        write_csv(&prefix, ".csv", &table)?,
    ];
    Ok(Outcome { ok, files, summary })
}
