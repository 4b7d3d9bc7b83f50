//! Parameter sweeps over converged solutions: a-priori bound windows and the
//! small-`b` blow-up of the upper branch.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::homotopy::{FixedPointOptions, Homotopy, MAX_SCHEDULE_STEP};
use super::perturbation::PerturbationSpec;
use super::solution::{reconstruct, semilinear_solution, Provenance};
use crate::branch::{
    find_roots, least_squares_slope, KirchhoffParams, RegimeCase, DEFAULT_ROOT_TOL,
};
use crate::error::{Error, Result};
use crate::grid::{Field, Grid};
use crate::groundstate::GroundState;

/// Relative change allowed in each window endpoint under grid refinement.
pub const REFINEMENT_TOL: f64 = 0.10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "regime", rename_all = "snake_case")]
pub enum SweepRegime {
    /// `0 < p < 1`, continuation over the whole schedule.
    Sublinear,
    /// `p > 2α + 1`, continuation over the whole schedule.
    Superlinear,
    /// `1 < p < 2α + 1` at a fixed homotopy parameter `t0 > 0`; cells start
    /// from the upper-branch reconstruction.
    Intermediate { t0: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    /// Homotopy parameters at which sup-norms are recorded.
    pub t_values: Vec<f64>,
    /// Values of `b`; empty means the value in the base parameters.
    #[serde(default)]
    pub b_values: Vec<f64>,
    pub perturbations: Vec<PerturbationSpec>,
    /// Read superlinear `lambda` as a fraction of `a·λ₁(Ω)`.
    #[serde(default)]
    pub lambda_is_fraction: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepCell {
    pub key: usize,
    pub b: f64,
    pub t: f64,
    pub perturbation: PerturbationSpec,
    pub converged: bool,
    pub sup_norm: Option<f64>,
    pub min_value: Option<f64>,
    pub residual_rel: Option<f64>,
    pub error: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Window {
    pub min: f64,
    pub max: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundsReport {
    pub regime: SweepRegime,
    pub params: KirchhoffParams,
    pub nodes: usize,
    pub lambda1: Option<f64>,
    /// `1 - λ/(a·λ₁)` for each superlinear perturbation.
    pub lambda_margins: Vec<f64>,
    pub cells: Vec<SweepCell>,
    pub window: Option<Window>,
    pub failures: usize,
    /// Largest sup-norm per `b`, in sweep order (intermediate regime).
    pub max_sup_by_b: Vec<(f64, f64)>,
}

impl BoundsReport {
    /// Every cell converged and the window is bounded away from zero.
    pub fn bounded(&self) -> bool {
        self.failures == 0
            && self
                .window
                .is_some_and(|w| w.min > 0.0 && w.max.is_finite())
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct WindowComparison {
    pub coarse: Window,
    pub fine: Window,
    pub min_change: f64,
    pub max_change: f64,
    pub stable: bool,
}

/// Relative endpoint changes between two resolutions.
pub fn compare_windows(coarse: Window, fine: Window) -> WindowComparison {
    let min_change = (fine.min - coarse.min).abs() / coarse.min.abs();
    let max_change = (fine.max - coarse.max).abs() / coarse.max.abs();
    WindowComparison {
        coarse,
        fine,
        min_change,
        max_change,
        stable: min_change < REFINEMENT_TOL && max_change < REFINEMENT_TOL,
    }
}

fn resolve_lambda(
    pert: PerturbationSpec,
    spec: &SweepSpec,
    a_lambda1: Option<f64>,
) -> PerturbationSpec {
    match (pert, spec.lambda_is_fraction, a_lambda1) {
        (PerturbationSpec::Superlinear { lambda, q }, true, Some(al)) => {
            PerturbationSpec::Superlinear {
                lambda: lambda * al,
                q,
            }
        }
        _ => pert,
    }
}

/// Schedule from 0 to 1 containing every requested `t`, with steps of at
/// most the continuation limit.
fn merged_schedule(t_values: &[f64]) -> Vec<f64> {
    let mut knots: Vec<f64> = t_values.to_vec();
    knots.push(0.0);
    knots.push(1.0);
    knots.sort_by(f64::total_cmp);
    knots.dedup();
    let mut out = vec![0.0];
    for w in knots.windows(2) {
        let n = ((w[1] - w[0]) / MAX_SCHEDULE_STEP - 1e-9).ceil().max(1.0) as usize;
        for i in 1..=n {
            out.push(if i == n {
                w[1]
            } else {
                w[0] + (w[1] - w[0]) * i as f64 / n as f64
            });
        }
    }
    out
}

fn check_regime(params: &KirchhoffParams, regime: SweepRegime, spec: &SweepSpec) -> Result<()> {
    let p = params.p;
    let mut bad = Vec::new();
    match regime {
        SweepRegime::Sublinear if !(p > 0.0 && p < 1.0) => {
            bad.push(format!("sublinear sweep requires 0 < p < 1, got p = {p}"))
        }
        SweepRegime::Superlinear if !(params.gamma() < 0.0) => bad.push(format!(
            "superlinear sweep requires p > 2*alpha + 1, got p = {p}, alpha = {}",
            params.alpha
        )),
        SweepRegime::Intermediate { t0 } => {
            if !(p > 1.0 && params.gamma() > 0.0) {
                bad.push(format!(
                    "intermediate sweep requires 1 < p < 2*alpha + 1, got p = {p}, alpha = {}",
                    params.alpha
                ));
            }
            if !(t0 > 0.0 && t0 <= 1.0) {
                bad.push(format!("intermediate sweep requires 0 < t0 <= 1, got {t0}"));
            }
        }
        _ => {}
    }
    if !matches!(regime, SweepRegime::Intermediate { .. }) {
        for &t in &spec.t_values {
            if !(0.0..=1.0).contains(&t) {
                bad.push(format!("sweep t value {t} outside [0, 1]"));
            }
        }
    }
    if spec.perturbations.is_empty() {
        bad.push("sweep needs at least one perturbation".into());
    }
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Error::Hypothesis(bad))
    }
}

/// Runs every sweep cell and collects the sup-norm window.
///
/// Cells run in parallel on the current rayon pool; each solve is serial,
/// and cells are reported in key order.
pub fn bound_sweep(
    grid: &Grid,
    params: &KirchhoffParams,
    regime: SweepRegime,
    spec: &SweepSpec,
    gs: Option<&GroundState>,
    opts: &FixedPointOptions,
) -> Result<BoundsReport> {
    params.validate()?;
    check_regime(params, regime, spec)?;
    let needs_l1 = spec.perturbations.iter().any(|p| p.needs_eigenvalue());
    let lambda1 = if needs_l1 {
        Some(grid.smallest_eigenvalue(1e-8)?.lambda)
    } else {
        None
    };
    let a_l1 = lambda1.map(|l| params.a * l);
    let perts: Vec<PerturbationSpec> = spec
        .perturbations
        .iter()
        .map(|&p| resolve_lambda(p, spec, a_l1))
        .collect();
    let lambda_margins = perts
        .iter()
        .filter(|p| p.needs_eigenvalue())
        .filter_map(|p| a_l1.map(|al| 1.0 - p.lambda() / al))
        .collect();
    let b_values = if spec.b_values.is_empty() {
        vec![params.b]
    } else {
        spec.b_values.clone()
    };
    // validate every perturbation up front so the cells only see solver errors
    let mut violations = Vec::new();
    for pert in &perts {
        violations.extend(pert.violations(params.p, a_l1));
    }
    if !violations.is_empty() {
        return Err(Error::Hypothesis(violations));
    }

    let jobs: Vec<(f64, PerturbationSpec)> = b_values
        .iter()
        .flat_map(|&b| perts.iter().map(move |&p| (b, p)))
        .collect();
    let init = grid.solve_poisson(&grid.constant(1.0), opts.cg_tol)?;
    let per_job: Vec<Result<Vec<SweepCell>>> = jobs
        .par_iter()
        .map(|&(b, pert)| {
            let pb = params.with_b(b);
            let h = Homotopy::with_eigenvalue(grid, pb, pert, lambda1)?;
            match regime {
                SweepRegime::Intermediate { t0 } => {
                    let gs = gs.ok_or_else(|| {
                        Error::Config("intermediate sweep needs a ground state".into())
                    })?;
                    Ok(vec![intermediate_cell(grid, gs, &h, pb, pert, t0, opts)])
                }
                _ => Ok(continuation_cells(&h, b, pert, &spec.t_values, &init, opts)),
            }
        })
        .collect();
    let mut cells = Vec::new();
    for job in per_job {
        cells.extend(job?);
    }
    for (k, c) in cells.iter_mut().enumerate() {
        c.key = k;
    }
    let sups: Vec<f64> = cells.iter().filter_map(|c| c.sup_norm).collect();
    let window = (!sups.is_empty()).then(|| Window {
        min: sups.iter().copied().fold(f64::INFINITY, f64::min),
        max: sups.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    });
    let failures = cells.iter().filter(|c| !c.converged).count();
    let max_sup_by_b = b_values
        .iter()
        .map(|&b| {
            let m = cells
                .iter()
                .filter(|c| c.b == b)
                .filter_map(|c| c.sup_norm)
                .fold(f64::NAN, f64::max);
            (b, m)
        })
        .collect();
    Ok(BoundsReport {
        regime,
        params: *params,
        nodes: grid.len(),
        lambda1,
        lambda_margins,
        cells,
        window,
        failures,
        max_sup_by_b,
    })
}

fn continuation_cells(
    h: &Homotopy<'_>,
    b: f64,
    pert: PerturbationSpec,
    t_values: &[f64],
    init: &Field,
    opts: &FixedPointOptions,
) -> Vec<SweepCell> {
    let schedule = merged_schedule(t_values);
    let (path, error) = match h.continuation(&schedule, init, opts) {
        Ok(path) => (path, None),
        Err(fail) => (fail.partial, Some(fail.error.to_string())),
    };
    t_values
        .iter()
        .map(|&t| {
            let hit = path
                .iter()
                .find(|r| matches!(r.provenance, Provenance::Homotopy { t: rt } if rt == t));
            SweepCell {
                key: 0,
                b,
                t,
                perturbation: pert,
                converged: hit.is_some(),
                sup_norm: hit.map(|r| r.sup_norm),
                min_value: hit.map(|r| r.min_value),
                residual_rel: hit.map(|r| r.residual_rel),
                error: if hit.is_some() { None } else { error.clone() },
            }
        })
        .collect()
}

fn intermediate_cell(
    grid: &Grid,
    gs: &GroundState,
    h: &Homotopy<'_>,
    params: KirchhoffParams,
    pert: PerturbationSpec,
    t0: f64,
    opts: &FixedPointOptions,
) -> SweepCell {
    let mut cell = SweepCell {
        key: 0,
        b: params.b,
        t: t0,
        perturbation: pert,
        converged: false,
        sup_norm: None,
        min_value: None,
        residual_rel: None,
        error: None,
    };
    // at parameter t0 without perturbation the problem is the b -> t0·b one
    let effective = params.with_b(t0 * params.b);
    let result = find_roots(&effective, gs.s, DEFAULT_ROOT_TOL).and_then(|rep| {
        let beta = *rep
            .roots
            .last()
            .ok_or_else(|| Error::Domain(format!("no branch root at b = {}", params.b)))?;
        let start = reconstruct(grid, gs, beta, &effective, rep.roots.len() - 1)?;
        h.step(t0, &start.u, opts)
    });
    match result {
        Ok(rec) => {
            cell.converged = true;
            cell.sup_norm = Some(rec.sup_norm);
            cell.min_value = Some(rec.min_value);
            cell.residual_rel = Some(rec.residual_rel);
        }
        Err(e) => cell.error = Some(e.to_string()),
    }
    cell
}

#[derive(Clone, Debug, Serialize)]
pub struct BlowupRow {
    pub b: f64,
    pub case: RegimeCase,
    pub y1: Option<f64>,
    pub y2: Option<f64>,
    pub lower_sup: Option<f64>,
    pub upper_sup: Option<f64>,
    /// `sup|u_lower - a^{1/(p-1)} v|`.
    pub lower_error: Option<f64>,
    pub lower_residual: Option<f64>,
    pub upper_residual: Option<f64>,
    pub flagged: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BlowupTable {
    pub params: KirchhoffParams,
    pub s: f64,
    pub rows: Vec<BlowupRow>,
    /// Sup-norm of the `b = 0` solution `a^{1/(p-1)} v`.
    pub reference_sup: f64,
    pub lower_error_monotone: bool,
    pub upper_increasing: bool,
    /// Least-squares slope of `ln sup u_upper` against `ln b`.
    pub upper_slope: Option<f64>,
    /// `-1/γ`.
    pub upper_slope_target: f64,
}

/// Reconstructs both branches along a decreasing `b` sequence.
pub fn blowup_probe(
    grid: &Grid,
    gs: &GroundState,
    params: &KirchhoffParams,
    b_sequence: &[f64],
) -> Result<BlowupTable> {
    params.validate()?;
    let gamma = params.gamma();
    if !(params.p > 1.0 && gamma > 0.0) {
        return Err(Error::Hypothesis(vec![format!(
            "blow-up probe requires 1 < p < 2*alpha + 1, got p = {}, alpha = {}",
            params.p, params.alpha
        )]));
    }
    if b_sequence.windows(2).any(|w| !(w[1] < w[0])) || b_sequence.iter().any(|&b| !(b > 0.0)) {
        return Err(Error::Config(
            "b sequence must be positive and strictly decreasing".into(),
        ));
    }
    let reference = semilinear_solution(gs, params.a);
    let rows: Vec<BlowupRow> = b_sequence
        .par_iter()
        .map(|&b| {
            let pb = params.with_b(b);
            let rep = find_roots(&pb, gs.s, DEFAULT_ROOT_TOL)?;
            let flagged = rep.case != RegimeCase::TwoBranch || rep.roots.len() != 2;
            let mut row = BlowupRow {
                b,
                case: rep.case,
                y1: rep.roots.first().copied(),
                y2: (rep.roots.len() == 2).then(|| rep.roots[1]),
                lower_sup: None,
                upper_sup: None,
                lower_error: None,
                lower_residual: None,
                upper_residual: None,
                flagged,
            };
            if flagged {
                return Ok(row);
            }
            let lower = reconstruct(grid, gs, rep.roots[0], &pb, 0)?;
            let upper = reconstruct(grid, gs, rep.roots[1], &pb, 1)?;
            row.lower_sup = Some(lower.sup_norm);
            row.upper_sup = Some(upper.sup_norm);
            row.lower_error = Some(lower.u.sup_distance(&reference));
            row.lower_residual = Some(lower.residual_rel);
            row.upper_residual = Some(upper.residual_rel);
            Ok(row)
        })
        .collect::<Result<_>>()?;
    let errs: Vec<f64> = rows.iter().filter_map(|r| r.lower_error).collect();
    let sups: Vec<f64> = rows.iter().filter_map(|r| r.upper_sup).collect();
    let complete = rows.iter().all(|r| !r.flagged);
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter_map(|r| r.upper_sup.map(|s| (r.b.ln(), s.ln())))
        .collect();
    Ok(BlowupTable {
        params: *params,
        s: gs.s,
        reference_sup: reference.sup(),
        lower_error_monotone: complete && errs.windows(2).all(|w| w[1] < w[0]),
        upper_increasing: complete && sups.windows(2).all(|w| w[1] > w[0]),
        upper_slope: least_squares_slope(&pts),
        upper_slope_target: -1.0 / gamma,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedule_merging() {
        let s = merged_schedule(&[0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(s.first(), Some(&0.0));
        assert_eq!(s.last(), Some(&1.0));
        assert!(s.contains(&0.25) && s.contains(&0.75));
        assert!(s
            .windows(2)
            .all(|w| w[1] > w[0] && w[1] - w[0] <= MAX_SCHEDULE_STEP + 1e-12));
    }

    #[test]
    fn window_comparison() {
        let c = compare_windows(
            Window { min: 1.0, max: 2.0 },
            Window {
                min: 1.05,
                max: 2.1,
            },
        );
        assert!(c.stable);
        let c = compare_windows(Window { min: 1.0, max: 2.0 }, Window { min: 1.2, max: 2.0 });
        assert!(!c.stable);
    }
}
