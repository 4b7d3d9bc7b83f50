//! Fixed points of `K_t(u) = (-Δ)^{-1} L_t(u)` with
//! `L_t(u) = (u^p + t h(x, u, ∇u)) / (a + t b ‖∇u‖^{2α})`, and continuation
//! of those fixed points from `t = 0` to `t = 1`.
//!
//! For `p > 1` the map `K_t` expands along the solution itself (the scaling
//! direction has multiplier close to `p`), so plain damped iteration cannot
//! converge there. Every iterate is therefore first rescaled by the factor
//! `s` closest to 1 that solves the scalar equation obtained by testing the
//! PDE against `u` along the ray `s·u`; the remaining directions contract.

use serde::Serialize;
use thiserror::Error as ThisError;

use super::perturbation::PerturbationSpec;
use super::solution::{
    kirchhoff_coefficient, kirchhoff_residual, perturbation_field, Provenance, SolutionRecord,
};
use crate::branch::KirchhoffParams;
use crate::error::{Error, Result};
use crate::grid::{Field, Grid};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FixedPointOptions {
    /// Stop when `sup|u_{k+1} - u_k| <= tol · sup u_k`.
    pub tol: f64,
    pub max_iter: usize,
    pub cg_tol: f64,
    pub theta_floor: f64,
    /// `sup u < collapse_floor · sup u_0` declares collapse to zero.
    pub collapse_floor: f64,
}

impl Default for FixedPointOptions {
    fn default() -> Self {
        FixedPointOptions {
            tol: 1e-11,
            max_iter: 1000,
            cg_tol: 1e-12,
            theta_floor: 1.0 / 64.0,
            collapse_floor: 1e-10,
        }
    }
}

/// A validated homotopy problem on a fixed grid.
#[derive(Clone, Debug)]
pub struct Homotopy<'g> {
    grid: &'g Grid,
    params: KirchhoffParams,
    pert: PerturbationSpec,
    lambda1: Option<f64>,
}

impl<'g> Homotopy<'g> {
    /// Validates the perturbation against `p`; the superlinear form also
    /// requires `λ < a·λ₁(Ω)`, with `λ₁` computed on `grid`.
    pub fn new(grid: &'g Grid, params: KirchhoffParams, pert: PerturbationSpec) -> Result<Self> {
        params.validate()?;
        let lambda1 = if pert.needs_eigenvalue() {
            Some(grid.smallest_eigenvalue(1e-8)?.lambda)
        } else {
            None
        };
        Self::with_eigenvalue(grid, params, pert, lambda1)
    }

    pub fn with_eigenvalue(
        grid: &'g Grid,
        params: KirchhoffParams,
        pert: PerturbationSpec,
        lambda1: Option<f64>,
    ) -> Result<Self> {
        params.validate()?;
        let violations = pert.violations(params.p, lambda1.map(|l| params.a * l));
        if !violations.is_empty() {
            return Err(Error::Hypothesis(violations));
        }
        Ok(Homotopy {
            grid,
            params,
            pert,
            lambda1,
        })
    }

    pub fn lambda1(&self) -> Option<f64> {
        self.lambda1
    }

    pub fn params(&self) -> &KirchhoffParams {
        &self.params
    }

    /// `L_t(u)`.
    pub fn nonlinearity(&self, u: &Field, t: f64) -> Field {
        let coef = kirchhoff_coefficient(&self.params, self.grid.grad_sq(u), t);
        let h = perturbation_field(self.grid, u, &self.pert, t);
        let p = self.params.p;
        let mut out = u.signed_pow(p);
        for (o, h) in out.values_mut().iter_mut().zip(&h) {
            *o = (*o + h) / coef;
        }
        out
    }

    /// `K_t(u)`, optionally warm-starting the Poisson solve.
    pub fn apply(&self, u: &Field, t: f64, guess: Option<&Field>, cg_tol: f64) -> Result<Field> {
        let rhs = self.nonlinearity(u, t);
        Ok(self.grid.solve_poisson_from(&rhs, guess, cg_tol)?.field)
    }

    /// Scalar equation along the ray `s·u`, divided by `s`:
    /// `A(t, su) ‖∇u‖² - s^{p-1} Σ w u^{p+1} - t Σ w h(su) u / s`.
    fn ray_equation(&self, u: &Field, gsq_u: &[f64], grad_sq: f64, t: f64, s: f64) -> f64 {
        let p = self.params.p;
        let coef = kirchhoff_coefficient(&self.params, s * s * grad_sq, t);
        let w = self.grid.weights();
        let mut power = 0.0;
        let mut pert = 0.0;
        for ((&wi, &ui), &gi) in w.iter().zip(u.values()).zip(gsq_u) {
            power += wi * ui.abs().powf(p + 1.0);
            if t != 0.0 && !self.pert.is_none() {
                pert += wi * self.pert.eval(s * ui, s * s * gi) * ui;
            }
        }
        coef * grad_sq - s.powf(p - 1.0) * power - t * pert / s
    }

    /// Root of the ray equation closest to `s = 1` (in `|ln s|`), if any.
    fn amplitude(&self, u: &Field, t: f64) -> Option<f64> {
        let grad_sq = self.grid.grad_sq(u);
        let gsq_u = self.grid.gradient_sq_pointwise(u);
        let g = |s: f64| self.ray_equation(u, &gsq_u, grad_sq, t, s);
        let g1 = g(1.0);
        if g1 == 0.0 {
            return Some(1.0);
        }
        let step = 2f64.powf(0.125);
        let (mut up_prev, mut dn_prev) = (1.0, 1.0);
        let (mut g_up, mut g_dn) = (g1, g1);
        for _ in 0..480 {
            let up = up_prev * step;
            let gu = g(up);
            if gu.signum() != g_up.signum() {
                return Some(bisect_ray(&g, up_prev, up, g_up));
            }
            let dn = dn_prev / step;
            let gd = g(dn);
            if gd.signum() != g_dn.signum() {
                return Some(bisect_ray(&g, dn, dn_prev, gd));
            }
            (up_prev, g_up, dn_prev, g_dn) = (up, gu, dn, gd);
        }
        None
    }

    /// Damped fixed-point iteration for `K_t` from a positive `init`.
    pub fn step(&self, t: f64, init: &Field, opts: &FixedPointOptions) -> Result<SolutionRecord> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::Domain(format!(
                "homotopy parameter t = {t} outside [0, 1]"
            )));
        }
        self.grid.check(init)?;
        if !(init.min() > 0.0) {
            return Err(Error::NonPositive("homotopy initial iterate"));
        }
        let superlinear = self.params.p > 1.0;
        let sup0 = init.sup();
        let mut u = init.clone();
        let mut theta: f64 = 1.0;
        let mut prev_update = f64::INFINITY;
        let mut guess: Option<Field> = None;
        let mut update = f64::INFINITY;
        for it in 1..=opts.max_iter {
            let base = if superlinear {
                match self.amplitude(&u, t) {
                    Some(s) => u.scaled(s),
                    None => u.clone(),
                }
            } else {
                u.clone()
            };
            let ku = self.apply(&base, t, guess.as_ref(), opts.cg_tol)?;
            let next = base.zip_with(&ku, |b, k| (1.0 - theta) * b + theta * k);
            guess = Some(ku);
            update = next.sup_distance(&u);
            if update > prev_update {
                theta = (0.5 * theta).max(opts.theta_floor);
            }
            prev_update = update;
            u = next;
            let sup = u.sup();
            if !sup.is_finite() || sup > 1e12 * sup0 {
                return Err(Error::Divergence {
                    iterations: it,
                    sup,
                });
            }
            if sup < opts.collapse_floor * sup0 {
                return Err(Error::Collapse {
                    iterations: it,
                    sup,
                });
            }
            if !(u.min() > 0.0) {
                return Err(Error::NonPositive("homotopy iterate"));
            }
            if update <= opts.tol * sup {
                let residual_rel = kirchhoff_residual(self.grid, &u, &self.params, &self.pert, t)?;
                return Ok(SolutionRecord {
                    beta: None,
                    grad_sq: self.grid.grad_sq(&u),
                    sup_norm: sup,
                    min_value: u.min(),
                    residual_rel,
                    provenance: Provenance::Homotopy { t },
                    params: self.params,
                    perturbation: self.pert,
                    iterations: it,
                    u,
                });
            }
        }
        Err(Error::Convergence {
            what: "homotopy fixed-point iteration",
            iterations: opts.max_iter,
            residual: update / u.sup(),
        })
    }

    /// Follows fixed points along an increasing schedule from 0 to 1,
    /// warm-starting each step. A failed step is retried on halved
    /// sub-steps up to [`MAX_BISECTIONS`] times.
    pub fn continuation(
        &self,
        schedule: &[f64],
        init: &Field,
        opts: &FixedPointOptions,
    ) -> std::result::Result<Vec<SolutionRecord>, ContinuationFailure> {
        let fail = |t: f64, error: Error, partial: Vec<SolutionRecord>| ContinuationFailure {
            t,
            error,
            partial,
        };
        if let Err(e) = validate_schedule(schedule) {
            return Err(fail(0.0, e, Vec::new()));
        }
        let p = self.params.p;
        let gamma = self.params.gamma();
        if !((p > 0.0 && p < 1.0) || gamma < 0.0) {
            return Err(fail(
                0.0,
                Error::Hypothesis(vec![format!(
                    "continuation requires 0 < p < 1 or p > 2*alpha + 1, got p = {p}, alpha = {}",
                    self.params.alpha
                )]),
                Vec::new(),
            ));
        }
        let mut path: Vec<SolutionRecord> = Vec::with_capacity(schedule.len());
        let first = match self.step(schedule[0], init, opts) {
            Ok(r) => r,
            Err(e) => return Err(fail(schedule[0], e, path)),
        };
        path.push(first);
        for &target in &schedule[1..] {
            let mut t_done = match path.last().expect("non-empty").provenance {
                Provenance::Homotopy { t } => t,
                Provenance::Reconstructed { .. } => unreachable!(),
            };
            let mut halvings = 0;
            while t_done < target {
                let trial = if halvings == 0 {
                    target
                } else {
                    t_done + (target - t_done) / 2f64.powi(halvings)
                };
                let start = &path.last().expect("non-empty").u;
                match self.step(trial, start, opts) {
                    Ok(rec) => {
                        path.push(rec);
                        t_done = trial;
                        halvings = halvings.saturating_sub(1);
                    }
                    Err(e) => {
                        halvings += 1;
                        if halvings > MAX_BISECTIONS {
                            return Err(fail(trial, e, path));
                        }
                    }
                }
            }
        }
        Ok(path)
    }
}

pub const MAX_BISECTIONS: i32 = 6;
pub const MAX_SCHEDULE_STEP: f64 = 0.1;

fn bisect_ray(g: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, glo: f64) -> f64 {
    let lo_sign = glo.signum();
    for _ in 0..200 {
        let mid = (lo * hi).sqrt();
        if mid == lo || mid == hi {
            break;
        }
        if g(mid).signum() == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo * hi).sqrt()
}

pub fn validate_schedule(schedule: &[f64]) -> Result<()> {
    let bad = |m: String| Err(Error::Config(m));
    if schedule.len() < 2 {
        return bad("t schedule needs at least two points".into());
    }
    if schedule[0] != 0.0 || *schedule.last().expect("len >= 2") != 1.0 {
        return bad("t schedule must start at 0 and end at 1".into());
    }
    for w in schedule.windows(2) {
        if !(w[1] > w[0]) {
            return bad(format!(
                "t schedule must be strictly increasing ({} then {})",
                w[0], w[1]
            ));
        }
        if w[1] - w[0] > MAX_SCHEDULE_STEP + 1e-12 {
            return bad(format!(
                "t schedule step {} exceeds {MAX_SCHEDULE_STEP}",
                w[1] - w[0]
            ));
        }
    }
    Ok(())
}

/// `n + 1` equally spaced values from 0 to 1.
pub fn uniform_schedule(n: usize) -> Vec<f64> {
    (0..=n).map(|i| i as f64 / n as f64).collect()
}

#[derive(Debug, ThisError)]
#[error("continuation aborted at t = {t} after {} converged steps: {error}", partial.len())]
pub struct ContinuationFailure {
    pub t: f64,
    pub error: Error,
    pub partial: Vec<SolutionRecord>,
}

/// One damped fixed-point solve of the homotopy problem at parameter `t`.
pub fn homotopy_step(
    grid: &Grid,
    params: &KirchhoffParams,
    pert: &PerturbationSpec,
    t: f64,
    init: &Field,
    opts: &FixedPointOptions,
) -> Result<SolutionRecord> {
    Homotopy::new(grid, *params, *pert)?.step(t, init, opts)
}

/// Continuation of fixed points from `t = 0` to `t = 1`.
pub fn continuation(
    grid: &Grid,
    params: &KirchhoffParams,
    pert: &PerturbationSpec,
    schedule: &[f64],
    init: &Field,
    opts: &FixedPointOptions,
) -> std::result::Result<Vec<SolutionRecord>, ContinuationFailure> {
    let h = Homotopy::new(grid, *params, *pert).map_err(|error| ContinuationFailure {
        t: 0.0,
        error,
        partial: Vec::new(),
    })?;
    h.continuation(schedule, init, opts)
}
