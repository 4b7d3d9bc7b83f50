use std::io::Write;

use serde::Serialize;

use super::perturbation::PerturbationSpec;
use crate::branch::KirchhoffParams;
use crate::error::{Error, Result};
use crate::grid::{Field, Grid};
use crate::groundstate::GroundState;

/// Relative tolerance on `|‖∇u‖² - β| / β` for reconstructed solutions.
pub const IDENTITY_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    /// Built from the ground state and the `root_index`-th branch root.
    Reconstructed { root_index: usize },
    /// Fixed point of the homotopy map at parameter `t`.
    Homotopy { t: f64 },
}

#[derive(Clone, Debug, Serialize)]
pub struct SolutionRecord {
    #[serde(skip)]
    pub u: Field,
    /// Target `‖∇u‖²`; only defined for reconstructed solutions.
    pub beta: Option<f64>,
    pub grad_sq: f64,
    pub sup_norm: f64,
    pub min_value: f64,
    pub residual_rel: f64,
    pub provenance: Provenance,
    pub params: KirchhoffParams,
    pub perturbation: PerturbationSpec,
    pub iterations: usize,
}

impl SolutionRecord {
    /// Writes the field as `x,y,u` rows (radial grids: `r,0,u`).
    pub fn write_field_csv(&self, grid: &Grid, mut out: impl Write) -> std::io::Result<()> {
        writeln!(out, "x,y,u")?;
        for (k, u) in self.u.values().iter().enumerate() {
            let (x, y) = grid.coords(k);
            writeln!(out, "{x:.16e},{y:.16e},{u:.16e}")?;
        }
        Ok(())
    }
}

/// `A(t, u) = a + t b ‖∇u‖^{2α}`.
pub fn kirchhoff_coefficient(params: &KirchhoffParams, grad_sq: f64, t: f64) -> f64 {
    if params.b == 0.0 || t == 0.0 {
        params.a
    } else {
        params.a + t * params.b * grad_sq.powf(params.alpha)
    }
}

/// `t·h(x, u, ∇_h u)` at every node.
pub fn perturbation_field(grid: &Grid, u: &Field, pert: &PerturbationSpec, t: f64) -> Vec<f64> {
    if pert.is_none() || t == 0.0 {
        return vec![0.0; u.len()];
    }
    let gsq = grid.gradient_sq_pointwise(u);
    u.values()
        .iter()
        .zip(&gsq)
        .map(|(&s, &g)| t * pert.eval(s, g))
        .collect()
}

/// `‖A(t,u)(-Δ_h u) - u^p - t h‖₂ / ‖u^p‖₂`; `+∞` for the zero field.
pub fn kirchhoff_residual(
    grid: &Grid,
    u: &Field,
    params: &KirchhoffParams,
    pert: &PerturbationSpec,
    t: f64,
) -> Result<f64> {
    grid.check(u)?;
    let up = u.signed_pow(params.p);
    let denom = grid.l2_norm(&up);
    if denom == 0.0 {
        return Ok(f64::INFINITY);
    }
    let coef = kirchhoff_coefficient(params, grid.grad_sq(u), t);
    let lu = grid.apply_laplacian(u)?;
    let h = perturbation_field(grid, u, pert, t);
    let r: Vec<f64> = lu
        .values()
        .iter()
        .zip(up.values())
        .zip(&h)
        .map(|((l, f), h)| coef * l - f - h)
        .collect();
    Ok(grid.dot(&r, &r).sqrt() / denom)
}

/// `u = (a + bβ^α)^{1/(p-1)} v` for a root `β` of the branch equation with `S = gs.s`.
pub fn reconstruct(
    grid: &Grid,
    gs: &GroundState,
    beta: f64,
    params: &KirchhoffParams,
    root_index: usize,
) -> Result<SolutionRecord> {
    params.validate()?;
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::Domain(format!(
            "beta must be positive and finite, got {beta}"
        )));
    }
    if (gs.p - params.p).abs() > 1e-12 * params.p {
        return Err(Error::Domain(format!(
            "ground state exponent {} differs from p = {}",
            gs.p, params.p
        )));
    }
    let scale = (params.a + params.b * beta.powf(params.alpha)).powf(1.0 / (params.p - 1.0));
    let u = gs.v.scaled(scale);
    let grad_sq = grid.grad_sq(&u);
    if (grad_sq - beta).abs() > IDENTITY_TOL * beta {
        return Err(Error::IdentityViolation { grad_sq, beta });
    }
    let residual_rel = kirchhoff_residual(grid, &u, params, &PerturbationSpec::None, 1.0)?;
    Ok(SolutionRecord {
        beta: Some(beta),
        grad_sq,
        sup_norm: u.sup(),
        min_value: u.min(),
        residual_rel,
        provenance: Provenance::Reconstructed { root_index },
        params: *params,
        perturbation: PerturbationSpec::None,
        iterations: 0,
        u,
    })
}

/// Inverse of [`reconstruct`]: `v = η u` with `η = (a + b‖∇u‖^{2α})^{1/(1-p)}`.
pub fn recover_ground_state(grid: &Grid, u: &Field, params: &KirchhoffParams) -> Result<Field> {
    grid.check(u)?;
    let coef = kirchhoff_coefficient(params, grid.grad_sq(u), 1.0);
    Ok(u.scaled(coef.powf(1.0 / (1.0 - params.p))))
}

/// Solution `a^{1/(p-1)} v` of the `b = 0` problem `-aΔu = u^p`.
pub fn semilinear_solution(gs: &GroundState, a: f64) -> Field {
    gs.v.scaled(a.powf(1.0 / (gs.p - 1.0)))
}
