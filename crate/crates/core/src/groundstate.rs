//! Positive solutions of `-Δv = v^p` with zero Dirichlet data.
//!
//! For `0 < p < 1` the solution is unique and is reached by monotone
//! iteration from a supersolution. For `p > 1` the ground state is obtained
//! by minimizing the quotient `||∇u||_2^2 / ||u||_{p+1}^2` and rescaling the
//! minimizer by its Lagrange multiplier.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{Field, Grid};

/// Exponents with `|p - 1| < P_GAP` are rejected.
pub const P_GAP: f64 = 0.05;
/// Largest exponent accepted on 2-D domains.
pub const P_MAX: f64 = 9.0;
pub const DEFAULT_TOL: f64 = 1e-10;
const MAX_ITER: usize = 20_000;

#[derive(Clone, Debug)]
pub struct GroundState {
    pub v: Field,
    pub p: f64,
    /// Value of `||∇u||_2^2 / ||u||_{p+1}^2` at `v`.
    pub s_omega: f64,
    /// `||∇v||_2^{p-1}`, the constant entering the branch equation.
    pub s: f64,
    pub grad_norm: f64,
    /// `||-Δ_h v - v^p||_2 / ||v^p||_2`.
    pub residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct GroundStateSummary {
    pub p: f64,
    pub s_omega: f64,
    pub s: f64,
    pub grad_norm: f64,
    pub sup: f64,
    pub min: f64,
    pub residual: f64,
}

impl GroundState {
    pub fn summary(&self) -> GroundStateSummary {
        GroundStateSummary {
            p: self.p,
            s_omega: self.s_omega,
            s: self.s,
            grad_norm: self.grad_norm,
            sup: self.v.sup(),
            min: self.v.min(),
            residual: self.residual,
        }
    }
}

/// `||-Δ_h v - v^p||_2 / ||v^p||_2`.
pub fn lane_emden_residual(grid: &Grid, v: &Field, p: f64) -> Result<f64> {
    let lv = grid.apply_laplacian(v)?;
    let vp = v.signed_pow(p);
    let r = lv.zip_with(&vp, |a, b| a - b);
    Ok(grid.l2_norm(&r) / grid.l2_norm(&vp))
}

fn from_solution(grid: &Grid, v: Field, p: f64) -> Result<GroundState> {
    let grad_sq = grid.grad_sq(&v);
    let lp = grid.lq_norm(&v, p + 1.0);
    let residual = lane_emden_residual(grid, &v, p)?;
    Ok(GroundState {
        s_omega: grad_sq / (lp * lp),
        s: grad_sq.powf(0.5 * (p - 1.0)),
        grad_norm: grad_sq.sqrt(),
        residual,
        p,
        v,
    })
}

fn check_exponent(p: f64, sublinear: bool) -> Result<()> {
    let ok = if sublinear {
        p > 0.0 && p <= 1.0 - P_GAP
    } else {
        (1.0 + P_GAP..=P_MAX).contains(&p)
    };
    if ok {
        Ok(())
    } else if sublinear {
        Err(Error::Domain(format!(
            "sublinear exponent must lie in (0, {}], got {p}",
            1.0 - P_GAP
        )))
    } else {
        Err(Error::Domain(format!(
            "superlinear exponent must lie in [{}, {P_MAX}], got {p}",
            1.0 + P_GAP
        )))
    }
}

fn cg_tol_for(tol: f64) -> f64 {
    (tol * 1e-2).clamp(1e-14, 1e-10)
}

/// Unique positive solution of `-Δ_h v = v^p` for `0 < p < 1`.
pub fn solve_sublinear(grid: &Grid, p: f64, tol: f64) -> Result<GroundState> {
    check_exponent(p, true)?;
    let e = grid.solve_poisson(&grid.constant(1.0), cg_tol_for(tol))?;
    let c = e.sup().powf(p / (1.0 - p));
    let v = monotone_iteration(grid, p, &e.scaled(c), tol, |_| {})?;
    from_solution(grid, v, p)
}

/// Supersolution `c·e` with `-Δ_h e = 1` and `c = (sup e)^{p/(1-p)}`.
pub fn sublinear_supersolution(grid: &Grid, p: f64) -> Result<Field> {
    check_exponent(p, true)?;
    let e = grid.solve_poisson(&grid.constant(1.0), 1e-12)?;
    Ok(e.scaled(e.sup().powf(p / (1.0 - p))))
}

/// Iterates `u ← (-Δ_h)^{-1}(u^p)` from a positive `init` until the relative
/// residual drops below `tol`. `observer` sees every iterate, starting with `init`.
pub fn monotone_iteration(
    grid: &Grid,
    p: f64,
    init: &Field,
    tol: f64,
    mut observer: impl FnMut(&Field),
) -> Result<Field> {
    grid.check(init)?;
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance {tol} must be positive")));
    }
    if init.min() <= 0.0 {
        return Err(Error::NonPositive("initial iterate"));
    }
    let cg_tol = cg_tol_for(tol);
    let mut u = init.clone();
    observer(&u);
    let mut residual = f64::INFINITY;
    for _ in 0..MAX_ITER {
        let rhs = u.signed_pow(p);
        let next = grid.solve_poisson_from(&rhs, Some(&u), cg_tol)?.field;
        if !(next.min() > 0.0) {
            return Err(Error::NonPositive("monotone iteration"));
        }
        observer(&next);
        residual = lane_emden_residual(grid, &next, p)?;
        u = next;
        if residual <= tol {
            return Ok(u);
        }
    }
    Err(Error::Convergence {
        what: "monotone iteration",
        iterations: MAX_ITER,
        residual,
    })
}

#[derive(Clone, Debug)]
pub struct RayleighMinimizer {
    /// Positive minimizer normalized to `||w||_{p+1} = 1`.
    pub w: Field,
    pub s_omega: f64,
    pub iterations: usize,
    /// Quotient value at every accepted iterate.
    pub history: Vec<f64>,
    /// `||-Δ_h w - S(Ω) w^p||_2 / ||S(Ω) w^p||_2`.
    pub stationarity: f64,
}

fn normalize_lq(grid: &Grid, u: &Field, q: f64) -> Field {
    u.scaled(1.0 / grid.lq_norm(u, q))
}

/// Minimizes `||∇u||_2^2` on the sphere `||u||_{p+1} = 1` for `p > 1`.
///
/// Descent uses the Sobolev gradient `u - S (-Δ_h)^{-1} u^p` (the `L^2`
/// gradient preconditioned by the inverse Laplacian), a backtracking
/// Armijo line search and renormalization onto the sphere. The iteration
/// starts from the principal eigenfunction.
pub fn minimize_rayleigh(grid: &Grid, p: f64, tol: f64) -> Result<RayleighMinimizer> {
    check_exponent(p, false)?;
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance {tol} must be positive")));
    }
    let q = p + 1.0;
    let cg_tol = cg_tol_for(tol);
    let phi = grid.smallest_eigenvalue(1e-8)?.phi;
    let mut w = normalize_lq(grid, &phi, q);
    let mut quotient = grid.grad_sq(&w);
    let mut history = vec![quotient];
    let mut guess: Option<Field> = None;

    for it in 0..MAX_ITER {
        let wp = w.signed_pow(p);
        let lw = grid.apply_laplacian(&w)?;
        let stationarity = grid.l2_norm(&lw.zip_with(&wp, |a, b| a - quotient * b))
            / (quotient * grid.l2_norm(&wp));
        if stationarity <= tol {
            return Ok(RayleighMinimizer {
                w,
                s_omega: quotient,
                iterations: it,
                history,
                stationarity,
            });
        }
        let k = grid.solve_poisson_from(&wp, guess.as_ref(), cg_tol)?.field;
        let d = k.zip_with(&w, |kv, wv| quotient * kv - wv);
        let slope = 2.0 * grid.grad_sq(&d);
        guess = Some(k);

        let mut tau = 1.0;
        loop {
            let trial = w.zip_with(&d, |wv, dv| wv + tau * dv);
            let trial = normalize_lq(grid, &trial, q);
            let tq = grid.grad_sq(&trial);
            let slack = 8.0 * f64::EPSILON * quotient;
            if tq <= quotient - 1e-4 * tau * slope + slack && trial.min() > 0.0 {
                w = trial;
                quotient = tq;
                history.push(tq);
                break;
            }
            tau *= 0.5;
            if tau < 1e-12 {
                return Err(Error::DescentStall {
                    iterations: it,
                    quotient,
                });
            }
        }
    }
    Err(Error::Convergence {
        what: "Rayleigh quotient descent",
        iterations: MAX_ITER,
        residual: f64::NAN,
    })
}

/// Turns the constrained minimizer into a solution `v = S(Ω)^{1/(p-1)} w` of
/// `-Δ_h v = v^p`.
pub fn normalize_to_solution(
    grid: &Grid,
    w: &Field,
    s_omega: f64,
    p: f64,
    tol: f64,
) -> Result<GroundState> {
    grid.check(w)?;
    if !(p > 1.0) {
        return Err(Error::Domain(format!(
            "normalization requires p > 1, got {p}"
        )));
    }
    let v = w.scaled(s_omega.powf(1.0 / (p - 1.0)));
    let residual = lane_emden_residual(grid, &v, p)?;
    if !(residual <= tol) {
        return Err(Error::InconsistentMinimizer { residual });
    }
    let grad_sq = grid.grad_sq(&v);
    Ok(GroundState {
        s: grad_sq.powf(0.5 * (p - 1.0)),
        grad_norm: grad_sq.sqrt(),
        s_omega,
        residual,
        p,
        v,
    })
}

/// Ground state for any admissible exponent.
pub fn ground_state(grid: &Grid, p: f64, tol: f64) -> Result<GroundState> {
    if p < 1.0 {
        solve_sublinear(grid, p, tol)
    } else {
        let m = minimize_rayleigh(grid, p, tol)?;
        normalize_to_solution(grid, &m.w, m.s_omega, p, tol.max(m.stationarity))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::DomainSpec;

    fn disk(n: usize) -> Grid {
        Grid::new(DomainSpec::disk(1.0, n)).unwrap()
    }

    #[test]
    fn exponent_gap_enforced() {
        let g = disk(32);
        assert!(solve_sublinear(&g, 0.97, 1e-8).is_err());
        assert!(minimize_rayleigh(&g, 1.02, 1e-8).is_err());
        assert!(minimize_rayleigh(&g, 9.5, 1e-8).is_err());
        assert!(solve_sublinear(&g, 1.5, 1e-8).is_err());
    }

    #[test]
    fn sublinear_is_a_fixed_point() {
        let g = Grid::new(DomainSpec::unit_square(32)).unwrap();
        let gs = solve_sublinear(&g, 0.5, 1e-10).unwrap();
        assert!(gs.residual <= 1e-10);
        assert!(gs.v.min() > 0.0);
        let lhs = g.grad_sq(&gs.v);
        let rhs = g.integral_abs_pow(&gs.v, 1.5);
        assert!((lhs - rhs).abs() <= 1e-9 * rhs);
    }

    #[test]
    fn sublinear_iterates_decrease_from_supersolution() {
        let g = disk(64);
        let init = sublinear_supersolution(&g, 0.5).unwrap();
        let mut prev: Option<Field> = None;
        let mut worst: f64 = f64::NEG_INFINITY;
        monotone_iteration(&g, 0.5, &init, 1e-10, |u| {
            if let Some(pv) = &prev {
                let inc = u
                    .values()
                    .iter()
                    .zip(pv.values())
                    .map(|(a, b)| (a - b) / b)
                    .fold(f64::NEG_INFINITY, f64::max);
                worst = worst.max(inc);
            }
            prev = Some(u.clone());
        })
        .unwrap();
        assert!(worst <= 1e-12, "iterate increased by {worst}");
    }

    #[test]
    fn sublinear_uniqueness_from_two_starts() {
        let g = disk(64);
        let tol = 1e-10;
        let top = solve_sublinear(&g, 0.5, tol).unwrap();
        let phi = g.smallest_eigenvalue(1e-8).unwrap().phi;
        let below = monotone_iteration(&g, 0.5, &phi.scaled(1e-3), tol, |_| {}).unwrap();
        assert!(top.v.sup_distance(&below) <= 10.0 * tol * top.v.sup().max(1.0));
    }

    #[test]
    fn sublinear_ball_scaling() {
        // v_R(x) = R^{2/(1-p)} v_1(x/R); at p = 1/2 and R = 2 the factor is 16
        let v1 = solve_sublinear(&disk(128), 0.5, 1e-11).unwrap();
        let g2 = Grid::new(DomainSpec::disk(2.0, 128)).unwrap();
        let v2 = solve_sublinear(&g2, 0.5, 1e-11).unwrap();
        let ratio = v2.v.sup() / v1.v.sup();
        assert!((ratio - 16.0).abs() < 1e-8, "ratio {ratio}");
    }

    #[test]
    fn rayleigh_descent_is_monotone_and_stationary() {
        let g = Grid::new(DomainSpec::unit_square(24)).unwrap();
        let m = minimize_rayleigh(&g, 3.0, 1e-10).unwrap();
        assert!(m.history.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-14)));
        assert!(m.stationarity <= 1e-10);
        assert!(m.w.min() > 0.0);
        assert!((g.lq_norm(&m.w, 4.0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rayleigh_constant_decreases_with_domain_size() {
        let small = Grid::new(DomainSpec::unit_square(24)).unwrap();
        let big = Grid::new(DomainSpec::rectangle(2.0, 2.0, 24)).unwrap();
        let s1 = minimize_rayleigh(&small, 3.0, 1e-9).unwrap().s_omega;
        let s2 = minimize_rayleigh(&big, 3.0, 1e-9).unwrap().s_omega;
        assert!(s1 > s2);
        // S(tΩ) = t^{-4/(p+1)} S(Ω) in two dimensions, exact on scaled meshes
        assert!((s1 / s2 - 2.0).abs() < 1e-6);
    }

    #[test]
    fn normalized_solution_satisfies_identities() {
        let g = disk(128);
        let p = 3.0;
        let m = minimize_rayleigh(&g, p, 1e-11).unwrap();
        let gs = normalize_to_solution(&g, &m.w, m.s_omega, p, 1e-10).unwrap();
        let target = m.s_omega.powf(0.5 * (p + 1.0));
        assert!((gs.s - target).abs() <= 1e-6 * target);
        let energy = g.integral_abs_pow(&gs.v, p + 1.0);
        let grad_sq = gs.grad_norm * gs.grad_norm;
        assert!((grad_sq - energy).abs() <= 1e-8 * energy);
        assert!(gs.residual <= 1e-10);
    }

    #[test]
    fn bad_minimizer_is_rejected() {
        let g = disk(32);
        let phi = g.smallest_eigenvalue(1e-8).unwrap().phi;
        let w = normalize_lq(&g, &phi, 4.0);
        let err = normalize_to_solution(&g, &w, g.grad_sq(&w), 3.0, 1e-8).unwrap_err();
        assert!(matches!(err, Error::InconsistentMinimizer { .. }));
    }
}
