//! Kirchhoff solutions from (ground state, branch root): both branches in the
//! two-root regime, with the identity ||∇u||² = β and the PDE residual.

use kirchhoff_lab::branch::{classify_regime, find_roots, KirchhoffParams, DEFAULT_ROOT_TOL};
use kirchhoff_lab::grid::{DomainSpec, Grid};
use kirchhoff_lab::groundstate::ground_state;
use kirchhoff_lab::kirchhoff::{reconstruct, recover_ground_state};

fn main() -> kirchhoff_lab::Result<()> {
    let grid = Grid::new(DomainSpec::disk(1.0, 256))?;
    let gs = ground_state(&grid, 2.0, 1e-10)?;
    let base = KirchhoffParams::new(1.0, 1.0, 1.0, 2.0)?;
    let threshold = classify_regime(&base, gs.s)?
        .threshold_rhs
        .expect("two-branch case");
    let params = base.with_a(0.5 * threshold);
    let rep = find_roots(&params, gs.s, DEFAULT_ROOT_TOL)?;
    println!(
        "S = {:.10}, a = {:.6e}, roots = {:?}",
        gs.s, params.a, rep.roots
    );
    for (i, &beta) in rep.roots.iter().enumerate() {
        let rec = reconstruct(&grid, &gs, beta, &params, i)?;
        let back = recover_ground_state(&grid, &rec.u, &params)?;
        println!(
            "branch {i}: beta = {beta:.8e}, |grad u|^2 = {:.8e}, sup u = {:.6e}, residual = {:.1e}, round trip = {:.1e}",
            rec.grad_sq,
            rec.sup_norm,
            rec.residual_rel,
            back.sup_distance(&gs.v)
        );
    }
    Ok(())
}
