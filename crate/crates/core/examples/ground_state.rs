//! Ground state of -Δv = v^p on the unit square and the unit disk, with the
//! constants S(Ω) and S = ||∇v||^{p-1} that drive the branch equation.
//!
//!     cargo run --release --example ground_state -- 3.0

use kirchhoff_lab::grid::{DomainSpec, Grid};
use kirchhoff_lab::groundstate::ground_state;

fn main() -> kirchhoff_lab::Result<()> {
    let p: f64 = std::env::args()
        .nth(1)
        .map(|s| s.parse().expect("p"))
        .unwrap_or(3.0);
    for spec in [DomainSpec::unit_square(64), DomainSpec::disk(1.0, 256)] {
        let grid = Grid::new(spec)?;
        let gs = ground_state(&grid, p, 1e-10)?;
        let l1 = grid.smallest_eigenvalue(1e-10)?;
        println!(
            "{:?}: lambda1 = {:.8}, S(Omega) = {:.10}, S = {:.10}, sup v = {:.8}, residual = {:.1e}",
            spec.shape,
            l1.lambda,
            gs.s_omega,
            gs.s,
            gs.v.sup(),
            gs.residual
        );
    }
    Ok(())
}
