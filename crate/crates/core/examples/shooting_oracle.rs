//! Radial shooting reference for the disk ground state, compared with the
//! finite-volume Rayleigh minimizer at increasing resolution.

use kirchhoff_lab::grid::{DomainSpec, Grid};
use kirchhoff_lab::groundstate::ground_state;
use kirchhoff_lab::shooting::shooting_oracle;

fn main() -> kirchhoff_lab::Result<()> {
    let p = 3.0;
    let oracle = shooting_oracle(p, 1.0, 1e-12)?;
    println!(
        "shooting: v(0) = {:.10}, S(Omega) = {:.10}",
        oracle.center, oracle.s_omega
    );
    for n in [64, 128, 256, 512] {
        let gs = ground_state(&Grid::new(DomainSpec::disk(1.0, n))?, p, 1e-10)?;
        println!(
            "n = {n:4}: S(Omega) = {:.10} (rel. gap {:.2e}), v(0) = {:.10}",
            gs.s_omega,
            (gs.s_omega - oracle.s_omega).abs() / oracle.s_omega,
            gs.v.sup()
        );
    }
    Ok(())
}
