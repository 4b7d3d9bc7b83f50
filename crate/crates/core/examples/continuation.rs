//! Homotopy continuation t = 0 -> 1 for the perturbed problem in the
//! sublinear and superlinear regimes.

use kirchhoff_lab::branch::KirchhoffParams;
use kirchhoff_lab::grid::{DomainSpec, Grid};
use kirchhoff_lab::kirchhoff::{
    uniform_schedule, FixedPointOptions, Homotopy, PerturbationSpec, Provenance,
};

fn main() -> kirchhoff_lab::Result<()> {
    let grid = Grid::new(DomainSpec::disk(1.0, 128))?;
    let l1 = grid.smallest_eigenvalue(1e-10)?.lambda;
    let runs = [
        (
            KirchhoffParams::new(1.0, 1.0, 1.0, 0.5)?,
            PerturbationSpec::Sublinear {
                mu: 1.0,
                q: 0.7,
                q1: 0.8,
            },
        ),
        (
            KirchhoffParams::new(1.0, 1.0, 1.0, 5.0)?,
            PerturbationSpec::Superlinear {
                lambda: 0.5 * l1,
                q: 2.0,
            },
        ),
    ];
    for (params, pert) in runs {
        println!("p = {}, {:?}", params.p, pert);
        let h = Homotopy::new(&grid, params, pert)?;
        let path = h
            .continuation(
                &uniform_schedule(10),
                &grid.constant(1.0),
                &FixedPointOptions::default(),
            )
            .map_err(|f| f.error)?;
        for r in &path {
            let Provenance::Homotopy { t } = r.provenance else {
                unreachable!()
            };
            println!(
                "  t = {t:.1}: sup u = {:.8}, residual = {:.1e}, iterations = {}",
                r.sup_norm, r.residual_rel, r.iterations
            );
        }
    }
    Ok(())
}
