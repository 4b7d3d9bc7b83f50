//! Sup-norm windows over perturbation strength and homotopy parameter, and
//! their stability under grid refinement.

use kirchhoff_lab::branch::KirchhoffParams;
use kirchhoff_lab::grid::{DomainSpec, Grid};
use kirchhoff_lab::kirchhoff::sweep::compare_windows;
use kirchhoff_lab::kirchhoff::{
    bound_sweep, FixedPointOptions, PerturbationSpec, SweepRegime, SweepSpec,
};

fn main() -> kirchhoff_lab::Result<()> {
    let params = KirchhoffParams::new(1.0, 1.0, 1.0, 5.0)?;
    let spec = SweepSpec {
        t_values: vec![0.0, 0.25, 0.5, 0.75, 1.0],
        b_values: vec![0.5, 1.0, 2.0],
        perturbations: vec![
            PerturbationSpec::Superlinear {
                lambda: 0.1,
                q: 2.0,
            },
            PerturbationSpec::Superlinear {
                lambda: 0.9,
                q: 2.0,
            },
        ],
        lambda_is_fraction: true,
    };
    let mut windows = Vec::new();
    for n in [64, 128] {
        let grid = Grid::new(DomainSpec::disk(1.0, n))?;
        let rep = bound_sweep(
            &grid,
            &params,
            SweepRegime::Superlinear,
            &spec,
            None,
            &FixedPointOptions::default(),
        )?;
        println!(
            "n = {n}: {} cells, {} failures, lambda margins {:?}, window {:?}",
            rep.cells.len(),
            rep.failures,
            rep.lambda_margins,
            rep.window
        );
        windows.push(rep.window.expect("converged cells"));
    }
    println!("{:?}", compare_windows(windows[0], windows[1]));
    Ok(())
}
