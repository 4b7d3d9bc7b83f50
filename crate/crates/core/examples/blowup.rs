//! Both branches along b = 2^-k in the two-root regime: the lower branch
//! tends to the b = 0 solution, the upper one blows up like b^{-1/γ}.

use kirchhoff_lab::branch::{classify_regime, KirchhoffParams};
use kirchhoff_lab::grid::{DomainSpec, Grid};
use kirchhoff_lab::groundstate::ground_state;
use kirchhoff_lab::kirchhoff::blowup_probe;

fn main() -> kirchhoff_lab::Result<()> {
    let grid = Grid::new(DomainSpec::disk(1.0, 128))?;
    let gs = ground_state(&grid, 2.0, 1e-10)?;
    let base = KirchhoffParams::new(1.0, 1.0, 1.0, 2.0)?;
    let threshold = classify_regime(&base, gs.s)?
        .threshold_rhs
        .expect("two-branch case");
    let params = base.with_a(0.5 * threshold);
    let bs: Vec<f64> = (0..=12).map(|k| 2f64.powi(-k)).collect();
    let table = blowup_probe(&grid, &gs, &params, &bs)?;
    println!("b,lower_sup,lower_error,upper_sup");
    for r in &table.rows {
        println!(
            "{:e},{:e},{:e},{:e}",
            r.b,
            r.lower_sup.unwrap_or(f64::NAN),
            r.lower_error.unwrap_or(f64::NAN),
            r.upper_sup.unwrap_or(f64::NAN)
        );
    }
    println!(
        "# lower error monotone: {}, upper increasing: {}, slope {:.4} (scaling exponent {:.4})",
        table.lower_error_monotone,
        table.upper_increasing,
        table.upper_slope.unwrap_or(f64::NAN),
        table.upper_slope_target
    );
    Ok(())
}
