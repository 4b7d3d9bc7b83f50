//! Roots of f(y) = y^{(p-1)/2} - bS y^α - aS along a sweep in `a`, crossing
//! the two-branch threshold. Prints CSV on stdout.

use kirchhoff_lab::branch::{classify_regime, find_roots, KirchhoffParams, DEFAULT_ROOT_TOL};
use kirchhoff_lab::report::{fmt_f, fmt_opt};

fn main() -> kirchhoff_lab::Result<()> {
    let s = 1.0;
    let base = KirchhoffParams::new(1.0, 1.0, 1.0, 2.0)?;
    let threshold = classify_regime(&base, s)?
        .threshold_rhs
        .expect("two-branch case");
    println!("a,ratio,count,y0,y1,y2");
    for k in 0..=40 {
        let ratio = 0.05 * k as f64;
        let params = base.with_a((ratio * threshold).max(1e-6));
        let rep = find_roots(&params, s, DEFAULT_ROOT_TOL)?;
        println!(
            "{},{},{},{},{},{}",
            fmt_f(params.a),
            fmt_f(ratio),
            rep.roots.len(),
            fmt_opt(rep.y0),
            fmt_opt(rep.roots.first().copied()),
            fmt_opt(rep.roots.get(1).copied()),
        );
    }
    Ok(())
}
