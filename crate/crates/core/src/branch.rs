//! The scalar branch equation `f(y) = y^{(p-1)/2} - bS y^α - aS`.
//!
//! Positive roots `β` of `f` are exactly the values of `||∇u||_2^2` taken by
//! positive Kirchhoff solutions `u = (a + bβ^α)^{1/(p-1)} v`, where `v` is the
//! ground state of `-Δv = v^p`. The number of roots is decided by the sign of
//! `γ = 2α + 1 - p` and, when `γ > 0`, by comparing `a b^{(p-1)/γ}` with a
//! closed-form threshold.
//!
//! Roots can be astronomically large (or small) inside the admissible
//! parameter range, so classification and bracketing work with `x = ln y` and
//! the sign-equivalent function `g(x) = (p-1)/2 · x - ln(bS e^{αx} + aS)`.
//! Only the final polish happens in `y`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance for detecting the threshold equality and `p = 2α + 1`.
pub const EQ_TOL: f64 = 1e-9;
pub const DEFAULT_ROOT_TOL: f64 = 1e-12;
/// Maximum number of step doublings while expanding a bracket.
pub const MAX_DOUBLINGS: u32 = 200;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KirchhoffParams {
    pub a: f64,
    pub b: f64,
    pub alpha: f64,
    pub p: f64,
}

impl KirchhoffParams {
    pub fn new(a: f64, b: f64, alpha: f64, p: f64) -> Result<Self> {
        let params = KirchhoffParams { a, b, alpha, p };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        let mut bad = Vec::new();
        if !(self.a > 0.0 && self.a.is_finite()) {
            bad.push(format!("a = {} must be positive", self.a));
        }
        if !(self.b >= 0.0 && self.b.is_finite()) {
            bad.push(format!("b = {} must be non-negative", self.b));
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            bad.push(format!("alpha = {} must be positive", self.alpha));
        }
        if !(self.p > 0.0 && self.p.is_finite()) {
            bad.push(format!("p = {} must be positive", self.p));
        } else if self.p == 1.0 {
            bad.push("p = 1 is excluded".to_string());
        }
        if bad.is_empty() {
            Ok(())
        } else {
            Err(Error::Domain(bad.join("; ")))
        }
    }

    /// `γ = 2α + 1 - p`.
    pub fn gamma(&self) -> f64 {
        2.0 * self.alpha + 1.0 - self.p
    }

    pub fn with_b(self, b: f64) -> Self {
        KirchhoffParams { b, ..self }
    }

    pub fn with_a(self, a: f64) -> Self {
        KirchhoffParams { a, ..self }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegimeCase {
    /// `0 < p < 1`: one root.
    Sublinear,
    /// `1 < p < 2α + 1`: zero, one or two roots depending on the threshold.
    TwoBranch,
    /// `p > 2α + 1`: one root.
    Supercritical,
    /// `p = 2α + 1`: one root iff `bS < 1`.
    Resonant,
}

impl RegimeCase {
    pub fn label(&self) -> &'static str {
        match self {
            RegimeCase::Sublinear => "sublinear",
            RegimeCase::TwoBranch => "two_branch",
            RegimeCase::Supercritical => "supercritical",
            RegimeCase::Resonant => "resonant",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegimeReport {
    pub case: RegimeCase,
    /// `a b^{(p-1)/γ}` in the two-branch case, `bS` in the resonant case.
    pub threshold_lhs: Option<f64>,
    /// `γ [(p-1)^{p-1} / (2αS)^{2α}]^{1/γ}` in the two-branch case, `1` in the resonant case.
    pub threshold_rhs: Option<f64>,
    /// True when the threshold comparison is an equality within [`EQ_TOL`].
    pub tangent: bool,
    pub y0: Option<f64>,
    pub predicted_count: usize,
    pub roots: Vec<f64>,
    /// `ln` of each root; finite even when the root itself overflows.
    pub log_roots: Vec<f64>,
    /// `|f(y)|` at each returned root.
    pub residuals: Vec<f64>,
}

fn check_inputs(y: f64, s: f64) -> Result<()> {
    if !(y > 0.0) {
        return Err(Error::Domain(format!("f is defined for y > 0, got {y}")));
    }
    if !(s > 0.0) {
        return Err(Error::Domain(format!("S must be positive, got {s}")));
    }
    Ok(())
}

pub fn eval_f(y: f64, params: &KirchhoffParams, s: f64) -> Result<f64> {
    check_inputs(y, s)?;
    Ok(f_unchecked(y, params, s))
}

fn f_unchecked(y: f64, params: &KirchhoffParams, s: f64) -> f64 {
    let KirchhoffParams { a, b, alpha, p } = *params;
    let bterm = if b == 0.0 { 0.0 } else { b * s * y.powf(alpha) };
    y.powf(0.5 * (p - 1.0)) - bterm - a * s
}

/// `f'(y) = y^{α-1} ((p-1)/2 · y^{-γ/2} - αbS)`.
pub fn eval_fprime(y: f64, params: &KirchhoffParams, s: f64) -> Result<f64> {
    check_inputs(y, s)?;
    let KirchhoffParams { b, alpha, p, .. } = *params;
    let gamma = params.gamma();
    Ok(y.powf(alpha - 1.0) * (0.5 * (p - 1.0) * y.powf(-0.5 * gamma) - alpha * b * s))
}

/// `y₀ = ((p-1)/(2αbS))^{2/γ}`, the unique critical point of `f` when it exists.
pub fn critical_point(params: &KirchhoffParams, s: f64) -> Option<f64> {
    log_critical_point(params, s).map(f64::exp)
}

fn log_critical_point(params: &KirchhoffParams, s: f64) -> Option<f64> {
    let KirchhoffParams { b, alpha, p, .. } = *params;
    let gamma = params.gamma();
    if p <= 1.0 || b <= 0.0 || s <= 0.0 || is_resonant(params) {
        return None;
    }
    Some(2.0 / gamma * ((p - 1.0).ln() - (2.0 * alpha * b * s).ln()))
}

fn is_resonant(params: &KirchhoffParams) -> bool {
    let target = 2.0 * params.alpha + 1.0;
    (params.p - target).abs() <= EQ_TOL * target
}

/// Sign-equivalent log form of `f` at `y = e^x`.
fn g_log(x: f64, params: &KirchhoffParams, s: f64) -> f64 {
    let KirchhoffParams { a, b, alpha, p } = *params;
    let la = (a * s).ln();
    let rest = if b == 0.0 {
        la
    } else {
        log_add_exp((b * s).ln() + alpha * x, la)
    };
    0.5 * (p - 1.0) * x - rest
}

fn log_add_exp(u: f64, v: f64) -> f64 {
    let (hi, lo) = if u > v { (u, v) } else { (v, u) };
    hi + (lo - hi).exp().ln_1p()
}

/// Classifies the parameter regime and predicts the number of positive roots.
pub fn classify_regime(params: &KirchhoffParams, s: f64) -> Result<RegimeReport> {
    params.validate()?;
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::Domain(format!("S must be positive, got {s}")));
    }
    let KirchhoffParams { a, b, alpha, p } = *params;
    let gamma = params.gamma();
    let mut report = RegimeReport {
        case: RegimeCase::Sublinear,
        threshold_lhs: None,
        threshold_rhs: None,
        tangent: false,
        y0: critical_point(params, s),
        predicted_count: 1,
        roots: Vec::new(),
        log_roots: Vec::new(),
        residuals: Vec::new(),
    };
    if p < 1.0 {
        return Ok(report);
    }
    if is_resonant(params) {
        report.case = RegimeCase::Resonant;
        report.threshold_lhs = Some(b * s);
        report.threshold_rhs = Some(1.0);
        report.predicted_count = usize::from(b * s < 1.0);
        return Ok(report);
    }
    if gamma < 0.0 {
        report.case = RegimeCase::Supercritical;
        return Ok(report);
    }
    report.case = RegimeCase::TwoBranch;
    let ln_rhs =
        gamma.ln() + ((p - 1.0) * (p - 1.0).ln() - 2.0 * alpha * (2.0 * alpha * s).ln()) / gamma;
    report.threshold_rhs = Some(ln_rhs.exp());
    if b == 0.0 {
        // Pure semilinear limit: only the lower root survives.
        report.threshold_lhs = Some(0.0);
        return Ok(report);
    }
    let ln_lhs = a.ln() + (p - 1.0) / gamma * b.ln();
    report.threshold_lhs = Some(ln_lhs.exp());
    let scale = ln_lhs.abs().max(ln_rhs.abs()).max(1.0);
    if (ln_lhs - ln_rhs).abs() <= EQ_TOL * scale {
        report.tangent = true;
        report.predicted_count = 1;
    } else if ln_lhs < ln_rhs {
        report.predicted_count = 2;
    } else {
        report.predicted_count = 0;
    }
    Ok(report)
}

/// Classifies the regime and locates every positive root by bisection on
/// guaranteed brackets.
pub fn find_roots(params: &KirchhoffParams, s: f64, root_tol: f64) -> Result<RegimeReport> {
    if !(root_tol > 0.0) {
        return Err(Error::Domain(format!(
            "root tolerance {root_tol} must be positive"
        )));
    }
    let mut report = classify_regime(params, s)?;
    let KirchhoffParams { a, b, alpha, p } = *params;
    let g = |x: f64| g_log(x, params, s);

    let log_roots: Vec<f64> = if b == 0.0 {
        vec![2.0 * (a * s).ln() / (p - 1.0)]
    } else {
        match report.case {
            RegimeCase::Resonant => {
                if report.predicted_count == 1 {
                    // f(y) = (1 - bS) y^α - aS
                    vec![((a * s).ln() - (1.0 - b * s).ln()) / alpha]
                } else {
                    Vec::new()
                }
            }
            RegimeCase::Sublinear => {
                // g decreases from +inf to -inf
                let (lo, hi) = expand(&g, 0.0, Direction::Down, Direction::Up)?;
                vec![bisect_log(&g, lo, hi)]
            }
            RegimeCase::Supercritical => {
                // g < 0 on (0, y0], increasing beyond y0
                let x0 = log_critical_point(params, s).expect("b > 0 and p > 1");
                let hi = grow_until(&g, x0, 1.0, |v| v > 0.0)?;
                vec![bisect_log(&g, x0, hi)]
            }
            RegimeCase::TwoBranch => {
                let x0 = log_critical_point(params, s).expect("b > 0 and p > 1");
                match report.predicted_count {
                    0 => Vec::new(),
                    1 => vec![x0],
                    _ => {
                        if !(g(x0) > 0.0) {
                            return Err(Error::InternalInconsistency {
                                predicted: 2,
                                found: 0,
                            });
                        }
                        let lo = grow_until(&g, x0, -1.0, |v| v < 0.0)?;
                        let hi = grow_until(&g, x0, 1.0, |v| v < 0.0)?;
                        vec![bisect_log(&g, lo, x0), bisect_log(&g, x0, hi)]
                    }
                }
            }
        }
    };

    let tol_abs = root_tol * (a * s).max(1.0);
    for &x in &log_roots {
        // The tangent root is the closed-form maximizer; bisection has no sign change to use.
        let y = if report.tangent {
            x.exp()
        } else {
            polish(x, params, s, tol_abs, root_tol, report.y0)
        };
        report.residuals.push(if y.is_finite() {
            f_unchecked(y, params, s).abs()
        } else {
            f64::INFINITY
        });
        report.roots.push(y);
        report
            .log_roots
            .push(if y.is_finite() && y > 0.0 { y.ln() } else { x });
    }
    if report.roots.len() != report.predicted_count {
        return Err(Error::InternalInconsistency {
            predicted: report.predicted_count,
            found: report.roots.len(),
        });
    }
    Ok(report)
}

#[derive(Clone, Copy)]
enum Direction {
    Up,
    Down,
}

/// Brackets a sign change of `g`, which is positive far out in `pos_dir`
/// and negative far out in `neg_dir`.
fn expand(
    g: &impl Fn(f64) -> f64,
    start: f64,
    pos_dir: Direction,
    neg_dir: Direction,
) -> Result<(f64, f64)> {
    let sign = |d: Direction| match d {
        Direction::Up => 1.0,
        Direction::Down => -1.0,
    };
    let lo = grow_until(g, start, sign(pos_dir), |v| v > 0.0)?;
    let hi = grow_until(g, start, sign(neg_dir), |v| v < 0.0)?;
    Ok((lo, hi))
}

/// Walks from `start` in direction `dir` with doubling steps until `accept(g)`.
fn grow_until(
    g: &impl Fn(f64) -> f64,
    start: f64,
    dir: f64,
    accept: impl Fn(f64) -> bool,
) -> Result<f64> {
    let mut step = std::f64::consts::LN_2;
    let mut x = start;
    for _ in 0..MAX_DOUBLINGS {
        if accept(g(x)) {
            return Ok(x);
        }
        x = start + dir * step;
        step *= 2.0;
    }
    Err(Error::InternalInconsistency {
        predicted: 1,
        found: 0,
    })
}

/// Bisection in `x = ln y` for a sign change of `g` between `a` and `b`.
fn bisect_log(g: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let (mut lo, mut hi) = (a, b);
    let glo = g(lo);
    if glo == 0.0 {
        return lo;
    }
    let lo_positive = glo > 0.0;
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        let gm = g(mid);
        if gm == 0.0 {
            return mid;
        }
        if (gm > 0.0) == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Final bisection directly on `f` around `e^x`; returns the best float found.
///
/// The bracket starts at a relative half-width of 1e-12 and widens by 100x
/// (up to 1e-6) when the log-space estimate is too coarse to straddle the
/// root, which happens when `f` is nearly flat. It never crosses `y0`.
fn polish(
    x: f64,
    params: &KirchhoffParams,
    s: f64,
    tol_abs: f64,
    tol_rel: f64,
    y0: Option<f64>,
) -> f64 {
    let y = x.exp();
    if !y.is_finite() || y == 0.0 {
        return y;
    }
    let f = |y: f64| f_unchecked(y, params, s);
    let clamp = |lo: f64, hi: f64| match y0 {
        Some(c) if y < c => (lo, hi.min(c)),
        Some(c) if y > c => (lo.max(c), hi),
        _ => (lo, hi),
    };
    let mut width = 1e-12;
    let (mut lo, mut hi, mut flo) = loop {
        let (lo, hi) = clamp(y * (1.0 - width), y * (1.0 + width));
        let (flo, fhi) = (f(lo), f(hi));
        if flo.signum() != fhi.signum() {
            break (lo, hi, flo);
        }
        width *= 100.0;
        if width > 1e-6 {
            // exp() rounding left us outside any bracket; keep the log-space estimate.
            return best_of(&[y, lo, hi], &f);
        }
    };
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        let fm = f(mid);
        if fm.abs() <= tol_abs && (hi - lo) <= tol_rel * mid {
            return best_of(&[mid, lo, hi], &f);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    best_of(&[lo, hi], &f)
}

fn best_of(candidates: &[f64], f: &impl Fn(f64) -> f64) -> f64 {
    candidates
        .iter()
        .copied()
        .min_by(|a, b| f(*a).abs().total_cmp(&f(*b).abs()))
        .expect("non-empty candidate list")
}

#[derive(Clone, Debug, Serialize)]
pub struct AsymptoticRow {
    pub b: f64,
    pub case: RegimeCase,
    pub root_count: usize,
    pub y0: Option<f64>,
    /// Lower (or only) root.
    pub y1: Option<f64>,
    /// Upper root in the two-root regime.
    pub y2: Option<f64>,
    /// `|y1 - (aS)^{2/(p-1)}|`.
    pub y1_error: Option<f64>,
    /// Set when the entry left the regime the probe expects.
    pub flagged: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct AsymptoticTable {
    pub rows: Vec<AsymptoticRow>,
    /// `(aS)^{2/(p-1)}`, the `b = 0` root.
    pub y1_limit: f64,
    pub y1_error_monotone: bool,
    /// Least-squares slope of `ln y2` against `ln b`.
    pub y2_slope: Option<f64>,
    /// `-2/γ`, the dominant-balance exponent.
    pub y2_slope_target: Option<f64>,
    pub y0_increasing: bool,
}

/// Tracks the roots along a decreasing sequence of `b` values.
pub fn asymptotic_b_to_zero(
    params: &KirchhoffParams,
    s: f64,
    b_sequence: &[f64],
) -> Result<AsymptoticTable> {
    let KirchhoffParams { a, p, .. } = *params;
    let y1_limit = (a * s).powf(2.0 / (p - 1.0));
    let mut rows = Vec::with_capacity(b_sequence.len());
    for &b in b_sequence {
        let pb = params.with_b(b);
        let rep = find_roots(&pb, s, DEFAULT_ROOT_TOL)?;
        let expects_two = rep.case == RegimeCase::TwoBranch && b > 0.0;
        let flagged = expects_two && rep.roots.len() != 2;
        let y1 = rep.roots.first().copied();
        let y2 = if rep.roots.len() == 2 {
            Some(rep.roots[1])
        } else {
            None
        };
        rows.push(AsymptoticRow {
            b,
            case: rep.case,
            root_count: rep.roots.len(),
            y0: rep.y0,
            y1: if flagged { None } else { y1 },
            y2,
            y1_error: if flagged {
                None
            } else {
                y1.map(|y| (y - y1_limit).abs())
            },
            flagged,
        });
    }
    let errors: Vec<f64> = rows.iter().filter_map(|r| r.y1_error).collect();
    let y1_error_monotone = errors.windows(2).all(|w| w[1] <= w[0]);
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter_map(|r| r.y2.map(|y| (r.b.ln(), y.ln())))
        .collect();
    let y2_slope = least_squares_slope(&pts);
    let gamma = params.gamma();
    let y2_slope_target = (gamma > 0.0 && p > 1.0).then(|| -2.0 / gamma);
    let y0s: Vec<f64> = rows.iter().filter_map(|r| r.y0).collect();
    let y0_increasing = y0s.windows(2).all(|w| w[1] > w[0]);
    Ok(AsymptoticTable {
        rows,
        y1_limit,
        y1_error_monotone,
        y2_slope,
        y2_slope_target,
        y0_increasing,
    })
}

/// Ordinary least-squares slope; `None` for fewer than two points.
pub fn least_squares_slope(pts: &[(f64, f64)]) -> Option<f64> {
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kp(a: f64, b: f64, alpha: f64, p: f64) -> KirchhoffParams {
        KirchhoffParams::new(a, b, alpha, p).unwrap()
    }

    #[test]
    fn f_vanishes_at_semilinear_root() {
        let prm = kp(2.0, 0.0, 1.0, 3.0);
        let y = (2.0_f64 * 1.5).powf(2.0 / 2.0);
        assert!(eval_f(y, &prm, 1.5).unwrap().abs() < 1e-14);
    }

    #[test]
    fn f_closed_form_roots() {
        let y = (2.0 + 3f64.sqrt()).powi(2);
        assert!(eval_f(y, &kp(0.25, 0.25, 1.0, 2.0), 1.0).unwrap().abs() < 1e-12);
        let y = (1.0 + 5f64.sqrt()) / 2.0;
        assert!(eval_f(y, &kp(1.0, 1.0, 1.0, 5.0), 1.0).unwrap().abs() < 1e-12);
    }

    #[test]
    fn domain_errors() {
        let prm = kp(1.0, 1.0, 1.0, 2.0);
        assert!(matches!(eval_f(0.0, &prm, 1.0), Err(Error::Domain(_))));
        assert!(matches!(
            eval_fprime(-1.0, &prm, 1.0),
            Err(Error::Domain(_))
        ));
        assert!(KirchhoffParams::new(1.0, 1.0, 1.0, 1.0).is_err());
        assert!(KirchhoffParams::new(0.0, 1.0, 1.0, 2.0).is_err());
    }

    #[test]
    fn fprime_vanishes_at_critical_point() {
        let prm = kp(0.25, 0.25, 1.0, 2.0);
        let y0 = critical_point(&prm, 1.0).unwrap();
        assert!((y0 - 4.0).abs() < 1e-12);
        assert!(eval_fprime(y0, &prm, 1.0).unwrap().abs() < 1e-10);
    }

    #[test]
    fn fprime_negative_for_sublinear() {
        let prm = kp(0.7, 2.0, 1.3, 0.4);
        for y in [1e-6, 0.1, 1.0, 10.0, 1e6] {
            assert!(eval_fprime(y, &prm, 3.0).unwrap() < 0.0);
        }
    }

    #[test]
    fn tangent_threshold() {
        let prm = kp(0.5, 0.5, 1.0, 2.0);
        assert_eq!(critical_point(&prm, 1.0), Some(1.0));
        assert_eq!(eval_f(1.0, &prm, 1.0).unwrap(), 0.0);
        let rep = find_roots(&prm, 1.0, 1e-12).unwrap();
        assert!(rep.tangent);
        assert_eq!(rep.roots, vec![1.0]);
    }

    #[test]
    fn critical_point_absent_when_sublinear_or_resonant() {
        assert_eq!(critical_point(&kp(1.0, 1.0, 1.0, 0.5), 1.0), None);
        assert_eq!(critical_point(&kp(1.0, 1.0, 1.0, 3.0), 1.0), None);
    }

    #[test]
    fn classify_fixtures() {
        let rep = classify_regime(&kp(0.25, 0.25, 1.0, 2.0), 1.0).unwrap();
        assert_eq!(rep.case, RegimeCase::TwoBranch);
        assert!((rep.threshold_lhs.unwrap() - 1.0 / 16.0).abs() < 1e-15);
        assert!((rep.threshold_rhs.unwrap() - 0.25).abs() < 1e-15);
        assert_eq!(rep.predicted_count, 2);

        let rep = classify_regime(&kp(1.0, 1.0, 1.0, 2.0), 1.0).unwrap();
        assert_eq!(rep.predicted_count, 0);

        let rep = find_roots(&kp(1.0, 0.5, 1.0, 3.0), 1.0, 1e-12).unwrap();
        assert_eq!(rep.case, RegimeCase::Resonant);
        assert_eq!(rep.predicted_count, 1);
        assert!((rep.roots[0] - 2.0).abs() < 1e-12);

        let rep = classify_regime(&kp(1.0, 1.0, 1.0, 3.0), 1.0).unwrap();
        assert_eq!(rep.predicted_count, 0);
    }

    #[test]
    fn find_roots_fixtures() {
        let rep = find_roots(&kp(0.25, 0.25, 1.0, 2.0), 1.0, 1e-12).unwrap();
        let s3 = 3f64.sqrt();
        assert!((rep.roots[0] - (2.0 - s3).powi(2)).abs() < 1e-12);
        assert!((rep.roots[1] - (2.0 + s3).powi(2)).abs() < 1e-10);

        let rep = find_roots(&kp(1.0, 1.0, 1.0, 5.0), 1.0, 1e-12).unwrap();
        assert_eq!(rep.case, RegimeCase::Supercritical);
        assert!((rep.roots[0] - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-12);

        let prm = kp(1.0, 1.0, 1.0, 0.5);
        let rep = find_roots(&prm, 1.0, 1e-12).unwrap();
        assert_eq!(rep.roots.len(), 1);
        assert!(rep.residuals[0] <= 1e-12);
        // independent bracket: f(0.1) > 0 > f(1)
        assert!(eval_f(0.1, &prm, 1.0).unwrap() > 0.0);
        assert!(eval_f(1.0, &prm, 1.0).unwrap() < 0.0);
        assert!(rep.roots[0] > 0.1 && rep.roots[0] < 1.0);
    }

    #[test]
    fn b_zero_gives_semilinear_root() {
        for p in [0.5, 2.0, 5.0] {
            let prm = kp(0.3, 0.0, 1.0, p);
            let rep = find_roots(&prm, 2.0, 1e-12).unwrap();
            assert_eq!(rep.roots.len(), 1);
            let exact = (0.3_f64 * 2.0).powf(2.0 / (p - 1.0));
            assert!((rep.roots[0] - exact).abs() < 1e-12 * exact);
        }
    }

    #[test]
    fn asymptotics_of_two_branch_family() {
        let prm = kp(0.25, 1.0, 1.0, 2.0);
        let bs: Vec<f64> = (1..=12).map(|k| 2f64.powi(-k)).collect();
        let table = asymptotic_b_to_zero(&prm, 1.0, &bs).unwrap();
        assert!((table.y1_limit - 0.0625).abs() < 1e-15);
        assert!(table.y1_error_monotone);
        assert!(table.y0_increasing);
        let slope = table.y2_slope.unwrap();
        assert!((slope + 2.0).abs() < 0.05 * 2.0, "slope {slope}");
        assert!(table.rows.iter().all(|r| !r.flagged));
    }

    #[test]
    fn asymptotics_in_supercritical_case() {
        let prm = kp(1.0, 1.0, 1.0, 5.0);
        let bs: Vec<f64> = (0..=12).map(|k| 2f64.powi(-k)).collect();
        let table = asymptotic_b_to_zero(&prm, 1.0, &bs).unwrap();
        assert!(table.y1_error_monotone);
        let last = table.rows.last().unwrap();
        assert!(last.y1_error.unwrap() < 1e-3);
        assert_eq!(table.y1_limit, 1.0);
    }

    #[test]
    fn flagged_rows_when_leaving_two_root_zone() {
        let prm = kp(1.0, 1.0, 1.0, 2.0);
        let table = asymptotic_b_to_zero(&prm, 1.0, &[1.0, 0.01]).unwrap();
        assert!(table.rows[0].flagged);
        assert!(!table.rows[1].flagged);
    }

    #[test]
    fn extreme_roots_stay_finite_in_log_space() {
        // upper root far beyond f64 range
        let prm = kp(1e-3, 1e-3, 0.3, 1.58);
        let rep = find_roots(&prm, 1e-2, 1e-12).unwrap();
        assert_eq!(rep.roots.len(), 2);
        assert!(rep.roots[1].is_infinite());
        assert!(rep.log_roots.iter().all(|x| x.is_finite()));
    }
}
