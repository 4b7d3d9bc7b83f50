//! Radial shooting reference for ground states on a disk.
//!
//! Integrates `v'' + v'/r + v^p = 0`, `v(0) = c`, `v'(0) = 0` with classical
//! RK4 and bisects on `c` until `v(radius) = 0`. The Dirichlet energy and the
//! `L^{p+1}` mass are carried as extra ODE components, so the constants come
//! from the same high-order quadrature as the profile itself.

use std::f64::consts::PI;
use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};

pub const DEFAULT_STEPS: usize = 8192;

#[derive(Clone, Debug, Serialize)]
pub struct RadialProfile {
    pub p: f64,
    pub radius: f64,
    pub r: Vec<f64>,
    pub v: Vec<f64>,
    /// Central value `v(0)` found by bisection.
    pub center: f64,
    /// `||∇v||_2^2`.
    pub grad_sq: f64,
    /// `||v||_{p+1}^{p+1}`.
    pub mass: f64,
    pub s_omega: f64,
    pub s: f64,
    /// `|v(radius)| / v(0)` at the accepted shot.
    pub boundary_residual: f64,
}

impl RadialProfile {
    pub fn sup(&self) -> f64 {
        self.center
    }

    /// Writes `r,v` rows with 17 significant digits.
    pub fn write_csv(&self, mut out: impl Write) -> std::io::Result<()> {
        writeln!(out, "r,v")?;
        for (r, v) in self.r.iter().zip(&self.v) {
            writeln!(out, "{r:.16e},{v:.16e}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum ShotOutcome {
    /// The profile reached zero at `r < radius`.
    Crossed { at: f64 },
    /// The profile stayed positive up to `radius`.
    Positive { end: f64 },
}

#[derive(Clone, Copy)]
struct State {
    v: f64,
    dv: f64,
    grad: f64,
    mass: f64,
}

fn rhs(r: f64, s: &State, p: f64) -> State {
    let vp = s.v.max(0.0).powf(p);
    // at r = 0 the symmetry condition gives v''(0) = -v(0)^p / 2
    let ddv = if r == 0.0 { -0.5 * vp } else { -s.dv / r - vp };
    State {
        v: s.dv,
        dv: ddv,
        grad: 2.0 * PI * r * s.dv * s.dv,
        mass: 2.0 * PI * r * vp * s.v.max(0.0),
    }
}

fn axpy(s: &State, h: f64, k: &State) -> State {
    State {
        v: s.v + h * k.v,
        dv: s.dv + h * k.dv,
        grad: s.grad + h * k.grad,
        mass: s.mass + h * k.mass,
    }
}

fn rk4_step(r: f64, s: &State, h: f64, p: f64) -> State {
    let k1 = rhs(r, s, p);
    let k2 = rhs(r + 0.5 * h, &axpy(s, 0.5 * h, &k1), p);
    let k3 = rhs(r + 0.5 * h, &axpy(s, 0.5 * h, &k2), p);
    let k4 = rhs(r + h, &axpy(s, h, &k3), p);
    State {
        v: s.v + h / 6.0 * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v),
        dv: s.dv + h / 6.0 * (k1.dv + 2.0 * k2.dv + 2.0 * k3.dv + k4.dv),
        grad: s.grad + h / 6.0 * (k1.grad + 2.0 * k2.grad + 2.0 * k3.grad + k4.grad),
        mass: s.mass + h / 6.0 * (k1.mass + 2.0 * k2.mass + 2.0 * k3.mass + k4.mass),
    }
}

fn shoot(
    center: f64,
    p: f64,
    radius: f64,
    steps: usize,
    mut record: Option<&mut Vec<(f64, State)>>,
) -> ShotOutcome {
    let h = radius / steps as f64;
    let mut s = State {
        v: center,
        dv: 0.0,
        grad: 0.0,
        mass: 0.0,
    };
    if let Some(rec) = record.as_deref_mut() {
        rec.push((0.0, s));
    }
    for i in 0..steps {
        let r = i as f64 * h;
        let next = rk4_step(r, &s, h, p);
        if next.v <= 0.0 {
            // linear interpolation of the crossing inside the step
            let at = r + h * s.v / (s.v - next.v);
            return ShotOutcome::Crossed { at };
        }
        s = next;
        if let Some(rec) = record.as_deref_mut() {
            rec.push((r + h, s));
        }
    }
    ShotOutcome::Positive { end: s.v }
}

/// Signed miss distance: positive when the shot stays positive, negative
/// when it crosses zero early.
fn miss(outcome: ShotOutcome, radius: f64) -> f64 {
    match outcome {
        ShotOutcome::Crossed { at } => at - radius,
        ShotOutcome::Positive { end } => end,
    }
}

/// Ground-state profile on the disk of the given radius by RK4 shooting.
pub fn shooting_oracle(p: f64, radius: f64, tol: f64) -> Result<RadialProfile> {
    shooting_oracle_with_steps(p, radius, tol, DEFAULT_STEPS)
}

pub fn shooting_oracle_with_steps(
    p: f64,
    radius: f64,
    tol: f64,
    steps: usize,
) -> Result<RadialProfile> {
    if !(p > 0.0) || p == 1.0 || !(radius > 0.0) || !(tol > 0.0) || steps < 16 {
        return Err(Error::Domain(format!(
            "shooting needs p > 0, p != 1, radius > 0, tol > 0 (p={p}, radius={radius}, tol={tol})"
        )));
    }
    // Find one shot on each side of the boundary condition by scanning the
    // central value over 2^-60 .. 2^60.
    let mut lo = None;
    let mut hi = None;
    for k in -60..=60 {
        let c = 2f64.powi(k);
        let m = miss(shoot(c, p, radius, steps, None), radius);
        if m > 0.0 {
            lo = Some(c);
        } else {
            hi = Some(c);
        }
        if let (Some(a), Some(b)) = (lo, hi) {
            // stop at the first adjacent pair with opposite outcomes
            if (a / b).log2().abs() <= 1.0 + 1e-12 {
                break;
            }
        }
    }
    let (Some(mut pos), Some(mut neg)) = (lo, hi) else {
        return Err(Error::BracketNotFound(format!(
            "no sign change of the shooting map for p = {p}, radius = {radius}"
        )));
    };
    if (pos / neg).log2().abs() > 1.0 + 1e-12 {
        return Err(Error::BracketNotFound(format!(
            "shooting map is not monotone for p = {p}"
        )));
    }
    let mut accepted = None;
    for _ in 0..400 {
        let mid = (pos * neg).sqrt();
        if mid == pos || mid == neg {
            break;
        }
        match shoot(mid, p, radius, steps, None) {
            ShotOutcome::Positive { end } => {
                pos = mid;
                if end <= tol * mid {
                    accepted = Some(mid);
                    break;
                }
            }
            ShotOutcome::Crossed { .. } => neg = mid,
        }
    }
    let center = accepted.unwrap_or(pos);
    let mut rec = Vec::with_capacity(steps + 1);
    let outcome = shoot(center, p, radius, steps, Some(&mut rec));
    let ShotOutcome::Positive { end } = outcome else {
        unreachable!("accepted shot stays positive")
    };
    let boundary_residual = end / center;
    if boundary_residual > tol {
        return Err(Error::Convergence {
            what: "shooting bisection",
            iterations: 400,
            residual: boundary_residual,
        });
    }
    let last = rec.last().expect("profile has points").1;
    let grad_sq = last.grad;
    let mass = last.mass;
    let lp = mass.powf(1.0 / (p + 1.0));
    Ok(RadialProfile {
        p,
        radius,
        r: rec.iter().map(|(r, _)| *r).collect(),
        v: rec.iter().map(|(_, s)| s.v).collect(),
        center,
        grad_sq,
        mass,
        s_omega: grad_sq / (lp * lp),
        s: grad_sq.powf(0.5 * (p - 1.0)),
        boundary_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shooting_dichotomy() {
        let too_high = shoot(100.0, 3.0, 1.0, 1024, None);
        let too_low = shoot(0.01, 3.0, 1.0, 1024, None);
        assert!(matches!(too_high, ShotOutcome::Crossed { .. }));
        assert!(matches!(too_low, ShotOutcome::Positive { .. }));
    }

    #[test]
    fn oracle_meets_boundary_condition() {
        let prof = shooting_oracle(3.0, 1.0, 1e-10).unwrap();
        assert!(prof.boundary_residual <= 1e-10);
        // energy identity of the continuous problem
        assert!((prof.grad_sq - prof.mass).abs() < 1e-8 * prof.mass);
    }

    #[test]
    fn oracle_scaling_in_radius() {
        // v_R(x) = R^{-2/(p-1)} v_1(x/R) gives S(Ω_R) = R^{-4/(p+1)} S(Ω_1)
        let p = 3.0;
        let one = shooting_oracle(p, 1.0, 1e-11).unwrap();
        let two = shooting_oracle(p, 2.0, 1e-11).unwrap();
        let ratio = two.s_omega / one.s_omega;
        assert!(
            (ratio - 2f64.powf(-4.0 / (p + 1.0))).abs() < 1e-6,
            "{ratio}"
        );
        assert!((two.center / one.center - 0.5).abs() < 1e-6);
    }

    #[test]
    fn sublinear_oracle_scaling() {
        let p = 0.5;
        let one = shooting_oracle(p, 1.0, 1e-11).unwrap();
        let two = shooting_oracle(p, 2.0, 1e-11).unwrap();
        assert!((two.center / one.center - 16.0).abs() < 1e-5);
    }

    #[test]
    fn csv_export() {
        let prof = shooting_oracle_with_steps(2.0, 1.0, 1e-8, 64).unwrap();
        let mut buf = Vec::new();
        prof.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("r,v\n"));
        assert_eq!(text.lines().count(), 66);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(shooting_oracle(1.0, 1.0, 1e-8).is_err());
        assert!(shooting_oracle(2.0, 0.0, 1e-8).is_err());
    }
}
