//! TOML experiment configuration.
//!
//! ```toml
//! output = "runs/disk"
//! t_schedule = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0]
//!
//! [domain]
//! shape = "disk"        # or "rectangle" with width/height
//! radius = 1.0
//! resolution = 128
//!
//! [params]
//! a = 1.0
//! b = 1.0
//! alpha = 1.0
//! p = 5.0
//!
//! [perturbation]        # optional; kind = "none" | "sublinear" | "superlinear"
//! kind = "superlinear"
//! lambda_fraction = 0.5 # or an absolute `lambda`
//! q = 2.0
//!
//! [tolerances]          # optional, all positive
//! fixed_point = 1e-11
//!
//! [sweep]               # optional
//! variable = "b"
//! values = [1.0, 0.5, 0.25]
//! ```
//!
//! Top-level keys (`output`, optional `t_schedule`) must precede the first
//! table header.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::branch::{KirchhoffParams, DEFAULT_ROOT_TOL};
use crate::error::{Error, Result};
use crate::grid::{DomainSpec, Grid, Shape, MIN_RESOLUTION};
use crate::kirchhoff::homotopy::{validate_schedule, FixedPointOptions};
use crate::kirchhoff::PerturbationSpec;

/// Names accepted as `sweep.variable`.
pub const SWEEP_VARIABLES: &[&str] = &[
    "a",
    "b",
    "alpha",
    "p",
    "t",
    "mu",
    "lambda",
    "lambda_fraction",
    "resolution",
];

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default = "default_cg")]
    pub cg: f64,
    #[serde(default = "default_groundstate")]
    pub groundstate: f64,
    #[serde(default = "default_root")]
    pub root: f64,
    #[serde(default = "default_fixed_point")]
    pub fixed_point: f64,
}

fn default_cg() -> f64 {
    1e-12
}
fn default_groundstate() -> f64 {
    1e-10
}
fn default_root() -> f64 {
    DEFAULT_ROOT_TOL
}
fn default_fixed_point() -> f64 {
    1e-11
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            cg: default_cg(),
            groundstate: default_groundstate(),
            root: default_root(),
            fixed_point: default_fixed_point(),
        }
    }
}

/// Perturbation as written in the file; `lambda_fraction` is resolved
/// against `a·λ₁(Ω)` once the grid is known.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PerturbationConfig {
    #[default]
    None,
    Sublinear {
        mu: f64,
        q: f64,
        q1: f64,
    },
    Superlinear {
        #[serde(default)]
        lambda: Option<f64>,
        #[serde(default)]
        lambda_fraction: Option<f64>,
        q: f64,
    },
}

impl PerturbationConfig {
    /// Concrete perturbation given `a·λ₁` (only consulted for fractions).
    pub fn resolve(&self, a_lambda1: Option<f64>) -> Result<PerturbationSpec> {
        Ok(match *self {
            PerturbationConfig::None => PerturbationSpec::None,
            PerturbationConfig::Sublinear { mu, q, q1 } => {
                PerturbationSpec::Sublinear { mu, q, q1 }
            }
            PerturbationConfig::Superlinear {
                lambda,
                lambda_fraction,
                q,
            } => {
                let lambda = match (lambda, lambda_fraction) {
                    (Some(l), None) => l,
                    (None, Some(f)) => {
                        f * a_lambda1.ok_or_else(|| {
                            Error::Config("lambda_fraction needs the principal eigenvalue".into())
                        })?
                    }
                    (None, None) => 0.0,
                    (Some(_), Some(_)) => {
                        return Err(Error::Config(
                            "give either lambda or lambda_fraction, not both".into(),
                        ))
                    }
                };
                PerturbationSpec::Superlinear { lambda, q }
            }
        })
    }

    fn needs_eigenvalue(&self) -> bool {
        matches!(self, PerturbationConfig::Superlinear { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub variable: String,
    pub values: Vec<f64>,
    /// Homotopy parameters recorded in each cell.
    #[serde(default)]
    pub t_values: Option<Vec<f64>>,
    /// Fixed homotopy parameter for `1 < p < 2α + 1`.
    #[serde(default)]
    pub t0: Option<f64>,
}

/// Overrides for the `branch` subcommand.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BranchConfig {
    /// Use this `S` instead of computing the ground state.
    pub s: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub domain: DomainSpec,
    pub params: KirchhoffParams,
    #[serde(default)]
    pub perturbation: PerturbationConfig,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub sweep: Option<SweepConfig>,
    #[serde(default)]
    pub t_schedule: Option<Vec<f64>>,
    #[serde(default)]
    pub branch: Option<BranchConfig>,
    pub output: String,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn grid(&self) -> Result<Grid> {
        Grid::new(self.domain)
    }

    pub fn fixed_point_options(&self) -> FixedPointOptions {
        FixedPointOptions {
            tol: self.tolerances.fixed_point,
            cg_tol: self.tolerances.cg,
            ..FixedPointOptions::default()
        }
    }

    /// Every violated condition that can be decided without a grid.
    pub fn static_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        match self.domain.shape {
            Shape::Rectangle { width, height } => {
                if !(width > 0.0 && height > 0.0 && width.is_finite() && height.is_finite()) {
                    out.push(format!(
                        "domain width/height must be positive, got {width} x {height}"
                    ));
                }
            }
            Shape::Disk { radius } => {
                if !(radius > 0.0 && radius.is_finite()) {
                    out.push(format!("domain radius must be positive, got {radius}"));
                }
            }
        }
        if self.domain.resolution < MIN_RESOLUTION {
            out.push(format!(
                "domain resolution {} is below the minimum {MIN_RESOLUTION}",
                self.domain.resolution
            ));
        }
        if let Err(Error::Domain(msg)) = self.params.validate() {
            out.extend(msg.split("; ").map(|m| format!("params: {m}")));
        }
        let tol = self.tolerances;
        for (name, v) in [
            ("cg", tol.cg),
            ("groundstate", tol.groundstate),
            ("root", tol.root),
            ("fixed_point", tol.fixed_point),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                out.push(format!("tolerances.{name} must be positive, got {v}"));
            }
        }
        // structural hypotheses; the eigenvalue bound is checked with a grid
        match self.perturbation {
            PerturbationConfig::Superlinear {
                lambda,
                lambda_fraction,
                q,
            } => {
                let probe = PerturbationSpec::Superlinear {
                    lambda: lambda.unwrap_or(0.0),
                    q,
                };
                out.extend(probe.violations(self.params.p, None));
                if lambda.is_some() && lambda_fraction.is_some() {
                    out.push("give either lambda or lambda_fraction, not both".into());
                }
                if let Some(f) = lambda_fraction {
                    if !(0.0..1.0).contains(&f) {
                        out.push(format!(
                            "lambda < a*lambda1 requires 0 <= lambda_fraction < 1, got {f}"
                        ));
                    }
                }
            }
            other => {
                if let Ok(spec) = other.resolve(None) {
                    out.extend(spec.violations(self.params.p, None));
                }
            }
        }
        if let Some(sw) = &self.sweep {
            if !SWEEP_VARIABLES.contains(&sw.variable.as_str()) {
                out.push(format!(
                    "sweep variable `{}` is not a config field (expected one of {})",
                    sw.variable,
                    SWEEP_VARIABLES.join(", ")
                ));
            }
            if sw.values.is_empty() {
                out.push("sweep values must not be empty".into());
            }
            if sw.values.iter().any(|v| !v.is_finite()) {
                out.push("sweep values must be finite".into());
            }
            if let Some(ts) = &sw.t_values {
                if ts.iter().any(|t| !(0.0..=1.0).contains(t)) {
                    out.push("sweep t_values must lie in [0, 1]".into());
                }
            }
        }
        if let Some(s) = &self.t_schedule {
            if let Err(Error::Config(m)) = validate_schedule(s) {
                out.push(m);
            }
        }
        if let Some(BranchConfig { s: Some(s) }) = self.branch {
            if !(s > 0.0 && s.is_finite()) {
                out.push(format!("branch.s must be positive, got {s}"));
            }
        }
        if self.output.trim().is_empty() {
            out.push("output prefix must not be empty".into());
        }
        out
    }

    /// Full validation, computing `λ₁(Ω)` on `grid` when the perturbation
    /// needs it. Returns the resolved perturbation and `λ₁`.
    pub fn validate(&self, grid: Option<&Grid>) -> Result<(PerturbationSpec, Option<f64>)> {
        let mut bad = self.static_violations();
        if !bad.is_empty() {
            return Err(Error::Hypothesis(bad));
        }
        let lambda1 = match (self.perturbation.needs_eigenvalue(), grid) {
            (true, Some(g)) => Some(g.smallest_eigenvalue(1e-8)?.lambda),
            _ => None,
        };
        let a_l1 = lambda1.map(|l| self.params.a * l);
        let pert = self.perturbation.resolve(a_l1)?;
        bad.extend(pert.violations(self.params.p, a_l1));
        if bad.is_empty() {
            Ok((pert, lambda1))
        } else {
            Err(Error::Hypothesis(bad))
        }
    }
}
