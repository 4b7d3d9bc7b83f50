//! Finite-difference discretization of 2-D Dirichlet domains.
//!
//! Rectangles use the 5-point stencil on a uniform Cartesian mesh. Disks are
//! reduced to radially symmetric functions and discretized with a
//! finite-volume form of `-(1/r)(r v')'`, which keeps the operator symmetric
//! with respect to the quadrature weights. In both cases
//! `sum_i w_i (-Δ_h f)_i f_i` equals [`Grid::grad_sq`] to round-off.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MIN_RESOLUTION: usize = 16;
pub const DEFAULT_CG_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum Shape {
    Rectangle { width: f64, height: f64 },
    Disk { radius: f64 },
}

/// Domain shape plus mesh resolution (cells per side, or radial nodes).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DomainSpec {
    #[serde(flatten)]
    pub shape: Shape,
    pub resolution: usize,
}

impl DomainSpec {
    pub fn rectangle(width: f64, height: f64, resolution: usize) -> Self {
        DomainSpec {
            shape: Shape::Rectangle { width, height },
            resolution,
        }
    }

    pub fn unit_square(resolution: usize) -> Self {
        Self::rectangle(1.0, 1.0, resolution)
    }

    pub fn disk(radius: f64, resolution: usize) -> Self {
        DomainSpec {
            shape: Shape::Disk { radius },
            resolution,
        }
    }

    pub fn with_resolution(self, resolution: usize) -> Self {
        DomainSpec { resolution, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match self.shape {
            Shape::Rectangle { width, height } => {
                width > 0.0 && height > 0.0 && width.is_finite() && height.is_finite()
            }
            Shape::Disk { radius } => radius > 0.0 && radius.is_finite(),
        };
        if !ok {
            return Err(Error::Config(format!(
                "domain extents must be positive and finite: {:?}",
                self.shape
            )));
        }
        if self.resolution < MIN_RESOLUTION {
            return Err(Error::Config(format!(
                "resolution {} is below the minimum {MIN_RESOLUTION}",
                self.resolution
            )));
        }
        Ok(())
    }
}

/// A grid function on the interior nodes; boundary values are implicitly zero.
#[derive(Clone, Debug, PartialEq)]
pub struct Field {
    values: Vec<f64>,
    domain: DomainSpec,
}

impl Field {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn domain(&self) -> &DomainSpec {
        &self.domain
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Field {
        Field {
            values: self.values.iter().map(|&x| f(x)).collect(),
            domain: self.domain,
        }
    }

    pub fn scaled(&self, c: f64) -> Field {
        self.map(|x| c * x)
    }

    /// Pointwise `|f|^{p-1} f`.
    pub fn signed_pow(&self, p: f64) -> Field {
        self.map(|x| x.abs().powf(p).copysign(x))
    }

    pub fn sup(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// `max_i |self_i - other_i|`.
    pub fn sup_distance(&self, other: &Field) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()))
    }

    pub fn zip_with(&self, other: &Field, f: impl Fn(f64, f64) -> f64) -> Field {
        Field {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
            domain: self.domain,
        }
    }
}

#[derive(Clone, Copy, Debug)]
enum Mesh {
    Cartesian {
        nx: usize,
        ny: usize,
        hx: f64,
        hy: f64,
    },
    Radial {
        n: usize,
        dr: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Norms {
    pub l2: f64,
    pub lq: f64,
    pub q: f64,
    pub sup: f64,
    pub grad_l2: f64,
}

#[derive(Clone, Debug)]
pub struct PoissonSolution {
    pub field: Field,
    pub iterations: usize,
    /// Relative residual `||-Δ_h w - rhs||_2 / ||rhs||_2`.
    pub residual: f64,
}

#[derive(Clone, Debug)]
pub struct Eigenpair {
    pub lambda: f64,
    pub phi: Field,
    pub residual: f64,
    pub iterations: usize,
}

#[derive(Clone, Debug)]
pub struct Grid {
    spec: DomainSpec,
    mesh: Mesh,
    weights: Vec<f64>,
}

pub fn build_domain(spec: DomainSpec) -> Result<Grid> {
    Grid::new(spec)
}

impl Grid {
    pub fn new(spec: DomainSpec) -> Result<Grid> {
        spec.validate()?;
        let n = spec.resolution;
        let (mesh, weights) = match spec.shape {
            Shape::Rectangle { width, height } => {
                let hx = width / n as f64;
                let hy = height / n as f64;
                let (nx, ny) = (n - 1, n - 1);
                (Mesh::Cartesian { nx, ny, hx, hy }, vec![hx * hy; nx * ny])
            }
            Shape::Disk { radius } => {
                let dr = radius / n as f64;
                // Node 0 owns the disk of radius dr/2; node i >= 1 owns the
                // annulus [r_i - dr/2, r_i + dr/2].
                let weights = (0..n)
                    .map(|i| {
                        if i == 0 {
                            PI * dr * dr / 4.0
                        } else {
                            2.0 * PI * (i as f64 * dr) * dr
                        }
                    })
                    .collect();
                (Mesh::Radial { n, dr }, weights)
            }
        };
        Ok(Grid {
            spec,
            mesh,
            weights,
        })
    }

    pub fn spec(&self) -> &DomainSpec {
        &self.spec
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn is_radial(&self) -> bool {
        matches!(self.mesh, Mesh::Radial { .. })
    }

    /// Interior node counts per axis; radial grids report `(n, 1)`.
    pub fn shape(&self) -> (usize, usize) {
        match self.mesh {
            Mesh::Cartesian { nx, ny, .. } => (nx, ny),
            Mesh::Radial { n, .. } => (n, 1),
        }
    }

    /// Mesh spacing along the first axis (`h` or `dr`).
    pub fn spacing(&self) -> f64 {
        match self.mesh {
            Mesh::Cartesian { hx, .. } => hx,
            Mesh::Radial { dr, .. } => dr,
        }
    }

    /// Coordinates of node `k`; radial nodes report `(r, 0)`.
    pub fn coords(&self, k: usize) -> (f64, f64) {
        match self.mesh {
            Mesh::Cartesian { nx, hx, hy, .. } => {
                let i = k % nx;
                let j = k / nx;
                ((i + 1) as f64 * hx, (j + 1) as f64 * hy)
            }
            Mesh::Radial { dr, .. } => (k as f64 * dr, 0.0),
        }
    }

    pub fn field(&self, values: Vec<f64>) -> Result<Field> {
        if values.len() != self.len() {
            return Err(Error::Dimension {
                expected: self.len(),
                found: values.len(),
            });
        }
        Ok(Field {
            values,
            domain: self.spec,
        })
    }

    pub fn zeros(&self) -> Field {
        self.constant(0.0)
    }

    pub fn constant(&self, c: f64) -> Field {
        Field {
            values: vec![c; self.len()],
            domain: self.spec,
        }
    }

    pub fn field_from_fn(&self, f: impl Fn(f64, f64) -> f64) -> Field {
        Field {
            values: (0..self.len())
                .map(|k| {
                    let (x, y) = self.coords(k);
                    f(x, y)
                })
                .collect(),
            domain: self.spec,
        }
    }

    pub fn check(&self, f: &Field) -> Result<()> {
        if f.domain != self.spec || f.values.len() != self.len() {
            return Err(Error::Dimension {
                expected: self.len(),
                found: f.values.len(),
            });
        }
        Ok(())
    }

    /// Weighted inner product `sum_i w_i f_i g_i`.
    pub fn dot(&self, f: &[f64], g: &[f64]) -> f64 {
        self.weights
            .iter()
            .zip(f.iter().zip(g))
            .map(|(w, (a, b))| w * a * b)
            .sum()
    }

    pub fn l2_norm(&self, f: &Field) -> f64 {
        self.dot(&f.values, &f.values).sqrt()
    }

    pub fn lq_norm(&self, f: &Field, q: f64) -> f64 {
        let s: f64 = self
            .weights
            .iter()
            .zip(&f.values)
            .map(|(w, x)| w * x.abs().powf(q))
            .sum();
        s.powf(1.0 / q)
    }

    /// `sum_i w_i |f_i|^q` without the outer root.
    pub fn integral_abs_pow(&self, f: &Field, q: f64) -> f64 {
        self.weights
            .iter()
            .zip(&f.values)
            .map(|(w, x)| w * x.abs().powf(q))
            .sum()
    }

    /// Squared discrete Dirichlet energy, a sum of squared edge differences.
    pub fn grad_sq(&self, f: &Field) -> f64 {
        let v = &f.values;
        match self.mesh {
            Mesh::Cartesian { nx, ny, hx, hy } => {
                let cx = hy / hx;
                let cy = hx / hy;
                let mut sx = 0.0;
                let mut sy = 0.0;
                for j in 0..ny {
                    let row = &v[j * nx..(j + 1) * nx];
                    // west boundary edge, interior edges, east boundary edge
                    sx += row[0] * row[0] + row[nx - 1] * row[nx - 1];
                    for i in 0..nx - 1 {
                        let d = row[i + 1] - row[i];
                        sx += d * d;
                    }
                }
                for i in 0..nx {
                    sy += v[i] * v[i] + v[(ny - 1) * nx + i] * v[(ny - 1) * nx + i];
                    for j in 0..ny - 1 {
                        let d = v[(j + 1) * nx + i] - v[j * nx + i];
                        sy += d * d;
                    }
                }
                cx * sx + cy * sy
            }
            Mesh::Radial { n, dr } => {
                let mut s = 0.0;
                for i in 0..n {
                    let next = if i + 1 < n { v[i + 1] } else { 0.0 };
                    let d = next - v[i];
                    s += 2.0 * PI * (i as f64 + 0.5) * dr * d * d / dr;
                }
                s
            }
        }
    }

    pub fn norms(&self, f: &Field, q: f64) -> Result<Norms> {
        self.check(f)?;
        if q <= 0.0 {
            return Err(Error::Domain(format!(
                "norm exponent q = {q} must be positive"
            )));
        }
        Ok(Norms {
            l2: self.l2_norm(f),
            lq: self.lq_norm(f, q),
            q,
            sup: f.sup(),
            grad_l2: self.grad_sq(f).sqrt(),
        })
    }

    /// Pointwise `|∇_h f|^2` from centered differences, using the zero
    /// Dirichlet values as neighbours next to the boundary.
    pub fn gradient_sq_pointwise(&self, f: &Field) -> Vec<f64> {
        let v = &f.values;
        match self.mesh {
            Mesh::Cartesian { nx, ny, hx, hy } => {
                let at = |i: isize, j: isize| -> f64 {
                    if i < 0 || j < 0 || i >= nx as isize || j >= ny as isize {
                        0.0
                    } else {
                        v[j as usize * nx + i as usize]
                    }
                };
                let mut out = Vec::with_capacity(nx * ny);
                for j in 0..ny as isize {
                    for i in 0..nx as isize {
                        let gx = (at(i + 1, j) - at(i - 1, j)) / (2.0 * hx);
                        let gy = (at(i, j + 1) - at(i, j - 1)) / (2.0 * hy);
                        out.push(gx * gx + gy * gy);
                    }
                }
                out
            }
            Mesh::Radial { n, dr } => (0..n)
                .map(|i| {
                    if i == 0 {
                        return 0.0;
                    }
                    let next = if i + 1 < n { v[i + 1] } else { 0.0 };
                    let g = (next - v[i - 1]) / (2.0 * dr);
                    g * g
                })
                .collect(),
        }
    }

    fn neg_laplacian_into(&self, v: &[f64], out: &mut [f64]) {
        match self.mesh {
            Mesh::Cartesian { nx, ny, hx, hy } => {
                let ix2 = 1.0 / (hx * hx);
                let iy2 = 1.0 / (hy * hy);
                for j in 0..ny {
                    for i in 0..nx {
                        let k = j * nx + i;
                        let c = v[k];
                        let w = if i > 0 { v[k - 1] } else { 0.0 };
                        let e = if i + 1 < nx { v[k + 1] } else { 0.0 };
                        let s = if j > 0 { v[k - nx] } else { 0.0 };
                        let nn = if j + 1 < ny { v[k + nx] } else { 0.0 };
                        out[k] = (2.0 * c - w - e) * ix2 + (2.0 * c - s - nn) * iy2;
                    }
                }
            }
            Mesh::Radial { n, dr } => {
                let idr2 = 1.0 / (dr * dr);
                out[0] = 4.0 * (v[0] - if n > 1 { v[1] } else { 0.0 }) * idr2;
                for i in 1..n {
                    let (lo, di, up) = radial_row(i, dr);
                    let next = if i + 1 < n { v[i + 1] } else { 0.0 };
                    out[i] = lo * v[i - 1] + di * v[i] + up * next;
                }
            }
        }
    }

    /// Discrete `-Δ_h f` with zero Dirichlet values.
    pub fn apply_laplacian(&self, f: &Field) -> Result<Field> {
        self.check(f)?;
        let mut out = vec![0.0; self.len()];
        self.neg_laplacian_into(&f.values, &mut out);
        Ok(Field {
            values: out,
            domain: self.spec,
        })
    }

    pub fn cg_iteration_cap(&self) -> usize {
        50 * (self.len() as f64).sqrt().ceil() as usize + 1000
    }

    /// Solves `-Δ_h w = rhs`.
    pub fn solve_poisson(&self, rhs: &Field, tol: f64) -> Result<Field> {
        Ok(self.solve_poisson_from(rhs, None, tol)?.field)
    }

    /// Solves `-Δ_h w = rhs` starting from an optional initial guess.
    ///
    /// Rectangles use conjugate gradients in the weighted inner product.
    /// Radial grids are tridiagonal and are solved by direct elimination.
    pub fn solve_poisson_from(
        &self,
        rhs: &Field,
        guess: Option<&Field>,
        tol: f64,
    ) -> Result<PoissonSolution> {
        self.check(rhs)?;
        if !(tol > 0.0) {
            return Err(Error::Domain(format!("tolerance {tol} must be positive")));
        }
        match self.mesh {
            Mesh::Radial { .. } => {
                let field = self.field(self.radial_direct(&rhs.values))?;
                let residual = self.relative_residual(&field, rhs);
                Ok(PoissonSolution {
                    field,
                    iterations: 1,
                    residual,
                })
            }
            Mesh::Cartesian { .. } => self.solve_poisson_cg(rhs, guess, tol),
        }
    }

    /// Conjugate-gradient Poisson solve, available on every grid type.
    pub fn solve_poisson_cg(
        &self,
        rhs: &Field,
        guess: Option<&Field>,
        tol: f64,
    ) -> Result<PoissonSolution> {
        self.check(rhs)?;
        let n = self.len();
        let b = &rhs.values;
        let bnorm = self.dot(b, b).sqrt();
        if bnorm == 0.0 {
            return Ok(PoissonSolution {
                field: self.zeros(),
                iterations: 0,
                residual: 0.0,
            });
        }
        let mut x = match guess {
            Some(g) => {
                self.check(g)?;
                g.values.clone()
            }
            None => vec![0.0; n],
        };
        let target = tol * bnorm;
        let cap = self.cg_iteration_cap();
        let mut ax = vec![0.0; n];
        let mut r = vec![0.0; n];
        let mut ad = vec![0.0; n];
        let mut it = 0;
        let mut last_true = f64::INFINITY;
        // Restart from the true residual until it meets the target or stops
        // improving (round-off floor).
        loop {
            self.neg_laplacian_into(&x, &mut ax);
            for k in 0..n {
                r[k] = b[k] - ax[k];
            }
            let mut rr = self.dot(&r, &r);
            let true_res = rr.sqrt();
            if true_res <= target || true_res > 0.5 * last_true {
                break;
            }
            last_true = true_res;
            let mut d = r.clone();
            while rr.sqrt() > target {
                if it >= cap {
                    return Err(Error::Convergence {
                        what: "conjugate gradient",
                        iterations: it,
                        residual: rr.sqrt() / bnorm,
                    });
                }
                self.neg_laplacian_into(&d, &mut ad);
                let step = rr / self.dot(&d, &ad);
                for k in 0..n {
                    x[k] += step * d[k];
                    r[k] -= step * ad[k];
                }
                let rr_new = self.dot(&r, &r);
                let beta = rr_new / rr;
                rr = rr_new;
                for k in 0..n {
                    d[k] = r[k] + beta * d[k];
                }
                it += 1;
            }
        }
        let field = self.field(x)?;
        let residual = self.relative_residual(&field, rhs);
        Ok(PoissonSolution {
            field,
            iterations: it,
            residual,
        })
    }

    fn relative_residual(&self, w: &Field, rhs: &Field) -> f64 {
        let mut aw = vec![0.0; self.len()];
        self.neg_laplacian_into(&w.values, &mut aw);
        let r: Vec<f64> = aw.iter().zip(&rhs.values).map(|(a, b)| a - b).collect();
        let bnorm = self.l2_norm(rhs);
        if bnorm == 0.0 {
            self.dot(&r, &r).sqrt()
        } else {
            self.dot(&r, &r).sqrt() / bnorm
        }
    }

    fn radial_direct(&self, rhs: &[f64]) -> Vec<f64> {
        let Mesh::Radial { n, dr } = self.mesh else {
            unreachable!("radial solve on a Cartesian mesh")
        };
        let idr2 = 1.0 / (dr * dr);
        let mut lower = vec![0.0; n];
        let mut diag = vec![0.0; n];
        let mut upper = vec![0.0; n];
        diag[0] = 4.0 * idr2;
        upper[0] = -4.0 * idr2;
        for i in 1..n {
            let (lo, di, up) = radial_row(i, dr);
            lower[i] = lo;
            diag[i] = di;
            upper[i] = up;
        }
        // Thomas algorithm; the matrix is an irreducibly diagonally dominant M-matrix.
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        c[0] = upper[0] / diag[0];
        d[0] = rhs[0] / diag[0];
        for i in 1..n {
            let m = diag[i] - lower[i] * c[i - 1];
            c[i] = upper[i] / m;
            d[i] = (rhs[i] - lower[i] * d[i - 1]) / m;
        }
        let mut x = vec![0.0; n];
        x[n - 1] = d[n - 1];
        for i in (0..n - 1).rev() {
            x[i] = d[i] - c[i] * x[i + 1];
        }
        x
    }

    /// Principal Dirichlet eigenpair by inverse power iteration.
    ///
    /// `phi` is positive and normalized to `sup phi = 1`; the returned
    /// residual is `||-Δ_h phi - lambda phi||_2`.
    pub fn smallest_eigenvalue(&self, tol: f64) -> Result<Eigenpair> {
        if !(tol > 0.0) {
            return Err(Error::Domain(format!("tolerance {tol} must be positive")));
        }
        let cg_tol = (tol * 1e-3).clamp(1e-14, 1e-10);
        let mut phi = self.constant(1.0);
        let mut guess: Option<Field> = None;
        let max_iter = 500;
        let mut residual = f64::INFINITY;
        for it in 0..max_iter {
            let sol = self.solve_poisson_from(&phi, guess.as_ref(), cg_tol)?;
            let next = sol.field;
            let s = next.sup();
            phi = next.scaled(1.0 / s);
            guess = Some(phi.scaled(1.0 / s));
            let aphi = self.apply_laplacian(&phi)?;
            let lambda = self.dot(&aphi.values, &phi.values) / self.dot(&phi.values, &phi.values);
            let r = aphi.zip_with(&phi, |a, f| a - lambda * f);
            residual = self.l2_norm(&r);
            if residual <= tol {
                if phi.min() <= 0.0 {
                    return Err(Error::NonPositive("principal eigenfunction"));
                }
                return Ok(Eigenpair {
                    lambda,
                    phi,
                    residual,
                    iterations: it + 1,
                });
            }
        }
        Err(Error::Convergence {
            what: "inverse power iteration",
            iterations: max_iter,
            residual,
        })
    }
}

/// Row `i >= 1` of the radial operator as (lower, diagonal, upper).
fn radial_row(i: usize, dr: f64) -> (f64, f64, f64) {
    let r = i as f64 * dr;
    let idr2 = 1.0 / (dr * dr);
    (
        -(r - 0.5 * dr) / r * idr2,
        2.0 * idr2,
        -(r + 0.5 * dr) / r * idr2,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square(n: usize) -> Grid {
        Grid::new(DomainSpec::unit_square(n)).unwrap()
    }

    #[test]
    fn rectangle_mesh_arithmetic() {
        let g = square(64);
        assert_eq!(g.shape(), (63, 63));
        assert_eq!(g.len(), 63 * 63);
        assert_eq!(g.spacing(), 1.0 / 64.0);
    }

    #[test]
    fn disk_mesh_arithmetic() {
        let g = Grid::new(DomainSpec::disk(1.0, 256)).unwrap();
        assert_eq!(g.len(), 256);
        assert_eq!(g.spacing(), 1.0 / 256.0);
        // weights integrate to the disk area minus the outer half-annulus
        let area: f64 = g.weights().iter().sum();
        let dr: f64 = 1.0 / 256.0;
        let expected = PI * (1.0 - 0.5 * dr).powi(2);
        assert!((area - expected).abs() < 1e-12);
    }

    #[test]
    fn resolution_below_minimum_rejected() {
        assert!(matches!(
            Grid::new(DomainSpec::unit_square(8)),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            Grid::new(DomainSpec::disk(-1.0, 64)),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn laplacian_of_zero_is_zero() {
        for g in [square(16), Grid::new(DomainSpec::disk(1.0, 32)).unwrap()] {
            let z = g.apply_laplacian(&g.zeros()).unwrap();
            assert!(z.values().iter().all(|&x| x == 0.0));
        }
    }

    #[test]
    fn mismatched_field_is_rejected() {
        let a = square(16);
        let b = square(32);
        assert!(matches!(
            a.apply_laplacian(&b.zeros()),
            Err(Error::Dimension { .. })
        ));
        assert!(a.field(vec![0.0; 3]).is_err());
    }

    #[test]
    fn manufactured_laplacian_is_second_order() {
        let g = square(64);
        let f = g.field_from_fn(|x, y| (PI * x).sin() * (PI * y).sin());
        let lf = g.apply_laplacian(&f).unwrap();
        let err = lf.zip_with(&f, |a, b| a - 2.0 * PI * PI * b).sup();
        // stencil eigenvalue error: 2π² (π h)²/12 for each direction
        let h = 1.0 / 64.0;
        assert!(err < 2.0 * PI * PI * (PI * h).powi(2) / 6.0);
    }

    #[test]
    fn poisson_zero_rhs() {
        let g = square(16);
        let w = g.solve_poisson(&g.zeros(), 1e-10).unwrap();
        assert!(w.values().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn poisson_residual_meets_tolerance() {
        let g = Grid::new(DomainSpec::rectangle(1.0, 2.0, 32)).unwrap();
        let rhs = g.field_from_fn(|x, y| 1.0 + x * y);
        let sol = g.solve_poisson_from(&rhs, None, 1e-10).unwrap();
        assert!(sol.residual <= 1e-10, "residual {}", sol.residual);
    }

    #[test]
    fn radial_direct_matches_cg() {
        let g = Grid::new(DomainSpec::disk(1.0, 64)).unwrap();
        let rhs = g.field_from_fn(|r, _| 1.0 + r * r);
        let direct = g.solve_poisson(&rhs, 1e-12).unwrap();
        let cg = g.solve_poisson_cg(&rhs, None, 1e-12).unwrap();
        assert!(direct.sup_distance(&cg.field) < 1e-9 * direct.sup());
    }

    #[test]
    fn radial_constant_source_matches_exact_profile() {
        // -Δu = 1 on the unit disk: u = (1 - r²)/4, reproduced up to O(dr²)
        let g = Grid::new(DomainSpec::disk(1.0, 128)).unwrap();
        let u = g.solve_poisson(&g.constant(1.0), 1e-12).unwrap();
        let exact = g.field_from_fn(|r, _| (1.0 - r * r) / 4.0);
        assert!(u.sup_distance(&exact) < 1e-4);
    }

    #[test]
    fn integration_by_parts_is_exact() {
        for g in [
            Grid::new(DomainSpec::rectangle(1.0, 0.5, 24)).unwrap(),
            Grid::new(DomainSpec::disk(2.0, 40)).unwrap(),
        ] {
            let f = g.field_from_fn(|x, y| (3.0 * x + 1.0).sin() + y * y - 0.3);
            let lf = g.apply_laplacian(&f).unwrap();
            let lhs = g.dot(lf.values(), f.values());
            let rhs = g.grad_sq(&f);
            assert!((lhs - rhs).abs() <= 1e-11 * rhs.abs(), "{lhs} vs {rhs}");
        }
    }

    #[test]
    fn norms_of_constant_field() {
        let g = square(16);
        let f = g.constant(-2.5);
        let n = g.norms(&f, 3.0).unwrap();
        assert_eq!(n.sup, 2.5);
        let z = g.norms(&g.zeros(), 2.0).unwrap();
        assert_eq!((z.l2, z.lq, z.sup, z.grad_l2), (0.0, 0.0, 0.0, 0.0));
        assert!(g.norms(&f, 0.0).is_err());
    }

    #[test]
    fn eigenpair_of_unit_square() {
        let g = square(32);
        let e = g.smallest_eigenvalue(1e-8).unwrap();
        let h = 1.0 / 32.0;
        let exact_discrete = 2.0 * 4.0 / (h * h) * (PI * h / 2.0).sin().powi(2);
        assert!((e.lambda - exact_discrete).abs() < 1e-8 * exact_discrete);
        assert!((e.lambda - 2.0 * PI * PI).abs() < 0.01 * 2.0 * PI * PI);
        assert!(e.phi.min() > 0.0);
        assert!((e.phi.sup() - 1.0).abs() < 1e-15);
        let lphi = g.apply_laplacian(&e.phi).unwrap();
        let r = lphi.zip_with(&e.phi, |a, b| a - e.lambda * b);
        assert!(g.l2_norm(&r) <= 1e-8);
    }

    #[test]
    fn eigenvalue_scales_with_domain() {
        let small = square(32).smallest_eigenvalue(1e-9).unwrap().lambda;
        let big = Grid::new(DomainSpec::rectangle(2.0, 2.0, 32))
            .unwrap()
            .smallest_eigenvalue(1e-9)
            .unwrap()
            .lambda;
        assert!(big < small);
        assert!((small / big - 4.0).abs() < 1e-8);
    }
}
