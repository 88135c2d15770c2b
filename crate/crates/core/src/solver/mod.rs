//! Dirichlet boundary integral equation, volume potentials, the body-force
//! resolvent `(λ + A)^{-1}` and discrete `L^q` norms.
//!
//! The Dirichlet problem `λu − Δu + ∇φ = 0`, `div u = 0`, `u = g` on `∂Ω` is
//! solved with the ansatz `u = D_λ f`, whose interior trace is
//! `(−½I + K̄*_λ) f`. That operator has a one-dimensional kernel and its
//! range is `L²_n`, the data with `∫ g·n = 0`. The Nyström matrix is bordered
//! by the normal column and the row `⟨f, n⟩_W`, which restores a unique solution.

mod polar;
mod resolvent;
mod volume;

#[cfg(test)]
mod tests;

pub use resolvent::{
    gaussian_vortex, level_grids, resolvent_sweep, solve_resolvent, BodyForceSolve, Level, ResolventOperator, SweepDomain, SweepReport,
    SweepRow, SweepSpec,
};
pub use volume::{divergence, gradient, newtonian_potential, GridLayout, VolumeGrid, SOLENOIDAL_TOLERANCE};

use crate::error::{Error, Result};
use crate::geometry::{compatibility_defect, BoundaryMesh, Density};
use crate::kernels::ResolventParameter;
use crate::linalg::{flatten, unflatten};
use crate::potentials::{assemble_kstar, double_layer_pressure, double_layer_velocity};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

/// Default bound on `|∫ g·n| / ∫ |g|`.
pub const DEFAULT_COMPATIBILITY_TOLERANCE: f64 = 1e-6;

/// Velocity and pressure at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FieldSample {
    pub x: [f64; 2],
    pub u: [C64; 2],
    pub phi: C64,
}

/// Dirichlet data on a boundary mesh.
#[derive(Clone, Debug)]
pub struct DirichletProblem<'a> {
    pub mesh: &'a BoundaryMesh,
    pub p: ResolventParameter,
    pub g: Density,
}

/// Density of `u = D_λ f` with the bordering multiplier and the residual of
/// the bordered system. The multiplier measures the part of `g` outside
/// `L²_n` and vanishes for compatible data.
#[derive(Clone, Debug)]
pub struct ResolventSolve<'a> {
    pub mesh: &'a BoundaryMesh,
    pub p: ResolventParameter,
    pub density: Density,
    pub augmented_multiplier: C64,
    pub residual: f64,
}

impl<'a> DirichletProblem<'a> {
    pub fn new(mesh: &'a BoundaryMesh, p: ResolventParameter, g: Density) -> Result<Self> {
        if g.len() != mesh.len() {
            return Err(Error::arg(format!("data has {} entries, mesh has {} nodes", g.len(), mesh.len())));
        }
        Ok(DirichletProblem { mesh, p, g })
    }

    /// `|∫ g·n| / ∫ |g|`, zero for vanishing data.
    pub fn relative_defect(&self) -> Result<f64> {
        let d = compatibility_defect(&self.g, self.mesh)?;
        let s: f64 = self.g.iter().zip(&self.mesh.weights).map(|(v, w)| w * (v[0].norm_sqr() + v[1].norm_sqr()).sqrt()).sum();
        Ok(if s > 0.0 { d / s } else { 0.0 })
    }
}

/// Bordered Nyström matrix `[−½I + K̄*_λ, n; ⟨·, n⟩_W, 0]`.
pub fn bordered_matrix(mesh: &BoundaryMesh, p: &ResolventParameter) -> Result<DMatrix<C64>> {
    let k = assemble_kstar(mesh, p)?;
    let n2 = 2 * mesh.len();
    let mut b = DMatrix::<C64>::zeros(n2 + 1, n2 + 1);
    b.view_mut((0, 0), (n2, n2)).copy_from(&k.entries);
    for i in 0..n2 {
        b[(i, i)] -= C64::new(0.5, 0.0);
        let n = mesh.normals[i / 2][i % 2];
        b[(i, n2)] = C64::new(n, 0.0);
        b[(n2, i)] = C64::new(n * mesh.weights[i / 2], 0.0);
    }
    Ok(b)
}

/// Solves the bordered system for compatible data (relative defect at most
/// `tol`).
pub fn solve_dirichlet<'a>(prob: &DirichletProblem<'a>, tol: f64) -> Result<ResolventSolve<'a>> {
    let defect = prob.relative_defect()?;
    if defect > tol {
        return Err(Error::Incompatible { defect, tol });
    }
    let b = bordered_matrix(prob.mesh, &prob.p)?;
    solve_bordered(prob, &b)
}

/// As [`solve_dirichlet`] with a precomputed [`bordered_matrix`] and no
/// compatibility check.
pub fn solve_bordered<'a>(prob: &DirichletProblem<'a>, b: &DMatrix<C64>) -> Result<ResolventSolve<'a>> {
    BorderedSystem::from_matrix(b.clone())?.solve(prob)
}

/// Bordered matrix with its LU factors, for repeated solves at one `λ`.
pub struct BorderedSystem {
    matrix: DMatrix<C64>,
    lu: nalgebra::LU<C64, nalgebra::Dyn, nalgebra::Dyn>,
}

impl BorderedSystem {
    pub fn new(mesh: &BoundaryMesh, p: &ResolventParameter) -> Result<Self> {
        Self::from_matrix(bordered_matrix(mesh, p)?)
    }

    fn from_matrix(matrix: DMatrix<C64>) -> Result<Self> {
        let lu = matrix.clone().lu();
        if !lu.is_invertible() {
            return Err(Error::LinearSolve(condition_report(&lu)));
        }
        Ok(BorderedSystem { matrix, lu })
    }

    /// Solves with the data of `prob`; no compatibility check.
    pub fn solve<'a>(&self, prob: &DirichletProblem<'a>) -> Result<ResolventSolve<'a>> {
        let n2 = 2 * prob.mesh.len();
        if self.matrix.nrows() != n2 + 1 {
            return Err(Error::arg("bordered matrix does not match the mesh"));
        }
        let g = flatten(&prob.g);
        let mut rhs = DVector::<C64>::zeros(n2 + 1);
        rhs.rows_mut(0, n2).copy_from(&g);
        let x = self.lu.solve(&rhs).ok_or_else(|| Error::LinearSolve(condition_report(&self.lu)))?;
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::LinearSolve(condition_report(&self.lu)));
        }
        let r = &self.matrix * &x - &rhs;
        let scale = rhs.norm();
        let density = unflatten(&x.rows(0, n2).into_owned());
        Ok(ResolventSolve {
            mesh: prob.mesh,
            p: prob.p,
            density,
            augmented_multiplier: x[n2],
            residual: if scale > 0.0 { r.norm() / scale } else { r.norm() },
        })
    }
}

fn condition_report(lu: &nalgebra::LU<C64, nalgebra::Dyn, nalgebra::Dyn>) -> String {
    let u = lu.u();
    let d: Vec<f64> = u.diagonal().iter().map(|v| v.norm()).collect();
    let mx = d.iter().cloned().fold(0.0, f64::max);
    let mn = d.iter().cloned().fold(f64::INFINITY, f64::min);
    format!("bordered matrix is numerically singular (min/max |U_ii| = {:.3e})", mn / mx)
}

impl ResolventSolve<'_> {
    /// `u = D_λ f` and `φ = D_Φ f` at targets off the boundary.
    pub fn evaluate(&self, targets: &[[f64; 2]]) -> Result<Vec<FieldSample>> {
        let u = double_layer_velocity(&self.density, self.mesh, &self.p, targets)?;
        let phi = double_layer_pressure(&self.density, self.mesh, &self.p, targets)?;
        Ok(targets.iter().zip(u).zip(phi).map(|((&x, u), phi)| FieldSample { x, u, phi }).collect())
    }

    /// [`Self::evaluate`] on the inside points of a volume grid, with the
    /// pressure shifted to zero weighted mean. Points outside get zeros.
    pub fn evaluate_on_grid(&self, grid: &VolumeGrid) -> Result<Vec<FieldSample>> {
        let idx = grid.inside_indices();
        let pts: Vec<[f64; 2]> = idx.iter().map(|&i| grid.points[i]).collect();
        let vals = self.evaluate(&pts)?;
        let mut out: Vec<FieldSample> =
            grid.points.iter().map(|&x| FieldSample { x, u: [C64::new(0.0, 0.0); 2], phi: C64::new(0.0, 0.0) }).collect();
        for (&i, v) in idx.iter().zip(vals) {
            out[i] = v;
        }
        normalize_pressure(&mut out, grid);
        Ok(out)
    }
}

/// Shifts the pressure to zero weighted mean over the grid.
pub fn normalize_pressure(samples: &mut [FieldSample], grid: &VolumeGrid) {
    let (mut s, mut w) = (C64::new(0.0, 0.0), 0.0);
    for (v, &wi) in samples.iter().zip(&grid.weights) {
        s += v.phi * wi;
        w += wi;
    }
    if w > 0.0 {
        let mean = s / w;
        for (v, &wi) in samples.iter_mut().zip(&grid.weights) {
            if wi > 0.0 {
                v.phi -= mean;
            }
        }
    }
}

/// `(Σ w |v|^q)^{1/q}` with `|v|` the Euclidean norm of each value, or the
/// maximum over positive-weight points for `q = ∞`.
pub fn discrete_norm(values: &[[C64; 2]], weights: &[f64], q: f64) -> Result<f64> {
    if values.len() != weights.len() {
        return Err(Error::arg("values and weights differ in length"));
    }
    if !(q >= 1.0) {
        return Err(Error::arg(format!("exponent q = {q} must be at least 1")));
    }
    let mags = values.iter().zip(weights).filter(|(_, w)| **w > 0.0).map(|(v, w)| ((v[0].norm_sqr() + v[1].norm_sqr()).sqrt(), *w));
    if q.is_infinite() {
        return Ok(mags.map(|(m, _)| m).fold(0.0, f64::max));
    }
    Ok(mags.map(|(m, w)| w * m.powf(q)).sum::<f64>().powf(1.0 / q))
}
