//! Single and double layer potentials, the boundary operators `K_λ` and
//! `K̄*_λ`, and jump measurements.
//!
//! With `n` the outward normal, densities `f` and tacit summation:
//!
//! ```text
//! (S_λ f)_j(x) = ∫ Γ_jk(x − y; λ) f_k(y) dσ(y)
//! (S_Φ f)(x)   = ∫ Φ_k(x − y) f_k(y) dσ(y)
//! (D_λ f)_j(x) = ∫ { ∂_iΓ_jk(y − x; λ) n_i(y) − Φ_j(y − x) n_k(y) } f_k(y) dσ(y)
//! (D_Φ f)(x)   = ∫ { ∂_i∂_k G(y − x; 0) n_i(y) + λ G(y − x; 0) n_k(y) } f_k(y) dσ(y)
//! (K_λ f)_j(x) = p.v. ∫ { ∂_iΓ_jk(x − y; λ) n_i(x) − Φ_k(x − y) n_j(x) } f_k(y) dσ(y)
//! ```
//!
//! `K̄*_λ`, the adjoint of `K_λ̄`, has the `D_λ` kernel. Interior limits are
//! `(D_λ f)_+ = (−½ + K̄*_λ) f` and `∂_ν(S_λ f, S_Φ f)_± = (±½ + K_λ) f`.

pub mod jump;
pub mod quad;

use crate::error::{Error, Result};
use crate::geometry::{BoundaryMesh, Density};
use crate::kernels::tensor::radial_hess;
use crate::kernels::{grad_stokeslet, laplace_radial, pressure0, stokeslet, ResolventParameter};
use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use quad::{Block, PanelQuadrature};
use rayon::prelude::*;
use std::f64::consts::PI;

const Z: C64 = C64 { re: 0.0, im: 0.0 };

fn c(v: f64) -> C64 {
    C64::new(v, 0.0)
}

pub(crate) fn check_density(f: &Density, mesh: &BoundaryMesh) -> Result<()> {
    if f.len() != mesh.len() {
        return Err(Error::arg(format!("density has {} entries, mesh has {} nodes", f.len(), mesh.len())));
    }
    if f.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::arg("density has non-finite entries"));
    }
    Ok(())
}

// Kernels as closures of the displacement `z = x − y` and the source normal.

pub(crate) fn sv_kernel(p: ResolventParameter) -> impl Fn([f64; 2], [f64; 2]) -> Result<Block<2>> {
    move |z, _| Ok(stokeslet(z, &p)?.value)
}

/// Rows `2j + l` hold `∂_l Γ_jk(x − y)`.
pub(crate) fn sgrad_kernel(p: ResolventParameter) -> impl Fn([f64; 2], [f64; 2]) -> Result<Block<4>> {
    move |z, _| {
        let t = grad_stokeslet(z, &p)?.value;
        let mut b = [[Z; 2]; 4];
        for j in 0..2 {
            for l in 0..2 {
                for k in 0..2 {
                    b[2 * j + l][k] = t[j][k][l];
                }
            }
        }
        Ok(b)
    }
}

pub(crate) fn sp_kernel() -> impl Fn([f64; 2], [f64; 2]) -> Result<Block<1>> {
    move |z, _| {
        let ph = pressure0(z, crate::kernels::displacement_norm(z)?);
        Ok([[c(ph[0]), c(ph[1])]])
    }
}

pub(crate) fn dv_kernel(p: ResolventParameter) -> impl Fn([f64; 2], [f64; 2]) -> Result<Block<2>> {
    move |zx, n| {
        let z = [-zx[0], -zx[1]];
        let t = grad_stokeslet(z, &p)?.value;
        let ph = pressure0(z, crate::kernels::displacement_norm(z)?);
        let mut b = [[Z; 2]; 2];
        for j in 0..2 {
            for k in 0..2 {
                b[j][k] = t[j][k][0] * n[0] + t[j][k][1] * n[1] - ph[j] * n[k];
            }
        }
        Ok(b)
    }
}

pub(crate) fn dp_kernel(p: ResolventParameter) -> impl Fn([f64; 2], [f64; 2]) -> Result<Block<1>> {
    move |zx, n| {
        let z = [-zx[0], -zx[1]];
        let r = crate::kernels::displacement_norm(z)?;
        let g = laplace_radial(r);
        let h = radial_hess(z, r, c(g[1]), c(g[2]));
        let mut b = [[Z; 2]; 1];
        for k in 0..2 {
            b[0][k] = h[0][k] * n[0] + h[1][k] * n[1] + p.lambda * (g[0] * n[k]);
        }
        Ok(b)
    }
}

/// `K_λ` kernel at a boundary target `x` with normal `nx`.
pub(crate) fn k_kernel(nx: [f64; 2], p: ResolventParameter) -> impl Fn([f64; 2], [f64; 2]) -> Result<Block<2>> {
    move |z, _| {
        let t = grad_stokeslet(z, &p)?.value;
        let ph = pressure0(z, crate::kernels::displacement_norm(z)?);
        let mut b = [[Z; 2]; 2];
        for j in 0..2 {
            for k in 0..2 {
                b[j][k] = t[j][k][0] * nx[0] + t[j][k][1] * nx[1] - ph[k] * nx[j];
            }
        }
        Ok(b)
    }
}

/// Cauchy residue shared by the `K_λ` and `D_λ` kernels: `(1/4π)(n⊗t − t⊗n)`.
pub(crate) fn stokes_residue() -> Block<2> {
    let q = 1.0 / (4.0 * PI);
    [[Z, c(q)], [c(-q), Z]]
}

/// Cauchy residue of the `S_Φ` kernel at a node with outward normal `n`.
pub(crate) fn pressure_residue(n: [f64; 2]) -> Block<1> {
    let t = [-n[1], n[0]];
    let q = -1.0 / (2.0 * PI);
    [[c(q * t[0]), c(q * t[1])]]
}

fn evaluate<const R: usize, K>(f: &Density, mesh: &BoundaryMesh, targets: &[[f64; 2]], k: Option<C64>, kernel: K) -> Result<Vec<[C64; R]>>
where
    K: Fn([f64; 2], [f64; 2]) -> Result<Block<R>> + Sync,
{
    check_density(f, mesh)?;
    let mut q = PanelQuadrature::new(mesh);
    if let Some(k) = k {
        q = q.with_wavenumber(k);
    }
    targets.par_iter().map(|&x| q.apply(x, None, &kernel, None, f)).collect()
}

/// `S_λ f` at off-boundary targets.
pub fn single_layer_velocity(f: &Density, mesh: &BoundaryMesh, p: &ResolventParameter, targets: &[[f64; 2]]) -> Result<Vec<[C64; 2]>> {
    let p = *p;
    evaluate(f, mesh, targets, Some(p.k), sv_kernel(p))
}

/// `∇S_λ f` at off-boundary targets as `[i][j] = ∂_j u_i`.
pub fn single_layer_gradient(f: &Density, mesh: &BoundaryMesh, p: &ResolventParameter, targets: &[[f64; 2]]) -> Result<Vec<[[C64; 2]; 2]>> {
    let p = *p;
    let v = evaluate(f, mesh, targets, Some(p.k), sgrad_kernel(p))?;
    Ok(v.into_iter().map(|g| [[g[0], g[1]], [g[2], g[3]]]).collect())
}

/// `S_Φ f` at off-boundary targets.
pub fn single_layer_pressure(f: &Density, mesh: &BoundaryMesh, targets: &[[f64; 2]]) -> Result<Vec<C64>> {
    Ok(evaluate(f, mesh, targets, None, sp_kernel())?.into_iter().map(|v| v[0]).collect())
}

/// `D_λ f` at off-boundary targets.
pub fn double_layer_velocity(f: &Density, mesh: &BoundaryMesh, p: &ResolventParameter, targets: &[[f64; 2]]) -> Result<Vec<[C64; 2]>> {
    let p = *p;
    evaluate(f, mesh, targets, Some(p.k), dv_kernel(p))
}

/// `D_Φ f` at off-boundary targets; the target derivatives are taken
/// analytically inside the integral.
pub fn double_layer_pressure(f: &Density, mesh: &BoundaryMesh, p: &ResolventParameter, targets: &[[f64; 2]]) -> Result<Vec<C64>> {
    let p = *p;
    Ok(evaluate(f, mesh, targets, Some(p.k), dp_kernel(p))?.into_iter().map(|v| v[0]).collect())
}

/// Principal value `p.v. ∫ Φ_k(x_i − y) f_k(y) dσ(y)` at every mesh node.
pub fn single_layer_pressure_pv(f: &Density, mesh: &BoundaryMesh) -> Result<Vec<C64>> {
    check_density(f, mesh)?;
    let q = PanelQuadrature::new(mesh);
    (0..mesh.len())
        .into_par_iter()
        .map(|i| {
            let x = mesh.nodes[i];
            let res = pressure_residue(mesh.normals[i]);
            Ok(q.apply(x, Some(i), &sp_kernel(), Some(&res), f)?[0])
        })
        .collect()
}

/// Conormal derivative `∂_ν(v, ψ) = (∇v) n − ψ n` with `vel_grad[i][j] = ∂_j v_i`.
pub fn conormal_derivative(vel_grad: &[[C64; 2]; 2], pressure: C64, n: [f64; 2]) -> Result<[C64; 2]> {
    if ((n[0].hypot(n[1])) - 1.0).abs() > 1e-12 {
        return Err(Error::arg(format!("normal {n:?} is not a unit vector")));
    }
    Ok([vel_grad[0][0] * n[0] + vel_grad[0][1] * n[1] - pressure * n[0], vel_grad[1][0] * n[0] + vel_grad[1][1] * n[1] - pressure * n[1]])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OperatorKind {
    KLambda,
    KLambdaBarStar,
}

/// Dense Nyström matrix of a boundary operator, acting on densities stored
/// as `[f_0x, f_0y, f_1x, f_1y, ...]`.
#[derive(Clone, Debug)]
pub struct BoundaryOperatorMatrix {
    pub entries: DMatrix<C64>,
    pub kind: OperatorKind,
    pub lambda: C64,
    pub nodes: usize,
}

impl BoundaryOperatorMatrix {
    /// `(s I + K) f` for a density `f`.
    pub fn apply_shifted(&self, shift: f64, f: &Density) -> Result<Density> {
        if f.len() != self.nodes {
            return Err(Error::arg(format!("density has {} entries, operator has {} nodes", f.len(), self.nodes)));
        }
        let v = crate::linalg::flatten(f);
        let w = &self.entries * &v + &v * c(shift);
        Ok(crate::linalg::unflatten(&w))
    }
}

fn assemble<K, F>(mesh: &BoundaryMesh, k: C64, make: F) -> Result<DMatrix<C64>>
where
    K: Fn([f64; 2], [f64; 2]) -> Result<Block<2>>,
    F: Fn(usize) -> K + Sync,
{
    let n = mesh.len();
    let q = PanelQuadrature::new(mesh).with_wavenumber(k);
    let res = stokes_residue();
    let rows: Vec<Vec<Block<2>>> =
        (0..n).into_par_iter().map(|i| q.row(mesh.nodes[i], Some(i), &make(i), Some(&res))).collect::<Result<_>>()?;
    let mut m = DMatrix::<C64>::zeros(2 * n, 2 * n);
    for (i, row) in rows.iter().enumerate() {
        for (jn, b) in row.iter().enumerate() {
            for a in 0..2 {
                for k in 0..2 {
                    m[(2 * i + a, 2 * jn + k)] = b[a][k];
                }
            }
        }
    }
    if m.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical("non-finite entry in boundary operator".into()));
    }
    Ok(m)
}

/// Nyström matrix of `K_λ` (conormal derivative of the single layer).
pub fn assemble_k(mesh: &BoundaryMesh, p: &ResolventParameter) -> Result<BoundaryOperatorMatrix> {
    let p = *p;
    let entries = assemble(mesh, p.k, |i| k_kernel(mesh.normals[i], p))?;
    Ok(BoundaryOperatorMatrix { entries, kind: OperatorKind::KLambda, lambda: p.lambda, nodes: mesh.len() })
}

/// Nyström matrix of `K̄*_λ`, the boundary trace part of `D_λ`.
pub fn assemble_kstar(mesh: &BoundaryMesh, p: &ResolventParameter) -> Result<BoundaryOperatorMatrix> {
    let p = *p;
    let entries = assemble(mesh, p.k, |_| dv_kernel(p))?;
    Ok(BoundaryOperatorMatrix { entries, kind: OperatorKind::KLambdaBarStar, lambda: p.lambda, nodes: mesh.len() })
}

/// `‖A* − W⁻¹ A^H W‖_F / ‖A*‖_F` for `A = K_λ̄` and `A* = K̄*_λ`, optionally
/// restricted to node pairs where both matrices use the plain node rule.
pub fn duality_residual(k_bar: &BoundaryOperatorMatrix, kstar: &BoundaryOperatorMatrix, mesh: &BoundaryMesh, far_only: bool) -> f64 {
    let n = mesh.len();
    let (mut num, mut den) = (0.0, 0.0);
    let q = PanelQuadrature::new(mesh).with_wavenumber(C64::i() * kstar.lambda.sqrt());
    for i in 0..n {
        for j in 0..n {
            if far_only && !(q.is_far(mesh.panel_index[j], mesh.nodes[i]) && q.is_far(mesh.panel_index[i], mesh.nodes[j])) {
                continue;
            }
            for a in 0..2 {
                for b in 0..2 {
                    let s = kstar.entries[(2 * i + a, 2 * j + b)];
                    let t = k_bar.entries[(2 * j + b, 2 * i + a)].conj() * (mesh.weights[j] / mesh.weights[i]);
                    num += (s - t).norm_sqr();
                    den += s.norm_sqr();
                }
            }
        }
    }
    (num / den).sqrt()
}

#[cfg(test)]
mod tests;
