//! Jump relations across the boundary, measured by extrapolating
//! one-sided non-tangential limits.
//!
//! Predicted jumps (interior minus exterior):
//! `[∂_j u_i] = n_j f_i − n_i n_j n_k f_k` for `u = S_λ f`,
//! `[φ] = −n_k f_k` for `φ = S_Φ f`, and `[D_λ f] = −f`.

use super::quad::{Block, PanelQuadrature};
use super::{check_density, dv_kernel, pressure_residue, sp_kernel, stokes_residue};
use crate::error::{Error, Result};
use crate::geometry::{approach_samples, BoundaryMesh, Density, Side};
use crate::kernels::{displacement_norm, grad_stokeslet, pressure0, ResolventParameter};
use num_complex::Complex64 as C64;
use rayon::prelude::*;

const Z: C64 = C64 { re: 0.0, im: 0.0 };

/// Successive extrapolants must agree to this, relative to `‖f‖_∞ + |value|`.
pub const EXTRAPOLATION_TOLERANCE: f64 = 1e-7;

/// `∇S_λ f` (rows `2i + j` = `∂_j u_i`), `S_Φ f` (row 4) and `D_λ f` (rows 5, 6)
/// from one kernel evaluation per source point.
fn combined_kernel(p: ResolventParameter) -> impl Fn([f64; 2], [f64; 2]) -> Result<Block<7>> {
    move |z, n| {
        let t = grad_stokeslet(z, &p)?.value;
        let ph = pressure0(z, displacement_norm(z)?);
        let mut b = [[Z; 2]; 7];
        for i in 0..2 {
            for k in 0..2 {
                for j in 0..2 {
                    b[2 * i + j][k] = t[i][k][j];
                }
                // D kernel at y − x = −z: ∇Γ and Φ are odd.
                b[5 + i][k] = -(t[i][k][0] * n[0] + t[i][k][1] * n[1]) + C64::new(ph[i] * n[k], 0.0);
            }
            b[4][i] = C64::new(ph[i], 0.0);
        }
        Ok(b)
    }
}

/// Value at `d = 0` of the interpolating polynomial through `(d_k, v_k)`,
/// together with the difference between the last two extrapolants.
pub fn richardson(d: &[f64], v: &[C64]) -> (C64, f64) {
    let n = d.len();
    let mut p: Vec<C64> = v.to_vec();
    let mut diag = vec![p[0]];
    for m in 1..n {
        for i in 0..n - m {
            p[i] = (p[i + 1] * d[i] - p[i] * d[i + m]) / (d[i] - d[i + m]);
        }
        diag.push(p[0]);
    }
    let last = diag[n - 1];
    let change = if n > 1 { (last - diag[n - 2]).norm() } else { f64::INFINITY };
    (last, change)
}

#[derive(Clone, Debug, PartialEq)]
pub struct JumpRow {
    pub node_id: usize,
    pub quantity: String,
    pub predicted: C64,
    pub measured: C64,
    pub abs_err: f64,
}

/// Rows plus the worst relative error per quantity (error over the largest
/// predicted magnitude, or over `‖f‖_∞` when the prediction vanishes).
#[derive(Clone, Debug)]
pub struct JumpReport {
    pub rows: Vec<JumpRow>,
    pub relative_errors: Vec<(String, f64)>,
}

impl JumpReport {
    pub fn relative_error(&self, quantity: &str) -> Option<f64> {
        self.relative_errors.iter().find(|(q, _)| q == quantity).map(|(_, e)| *e)
    }

    pub fn max_relative_error(&self) -> f64 {
        self.relative_errors.iter().map(|(_, e)| *e).fold(0.0, f64::max)
    }
}

/// Principal-value traces `K̄*_λ f` and `p.v. S_Φ f` at one node.
fn traces(q: &PanelQuadrature, f: &Density, i: usize, p: ResolventParameter) -> Result<([C64; 2], C64)> {
    let mesh = q.mesh;
    let x = mesh.nodes[i];
    let kd = q.apply(x, Some(i), &dv_kernel(p), Some(&stokes_residue()), f)?;
    let sp = q.apply(x, Some(i), &sp_kernel(), Some(&pressure_residue(mesh.normals[i])), f)?;
    Ok((kd, sp[0]))
}

/// Measures the jumps of `∇S_λ f`, `S_Φ f` and `D_λ f` at the nodes in
/// `sample_nodes`, approaching along the normal at `distances` (decreasing).
///
/// Besides the jumps, the one-sided limits of `D_λ f` and `S_Φ f` are
/// compared with `(∓½ + K̄*_λ) f` and `∓½ n·f + p.v. S_Φ f` (quantities
/// `double_layer_interior`, `double_layer_exterior`, `pressure_interior`,
/// `pressure_exterior`).
pub fn jump_measure(
    f: &Density,
    mesh: &BoundaryMesh,
    p: &ResolventParameter,
    alpha: f64,
    distances: &[f64],
    sample_nodes: &[usize],
) -> Result<JumpReport> {
    check_density(f, mesh)?;
    if distances.len() < 2 {
        return Err(Error::arg("need at least two approach distances"));
    }
    let p = *p;
    let q = PanelQuadrature::new(mesh).with_wavenumber(p.k);
    let fmax = f.iter().flatten().map(|v| v.norm()).fold(0.0, f64::max);
    let kern = combined_kernel(p);
    let per_node: Vec<Vec<JumpRow>> = sample_nodes
        .par_iter()
        .map(|&i| {
            let mut lim = [[Z; 7]; 2];
            for (s, side) in [Side::Interior, Side::Exterior].into_iter().enumerate() {
                let pts = approach_samples(mesh, i, alpha, distances, side)?;
                let vals: Vec<[C64; 7]> = pts.iter().map(|&x| q.apply(x, None, &kern, None, f)).collect::<Result<_>>()?;
                for c in 0..7 {
                    let v: Vec<C64> = vals.iter().map(|r| r[c]).collect();
                    let (e, change) = richardson(distances, &v);
                    if change > EXTRAPOLATION_TOLERANCE * (fmax + e.norm()) {
                        return Err(Error::Numerical(format!("non-tangential limit at node {i} did not converge (change {change:e})")));
                    }
                    lim[s][c] = e;
                }
            }
            let n = mesh.normals[i];
            let fi = f[i];
            let nf = fi[0] * n[0] + fi[1] * n[1];
            let (kd, pv) = traces(&q, f, i, p)?;
            let mut rows = Vec::new();
            let mut push = |quantity: String, predicted: C64, measured: C64| {
                rows.push(JumpRow { node_id: i, abs_err: (predicted - measured).norm(), quantity, predicted, measured })
            };
            for a in 0..2 {
                for j in 0..2 {
                    let pred = fi[a] * n[j] - nf * (n[a] * n[j]);
                    push(format!("grad_single_layer_{a}{j}"), pred, lim[0][2 * a + j] - lim[1][2 * a + j]);
                }
            }
            push("single_layer_pressure".into(), -nf, lim[0][4] - lim[1][4]);
            for a in 0..2 {
                push(format!("double_layer_{a}"), -fi[a], lim[0][5 + a] - lim[1][5 + a]);
                push(format!("double_layer_interior_{a}"), kd[a] - fi[a] * 0.5, lim[0][5 + a]);
                push(format!("double_layer_exterior_{a}"), kd[a] + fi[a] * 0.5, lim[1][5 + a]);
            }
            push("pressure_interior".into(), pv - nf * 0.5, lim[0][4]);
            push("pressure_exterior".into(), pv + nf * 0.5, lim[1][4]);
            Ok(rows)
        })
        .collect::<Result<_>>()?;
    let rows: Vec<JumpRow> = per_node.into_iter().flatten().collect();
    let groups = [
        "grad_single_layer",
        "single_layer_pressure",
        "double_layer_interior",
        "double_layer_exterior",
        "pressure_interior",
        "pressure_exterior",
    ];
    let mut relative_errors = Vec::new();
    for g in groups {
        let sel: Vec<&JumpRow> = rows.iter().filter(|r| r.quantity.starts_with(g)).collect();
        relative_errors.push((g.to_string(), rel(&sel, fmax)));
    }
    let dl: Vec<&JumpRow> = rows.iter().filter(|r| r.quantity == "double_layer_0" || r.quantity == "double_layer_1").collect();
    relative_errors.insert(2, ("double_layer".to_string(), rel(&dl, fmax)));
    Ok(JumpReport { rows, relative_errors })
}

fn rel(sel: &[&JumpRow], fmax: f64) -> f64 {
    let scale = sel.iter().map(|r| r.predicted.norm()).fold(0.0, f64::max);
    let scale = if scale > 1e-14 * fmax { scale } else { fmax };
    sel.iter().map(|r| r.abs_err).fold(0.0, f64::max) / scale
}
