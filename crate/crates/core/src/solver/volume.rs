//! Volume grids and the Newtonian potential
//! `u_N = ∫_Ω Γ(x − y; λ) f(y) dy`, `φ_N = ∫_Ω Φ(x − y)·f(y) dy`.

use super::polar::{self, Polar};
use super::FieldSample;
use crate::error::{Error, Result};
use crate::geometry::BoundaryCurve;
use crate::kernels::{pressure0, stokeslet, ResolventParameter};
use crate::quadrature::gauss_legendre;
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use std::f64::consts::PI;

const Z: C64 = C64 { re: 0.0, im: 0.0 };

/// Relative size of `div f` and of `f·n` on the circle above which the
/// polar path rejects its input.
pub const SOLENOIDAL_TOLERANCE: f64 = 1e-2;

#[derive(Clone, Debug, PartialEq)]
pub enum GridLayout {
    /// Gauss–Legendre radii on `(0, radius)`, `n_theta` equispaced angles;
    /// point `j n_theta + l` sits at `radii[j] (cos θ_l, sin θ_l)`.
    Polar { center: [f64; 2], radius: f64, radii: Vec<f64>, n_theta: usize },
    /// Cell centers `origin + (i h, j h)`, point `j nx + i`, over the
    /// bounding box of the domain.
    Tensor { origin: [f64; 2], h: f64, nx: usize, ny: usize },
}

/// Quadrature points over the domain. Points outside carry weight zero.
#[derive(Clone, Debug)]
pub struct VolumeGrid {
    pub points: Vec<[f64; 2]>,
    pub weights: Vec<f64>,
    pub inside: Vec<bool>,
    pub layout: GridLayout,
}

impl VolumeGrid {
    /// Polar grid on a disk.
    pub fn polar(center: [f64; 2], radius: f64, n_r: usize, n_theta: usize) -> Result<Self> {
        if !(radius > 0.0) || n_r < 2 || n_theta < 3 {
            return Err(Error::arg("polar grid needs radius > 0, n_r ≥ 2, n_theta ≥ 3"));
        }
        let g = gauss_legendre(n_r);
        let radii: Vec<f64> = g.nodes.iter().map(|x| 0.5 * radius * (x + 1.0)).collect();
        let dth = 2.0 * PI / n_theta as f64;
        let mut points = Vec::with_capacity(n_r * n_theta);
        let mut weights = Vec::with_capacity(n_r * n_theta);
        for (j, &r) in radii.iter().enumerate() {
            for l in 0..n_theta {
                let (s, c) = (l as f64 * dth).sin_cos();
                points.push([center[0] + r * c, center[1] + r * s]);
                weights.push(0.5 * radius * g.weights[j] * r * dth);
            }
        }
        let inside = vec![true; points.len()];
        Ok(VolumeGrid { points, weights, inside, layout: GridLayout::Polar { center, radius, radii, n_theta } })
    }

    /// Cell-centered grid of spacing about `h` over the bounding box of the
    /// curve; cells whose center is inside get weight `h²`.
    pub fn tensor(curve: &BoundaryCurve, h: f64) -> Result<Self> {
        curve.validate()?;
        if !(h > 0.0) {
            return Err(Error::arg("grid spacing must be positive"));
        }
        let (lo, hi) = curve.bounding_box();
        let nx = ((hi[0] - lo[0]) / h - 1e-9).ceil().max(1.0) as usize;
        let ny = ((hi[1] - lo[1]) / h - 1e-9).ceil().max(1.0) as usize;
        let origin = [0.5 * (lo[0] + hi[0]) - 0.5 * (nx as f64 - 1.0) * h, 0.5 * (lo[1] + hi[1]) - 0.5 * (ny as f64 - 1.0) * h];
        let mut points = Vec::with_capacity(nx * ny);
        let mut inside = Vec::with_capacity(nx * ny);
        for j in 0..ny {
            for i in 0..nx {
                let x = [origin[0] + i as f64 * h, origin[1] + j as f64 * h];
                points.push(x);
                inside.push(curve.contains(x));
            }
        }
        let weights = inside.iter().map(|&b| if b { h * h } else { 0.0 }).collect();
        Ok(VolumeGrid { points, weights, inside, layout: GridLayout::Tensor { origin, h, nx, ny } })
    }

    /// Polar grid for circles (`resolution` rings, `2·resolution + 1`
    /// angles), otherwise a tensor grid with `resolution` cells across the
    /// larger side of the bounding box.
    pub fn for_curve(curve: &BoundaryCurve, resolution: usize) -> Result<Self> {
        match curve {
            BoundaryCurve::Circle { radius, center } => VolumeGrid::polar(*center, *radius, resolution, 2 * resolution + 1),
            _ => {
                let (lo, hi) = curve.bounding_box();
                let side = (hi[0] - lo[0]).max(hi[1] - lo[1]);
                VolumeGrid::tensor(curve, side / resolution.max(1) as f64)
            }
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn inside_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.inside[i]).collect()
    }

    /// `Σ w`, the discrete area.
    pub fn area(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Samples a field at every inside point (zero outside).
    pub fn sample<F: Fn([f64; 2]) -> [C64; 2]>(&self, f: F) -> Vec<[C64; 2]> {
        self.points.iter().zip(&self.inside).map(|(&x, &b)| if b { f(x) } else { [Z; 2] }).collect()
    }

    fn as_polar(&self) -> Option<Polar<'_>> {
        match &self.layout {
            GridLayout::Polar { center, radius, radii, n_theta } => {
                Some(Polar { center: *center, radius: *radius, radii, n_theta: *n_theta })
            }
            GridLayout::Tensor { .. } => None,
        }
    }
}

fn check_len(grid: &VolumeGrid, f: &[[C64; 2]]) -> Result<()> {
    if f.len() != grid.len() {
        return Err(Error::arg(format!("field has {} samples, grid has {} points", f.len(), grid.len())));
    }
    Ok(())
}

/// Velocity gradient `[i][j] = ∂_j f_i` at every grid point: spectral on
/// polar grids, fourth-order differences on tensor grids (one-sided
/// stencils degrade to second order next to the box edge).
pub fn gradient(grid: &VolumeGrid, f: &[[C64; 2]]) -> Result<Vec<[[C64; 2]; 2]>> {
    check_len(grid, f)?;
    match &grid.layout {
        GridLayout::Polar { .. } => Ok(polar::gradient(&grid.as_polar().expect("polar"), f)),
        GridLayout::Tensor { h, nx, ny, .. } => {
            let (h, nx, ny) = (*h, *nx, *ny);
            let at = |i: i64, j: i64, a: usize| -> C64 {
                if i < 0 || j < 0 || i >= nx as i64 || j >= ny as i64 {
                    Z
                } else {
                    f[j as usize * nx + i as usize][a]
                }
            };
            let mut out = vec![[[Z; 2]; 2]; f.len()];
            for j in 0..ny as i64 {
                for i in 0..nx as i64 {
                    for a in 0..2 {
                        for (d, (di, dj)) in [(1i64, 0i64), (0, 1)].into_iter().enumerate() {
                            let v = (at(i - 2 * di, j - 2 * dj, a) - at(i - di, j - dj, a) * 8.0 + at(i + di, j + dj, a) * 8.0
                                - at(i + 2 * di, j + 2 * dj, a))
                                / (12.0 * h);
                            out[j as usize * nx + i as usize][a][d] = v;
                        }
                    }
                }
            }
            Ok(out)
        }
    }
}

/// Discrete divergence at every grid point.
pub fn divergence(grid: &VolumeGrid, f: &[[C64; 2]]) -> Result<Vec<C64>> {
    Ok(gradient(grid, f)?.iter().map(|g| g[0][0] + g[1][1]).collect())
}

fn max_abs(f: &[[C64; 2]]) -> f64 {
    f.iter().map(|v| (v[0].norm_sqr() + v[1].norm_sqr()).sqrt()).fold(0.0, f64::max)
}

/// Rejects fields for which the polar path does not apply: it uses
/// `Γ ∗ f = G_λ ∗ f` and `Φ ∗ f = 0`, valid when the zero extension of `f`
/// is divergence-free.
fn check_solenoidal(g: &Polar, f: &[[C64; 2]]) -> Result<()> {
    let fmax = max_abs(f);
    if fmax == 0.0 {
        return Ok(());
    }
    let grad = polar::gradient(g, f);
    let gmax = grad.iter().map(|m| m.iter().flatten().map(|v| v.norm()).fold(0.0, f64::max)).fold(0.0, f64::max);
    let div = grad.iter().map(|m| (m[0][0] + m[1][1]).norm()).fold(0.0, f64::max);
    if div > SOLENOIDAL_TOLERANCE * gmax.max(fmax / g.radius) {
        return Err(Error::arg(format!("polar volume potential needs divergence-free data (|div f| = {div:.3e})")));
    }
    let nt = g.n_theta;
    let ring = polar::boundary_ring(g, f);
    let flux = ring
        .iter()
        .enumerate()
        .map(|(l, v)| {
            let (s, c) = (2.0 * PI * l as f64 / nt as f64).sin_cos();
            (v[0] * c + v[1] * s).norm()
        })
        .fold(0.0, f64::max);
    if flux > SOLENOIDAL_TOLERANCE * fmax {
        return Err(Error::arg(format!("polar volume potential needs f·n = 0 on the circle (|f·n| = {flux:.3e})")));
    }
    Ok(())
}

/// Newtonian potential of grid samples `f` at the targets (inside the
/// domain or on its boundary).
///
/// Polar grids use the spectral route through Graf's addition theorem and
/// require divergence-free data tangential to the circle; the pressure is
/// then zero. Tensor grids use the grid rule on `(1 − χ) Γ f` plus a polar
/// patch for `χ Γ f`, where `χ` is a smooth cutoff of radius
/// `a = max(1.5 √2 h, min(8/Im k, 10h))` and `f` is interpolated by
/// bicubic Lagrange polynomials. This route takes any `f` that vanishes
/// near the boundary.
pub fn newtonian_potential(grid: &VolumeGrid, f: &[[C64; 2]], p: &ResolventParameter, targets: &[[f64; 2]]) -> Result<Vec<FieldSample>> {
    check_len(grid, f)?;
    match &grid.layout {
        GridLayout::Polar { .. } => {
            let g = grid.as_polar().expect("polar");
            check_solenoidal(&g, f)?;
            polar::solenoidal_newtonian(&g, f, p, targets)
        }
        GridLayout::Tensor { origin, h, nx, ny } => tensor_newtonian(grid, *origin, *h, *nx, *ny, f, p, targets),
    }
}

/// `1` at 0, `0` beyond 1, `C^∞` in between.
fn cutoff(s: f64) -> f64 {
    if s <= 0.0 {
        return 1.0;
    }
    if s >= 1.0 {
        return 0.0;
    }
    let a = (-1.0 / s).exp();
    let b = (-1.0 / (1.0 - s)).exp();
    b / (a + b)
}

fn cubic_weights(t: f64) -> [f64; 4] {
    // nodes −1, 0, 1, 2
    [
        -t * (t - 1.0) * (t - 2.0) / 6.0,
        (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0,
        -(t + 1.0) * t * (t - 2.0) / 2.0,
        (t + 1.0) * t * (t - 1.0) / 6.0,
    ]
}

const PATCH_RADIAL: usize = 20;
const PATCH_ANGULAR: usize = 32;

#[allow(clippy::too_many_arguments)]
fn tensor_newtonian(
    grid: &VolumeGrid,
    origin: [f64; 2],
    h: f64,
    nx: usize,
    ny: usize,
    f: &[[C64; 2]],
    p: &ResolventParameter,
    targets: &[[f64; 2]],
) -> Result<Vec<FieldSample>> {
    let a = (1.5 * 2f64.sqrt() * h).max((8.0 / p.k.im).min(10.0 * h));
    let sources: Vec<usize> = (0..grid.len()).filter(|&i| grid.inside[i] && (f[i][0].norm() + f[i][1].norm()) > 0.0).collect();
    let interp = |y: [f64; 2]| -> [C64; 2] {
        let gx = (y[0] - origin[0]) / h;
        let gy = (y[1] - origin[1]) / h;
        let (ix, iy) = (gx.floor(), gy.floor());
        let (wx, wy) = (cubic_weights(gx - ix), cubic_weights(gy - iy));
        let mut v = [Z; 2];
        for (dj, wyj) in wy.iter().enumerate() {
            let j = iy as i64 - 1 + dj as i64;
            if j < 0 || j >= ny as i64 {
                continue;
            }
            for (di, wxi) in wx.iter().enumerate() {
                let i = ix as i64 - 1 + di as i64;
                if i < 0 || i >= nx as i64 {
                    continue;
                }
                let idx = j as usize * nx + i as usize;
                if grid.inside[idx] {
                    let w = wxi * wyj;
                    v[0] += f[idx][0] * w;
                    v[1] += f[idx][1] * w;
                }
            }
        }
        v
    };
    let rule = gauss_legendre(PATCH_RADIAL);
    let mut patch: Vec<([f64; 2], f64, f64)> = Vec::with_capacity(PATCH_RADIAL * PATCH_ANGULAR);
    for (s, w) in rule.nodes.iter().zip(&rule.weights) {
        // ρ = a σ², σ ∈ (0, 1): ρ dρ = 2 a² σ³ dσ
        let sg = 0.5 * (s + 1.0);
        let rho = a * sg * sg;
        let wr = 0.5 * w * 2.0 * a * a * sg * sg * sg * (2.0 * PI / PATCH_ANGULAR as f64);
        for l in 0..PATCH_ANGULAR {
            let (sn, cs) = (2.0 * PI * (l as f64 + 0.5) / PATCH_ANGULAR as f64).sin_cos();
            patch.push(([rho * cs, rho * sn], rho, wr * cutoff(rho / a)));
        }
    }
    let decay = p.k.im;
    targets
        .par_iter()
        .map(|&x| {
            let mut u = [Z; 2];
            let mut phi = Z;
            let mut add = |z: [f64; 2], r: f64, w: f64, fy: [C64; 2], with_velocity: bool| -> Result<()> {
                if with_velocity {
                    let g = stokeslet(z, p)?.value;
                    for i in 0..2 {
                        u[i] += (g[i][0] * fy[0] + g[i][1] * fy[1]) * w;
                    }
                }
                let ph = pressure0(z, r);
                phi += (fy[0] * ph[0] + fy[1] * ph[1]) * w;
                Ok(())
            };
            for &q in &sources {
                let y = grid.points[q];
                let z = [x[0] - y[0], x[1] - y[1]];
                let r = z[0].hypot(z[1]);
                let w = grid.weights[q] * (1.0 - cutoff(r / a));
                if w == 0.0 {
                    continue;
                }
                add(z, r, w, f[q], decay * r < 40.0)?;
            }
            for &(z, r, w) in &patch {
                let fy = interp([x[0] - z[0], x[1] - z[1]]);
                if fy[0].norm() + fy[1].norm() == 0.0 {
                    continue;
                }
                add(z, r, w, fy, true)?;
            }
            Ok(FieldSample { x, u, phi })
        })
        .collect()
}
