//! Panel quadrature for layer potentials.
//!
//! Every kernel is integrated against the density's Lagrange interpolant on
//! each panel, so a panel's contribution to one target is a list of blocks,
//! one per panel node. Far panels use the native Gauss nodes. Near panels are
//! bisected until each piece is at least [`NEAR_FACTOR`] piece lengths away
//! and, unless the kernel has decayed, short against the wavelength.
//! On the target's own panel the Cauchy part `A/(u − u_i)` is subtracted and
//! integrated analytically, and the bounded remainder is integrated on both
//! sides of `u_i` with pieces shrinking geometrically toward it.

use crate::error::{Error, Result};
use crate::geometry::BoundaryMesh;
use crate::quadrature::{gauss_legendre, GaussRule};
use num_complex::Complex64 as C64;
use std::sync::Arc;

/// Kernel values acting on one density sample: `R` output rows, 2 columns.
/// Kernels are called with the displacement `x − y` and the source normal.
pub type Block<const R: usize> = [[C64; 2]; R];

/// Minimum distance, in piece lengths, for plain Gauss quadrature.
pub const NEAR_FACTOR: f64 = 1.5;

/// `−ln` of the accepted quadrature error of one piece.
const DIGITS: f64 = 25.0;

const MAX_DEPTH: usize = 48;
/// Self-panel pieces on each side of `u_i`, as fractions of the side length.
const SELF_BREAKS: [f64; 6] = [1.0, 0.25, 0.0625, 0.015625, 0.00390625, 0.0];
const Z: C64 = C64 { re: 0.0, im: 0.0 };

pub fn zero_block<const R: usize>() -> Block<R> {
    [[Z; 2]; R]
}

/// Quadrature tables shared by all targets on one mesh.
pub struct PanelQuadrature<'a> {
    pub mesh: &'a BoundaryMesh,
    local: Arc<GaussRule>,
    bary: Vec<f64>,
    sub: Arc<GaussRule>,
    endpoints: Vec<[[f64; 2]; 2]>,
    chord_rule: Arc<GaussRule>,
    wavenumber: Option<C64>,
}

impl<'a> PanelQuadrature<'a> {
    pub fn new(mesh: &'a BoundaryMesh) -> Self {
        let local = gauss_legendre(mesh.nodes_per_panel);
        let n = local.nodes.len();
        let bary = (0..n).map(|m| 1.0 / (0..n).filter(|&l| l != m).map(|l| local.nodes[m] - local.nodes[l]).product::<f64>()).collect();
        let sub = gauss_legendre(mesh.nodes_per_panel.max(10));
        let endpoints = (0..mesh.panels.len()).map(|p| [mesh.eval(p, -1.0).0, mesh.eval(p, 1.0).0]).collect();
        PanelQuadrature { mesh, local, bary, sub, endpoints, chord_rule: gauss_legendre(10), wavenumber: None }
    }

    /// Also require oscillations at wavenumber `k` to be resolved on every
    /// piece that has not decayed.
    pub fn with_wavenumber(mut self, k: C64) -> Self {
        self.wavenumber = Some(k);
        self
    }

    /// Whether a piece of length `len` at distance `d` is integrated by an
    /// `n`-point Gauss rule: well separated, and the oscillation error
    /// `(e|k|len / 4n)^{2n}` times the decay `e^{−Im k d}` below roundoff.
    fn resolved(&self, d: f64, len: f64, n: usize) -> bool {
        if d < NEAR_FACTOR * len {
            return false;
        }
        let Some(k) = self.wavenumber else { return true };
        let r = std::f64::consts::E * k.norm() * len / (4.0 * n as f64);
        let gain = if r < 1.0 { -2.0 * n as f64 * r.ln() } else { 0.0 };
        k.im * d + gain >= DIGITS
    }

    /// Lagrange basis of the panel nodes at `u`.
    fn basis(&self, u: f64, out: &mut [f64]) {
        let nodes = &self.local.nodes;
        if let Some(m) = nodes.iter().position(|&v| v == u) {
            out.iter_mut().for_each(|o| *o = 0.0);
            out[m] = 1.0;
            return;
        }
        let mut den = 0.0;
        for m in 0..nodes.len() {
            out[m] = self.bary[m] / (u - nodes[m]);
            den += out[m];
        }
        out.iter_mut().for_each(|o| *o /= den);
    }

    fn dist_to_piece(&self, p: usize, a: f64, b: f64, x: [f64; 2]) -> (f64, f64) {
        let (h, c) = (0.5 * (b - a), 0.5 * (a + b));
        let mut len = 0.0;
        let mut d = f64::INFINITY;
        for (u, w) in self.local.nodes.iter().zip(&self.local.weights) {
            let (y, dy) = self.mesh.eval(p, c + h * u);
            len += w * h * dy[0].hypot(dy[1]);
            d = d.min((y[0] - x[0]).hypot(y[1] - x[1]));
        }
        for u in [a, b] {
            let (y, _) = self.mesh.eval(p, u);
            d = d.min((y[0] - x[0]).hypot(y[1] - x[1]));
        }
        (d, len)
    }

    /// Adds `∫_a^b K(y(u)) ℓ_m(u) |y'(u)| du` to `out[m]` with the sub rule.
    fn add_piece<const R: usize, K>(
        &self,
        p: usize,
        a: f64,
        b: f64,
        x: [f64; 2],
        kernel: &K,
        out: &mut [Block<R>],
        scratch: &mut [f64],
    ) -> Result<()>
    where
        K: Fn([f64; 2], [f64; 2]) -> Result<Block<R>>,
    {
        let (h, c) = (0.5 * (b - a), 0.5 * (a + b));
        for (s, w) in self.sub.nodes.iter().zip(&self.sub.weights) {
            let u = c + h * s;
            let (y, dy) = self.mesh.eval(p, u);
            let speed = dy[0].hypot(dy[1]);
            let k = kernel([x[0] - y[0], x[1] - y[1]], BoundaryMesh::normal_from(dy))?;
            self.basis(u, scratch);
            let wt = w * h * speed;
            for (m, o) in out.iter_mut().enumerate() {
                let f = wt * scratch[m];
                for r in 0..R {
                    o[r][0] += k[r][0] * f;
                    o[r][1] += k[r][1] * f;
                }
            }
        }
        Ok(())
    }

    /// Blocks of panel `p` for an off-panel target, refining near pieces.
    fn near_blocks<const R: usize, K>(&self, p: usize, x: [f64; 2], kernel: &K, out: &mut [Block<R>]) -> Result<()>
    where
        K: Fn([f64; 2], [f64; 2]) -> Result<Block<R>>,
    {
        let mut scratch = vec![0.0; out.len()];
        let mut stack = vec![(-1.0f64, 1.0f64, 0usize)];
        while let Some((a, b, depth)) = stack.pop() {
            let (d, len) = self.dist_to_piece(p, a, b, x);
            if self.resolved(d, len, self.sub.nodes.len()) {
                self.add_piece(p, a, b, x, kernel, out, &mut scratch)?;
            } else if depth >= MAX_DEPTH || d == 0.0 {
                return Err(Error::Numerical(format!("target ({}, {}) lies on the boundary (distance {d:e} to panel {p})", x[0], x[1])));
            } else {
                let m = 0.5 * (a + b);
                stack.push((m, b, depth + 1));
                stack.push((a, m, depth + 1));
            }
        }
        Ok(())
    }

    /// `y(u) − y(u_i)` as `(u − u_i) ∫_0^1 y'(u_i + s(u − u_i)) ds`, accurate
    /// relative to `|u − u_i|` where a direct difference of positions is not.
    fn chord(&self, p: usize, ui: f64, u: f64) -> [f64; 2] {
        let du = u - ui;
        let mut acc = [0.0; 2];
        for (s, w) in self.chord_rule.nodes.iter().zip(&self.chord_rule.weights) {
            let (_, dy) = self.mesh.eval(p, ui + 0.5 * (s + 1.0) * du);
            acc[0] += 0.5 * w * dy[0];
            acc[1] += 0.5 * w * dy[1];
        }
        [acc[0] * du, acc[1] * du]
    }

    /// Principal-value blocks of the target's own panel. `residue` is the
    /// limit of `(u − u_i) K(y(u)) |y'(u)|` as `u → u_i`.
    fn self_blocks<const R: usize, K>(&self, p: usize, i_local: usize, kernel: &K, residue: &Block<R>, out: &mut [Block<R>]) -> Result<()>
    where
        K: Fn([f64; 2], [f64; 2]) -> Result<Block<R>>,
    {
        let ui = self.local.nodes[i_local];
        let mut scratch = vec![0.0; out.len()];
        for (end, sgn) in [(1.0f64, 1.0f64), (-1.0, -1.0)] {
            let side = (end - ui).abs();
            for br in SELF_BREAKS.windows(2) {
                let (lo, hi) = (br[1], br[0]);
                let (h, c) = (0.5 * (hi - lo), 0.5 * (hi + lo));
                for (s, w) in self.sub.nodes.iter().zip(&self.sub.weights) {
                    let t = side * (c + h * s);
                    let u = ui + sgn * t;
                    let (_, dy) = self.mesh.eval(p, u);
                    let speed = dy[0].hypot(dy[1]);
                    let ch = self.chord(p, ui, u);
                    let k = kernel([-ch[0], -ch[1]], BoundaryMesh::normal_from(dy))?;
                    self.basis(u, &mut scratch);
                    let wt = w * h * side;
                    let pole = 1.0 / (u - ui);
                    for (m, o) in out.iter_mut().enumerate() {
                        let f = scratch[m] * speed;
                        for r in 0..R {
                            for col in 0..2 {
                                let mut v = k[r][col] * f;
                                if m == i_local {
                                    v -= residue[r][col] * pole;
                                }
                                o[r][col] += v * wt;
                            }
                        }
                    }
                }
            }
        }
        let lg = ((1.0 - ui) / (1.0 + ui)).ln();
        for r in 0..R {
            for col in 0..2 {
                out[i_local][r][col] += residue[r][col] * lg;
            }
        }
        Ok(())
    }

    /// Whether panel `p` is integrated with its own nodes for target `x`.
    pub fn is_far(&self, p: usize, x: [f64; 2]) -> bool {
        let mesh = self.mesh;
        let d = mesh
            .node_range(p)
            .map(|j| &mesh.nodes[j])
            .chain(self.endpoints[p].iter())
            .map(|y| (y[0] - x[0]).hypot(y[1] - x[1]))
            .fold(f64::INFINITY, f64::min);
        self.resolved(d, mesh.panels[p].length, mesh.nodes_per_panel)
    }

    /// Contribution of panel `p` to one target, one block per panel node.
    /// `on_node` marks a target that is node `i` of the mesh; `residue` is then
    /// used on its own panel and must be supplied.
    pub fn panel_blocks<const R: usize, K>(
        &self,
        p: usize,
        x: [f64; 2],
        on_node: Option<usize>,
        kernel: &K,
        residue: Option<&Block<R>>,
        out: &mut [Block<R>],
    ) -> Result<()>
    where
        K: Fn([f64; 2], [f64; 2]) -> Result<Block<R>>,
    {
        out.iter_mut().for_each(|o| *o = zero_block());
        let mesh = self.mesh;
        if let Some(i) = on_node {
            if mesh.panel_index[i] == p {
                let res = residue.ok_or_else(|| Error::arg("on-boundary evaluation needs a principal-value residue"))?;
                return self.self_blocks(p, i - mesh.panels[p].start, kernel, res, out);
            }
        }
        let range = mesh.node_range(p);
        if self.is_far(p, x) {
            for (m, j) in range.enumerate() {
                let y = mesh.nodes[j];
                let k = kernel([x[0] - y[0], x[1] - y[1]], mesh.normals[j])?;
                let w = mesh.weights[j];
                for r in 0..R {
                    out[m][r] = [k[r][0] * w, k[r][1] * w];
                }
            }
            Ok(())
        } else {
            self.near_blocks(p, x, kernel, out)
        }
    }

    /// Full row of blocks (one per mesh node) for one target.
    pub fn row<const R: usize, K>(
        &self,
        x: [f64; 2],
        on_node: Option<usize>,
        kernel: &K,
        residue: Option<&Block<R>>,
    ) -> Result<Vec<Block<R>>>
    where
        K: Fn([f64; 2], [f64; 2]) -> Result<Block<R>>,
    {
        let n = self.mesh.nodes_per_panel;
        let mut row = vec![zero_block::<R>(); self.mesh.len()];
        let mut buf = vec![zero_block::<R>(); n];
        for p in 0..self.mesh.panels.len() {
            self.panel_blocks(p, x, on_node, kernel, residue, &mut buf)?;
            let s = self.mesh.panels[p].start;
            row[s..s + n].copy_from_slice(&buf);
        }
        Ok(row)
    }

    /// `Σ_j block_j f_j` for one target, without storing the row.
    pub fn apply<const R: usize, K>(
        &self,
        x: [f64; 2],
        on_node: Option<usize>,
        kernel: &K,
        residue: Option<&Block<R>>,
        f: &[[C64; 2]],
    ) -> Result<[C64; R]>
    where
        K: Fn([f64; 2], [f64; 2]) -> Result<Block<R>>,
    {
        let n = self.mesh.nodes_per_panel;
        let mut buf = vec![zero_block::<R>(); n];
        let mut acc = [Z; R];
        for p in 0..self.mesh.panels.len() {
            self.panel_blocks(p, x, on_node, kernel, residue, &mut buf)?;
            let s = self.mesh.panels[p].start;
            for (m, b) in buf.iter().enumerate() {
                let fm = f[s + m];
                for r in 0..R {
                    acc[r] += b[r][0] * fm[0] + b[r][1] * fm[1];
                }
            }
        }
        Ok(acc)
    }
}
