//! Spectral volume potential on a disk.
//!
//! On a polar grid (Gauss–Legendre radii, equispaced angles) a field is a
//! Fourier series in the angle whose coefficients are polynomials in the
//! radius. Graf's addition theorem
//! `H_0(k|x−y|) = Σ_m H_m(k r_>) J_m(k r_<) e^{im(θ_x−θ_y)}`
//! reduces the convolution with `G_λ = (i/4) H_0(k|x|)` to radial integrals per mode.

use super::FieldSample;
use crate::error::{Error, Result};
use crate::kernels::ResolventParameter;
use crate::quadrature::gauss_legendre;
use crate::special::bessel::{bessel_j_sequence_scaled, hankel_sequence_scaled};
use crate::special::UpperHalfArgument;
use num_complex::Complex64 as C64;
use std::f64::consts::PI;

const Z: C64 = C64 { re: 0.0, im: 0.0 };

/// Polar grid geometry: `radii` ascending in `(0, radius)`, angles `2πl/n_theta`.
#[derive(Clone, Copy, Debug)]
pub(super) struct Polar<'a> {
    pub center: [f64; 2],
    pub radius: f64,
    pub radii: &'a [f64],
    pub n_theta: usize,
}

/// Lagrange interpolation in barycentric form on the radial nodes.
pub(super) struct RadialBasis {
    nodes: Vec<f64>,
    bary: Vec<f64>,
}

impl RadialBasis {
    pub fn new(nodes: &[f64], radius: f64) -> Self {
        let n = nodes.len();
        let scale = 4.0 / radius;
        let bary = (0..n)
            .map(|j| {
                let p: f64 = (0..n).filter(|&k| k != j).map(|k| scale * (nodes[j] - nodes[k])).product();
                1.0 / p
            })
            .collect();
        RadialBasis { nodes: nodes.to_vec(), bary }
    }

    /// Basis values `ℓ_j(s)`.
    pub fn eval(&self, s: f64, out: &mut [f64]) {
        if let Some(j) = self.nodes.iter().position(|&x| x == s) {
            out.iter_mut().for_each(|v| *v = 0.0);
            out[j] = 1.0;
            return;
        }
        let mut den = 0.0;
        for (j, o) in out.iter_mut().enumerate() {
            *o = self.bary[j] / (s - self.nodes[j]);
            den += *o;
        }
        out.iter_mut().for_each(|v| *v /= den);
    }

    /// Differentiation matrix at the nodes, row-major.
    pub fn diff_matrix(&self) -> Vec<f64> {
        let n = self.nodes.len();
        let mut d = vec![0.0; n * n];
        for j in 0..n {
            let mut diag = 0.0;
            for k in 0..n {
                if k != j {
                    let v = self.bary[k] / self.bary[j] / (self.nodes[j] - self.nodes[k]);
                    d[j * n + k] = v;
                    diag -= v;
                }
            }
            d[j * n + j] = diag;
        }
        d
    }
}

/// Highest Fourier mode kept for `n` equispaced angles.
pub(super) fn max_mode(n_theta: usize) -> usize {
    (n_theta - 1) / 2
}

/// Fourier coefficients per ring: `out[j][m + M]` for modes `|m| ≤ M`.
pub(super) fn ring_coefficients(values: &[C64], n_r: usize, n_theta: usize) -> Vec<Vec<C64>> {
    let mm = max_mode(n_theta) as i64;
    let tw: Vec<C64> = (0..n_theta).map(|l| C64::from_polar(1.0, -2.0 * PI * l as f64 / n_theta as f64)).collect();
    (0..n_r)
        .map(|j| {
            (-mm..=mm)
                .map(|m| {
                    let mut s = Z;
                    for l in 0..n_theta {
                        let idx = (m.rem_euclid(n_theta as i64) as usize * l) % n_theta;
                        s += values[j * n_theta + l] * tw[idx];
                    }
                    s / n_theta as f64
                })
                .collect()
        })
        .collect()
}

/// `Σ_m c_m e^{imθ}` for coefficients indexed `m + M`.
pub(super) fn fourier_sum(c: &[C64], theta: f64) -> C64 {
    let mm = (c.len() / 2) as i64;
    c.iter().enumerate().map(|(i, v)| v * C64::from_polar(1.0, (i as i64 - mm) as f64 * theta)).sum()
}

fn polar_of(g: &Polar, x: [f64; 2]) -> (f64, f64) {
    let d = [x[0] - g.center[0], x[1] - g.center[1]];
    (d[0].hypot(d[1]), d[1].atan2(d[0]))
}

/// `(i/4) H_0(k|·|) ∗ f` componentwise at the targets, for `f` given on the
/// polar grid (index `j n_theta + l`). The targets must lie in the closed
/// disk; the center itself is evaluated at radius `10⁻¹⁰ R`.
pub(super) fn helmholtz_convolution(g: &Polar, f: &[[C64; 2]], p: &ResolventParameter, targets: &[[f64; 2]]) -> Result<Vec<[C64; 2]>> {
    let n_r = g.radii.len();
    let nt = g.n_theta;
    let mm = max_mode(nt);
    let modes = 2 * mm + 1;
    let coef: Vec<Vec<Vec<C64>>> = (0..2)
        .map(|a| {
            let v: Vec<C64> = f.iter().map(|x| x[a]).collect();
            ring_coefficients(&v, n_r, nt)
        })
        .collect();
    let basis = RadialBasis::new(g.radii, g.radius);

    let polar: Vec<(f64, f64)> = targets.iter().map(|&x| polar_of(g, x)).collect();
    let mut radii: Vec<f64> = Vec::with_capacity(targets.len());
    for &(r, _) in &polar {
        if r > g.radius * (1.0 + 1e-12) {
            return Err(Error::arg(format!("target at radius {r} lies outside the disk of radius {}", g.radius)));
        }
        radii.push(r.clamp(1e-10 * g.radius, g.radius));
    }
    let mut breaks = radii.clone();
    breaks.sort_by(f64::total_cmp);
    // radii recomputed from Cartesian points differ in the last bits
    breaks.dedup_by(|b, a| *b - *a <= 1e-12 * g.radius);
    let top = *breaks.last().expect("at least one target");
    if top < g.radius {
        breaks.push(g.radius);
    }

    let k = p.k;
    let lmax = (0.5 * g.radius).min(4.0 / k.norm());
    let q = n_r + 8;
    let rule = gauss_legendre(q);
    // Per interval [breaks[i-1], breaks[i]] (interval 0 starts at 0):
    // ∫ Ĵ_m F_m e^{κ(s − b_i)} s ds and ∫ Ĥ_m F_m e^{iks + κ b_{i−1}} s ds with
    // the scaled Ĵ = e^{−κs} J(ks), Ĥ = e^{−iks} H(ks), κ = Im k.
    let kappa = k.im;
    let mut ij = vec![vec![[Z; 2]; modes]; breaks.len()];
    let mut ih = vec![vec![[Z; 2]; modes]; breaks.len()];
    let mut ell = vec![0.0; n_r];
    let mut fm = vec![[Z; 2]; modes];
    for i in 0..breaks.len() {
        let (lo, hi) = (if i == 0 { 0.0 } else { breaks[i - 1] }, breaks[i]);
        let mut a = lo;
        while a < hi {
            let mut b = (a + lmax).min(hi);
            if a > 0.0 {
                b = b.min(2.0 * a);
            }
            if hi - b < 1e-3 * (b - a) {
                b = hi;
            }
            let half = 0.5 * (b - a);
            for (x, w) in rule.nodes.iter().zip(&rule.weights) {
                let s = a + half * (x + 1.0);
                let ws = w * half * s;
                let z = UpperHalfArgument::new(k * s)?;
                let js = bessel_j_sequence_scaled(z, mm)?;
                let hs = if i > 0 { Some(hankel_sequence_scaled(z, mm)?) } else { None };
                let wj = ws * (kappa * (s - hi)).exp();
                let wh = C64::from_polar((-kappa * (s - lo)).exp() * ws, k.re * s);
                basis.eval(s, &mut ell);
                for (mi, slot) in fm.iter_mut().enumerate() {
                    let mut acc = [Z; 2];
                    for (j, l) in ell.iter().enumerate() {
                        acc[0] += coef[0][j][mi] * *l;
                        acc[1] += coef[1][j][mi] * *l;
                    }
                    *slot = acc;
                }
                for mi in 0..modes {
                    let am = (mi as i64 - mm as i64).unsigned_abs() as usize;
                    let jw = js[am] * wj;
                    ij[i][mi][0] += jw * fm[mi][0];
                    ij[i][mi][1] += jw * fm[mi][1];
                    if let Some(hs) = &hs {
                        let hw = hs[am] * wh;
                        ih[i][mi][0] += hw * fm[mi][0];
                        ih[i][mi][1] += hw * fm[mi][1];
                    }
                }
            }
            a = b;
        }
    }
    // cumulative sums: A up to each break, B beyond it, both normalized at the break
    let nb = breaks.len();
    let decay: Vec<f64> = (0..nb).map(|i| if i == 0 { 0.0 } else { (-kappa * (breaks[i] - breaks[i - 1])).exp() }).collect();
    let mut acc_a = vec![vec![[Z; 2]; modes]; nb];
    let mut acc_b = vec![vec![[Z; 2]; modes]; nb];
    for i in 0..nb {
        for mi in 0..modes {
            for c in 0..2 {
                acc_a[i][mi][c] = ij[i][mi][c] + if i > 0 { acc_a[i - 1][mi][c] * decay[i] } else { Z };
            }
        }
    }
    for i in (0..nb).rev() {
        for mi in 0..modes {
            for c in 0..2 {
                acc_b[i][mi][c] = if i + 1 < nb { ih[i + 1][mi][c] + acc_b[i + 1][mi][c] * decay[i + 1] } else { Z };
            }
        }
    }
    let pref = C64::new(0.0, 0.5 * PI);
    let mut radial: Vec<Vec<[C64; 2]>> = Vec::with_capacity(nb);
    for (i, &r) in breaks.iter().enumerate() {
        let z = UpperHalfArgument::new(k * r)?;
        let js = bessel_j_sequence_scaled(z, mm)?;
        let hs = hankel_sequence_scaled(z, mm)?;
        let ph = C64::from_polar(1.0, k.re * r);
        let row = (0..modes)
            .map(|mi| {
                let am = (mi as i64 - mm as i64).unsigned_abs() as usize;
                let mut v = [Z; 2];
                for c in 0..2 {
                    v[c] = pref * (hs[am] * ph * acc_a[i][mi][c] + js[am] * acc_b[i][mi][c]);
                }
                v
            })
            .collect();
        radial.push(row);
    }
    let mut out = Vec::with_capacity(targets.len());
    for (t, &(_, th)) in polar.iter().enumerate() {
        let i = match breaks.binary_search_by(|b| b.total_cmp(&radii[t])) {
            Ok(i) => i,
            Err(i) => {
                if i > 0 && (i == breaks.len() || radii[t] - breaks[i - 1] < breaks[i] - radii[t]) {
                    i - 1
                } else {
                    i
                }
            }
        };
        let c0: Vec<C64> = radial[i].iter().map(|v| v[0]).collect();
        let c1: Vec<C64> = radial[i].iter().map(|v| v[1]).collect();
        let v = [fourier_sum(&c0, th), fourier_sum(&c1, th)];
        if !(v[0].is_finite() && v[1].is_finite()) {
            return Err(Error::Numerical("non-finite volume potential on the polar grid".into()));
        }
        out.push(v);
    }
    Ok(out)
}

/// Velocity gradient `[i][j] = ∂_j f_i` at the grid points by spectral
/// differentiation.
pub(super) fn gradient(g: &Polar, f: &[[C64; 2]]) -> Vec<[[C64; 2]; 2]> {
    let n_r = g.radii.len();
    let nt = g.n_theta;
    let mm = max_mode(nt) as i64;
    let d = RadialBasis::new(g.radii, g.radius).diff_matrix();
    let mut out = vec![[[Z; 2]; 2]; f.len()];
    for a in 0..2 {
        let v: Vec<C64> = f.iter().map(|x| x[a]).collect();
        let coef = ring_coefficients(&v, n_r, nt);
        for j in 0..n_r {
            // angular derivative per ring from the Fourier series
            let dc: Vec<C64> = coef[j].iter().enumerate().map(|(i, c)| c * C64::new(0.0, (i as i64 - mm) as f64)).collect();
            for l in 0..nt {
                let th = 2.0 * PI * l as f64 / nt as f64;
                let mut dr = Z;
                for k in 0..n_r {
                    dr += v[k * nt + l] * d[j * n_r + k];
                }
                let dth = fourier_sum(&dc, th);
                let r = g.radii[j];
                let (s, c) = th.sin_cos();
                out[j * nt + l][a] = [dr * c - dth * (s / r), dr * s + dth * (c / r)];
            }
        }
    }
    out
}

/// Values at radius `radius` and the grid angles, by radial interpolation.
pub(super) fn boundary_ring(g: &Polar, f: &[[C64; 2]]) -> Vec<[C64; 2]> {
    let n_r = g.radii.len();
    let nt = g.n_theta;
    let basis = RadialBasis::new(g.radii, g.radius);
    let mut ell = vec![0.0; n_r];
    basis.eval(g.radius, &mut ell);
    (0..nt)
        .map(|l| {
            let mut v = [Z; 2];
            for (j, w) in ell.iter().enumerate() {
                v[0] += f[j * nt + l][0] * *w;
                v[1] += f[j * nt + l][1] * *w;
            }
            v
        })
        .collect()
}

/// Convolution at every grid point and the given extra targets, as
/// [`FieldSample`]s with zero pressure.
pub(super) fn solenoidal_newtonian(g: &Polar, f: &[[C64; 2]], p: &ResolventParameter, targets: &[[f64; 2]]) -> Result<Vec<FieldSample>> {
    let u = helmholtz_convolution(g, f, p, targets)?;
    Ok(targets.iter().zip(u).map(|(&x, u)| FieldSample { x, u, phi: Z }).collect())
}
