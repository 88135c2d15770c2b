//! Fundamental solutions of the Laplace, Helmholtz and Stokes resolvent
//! equations in the plane, with their derivatives.
//!
//! * `G(x;λ) = (i/4) H0(k|x|)`, `G(x;0) = −(1/2π) log|x|`
//! * `Γ_{αβ}(x;λ) = G δ_{αβ} − (1/λ) ∂_α∂_β (G(x;λ) − G(x;0))`
//! * `Φ_β(x) = x_β / (2π|x|²)`
//!
//! For `|λ||x|² ≤ 1/2` the difference `G(x;λ) − G(x;0)` is summed from its
//! own series (see [`small`]), so neither the `1/λ` prefactor nor the
//! logarithmic singularity amplifies roundoff.

pub mod cancellation;
pub mod decay;
pub mod residual;
pub mod small;
pub mod tensor;

use crate::error::{Error, Result};
use crate::special::{hankel0_derivs, UpperHalfArgument};
use num_complex::Complex64 as C64;
use std::f64::consts::PI;
use tensor::*;

/// Regime boundary `|λ||x|²` between the direct and cancellation-safe paths.
pub const REGIME_THRESHOLD: f64 = 0.5;

/// Validated resolvent parameter `λ = r e^{iτ}` in the sector `S_θ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResolventParameter {
    pub theta: f64,
    pub lambda: C64,
    pub r: f64,
    pub tau: f64,
    /// `k = √r e^{i(π+τ)/2}`, so `k² = −λ` and `Im k > 0`.
    pub k: C64,
}

/// Builds the parameter, rejecting `λ = 0`, `θ ∉ (0, π/2)` and `|arg λ| ≥ π − θ`.
pub fn make_resolvent_parameter(lambda: C64, theta: f64) -> Result<ResolventParameter> {
    if !(theta > 0.0 && theta < 0.5 * PI) {
        return Err(Error::arg(format!("theta = {theta} must lie in (0, π/2)")));
    }
    let r = lambda.norm();
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::arg(format!("lambda = {lambda} must be nonzero and finite")));
    }
    let tau = lambda.arg();
    if tau.abs() >= PI - theta {
        return Err(Error::arg(format!("lambda = {lambda} lies outside the sector |arg λ| < π − θ = {}", PI - theta)));
    }
    let k = C64::from_polar(r.sqrt(), 0.5 * (PI + tau));
    Ok(ResolventParameter { theta, lambda, r, tau, k })
}

impl ResolventParameter {
    pub fn new(lambda: C64, theta: f64) -> Result<Self> {
        make_resolvent_parameter(lambda, theta)
    }

    /// Parameter with `λ̄` in place of `λ`.
    pub fn conj(&self) -> Self {
        make_resolvent_parameter(self.lambda.conj(), self.theta).expect("conjugate stays in sector")
    }

    /// Dimensionless regime indicator `|λ||x|²`.
    pub fn regime(&self, r: f64) -> f64 {
        self.r * r * r
    }
}

/// Which evaluation route produced a kernel value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Path {
    Direct,
    CancellationSafe,
}

/// A kernel value tagged with its evaluation path and `|λ||x|²`.
#[derive(Clone, Copy, Debug)]
pub struct KernelBlock<T> {
    pub value: T,
    pub path: Path,
    pub regime: f64,
}

/// Scalar, vector, matrix or rank-3 tensor value.
#[derive(Clone, Copy, Debug)]
pub enum Tensor {
    Scalar(C64),
    Vector(CVec2),
    Matrix(CMat2),
    Rank3(CTen3),
}

impl Tensor {
    pub fn norm(&self) -> f64 {
        match self {
            Tensor::Scalar(v) => v.norm(),
            Tensor::Vector(v) => vec_norm(v),
            Tensor::Matrix(m) => mat_norm(m),
            Tensor::Rank3(t) => ten_norm(t),
        }
    }
}

/// Checks `x ≠ 0` and returns `|x|`.
pub fn displacement_norm(x: [f64; 2]) -> Result<f64> {
    let r = x[0].hypot(x[1]);
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::arg(format!("displacement {x:?} must be nonzero and finite")));
    }
    Ok(r)
}

fn c(v: f64) -> C64 {
    C64::new(v, 0.0)
}

/// Radial derivatives `[G0, G0', G0'', G0''']` of `−(1/2π) log r`.
pub fn laplace_radial(r: f64) -> [f64; 4] {
    let q = 1.0 / (2.0 * PI);
    [-q * r.ln(), -q / r, q / (r * r), -1.0 / (PI * r * r * r)]
}

/// `G(x;0)` and its Cartesian derivatives up to `order`.
pub fn laplace_green(x: [f64; 2], order: usize) -> Result<Tensor> {
    let r = displacement_norm(x)?;
    let g = laplace_radial(r);
    Ok(match order {
        0 => Tensor::Scalar(c(g[0])),
        1 => Tensor::Vector(radial_grad(x, r, c(g[1]))),
        2 => Tensor::Matrix(radial_hess(x, r, c(g[1]), c(g[2]))),
        3 => Tensor::Rank3(radial_third(x, r, c(g[1]), c(g[2]), c(g[3]))),
        _ => return Err(Error::arg(format!("order {order} > 3"))),
    })
}

/// Radial derivatives `[G, G', G'', G''']` of `(i/4) H0(k r)`.
pub fn helmholtz_radial(k: C64, r: f64) -> Result<[C64; 4]> {
    let h = hankel0_derivs(UpperHalfArgument::new(k * r)?)?;
    let i4 = C64::new(0.0, 0.25);
    Ok([i4 * h[0], i4 * k * h[1], i4 * k * k * h[2], i4 * k * k * k * h[3]])
}

/// `G(x;λ)` and its Cartesian derivatives up to `order`.
pub fn helmholtz_green(x: [f64; 2], p: &ResolventParameter, order: usize) -> Result<KernelBlock<Tensor>> {
    let r = displacement_norm(x)?;
    let g = helmholtz_radial(p.k, r)?;
    let value = match order {
        0 => Tensor::Scalar(g[0]),
        1 => Tensor::Vector(radial_grad(x, r, g[1])),
        2 => Tensor::Matrix(radial_hess(x, r, g[1], g[2])),
        3 => Tensor::Rank3(radial_third(x, r, g[1], g[2], g[3])),
        _ => return Err(Error::arg(format!("order {order} > 3"))),
    };
    Ok(KernelBlock { value, path: Path::Direct, regime: p.regime(r) })
}

/// Radial derivatives of `d = G(·;λ) − G(·;0)`, orders 1..=3, by the regime's path.
fn difference_radial(p: &ResolventParameter, r: f64) -> Result<([C64; 4], Path)> {
    if p.regime(r) <= REGIME_THRESHOLD {
        let s = small::scaled_difference(p.k, r);
        let k2 = p.k * p.k;
        Ok(([Z, s.full[1] * k2, s.full[2] * k2, s.full[3] * k2], Path::CancellationSafe))
    } else {
        let g = helmholtz_radial(p.k, r)?;
        let g0 = laplace_radial(r);
        Ok(([Z, g[1] - g0[1], g[2] - g0[2], g[3] - g0[3]], Path::Direct))
    }
}

/// `∇^order {G(x;λ) − G(x;0)}` for `order ∈ {1, 2, 3}`.
pub fn helmholtz_difference(x: [f64; 2], p: &ResolventParameter, order: usize) -> Result<KernelBlock<Tensor>> {
    let r = displacement_norm(x)?;
    let (d, path) = difference_radial(p, r)?;
    let value = match order {
        1 => Tensor::Vector(radial_grad(x, r, d[1])),
        2 => Tensor::Matrix(radial_hess(x, r, d[1], d[2])),
        3 => Tensor::Rank3(radial_third(x, r, d[1], d[2], d[3])),
        _ => return Err(Error::arg(format!("difference order must be 1..=3, got {order}"))),
    };
    Ok(KernelBlock { value, path, regime: p.regime(r) })
}

/// `∂_β∂_α∂_γ {G(x;λ) − G(x;0)}`.
pub fn helmholtz_diff_third(x: [f64; 2], p: &ResolventParameter) -> Result<KernelBlock<CTen3>> {
    let b = helmholtz_difference(x, p, 3)?;
    match b.value {
        Tensor::Rank3(t) => Ok(KernelBlock { value: t, path: b.path, regime: b.regime }),
        _ => unreachable!(),
    }
}

/// Radial derivatives of `(1/k²) d`, orders 1..=3: full and `ℓ ≥ 2` parts.
fn scaled_radial(p: &ResolventParameter, r: f64, g: &[C64; 4]) -> ([C64; 4], [C64; 4], Path) {
    if p.regime(r) <= REGIME_THRESHOLD {
        let s = small::scaled_difference(p.k, r);
        (s.full, s.tail, Path::CancellationSafe)
    } else {
        let g0 = laplace_radial(r);
        let ik2 = (p.k * p.k).inv();
        let f = [Z, (g[1] - g0[1]) * ik2, (g[2] - g0[2]) * ik2, (g[3] - g0[3]) * ik2];
        (f, f, Path::Direct)
    }
}

/// Beyond `Im(k)|x|` of this the Helmholtz terms of `Γ` fall below double
/// precision relative to the stationary ones, for every `λ` in the sector.
const NEGLIGIBLE_DECAY: f64 = 50.0;

/// `helmholtz_radial`, or zeros where it is negligible inside `Γ`.
fn stokes_radial(p: &ResolventParameter, r: f64) -> Result<[C64; 4]> {
    if p.k.im * r > NEGLIGIBLE_DECAY {
        Ok([Z; 4])
    } else {
        helmholtz_radial(p.k, r)
    }
}

/// Stokeslet `Γ(x;λ)`.
pub fn stokeslet(x: [f64; 2], p: &ResolventParameter) -> Result<KernelBlock<CMat2>> {
    let r = displacement_norm(x)?;
    let g = stokes_radial(p, r)?;
    let (s, _, path) = scaled_radial(p, r, &g);
    let mut m = radial_hess(x, r, s[1], s[2]);
    m[0][0] += g[0];
    m[1][1] += g[0];
    Ok(KernelBlock { value: m, path, regime: p.regime(r) })
}

/// `Γ(x;λ)` together with `∂_γ Γ_{αβ}(x;λ)` stored as `[α][β][γ]`.
pub fn stokeslet_with_gradient(x: [f64; 2], p: &ResolventParameter) -> Result<(CMat2, CTen3)> {
    let r = displacement_norm(x)?;
    let g = stokes_radial(p, r)?;
    let (s, _, _) = scaled_radial(p, r, &g);
    let mut m = radial_hess(x, r, s[1], s[2]);
    m[0][0] += g[0];
    m[1][1] += g[0];
    let mut t = radial_third(x, r, s[1], s[2], s[3]);
    let dg = radial_grad(x, r, g[1]);
    for a in 0..2 {
        for gm in 0..2 {
            t[a][a][gm] += dg[gm];
        }
    }
    Ok((m, t))
}

/// `∂_γ Γ_{αβ}(x;λ)` as `[α][β][γ]`.
pub fn grad_stokeslet(x: [f64; 2], p: &ResolventParameter) -> Result<KernelBlock<CTen3>> {
    let r = displacement_norm(x)?;
    let (_, t) = stokeslet_with_gradient(x, p)?;
    let path = if p.regime(r) <= REGIME_THRESHOLD { Path::CancellationSafe } else { Path::Direct };
    Ok(KernelBlock { value: t, path, regime: p.regime(r) })
}

/// Stationary Stokeslet `Γ(x;0) = (1/4π){−δ log|x| + xx/|x|²}`.
pub fn stokeslet0(x: [f64; 2], r: f64) -> [[f64; 2]; 2] {
    let q = 1.0 / (4.0 * PI);
    let lr = r.ln();
    let r2 = r * r;
    let mut m = [[0.0; 2]; 2];
    for a in 0..2 {
        for b in 0..2 {
            m[a][b] = q * (-delta(a, b) * lr + x[a] * x[b] / r2);
        }
    }
    m
}

/// `∂_γ Γ_{αβ}(x;0) = (1/4π)(δ_{αγ}x_β + δ_{βγ}x_α − δ_{αβ}x_γ)/|x|² − (1/2π) xxx/|x|⁴`.
pub fn grad_stokeslet0(x: [f64; 2], r: f64) -> [[[f64; 2]; 2]; 2] {
    let r2 = r * r;
    let mut t = [[[0.0; 2]; 2]; 2];
    for a in 0..2 {
        for b in 0..2 {
            for g in 0..2 {
                let s = delta(a, g) * x[b] + delta(b, g) * x[a] - delta(a, b) * x[g];
                t[a][b][g] = s / (4.0 * PI * r2) - x[a] * x[b] * x[g] / (2.0 * PI * r2 * r2);
            }
        }
    }
    t
}

/// `Γ(x;0)` (order 0) or its gradient (order 1).
pub fn stokeslet_stationary(x: [f64; 2], order: usize) -> Result<Tensor> {
    let r = displacement_norm(x)?;
    match order {
        0 => {
            let m = stokeslet0(x, r);
            Ok(Tensor::Matrix([[c(m[0][0]), c(m[0][1])], [c(m[1][0]), c(m[1][1])]]))
        }
        1 => Ok(Tensor::Rank3(real_ten(&grad_stokeslet0(x, r)))),
        _ => Err(Error::arg(format!("stationary Stokeslet order must be 0 or 1, got {order}"))),
    }
}

pub(crate) fn real_ten(t: &[[[f64; 2]; 2]; 2]) -> CTen3 {
    let mut o = ZTEN;
    for a in 0..2 {
        for b in 0..2 {
            for g in 0..2 {
                o[a][b][g] = c(t[a][b][g]);
            }
        }
    }
    o
}

/// `Φ(x) = x / (2π|x|²)`.
pub fn pressure0(x: [f64; 2], r: f64) -> [f64; 2] {
    let q = 1.0 / (2.0 * PI * r * r);
    [x[0] * q, x[1] * q]
}

/// `∂_α Φ_β(x) = −∂_α∂_β G(x;0) = δ/(2π|x|²) − x_αx_β/(π|x|⁴)`.
pub fn grad_pressure0(x: [f64; 2], r: f64) -> [[f64; 2]; 2] {
    let r2 = r * r;
    let mut m = [[0.0; 2]; 2];
    for a in 0..2 {
        for b in 0..2 {
            m[a][b] = delta(a, b) / (2.0 * PI * r2) - x[a] * x[b] / (PI * r2 * r2);
        }
    }
    m
}

/// Pressure kernel `Φ` (order 0) or `∇Φ` as `[α][β] = ∂_α Φ_β` (order 1).
pub fn pressure_kernel(x: [f64; 2], order: usize) -> Result<Tensor> {
    let r = displacement_norm(x)?;
    match order {
        0 => {
            let v = pressure0(x, r);
            Ok(Tensor::Vector([c(v[0]), c(v[1])]))
        }
        1 => {
            let m = grad_pressure0(x, r);
            Ok(Tensor::Matrix([[c(m[0][0]), c(m[0][1])], [c(m[1][0]), c(m[1][1])]]))
        }
        _ => Err(Error::arg(format!("pressure kernel order must be 0 or 1, got {order}"))),
    }
}

/// `∇{Γ(x;λ) − Γ(x;0)}` as `[α][β][γ]`.
///
/// In the small regime this is `δ ∇d + ∇³((1/k²) d_{ℓ≥2})`: the `ℓ = 1` term
/// of the scaled difference plus `δ ∇G(x;0)` is exactly `∇Γ(x;0)`.
pub fn grad_stokeslet_difference(x: [f64; 2], p: &ResolventParameter) -> Result<KernelBlock<CTen3>> {
    let r = displacement_norm(x)?;
    let regime = p.regime(r);
    if regime <= REGIME_THRESHOLD {
        let s = small::scaled_difference(p.k, r);
        let k2 = p.k * p.k;
        let mut t = radial_third(x, r, s.tail[1], s.tail[2], s.tail[3]);
        let dd = radial_grad(x, r, s.full[1] * k2);
        for a in 0..2 {
            for g in 0..2 {
                t[a][a][g] += dd[g];
            }
        }
        Ok(KernelBlock { value: t, path: Path::CancellationSafe, regime })
    } else {
        let (_, t) = stokeslet_with_gradient(x, p)?;
        let t0 = real_ten(&grad_stokeslet0(x, r));
        Ok(KernelBlock { value: ten_sub(&t, &t0), path: Path::Direct, regime })
    }
}

#[cfg(test)]
mod tests;
