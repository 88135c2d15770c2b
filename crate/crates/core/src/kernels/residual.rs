//! Finite-difference residuals of the Stokes resolvent system for `(Γ, Φ)`.

use super::tensor::*;
use super::*;
use crate::error::Result;

/// Fourth-order central second difference weights at offsets `-2..=2`.
const D2: [f64; 5] = [-1.0 / 12.0, 16.0 / 12.0, -30.0 / 12.0, 16.0 / 12.0, -1.0 / 12.0];
/// Fourth-order central first difference weights at offsets `-2..=2`.
const D1: [f64; 5] = [1.0 / 12.0, -8.0 / 12.0, 0.0, 8.0 / 12.0, -1.0 / 12.0];

/// Relative momentum and divergence residuals of `Γ(·;λ)`, `Φ` at `x`.
///
/// Momentum: `(λ − Δ)Γ_{αβ} + ∂_αΦ_β`, normalized by `|λΓ| + |∇Φ|`.
/// Divergence: `∂_αΓ_{αβ}`, normalized by `|∇Γ|`. Derivatives use
/// fourth-order central differences with step `h`.
pub fn stokeslet_pde_residual(x: [f64; 2], p: &ResolventParameter, h: f64) -> Result<(f64, f64)> {
    let mut samples = [[ZMAT; 5]; 2];
    for dir in 0..2 {
        for (j, off) in (-2i32..=2).enumerate() {
            let mut y = x;
            y[dir] += off as f64 * h;
            samples[dir][j] = stokeslet(y, p)?.value;
        }
    }
    let g = samples[0][2];
    let r = displacement_norm(x)?;
    let dphi = grad_pressure0(x, r);
    let mut mom = ZMAT;
    let mut div = [Z; 2];
    let mut grad = ZTEN;
    for a in 0..2 {
        for b in 0..2 {
            let mut lap = Z;
            for dir in 0..2 {
                let mut d1 = Z;
                for j in 0..5 {
                    lap += samples[dir][j][a][b] * (D2[j] / (h * h));
                    d1 += samples[dir][j][a][b] * (D1[j] / h);
                }
                grad[a][b][dir] = d1;
            }
            mom[a][b] = p.lambda * g[a][b] - lap + dphi[a][b];
        }
    }
    for b in 0..2 {
        div[b] = grad[0][b][0] + grad[1][b][1];
    }
    let mut lg = ZMAT;
    for a in 0..2 {
        for b in 0..2 {
            lg[a][b] = p.lambda * g[a][b];
        }
    }
    let scale_m = mat_norm(&lg) + dphi.iter().flatten().map(|v| v * v).sum::<f64>().sqrt();
    Ok((mat_norm(&mom) / scale_m, vec_norm(&div) / ten_norm(&grad)))
}

/// Relative residual of `(λ − Δ)G(·;λ) = 0` at `x`.
pub fn helmholtz_pde_residual(x: [f64; 2], p: &ResolventParameter, h: f64) -> Result<f64> {
    let g0 = match helmholtz_green(x, p, 0)?.value {
        Tensor::Scalar(v) => v,
        _ => unreachable!(),
    };
    let mut lap = Z;
    for dir in 0..2 {
        for (j, off) in (-2i32..=2).enumerate() {
            let mut y = x;
            y[dir] += off as f64 * h;
            if let Tensor::Scalar(v) = helmholtz_green(y, p, 0)?.value {
                lap += v * (D2[j] / (h * h));
            }
        }
    }
    Ok((p.lambda * g0 - lap).norm() / (p.lambda * g0).norm())
}
