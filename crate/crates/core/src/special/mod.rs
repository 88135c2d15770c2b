//! Special functions: digamma at integers, the Hankel series coefficients,
//! `H0` and its first three derivatives, and integer/half-integer order
//! Hankel functions of the first kind via the exponential integral
//! representation.
//!
//! Arguments live in the open upper half-plane. Small arguments use the
//! logarithmic power series; large ones use the integral representation.

pub mod bessel;
pub mod dd;

use crate::error::{Error, Result};
use crate::quadrature::{adaptive_gk21, gauss_legendre, GaussRule};
use dd::{Dd, DdC, EULER_GAMMA, LN2, PI as DD_PI};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::{Arc, OnceLock};

/// Euler–Mascheroni constant.
pub const EULER: f64 = 0.577_215_664_901_532_9;

/// Radius separating the series and integral evaluation paths.
pub const SWITCH_RADIUS: f64 = 8.0;

/// Below this modulus the series is summed in binary64; above it in
/// double-double, since the terms grow like `e^{|z|}` while the sum decays.
const DD_RADIUS: f64 = 2.0;

/// Term cap for the power series; reaching it is an error.
pub const SERIES_MAX_TERMS: usize = 60;

/// Complex argument with `|z| > 0` and `0 < arg z < π`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UpperHalfArgument(Complex64);

impl UpperHalfArgument {
    pub fn new(z: Complex64) -> Result<Self> {
        if !(z.im > 0.0) || !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::arg(format!("z = {z} is not in the open upper half-plane")));
        }
        Ok(UpperHalfArgument(z))
    }

    pub fn value(self) -> Complex64 {
        self.0
    }
}

/// `ψ(n)` for positive integers, `−γ + Σ_{j<n} 1/j`.
pub fn digamma(n: i64) -> Result<f64> {
    if n <= 0 {
        return Err(Error::arg(format!("digamma requires n ≥ 1, got {n}")));
    }
    Ok(digamma_dd(n as usize).to_f64())
}

fn digamma_dd(n: usize) -> Dd {
    let mut s = -EULER_GAMMA;
    for j in 1..n {
        s = s + Dd::new(j as f64).recip();
    }
    s
}

/// Coefficients of the logarithmic series for `H0` and its derivatives.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesCoefficients {
    pub ell: usize,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    /// `C_ℓ = −iπ/2 − log 2 − ψ(ℓ+1)`.
    pub cc: Complex64,
}

/// `a_ℓ` by the forward recurrence `a_{ℓ+1} = −a_ℓ / (4(ℓ+1)²)`.
///
/// Underflows to zero beyond `ℓ ≈ 150`, far past [`SERIES_MAX_TERMS`].
pub fn series_coefficients(ell: usize) -> SeriesCoefficients {
    let mut a = 1.0f64;
    for j in 0..ell {
        a = -a / (4.0 * ((j + 1) * (j + 1)) as f64);
    }
    let l = ell as f64;
    let b = a * 2.0 * l;
    let c = b * (2.0 * l - 1.0);
    let d = c * (2.0 * l - 2.0);
    let re = -(LN2 + digamma_dd(ell + 1)).to_f64();
    SeriesCoefficients { ell, a, b, c, d, cc: Complex64::new(re, -0.5 * PI) }
}

/// Validates `max_order` and `z` for the public evaluators.
fn check_order(max_order: usize) -> Result<()> {
    if max_order > 3 {
        return Err(Error::arg(format!("max_order must be ≤ 3, got {max_order}")));
    }
    Ok(())
}

/// `[H0(z), H0'(z), H0''(z), H0'''(z)]` truncated to `max_order + 1` entries,
/// from the logarithmic power series.
pub fn hankel0_series(z: UpperHalfArgument, max_order: usize) -> Result<Vec<Complex64>> {
    check_order(max_order)?;
    Ok(hankel0_series_raw(z.value())?[..=max_order].to_vec())
}

/// Series path without argument validation; valid on `ℂ ∖ (−∞, 0]`.
pub(crate) fn hankel0_series_raw(z: Complex64) -> Result<[Complex64; 4]> {
    if z.norm() == 0.0 {
        return Err(Error::arg("z = 0"));
    }
    if z.norm() <= DD_RADIUS {
        series_f64(z)
    } else {
        series_dd(z)
    }
}

fn series_f64(z: Complex64) -> Result<[Complex64; 4]> {
    let lz = z.ln();
    let w = z * z;
    let mut sums = [Complex64::new(0.0, 0.0); 4];
    let mut wl = Complex64::new(1.0, 0.0);
    let mut a = 1.0f64;
    let mut psi = -EULER;
    let mut big = 0.0f64;
    for l in 0..=SERIES_MAX_TERMS {
        let lf = l as f64;
        if l > 0 {
            a = -a / (4.0 * lf * lf);
            psi += 1.0 / lf;
            wl *= w;
        }
        let b = a * 2.0 * lf;
        let c = b * (2.0 * lf - 1.0);
        let d = c * (2.0 * lf - 2.0);
        let cl = Complex64::new(-std::f64::consts::LN_2 - psi, -0.5 * PI) + lz;
        let e1 = a;
        let e2 = b + a * (2.0 * lf - 1.0);
        let e3 = c + b * (2.0 * lf - 2.0) + a * (2.0 * lf - 1.0) * (2.0 * lf - 2.0);
        let terms = [cl * a, cl * b + e1, cl * c + e2, cl * d + e3];
        let mut tmax = 0.0f64;
        for m in 0..4 {
            let t = terms[m] * wl;
            sums[m] += t;
            tmax = tmax.max(t.norm());
            big = big.max(sums[m].norm());
        }
        if l > 0 && lf * lf > 0.25 * w.norm() && tmax < 1e-17 * big {
            return Ok(finish(z, sums));
        }
    }
    Err(Error::SeriesNonConvergence { z: z.to_string(), terms: SERIES_MAX_TERMS })
}

fn series_dd(z: Complex64) -> Result<[Complex64; 4]> {
    let lz = DdC::ln_of(z);
    let zd = DdC::from_c64(z);
    let w = zd * zd;
    let wn = w.norm_sqr().to_f64().sqrt();
    let mut sums = [DdC::ZERO; 4];
    let mut wl = DdC::new(Dd::ONE, Dd::ZERO);
    let mut a = Dd::ONE;
    let mut psi = -EULER_GAMMA;
    let half_pi = DD_PI.mul_f64(0.5);
    let mut big = 0.0f64;
    for l in 0..=SERIES_MAX_TERMS {
        let lf = l as f64;
        if l > 0 {
            a = -(a / Dd::new(4.0 * lf * lf));
            psi = psi + Dd::new(lf).recip();
            wl = wl * w;
        }
        let b = a.mul_f64(2.0 * lf);
        let c = b.mul_f64(2.0 * lf - 1.0);
        let d = c.mul_f64(2.0 * lf - 2.0);
        let cl = DdC::new(-(LN2 + psi) + lz.re, lz.im - half_pi);
        let e1 = a;
        let e2 = b + a.mul_f64(2.0 * lf - 1.0);
        let e3 = c + b.mul_f64(2.0 * lf - 2.0) + a.mul_f64((2.0 * lf - 1.0) * (2.0 * lf - 2.0));
        let coefs = [(a, Dd::ZERO), (b, e1), (c, e2), (d, e3)];
        let mut tmax = 0.0f64;
        for m in 0..4 {
            let (k, e) = coefs[m];
            let inner = DdC::new(cl.re * k + e, cl.im * k);
            let t = inner * wl;
            sums[m] = sums[m] + t;
            tmax = tmax.max(t.norm_sqr().to_f64().sqrt());
            big = big.max(sums[m].norm_sqr().to_f64().sqrt());
        }
        if l > 0 && lf * lf > 0.25 * wn && tmax < 1e-30 * big {
            let out = [sums[0].to_c64(), sums[1].to_c64(), sums[2].to_c64(), sums[3].to_c64()];
            return Ok(finish(z, out));
        }
    }
    Err(Error::SeriesNonConvergence { z: z.to_string(), terms: SERIES_MAX_TERMS })
}

/// Applies `(2i/π) z^{−m}` to the accumulated sums.
fn finish(z: Complex64, sums: [Complex64; 4]) -> [Complex64; 4] {
    let pre = Complex64::new(0.0, 2.0 / PI);
    let zi = z.inv();
    let mut zm = Complex64::new(1.0, 0.0);
    let mut out = [Complex64::new(0.0, 0.0); 4];
    for m in 0..4 {
        out[m] = pre * sums[m] * zm;
        zm *= zi;
    }
    out
}

/// `Γ(ν + 1/2)` for `ν ≥ 1/2` with `2ν` an integer.
fn gamma_nu_half(nu: f64) -> f64 {
    let x = nu + 0.5;
    let mut g = if x.fract() == 0.0 { 1.0 } else { PI.sqrt() };
    let mut t = if x.fract() == 0.0 { 1.0 } else { 0.5 };
    while t < x - 0.25 {
        g *= t;
        t += 1.0;
    }
    g
}

const W_BREAKS: [f64; 5] = [0.0, 1.0, 2.5, 4.5, 7.5];
const HOT_NODES: usize = 16;
static HOT_RULE: OnceLock<Arc<GaussRule>> = OnceLock::new();

/// Prefactor multiplying the rotated `w`-integral, without the `e^{iz}` factor.
fn integral_prefactor_scaled(nu: f64, z: Complex64) -> Complex64 {
    let alpha = z.arg();
    let phi = 0.5 * PI - alpha;
    let phase = Complex64::new(0.0, -nu * PI + nu * alpha + phi * (nu + 0.5));
    let mag = 2f64.powf(1.5) / (PI.sqrt() * gamma_nu_half(nu) * z.norm().sqrt());
    phase.exp() * mag / Complex64::new(0.0, 1.0)
}

fn integral_prefactor(nu: f64, z: Complex64) -> Complex64 {
    (Complex64::i() * z).exp() * integral_prefactor_scaled(nu, z)
}

/// `H_ν^{(1)}(z)` from the exponential integral representation, for `ν ≥ 1/2`
/// with `2ν` an integer.
///
/// The `s`-contour is rotated onto the steepest-descent ray and substituted
/// `s = e^{iφ} w² / (2|z|)`, leaving the smooth integrand
/// `e^{−w²} w^{2ν} (1 + c w²)^{ν−1/2}` with `c = e^{iφ}/(2|z|)`.
pub fn hankel_integral(nu: f64, z: UpperHalfArgument) -> Result<Complex64> {
    if !(nu >= 0.5) || (2.0 * nu).fract() != 0.0 {
        return Err(Error::arg(format!("hankel_integral requires ν ≥ 1/2 with 2ν integral, got {nu}")));
    }
    let z = z.value();
    let c = Complex64::from_polar(1.0, 0.5 * PI - z.arg()) / (2.0 * z.norm());
    let e = nu - 0.5;
    let integrand = |w: f64| {
        let w2 = w * w;
        let base = Complex64::new(1.0, 0.0) + c * w2;
        let p = if e == 0.0 { Complex64::new(1.0, 0.0) } else { base.powf(e) };
        [p * ((-w2).exp() * w.powf(2.0 * nu))]
    };
    let j = adaptive_gk21(integrand, &W_BREAKS, 1e-15, 400).map_err(|_| Error::QuadratureNonConvergence(format!("H_{nu}({z})")))?;
    Ok(integral_prefactor(nu, z) * j[0])
}

/// `(H1(z), H2(z))` from the integral representation with shared nodes.
fn hankel12_integral(z: Complex64) -> Result<(Complex64, Complex64)> {
    let (h1, h2) = hankel12_integral_scaled(z)?;
    let e = (Complex64::i() * z).exp();
    Ok((h1 * e, h2 * e))
}

/// From here on the asymptotic expansion's smallest term, about `e^{−2|z|}`,
/// is below double precision.
const ASYMPTOTIC_RADIUS: f64 = 20.0;

/// `e^{−iz} H_ν(z)` from the large-argument expansion
/// `√(2/πz) e^{−i(νπ/2 + π/4)} Σ_j i^j a_j(ν) z^{−j}`.
fn hankel_asymptotic_scaled(nu: f64, z: Complex64) -> Complex64 {
    let mu = 4.0 * nu * nu;
    let w = Complex64::i() / (8.0 * z);
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for j in 1..200 {
        let odd = (2 * j - 1) as f64;
        let next = term * w * ((mu - odd * odd) / j as f64);
        if next.norm() >= term.norm() {
            break;
        }
        term = next;
        sum += term;
        if term.norm() < 1e-17 * sum.norm() {
            break;
        }
    }
    let phase = Complex64::from_polar(1.0, -(0.5 * nu + 0.25) * PI);
    (2.0 / (PI * z)).sqrt() * phase * sum
}

/// `e^{−iz} (H1(z), H2(z))`.
fn hankel12_integral_scaled(z: Complex64) -> Result<(Complex64, Complex64)> {
    if z.norm() >= ASYMPTOTIC_RADIUS {
        return Ok((hankel_asymptotic_scaled(1.0, z), hankel_asymptotic_scaled(2.0, z)));
    }
    let c = Complex64::from_polar(1.0, 0.5 * PI - z.arg()) / (2.0 * z.norm());
    let integrand = |w: f64| {
        let w2 = w * w;
        let s = (Complex64::new(1.0, 0.0) + c * w2).sqrt();
        let g = (-w2).exp() * w2;
        [s * g, s * s * s * (g * w2)]
    };
    // The integrand is analytic within a fixed distance of each interval for
    // |z| ≥ 8, so a fixed composite rule suffices on this hot path.
    let rule = HOT_RULE.get_or_init(|| gauss_legendre(HOT_NODES));
    let mut j = [Complex64::new(0.0, 0.0); 2];
    for w in W_BREAKS.windows(2) {
        let (h, m) = (0.5 * (w[1] - w[0]), 0.5 * (w[1] + w[0]));
        for (u, wt) in rule.nodes.iter().zip(&rule.weights) {
            let v = integrand(m + h * u);
            j[0] += v[0] * (wt * h);
            j[1] += v[1] * (wt * h);
        }
    }
    if !(j[0].is_finite() && j[1].is_finite()) {
        return Err(Error::QuadratureNonConvergence(format!("H_1,2({z})")));
    }
    Ok((integral_prefactor_scaled(1.0, z) * j[0], integral_prefactor_scaled(2.0, z) * j[1]))
}

/// `[H0, H0', H0'', H0''']` from the integral path: `H1`, `H2` anchors, then
/// `H0 = (2/z)H1 − H2` and the derivative identities.
pub fn hankel0_integral_derivs(z: UpperHalfArgument) -> Result<[Complex64; 4]> {
    let z = z.value();
    let (h1, h2) = hankel12_integral(z)?;
    let zi = z.inv();
    let h0 = h1 * 2.0 * zi - h2;
    Ok([h0, -h1, h1 * zi - h0, h1 + h0 * zi - h1 * 2.0 * zi * zi])
}

/// `[H0, H0', H0'', H0''']`, choosing the series for `|z| ≤ 8` and the
/// integral representation beyond.
pub fn hankel0_derivs(z: UpperHalfArgument) -> Result<[Complex64; 4]> {
    if z.value().norm() <= SWITCH_RADIUS {
        hankel0_series_raw(z.value())
    } else {
        hankel0_integral_derivs(z)
    }
}

/// `[H0, H1, H2, H3]` of the first kind on the dispatching path.
pub fn hankel_orders(z: UpperHalfArgument) -> Result<[Complex64; 4]> {
    let zv = z.value();
    let zi = zv.inv();
    let (h0, h1, h2) = if zv.norm() <= SWITCH_RADIUS {
        let [h0, d1, _, _] = hankel0_series_raw(zv)?;
        (h0, -d1, -d1 * 2.0 * zi - h0)
    } else {
        let (h1, h2) = hankel12_integral(zv)?;
        (h1 * 2.0 * zi - h2, h1, h2)
    };
    let h3 = h2 * 4.0 * zi - h1;
    Ok([h0, h1, h2, h3])
}

/// `e^{−iz} [H0, H1, H2, H3]`, finite for arguments with large imaginary part.
pub fn hankel_orders_scaled(z: UpperHalfArgument) -> Result<[Complex64; 4]> {
    let zv = z.value();
    if zv.norm() <= SWITCH_RADIUS {
        let e = (-Complex64::i() * zv).exp();
        return Ok(hankel_orders(z)?.map(|h| h * e));
    }
    let zi = zv.inv();
    let (h1, h2) = hankel12_integral_scaled(zv)?;
    let h0 = h1 * 2.0 * zi - h2;
    Ok([h0, h1, h2, h2 * 4.0 * zi - h1])
}

#[cfg(test)]
mod tests;
