//! Integer-order sequences `J_m(z)` and `H_m(z)`, `m = 0..=m_max`, for
//! arguments in the open upper half-plane.

use super::{hankel_orders, hankel_orders_scaled, UpperHalfArgument};
use crate::error::{Error, Result};
use num_complex::Complex64;

const RESCALE: f64 = 1e250;

/// `J_0..=J_{m_max}` by Miller's backward recurrence, normalized with
/// `e^{−iz} = J_0 + 2 Σ_{k≥1} (−i)^k J_k`. For `Im z ≥ 0` every term of that
/// sum is at most of the size of the total, so the normalization does not cancel.
pub fn bessel_j_sequence(z: UpperHalfArgument, m_max: usize) -> Result<Vec<Complex64>> {
    j_sequence(z, m_max, false)
}

/// `e^{−Im z} J_m(z)`, `m = 0..=m_max`; finite for any argument size.
pub fn bessel_j_sequence_scaled(z: UpperHalfArgument, m_max: usize) -> Result<Vec<Complex64>> {
    j_sequence(z, m_max, true)
}

fn j_sequence(z: UpperHalfArgument, m_max: usize, scaled: bool) -> Result<Vec<Complex64>> {
    let z = z.value();
    let a = z.norm();
    let start = (m_max as f64).max(a) + 20.0 * a.cbrt() + 40.0;
    let start = start.ceil() as usize;
    let zi = z.inv();
    let mut out = vec![Complex64::new(0.0, 0.0); m_max + 1];
    // number of rescalings applied after each stored value
    let mut lag = vec![0i32; m_max + 1];
    let mut rescales = 0i32;
    let mut next = Complex64::new(0.0, 0.0);
    let mut cur = Complex64::new(1e-30, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    // (−i)^m cycles through 1, −i, −1, i
    let phase = |m: usize| match m % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    };
    for m in (0..=start).rev() {
        if m <= m_max {
            out[m] = cur;
            lag[m] = rescales;
        }
        sum += if m == 0 { cur } else { cur * phase(m) * 2.0 };
        if m == 0 {
            break;
        }
        let prev = cur * (2.0 * m as f64) * zi - next;
        next = cur;
        cur = prev;
        if cur.norm() > RESCALE {
            let s = 1.0 / RESCALE;
            cur *= s;
            next *= s;
            sum *= s;
            rescales += 1;
        }
    }
    // divide through the modulus: `a / b` in num-complex forms `|b|²`, which overflows here
    let m = sum.norm();
    let e = if scaled { Complex64::from_polar(1.0, -z.re) } else { (-Complex64::i() * z).exp() };
    let scale = e * (sum / m).conj() / m;
    if !scale.is_finite() {
        return Err(Error::Numerical(format!("Bessel J normalization failed at z = {z}")));
    }
    for (v, l) in out.iter_mut().zip(&lag) {
        *v *= scale;
        for _ in *l..rescales {
            *v /= RESCALE;
        }
    }
    Ok(out)
}

/// `H_0..=H_{m_max}` of the first kind by forward recurrence from `H_0, H_1`.
/// The recurrence is stable for this solution: `H_m` never decays in `m`
/// faster than the competing solution.
pub fn hankel_sequence(z: UpperHalfArgument, m_max: usize) -> Result<Vec<Complex64>> {
    let [h0, h1, _, _] = hankel_orders(z)?;
    h_recurrence(z, h0, h1, m_max)
}

/// `e^{−iz} H_m(z)`, `m = 0..=m_max`.
pub fn hankel_sequence_scaled(z: UpperHalfArgument, m_max: usize) -> Result<Vec<Complex64>> {
    let [h0, h1, _, _] = hankel_orders_scaled(z)?;
    h_recurrence(z, h0, h1, m_max)
}

fn h_recurrence(z: UpperHalfArgument, h0: Complex64, h1: Complex64, m_max: usize) -> Result<Vec<Complex64>> {
    let zi = z.value().inv();
    let mut out = Vec::with_capacity(m_max + 1);
    out.push(h0);
    if m_max >= 1 {
        out.push(h1);
    }
    for m in 1..m_max {
        let v = out[m] * (2.0 * m as f64) * zi - out[m - 1];
        out.push(v);
    }
    if out.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical(format!("Hankel recurrence overflowed at z = {}, m ≤ {m_max}", z.value())));
    }
    Ok(out)
}
