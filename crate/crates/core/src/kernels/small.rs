//! Cancellation-free series for `d = G(·;λ) − G(·;0)` in the regime
//! `|λ||x|² ≤ 1/2`.
//!
//! With `L_ℓ = C_ℓ + log(k r)` and `w = (k r)²`,
//!
//! ```text
//! d(r) = −(1/2π) [ C_0 + log k + Σ_{ℓ≥1} a_ℓ k^{2ℓ} r^{2ℓ} L_ℓ ]
//! (1/k²) d^{(m)}(r) = −(1/2π) r^{2−m} Σ_{ℓ≥1} a_ℓ w^{ℓ−1} P_{ℓ,m}
//! ```
//!
//! where `P_{ℓ,m}` collects the `m`-th radial derivative of `r^{2ℓ} L_ℓ`.
//! The logarithmic singularity of `G` is removed analytically, so the small
//! differences `∂^m d` are summed directly and never formed by subtraction.
//! The `ℓ = 1` term carries the whole `O(1)` part of `(1/k²)∂∂d`; dropping it
//! leaves the `O(|λ||x|²)` remainder used for `∇(Γ(·;λ) − Γ(·;0))`.

use crate::special::EULER;
use num_complex::Complex64 as C64;
use std::f64::consts::PI;

/// Radial derivatives of the scaled difference `(1/k²) d`, orders 1..=3,
/// both the full series and the part with `ℓ ≥ 2`.
#[derive(Clone, Copy, Debug)]
pub struct ScaledDifference {
    pub full: [C64; 4],
    pub tail: [C64; 4],
}

const MAX_TERMS: usize = 40;

fn p_poly(l: f64, big_l: C64) -> [C64; 4] {
    let one = C64::new(1.0, 0.0);
    [
        big_l,
        big_l * (2.0 * l) + one,
        big_l * (2.0 * l * (2.0 * l - 1.0)) + (4.0 * l - 1.0),
        big_l * (2.0 * l * (2.0 * l - 1.0) * (2.0 * l - 2.0)) + (2.0 * l * (2.0 * l - 1.0) + (4.0 * l - 1.0) * (2.0 * l - 2.0)),
    ]
}

/// Evaluates `(1/k²) d^{(m)}(r)` for `m = 0..=3` (index 0 omits the constant
/// `ℓ = 0` term).
pub fn scaled_difference(k: C64, r: f64) -> ScaledDifference {
    let kr = k * r;
    let log_kr = kr.ln();
    let w = kr * kr;
    let mut sums = [C64::new(0.0, 0.0); 4];
    let mut tail = [C64::new(0.0, 0.0); 4];
    let mut a = 1.0f64;
    let mut psi = -EULER;
    let mut wl = C64::new(1.0, 0.0);
    let ln2 = std::f64::consts::LN_2;
    for l in 1..=MAX_TERMS {
        let lf = l as f64;
        a = -a / (4.0 * lf * lf);
        psi += 1.0 / lf;
        if l > 1 {
            wl *= w;
        }
        let big_l = C64::new(-ln2 - psi, -0.5 * PI) + log_kr;
        let p = p_poly(lf, big_l);
        let mut tmax = 0.0f64;
        for m in 0..4 {
            let t = p[m] * wl * a;
            sums[m] += t;
            if l > 1 {
                tail[m] += t;
            }
            tmax = tmax.max(t.norm());
        }
        if l > 1 && tmax < 1e-18 * sums[1].norm().max(1e-300) {
            break;
        }
    }
    let pre = -1.0 / (2.0 * PI);
    let mut full = [C64::new(0.0, 0.0); 4];
    let mut tl = [C64::new(0.0, 0.0); 4];
    for m in 0..4 {
        let rp = r.powi(2 - m as i32);
        full[m] = sums[m] * (pre * rp);
        tl[m] = tail[m] * (pre * rp);
    }
    ScaledDifference { full, tail: tl }
}
