//! Small fixed-size tensors and the chain rule for radial functions.

use num_complex::Complex64 as C64;

pub type CVec2 = [C64; 2];
pub type CMat2 = [[C64; 2]; 2];
pub type CTen3 = [[[C64; 2]; 2]; 2];

pub const Z: C64 = C64 { re: 0.0, im: 0.0 };
pub const ZMAT: CMat2 = [[Z; 2]; 2];
pub const ZTEN: CTen3 = [[[Z; 2]; 2]; 2];

#[inline]
pub fn delta(a: usize, b: usize) -> f64 {
    if a == b {
        1.0
    } else {
        0.0
    }
}

/// `S_{αβγ} = δ_{βγ}x_α + δ_{αγ}x_β + δ_{αβ}x_γ`.
#[inline]
pub fn sym_s(x: [f64; 2], a: usize, b: usize, g: usize) -> f64 {
    delta(b, g) * x[a] + delta(a, g) * x[b] + delta(a, b) * x[g]
}

/// Gradient of a radial function with derivative `f1` at `r = |x|`.
pub fn radial_grad(x: [f64; 2], r: f64, f1: C64) -> CVec2 {
    [f1 * (x[0] / r), f1 * (x[1] / r)]
}

/// Hessian of a radial function: `f2 x̂x̂ + f1 (δ/r − xx/r³)`.
pub fn radial_hess(x: [f64; 2], r: f64, f1: C64, f2: C64) -> CMat2 {
    let mut h = ZMAT;
    let r2 = r * r;
    for a in 0..2 {
        for b in 0..2 {
            let xx = x[a] * x[b];
            h[a][b] = f2 * (xx / r2) + f1 * (delta(a, b) / r - xx / (r2 * r));
        }
    }
    h
}

/// Third derivatives of a radial function:
/// `f3 x̂x̂x̂ + f2 (S/r² − 3xxx/r⁴) + f1 (3xxx/r⁵ − S/r³)`.
pub fn radial_third(x: [f64; 2], r: f64, f1: C64, f2: C64, f3: C64) -> CTen3 {
    let mut t = ZTEN;
    let r2 = r * r;
    let r3 = r2 * r;
    for a in 0..2 {
        for b in 0..2 {
            for g in 0..2 {
                let xxx = x[a] * x[b] * x[g];
                let s = sym_s(x, a, b, g);
                t[a][b][g] = f3 * (xxx / r3) + f2 * (s / r2 - 3.0 * xxx / (r2 * r2)) + f1 * (3.0 * xxx / (r3 * r2) - s / r3);
            }
        }
    }
    t
}

pub fn mat_norm(m: &CMat2) -> f64 {
    m.iter().flatten().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

pub fn ten_norm(t: &CTen3) -> f64 {
    t.iter().flatten().flatten().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

pub fn vec_norm(v: &CVec2) -> f64 {
    (v[0].norm_sqr() + v[1].norm_sqr()).sqrt()
}

pub fn ten_sub(a: &CTen3, b: &CTen3) -> CTen3 {
    let mut t = ZTEN;
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                t[i][j][k] = a[i][j][k] - b[i][j][k];
            }
        }
    }
    t
}

pub fn mat_sub(a: &CMat2, b: &CMat2) -> CMat2 {
    let mut m = ZMAT;
    for i in 0..2 {
        for j in 0..2 {
            m[i][j] = a[i][j] - b[i][j];
        }
    }
    m
}
