//! The individually "problematic" summands of the small-argument expansions of
//! `∂³(G(x;λ) − G(x;0))` and `∇(Γ(x;λ) − Γ(x;0))`.
//!
//! Each summand is of the wrong order in `|λ||x|²` on its own; the point of
//! these sets is that they cancel exactly. Summing them numerically is the
//! check.

use super::tensor::*;
use super::{displacement_norm, grad_stokeslet0, laplace_radial, ResolventParameter};
use crate::error::Result;
use crate::special::series_coefficients;
use num_complex::Complex64 as C64;
use std::f64::consts::PI;

/// Named rank-3 summands whose total should vanish.
#[derive(Clone, Debug)]
pub struct TermSet {
    pub labels: Vec<&'static str>,
    pub terms: Vec<CTen3>,
}

impl TermSet {
    pub fn sum(&self) -> CTen3 {
        let mut s = ZTEN;
        for t in &self.terms {
            for a in 0..2 {
                for b in 0..2 {
                    for g in 0..2 {
                        s[a][b][g] += t[a][b][g];
                    }
                }
            }
        }
        s
    }

    /// Max over components of `|Σ terms| / max |term|`; components whose
    /// summands all vanish are skipped.
    pub fn relative_residual(&self) -> f64 {
        let s = self.sum();
        let mut worst = 0.0f64;
        for a in 0..2 {
            for b in 0..2 {
                for g in 0..2 {
                    let big = self.terms.iter().map(|t| t[a][b][g].norm()).fold(0.0, f64::max);
                    if big > 0.0 {
                        worst = worst.max(s[a][b][g].norm() / big);
                    }
                }
            }
        }
        worst
    }
}

fn build(f: impl Fn(usize, usize, usize) -> C64) -> CTen3 {
    let mut t = ZTEN;
    for a in 0..2 {
        for b in 0..2 {
            for g in 0..2 {
                t[a][b][g] = f(a, b, g);
            }
        }
    }
    t
}

fn t1(x: [f64; 2], r: f64, a: usize, b: usize, g: usize) -> f64 {
    3.0 * x[a] * x[b] * x[g] / r.powi(5) - sym_s(x, a, b, g) / r.powi(3)
}

fn t2(x: [f64; 2], r: f64, a: usize, b: usize, g: usize) -> f64 {
    sym_s(x, a, b, g) / (r * r) - 3.0 * x[a] * x[b] * x[g] / r.powi(4)
}

/// `(P1), (P2), (P3)` and `−∂³G(x;0)`.
pub fn problematic_p(x: [f64; 2], p: &ResolventParameter) -> Result<TermSet> {
    let r = displacement_norm(x)?;
    let k = p.k;
    let kr = k * r;
    let lkr = kr.ln();
    let q = -1.0 / (2.0 * PI);
    let s0 = series_coefficients(0);
    let s1 = series_coefficients(1);
    let xxx = |a: usize, b: usize, g: usize| x[a] * x[b] * x[g];
    let p1 = build(|a, b, g| k.powi(3) * (q * xxx(a, b, g) / r.powi(3)) * (s0.a * (-1.0) * (-2.0)) * kr.powi(-3));
    let p2_log = build(|a, b, g| k * k * (q * t2(x, r, a, b, g)) * s1.c * lkr);
    let p2_const = build(|a, b, g| k * k * (q * t2(x, r, a, b, g)) * (s0.a * -1.0) * kr.powi(-2));
    let p3_log = build(|a, b, g| k * (q * t1(x, r, a, b, g)) * s1.b * kr * lkr);
    let p3_const = build(|a, b, g| k * (q * t1(x, r, a, b, g)) * s0.a * kr.inv());
    let g0 = laplace_radial(r);
    let third0 = radial_third(x, r, C64::new(g0[1], 0.0), C64::new(g0[2], 0.0), C64::new(g0[3], 0.0));
    let minus_g0 = build(|a, b, g| -third0[a][b][g]);
    Ok(TermSet {
        labels: vec!["P1", "P2_log", "P2_const", "P3_log", "P3_const", "-d3G0"],
        terms: vec![p1, p2_log, p2_const, p3_log, p3_const, minus_g0],
    })
}

/// `(Q1), (Q2)`, the three summands of `(Q3)`, the two of `(Q4)`, and
/// `B3 = −∇Γ(x;0)`.
pub fn problematic_q(x: [f64; 2], p: &ResolventParameter) -> Result<TermSet> {
    let r = displacement_norm(x)?;
    let k = p.k;
    let kr = k * r;
    let q = -1.0 / (2.0 * PI);
    let s0 = series_coefficients(0);
    let s1 = series_coefficients(1);
    let q1 = build(|a, b, g| k * (q * delta(a, b) * x[g] / r) * s0.a * kr.inv());
    let q2 = build(|a, b, g| k * (q * x[a] * x[b] * x[g] / r.powi(3)) * s1.c * kr.inv());
    let q3_c = build(|a, b, g| s1.cc * (q * t2(x, r, a, b, g) * s1.c));
    let q3_b = build(|a, b, g| C64::new(q * t2(x, r, a, b, g) * s1.b, 0.0));
    let q3_a = build(|a, b, g| C64::new(q * t2(x, r, a, b, g) * s1.a * 1.0, 0.0));
    let q4_c = build(|a, b, g| k.inv() * (q * t1(x, r, a, b, g) * s1.b) * kr * s1.cc);
    let q4_a = build(|a, b, g| k.inv() * (q * t1(x, r, a, b, g) * s1.a) * kr);
    let g0 = grad_stokeslet0(x, r);
    let b3 = build(|a, b, g| C64::new(-g0[a][b][g], 0.0));
    Ok(TermSet {
        labels: vec!["Q1", "Q2", "Q3_C", "Q3_b", "Q3_a", "Q4_C", "Q4_a", "B3"],
        terms: vec![q1, q2, q3_c, q3_b, q3_a, q4_c, q4_a, b3],
    })
}

/// The reduced form `(Q3′) = −(1/2π) b_1 (S/|x|² − 3xxx/|x|⁴)` of `(Q3) + (Q4)`.
pub fn q3_prime(x: [f64; 2]) -> Result<CTen3> {
    let r = displacement_norm(x)?;
    let b1 = series_coefficients(1).b;
    Ok(build(|a, b, g| C64::new(-t2(x, r, a, b, g) * b1 / (2.0 * PI), 0.0)))
}
