//! Double-double arithmetic, just enough for the small-argument Hankel series.
//!
//! A value is the unevaluated sum `hi + lo` with `|lo| ≤ ulp(hi)/2`, giving
//! roughly 32 significant digits. Only the operations the series needs are
//! provided.

use num_complex::Complex64;
use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

pub const PI: Dd = Dd { hi: std::f64::consts::PI, lo: 1.2246467991473532e-16 };
pub const LN2: Dd = Dd { hi: std::f64::consts::LN_2, lo: 2.3190468138462996e-17 };
pub const EULER_GAMMA: Dd = Dd { hi: 0.5772156649015329, lo: -4.942915152430645e-18 };

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    pub fn new(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    pub fn mul_f64(self, b: f64) -> Self {
        let (p, e) = two_prod(self.hi, b);
        let (hi, lo) = quick_two_sum(p, e + self.lo * b);
        Dd { hi, lo }
    }

    pub fn recip(self) -> Self {
        Dd::ONE / self
    }

    pub fn sqr(self) -> Self {
        self * self
    }

    /// `exp(x)` by reduction `x = k ln2 + r`, `r / 2^10` Taylor, then squaring.
    pub fn exp(self) -> Self {
        if self.hi == 0.0 {
            return Dd::ONE;
        }
        let k = (self.hi / LN2.hi).round();
        let r = (self - LN2.mul_f64(k)).mul_f64(1.0 / 1024.0);
        let mut term = r;
        let mut sum = r;
        let mut n = 1.0;
        loop {
            n += 1.0;
            term = (term * r) / Dd::new(n);
            sum = sum + term;
            if term.hi.abs() < 1e-34 * sum.hi.abs().max(1e-300) {
                break;
            }
        }
        // (1 + s)^2 - 1 = s (2 + s), keeping the small quantity explicit
        for _ in 0..10 {
            sum = sum * (sum + Dd::new(2.0));
        }
        let e = sum + Dd::ONE;
        Dd { hi: e.hi * 2f64.powi(k as i32), lo: e.lo * 2f64.powi(k as i32) }
    }

    /// Natural logarithm for positive arguments, one Newton step from binary64.
    pub fn ln(self) -> Self {
        assert!(self.hi > 0.0, "ln of non-positive double-double");
        let y = Dd::new(self.hi.ln());
        y + self * (-y).exp() - Dd::ONE
    }

    /// `(sin x, cos x)` for `|x| ≲ 4`, by Taylor series after halving.
    pub fn sin_cos(self) -> (Self, Self) {
        let r = self.mul_f64(1.0 / 16.0);
        let r2 = r.sqr();
        let mut s = r;
        let mut c = Dd::ONE;
        let mut ts = r;
        let mut tc = Dd::ONE;
        let mut n = 0.0;
        loop {
            n += 2.0;
            tc = -((tc * r2) / Dd::new((n - 1.0) * n));
            ts = -((ts * r2) / Dd::new(n * (n + 1.0)));
            c = c + tc;
            s = s + ts;
            if tc.hi.abs() < 1e-34 {
                break;
            }
        }
        for _ in 0..4 {
            let s2 = (s * c).mul_f64(2.0);
            let c2 = c.sqr() - s.sqr();
            s = s2;
            c = c2;
        }
        (s, c)
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, b: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        Dd { hi, lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, b: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, b.hi);
        let (hi, lo) = quick_two_sum(p, e + (self.hi * b.lo + self.lo * b.hi));
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo } + Dd::new(q3)
    }
}

/// Complex number with double-double components.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct DdC {
    pub re: Dd,
    pub im: Dd,
}

impl DdC {
    pub const ZERO: DdC = DdC { re: Dd::ZERO, im: Dd::ZERO };

    pub fn new(re: Dd, im: Dd) -> Self {
        DdC { re, im }
    }

    pub fn from_c64(z: Complex64) -> Self {
        DdC { re: Dd::new(z.re), im: Dd::new(z.im) }
    }

    pub fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn scale(self, s: Dd) -> Self {
        DdC { re: self.re * s, im: self.im * s }
    }

    pub fn norm_sqr(self) -> Dd {
        self.re.sqr() + self.im.sqr()
    }

    /// Principal logarithm of a binary64 complex number, to double-double accuracy.
    pub fn ln_of(z: Complex64) -> Self {
        let (x, y) = (Dd::new(z.re), Dd::new(z.im));
        let m2 = x.sqr() + y.sqr();
        let re = m2.ln().mul_f64(0.5);
        let phi0 = z.im.atan2(z.re);
        // reduce phi0 near zero so the Taylor-based sin/cos stays accurate
        let quarter = (phi0 / (0.5 * PI.hi)).round();
        let red = Dd::new(phi0) - PI.mul_f64(0.5 * quarter);
        let (mut s, mut c) = red.sin_cos();
        for _ in 0..(quarter.rem_euclid(4.0) as i32) {
            let t = c;
            c = -s;
            s = t;
        }
        // rotate z by -phi0; the residual angle is tiny so atan(v/u) = v/u
        let u = x * c + y * s;
        let v = y * c - x * s;
        DdC { re, im: Dd::new(phi0) + v / u }
    }
}

impl Add for DdC {
    type Output = DdC;
    fn add(self, b: DdC) -> DdC {
        DdC { re: self.re + b.re, im: self.im + b.im }
    }
}

impl Sub for DdC {
    type Output = DdC;
    fn sub(self, b: DdC) -> DdC {
        DdC { re: self.re - b.re, im: self.im - b.im }
    }
}

impl Mul for DdC {
    type Output = DdC;
    fn mul(self, b: DdC) -> DdC {
        DdC { re: self.re * b.re - self.im * b.im, im: self.re * b.im + self.im * b.re }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_ln_roundtrip() {
        for &x in &[0.3, 1.0, 2.5, 17.0, 1e-3, 123.456] {
            let d = Dd::new(x);
            let back = d.ln().exp();
            assert!(((back - d).to_f64() / x).abs() < 1e-30, "x={x}");
        }
    }

    #[test]
    fn exp_one_is_e() {
        // e = 2.718281828459045 + 1.4456468917292502e-16
        let e = Dd::ONE.exp();
        assert_eq!(e.hi, std::f64::consts::E);
        assert!((e.lo - 1.4456468917292502e-16).abs() < 1e-31);
    }

    #[test]
    fn sin_cos_pythagoras_and_pi() {
        let (s, c) = PI.mul_f64(0.25).sin_cos();
        assert!((s - c).to_f64().abs() < 1e-31);
        let one = s.sqr() + c.sqr();
        assert!((one - Dd::ONE).to_f64().abs() < 1e-31);
    }

    #[test]
    fn complex_log_matches_binary64() {
        for &(x, y) in &[(0.0, 1.0), (-3.0, 0.5), (2.0, 7.0), (-1e-3, 4.0)] {
            let z = Complex64::new(x, y);
            let l = DdC::ln_of(z).to_c64();
            assert!((l - z.ln()).norm() < 1e-15 * (1.0 + z.ln().norm()));
        }
        let l = DdC::ln_of(Complex64::new(0.0, 1.0));
        assert!((l.im - PI.mul_f64(0.5)).to_f64().abs() < 1e-31);
    }
}
