//! Gauss–Legendre rules and an adaptive Gauss–Kronrod integrator.

use num_complex::Complex64;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

/// Gauss–Legendre nodes and weights on `[-1, 1]`, nodes ascending.
#[derive(Clone, Debug)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

fn compute_gauss(n: usize) -> GaussRule {
    assert!(n >= 1);
    if n == 1 {
        return GaussRule { nodes: vec![0.0], weights: vec![2.0] };
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = -(PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = x;
        nodes[n - 1 - i] = -x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    GaussRule { nodes, weights }
}

/// Cached Gauss–Legendre rule with `n` points.
pub fn gauss_legendre(n: usize) -> Arc<GaussRule> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GaussRule>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("gauss cache poisoned");
    guard.entry(n).or_insert_with(|| Arc::new(compute_gauss(n))).clone()
}

// Kronrod 21-point extension of the 10-point Gauss rule (QUADPACK qk21).
const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077600525452800,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

/// One GK21 panel for an `N`-vector complex integrand; returns (Kronrod, |K − G|).
fn gk21_panel<const N: usize, F>(f: &F, a: f64, b: f64) -> ([Complex64; N], f64)
where
    F: Fn(f64) -> [Complex64; N],
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut k = [Complex64::new(0.0, 0.0); N];
    let mut g = [Complex64::new(0.0, 0.0); N];
    let fc = f(c);
    for j in 0..N {
        k[j] = fc[j] * WGK[10];
    }
    for i in 0..10 {
        let x = h * XGK[i];
        let f1 = f(c - x);
        let f2 = f(c + x);
        for j in 0..N {
            let s = f1[j] + f2[j];
            k[j] += s * WGK[i];
            if i % 2 == 1 {
                g[j] += s * WG[i / 2];
            }
        }
    }
    let mut err = 0.0f64;
    for j in 0..N {
        k[j] *= h;
        g[j] *= h;
        err = err.max((k[j] - g[j]).norm());
    }
    (k, err)
}

/// Adaptive GK21 integration over the union of `breakpoints` intervals.
///
/// Bisects the worst panel until the summed error estimate falls below
/// `tol · max_j |I_j|` or `max_panels` is reached (then returns `Err` with the
/// best estimate).
pub fn adaptive_gk21<const N: usize, F>(f: F, breakpoints: &[f64], tol: f64, max_panels: usize) -> Result<[Complex64; N], [Complex64; N]>
where
    F: Fn(f64) -> [Complex64; N],
{
    let mut panels: Vec<(f64, f64, [Complex64; N], f64)> = breakpoints
        .windows(2)
        .map(|w| {
            let (v, e) = gk21_panel(&f, w[0], w[1]);
            (w[0], w[1], v, e)
        })
        .collect();
    loop {
        let mut total = [Complex64::new(0.0, 0.0); N];
        let mut err = 0.0;
        let mut worst = 0;
        for (i, p) in panels.iter().enumerate() {
            for j in 0..N {
                total[j] += p.2[j];
            }
            err += p.3;
            if p.3 > panels[worst].3 {
                worst = i;
            }
        }
        let scale = total.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if err <= tol * scale {
            return Ok(total);
        }
        if panels.len() >= max_panels {
            return Err(total);
        }
        let (a, b, _, _) = panels.swap_remove(worst);
        let m = 0.5 * (a + b);
        let (v1, e1) = gk21_panel(&f, a, m);
        let (v2, e2) = gk21_panel(&f, m, b);
        panels.push((a, m, v1, e1));
        panels.push((m, b, v2, e2));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_integrates_polynomials_exactly() {
        for n in [2usize, 5, 8, 16, 33] {
            let r = gauss_legendre(n);
            for p in 0..(2 * n) {
                let s: f64 = r.nodes.iter().zip(&r.weights).map(|(x, w)| w * x.powi(p as i32)).sum();
                let exact = if p % 2 == 1 { 0.0 } else { 2.0 / (p as f64 + 1.0) };
                assert!((s - exact).abs() < 1e-13, "n={n} p={p}");
            }
        }
    }

    #[test]
    fn kronrod_gaussian_integral() {
        let v = adaptive_gk21(|x| [Complex64::new((-x * x).exp(), 0.0)], &[0.0, 1.0, 3.0, 7.0], 1e-15, 100).unwrap();
        assert!((v[0].re - 0.5 * PI.sqrt()).abs() < 1e-15);
    }
}
