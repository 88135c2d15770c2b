use super::cancellation::*;
use super::decay::*;
use super::residual::*;
use super::*;

fn par(re: f64, im: f64) -> ResolventParameter {
    make_resolvent_parameter(C64::new(re, im), PI / 4.0).unwrap()
}

fn lcg(seed: &mut u64) -> f64 {
    *seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    (*seed >> 11) as f64 / (1u64 << 53) as f64
}

#[test]
fn parameter_examples() {
    let p = par(1.0, 0.0);
    assert!((p.k - C64::new(0.0, 1.0)).norm() < 1e-15);
    assert!((p.k * p.k + 1.0).norm() < 1e-15);
    let p = par(0.0, 4.0);
    assert!((p.k - C64::from_polar(2.0, 0.75 * PI)).norm() < 1e-15);
    assert!((p.k.im - 2f64.sqrt()).abs() < 1e-15 && p.k.im > 2.0 * (PI / 8.0).sin());
    assert!(make_resolvent_parameter(C64::new(-1.0, 0.0), PI / 4.0).is_err());
    assert!(make_resolvent_parameter(C64::new(0.0, 0.0), PI / 4.0).is_err());
    assert!(make_resolvent_parameter(C64::new(1.0, 0.0), 2.0).is_err());
}

#[test]
fn laplace_examples() {
    match laplace_green([1.0, 0.0], 0).unwrap() {
        Tensor::Scalar(v) => assert_eq!(v.norm(), 0.0),
        _ => panic!(),
    }
    match laplace_green([1.0, 0.0], 1).unwrap() {
        Tensor::Vector(v) => {
            assert!((v[0].re + 1.0 / (2.0 * PI)).abs() < 1e-16 && v[1].norm() == 0.0)
        }
        _ => panic!(),
    }
    match laplace_green([1.0, 1.0], 2).unwrap() {
        Tensor::Matrix(m) => assert!((m[0][1].re - 1.0 / (4.0 * PI)).abs() < 1e-16),
        _ => panic!(),
    }
    assert!(laplace_green([0.0, 0.0], 0).is_err());
}

#[test]
fn stationary_and_pressure_examples() {
    let m = stokeslet0([1.0, 0.0], 1.0);
    assert!((m[0][0] - 1.0 / (4.0 * PI)).abs() < 1e-16 && m[0][1] == 0.0);
    let x = [0.6, 0.8];
    let m = stokeslet0(x, 1.0);
    assert!((m[0][0] + m[1][1] - 1.0 / (4.0 * PI)).abs() < 1e-16);
    let f = pressure0([1.0, 0.0], 1.0);
    assert!((f[0] - 1.0 / (2.0 * PI)).abs() < 1e-16 && f[1] == 0.0);
    let y = [0.3, -0.7];
    let r = 0.3f64.hypot(0.7);
    let (a, b) = (pressure0(y, r), pressure0([0.6, -1.4], 2.0 * r));
    assert!((a[0] - 2.0 * b[0]).abs() < 1e-15 && (a[1] - 2.0 * b[1]).abs() < 1e-15);
    // gradients against central differences
    let h = 1e-5;
    let g = grad_stokeslet0(y, r);
    let gp = grad_pressure0(y, r);
    for gm in 0..2 {
        let mut yp = y;
        let mut ym = y;
        yp[gm] += h;
        ym[gm] -= h;
        let (sp, sm) = (stokeslet0(yp, yp[0].hypot(yp[1])), stokeslet0(ym, ym[0].hypot(ym[1])));
        let (pp, pm) = (pressure0(yp, yp[0].hypot(yp[1])), pressure0(ym, ym[0].hypot(ym[1])));
        for a in 0..2 {
            for b in 0..2 {
                assert!(((sp[a][b] - sm[a][b]) / (2.0 * h) - g[a][b][gm]).abs() < 1e-8);
            }
            assert!(((pp[a] - pm[a]) / (2.0 * h) - gp[gm][a]).abs() < 1e-8);
        }
    }
}

#[test]
fn stokeslet_symmetric_and_even() {
    let mut s = 7u64;
    for _ in 0..50 {
        let x = [4.0 * lcg(&mut s) - 2.0, 4.0 * lcg(&mut s) - 2.0];
        let p = par(10.0 * lcg(&mut s), 10.0 * lcg(&mut s) - 5.0);
        let a = stokeslet(x, &p).unwrap().value;
        let b = stokeslet([-x[0], -x[1]], &p).unwrap().value;
        assert!((a[0][1] - a[1][0]).norm() <= 1e-15 * mat_norm(&a));
        assert!(mat_norm(&mat_sub(&a, &b)) <= 1e-15 * mat_norm(&a));
    }
}

#[test]
fn helmholtz_scaling_and_pde() {
    let p = par(2.0, 1.0);
    let x = [0.6, 0.8];
    assert!(helmholtz_pde_residual(x, &p, 1e-3).unwrap() < 1e-6);
    let s = 3.7;
    let q = make_resolvent_parameter(p.lambda / (s * s), p.theta).unwrap();
    let (a, b) = match (helmholtz_green(x, &p, 0).unwrap().value, helmholtz_green([s * x[0], s * x[1]], &q, 0).unwrap().value) {
        (Tensor::Scalar(a), Tensor::Scalar(b)) => (a, b),
        _ => panic!(),
    };
    assert!((a - b).norm() < 1e-13 * a.norm());
}

#[test]
fn stokeslet_pde_residuals() {
    for &(lr, li) in &[(1.0, 0.0), (1.0, 1.0), (-30.0, 50.0)] {
        let p = par(lr, li);
        for &x in &[[0.6, 0.8], [0.05, -0.1], [1.5, 0.4]] {
            let (m, d) = stokeslet_pde_residual(x, &p, 1e-3 * x[0].hypot(x[1])).unwrap();
            assert!(m < 1e-6 && d < 1e-6, "λ={} x={x:?} m={m:e} d={d:e}", p.lambda);
        }
    }
}

#[test]
fn paths_agree_near_regime_boundary() {
    // direct formulas evaluated below the threshold versus the series
    let mut s = 11u64;
    for _ in 0..200 {
        let rho = 0.3 + 0.2 * lcg(&mut s);
        let tau = (PI - PI / 4.0) * (2.0 * lcg(&mut s) - 1.0) * 0.999;
        let p = make_resolvent_parameter(C64::from_polar(rho, tau), PI / 4.0).unwrap();
        let phi = 2.0 * PI * lcg(&mut s);
        let x = [phi.cos(), phi.sin()];
        let g = helmholtz_radial(p.k, 1.0).unwrap();
        let g0 = laplace_radial(1.0);
        let direct: Vec<C64> = (1..4).map(|m| g[m] - g0[m]).collect();
        let safe = small::scaled_difference(p.k, 1.0);
        for m in 1..4 {
            let sv = safe.full[m] * p.k * p.k;
            assert!((sv - direct[m - 1]).norm() <= 1e-8 * sv.norm(), "m={m} ρ={rho}");
        }
        let d = grad_stokeslet_difference(x, &p).unwrap();
        assert_eq!(d.path, Path::CancellationSafe);
        let (_, t) = stokeslet_with_gradient(x, &p).unwrap();
        let t0 = real_ten(&grad_stokeslet0(x, 1.0));
        let direct = ten_sub(&t, &t0);
        assert!(ten_norm(&ten_sub(&d.value, &direct)) <= 1e-8 * ten_norm(&d.value));
    }
}

#[test]
fn paths_across_threshold() {
    // same tensor on both sides of |λ||x|² = 1/2, compared by continuity
    let p = par(1.0, 0.5);
    let r_lo = (0.5 / p.r).sqrt() * (1.0 - 1e-9);
    let r_hi = (0.5 / p.r).sqrt() * (1.0 + 1e-9);
    let a = stokeslet([r_lo, 0.0], &p).unwrap();
    let b = stokeslet([r_hi, 0.0], &p).unwrap();
    assert_eq!((a.path, b.path), (Path::CancellationSafe, Path::Direct));
    assert!(mat_norm(&mat_sub(&a.value, &b.value)) < 1e-8 * mat_norm(&a.value));
    let a = helmholtz_diff_third([r_lo, 0.0], &p).unwrap().value;
    let b = helmholtz_diff_third([r_hi, 0.0], &p).unwrap().value;
    assert!(ten_norm(&ten_sub(&a, &b)) < 1e-8 * ten_norm(&a));
}

#[test]
fn problematic_terms_cancel() {
    let mut s = 3u64;
    for _ in 0..100 {
        let r = 10f64.powf(-3.0 + 3.0 * lcg(&mut s));
        let phi = 2.0 * PI * lcg(&mut s);
        let x = [r * phi.cos(), r * phi.sin()];
        let rho = 0.5 * lcg(&mut s).max(1e-6);
        let tau = 0.74 * PI * (2.0 * lcg(&mut s) - 1.0);
        let p = make_resolvent_parameter(C64::from_polar(rho / (r * r), tau), PI / 4.0).unwrap();
        assert!(problematic_p(x, &p).unwrap().relative_residual() < 1e-12);
        let q = problematic_q(x, &p).unwrap();
        assert!(q.relative_residual() < 1e-12);
        let q34: CTen3 = {
            let t = TermSet { labels: q.labels[2..7].to_vec(), terms: q.terms[2..7].to_vec() };
            t.sum()
        };
        let qp = q3_prime(x).unwrap();
        assert!(ten_norm(&ten_sub(&q34, &qp)) < 1e-12 * ten_norm(&qp));
    }
}

#[test]
fn difference_bounds_in_small_regime() {
    let mut s = 5u64;
    let mut worst3 = 0.0f64;
    let mut worst_cmp = 0.0f64;
    for _ in 0..300 {
        let r = 10f64.powf(-2.0 + 2.0 * lcg(&mut s));
        let rho = 10f64.powf(-6.0 + 5.7 * lcg(&mut s));
        let tau = 0.74 * PI * (2.0 * lcg(&mut s) - 1.0);
        let p = make_resolvent_parameter(C64::from_polar(rho / (r * r), tau), PI / 4.0).unwrap();
        let x = [r, 0.0];
        let t = helmholtz_diff_third(x, &p).unwrap();
        worst3 = worst3.max(ten_norm(&t.value) / (p.r / r));
        let g = grad_stokeslet_difference(x, &p).unwrap();
        worst_cmp = worst_cmp.max(ten_norm(&g.value) / (p.r * r * rho.ln().abs()));
    }
    assert!(worst3.is_finite() && worst3 < 10.0);
    assert!(worst_cmp.is_finite() && worst_cmp < 10.0);
}

#[test]
fn decay_suite_small_grid() {
    let grid = DecayGrid { rho_min: 1e-2, rho_max: 1e2, per_decade: 4, n_tau: 5 };
    let rows = verify_decay_suite(PI / 4.0, &grid).unwrap();
    assert_eq!(rows.len(), 9);
    for r in rows {
        assert!(r.measured_sup.is_finite() && r.measured_sup > 0.0, "{r:?}");
    }
}
