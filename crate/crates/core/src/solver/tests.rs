use super::*;
use crate::geometry::{build_mesh, BoundaryCurve};
use crate::kernels::{make_resolvent_parameter, pressure0, stokeslet};
use proptest::prelude::*;
use std::f64::consts::{FRAC_PI_4, PI};

fn c(v: f64) -> C64 {
    C64::new(v, 0.0)
}

fn disk() -> BoundaryCurve {
    BoundaryCurve::Circle { center: [0.0, 0.0], radius: 1.0 }
}

fn square() -> BoundaryCurve {
    BoundaryCurve::Polygon { vertices: vec![[-0.5, -0.5], [0.5, -0.5], [0.5, 0.5], [-0.5, 0.5]] }
}

fn param(l: C64) -> ResolventParameter {
    make_resolvent_parameter(l, FRAC_PI_4).unwrap()
}

/// Velocity and pressure of a Stokeslet at `x0` pushing along `e`.
fn pole(x: [f64; 2], x0: [f64; 2], e: [f64; 2], p: &ResolventParameter) -> ([C64; 2], f64) {
    let z = [x[0] - x0[0], x[1] - x0[1]];
    let g = stokeslet(z, p).unwrap().value;
    let ph = pressure0(z, z[0].hypot(z[1]));
    ([g[0][0] * e[0] + g[0][1] * e[1], g[1][0] * e[0] + g[1][1] * e[1]], ph[0] * e[0] + ph[1] * e[1])
}

/// Largest velocity error of the Dirichlet solve with exterior pole data
/// at `targets`, and the spread of the pressure error.
fn pole_errors(
    curve: &BoundaryCurve,
    panels: usize,
    npp: usize,
    grading: f64,
    p: &ResolventParameter,
    x0: [f64; 2],
    targets: &[[f64; 2]],
) -> (f64, f64) {
    let mesh = build_mesh(curve, panels, npp, grading).unwrap();
    let e = [1.0, 0.0];
    let g = mesh.nodes.iter().map(|&x| pole(x, x0, e, p).0).collect();
    let prob = DirichletProblem::new(&mesh, *p, g).unwrap();
    let sol = solve_dirichlet(&prob, DEFAULT_COMPATIBILITY_TOLERANCE).unwrap();
    assert!(sol.augmented_multiplier.norm() < 1e-8, "multiplier {}", sol.augmented_multiplier);
    let vals = sol.evaluate(targets).unwrap();
    let mut err = 0.0f64;
    let mut dphi = Vec::new();
    for v in &vals {
        let (u, ph) = pole(v.x, x0, e, p);
        err = err.max((v.u[0] - u[0]).norm().max((v.u[1] - u[1]).norm()));
        dphi.push(v.phi - ph);
    }
    let spread = dphi.iter().map(|d| (d - dphi[0]).norm()).fold(0.0, f64::max);
    (err, spread)
}

fn disk_targets() -> Vec<[f64; 2]> {
    let mut t = Vec::new();
    for r in [0.0, 0.3, 0.6, 0.8] {
        for k in 0..7 {
            let a = 2.0 * PI * k as f64 / 7.0 + 0.1;
            t.push([r * a.cos(), r * a.sin()]);
        }
    }
    t
}

#[test]
fn disk_dirichlet_recovers_exterior_pole() {
    let p = param(C64::new(1.0, 1.0));
    let t = disk_targets();
    let errs: Vec<(f64, f64)> = [8, 16, 32].iter().map(|&n| pole_errors(&disk(), n, 8, 1.0, &p, [2.0, 0.0], &t)).collect();
    assert!(errs[2].0 < 1e-6 && errs[2].1 < 1e-6, "{errs:?}");
    assert!(errs[0].0 > errs[1].0 && errs[1].0 >= errs[2].0.min(errs[1].0), "{errs:?}");
}

#[test]
fn disk_dirichlet_large_and_small_lambda() {
    let t = disk_targets();
    for l in [C64::new(0.01, 0.0), C64::from_polar(400.0, 2.0)] {
        let p = param(l);
        let (e, _) = pole_errors(&disk(), 32, 8, 1.0, &p, [1.5, 0.5], &t);
        let scale = pole([0.0, 0.0], [1.5, 0.5], [1.0, 0.0], &p).0[0].norm().max(1e-300);
        assert!(e < 1e-6 * scale.max(1.0), "lambda {l}: {e:e} vs {scale:e}");
    }
}

#[test]
fn graded_square_converges_with_order_at_least_one() {
    let p = param(C64::new(1.0, 1.0));
    let t: Vec<[f64; 2]> = vec![[0.0, 0.0], [0.3, 0.2], [-0.45, 0.45], [0.45, -0.4], [0.1, -0.47]];
    let errs: Vec<f64> = [4, 8, 16].iter().map(|&n| pole_errors(&square(), n, 8, 3.0, &p, [0.9, 0.3], &t).0).collect();
    let order = (errs[1] / errs[2]).log2();
    assert!(errs[2] < 1e-5 && order >= 1.0, "{errs:?}");
}

#[test]
fn zero_data_gives_zero_solution() {
    let mesh = build_mesh(&disk(), 8, 8, 1.0).unwrap();
    let prob = DirichletProblem::new(&mesh, param(c(2.0)), vec![[c(0.0); 2]; mesh.len()]).unwrap();
    let sol = solve_dirichlet(&prob, DEFAULT_COMPATIBILITY_TOLERANCE).unwrap();
    assert!(sol.density.iter().flatten().all(|v| v.norm() == 0.0));
    let v = sol.evaluate(&[[0.2, 0.1]]).unwrap();
    assert_eq!(v[0].u, [c(0.0); 2]);
}

#[test]
fn incompatible_data_is_rejected() {
    let mesh = build_mesh(&disk(), 8, 8, 1.0).unwrap();
    let g = mesh.normals.iter().map(|n| [c(n[0]), c(n[1])]).collect();
    let prob = DirichletProblem::new(&mesh, param(c(1.0)), g).unwrap();
    assert!(matches!(solve_dirichlet(&prob, DEFAULT_COMPATIBILITY_TOLERANCE), Err(Error::Incompatible { .. })));
}

/// `w = ∇^⊥ exp(−|x − x0|²/σ²)` and `(λ − Δ) w`.
fn vortex_pair(x: [f64; 2], l: C64, x0: [f64; 2], s: f64) -> ([C64; 2], [C64; 2]) {
    let d = [x[0] - x0[0], x[1] - x0[1]];
    let r2 = d[0] * d[0] + d[1] * d[1];
    let psi = (-r2 / (s * s)).exp();
    let w = [-2.0 * d[1] / (s * s) * psi, 2.0 * d[0] / (s * s) * psi];
    let fac = l - 4.0 * r2 / s.powi(4) + 8.0 / (s * s);
    ([c(w[0]), c(w[1])], [fac * w[0], fac * w[1]])
}

fn newtonian_error(grid: &VolumeGrid, l: C64, x0: [f64; 2], s: f64) -> f64 {
    let p = param(l);
    let f = grid.sample(|x| vortex_pair(x, l, x0, s).1);
    let tg: Vec<[f64; 2]> = grid.inside_indices().iter().map(|&i| grid.points[i]).collect();
    let u = newtonian_potential(grid, &f, &p, &tg).unwrap();
    let (mut err, mut mx) = (0.0f64, 0.0f64);
    for v in &u {
        let w = vortex_pair(v.x, l, x0, s).0;
        err = err.max((v.u[0] - w[0]).norm().max((v.u[1] - w[1]).norm()).max(v.phi.norm()));
        mx = mx.max(w[0].norm().max(w[1].norm()));
    }
    err / mx
}

#[test]
fn polar_newtonian_potential_inverts_lambda_minus_laplacian() {
    let grid = VolumeGrid::polar([0.0, 0.0], 1.0, 32, 65).unwrap();
    for l in [C64::new(1.0, 1.0), c(0.01), C64::new(-50.0, 300.0), c(1e4)] {
        let e = newtonian_error(&grid, l, [0.1, -0.2], 0.15);
        assert!(e < 1e-8, "lambda {l}: {e:e}");
    }
}

#[test]
fn tensor_newtonian_potential_converges() {
    let l = C64::new(1.0, 1.0);
    let e1 = newtonian_error(&VolumeGrid::for_curve(&square(), 16).unwrap(), l, [0.02, -0.01], 0.1);
    let e2 = newtonian_error(&VolumeGrid::for_curve(&square(), 32).unwrap(), l, [0.02, -0.01], 0.1);
    assert!(e2 < 1e-2 && e2 < e1 / 3.0, "{e1:e} {e2:e}");
}

#[test]
fn newtonian_potential_of_zero_is_zero() {
    let grid = VolumeGrid::polar([0.0, 0.0], 1.0, 8, 17).unwrap();
    let f = vec![[c(0.0); 2]; grid.len()];
    let u = newtonian_potential(&grid, &f, &param(c(1.0)), &[[0.1, 0.2]]).unwrap();
    assert!(u[0].u.iter().all(|v| v.norm() == 0.0) && u[0].phi.norm() == 0.0);
}

#[test]
fn polar_path_rejects_non_solenoidal_data() {
    let grid = VolumeGrid::polar([0.0, 0.0], 1.0, 12, 25).unwrap();
    let f = grid.sample(|x| [c(x[0]), c(0.0)]);
    assert!(newtonian_potential(&grid, &f, &param(c(1.0)), &[[0.1, 0.2]]).is_err());
}

/// `u = ∇^⊥(1 − r²)²` vanishes with its normal derivative on the unit
/// circle; `f = (λ − Δ) u` with zero pressure.
fn disk_mode(l: C64) -> (impl Fn([f64; 2]) -> [C64; 2], impl Fn([f64; 2]) -> [C64; 2]) {
    let u = |x: [f64; 2]| {
        let a = 4.0 * (x[0] * x[0] + x[1] * x[1]) - 4.0;
        [c(a * x[1]), c(-a * x[0])]
    };
    let f = move |x: [f64; 2]| {
        let a = l * (4.0 * (x[0] * x[0] + x[1] * x[1]) - 4.0) - 32.0;
        [a * x[1], -a * x[0]]
    };
    (u, f)
}

#[test]
fn body_force_resolvent_matches_manufactured_flow() {
    let mesh = build_mesh(&disk(), 16, 8, 1.0).unwrap();
    let grid = VolumeGrid::for_curve(&disk(), 16).unwrap();
    for l in [C64::new(1.0, 1.0), C64::new(-50.0, 300.0)] {
        let (u, f) = disk_mode(l);
        let s = solve_resolvent(&mesh, &grid, &grid.sample(f), &param(l), &grid).unwrap();
        let err = grid
            .points
            .iter()
            .zip(&s.u)
            .map(|(&x, v)| {
                let w = u(x);
                (v[0] - w[0]).norm().max((v[1] - w[1]).norm())
            })
            .fold(0.0, f64::max);
        let perr = s.phi.iter().map(|v| v.norm()).fold(0.0, f64::max);
        assert!(err < 1e-8 && perr < 1e-6, "lambda {l}: {err:e} {perr:e}");
    }
}

#[test]
fn body_force_resolvent_on_square_via_enclosing_disk() {
    let l = C64::new(2.0, -1.0);
    let mesh = build_mesh(&square(), 4, 8, 3.0).unwrap();
    let f = gaussian_vortex([0.05, -0.02], 0.1);
    let lv = Level { panels: 4, nodes_per_panel: 8, grid: 24, source_grid: None };
    let (src, eval) = level_grids(&square(), &lv).unwrap();
    let s = solve_resolvent(&mesh, &src, &src.sample(&f), &param(l), &eval).unwrap();
    assert!(s.correction.residual < 1e-10);
    let corr_max = s.correction.density.iter().flatten().map(|v| v.norm()).fold(0.0, f64::max);
    assert!(corr_max > 0.0);
    let div = divergence(&eval, &s.u).unwrap();
    let umax = s.u.iter().flatten().map(|v| v.norm()).fold(0.0, f64::max);
    let interior: Vec<usize> = eval.inside_indices().into_iter().filter(|&i| square().distance(eval.points[i]) > 0.1).collect();
    let dmax = interior.iter().map(|&i| div[i].norm()).fold(0.0, f64::max);
    assert!(dmax < 2e-2 * umax / 0.1, "divergence {dmax:e} vs {umax:e}");
}

#[test]
fn resolvent_identity_on_disk() {
    let mesh = build_mesh(&disk(), 16, 8, 1.0).unwrap();
    let grid = VolumeGrid::for_curve(&disk(), 24).unwrap();
    let f = grid.sample(gaussian_vortex([0.1, 0.2], 0.15));
    let (l, m) = (C64::new(1.0, 1.0), c(5.0));
    let rl = ResolventOperator::new(&mesh, &param(l)).unwrap();
    let rm = ResolventOperator::new(&mesh, &param(m)).unwrap();
    let ul = rl.apply(&grid, &f, &grid).unwrap().u;
    let um = rm.apply(&grid, &f, &grid).unwrap().u;
    let ulm = rl.apply(&grid, &um, &grid).unwrap().u;
    let lhs: Vec<[C64; 2]> = ul.iter().zip(&um).map(|(a, b)| [a[0] - b[0], a[1] - b[1]]).collect();
    let rhs: Vec<[C64; 2]> = ulm.iter().map(|v| [v[0] * (m - l), v[1] * (m - l)]).collect();
    let diff: Vec<[C64; 2]> = lhs.iter().zip(&rhs).map(|(a, b)| [a[0] - b[0], a[1] - b[1]]).collect();
    let rel = discrete_norm(&diff, &grid.weights, 2.0).unwrap() / discrete_norm(&lhs, &grid.weights, 2.0).unwrap();
    assert!(rel < 1e-6, "{rel:e}");
}

#[test]
fn discrete_norm_examples() {
    let grid = VolumeGrid::polar([0.0, 0.0], 1.0, 12, 25).unwrap();
    let one = vec![[c(1.0), c(0.0)]; grid.len()];
    assert!((discrete_norm(&one, &grid.weights, 2.0).unwrap() - PI.sqrt()).abs() < 1e-12);
    let v = vec![[c(3.0), c(4.0)], [c(1.0), c(0.0)]];
    assert_eq!(discrete_norm(&v, &[1.0, 1.0], f64::INFINITY).unwrap(), 5.0);
    assert_eq!(discrete_norm(&v, &[0.0, 1.0], f64::INFINITY).unwrap(), 1.0);
    assert!(discrete_norm(&v, &[1.0, 1.0], 0.5).is_err());
}

proptest! {
    #[test]
    fn discrete_norm_triangle_and_holder(
        a in proptest::collection::vec((-5.0f64..5.0, -5.0f64..5.0), 6),
        b in proptest::collection::vec((-5.0f64..5.0, -5.0f64..5.0), 6),
        q in 1.0f64..6.0,
    ) {
        let w = [0.1, 0.5, 0.2, 0.7, 0.05, 0.3];
        let va: Vec<[C64; 2]> = a.iter().map(|&(x, y)| [c(x), C64::new(0.0, y)]).collect();
        let vb: Vec<[C64; 2]> = b.iter().map(|&(x, y)| [c(y), c(x)]).collect();
        let sum: Vec<[C64; 2]> = va.iter().zip(&vb).map(|(x, y)| [x[0] + y[0], x[1] + y[1]]).collect();
        let n = |v: &[[C64; 2]], q| discrete_norm(v, &w, q).unwrap();
        prop_assert!(n(&sum, q) <= n(&va, q) + n(&vb, q) + 1e-12);
        // Hölder against the constant function: ‖v‖_1 ≤ |Ω|^{1 − 1/q} ‖v‖_q.
        let area: f64 = w.iter().sum();
        prop_assert!(n(&va, 1.0) <= area.powf(1.0 - 1.0 / q) * n(&va, q) + 1e-12);
    }
}
