use super::jump::{jump_measure, richardson};
use super::quad::PanelQuadrature;
use super::*;
use crate::geometry::{build_mesh, BoundaryCurve};
use crate::kernels::{grad_stokeslet, make_resolvent_parameter};

fn circle() -> BoundaryCurve {
    BoundaryCurve::Circle { radius: 1.0, center: [0.0, 0.0] }
}

fn ellipse() -> BoundaryCurve {
    BoundaryCurve::Ellipse { a: 1.3, b: 0.8, center: [0.1, 0.0] }
}

fn param(l: C64) -> ResolventParameter {
    make_resolvent_parameter(l, 0.3).unwrap()
}

fn normals(mesh: &BoundaryMesh) -> Density {
    mesh.normals.iter().map(|n| [c(n[0]), c(n[1])]).collect()
}

/// Velocity, conormal derivative and pressure of the Stokeslet pair with
/// pole `x0` and direction `e`.
fn pole_data(mesh: &BoundaryMesh, p: &ResolventParameter, x0: [f64; 2], e: [f64; 2]) -> (Density, Density) {
    let mut u = Vec::new();
    let mut t = Vec::new();
    for (y, n) in mesh.nodes.iter().zip(&mesh.normals) {
        let (v, g, pr) = pole_field(p, x0, e, *y);
        u.push(v);
        t.push(conormal_derivative(&g, pr, *n).unwrap());
    }
    (u, t)
}

fn pole_field(p: &ResolventParameter, x0: [f64; 2], e: [f64; 2], x: [f64; 2]) -> ([C64; 2], [[C64; 2]; 2], C64) {
    let z = [x[0] - x0[0], x[1] - x0[1]];
    let (g, dg) = crate::kernels::stokeslet_with_gradient(z, p).unwrap();
    let ph = pressure0(z, z[0].hypot(z[1]));
    let mut v = [Z; 2];
    let mut grad = [[Z; 2]; 2];
    for a in 0..2 {
        for b in 0..2 {
            v[a] += g[a][b] * e[b];
            for j in 0..2 {
                grad[a][j] += dg[a][b][j] * e[b];
            }
        }
    }
    (v, grad, c(ph[0] * e[0] + ph[1] * e[1]))
}

#[test]
fn cauchy_residues_match_kernels() {
    let mesh = build_mesh(&ellipse(), 12, 8, 1.0).unwrap();
    let p = param(C64::new(2.0, 1.0));
    let i = 19;
    let pi = mesh.panel_index[i];
    let ui = mesh.local_u[i];
    let x = mesh.nodes[i];
    let kk = k_kernel(mesh.normals[i], p);
    let dk = dv_kernel(p);
    let sk = sp_kernel();
    let res = stokes_residue();
    let pres = pressure_residue(mesh.normals[i]);
    for eps in [1e-4, -1e-4] {
        let (y, dy) = mesh.eval(pi, ui + eps);
        let ny = BoundaryMesh::normal_from(dy);
        let y = [x[0] - y[0], x[1] - y[1]];
        let s = eps * dy[0].hypot(dy[1]);
        let (a, b, cc) = (kk(y, ny).unwrap(), dk(y, ny).unwrap(), sk(y, ny).unwrap());
        for j in 0..2 {
            for k in 0..2 {
                assert!((a[j][k] * s - res[j][k]).norm() < 1e-3);
                assert!((b[j][k] * s - res[j][k]).norm() < 1e-3);
            }
            assert!((cc[0][j] * s - pres[0][j]).norm() < 1e-3);
        }
    }
}

#[test]
fn zero_density_gives_zero() {
    let mesh = build_mesh(&circle(), 8, 8, 1.0).unwrap();
    let p = param(C64::new(1.0, 0.0));
    let f: Density = vec![[Z; 2]; mesh.len()];
    let t = [[0.2, 0.1], [2.0, 0.3]];
    assert!(single_layer_velocity(&f, &mesh, &p, &t).unwrap().iter().flatten().all(|v| v.norm() == 0.0));
    assert!(double_layer_velocity(&f, &mesh, &p, &t).unwrap().iter().flatten().all(|v| v.norm() == 0.0));
    assert!(single_layer_pressure(&f, &mesh, &t).unwrap().iter().all(|v| v.norm() == 0.0));
    assert!(double_layer_pressure(&f, &mesh, &p, &t).unwrap().iter().all(|v| v.norm() == 0.0));
}

#[test]
fn normal_density_oracle() {
    // div Γ = 0 and div Φ = δ give S_λ n = 0 and S_Φ n = −1 inside, 0 outside.
    let mesh = build_mesh(&ellipse(), 24, 12, 1.0).unwrap();
    let p = param(C64::new(1.0, 1.0));
    let f = normals(&mesh);
    let inside = [[0.1, 0.1], [1.3, 0.0], [0.0, -0.75]];
    let outside = [[2.0, 0.5], [1.45, 0.0], [0.0, 0.85]];
    for (pts, want) in [(inside, -1.0), (outside, 0.0)] {
        for v in single_layer_velocity(&f, &mesh, &p, &pts).unwrap() {
            assert!(v[0].norm() < 1e-10 && v[1].norm() < 1e-10, "{v:?}");
        }
        for v in single_layer_pressure(&f, &mesh, &pts).unwrap() {
            assert!((v - want).norm() < 1e-10, "{v}");
        }
    }
}

#[test]
fn green_representation_reproduces_pole_field() {
    // S_λ(∂_ν(u,π)) − D_λ(u) = u inside and 0 outside for a resolvent pair
    // regular in the closed domain; the same holds for the pressures.
    let mesh = build_mesh(&ellipse(), 32, 12, 1.0).unwrap();
    for l in [C64::new(1.0, 0.0), C64::new(-3.0, 20.0)] {
        let p = param(l);
        let x0 = [2.2, 0.7];
        let e = [0.6, -0.8];
        let (u, t) = pole_data(&mesh, &p, x0, e);
        let pts = [[0.1, 0.2], [1.2, 0.0], [-0.5, 0.5], [0.1, 0.79]];
        let sv = single_layer_velocity(&t, &mesh, &p, &pts).unwrap();
        let dv = double_layer_velocity(&u, &mesh, &p, &pts).unwrap();
        let sp = single_layer_pressure(&t, &mesh, &pts).unwrap();
        let dp = double_layer_pressure(&u, &mesh, &p, &pts).unwrap();
        for (m, x) in pts.iter().enumerate() {
            let (v, _, pr) = pole_field(&p, x0, e, *x);
            for a in 0..2 {
                assert!((sv[m][a] - dv[m][a] - v[a]).norm() < 1e-9 * (1.0 + v[a].norm()), "{l} {x:?}");
            }
            assert!((sp[m] - dp[m] - pr).norm() < 1e-8 * (1.0 + pr.norm()), "{l} {x:?} {} {}", sp[m] - dp[m], pr);
        }
        let out = [[1.5, -0.3], [0.1, -0.9]];
        let sv = single_layer_velocity(&t, &mesh, &p, &out).unwrap();
        let dv = double_layer_velocity(&u, &mesh, &p, &out).unwrap();
        for m in 0..out.len() {
            for a in 0..2 {
                assert!((sv[m][a] - dv[m][a]).norm() < 1e-9);
            }
        }
    }
}

#[test]
fn normal_spans_null_space_of_conormal_operator() {
    let p = param(C64::new(1.0, 0.0));
    for panels in [8, 16] {
        let mesh = build_mesh(&circle(), panels, 8, 1.0).unwrap();
        let k = assemble_k(&mesh, &p.conj()).unwrap();
        let f = normals(&mesh);
        let r = k.apply_shifted(-0.5, &f).unwrap();
        let rel = crate::linalg::density_l2(&r, &mesh.weights) / crate::linalg::density_l2(&f, &mesh.weights);
        assert!(rel < 1e-8, "{panels}: {rel}");
    }
}

#[test]
fn trace_of_double_layer_matches_interior_limit() {
    let mesh = build_mesh(&ellipse(), 24, 10, 1.0).unwrap();
    let p = param(C64::new(2.0, -1.0));
    let f: Density = mesh.nodes.iter().map(|y| [C64::new(y[1].cos(), 0.3 * y[0]), C64::new(y[0] * y[1], -0.5)]).collect();
    let ks = assemble_kstar(&mesh, &p).unwrap();
    let tr = ks.apply_shifted(-0.5, &f).unwrap();
    let rep = jump_measure(&f, &mesh, &p, 2.0, &[1e-3, 5e-4, 2.5e-4, 1.25e-4], &[0, 37, 101]).unwrap();
    for row in rep.rows.iter().filter(|r| r.quantity.starts_with("double_layer_interior")) {
        let a = row.quantity.ends_with('1') as usize;
        assert!((tr[row.node_id][a] - row.predicted).norm() < 1e-12);
        assert!(row.abs_err < 1e-6, "{row:?}");
    }
}

#[test]
fn jumps_on_unit_circle() {
    let mesh = build_mesh(&circle(), 32, 10, 1.0).unwrap();
    let p = param(C64::new(1.0, 1.0));
    let f: Density = mesh
        .nodes
        .iter()
        .map(|y| {
            let t = y[1].atan2(y[0]);
            [C64::new((2.0 * t).cos(), 0.2 * t.sin()), C64::new(0.5 + (3.0 * t).sin(), 0.0)]
        })
        .collect();
    let rep = jump_measure(&f, &mesh, &p, 2.0, &[1e-3, 5e-4, 2.5e-4, 1.25e-4], &[0, 55, 160, 301]).unwrap();
    for (q, e) in &rep.relative_errors {
        assert!(*e < 1e-6, "{q}: {e}");
    }
    // f = n: the pressure jumps by −1
    let n = normals(&mesh);
    let rep = jump_measure(&n, &mesh, &p, 2.0, &[1e-3, 5e-4, 2.5e-4, 1.25e-4], &[3, 200]).unwrap();
    for r in rep.rows.iter().filter(|r| r.quantity == "single_layer_pressure") {
        assert!((r.measured + 1.0).norm() < 1e-7);
    }
}

#[test]
fn richardson_is_exact_for_cubics() {
    let d = [0.1, 0.05, 0.025, 0.0125];
    let v: Vec<C64> = d.iter().map(|x| C64::new(1.0 + 2.0 * x - x * x * x, x * x)).collect();
    let (e, _) = richardson(&d, &v);
    assert!((e - C64::new(1.0, 0.0)).norm() < 1e-13);
}

#[test]
fn conormal_derivative_examples() {
    let one = c(1.0);
    let id = [[one, Z], [Z, one]];
    assert_eq!(conormal_derivative(&id, Z, [1.0, 0.0]).unwrap(), [one, Z]);
    assert_eq!(conormal_derivative(&[[Z; 2]; 2], one, [0.0, 1.0]).unwrap(), [Z, -one]);
    assert!(conormal_derivative(&id, Z, [1.0, 1.0]).is_err());
}

#[test]
fn discrete_duality_far_field() {
    let mesh = build_mesh(&ellipse(), 16, 8, 1.0).unwrap();
    let p = param(C64::new(0.5, 2.0));
    let kb = assemble_k(&mesh, &p.conj()).unwrap();
    let ks = assemble_kstar(&mesh, &p).unwrap();
    assert!(duality_residual(&kb, &ks, &mesh, true) < 1e-12);
}

#[test]
fn stokes_pde_residual_of_potentials() {
    // (λ − Δ)u + ∇φ = 0 and div u = 0 for (S_λ f, S_Φ f) and (D_λ f, D_Φ f).
    let mesh = build_mesh(&ellipse(), 24, 10, 1.0).unwrap();
    let p = param(C64::new(3.0, 2.0));
    let f: Density = mesh.nodes.iter().map(|y| [C64::new(y[0], 1.0), C64::new(y[1] * y[1], y[0])]).collect();
    let x = [0.3, -0.2];
    let h = 1e-3;
    let mut pts = vec![];
    for dir in 0..2 {
        for off in -2i32..=2 {
            let mut y = x;
            y[dir] += off as f64 * h;
            pts.push(y);
        }
    }
    let d1 = [1.0 / 12.0, -8.0 / 12.0, 0.0, 8.0 / 12.0, -1.0 / 12.0];
    let d2 = [-1.0 / 12.0, 16.0 / 12.0, -30.0 / 12.0, 16.0 / 12.0, -1.0 / 12.0];
    type Fields = (Vec<[C64; 2]>, Vec<C64>);
    let pairs: [Fields; 2] = [
        (single_layer_velocity(&f, &mesh, &p, &pts).unwrap(), single_layer_pressure(&f, &mesh, &pts).unwrap()),
        (double_layer_velocity(&f, &mesh, &p, &pts).unwrap(), double_layer_pressure(&f, &mesh, &p, &pts).unwrap()),
    ];
    for (u, ph) in pairs {
        let centre = 2;
        let mut div = Z;
        let mut scale = 0.0f64;
        for a in 0..2 {
            let mut lap = Z;
            let mut dphi = Z;
            for dir in 0..2 {
                for j in 0..5 {
                    lap += u[5 * dir + j][a] * (d2[j] / (h * h));
                    if dir == a {
                        dphi += ph[5 * dir + j] * (d1[j] / h);
                        div += u[5 * dir + j][a] * (d1[j] / h);
                    }
                }
            }
            let m = p.lambda * u[centre][a] - lap + dphi;
            scale = scale.max((p.lambda * u[centre][a]).norm() + dphi.norm());
            assert!(m.norm() < 1e-6 * scale, "momentum {m}");
        }
        assert!(div.norm() < 1e-6 * scale, "div {div}");
    }
}

#[test]
fn gradient_matches_finite_differences() {
    let mesh = build_mesh(&circle(), 16, 8, 1.0).unwrap();
    let p = param(C64::new(1.0, -2.0));
    let f: Density = mesh.nodes.iter().map(|y| [C64::new(y[0], 0.0), C64::new(0.0, y[1])]).collect();
    let x = [0.2, 0.4];
    let h = 1e-5;
    let g = single_layer_gradient(&f, &mesh, &p, &[x]).unwrap()[0];
    for j in 0..2 {
        let mut a = x;
        let mut b = x;
        a[j] += h;
        b[j] -= h;
        let v = single_layer_velocity(&f, &mesh, &p, &[a, b]).unwrap();
        for i in 0..2 {
            let fd = (v[0][i] - v[1][i]) / (2.0 * h);
            assert!((fd - g[i][j]).norm() < 1e-7 * (1.0 + g[i][j].norm()));
        }
    }
    let _ = grad_stokeslet;
    let _ = PanelQuadrature::new(&mesh);
}

mod props {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]
        #[test]
        fn potentials_are_linear(a in -2.0f64..2.0, b in -2.0f64..2.0, s in 0.0f64..std::f64::consts::TAU) {
            let mesh = build_mesh(&circle(), 8, 6, 1.0).unwrap();
            let p = param(C64::new(1.0, 0.5));
            let f: Density = mesh.nodes.iter().map(|y| [C64::new(y[0] + s, 0.0), C64::new(y[1], 1.0)]).collect();
            let g: Density = mesh.nodes.iter().map(|y| [C64::new(s.cos(), y[1]), C64::new(y[0] * y[1], 0.0)]).collect();
            let h: Density = f.iter().zip(&g).map(|(u, v)| [u[0] * a + v[0] * b, u[1] * a + v[1] * b]).collect();
            let t = [[0.3 * s.cos(), 0.3 * s.sin()], [1.7, 0.2]];
            let (vf, vg, vh) = (
                double_layer_velocity(&f, &mesh, &p, &t).unwrap(),
                double_layer_velocity(&g, &mesh, &p, &t).unwrap(),
                double_layer_velocity(&h, &mesh, &p, &t).unwrap(),
            );
            for m in 0..2 {
                for k in 0..2 {
                    let want = vf[m][k] * a + vg[m][k] * b;
                    prop_assert!((vh[m][k] - want).norm() <= 1e-12 * (1.0 + want.norm()));
                }
            }
        }
    }
}
