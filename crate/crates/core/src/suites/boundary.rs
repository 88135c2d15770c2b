//! Boundary-operator checks and the Dirichlet solver.

use super::SuiteOutput;
use crate::cli::config::{BoundaryData, ExperimentConfig};
use crate::error::Result;
use crate::geometry::{build_mesh, BoundaryCurve, BoundaryMesh, Density};
use crate::kernels::{pressure0, stokeslet, ResolventParameter};
use crate::linalg::{cosine, smallest_singular, weighted_similarity};
use crate::potentials::assemble_k;
use crate::potentials::jump::jump_measure;
use crate::report::{num, Criterion, Table};
use crate::solver::{self, DirichletProblem, VolumeGrid};
use crate::C64;
use nalgebra::DVector;

fn mesh_for(cfg: &ExperimentConfig, panels: usize) -> Result<BoundaryMesh> {
    build_mesh(&cfg.domain, panels, cfg.mesh.nodes_per_panel, cfg.mesh.grading)
}

fn centre(curve: &BoundaryCurve) -> [f64; 2] {
    let (lo, hi) = curve.bounding_box();
    [0.5 * (lo[0] + hi[0]), 0.5 * (lo[1] + hi[1])]
}

/// Smooth complex density, a few low Fourier modes in the polar angle
/// about the domain's centre.
pub fn smooth_density(mesh: &BoundaryMesh, c: [f64; 2]) -> Density {
    mesh.nodes
        .iter()
        .map(|y| {
            let t = (y[1] - c[1]).atan2(y[0] - c[0]);
            [C64::new((2.0 * t).cos(), 0.2 * t.sin()), C64::new(0.5 + (3.0 * t).sin(), 0.0)]
        })
        .collect()
}

fn jumps(cfg: &ExperimentConfig, out: &mut SuiteOutput) -> Result<()> {
    let mesh = mesh_for(cfg, cfg.mesh.panels)?;
    let p = ResolventParameter::new(cfg.lambda(), cfg.theta)?;
    let f = smooth_density(&mesh, centre(&cfg.domain));
    let n = mesh.len();
    let m = cfg.jumps.sample_nodes.min(n);
    // evenly spread, offset so that panel endpoints are not favoured
    let nodes: Vec<usize> = (0..m).map(|i| (i * n / m + 3) % n).collect();
    let rep = jump_measure(&f, &mesh, &p, cfg.alpha, &cfg.jumps.distances, &nodes)?;
    let mut t = Table::new(&["node_id", "quantity", "predicted_re", "predicted_im", "measured_re", "measured_im", "abs_err"]);
    for r in &rep.rows {
        t.push(vec![
            r.node_id.to_string(),
            r.quantity.clone(),
            num(r.predicted.re),
            num(r.predicted.im),
            num(r.measured.re),
            num(r.measured.im),
            num(r.abs_err),
        ])?;
    }
    out.table("jumps.csv", t);
    let worst = rep.max_relative_error();
    out.criteria.push(Criterion::new(
        "jump relations",
        worst <= cfg.jumps.tolerance,
        format!("max relative error {worst:.3e} at {} nodes, {} panels", m, cfg.mesh.panels),
    ));
    Ok(())
}

/// `(σ_min, σ_2, cosine of the σ_min right singular vector with n)` of
/// `−½I + K_{λ̄}` in the quadrature `L²` norm.
pub fn null_space_level(mesh: &BoundaryMesh, p: &ResolventParameter) -> Result<(f64, f64, f64)> {
    let k = assemble_k(mesh, &p.conj())?;
    let mut a = k.entries;
    for i in 0..a.nrows() {
        a[(i, i)] -= C64::new(0.5, 0.0);
    }
    let s = smallest_singular(weighted_similarity(&a, &mesh.weights))?;
    let wn = DVector::from_iterator(
        2 * mesh.len(),
        mesh.normals.iter().zip(&mesh.weights).flat_map(|(n, w)| [C64::new(n[0] * w.sqrt(), 0.0), C64::new(n[1] * w.sqrt(), 0.0)]),
    );
    Ok((s.values[0], s.values[1], cosine(&s.v0, &wn)))
}

/// Below this, `σ_min` is treated as zero and need not decrease further.
const SINGULAR_FLOOR: f64 = 1e-12;

fn null_space(cfg: &ExperimentConfig, out: &mut SuiteOutput) -> Result<()> {
    let p = ResolventParameter::new(cfg.lambda(), cfg.theta)?;
    let mut t = Table::new(&["panels", "nodes", "sigma_min", "sigma_2", "cosine_normal"]);
    let mut levels = Vec::new();
    for &panels in &cfg.jumps.null_space_panels {
        let mesh = mesh_for(cfg, panels)?;
        let (s0, s1, c) = null_space_level(&mesh, &p)?;
        t.push(vec![panels.to_string(), mesh.len().to_string(), num(s0), num(s1), num(c)])?;
        levels.push((s0, s1, c));
    }
    out.table("null_space.csv", t);
    let decreasing = levels.windows(2).all(|w| w[1].0 <= w[0].0 || w[1].0 <= SINGULAR_FLOOR);
    let min_cos = levels.iter().map(|l| l.2).fold(1.0, f64::min);
    let (a, b) = (levels[levels.len() - 2].1, levels[levels.len() - 1].1);
    let drift = (a - b).abs() / b;
    let separated = levels.iter().all(|l| l.1 > 1e3 * l.0.max(SINGULAR_FLOOR));
    out.criteria.push(Criterion::new(
        "null space",
        decreasing && min_cos >= cfg.jumps.cosine_tolerance && drift <= cfg.jumps.second_singular_drift && separated,
        format!(
            "sigma_min {} ({}), min cosine {min_cos:.6}, sigma_2 drift {drift:.3e}",
            levels.iter().map(|l| format!("{:.2e}", l.0)).collect::<Vec<_>>().join(" -> "),
            if decreasing { "decreasing" } else { "not decreasing" },
        ),
    ));
    Ok(())
}

pub fn verify_jumps(cfg: &ExperimentConfig) -> Result<SuiteOutput> {
    let mut out = SuiteOutput::default();
    out.timed("jump relations", |o| jumps(cfg, o))?;
    out.timed("null space", |o| null_space(cfg, o))?;
    Ok(out)
}

/// Velocity of a Stokeslet with pole `x0` pushing along `e`, and its pressure.
pub fn pole_field(x: [f64; 2], x0: [f64; 2], e: [f64; 2], p: &ResolventParameter) -> Result<([C64; 2], f64)> {
    let z = [x[0] - x0[0], x[1] - x0[1]];
    let g = stokeslet(z, p)?.value;
    let ph = pressure0(z, z[0].hypot(z[1]));
    Ok(([g[0][0] * e[0] + g[0][1] * e[1], g[1][0] * e[0] + g[1][1] * e[1]], ph[0] * e[0] + ph[1] * e[1]))
}

fn boundary_data(data: &BoundaryData, mesh: &BoundaryMesh, p: &ResolventParameter) -> Result<Density> {
    match data {
        BoundaryData::Pole { center, direction } => mesh.nodes.iter().map(|&x| Ok(pole_field(x, *center, *direction, p)?.0)).collect(),
        BoundaryData::Normal { amplitude } => {
            Ok(mesh.normals.iter().map(|n| [C64::new(amplitude * n[0], 0.0), C64::new(amplitude * n[1], 0.0)]).collect())
        }
        BoundaryData::Uniform { value } => Ok(vec![[C64::new(value[0], 0.0), C64::new(value[1], 0.0)]; mesh.len()]),
    }
}

pub fn solve_dirichlet(cfg: &ExperimentConfig) -> Result<SuiteOutput> {
    let mut out = SuiteOutput::default();
    let d = &cfg.dirichlet;
    let p = ResolventParameter::new(cfg.lambda(), cfg.theta)?;
    let grid = VolumeGrid::for_curve(&cfg.domain, d.targets)?;
    let targets: Vec<[f64; 2]> = grid.inside_indices().into_iter().map(|i| grid.points[i]).collect();
    let exact: Option<Vec<[C64; 2]>> = match &d.data {
        BoundaryData::Pole { center, direction } => {
            Some(targets.iter().map(|&x| Ok(pole_field(x, *center, *direction, &p)?.0)).collect::<Result<_>>()?)
        }
        _ => None,
    };
    let mut levels = Table::new(&["panels", "nodes", "unknowns", "rel_error", "multiplier_abs", "residual"]);
    let mut errors = Vec::new();
    let mut field = None;
    for &panels in &d.levels {
        let mesh = mesh_for(cfg, panels)?;
        let prob = DirichletProblem::new(&mesh, p, boundary_data(&d.data, &mesh, &p)?)?;
        let sol = solver::solve_dirichlet(&prob, d.compatibility_tolerance)?;
        let vals = sol.evaluate(&targets)?;
        let err = exact.as_ref().map(|ex| {
            let scale = ex.iter().map(|v| v[0].norm().max(v[1].norm())).fold(0.0, f64::max);
            let e = vals.iter().zip(ex).map(|(s, v)| (s.u[0] - v[0]).norm().max((s.u[1] - v[1]).norm())).fold(0.0, f64::max);
            e / scale
        });
        levels.push(vec![
            panels.to_string(),
            mesh.len().to_string(),
            (2 * mesh.len()).to_string(),
            err.map(num).unwrap_or_default(),
            num(sol.augmented_multiplier.norm()),
            num(sol.residual),
        ])?;
        if let Some(e) = err {
            errors.push((2 * mesh.len(), e));
        }
        field = Some(vals);
    }
    out.table("dirichlet_levels.csv", levels);
    let mut t = Table::new(&["x", "y", "u1_re", "u1_im", "u2_re", "u2_im", "phi_re", "phi_im"]);
    for s in field.unwrap_or_default() {
        t.push(vec![
            num(s.x[0]),
            num(s.x[1]),
            num(s.u[0].re),
            num(s.u[0].im),
            num(s.u[1].re),
            num(s.u[1].im),
            num(s.phi.re),
            num(s.phi.im),
        ])?;
    }
    out.table("dirichlet_field.csv", t);
    out.criteria.push(Criterion::new("compatible data", true, "every level solved with a compatible right-hand side"));
    if let Some(&(n, e)) = errors.last() {
        out.criteria.push(Criterion::new(
            "oracle error",
            e <= d.tolerance,
            format!("relative error {e:.3e} at {n} unknowns (tolerance {:.1e})", d.tolerance),
        ));
        let monotone = errors.windows(2).all(|w| w[1].1 < w[0].1);
        out.criteria.push(Criterion::new(
            "monotone convergence",
            monotone,
            errors.iter().map(|(_, e)| format!("{e:.2e}")).collect::<Vec<_>>().join(" -> "),
        ));
        if errors.len() >= 2 {
            let (a, b) = (errors[errors.len() - 2], errors[errors.len() - 1]);
            let order = (a.1 / b.1).ln() / (b.0 as f64 / a.0 as f64).ln();
            out.criteria.push(Criterion::new(
                "convergence order",
                order >= d.min_order,
                format!("observed order {order:.2} between the last two levels (minimum {})", d.min_order),
            ));
        }
    }
    Ok(out)
}
