//! Body-force resolvent: a single solve with its refinement check, the
//! resolvent identity, and the uniform-bound sweep.

use super::{bool_str, SuiteOutput};
use crate::cli::config::ExperimentConfig;
use crate::error::Result;
use crate::geometry::{build_mesh, BoundaryCurve};
use crate::kernels::ResolventParameter;
use crate::report::{num, Criterion, Table};
use crate::solver::{gaussian_vortex, level_grids, resolvent_sweep as run_sweep, Level, ResolventOperator, SweepSpec, VolumeGrid};
use crate::C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn base_level(cfg: &ExperimentConfig) -> Level {
    Level { panels: cfg.mesh.panels, nodes_per_panel: cfg.mesh.nodes_per_panel, grid: cfg.force.grid, source_grid: cfg.force.source_grid }
}

/// `max_i |a_i − b_i| / max_i |b_i|` over both components.
fn max_rel(a: &[[C64; 2]], b: &[[C64; 2]]) -> f64 {
    let d = a.iter().zip(b).map(|(x, y)| (x[0] - y[0]).norm().max((x[1] - y[1]).norm())).fold(0.0, f64::max);
    let s = b.iter().map(|y| y[0].norm().max(y[1].norm())).fold(0.0, f64::max);
    d / s
}

/// Source grid carrying a field known only on `eval`: on circles the two
/// coincide; elsewhere the evaluation grid itself serves as source.
fn field_source<'g>(curve: &BoundaryCurve, src: &'g VolumeGrid, eval: &'g VolumeGrid) -> &'g VolumeGrid {
    match curve {
        BoundaryCurve::Circle { .. } => src,
        _ => eval,
    }
}

pub fn solve_resolvent(cfg: &ExperimentConfig) -> Result<SuiteOutput> {
    let mut out = SuiteOutput::default();
    let p = ResolventParameter::new(cfg.lambda(), cfg.theta)?;
    let bump = gaussian_vortex(cfg.force.center, cfg.force.width);
    let level = base_level(cfg);
    let mesh = build_mesh(&cfg.domain, level.panels, level.nodes_per_panel, cfg.mesh.grading)?;
    let (src, eval) = level_grids(&cfg.domain, &level)?;
    let op = ResolventOperator::new(&mesh, &p)?;
    let u = out.timed("resolvent solve", |_| op.apply(&src, &src.sample(&bump), &eval))?;

    let mut t = Table::new(&["x", "y", "inside", "u1_re", "u1_im", "u2_re", "u2_im", "phi_re", "phi_im"]);
    for (i, x) in eval.points.iter().enumerate() {
        let (v, ph) = (u.u[i], u.phi[i]);
        t.push(vec![
            num(x[0]),
            num(x[1]),
            bool_str(eval.inside[i]),
            num(v[0].re),
            num(v[0].im),
            num(v[1].re),
            num(v[1].im),
            num(ph.re),
            num(ph.im),
        ])?;
    }
    out.table("resolvent_field.csv", t);

    // refine the boundary mesh and the source grid, evaluating on the same points
    let fine = Level {
        panels: 2 * level.panels,
        nodes_per_panel: level.nodes_per_panel,
        grid: 2 * level.grid,
        source_grid: level.source_grid.map(|n| 2 * n),
    };
    let fine_mesh = build_mesh(&cfg.domain, fine.panels, fine.nodes_per_panel, cfg.mesh.grading)?;
    let (fine_src, _) = level_grids(&cfg.domain, &fine)?;
    let uf = out.timed("refined solve", |_| ResolventOperator::new(&fine_mesh, &p)?.apply(&fine_src, &fine_src.sample(&bump), &eval))?;
    let change = max_rel(&u.u, &uf.u);
    let tol = cfg.resolvent.refinement_tolerance;
    out.criteria.push(Criterion::new(
        "refinement",
        change <= tol,
        format!("relative change {change:.3e} with panels and source grid doubled (tolerance {tol:.1e})"),
    ));
    out.criteria.push(Criterion::new(
        "boundary residual",
        u.correction.residual.is_finite(),
        format!("bordered system residual {:.3e}, multiplier {:.3e}", u.correction.residual, u.correction.augmented_multiplier.norm()),
    ));

    out.timed("resolvent identity", |o| identity(cfg, &mesh, &src, &eval, o))?;
    Ok(out)
}

/// Random `λ` with `|λ| ∈ [10^{-1}, 10^3]` and `|arg λ| ≤ 0.9 (π − θ)`.
fn random_lambda(rng: &mut ChaCha8Rng, theta: f64) -> C64 {
    C64::from_polar(10f64.powf(rng.random_range(-1.0..3.0)), rng.random_range(-0.9..0.9) * (PI - theta))
}

/// `R(λ)f − R(μ)f − (μ − λ) R(λ) R(μ) f`, relative to the larger of `R(λ)f`, `R(μ)f`.
fn identity(
    cfg: &ExperimentConfig,
    mesh: &crate::geometry::BoundaryMesh,
    src: &VolumeGrid,
    eval: &VolumeGrid,
    out: &mut SuiteOutput,
) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.resolvent.seed);
    let f = src.sample(&gaussian_vortex(cfg.force.center, cfg.force.width));
    let fsrc = field_source(&cfg.domain, src, eval);
    let mut t = Table::new(&["lambda_re", "lambda_im", "mu_re", "mu_im", "residual"]);
    let mut worst = 0.0f64;
    for _ in 0..cfg.resolvent.identity_pairs {
        let (l, m) = (random_lambda(&mut rng, cfg.theta), random_lambda(&mut rng, cfg.theta));
        let rl = ResolventOperator::new(mesh, &ResolventParameter::new(l, cfg.theta)?)?;
        let rm = ResolventOperator::new(mesh, &ResolventParameter::new(m, cfg.theta)?)?;
        let ul = rl.apply(src, &f, eval)?.u;
        let um = rm.apply(src, &f, eval)?.u;
        let w = rl.apply(fsrc, &um, eval)?.u;
        let lhs: Vec<[C64; 2]> = ul.iter().zip(&um).map(|(a, b)| [a[0] - b[0], a[1] - b[1]]).collect();
        let rhs: Vec<[C64; 2]> = w.iter().map(|v| [v[0] * (m - l), v[1] * (m - l)]).collect();
        let scale = ul.iter().chain(&um).map(|v| v[0].norm().max(v[1].norm())).fold(0.0, f64::max);
        let d = lhs.iter().zip(&rhs).map(|(a, b)| (a[0] - b[0]).norm().max((a[1] - b[1]).norm())).fold(0.0, f64::max);
        let r = d / scale;
        worst = worst.max(r);
        t.push(vec![num(l.re), num(l.im), num(m.re), num(m.im), num(r)])?;
    }
    out.table("resolvent_identity.csv", t);
    let tol = cfg.resolvent.identity_tolerance;
    out.criteria.push(Criterion::new(
        "resolvent identity",
        worst <= tol,
        format!("max relative residual {worst:.3e} over {} pairs (tolerance {tol:.1e})", cfg.resolvent.identity_pairs),
    ));
    Ok(())
}

pub fn sweep_spec(cfg: &ExperimentConfig) -> SweepSpec {
    SweepSpec {
        curve: cfg.domain.clone(),
        theta: cfg.theta,
        grading: cfg.mesh.grading,
        moduli: cfg.lambda_grid.moduli.clone(),
        arguments: cfg.lambda_grid.arguments.clone(),
        exponents: cfg.sweep.exponents.clone(),
        coarse: cfg.sweep.coarse,
        fine: cfg.sweep.fine,
        vortex_center: cfg.force.center,
        vortex_width: cfg.force.width,
    }
}

pub fn resolvent_sweep(cfg: &ExperimentConfig) -> Result<SuiteOutput> {
    let mut out = SuiteOutput::default();
    let rep = out.timed("resolvent sweep", |_| run_sweep(&sweep_spec(cfg)))?;
    let mut t = Table::new(&["lambda_re", "lambda_im", "abs_lambda", "q", "ratio", "mesh_N", "grid_N"]);
    for r in &rep.rows {
        t.push(vec![
            num(r.lambda.re),
            num(r.lambda.im),
            num(r.lambda.norm()),
            num(r.q),
            num(r.ratio),
            r.mesh_n.to_string(),
            r.grid_n.to_string(),
        ])?;
    }
    out.table("sweep.csv", t);
    let mut s = Table::new(&["q", "sup_coarse", "sup_fine", "drift", "lambda_refinement"]);
    for (i, &(q, a, b)) in rep.suprema.iter().enumerate() {
        s.push(vec![num(q), num(a), num(b), num(rep.drifts[i].1), num(rep.lambda_refinement[i].1)])?;
    }
    out.table("sweep_summary.csv", s);
    out.criteria.push(Criterion::new(
        "lambda coverage",
        rep.coverage_ok,
        if rep.coverage_ok {
            format!("{} moduli by {} arguments", cfg.lambda_grid.moduli.len(), cfg.lambda_grid.arguments.len())
        } else {
            "insufficient coverage: the grid must span six decades of |lambda| and at least three arguments".to_string()
        },
    ));
    let max_drift = cfg.sweep.max_drift;
    out.criteria.push(Criterion::new(
        "uniform bound",
        rep.passes(max_drift),
        rep.suprema
            .iter()
            .zip(&rep.drifts)
            .zip(&rep.lambda_refinement)
            .map(|(((q, a, b), (_, d)), (_, l))| format!("q={q}: sup {a:.4}/{b:.4}, drift {d:.2e}, lambda refinement {l:.2e}"))
            .collect::<Vec<_>>()
            .join("; "),
    ));
    Ok(out)
}
