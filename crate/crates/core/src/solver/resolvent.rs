//! The body-force resolvent `u = (λ + A)^{-1} f` as
//! `u = u_N + D_λ f_corr`, where `u_N` is the Newtonian potential and
//! `f_corr` solves the Dirichlet equation with data `−u_N|∂Ω`, and the
//! resolvent sweep of `(1 + |λ|)‖u‖_q / ‖f‖_q`.

use super::{
    discrete_norm, newtonian_potential, normalize_pressure, BorderedSystem, DirichletProblem, FieldSample, ResolventSolve, VolumeGrid,
    DEFAULT_COMPATIBILITY_TOLERANCE,
};
use crate::error::{Error, Result};
use crate::geometry::{build_mesh, compatibility_defect, BoundaryCurve, BoundaryMesh};
use crate::kernels::ResolventParameter;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

const Z: C64 = C64 { re: 0.0, im: 0.0 };

/// Velocity and normalized pressure on the evaluation grid together with
/// the boundary correction.
#[derive(Clone, Debug)]
pub struct BodyForceSolve<'a> {
    pub u: Vec<[C64; 2]>,
    pub phi: Vec<C64>,
    pub correction: ResolventSolve<'a>,
}

/// `(λ + A)^{-1}` at one `λ` with the bordered boundary matrix assembled
/// once, for repeated application.
pub struct ResolventOperator<'a> {
    pub mesh: &'a BoundaryMesh,
    pub p: ResolventParameter,
    system: BorderedSystem,
}

impl<'a> ResolventOperator<'a> {
    pub fn new(mesh: &'a BoundaryMesh, p: &ResolventParameter) -> Result<Self> {
        Ok(ResolventOperator { mesh, p: *p, system: BorderedSystem::new(mesh, p)? })
    }

    /// Applies the resolvent to `f` given on `source`, returning fields on
    /// the inside points of `eval` (zeros elsewhere). `source` must carry
    /// the support of `f`; for polar sources it may be a disk enclosing `Ω`.
    pub fn apply(&self, source: &VolumeGrid, f: &[[C64; 2]], eval: &VolumeGrid) -> Result<BodyForceSolve<'a>> {
        let idx = eval.inside_indices();
        let mut targets: Vec<[f64; 2]> = idx.iter().map(|&i| eval.points[i]).collect();
        let n_in = targets.len();
        targets.extend_from_slice(&self.mesh.nodes);
        let un = newtonian_potential(source, f, &self.p, &targets)?;
        let g: Vec<[C64; 2]> = un[n_in..].iter().map(|s| [-s.u[0], -s.u[1]]).collect();
        let prob = DirichletProblem::new(self.mesh, self.p, g)?;
        // measured against the size of u_N, since the boundary data alone
        // can be far smaller than the interior field
        let perimeter: f64 = self.mesh.weights.iter().sum();
        let scale = perimeter * un.iter().map(|s| s.u[0].norm().max(s.u[1].norm())).fold(0.0, f64::max);
        let d = compatibility_defect(&prob.g, self.mesh)?;
        let defect = if scale > 0.0 { d / scale } else { 0.0 };
        if defect > DEFAULT_COMPATIBILITY_TOLERANCE {
            return Err(Error::Incompatible { defect, tol: DEFAULT_COMPATIBILITY_TOLERANCE });
        }
        let correction = self.system.solve(&prob)?;
        let corr = correction.evaluate(&targets[..n_in])?;
        let mut samples: Vec<FieldSample> = eval.points.iter().map(|&x| FieldSample { x, u: [Z; 2], phi: Z }).collect();
        for (m, &i) in idx.iter().enumerate() {
            samples[i] =
                FieldSample { x: eval.points[i], u: [un[m].u[0] + corr[m].u[0], un[m].u[1] + corr[m].u[1]], phi: un[m].phi + corr[m].phi };
        }
        normalize_pressure(&mut samples, eval);
        Ok(BodyForceSolve { u: samples.iter().map(|s| s.u).collect(), phi: samples.iter().map(|s| s.phi).collect(), correction })
    }
}

/// One-shot `(λ + A)^{-1} f`; see [`ResolventOperator::apply`].
pub fn solve_resolvent<'a>(
    mesh: &'a BoundaryMesh,
    source: &VolumeGrid,
    f: &[[C64; 2]],
    p: &ResolventParameter,
    eval: &VolumeGrid,
) -> Result<BodyForceSolve<'a>> {
    ResolventOperator::new(mesh, p)?.apply(source, f, eval)
}

/// Divergence-free Gaussian vortex `f = ∇^⊥ exp(−|x − center|² / width²)`
/// with `∇^⊥ = (−∂_2, ∂_1)`.
pub fn gaussian_vortex(center: [f64; 2], width: f64) -> impl Fn([f64; 2]) -> [C64; 2] + Sync {
    move |x| {
        let d = [x[0] - center[0], x[1] - center[1]];
        let w2 = width * width;
        let a = 2.0 * (-(d[0] * d[0] + d[1] * d[1]) / w2).exp() / w2;
        [C64::new(a * d[1], 0.0), C64::new(-a * d[0], 0.0)]
    }
}

/// Mesh and grid resolution of one refinement level.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Level {
    pub panels: usize,
    pub nodes_per_panel: usize,
    /// Rings of the polar source grid (angles `2 rings + 1`); for tensor
    /// evaluation grids also the cells across the domain.
    pub grid: usize,
    /// Rings of the polar source grid on non-circular domains, whose
    /// enclosing disk is larger than the domain (default `2 grid`).
    #[serde(default)]
    pub source_grid: Option<usize>,
}

/// Domain, sector, `λ` grid and data of a resolvent sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub curve: BoundaryCurve,
    pub theta: f64,
    pub grading: f64,
    /// `|λ|` values.
    pub moduli: Vec<f64>,
    /// `arg λ` values, inside `(−(π − θ), π − θ)`.
    pub arguments: Vec<f64>,
    pub exponents: Vec<f64>,
    pub coarse: Level,
    pub fine: Level,
    /// Center and width of the Gaussian vortex `f`.
    pub vortex_center: [f64; 2],
    pub vortex_width: f64,
}

pub type SweepDomain = BoundaryCurve;

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub lambda: C64,
    pub q: f64,
    pub ratio: f64,
    pub mesh_n: usize,
    pub grid_n: usize,
}

/// Ratios at both levels, per-exponent suprema and drifts.
#[derive(Clone, Debug)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    /// `(q, sup coarse, sup fine)`.
    pub suprema: Vec<(f64, f64, f64)>,
    /// Largest `|r_fine − r_coarse| / r_fine` over the grid, per exponent.
    pub drifts: Vec<(f64, f64)>,
    /// Relative change of the coarse-level supremum when the `λ` grid is
    /// refined by geometric midpoints of the moduli and midpoints of the
    /// arguments, per exponent.
    pub lambda_refinement: Vec<(f64, f64)>,
    /// Whether the grid spans six decades of `|λ|` and at least three
    /// arguments; sweeps failing this never pass.
    pub coverage_ok: bool,
}

impl SweepReport {
    /// Finite ratios, adequate coverage and drift below `max_drift`.
    pub fn passes(&self, max_drift: f64) -> bool {
        self.coverage_ok
            && self.rows.iter().all(|r| r.ratio.is_finite())
            && self.drifts.iter().all(|(_, d)| *d < max_drift)
            && self.lambda_refinement.iter().all(|(_, d)| *d < max_drift)
            && self.suprema.iter().all(|(_, a, b)| (a - b).abs() < max_drift * b)
    }
}

/// Source and evaluation grids for a level: for circles one polar grid;
/// otherwise a polar source grid on the circumscribed disk of the bounding
/// box and a tensor evaluation grid.
pub fn level_grids(curve: &BoundaryCurve, level: &Level) -> Result<(VolumeGrid, VolumeGrid)> {
    match curve {
        BoundaryCurve::Circle { .. } => {
            let g = VolumeGrid::for_curve(curve, level.grid)?;
            Ok((g.clone(), g))
        }
        _ => {
            let (lo, hi) = curve.bounding_box();
            let c = [0.5 * (lo[0] + hi[0]), 0.5 * (lo[1] + hi[1])];
            let r = 0.5 * (hi[0] - lo[0]).hypot(hi[1] - lo[1]) * (1.0 + 1e-9);
            let n = level.source_grid.unwrap_or(2 * level.grid);
            let src = VolumeGrid::polar(c, r, n, 2 * n + 1)?;
            Ok((src, VolumeGrid::for_curve(curve, level.grid)?))
        }
    }
}

/// Midpoints added when the `λ` grid is refined: geometric means of
/// neighbouring moduli at every argument, and means of neighbouring
/// arguments at every modulus.
fn refined_lambdas(moduli: &[f64], arguments: &[f64]) -> Vec<C64> {
    let mut out = Vec::new();
    for w in moduli.windows(2) {
        for &a in arguments {
            out.push(C64::from_polar((w[0] * w[1]).sqrt(), a));
        }
    }
    for &m in moduli {
        for w in arguments.windows(2) {
            out.push(C64::from_polar(m, 0.5 * (w[0] + w[1])));
        }
    }
    out
}

/// Ratio `(1 + |λ|)‖u‖_q / ‖f‖_q` over the grid at both levels; the coarse
/// level also covers the refined `λ` grid.
pub fn resolvent_sweep(spec: &SweepSpec) -> Result<SweepReport> {
    spec.curve.validate()?;
    if spec.exponents.iter().any(|q| !(*q >= 1.0)) {
        return Err(Error::arg("sweep exponents must be at least 1"));
    }
    let bump = gaussian_vortex(spec.vortex_center, spec.vortex_width);
    let mut rows = Vec::new();
    let mut per_level: Vec<Vec<Vec<f64>>> = Vec::new();
    let mut midpoint_ratios: Vec<Vec<f64>> = Vec::new();
    for level in [&spec.coarse, &spec.fine] {
        let mesh = build_mesh(&spec.curve, level.panels, level.nodes_per_panel, spec.grading)?;
        let (src, eval) = level_grids(&spec.curve, level)?;
        let fs = src.sample(&bump);
        let fe = eval.sample(&bump);
        let fnorm: Vec<f64> = spec.exponents.iter().map(|&q| discrete_norm(&fe, &eval.weights, q)).collect::<Result<_>>()?;
        let mut solve = |lambda: C64| -> Result<Vec<f64>> {
            let p = ResolventParameter::new(lambda, spec.theta)?;
            let sol = solve_resolvent(&mesh, &src, &fs, &p, &eval)?;
            let mut per_q = Vec::new();
            for (qi, &q) in spec.exponents.iter().enumerate() {
                let ratio = (1.0 + lambda.norm()) * discrete_norm(&sol.u, &eval.weights, q)? / fnorm[qi];
                rows.push(SweepRow { lambda, q, ratio, mesh_n: mesh.len(), grid_n: eval.inside_indices().len() });
                per_q.push(ratio);
            }
            Ok(per_q)
        };
        let mut ratios = Vec::new();
        for &m in &spec.moduli {
            for &a in &spec.arguments {
                ratios.push(solve(C64::from_polar(m, a))?);
            }
        }
        if per_level.is_empty() {
            for l in refined_lambdas(&spec.moduli, &spec.arguments) {
                midpoint_ratios.push(solve(l)?);
            }
        }
        per_level.push(ratios);
    }
    let mut suprema = Vec::new();
    let mut drifts = Vec::new();
    let mut lambda_refinement = Vec::new();
    for (qi, &q) in spec.exponents.iter().enumerate() {
        let base = per_level[0].iter().map(|r| r[qi]).fold(0.0, f64::max);
        let refined = midpoint_ratios.iter().map(|r| r[qi]).fold(base, f64::max);
        lambda_refinement.push((q, (refined - base) / refined));
        let sup = |l: usize| per_level[l].iter().map(|r| r[qi]).fold(0.0, f64::max);
        suprema.push((q, sup(0), sup(1)));
        let d = per_level[0].iter().zip(&per_level[1]).map(|(a, b)| (a[qi] - b[qi]).abs() / b[qi]).fold(0.0, f64::max);
        drifts.push((q, d));
    }
    let (mn, mx) = spec.moduli.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &m| (a.min(m), b.max(m)));
    let coverage_ok = mx / mn >= 1e6 * (1.0 - 1e-12) && spec.arguments.len() >= 3;
    Ok(SweepReport { rows, suprema, drifts, lambda_refinement, coverage_ok })
}
