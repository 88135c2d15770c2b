//! Semigroup, smoothing and fractional-power suites on one mesh and grid.

use super::{bool_str, SuiteOutput};
use crate::calculus::{
    fractional_inverse_power, inverse, semigroup_law_residual, semigroup_trajectory, smoothing_slope, DomainSetup, ResolventCache,
    SmoothingSpec,
};
use crate::cli::config::ExperimentConfig;
use crate::error::{Error, Result};
use crate::geometry::{build_mesh, BoundaryMesh};
use crate::report::{num, Criterion, Table};
use crate::solver::{discrete_norm, gaussian_vortex, VolumeGrid};
use crate::C64;

struct Setup {
    mesh: BoundaryMesh,
    grid: VolumeGrid,
    f: Vec<[C64; 2]>,
}

fn setup(cfg: &ExperimentConfig) -> Result<Setup> {
    let mesh = build_mesh(&cfg.domain, cfg.mesh.panels, cfg.mesh.nodes_per_panel, cfg.mesh.grading)?;
    let grid = VolumeGrid::for_curve(&cfg.domain, cfg.force.grid)?;
    let f = grid.sample(gaussian_vortex(cfg.force.center, cfg.force.width));
    Ok(Setup { mesh, grid, f })
}

impl Setup {
    fn domain(&self, theta: f64) -> DomainSetup<'_> {
        DomainSetup { mesh: &self.mesh, grid: &self.grid, theta }
    }

    fn l2(&self, u: &[[C64; 2]]) -> Result<f64> {
        discrete_norm(u, &self.grid.weights, 2.0)
    }

    fn rel_diff(&self, a: &[[C64; 2]], b: &[[C64; 2]]) -> Result<f64> {
        let d: Vec<[C64; 2]> = a.iter().zip(b).map(|(x, y)| [x[0] - y[0], x[1] - y[1]]).collect();
        Ok(self.l2(&d)? / self.l2(b)?)
    }
}

pub fn semigroup(cfg: &ExperimentConfig) -> Result<SuiteOutput> {
    let mut out = SuiteOutput::default();
    let sg = &cfg.semigroup;
    let s = setup(cfg)?;
    let mut cache = ResolventCache::new(s.domain(cfg.theta));
    let f0 = s.l2(&s.f)?;

    let traj = out.timed("decay table", |_| semigroup_trajectory(&sg.times, &s.f, &mut cache, sg.vartheta, Some(sg.nodes_per_decade)))?;
    let mut t = Table::new(&["t", "l2_ratio", "error_estimate"]);
    let mut norms = Vec::new();
    for (time, r) in sg.times.iter().zip(&traj) {
        let n = s.l2(&r.values)? / f0;
        norms.push(n);
        t.push(vec![num(*time), num(n), num(r.error_estimate)])?;
    }
    out.table("semigroup_decay.csv", t);
    let worst_est = traj.iter().map(|r| r.error_estimate).fold(0.0, f64::max);
    let monotone = norms.windows(2).all(|w| w[1] < w[0]) && norms.first().is_some_and(|&n| n < 1.0);
    out.criteria.push(Criterion::new(
        "monotone decay",
        monotone,
        format!("L2 ratio {} at t = {:?}", norms.iter().map(|n| format!("{n:.4e}")).collect::<Vec<_>>().join(", "), sg.times),
    ));
    out.criteria.push(Criterion::new(
        "quadrature estimates",
        worst_est <= sg.tolerance,
        format!("largest error estimate {worst_est:.3e} (tolerance {:.1e})", sg.tolerance),
    ));
    cache.clear();

    let (res, est) = out.timed("semigroup law", |_| semigroup_law_residual(sg.law[0], sg.law[1], &s.f, &mut cache))?;
    out.criteria.push(Criterion::new(
        "semigroup law",
        res <= sg.law_tolerance,
        format!("relative residual {res:.3e} at (s, t) = ({}, {}), estimate {est:.2e}", sg.law[0], sg.law[1]),
    ));
    cache.clear();

    let small =
        out.timed("continuity", |_| semigroup_trajectory(&sg.continuity_times, &s.f, &mut cache, sg.vartheta, Some(sg.nodes_per_decade)))?;
    let mut c = Table::new(&["t", "rel_error", "error_estimate"]);
    let mut errs = Vec::new();
    for (time, r) in sg.continuity_times.iter().zip(&small) {
        let e = s.rel_diff(&r.values, &s.f)?;
        errs.push(e);
        c.push(vec![num(*time), num(e), num(r.error_estimate)])?;
    }
    out.table("semigroup_continuity.csv", c);
    out.criteria.push(Criterion::new(
        "strong continuity",
        errs.windows(2).all(|w| w[1] < w[0]),
        format!("|e^(-tA)f - f| / |f| = {}", errs.iter().map(|e| format!("{e:.3e}")).collect::<Vec<_>>().join(", ")),
    ));
    Ok(out)
}

/// `n` log-spaced times over `[a, b]`.
fn log_times(range: [f64; 2], n: usize) -> Vec<f64> {
    let (a, b) = (range[0].ln(), range[1].ln());
    (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1).max(1) as f64).exp()).collect()
}

pub fn smoothing(cfg: &ExperimentConfig) -> Result<SuiteOutput> {
    let mut out = SuiteOutput::default();
    let sm = &cfg.smoothing;
    let s = setup(cfg)?;
    let mut cache = ResolventCache::new(s.domain(cfg.theta));
    let times = log_times(sm.time_range, sm.time_points);
    let traj = out.timed("trajectory", |_| {
        semigroup_trajectory(&times, &s.f, &mut cache, cfg.semigroup.vartheta, Some(cfg.semigroup.nodes_per_decade))
    })?;
    let mut rows = Table::new(&["p", "q", "gradient", "t", "norm", "in_window", "error_estimate"]);
    let mut summary = Table::new(&["p", "q", "gradient", "slope", "bound", "r_squared", "t_first", "t_last", "scaled_sup", "pass"]);
    for case in &sm.cases {
        let margin = case.margin.unwrap_or(sm.margin);
        let spec = SmoothingSpec { margin, min_r_squared: sm.min_r_squared, ..SmoothingSpec::new(case.p, case.q, case.gradient) };
        let name = format!("smoothing p={} q={}{}", case.p, case.q, if case.gradient { " gradient" } else { "" });
        let rep = match smoothing_slope(&s.grid, &s.f, &times, &traj, &spec) {
            Ok(r) => r,
            Err(Error::Numerical(m)) => {
                out.criteria.push(Criterion::new(name, false, m));
                continue;
            }
            Err(e) => return Err(e),
        };
        for (i, (t, n)) in rep.times.iter().zip(&rep.norms).enumerate() {
            let inside = i >= rep.window.0 && i <= rep.window.1;
            rows.push(vec![
                num(case.p),
                num(case.q),
                bool_str(case.gradient),
                num(*t),
                num(*n),
                bool_str(inside),
                num(traj[i].error_estimate),
            ])?;
        }
        let (a, b) = (rep.times[rep.window.0], rep.times[rep.window.1]);
        summary.push(vec![
            num(case.p),
            num(case.q),
            bool_str(case.gradient),
            num(rep.slope),
            num(rep.bound),
            num(rep.r_squared),
            num(a),
            num(b),
            num(rep.scaled_sup),
            bool_str(rep.pass),
        ])?;
        out.criteria.push(Criterion::new(
            name,
            rep.pass,
            format!(
                "slope {:.4} vs bound {:.4} - {} on t in [{a:.2e}, {b:.2e}] (auto-detected window, R2 {:.4})",
                rep.slope, rep.bound, margin, rep.r_squared
            ),
        ));
    }
    out.table("smoothing.csv", rows);
    out.table("smoothing_summary.csv", summary);
    Ok(out)
}

pub fn fractional(cfg: &ExperimentConfig) -> Result<SuiteOutput> {
    let mut out = SuiteOutput::default();
    let fc = &cfg.fractional;
    let s = setup(cfg)?;
    let mut cache = ResolventCache::new(s.domain(cfg.theta));
    let q = &fc.quadrature;

    let inv = out.timed("inverse", |_| inverse(&s.f, &mut cache))?;
    let mut t = Table::new(&["power", "l2_ratio", "error_estimate"]);
    let f0 = s.l2(&s.f)?;
    let mut half = None;
    for &pw in &fc.powers {
        let r = out.timed("powers", |_| fractional_inverse_power(pw, &s.f, &mut cache, q))?;
        t.push(vec![num(pw), num(s.l2(&r.values)? / f0), num(r.error_estimate)])?;
        if pw == 0.5 {
            half = Some(r);
        }
    }
    t.push(vec![num(1.0), num(s.l2(&inv)? / f0), num(0.0)])?;
    out.table("fractional_powers.csv", t);

    let half = match half {
        Some(h) => h,
        None => fractional_inverse_power(0.5, &s.f, &mut cache, q)?,
    };
    let twice = out.timed("composition", |_| fractional_inverse_power(0.5, &half.values, &mut cache, q))?;
    let comp = s.rel_diff(&twice.values, &inv)?;
    out.criteria.push(Criterion::new(
        "composition",
        comp <= fc.composition_tolerance,
        format!("|A^(-1/2) A^(-1/2) f - A^(-1) f| / |A^(-1) f| = {comp:.3e} (tolerance {:.1e})", fc.composition_tolerance),
    ));

    let near = out.timed("limit", |_| fractional_inverse_power(0.999, &s.f, &mut cache, q))?;
    let lim = s.rel_diff(&near.values, &inv)?;
    out.criteria.push(Criterion::new(
        "power limit",
        lim <= fc.limit_tolerance,
        format!("|A^(-0.999) f - A^(-1) f| / |A^(-1) f| = {lim:.3e} (tolerance {:.1e})", fc.limit_tolerance),
    ));

    if let Some(time) = fc.commutation_time {
        if !(time > 0.0) {
            return Err(Error::Config(format!("fractional.commutation_time must be positive, got {time}")));
        }
        let vt = cfg.semigroup.vartheta;
        let npd = Some(cfg.semigroup.nodes_per_decade);
        let a = out.timed("commutation", |_| {
            let e = semigroup_trajectory(&[time], &half.values, &mut cache, vt, npd)?.remove(0);
            let g = semigroup_trajectory(&[time], &s.f, &mut cache, vt, npd)?.remove(0);
            let b = fractional_inverse_power(0.5, &g.values, &mut cache, q)?;
            s.rel_diff(&e.values, &b.values)
        })?;
        out.criteria.push(Criterion::new(
            "commutation",
            a <= fc.commutation_tolerance,
            format!("|A^(-1/2) e^(-tA) f - e^(-tA) A^(-1/2) f| relative {a:.3e} at t = {time}"),
        ));
    }
    Ok(out)
}
