//! Special-function and kernel checks: raising identity, series/integral
//! agreement, small-argument cancellations, PDE residuals, decay envelopes.

use super::{bool_str, SuiteOutput};
use crate::cli::config::{ExperimentConfig, KernelSuiteConfig};
use crate::error::Result;
use crate::kernels::cancellation::{problematic_p, problematic_q, q3_prime, TermSet};
use crate::kernels::decay::{verify_decay_suite, DecayGrid};
use crate::kernels::make_resolvent_parameter;
use crate::kernels::residual::stokeslet_pde_residual;
use crate::report::{num, Criterion, Table};
use crate::special::{hankel0_derivs, hankel0_integral_derivs, hankel0_series, hankel_integral, UpperHalfArgument};
use crate::C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

/// Residuals of `d/dz{z^{−ν} H_ν} = −z^{−ν} H_{ν+1}` for `ν = 0, 1, 2`,
/// with `H0` and its derivatives from the evaluation path and `H1..H3` from
/// the adaptive integral representation. Each is relative to its largest term.
pub fn raising_residuals(z: C64) -> Result<[f64; 3]> {
    let u = UpperHalfArgument::new(z)?;
    let [_, d1, d2, d3] = hankel0_derivs(u)?;
    let h1 = hankel_integral(1.0, u)?;
    let h2 = hankel_integral(2.0, u)?;
    let h3 = hankel_integral(3.0, u)?;
    let zi = z.inv();
    let rel = |terms: &[C64]| {
        let s: C64 = terms.iter().sum();
        s.norm() / terms.iter().map(|t| t.norm()).fold(0.0, f64::max)
    };
    Ok([rel(&[d1, h1]), rel(&[d1 * zi, -d2, h2]), rel(&[d3, -d2 * 3.0 * zi, d1 * 3.0 * zi * zi, h3])])
}

/// `z = r e^{iφ}` with `r` log-spaced over `radii` and `φ` at cell centres of `(0, π)`.
fn log_polar(radii: [f64; 2], n: usize) -> Vec<C64> {
    let (a, b) = (radii[0].ln(), radii[1].ln());
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        let r = (a + (b - a) * i as f64 / (n - 1) as f64).exp();
        for j in 0..n {
            out.push(C64::from_polar(r, PI * (j as f64 + 0.5) / n as f64));
        }
    }
    out
}

fn raising(cfg: &KernelSuiteConfig, out: &mut SuiteOutput) -> Result<()> {
    let mut t = Table::new(&["z_re", "z_im", "nu0", "nu1", "nu2"]);
    let mut worst = 0.0f64;
    for z in log_polar(cfg.raising_radii, cfg.raising_grid) {
        let r = raising_residuals(z)?;
        worst = worst.max(r.iter().copied().fold(0.0, f64::max));
        t.push(vec![num(z.re), num(z.im), num(r[0]), num(r[1]), num(r[2])])?;
    }
    out.table("raising_identity.csv", t);
    out.criteria.push(Criterion::new(
        "raising identity",
        worst <= cfg.raising_tolerance,
        format!("max relative residual {worst:.3e} (tolerance {:.1e})", cfg.raising_tolerance),
    ));
    Ok(())
}

fn dual_path(cfg: &KernelSuiteConfig, out: &mut SuiteOutput) -> Result<()> {
    let mut t = Table::new(&["z_re", "z_im", "order", "series_re", "series_im", "integral_re", "integral_im", "rel_err"]);
    let mut worst = 0.0f64;
    let n = cfg.overlap_grid;
    for i in 0..n {
        let r = cfg.overlap_radii[0] + (cfg.overlap_radii[1] - cfg.overlap_radii[0]) * i as f64 / (n - 1).max(1) as f64;
        for j in 0..n {
            let u = UpperHalfArgument::new(C64::from_polar(r, PI * (j as f64 + 0.5) / n as f64))?;
            let s = hankel0_series(u, 3)?;
            let g = hankel0_integral_derivs(u)?;
            for m in 0..4 {
                let e = (s[m] - g[m]).norm() / g[m].norm();
                worst = worst.max(e);
                let z = u.value();
                t.push(vec![num(z.re), num(z.im), m.to_string(), num(s[m].re), num(s[m].im), num(g[m].re), num(g[m].im), num(e)])?;
            }
        }
    }
    out.table("dual_path.csv", t);
    out.criteria.push(Criterion::new(
        "series/integral agreement",
        worst <= cfg.overlap_tolerance,
        format!("max relative difference {worst:.3e} on |z| in [{}, {}]", cfg.overlap_radii[0], cfg.overlap_radii[1]),
    ));
    Ok(())
}

/// Relative residuals of the P set, the full Q set, and the Q set with
/// `(Q3) + (Q4)` replaced by its reduced form.
pub fn cancellation_residuals(x: [f64; 2], lambda: C64, theta: f64) -> Result<[f64; 3]> {
    let p = make_resolvent_parameter(lambda, theta)?;
    let a1 = problematic_p(x, &p)?;
    let a2 = problematic_q(x, &p)?;
    let reduced = TermSet { labels: vec!["Q1", "Q2", "Q3'", "B3"], terms: vec![a2.terms[0], a2.terms[1], q3_prime(x)?, a2.terms[7]] };
    Ok([a1.relative_residual(), a2.relative_residual(), reduced.relative_residual()])
}

fn cancellations(cfg: &KernelSuiteConfig, theta: f64, out: &mut SuiteOutput) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut t = Table::new(&["x_re", "x_im", "lambda_re", "lambda_im", "a1", "a2", "a2_reduced"]);
    let mut worst = 0.0f64;
    for _ in 0..cfg.cancellation_draws {
        let r = 10f64.powf(rng.random_range(-3.0..0.0));
        let phi = rng.random_range(0.0..2.0 * PI);
        let x = [r * phi.cos(), r * phi.sin()];
        // |λ||x|² ≤ 1/2 inside the sector
        let rho = rng.random_range(1e-6..0.5);
        let tau = rng.random_range(-1.0..1.0) * 0.99 * (PI - theta);
        let lambda = C64::from_polar(rho / (r * r), tau);
        let res = cancellation_residuals(x, lambda, theta)?;
        worst = worst.max(res.iter().copied().fold(0.0, f64::max));
        t.push(vec![num(x[0]), num(x[1]), num(lambda.re), num(lambda.im), num(res[0]), num(res[1]), num(res[2])])?;
    }
    out.table("cancellation.csv", t);
    out.criteria.push(Criterion::new(
        "small-argument cancellations",
        worst <= cfg.cancellation_tolerance,
        format!("max relative residual {worst:.3e} over {} draws", cfg.cancellation_draws),
    ));
    Ok(())
}

/// `λ ∈ {1, 1 + i, 100 e^{i (2π/3)(1 − θ/π)}}`.
pub fn pde_lambdas(theta: f64) -> [C64; 3] {
    [C64::new(1.0, 0.0), C64::new(1.0, 1.0), C64::from_polar(100.0, 2.0 * PI / 3.0 * (1.0 - theta / PI))]
}

fn pde(cfg: &KernelSuiteConfig, theta: f64, out: &mut SuiteOutput) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(1));
    let mut t = Table::new(&["lambda_re", "lambda_im", "x_re", "x_im", "momentum", "divergence"]);
    let mut worst = 0.0f64;
    for lambda in pde_lambdas(theta) {
        let p = make_resolvent_parameter(lambda, theta)?;
        for _ in 0..cfg.pde_points {
            let r = 10f64.powf(rng.random_range(-1.3..0.3));
            let phi = rng.random_range(0.0..2.0 * PI);
            let x = [r * phi.cos(), r * phi.sin()];
            let (m, d) = stokeslet_pde_residual(x, &p, 1e-3 * r)?;
            worst = worst.max(m).max(d);
            t.push(vec![num(lambda.re), num(lambda.im), num(x[0]), num(x[1]), num(m), num(d)])?;
        }
    }
    out.table("pde_residuals.csv", t);
    out.criteria.push(Criterion::new("kernel PDE residuals", worst <= cfg.pde_tolerance, format!("max relative residual {worst:.3e}")));
    Ok(())
}

fn decay(cfg: &KernelSuiteConfig, theta: f64, out: &mut SuiteOutput) -> Result<()> {
    let grid =
        DecayGrid { rho_min: cfg.decay_rho[0], rho_max: cfg.decay_rho[1], per_decade: cfg.decay_per_decade, n_tau: cfg.decay_arguments };
    let rows = verify_decay_suite(theta, &grid)?;
    let mut t = Table::new(&["estimate_id", "ell", "theta", "regime_min", "regime_max", "measured_sup", "refinement_delta", "pass"]);
    for r in &rows {
        t.push(vec![
            r.estimate_id.clone(),
            r.ell.to_string(),
            num(r.theta),
            num(r.regime_min),
            num(r.regime_max),
            num(r.measured_sup),
            num(r.refinement_delta),
            bool_str(r.pass),
        ])?;
    }
    let worst = rows.iter().map(|r| r.refinement_delta).fold(0.0, f64::max);
    out.table("decay.csv", t);
    out.criteria.push(Criterion::new(
        "decay envelopes",
        rows.iter().all(|r| r.pass),
        format!("{} estimates, max refinement drift {worst:.3e}", rows.len()),
    ));
    Ok(())
}

pub fn verify_kernels(cfg: &ExperimentConfig) -> Result<SuiteOutput> {
    let mut out = SuiteOutput::default();
    let k = &cfg.kernels;
    out.timed("raising identity", |o| raising(k, o))?;
    out.timed("series/integral agreement", |o| dual_path(k, o))?;
    out.timed("small-argument cancellations", |o| cancellations(k, cfg.theta, o))?;
    out.timed("kernel PDE residuals", |o| pde(k, cfg.theta, o))?;
    out.timed("decay envelopes", |o| decay(k, cfg.theta, o))?;
    Ok(out)
}
