//! Functions of the Stokes operator `A` by quadrature of resolvents
//! `(λ + A)^{-1}`: the semigroup `e^{−tA}`, negative fractional powers
//! `A^{−θ}`, and `L^p–L^q` smoothing slopes.
//!
//! The semigroup is
//!
//! ```text
//! e^{−tA} f = (1/2πi) ∫_C e^{tλ} (λ + A)^{-1} f dλ,   C = {δ₀ + ρ e^{±iϑ}, ρ ≥ 0},
//! ```
//!
//! traversed upwards. For real `f` the lower ray is the conjugate of the
//! upper one, so only upper-ray resolvents are solved and complex data are
//! split into real and imaginary parts. The ray is parametrized by
//! `ρ = δ₀ exp(s − e^{−s})` and summed with the trapezoidal rule; the rule on
//! every other node gives the error estimate.
//!
//! Fractional powers use
//! `A^{−θ} f = (sin πθ / π) ∫_0^∞ t^{−θ} (t + A)^{-1} f dt` with
//! `t = exp(c + (π/2) sinh s)`.

use crate::error::{Error, Result};
use crate::geometry::BoundaryMesh;
use crate::kernels::ResolventParameter;
use crate::solver::{discrete_norm, gradient, ResolventOperator, VolumeGrid};
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

const Z: C64 = C64 { re: 0.0, im: 0.0 };

/// `log(1e16)`: `|e^{tλ}|` at the ray ends is below `1e−16`.
const EXP_TRUNCATION: f64 = 36.85;

/// Mesh, grid and sector shared by every resolvent solve. The grid carries
/// both the data and the results, so results can be fed back in.
#[derive(Clone, Copy)]
pub struct DomainSetup<'a> {
    pub mesh: &'a BoundaryMesh,
    pub grid: &'a VolumeGrid,
    pub theta: f64,
}

/// Resolvent operators keyed by `λ`, so that repeated applications at the
/// same quadrature nodes reuse the factored boundary system.
pub struct ResolventCache<'a> {
    setup: DomainSetup<'a>,
    ops: Vec<(C64, ResolventOperator<'a>)>,
    /// Resolvent applications performed so far.
    pub solves: usize,
}

impl<'a> ResolventCache<'a> {
    pub fn new(setup: DomainSetup<'a>) -> Self {
        ResolventCache { setup, ops: Vec::new(), solves: 0 }
    }

    pub fn setup(&self) -> DomainSetup<'a> {
        self.setup
    }

    /// Drops the stored factorizations.
    pub fn clear(&mut self) {
        self.ops.clear();
    }

    fn position(&self, l: C64) -> Option<usize> {
        self.ops.iter().position(|(m, _)| *m == l)
    }

    /// `(λ_j + A)^{-1} f` for every `λ_j`, in order.
    pub fn apply_all(&mut self, lambdas: &[C64], f: &[[C64; 2]]) -> Result<Vec<Vec<[C64; 2]>>> {
        let s = self.setup;
        let mut missing: Vec<C64> = lambdas.iter().copied().filter(|&l| self.position(l).is_none()).collect();
        missing.dedup();
        let new_ops: Vec<(C64, ResolventOperator<'a>)> = missing
            .par_iter()
            .map(|&l| Ok((l, ResolventOperator::new(s.mesh, &ResolventParameter::new(l, s.theta)?)?)))
            .collect::<Result<_>>()?;
        self.ops.extend(new_ops);
        let idx: Vec<usize> = lambdas.iter().map(|&l| self.position(l).expect("operator was just built")).collect();
        let ops = &self.ops;
        let out: Vec<Vec<[C64; 2]>> = idx.par_iter().map(|&i| Ok(ops[i].1.apply(s.grid, f, s.grid)?.u)).collect::<Result<_>>()?;
        self.solves += lambdas.len();
        Ok(out)
    }

    /// `(λ + A)^{-1} f`.
    pub fn apply(&mut self, lambda: C64, f: &[[C64; 2]]) -> Result<Vec<[C64; 2]>> {
        Ok(self.apply_all(&[lambda], f)?.pop().expect("one result"))
    }
}

/// Field on the grid with an a-posteriori quadrature error estimate in the
/// grid `L²` norm: relative to `‖f‖` for the semigroup, whose norm decays,
/// and relative to the result for fractional powers.
#[derive(Clone, Debug)]
pub struct OperatorFunctionResult {
    pub values: Vec<[C64; 2]>,
    pub error_estimate: f64,
}

/// Upper ray `λ = r_min + ρ e^{iϑ}`, `0 ≤ ρ ≤ r_max`, of the semigroup
/// contour; the lower ray is its mirror image.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContourSpec {
    pub vartheta: f64,
    /// Offset `δ₀` of the vertex on the positive real axis.
    pub r_min: f64,
    /// Ray truncation length.
    pub r_max: f64,
    /// Nodes per decade of `ρ` on the far part of the ray.
    pub nodes_per_decade: usize,
}

/// Default half-angle `π − θ − π/16`.
pub fn default_vartheta(theta: f64) -> f64 {
    PI - theta - PI / 16.0
}

/// Default vertex `δ₀ = min(0.1, 1/(10t))`.
pub fn default_offset(t: f64) -> f64 {
    0.1f64.min(1.0 / (10.0 * t))
}

impl ContourSpec {
    /// Defaults for time `t`: `|e^{tλ}| < 1e−16` at the ray ends.
    pub fn for_time(t: f64, theta: f64) -> Result<Self> {
        check_time(t)?;
        let vartheta = default_vartheta(theta);
        let r_min = default_offset(t);
        Ok(ContourSpec { vartheta, r_min, r_max: (EXP_TRUNCATION + t * r_min) / (t * -vartheta.cos()), nodes_per_decade: 10 })
    }

    pub fn validate(&self, theta: f64) -> Result<()> {
        if !(self.vartheta > 0.5 * PI && self.vartheta < PI - theta) {
            return Err(Error::arg(format!("contour angle {} must lie in (π/2, π − θ) = (π/2, {})", self.vartheta, PI - theta)));
        }
        if !(self.r_min > 0.0 && self.r_min < self.r_max && self.r_max.is_finite()) {
            return Err(Error::arg(format!("contour needs 0 < r_min < r_max, got {} and {}", self.r_min, self.r_max)));
        }
        if self.nodes_per_decade < 2 {
            return Err(Error::arg("contour needs at least 2 nodes per decade"));
        }
        Ok(())
    }

    /// Nodes `λ_j` and trapezoidal weights `h ρ'(s_j) e^{iϑ}`. Even-indexed
    /// nodes form the coarse rule with step `2h`.
    pub fn nodes(&self) -> Vec<(C64, C64)> {
        let h = std::f64::consts::LN_10 / self.nodes_per_decade as f64;
        let rho = |s: f64| self.r_min * (s - (-s).exp()).exp();
        // the segment ρ < 1e−14 δ₀ contributes below roundoff
        let floor = 1e-14 * self.r_min;
        let mut s0 = -1.0;
        while rho(s0) > floor {
            s0 -= 0.5;
        }
        let dir = C64::from_polar(1.0, self.vartheta);
        let mut out = Vec::new();
        let mut s = s0;
        loop {
            let r = rho(s);
            out.push((self.r_min + dir * r, dir * (h * r * (1.0 + (-s).exp()))));
            if r >= self.r_max {
                break;
            }
            s += h;
        }
        // keep an odd count so the coarse rule ends on the last node
        if out.len() % 2 == 0 {
            let r = rho(s + h);
            out.push((self.r_min + dir * r, dir * (h * r * (1.0 + (-(s + h)).exp()))));
        }
        out
    }
}

fn check_time(t: f64) -> Result<()> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::arg(format!("time t = {t} must be positive")));
    }
    Ok(())
}

/// Parts below this fraction of the field's size are roundoff and dropped.
const NEGLIGIBLE_PART: f64 = 1e-12;

/// Real and imaginary parts of `f` as separate real fields; a negligible
/// part is zeroed (the imaginary one omitted).
fn split_real(f: &[[C64; 2]]) -> (Vec<[C64; 2]>, Option<Vec<[C64; 2]>>) {
    let size = |g: fn(&C64) -> f64| f.iter().flatten().map(|v| g(v).abs()).fold(0.0, f64::max);
    let (mr, mi) = (size(|v| v.re), size(|v| v.im));
    let floor = NEGLIGIBLE_PART * mr.max(mi);
    let part = |g: fn(&C64) -> f64, m: f64| -> Vec<[C64; 2]> {
        let keep = if m > floor { 1.0 } else { 0.0 };
        f.iter().map(|v| [C64::new(keep * g(&v[0]), 0.0), C64::new(keep * g(&v[1]), 0.0)]).collect()
    };
    let re = part(|v| v.re, mr);
    let im = if mi > floor { Some(part(|v| v.im, mi)) } else { None };
    (re, im)
}

fn relative_difference(a: &[[C64; 2]], b: &[[C64; 2]], w: &[f64]) -> Result<f64> {
    let d: Vec<[C64; 2]> = a.iter().zip(b).map(|(x, y)| [x[0] - y[0], x[1] - y[1]]).collect();
    let n = discrete_norm(a, w, 2.0)?;
    let e = discrete_norm(&d, w, 2.0)?;
    Ok(if n > 0.0 { e / n } else { e })
}

/// `e^{−tA} f` at several times with a shared contour family: times with
/// the same vertex `δ₀` share nodes (truncated for the smallest of them).
/// `vartheta` and `nodes_per_decade` override the defaults.
pub fn semigroup_trajectory(
    times: &[f64],
    f: &[[C64; 2]],
    cache: &mut ResolventCache,
    vartheta: Option<f64>,
    nodes_per_decade: Option<usize>,
) -> Result<Vec<OperatorFunctionResult>> {
    let setup = cache.setup();
    if f.len() != setup.grid.len() {
        return Err(Error::arg("data do not match the grid"));
    }
    let mut out: Vec<Option<OperatorFunctionResult>> = vec![None; times.len()];
    let mut done = vec![false; times.len()];
    for i in 0..times.len() {
        check_time(times[i])?;
        if done[i] {
            continue;
        }
        let d0 = default_offset(times[i]);
        let group: Vec<usize> = (i..times.len()).filter(|&j| !done[j] && default_offset(times[j]) == d0).collect();
        let tmin = group.iter().map(|&j| times[j]).fold(f64::INFINITY, f64::min);
        let mut spec = ContourSpec::for_time(tmin, setup.theta)?;
        if let Some(v) = vartheta {
            spec.vartheta = v;
            spec.r_max = (EXP_TRUNCATION + tmin * spec.r_min) / (tmin * -v.cos());
        }
        if let Some(n) = nodes_per_decade {
            spec.nodes_per_decade = n;
        }
        let ts: Vec<f64> = group.iter().map(|&j| times[j]).collect();
        for (j, r) in group.iter().zip(contour_sum(&ts, f, cache, &spec)?) {
            out[*j] = Some(r);
            done[*j] = true;
        }
    }
    Ok(out.into_iter().map(|r| r.expect("every time assigned")).collect())
}

/// `e^{−tA} f` on one explicit contour for each of `times`.
pub fn contour_sum(times: &[f64], f: &[[C64; 2]], cache: &mut ResolventCache, spec: &ContourSpec) -> Result<Vec<OperatorFunctionResult>> {
    let setup = cache.setup();
    spec.validate(setup.theta)?;
    let nodes = spec.nodes();
    let lambdas: Vec<C64> = nodes.iter().map(|n| n.0).collect();
    let (re, im) = split_real(f);
    let xr = cache.apply_all(&lambdas, &re)?;
    let xi = match &im {
        Some(v) => Some(cache.apply_all(&lambdas, v)?),
        None => None,
    };
    let n = f.len();
    let fnorm = discrete_norm(f, &setup.grid.weights, 2.0)?;
    if !(fnorm > 0.0) {
        return Err(Error::arg("semigroup data vanish on the grid"));
    }
    times
        .iter()
        .map(|&t| {
            check_time(t)?;
            // (1/π) Im Σ w_j e^{tλ_j} X_j over all nodes and over the even ones
            let combine = |x: &[Vec<[C64; 2]>], step: usize| -> Vec<[f64; 2]> {
                let mut acc = vec![[0.0; 2]; n];
                for j in (0..nodes.len()).step_by(step) {
                    let (l, w) = nodes[j];
                    let c = (t * l).exp() * w * step as f64 / PI;
                    for (a, v) in acc.iter_mut().zip(&x[j]) {
                        a[0] += (c * v[0]).im;
                        a[1] += (c * v[1]).im;
                    }
                }
                acc
            };
            let assemble = |step: usize| -> Vec<[C64; 2]> {
                let r = combine(&xr, step);
                let i = xi.as_ref().map(|x| combine(x, step));
                (0..n)
                    .map(|p| {
                        let (a, b) = i.as_ref().map(|v| (v[p][0], v[p][1])).unwrap_or((0.0, 0.0));
                        [C64::new(r[p][0], a), C64::new(r[p][1], b)]
                    })
                    .collect()
            };
            let fine = assemble(1);
            let coarse = assemble(2);
            let diff: Vec<[C64; 2]> = fine.iter().zip(&coarse).map(|(a, b)| [a[0] - b[0], a[1] - b[1]]).collect();
            let error_estimate = discrete_norm(&diff, &setup.grid.weights, 2.0)? / fnorm;
            if !error_estimate.is_finite() {
                return Err(Error::Numerical(format!("semigroup quadrature at t = {t} is not finite")));
            }
            Ok(OperatorFunctionResult { values: fine, error_estimate })
        })
        .collect()
}

/// `e^{−tA} f` with the default contour; fails if the estimate exceeds `tolerance`.
pub fn semigroup_apply(
    t: f64,
    f: &[[C64; 2]],
    setup: DomainSetup,
    contour: Option<&ContourSpec>,
    tolerance: f64,
) -> Result<OperatorFunctionResult> {
    let mut cache = ResolventCache::new(setup);
    let spec = match contour {
        Some(c) => *c,
        None => ContourSpec::for_time(t, setup.theta)?,
    };
    let r = contour_sum(&[t], f, &mut cache, &spec)?.pop().expect("one time");
    check_estimate(&r, tolerance)?;
    Ok(r)
}

fn check_estimate(r: &OperatorFunctionResult, tolerance: f64) -> Result<()> {
    if r.error_estimate > tolerance {
        return Err(Error::Numerical(format!("quadrature error estimate {:.3e} exceeds tolerance {tolerance:.3e}", r.error_estimate)));
    }
    Ok(())
}

/// Real-axis quadrature for `A^{−θ}`: `nodes` trapezoidal nodes in `s`
/// carry resolvent solves at `t ∈ [t_floor, t_ceiling]`; beyond, the
/// resolvent is replaced by `(t_floor + A)^{-1}` below and by `1/t` above.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FractionalSpec {
    pub nodes: usize,
    pub t_floor: f64,
    pub t_ceiling: f64,
}

impl Default for FractionalSpec {
    fn default() -> Self {
        FractionalSpec { nodes: 40, t_floor: 1e-8, t_ceiling: 1e6 }
    }
}

/// `λ` standing in for `0⁺` in `A^{-1} ≈ (λ + A)^{-1}`.
pub const INVERSE_SURROGATE: f64 = 1e-8;

/// `A^{-1} f` through the resolvent at [`INVERSE_SURROGATE`].
pub fn inverse(f: &[[C64; 2]], cache: &mut ResolventCache) -> Result<Vec<[C64; 2]>> {
    cache.apply(C64::new(INVERSE_SURROGATE, 0.0), f)
}

/// `A^{−θ} f` for `0 < θ < 1`.
pub fn fractional_inverse_power(
    theta_pow: f64,
    f: &[[C64; 2]],
    cache: &mut ResolventCache,
    spec: &FractionalSpec,
) -> Result<OperatorFunctionResult> {
    if !(theta_pow > 0.0 && theta_pow < 1.0) {
        return Err(Error::arg(format!("fractional exponent {theta_pow} must lie in (0, 1)")));
    }
    if !(spec.t_floor > 0.0 && spec.t_floor < spec.t_ceiling && spec.t_ceiling.is_finite()) || spec.nodes < 5 {
        return Err(Error::arg("fractional quadrature needs 0 < t_floor < t_ceiling and at least 5 nodes"));
    }
    let grid = cache.setup().grid;
    let fine_rule = fractional_rule(theta_pow, spec, 1);
    let coarse_rule = fractional_rule(theta_pow, spec, 2);
    let mut lambdas: Vec<C64> = fine_rule.nodes.iter().map(|n| C64::new(n.0, 0.0)).collect();
    lambdas.push(C64::new(spec.t_floor, 0.0));
    let res = cache.apply_all(&lambdas, f)?;
    let (floor_res, inner_res) = res.split_last().expect("nonempty");
    let rule = |r: &FractionalRule| -> Vec<[C64; 2]> {
        let mut acc = vec![[Z; 2]; f.len()];
        for (t, w) in &r.nodes {
            let k = fine_rule.nodes.iter().position(|n| n.0 == *t).expect("coarse nodes are fine nodes");
            for (a, v) in acc.iter_mut().zip(&inner_res[k]) {
                a[0] += v[0] * *w;
                a[1] += v[1] * *w;
            }
        }
        for ((a, v), g) in acc.iter_mut().zip(floor_res).zip(f) {
            for m in 0..2 {
                a[m] += v[m] * r.floor_weight + g[m] * r.identity_weight;
            }
        }
        acc
    };
    let fine = rule(&fine_rule);
    let coarse = rule(&coarse_rule);
    let error_estimate = relative_difference(&fine, &coarse, &grid.weights)?;
    Ok(OperatorFunctionResult { values: fine, error_estimate })
}

/// `A^{−θ} ≈ Σ w_j (t_j + A)^{-1} + floor_weight (t_floor + A)^{-1} + identity_weight I`.
#[derive(Clone, Debug)]
pub struct FractionalRule {
    pub nodes: Vec<(f64, f64)>,
    pub floor_weight: f64,
    pub identity_weight: f64,
}

/// Weights of the fractional-power rule using every `step`-th node.
pub fn fractional_rule(theta_pow: f64, spec: &FractionalSpec, step: i64) -> FractionalRule {
    let (lf, lc) = (spec.t_floor.ln(), spec.t_ceiling.ln());
    let (c, half) = (0.5 * (lf + lc), 0.5 * (lc - lf));
    let jmax = ((spec.nodes - 1) / 2) as i64;
    let h = (2.0 * half / PI).asinh() / jmax as f64;
    let x_of = |j: i64| c + 0.5 * PI * (j as f64 * h).sinh();
    let dx = |j: i64| 0.5 * PI * (j as f64 * h).cosh();
    let hs = h * step as f64;
    let pref = (PI * theta_pow).sin() / PI;
    let nodes = (-jmax..=jmax)
        .filter(|j| j.rem_euclid(step) == 0)
        .map(|j| (x_of(j).exp(), pref * hs * ((1.0 - theta_pow) * x_of(j)).exp() * dx(j)))
        .collect();
    // tails continue the same step until the terms are negligible
    let tail = |start: i64, dir: i64, g: &dyn Fn(f64) -> f64| {
        let (mut sum, mut j) = (0.0, start);
        loop {
            let term = hs * g(x_of(j)) * dx(j);
            if !term.is_finite() || term <= 1e-18 * sum {
                break;
            }
            sum += term;
            j += dir * step;
        }
        pref * sum
    };
    let first = -jmax + jmax.rem_euclid(step) - step;
    let last = jmax - jmax.rem_euclid(step) + step;
    FractionalRule {
        nodes,
        floor_weight: tail(first, -1, &|x| ((1.0 - theta_pow) * x).exp()),
        identity_weight: tail(last, 1, &|x| (-theta_pow * x).exp()),
    }
}

/// Exponents and fit thresholds of a smoothing-slope measurement.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SmoothingSpec {
    pub p_in: f64,
    pub q_out: f64,
    /// Measure `‖∇e^{−tA}f‖_q` instead of `‖e^{−tA}f‖_q`.
    pub gradient: bool,
    pub margin: f64,
    pub min_r_squared: f64,
    /// Windows whose log-log fit has RMS residual at most this also count
    /// as linear: nearly flat data carry too little variance for `R²`.
    pub flat_rms: f64,
    pub min_points: usize,
}

impl SmoothingSpec {
    pub fn new(p_in: f64, q_out: f64, gradient: bool) -> Self {
        SmoothingSpec { p_in, q_out, gradient, margin: 0.1, min_r_squared: 0.98, flat_rms: 1e-3, min_points: 4 }
    }

    /// Predicted rate `1/p − 1/q`, plus `1/2` for the gradient.
    pub fn exponent(&self) -> f64 {
        1.0 / self.p_in - 1.0 / self.q_out + if self.gradient { 0.5 } else { 0.0 }
    }

    pub fn validate(&self) -> Result<()> {
        let band = |x: f64| (1.0 / x - 0.5).abs() <= 0.25 + 1e-12;
        if !(self.p_in <= self.q_out && band(self.p_in) && band(self.q_out)) {
            return Err(Error::arg(format!(
                "smoothing exponents need p ≤ q with |1/p − 1/2| ≤ 1/4 and |1/q − 1/2| ≤ 1/4, got p = {}, q = {}",
                self.p_in, self.q_out
            )));
        }
        if self.min_points < 3 {
            return Err(Error::arg("slope window needs at least 3 points"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct SlopeReport {
    pub times: Vec<f64>,
    pub norms: Vec<f64>,
    /// Inclusive index range of the fitted window.
    pub window: (usize, usize),
    pub slope: f64,
    pub r_squared: f64,
    /// `−(1/p − 1/q)` (minus `1/2` for the gradient).
    pub bound: f64,
    /// `sup_t t^{exponent} ‖·‖_q / ‖f‖_p` over the grid of times.
    pub scaled_sup: f64,
    pub pass: bool,
}

/// Least-squares slope and `R²` of `y` against `x`. A constant `y` counts
/// as a perfect fit.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|v| (v - my) * (v - my)).sum();
    let slope = sxy / sxx;
    let r2 = if syy <= 1e-28 * (1.0 + my * my) { 1.0 } else { (sxy * sxy) / (sxx * syy) };
    (slope, r2)
}

/// RMS residual of `y` about the least-squares line with slope `slope`.
fn fit_rms(x: &[f64], y: &[f64], slope: f64) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    (x.iter().zip(y).map(|(a, b)| (b - my - slope * (a - mx)).powi(2)).sum::<f64>() / n).sqrt()
}

/// Norm of the field or of its gradient (Frobenius) on the grid.
fn field_norm(grid: &VolumeGrid, u: &[[C64; 2]], q: f64, grad: bool) -> Result<f64> {
    if !grad {
        return discrete_norm(u, &grid.weights, q);
    }
    let g = gradient(grid, u)?;
    // rows of the gradient as two vector fields, combined pointwise
    let frob: Vec<[C64; 2]> = g
        .iter()
        .map(|m| {
            let a = (m[0][0].norm_sqr() + m[0][1].norm_sqr()).sqrt();
            let b = (m[1][0].norm_sqr() + m[1][1].norm_sqr()).sqrt();
            [C64::new(a, 0.0), C64::new(b, 0.0)]
        })
        .collect();
    discrete_norm(&frob, &grid.weights, q)
}

/// Slope of `log‖e^{−tA}f‖_q` against `log t` over the largest window (in
/// `log t`) whose linear fit reaches `min_r_squared` (or `flat_rms`).
pub fn smoothing_slope(
    grid: &VolumeGrid,
    f: &[[C64; 2]],
    times: &[f64],
    trajectory: &[OperatorFunctionResult],
    spec: &SmoothingSpec,
) -> Result<SlopeReport> {
    spec.validate()?;
    if times.len() != trajectory.len() || times.len() < spec.min_points {
        return Err(Error::arg("need one field per time and at least the minimum window of times"));
    }
    if times.windows(2).any(|w| !(w[1] > w[0])) || times[0] <= 0.0 {
        return Err(Error::arg("times must be positive and increasing"));
    }
    let norms: Vec<f64> = trajectory.iter().map(|r| field_norm(grid, &r.values, spec.q_out, spec.gradient)).collect::<Result<_>>()?;
    if norms.iter().any(|v| !(*v > 0.0)) {
        return Err(Error::Numerical("vanishing norm along the trajectory".into()));
    }
    let lx: Vec<f64> = times.iter().map(|t| t.ln()).collect();
    let ly: Vec<f64> = norms.iter().map(|v| v.ln()).collect();
    let mut best: Option<(f64, usize, usize, f64, f64)> = None;
    for i in 0..times.len() {
        for j in (i + spec.min_points - 1)..times.len() {
            let (s, r2) = linear_fit(&lx[i..=j], &ly[i..=j]);
            if r2 >= spec.min_r_squared || fit_rms(&lx[i..=j], &ly[i..=j], s) <= spec.flat_rms {
                let span = lx[j] - lx[i];
                if best.map(|b| span > b.0 + 1e-12).unwrap_or(true) {
                    best = Some((span, i, j, s, r2));
                }
            }
        }
    }
    let (_, i, j, slope, r_squared) = best.ok_or_else(|| {
        Error::Numerical(format!("no window of {} times has a linear fit with R² ≥ {}", spec.min_points, spec.min_r_squared))
    })?;
    let fnorm = discrete_norm(f, &grid.weights, spec.p_in)?;
    let a = spec.exponent();
    let scaled_sup = times.iter().zip(&norms).map(|(t, v)| t.powf(a) * v / fnorm).fold(0.0, f64::max);
    let bound = -a;
    Ok(SlopeReport {
        times: times.to_vec(),
        norms,
        window: (i, j),
        slope,
        r_squared,
        bound,
        scaled_sup,
        pass: slope >= bound - spec.margin,
    })
}

/// `‖e^{−(s+t)A}f − e^{−sA}e^{−tA}f‖₂ / ‖e^{−(s+t)A}f‖₂` with the combined
/// quadrature estimate of the three evaluations.
pub fn semigroup_law_residual(s: f64, t: f64, f: &[[C64; 2]], cache: &mut ResolventCache) -> Result<(f64, f64)> {
    let w = &cache.setup().grid.weights.clone();
    let first = semigroup_trajectory(&[t, s + t], f, cache, None, None)?;
    let second = semigroup_trajectory(&[s], &first[0].values, cache, None, None)?.pop().expect("one time");
    let r = relative_difference(&first[1].values, &second.values, w)?;
    Ok((r, first[0].error_estimate + first[1].error_estimate + second.error_estimate))
}
