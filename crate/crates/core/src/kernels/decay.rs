//! Envelope sweeps for the kernel decay estimates.
//!
//! Every estimate is invariant under `x → s x, λ → λ/s²` (both sides scale
//! with the same power of `s`), so the sweep fixes `|x| = 1` and varies
//! `ρ = |λ||x|²` and `τ = arg λ`. The measured constant is the sup of
//! `quantity / envelope` over the grid; an estimate passes when that sup is
//! finite and moves by less than [`REFINEMENT_TOLERANCE`] on a grid refined
//! twofold in both directions.

use super::tensor::*;
use super::*;
use crate::error::Result;

pub const REFINEMENT_TOLERANCE: f64 = 0.10;

/// Fraction `γ` of the sector half-angle covered by the argument grid.
pub const TAU_FRACTION: f64 = 0.99;

/// Sweep resolution over `ρ ∈ [rho_min, rho_max]` (log-spaced) and
/// `τ ∈ (−(π−θ), π−θ)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecayGrid {
    pub rho_min: f64,
    pub rho_max: f64,
    pub per_decade: usize,
    pub n_tau: usize,
}

impl Default for DecayGrid {
    fn default() -> Self {
        DecayGrid { rho_min: 1e-4, rho_max: 1e4, per_decade: 20, n_tau: 17 }
    }
}

impl DecayGrid {
    /// Twofold refinement; the coarse nodes are a subset of the fine ones.
    pub fn refined(&self) -> Self {
        DecayGrid { per_decade: 2 * self.per_decade, n_tau: 2 * self.n_tau - 1, ..*self }
    }

    fn rhos(&self) -> Vec<f64> {
        let (a, b) = (self.rho_min.log10(), self.rho_max.log10());
        let n = ((b - a) * self.per_decade as f64).round() as usize;
        (0..=n).map(|i| 10f64.powf(a + (b - a) * i as f64 / n as f64)).collect()
    }

    /// Evenly spaced over `[−γ(π−θ), γ(π−θ)]`, endpoints included, so that
    /// every refinement samples the same extreme arguments.
    fn taus(&self, theta: f64) -> Vec<f64> {
        let m = TAU_FRACTION * (PI - theta);
        let n = self.n_tau.max(2);
        (0..n).map(|j| m * (-1.0 + 2.0 * j as f64 / (n - 1) as f64)).collect()
    }
}

/// One estimate of the suite.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Estimate {
    /// `|G| ≤ C e^{−c√|λ||x|}` for `|λ||x|² ≥ 1`.
    HelmholtzValue,
    /// `|∇^ℓ G| ≤ C e^{−c√|λ||x|} / |x|^ℓ`.
    HelmholtzDerivative(usize),
    /// `|∇Γ| ≤ C / ((1 + |λ||x|²)|x|)`.
    StokesletGradient,
    /// `|∇³(G − G0)| ≤ C |λ| / |x|`.
    HelmholtzDifferenceThird,
    /// `|∇(Γ − Γ0)| ≤ C |λ||x| |log(|λ||x|²)|` for `|λ||x|² ≤ 1/2`.
    StationaryComparison,
    /// `|∇^ℓ(G − G0)| ≤ C |λ||x|^{2−ℓ}(|log(|λ||x|²)| + 1)` for `|λ||x|² ≤ 1/2`.
    HelmholtzDifferenceLow(usize),
}

impl Estimate {
    pub fn all() -> Vec<Estimate> {
        vec![
            Estimate::HelmholtzValue,
            Estimate::HelmholtzDerivative(1),
            Estimate::HelmholtzDerivative(2),
            Estimate::HelmholtzDerivative(3),
            Estimate::StokesletGradient,
            Estimate::HelmholtzDifferenceThird,
            Estimate::StationaryComparison,
            Estimate::HelmholtzDifferenceLow(1),
            Estimate::HelmholtzDifferenceLow(2),
        ]
    }

    pub fn id(&self) -> String {
        match self {
            Estimate::HelmholtzValue => "helmholtz_value".into(),
            Estimate::HelmholtzDerivative(l) => format!("helmholtz_derivative_l{l}"),
            Estimate::StokesletGradient => "stokeslet_gradient".into(),
            Estimate::HelmholtzDifferenceThird => "helmholtz_difference_l3".into(),
            Estimate::StationaryComparison => "stationary_comparison".into(),
            Estimate::HelmholtzDifferenceLow(l) => format!("helmholtz_difference_low_l{l}"),
        }
    }

    pub fn ell(&self) -> usize {
        match self {
            Estimate::HelmholtzValue => 0,
            Estimate::HelmholtzDerivative(l) | Estimate::HelmholtzDifferenceLow(l) => *l,
            Estimate::StokesletGradient | Estimate::StationaryComparison => 1,
            Estimate::HelmholtzDifferenceThird => 3,
        }
    }

    /// Range of `ρ = |λ||x|²` where the estimate is claimed.
    pub fn regime(&self) -> (f64, f64) {
        match self {
            Estimate::HelmholtzValue => (1.0, f64::INFINITY),
            Estimate::StationaryComparison | Estimate::HelmholtzDifferenceLow(_) => (0.0, REGIME_THRESHOLD),
            _ => (0.0, f64::INFINITY),
        }
    }

    /// `quantity / envelope` at `|x| = 1` along a fixed direction.
    pub fn ratio(&self, p: &ResolventParameter) -> Result<f64> {
        let x = [0.3f64.cos(), 0.3f64.sin()];
        let rho = p.r;
        let c = 0.5 * (0.5 * p.theta).sin();
        let expo = (-c * rho.sqrt()).exp();
        Ok(match *self {
            Estimate::HelmholtzValue => helmholtz_green(x, p, 0)?.value.norm() / expo,
            Estimate::HelmholtzDerivative(l) => helmholtz_green(x, p, l)?.value.norm() / expo,
            Estimate::StokesletGradient => ten_norm(&grad_stokeslet(x, p)?.value) * (1.0 + rho),
            Estimate::HelmholtzDifferenceThird => ten_norm(&helmholtz_diff_third(x, p)?.value) / rho,
            Estimate::StationaryComparison => ten_norm(&grad_stokeslet_difference(x, p)?.value) / (rho * rho.ln().abs()),
            Estimate::HelmholtzDifferenceLow(l) => helmholtz_difference(x, p, l)?.value.norm() / (rho * (rho.ln().abs() + 1.0)),
        })
    }
}

/// One row of the decay report.
#[derive(Clone, Debug, PartialEq)]
pub struct DecayRow {
    pub estimate_id: String,
    pub ell: usize,
    pub theta: f64,
    pub regime_min: f64,
    pub regime_max: f64,
    pub measured_sup: f64,
    pub refinement_delta: f64,
    pub pass: bool,
}

/// Sup of the estimate's ratio over the grid, restricted to its regime.
pub fn measured_sup(est: Estimate, theta: f64, grid: &DecayGrid) -> Result<(f64, f64, f64)> {
    let (lo, hi) = est.regime();
    let mut sup = 0.0f64;
    let (mut rmin, mut rmax) = (f64::INFINITY, 0.0f64);
    let mut rhos: Vec<f64> = grid.rhos().into_iter().filter(|r| *r >= lo && *r <= hi).collect();
    // a finite regime edge is sampled on every grid
    if hi.is_finite() && hi > grid.rho_min && hi < grid.rho_max {
        rhos.push(hi);
    }
    for rho in rhos {
        rmin = rmin.min(rho);
        rmax = rmax.max(rho);
        for tau in grid.taus(theta) {
            let p = make_resolvent_parameter(C64::from_polar(rho, tau), theta)?;
            let v = est.ratio(&p)?;
            sup = if v.is_nan() { f64::NAN } else { sup.max(v) };
        }
    }
    Ok((sup, rmin, rmax))
}

/// Runs every estimate on `grid` and on its twofold refinement.
pub fn verify_decay_suite(theta: f64, grid: &DecayGrid) -> Result<Vec<DecayRow>> {
    let fine = grid.refined();
    Estimate::all()
        .into_iter()
        .map(|est| {
            let (s1, rmin, rmax) = measured_sup(est, theta, grid)?;
            let (s2, _, _) = measured_sup(est, theta, &fine)?;
            let delta = (s2 - s1).abs() / s1;
            let pass = s1.is_finite() && s2.is_finite() && s1 > 0.0 && delta < REFINEMENT_TOLERANCE;
            Ok(DecayRow {
                estimate_id: est.id(),
                ell: est.ell(),
                theta,
                regime_min: rmin,
                regime_max: rmax,
                measured_sup: s2,
                refinement_delta: delta,
                pass,
            })
        })
        .collect()
}
