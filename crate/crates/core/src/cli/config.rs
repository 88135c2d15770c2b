//! Experiment configuration: strict JSON with defaults and range checks.

use crate::calculus::FractionalSpec;
use crate::error::{Error, Result};
use crate::geometry::{BoundaryCurve, DEFAULT_ALPHA};
use crate::solver::Level;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    VerifyKernels,
    VerifyJumps,
    SolveDirichlet,
    SolveResolvent,
    ResolventSweep,
    Semigroup,
    Smoothing,
    Fractional,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::VerifyKernels => "verify-kernels",
            Command::VerifyJumps => "verify-jumps",
            Command::SolveDirichlet => "solve-dirichlet",
            Command::SolveResolvent => "solve-resolvent",
            Command::ResolventSweep => "resolvent-sweep",
            Command::Semigroup => "semigroup",
            Command::Smoothing => "smoothing",
            Command::Fractional => "fractional",
        }
    }
}

fn unit_circle() -> BoundaryCurve {
    BoundaryCurve::Circle { radius: 1.0, center: [0.0, 0.0] }
}

/// Boundary mesh parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MeshConfig {
    pub panels: usize,
    pub nodes_per_panel: usize,
    /// Corner grading exponent (polygons only).
    pub grading: f64,
}

impl Default for MeshConfig {
    fn default() -> Self {
        MeshConfig { panels: 32, nodes_per_panel: 8, grading: 3.0 }
    }
}

/// `λ = modulus · e^{i argument}` over a tensor grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LambdaGrid {
    pub moduli: Vec<f64>,
    pub arguments: Vec<f64>,
}

impl Default for LambdaGrid {
    fn default() -> Self {
        let m = 0.96 * (PI - FRAC_PI_4);
        LambdaGrid { moduli: (0..7).map(|i| 10f64.powi(i - 2)).collect(), arguments: vec![-m, -0.5 * m, 0.0, 0.5 * m, m] }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct KernelSuiteConfig {
    /// Points per direction of the log-polar raising-identity grid.
    pub raising_grid: usize,
    pub raising_radii: [f64; 2],
    pub raising_tolerance: f64,
    pub overlap_radii: [f64; 2],
    pub overlap_grid: usize,
    pub overlap_tolerance: f64,
    pub cancellation_draws: usize,
    pub cancellation_tolerance: f64,
    pub pde_points: usize,
    pub pde_tolerance: f64,
    pub decay_rho: [f64; 2],
    pub decay_per_decade: usize,
    pub decay_arguments: usize,
    pub seed: u64,
}

impl Default for KernelSuiteConfig {
    fn default() -> Self {
        KernelSuiteConfig {
            raising_grid: 40,
            raising_radii: [1e-3, 50.0],
            raising_tolerance: 1e-9,
            overlap_radii: [6.0, 10.0],
            overlap_grid: 20,
            overlap_tolerance: 1e-10,
            cancellation_draws: 100,
            cancellation_tolerance: 1e-12,
            pde_points: 50,
            pde_tolerance: 1e-6,
            decay_rho: [1e-4, 1e4],
            decay_per_decade: 10,
            decay_arguments: 9,
            seed: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct JumpConfig {
    /// Mesh nodes at which limits are measured (evenly spread).
    pub sample_nodes: usize,
    /// Approach distances, decreasing.
    pub distances: Vec<f64>,
    pub tolerance: f64,
    /// Panel counts of the null-space refinement study.
    pub null_space_panels: Vec<usize>,
    pub cosine_tolerance: f64,
    /// Allowed relative change of the second singular value between levels.
    pub second_singular_drift: f64,
}

impl Default for JumpConfig {
    fn default() -> Self {
        JumpConfig {
            sample_nodes: 16,
            distances: vec![1e-3, 5e-4, 2.5e-4, 1.25e-4],
            tolerance: 1e-6,
            null_space_panels: vec![8, 16, 32],
            cosine_tolerance: 0.999,
            second_singular_drift: 0.1,
        }
    }
}

/// Dirichlet data `g` on the boundary.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum BoundaryData {
    /// Trace of a Stokeslet with pole `center` outside the domain pushing
    /// along `direction`; the solution is known exactly.
    Pole { center: [f64; 2], direction: [f64; 2] },
    /// `g = amplitude · n`; incompatible unless `amplitude = 0`.
    Normal { amplitude: f64 },
    /// Constant vector.
    Uniform { value: [f64; 2] },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DirichletConfig {
    pub data: BoundaryData,
    /// Panel counts of the refinement study; the last is the reported solve.
    pub levels: Vec<usize>,
    /// Largest relative error at the finest level (pole data only).
    pub tolerance: f64,
    /// Smallest observed order between the last two levels (pole data only).
    pub min_order: f64,
    pub compatibility_tolerance: f64,
    /// Rings (or cells) of the interior target grid.
    pub targets: usize,
}

impl Default for DirichletConfig {
    fn default() -> Self {
        DirichletConfig {
            data: BoundaryData::Pole { center: [1.5, 0.5], direction: [1.0, 0.0] },
            levels: vec![8, 16, 32],
            tolerance: 1e-6,
            min_order: 1.0,
            compatibility_tolerance: crate::solver::DEFAULT_COMPATIBILITY_TOLERANCE,
            targets: 12,
        }
    }
}

/// Gaussian vortex body force and the volume grid carrying it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ForceConfig {
    pub center: [f64; 2],
    pub width: f64,
    /// Rings of the polar grid (cells across for tensor grids).
    pub grid: usize,
    /// Rings of the polar source grid on non-circular domains.
    pub source_grid: Option<usize>,
}

impl Default for ForceConfig {
    fn default() -> Self {
        ForceConfig { center: [0.02, -0.01], width: 0.2, grid: 24, source_grid: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ResolventConfig {
    /// Random `λ` pairs for the resolvent identity.
    pub identity_pairs: usize,
    pub identity_tolerance: f64,
    /// Allowed relative change of `u` when panels and grid are doubled.
    pub refinement_tolerance: f64,
    pub seed: u64,
}

impl Default for ResolventConfig {
    fn default() -> Self {
        ResolventConfig { identity_pairs: 5, identity_tolerance: 1e-6, refinement_tolerance: 1e-3, seed: 7 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    pub exponents: Vec<f64>,
    pub coarse: Level,
    pub fine: Level,
    pub max_drift: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            exponents: vec![2.0, 3.0],
            coarse: Level { panels: 8, nodes_per_panel: 8, grid: 16, source_grid: None },
            fine: Level { panels: 16, nodes_per_panel: 8, grid: 24, source_grid: None },
            max_drift: 0.15,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SemigroupConfig {
    /// Times of the decay table (increasing).
    pub times: Vec<f64>,
    /// `(s, t)` of the semigroup-law check.
    pub law: [f64; 2],
    pub law_tolerance: f64,
    /// Small times of the strong-continuity check (decreasing).
    pub continuity_times: Vec<f64>,
    /// Largest accepted quadrature error estimate.
    pub tolerance: f64,
    /// Contour half-angle; default `π − θ − π/16`.
    pub vartheta: Option<f64>,
    pub nodes_per_decade: usize,
}

impl Default for SemigroupConfig {
    fn default() -> Self {
        SemigroupConfig {
            times: vec![0.05, 0.1, 0.2, 0.5, 1.0, 2.0],
            law: [0.1, 0.2],
            law_tolerance: 1e-4,
            continuity_times: vec![1e-3, 1e-4],
            tolerance: 1e-3,
            vartheta: None,
            nodes_per_decade: 10,
        }
    }
}

/// One smoothing measurement.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SmoothingCase {
    pub p: f64,
    pub q: f64,
    #[serde(default)]
    pub gradient: bool,
    /// Overrides the section's `margin` for this case.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub margin: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SmoothingConfig {
    pub cases: Vec<SmoothingCase>,
    /// Log-spaced times `[first, last]` and their count.
    pub time_range: [f64; 2],
    pub time_points: usize,
    pub margin: f64,
    pub min_r_squared: f64,
}

impl Default for SmoothingConfig {
    fn default() -> Self {
        SmoothingConfig {
            cases: vec![
                SmoothingCase { p: 2.0, q: 2.0, gradient: false, margin: Some(0.05) },
                SmoothingCase { p: 2.0, q: 4.0, gradient: false, margin: None },
                SmoothingCase { p: 2.0, q: 2.0, gradient: true, margin: None },
            ],
            time_range: [1e-5, 1e-3],
            time_points: 9,
            margin: 0.1,
            min_r_squared: 0.98,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FractionalConfig {
    pub quadrature: FractionalSpec,
    /// Exponents tabulated in the output.
    pub powers: Vec<f64>,
    /// `A^{−1/2} A^{−1/2} f` against `A^{−1} f`.
    pub composition_tolerance: f64,
    /// `A^{−0.999} f` against `A^{−1} f`.
    pub limit_tolerance: f64,
    /// Time of the commutation check with `e^{−tA}`; none skips it.
    pub commutation_time: Option<f64>,
    pub commutation_tolerance: f64,
}

impl Default for FractionalConfig {
    fn default() -> Self {
        FractionalConfig {
            quadrature: FractionalSpec::default(),
            powers: vec![0.25, 0.5, 0.75],
            composition_tolerance: 1e-3,
            limit_tolerance: 1e-2,
            commutation_time: None,
            commutation_tolerance: 1e-3,
        }
    }
}

fn default_theta() -> f64 {
    FRAC_PI_4
}

fn default_alpha() -> f64 {
    DEFAULT_ALPHA
}

fn default_lambda() -> [f64; 2] {
    [1.0, 0.0]
}

/// Everything a command reads. Sections irrelevant to a command are
/// accepted and ignored; all of them are echoed with defaults filled.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<Command>,
    #[serde(default = "unit_circle")]
    pub domain: BoundaryCurve,
    /// Sector parameter: `λ` ranges over `|arg λ| < π − θ`.
    #[serde(default = "default_theta")]
    pub theta: f64,
    /// Aperture of the approach cones.
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    /// `[Re λ, Im λ]`.
    #[serde(default = "default_lambda")]
    pub lambda: [f64; 2],
    #[serde(default)]
    pub lambda_grid: LambdaGrid,
    #[serde(default)]
    pub mesh: MeshConfig,
    #[serde(default)]
    pub force: ForceConfig,
    #[serde(default)]
    pub kernels: KernelSuiteConfig,
    #[serde(default)]
    pub jumps: JumpConfig,
    #[serde(default)]
    pub dirichlet: DirichletConfig,
    #[serde(default)]
    pub resolvent: ResolventConfig,
    #[serde(default)]
    pub sweep: SweepConfig,
    #[serde(default)]
    pub semigroup: SemigroupConfig,
    #[serde(default)]
    pub smoothing: SmoothingConfig,
    #[serde(default)]
    pub fractional: FractionalConfig,
    /// Output directory used when `--out` is not given.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
}

/// Rewrites serde's unknown-field message with the closest known key.
fn suggest(msg: &str) -> String {
    let Some(rest) = msg.strip_prefix("unknown field `") else { return msg.to_string() };
    let Some((field, tail)) = rest.split_once('`') else { return msg.to_string() };
    let expected: Vec<&str> = tail.split('`').skip(1).step_by(2).collect();
    let best = expected.iter().map(|e| (strsim::levenshtein(field, e), *e)).min().filter(|(d, _)| *d <= 2.max(field.len() / 3));
    match best {
        Some((_, e)) => format!("unknown key \"{field}\"; did you mean \"{e}\"? ({msg})"),
        None => format!("unknown key \"{field}\" ({msg})"),
    }
}

fn check(ok: bool, field: &str, msg: impl std::fmt::Display) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Config(format!("\"{field}\": {msg}")))
    }
}

fn positive(x: f64) -> bool {
    x > 0.0 && x.is_finite()
}

/// Parses and validates a configuration document.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let cfg: ExperimentConfig = serde_json::from_str(text).map_err(|e| {
        let line = e.line();
        let col = e.column();
        let msg = e.to_string();
        let bare = msg.split(" at line ").next().unwrap_or(&msg).to_string();
        Error::Config(format!("{} at line {line} column {col}", suggest(&bare)))
    })?;
    cfg.validate()?;
    Ok(cfg)
}

impl ExperimentConfig {
    /// Range checks naming the offending field.
    pub fn validate(&self) -> Result<()> {
        self.domain.validate().map_err(|e| Error::Config(format!("\"domain\": {e}")))?;
        check(self.theta > 0.0 && self.theta < FRAC_PI_2, "theta", format!("must lie in (0, π/2), got {}", self.theta))?;
        check(positive(self.alpha), "alpha", "must be positive")?;
        let l = crate::C64::new(self.lambda[0], self.lambda[1]);
        check(
            l.norm() > 0.0 && l.is_finite() && l.arg().abs() < PI - self.theta,
            "lambda",
            format!("must be nonzero with |arg λ| < π − θ, got {l}"),
        )?;
        check(
            self.lambda_grid.moduli.iter().all(|m| positive(*m)) && !self.lambda_grid.moduli.is_empty(),
            "lambda_grid.moduli",
            "must be a nonempty list of positive numbers",
        )?;
        check(
            self.lambda_grid.arguments.iter().all(|a| a.abs() < PI - self.theta) && !self.lambda_grid.arguments.is_empty(),
            "lambda_grid.arguments",
            "must be a nonempty list inside (−(π − θ), π − θ)",
        )?;
        let min_panels = if self.domain.is_polygon() { 4 } else { 1 };
        check(self.mesh.panels >= min_panels, "mesh.panels", format!("must be at least {min_panels}"))?;
        check(self.mesh.nodes_per_panel >= 2, "mesh.nodes_per_panel", "must be at least 2")?;
        check(self.mesh.grading >= 1.0 && self.mesh.grading.is_finite(), "mesh.grading", "must be at least 1")?;
        check(positive(self.force.width), "force.width", "must be positive")?;
        check(self.force.grid >= 4, "force.grid", "must be at least 4")?;
        let k = &self.kernels;
        check(k.raising_grid >= 2, "kernels.raising_grid", "must be at least 2")?;
        check(positive(k.raising_radii[0]) && k.raising_radii[0] < k.raising_radii[1], "kernels.raising_radii", "needs 0 < r_min < r_max")?;
        check(positive(k.overlap_radii[0]) && k.overlap_radii[0] < k.overlap_radii[1], "kernels.overlap_radii", "needs 0 < r_min < r_max")?;
        check(positive(k.decay_rho[0]) && k.decay_rho[0] < k.decay_rho[1], "kernels.decay_rho", "needs 0 < ρ_min < ρ_max")?;
        check(k.decay_per_decade >= 1 && k.decay_arguments >= 1, "kernels.decay_per_decade", "grid sizes must be positive")?;
        let j = &self.jumps;
        check(
            j.distances.len() >= 2 && j.distances.windows(2).all(|w| w[1] < w[0]) && j.distances.iter().all(|d| positive(*d)),
            "jumps.distances",
            "needs at least two positive, decreasing distances",
        )?;
        check(
            j.null_space_panels.len() >= 2 && j.null_space_panels.iter().all(|p| *p >= min_panels),
            "jumps.null_space_panels",
            "needs at least two admissible panel counts",
        )?;
        check(j.sample_nodes >= 1, "jumps.sample_nodes", "must be at least 1")?;
        let d = &self.dirichlet;
        check(!d.levels.is_empty() && d.levels.iter().all(|p| *p >= min_panels), "dirichlet.levels", "needs admissible panel counts")?;
        check(d.targets >= 2, "dirichlet.targets", "must be at least 2")?;
        if let BoundaryData::Pole { center, .. } = d.data {
            check(
                !self.domain.contains(center) && self.domain.distance(center) > 0.0,
                "dirichlet.data.center",
                "pole must lie outside the closed domain",
            )?;
        }
        check(self.sweep.exponents.iter().all(|q| *q >= 1.0), "sweep.exponents", "must be at least 1")?;
        let s = &self.semigroup;
        check(!s.times.is_empty() && s.times.iter().all(|t| positive(*t)), "semigroup.times", "must be positive")?;
        check(positive(s.law[0]) && positive(s.law[1]), "semigroup.law", "times must be positive")?;
        check(s.continuity_times.iter().all(|t| positive(*t)), "semigroup.continuity_times", "must be positive")?;
        check(s.nodes_per_decade >= 2, "semigroup.nodes_per_decade", "must be at least 2")?;
        if let Some(v) = s.vartheta {
            check(v > FRAC_PI_2 && v < PI - self.theta, "semigroup.vartheta", "must lie in (π/2, π − θ)")?;
        }
        let m = &self.smoothing;
        check(positive(m.time_range[0]) && m.time_range[0] < m.time_range[1], "smoothing.time_range", "needs 0 < t_first < t_last")?;
        check(m.time_points >= 4, "smoothing.time_points", "must be at least 4")?;
        for c in &m.cases {
            crate::calculus::SmoothingSpec::new(c.p, c.q, c.gradient)
                .validate()
                .map_err(|e| Error::Config(format!("\"smoothing.cases\": {e}")))?;
        }
        let f = &self.fractional;
        check(f.powers.iter().all(|p| *p > 0.0 && *p < 1.0), "fractional.powers", "must lie in (0, 1)")?;
        check(
            f.quadrature.nodes >= 5 && positive(f.quadrature.t_floor) && f.quadrature.t_floor < f.quadrature.t_ceiling,
            "fractional.quadrature",
            "needs at least 5 nodes and 0 < t_floor < t_ceiling",
        )?;
        if let Some(t) = f.commutation_time {
            check(positive(t), "fractional.commutation_time", "must be positive")?;
        }
        Ok(())
    }

    pub fn lambda(&self) -> crate::C64 {
        crate::C64::new(self.lambda[0], self.lambda[1])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_gets_defaults() {
        let c = parse_config(r#"{"domain": {"kind": "circle", "radius": 1.0}}"#).unwrap();
        assert_eq!(c.alpha, 2.0);
        assert_eq!(c.mesh, MeshConfig { panels: 32, nodes_per_panel: 8, grading: 3.0 });
        assert_eq!(c.theta, FRAC_PI_4);
    }

    #[test]
    fn out_of_range_theta_is_named() {
        let e = parse_config(r#"{"theta": 2.0}"#).unwrap_err().to_string();
        assert!(e.contains("\"theta\""), "{e}");
    }

    #[test]
    fn unknown_key_gets_suggestion() {
        let e = parse_config(r#"{"lamda": [1.0, 0.0]}"#).unwrap_err().to_string();
        assert!(e.contains("did you mean \"lambda\""), "{e}");
        let e = parse_config(r#"{"mesh": {"panel": 8}}"#).unwrap_err().to_string();
        assert!(e.contains("did you mean \"panels\""), "{e}");
    }

    #[test]
    fn syntax_error_reports_position() {
        let e = parse_config("{\n  \"theta\": ,\n}").unwrap_err().to_string();
        assert!(e.contains("line 2"), "{e}");
    }

    #[test]
    fn lambda_outside_sector_is_rejected() {
        let e = parse_config(r#"{"lambda": [-1.0, 0.0]}"#).unwrap_err().to_string();
        assert!(e.contains("\"lambda\""), "{e}");
    }

    #[test]
    fn pole_inside_domain_is_rejected() {
        let e = parse_config(r#"{"dirichlet": {"data": {"kind": "pole", "center": [0.1, 0.0], "direction": [1.0, 0.0]}}}"#)
            .unwrap_err()
            .to_string();
        assert!(e.contains("dirichlet.data.center"), "{e}");
    }

    #[test]
    fn resolved_config_round_trips() {
        let c = parse_config(r#"{"mesh": {"panels": 16}}"#).unwrap();
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(parse_config(&s).unwrap(), c);
    }
}
