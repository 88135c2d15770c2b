//! Closed boundary curves, panel meshes with corner grading, and
//! non-tangential approach samples.

use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Boundary data or density: one complex 2-vector per mesh node.
pub type Density = Vec<[C64; 2]>;

/// Default aperture of the approach cones.
pub const DEFAULT_ALPHA: f64 = 2.0;

/// Analytically described closed curve, traversed counterclockwise.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum BoundaryCurve {
    Circle {
        radius: f64,
        #[serde(default)]
        center: [f64; 2],
    },
    Ellipse {
        a: f64,
        b: f64,
        #[serde(default)]
        center: [f64; 2],
    },
    /// Vertices in counterclockwise order, interior on the left.
    Polygon { vertices: Vec<[f64; 2]> },
    /// `r(t) = r0 + Σ_j (cos_j cos(jt) + sin_j sin(jt))`, `j = 1, 2, ...`.
    Star {
        r0: f64,
        #[serde(default)]
        cos: Vec<f64>,
        #[serde(default)]
        sin: Vec<f64>,
    },
}

fn cross(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

fn sub(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [a[0] - b[0], a[1] - b[1]]
}

fn norm(a: [f64; 2]) -> f64 {
    a[0].hypot(a[1])
}

fn segments_intersect(p1: [f64; 2], p2: [f64; 2], q1: [f64; 2], q2: [f64; 2]) -> bool {
    let d1 = cross(sub(p2, p1), sub(q1, p1));
    let d2 = cross(sub(p2, p1), sub(q2, p1));
    let d3 = cross(sub(q2, q1), sub(p1, q1));
    let d4 = cross(sub(q2, q1), sub(p2, q1));
    d1 * d2 < 0.0 && d3 * d4 < 0.0
}

fn point_segment_distance(x: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let ab = sub(b, a);
    let t = ((x[0] - a[0]) * ab[0] + (x[1] - a[1]) * ab[1]) / (ab[0] * ab[0] + ab[1] * ab[1]);
    let t = t.clamp(0.0, 1.0);
    norm(sub(x, [a[0] + t * ab[0], a[1] + t * ab[1]]))
}

impl BoundaryCurve {
    /// Checks closedness conditions: positive sizes, simple ccw polygons with
    /// non-degenerate edges, star radius bounded away from zero.
    pub fn validate(&self) -> Result<()> {
        match self {
            BoundaryCurve::Circle { radius, .. } if !(*radius > 0.0) => {
                Err(Error::Geometry(format!("circle radius {radius} must be positive")))
            }
            BoundaryCurve::Ellipse { a, b, .. } if !(*a > 0.0 && *b > 0.0) => {
                Err(Error::Geometry(format!("ellipse semi-axes ({a}, {b}) must be positive")))
            }
            BoundaryCurve::Polygon { vertices } => {
                let n = vertices.len();
                if n < 3 {
                    return Err(Error::Geometry("polygon needs at least 3 vertices".into()));
                }
                for i in 0..n {
                    if norm(sub(vertices[(i + 1) % n], vertices[i])) < 1e-14 {
                        return Err(Error::Geometry(format!("degenerate (zero-length) edge at vertex {i}")));
                    }
                }
                for i in 0..n {
                    for j in (i + 1)..n {
                        if j == i + 1 || (i == 0 && j == n - 1) {
                            continue;
                        }
                        if segments_intersect(vertices[i], vertices[(i + 1) % n], vertices[j], vertices[(j + 1) % n]) {
                            return Err(Error::Geometry(format!("polygon edges {i} and {j} intersect")));
                        }
                    }
                }
                if self.area() <= 0.0 {
                    return Err(Error::Geometry("polygon vertices must be listed counterclockwise".into()));
                }
                Ok(())
            }
            BoundaryCurve::Star { r0, cos, sin } => {
                let amp: f64 = cos.iter().chain(sin.iter()).map(|v| v.abs()).sum();
                if !(*r0 > amp) {
                    return Err(Error::Geometry("star radius must stay positive (r0 > Σ|coefficients|)".into()));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub fn is_polygon(&self) -> bool {
        matches!(self, BoundaryCurve::Polygon { .. })
    }

    /// Point and derivative of the `2π`-periodic parametrization (smooth curves).
    pub fn param(&self, t: f64) -> ([f64; 2], [f64; 2]) {
        let (c, s) = (t.cos(), t.sin());
        match self {
            BoundaryCurve::Circle { radius, center } => ([center[0] + radius * c, center[1] + radius * s], [-radius * s, radius * c]),
            BoundaryCurve::Ellipse { a, b, center } => ([center[0] + a * c, center[1] + b * s], [-a * s, b * c]),
            BoundaryCurve::Star { r0, cos, sin } => {
                let mut r = *r0;
                let mut dr = 0.0;
                for (j, (&ac, &bs)) in cos
                    .iter()
                    .chain(std::iter::repeat(&0.0))
                    .zip(sin.iter().chain(std::iter::repeat(&0.0)))
                    .take(cos.len().max(sin.len()))
                    .enumerate()
                {
                    let jf = (j + 1) as f64;
                    r += ac * (jf * t).cos() + bs * (jf * t).sin();
                    dr += jf * (-ac * (jf * t).sin() + bs * (jf * t).cos());
                }
                ([r * c, r * s], [dr * c - r * s, dr * s + r * c])
            }
            BoundaryCurve::Polygon { .. } => panic!("polygons have no smooth parametrization"),
        }
    }

    /// Enclosed area (shoelace for polygons, closed forms or quadrature otherwise).
    pub fn area(&self) -> f64 {
        match self {
            BoundaryCurve::Circle { radius, .. } => PI * radius * radius,
            BoundaryCurve::Ellipse { a, b, .. } => PI * a * b,
            BoundaryCurve::Polygon { vertices } => {
                let n = vertices.len();
                0.5 * (0..n).map(|i| cross(vertices[i], vertices[(i + 1) % n])).sum::<f64>()
            }
            BoundaryCurve::Star { .. } => {
                let g = gauss_legendre(32);
                let mut s = 0.0;
                for p in 0..16 {
                    for (u, w) in g.nodes.iter().zip(&g.weights) {
                        let t = 2.0 * PI * (p as f64 + 0.5 * (u + 1.0)) / 16.0;
                        let (y, dy) = self.param(t);
                        s += 0.5 * cross(y, dy) * w * PI / 16.0;
                    }
                }
                s
            }
        }
    }

    /// Axis-aligned box `[min, max]` containing the curve.
    pub fn bounding_box(&self) -> ([f64; 2], [f64; 2]) {
        match self {
            BoundaryCurve::Circle { radius, center } => {
                ([center[0] - radius, center[1] - radius], [center[0] + radius, center[1] + radius])
            }
            BoundaryCurve::Ellipse { a, b, center } => ([center[0] - a, center[1] - b], [center[0] + a, center[1] + b]),
            BoundaryCurve::Polygon { vertices } => {
                let mut lo = [f64::INFINITY; 2];
                let mut hi = [f64::NEG_INFINITY; 2];
                for v in vertices {
                    for d in 0..2 {
                        lo[d] = lo[d].min(v[d]);
                        hi[d] = hi[d].max(v[d]);
                    }
                }
                (lo, hi)
            }
            BoundaryCurve::Star { r0, cos, sin } => {
                let r = r0 + cos.iter().chain(sin).map(|c| c.abs()).sum::<f64>();
                ([-r, -r], [r, r])
            }
        }
    }

    /// Whether `x` lies strictly inside the curve.
    pub fn contains(&self, x: [f64; 2]) -> bool {
        match self {
            BoundaryCurve::Circle { radius, center } => norm(sub(x, *center)) < *radius,
            BoundaryCurve::Ellipse { a, b, center } => {
                let (u, v) = ((x[0] - center[0]) / a, (x[1] - center[1]) / b);
                u * u + v * v < 1.0
            }
            BoundaryCurve::Star { .. } => {
                let t = x[1].atan2(x[0]);
                let (y, _) = self.param(t);
                norm(x) < norm(y)
            }
            BoundaryCurve::Polygon { vertices } => {
                // winding number
                let n = vertices.len();
                let mut wn = 0i32;
                for i in 0..n {
                    let (a, b) = (vertices[i], vertices[(i + 1) % n]);
                    let side = cross(sub(b, a), sub(x, a));
                    if a[1] <= x[1] {
                        if b[1] > x[1] && side > 0.0 {
                            wn += 1;
                        }
                    } else if b[1] <= x[1] && side < 0.0 {
                        wn -= 1;
                    }
                }
                wn != 0
            }
        }
    }

    /// Euclidean distance from `x` to the curve.
    pub fn distance(&self, x: [f64; 2]) -> f64 {
        match self {
            BoundaryCurve::Circle { radius, center } => (norm(sub(x, *center)) - radius).abs(),
            BoundaryCurve::Polygon { vertices } => {
                let n = vertices.len();
                (0..n).map(|i| point_segment_distance(x, vertices[i], vertices[(i + 1) % n])).fold(f64::INFINITY, f64::min)
            }
            _ => {
                // dense sampling, then Newton on the squared distance
                let m = 2048;
                let mut best = (f64::INFINITY, 0.0);
                for i in 0..m {
                    let t = 2.0 * PI * i as f64 / m as f64;
                    let d = norm(sub(self.param(t).0, x));
                    if d < best.0 {
                        best = (d, t);
                    }
                }
                let mut t = best.1;
                let h = 1e-5;
                for _ in 0..20 {
                    let f = |s: f64| {
                        let (y, dy) = self.param(s);
                        (y[0] - x[0]) * dy[0] + (y[1] - x[1]) * dy[1]
                    };
                    let (f0, df) = (f(t), (f(t + h) - f(t - h)) / (2.0 * h));
                    if df <= 0.0 {
                        break;
                    }
                    let step = f0 / df;
                    t -= step;
                    if step.abs() < 1e-14 {
                        break;
                    }
                }
                norm(sub(self.param(t).0, x)).min(best.0)
            }
        }
    }

    /// Estimated Lipschitz constant of local graph representations: zero for
    /// smooth curves, `max tan(|π − interior angle| / 2)` over polygon corners.
    pub fn lipschitz_constant(&self) -> f64 {
        match self {
            BoundaryCurve::Polygon { vertices } => {
                let n = vertices.len();
                (0..n)
                    .map(|i| {
                        let e1 = sub(vertices[i], vertices[(i + n - 1) % n]);
                        let e2 = sub(vertices[(i + 1) % n], vertices[i]);
                        let turn = cross(e1, e2).atan2(e1[0] * e2[0] + e1[1] * e2[1]);
                        (0.5 * turn.abs()).tan()
                    })
                    .fold(0.0, f64::max)
            }
            _ => 0.0,
        }
    }

    /// Unit vector bisecting the interior angle at polygon vertex `i`, pointing inward.
    pub fn corner_bisector(&self, i: usize) -> Result<[f64; 2]> {
        let BoundaryCurve::Polygon { vertices } = self else {
            return Err(Error::Geometry("corner bisector requires a polygon".into()));
        };
        let n = vertices.len();
        let v = vertices[i % n];
        let a = sub(vertices[(i + n - 1) % n], v);
        let b = sub(vertices[(i + 1) % n], v);
        let (na, nb) = (norm(a), norm(b));
        let mut d = [a[0] / na + b[0] / nb, a[1] / na + b[1] / nb];
        let nd = norm(d);
        if nd < 1e-12 {
            d = [-a[1] / na, a[0] / na];
        } else {
            d = [d[0] / nd, d[1] / nd];
        }
        if !self.contains([v[0] + 1e-9 * d[0], v[1] + 1e-9 * d[1]]) {
            d = [-d[0], -d[1]];
        }
        Ok(d)
    }
}

/// Geometry of one panel, mapped from `u ∈ [−1, 1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PanelKind {
    Param { t0: f64, t1: f64 },
    Segment { a: [f64; 2], b: [f64; 2] },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Panel {
    pub kind: PanelKind,
    pub start: usize,
    pub length: f64,
    pub corner_adjacent: bool,
}

/// Panelized Gauss–Legendre discretization of a boundary curve.
#[derive(Clone, Debug)]
pub struct BoundaryMesh {
    pub curve: BoundaryCurve,
    pub nodes: Vec<[f64; 2]>,
    /// Arc-length quadrature weights.
    pub weights: Vec<f64>,
    pub normals: Vec<[f64; 2]>,
    /// `|dy/du|` at each node in its panel's local coordinate.
    pub tangent_speed: Vec<f64>,
    pub panel_index: Vec<usize>,
    /// Local Gauss coordinate of each node inside its panel.
    pub local_u: Vec<f64>,
    pub corner_nodes: Vec<usize>,
    pub grading_exponent: f64,
    pub nodes_per_panel: usize,
    pub panels: Vec<Panel>,
}

/// Corner refinement depth for `n` base panels per edge and exponent `q`:
/// `⌈4 log2(4n) / q⌉`, so the smallest panel shrinks with the base mesh.
pub fn corner_levels(n_per_edge: usize, q: f64) -> usize {
    ((4.0 * (4.0 * n_per_edge as f64).log2()) / q).ceil().max(1.0) as usize
}

impl BoundaryMesh {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn perimeter(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Point and `dy/du` on panel `p` at local coordinate `u`.
    pub fn eval(&self, p: usize, u: f64) -> ([f64; 2], [f64; 2]) {
        match self.panels[p].kind {
            PanelKind::Segment { a, b } => {
                let s = 0.5 * (u + 1.0);
                ([a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])], [0.5 * (b[0] - a[0]), 0.5 * (b[1] - a[1])])
            }
            PanelKind::Param { t0, t1 } => {
                let h = 0.5 * (t1 - t0);
                let (y, dy) = self.curve.param(t0 + h * (u + 1.0));
                (y, [dy[0] * h, dy[1] * h])
            }
        }
    }

    /// Outward unit normal from a panel derivative `dy/du` (ccw orientation).
    pub fn normal_from(dy: [f64; 2]) -> [f64; 2] {
        let s = norm(dy);
        [dy[1] / s, -dy[0] / s]
    }

    pub fn node_range(&self, p: usize) -> std::ops::Range<usize> {
        let s = self.panels[p].start;
        s..s + self.nodes_per_panel
    }
}

/// Builds a composite Gauss–Legendre mesh.
///
/// Smooth curves get `panels` uniform panels in the parameter. Polygons get
/// `max(panels / edges, 2)` uniform panels per edge, and each panel touching a
/// vertex is split geometrically toward it with breakpoints at
/// `h·2^{−q l}`, `l = 1..L`, `L = `[`corner_levels`], so adjacent panel lengths
/// shrink by `2^{−q}` per level.
pub fn build_mesh(curve: &BoundaryCurve, panels: usize, nodes_per_panel: usize, grading_exponent: f64) -> Result<BoundaryMesh> {
    curve.validate()?;
    if panels < 4 {
        return Err(Error::arg(format!("panels = {panels} must be ≥ 4")));
    }
    if nodes_per_panel < 2 {
        return Err(Error::arg(format!("nodes_per_panel = {nodes_per_panel} must be ≥ 2")));
    }
    if !(grading_exponent >= 1.0) {
        return Err(Error::arg(format!("grading exponent {grading_exponent} must be ≥ 1")));
    }
    let mut kinds: Vec<(PanelKind, bool)> = Vec::new();
    match curve {
        BoundaryCurve::Polygon { vertices } => {
            let n = vertices.len();
            let per_edge = (panels / n).max(2);
            let levels = corner_levels(per_edge, grading_exponent);
            let ratio = 2f64.powf(-grading_exponent);
            for i in 0..n {
                let (a, b) = (vertices[i], vertices[(i + 1) % n]);
                let at = |s: f64| [a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])];
                let h = 1.0 / per_edge as f64;
                // breakpoints in edge fraction, graded toward both endpoints
                let mut br: Vec<f64> = vec![0.0];
                for l in (1..=levels).rev() {
                    br.push(h * ratio.powi(l as i32));
                }
                for j in 1..per_edge {
                    br.push(j as f64 * h);
                }
                for l in 1..=levels {
                    br.push(1.0 - h * ratio.powi(l as i32));
                }
                br.push(1.0);
                for w in br.windows(2) {
                    let corner = w[0] < h * 0.999 || w[1] > 1.0 - h * 0.999;
                    kinds.push((PanelKind::Segment { a: at(w[0]), b: at(w[1]) }, corner));
                }
            }
        }
        _ => {
            for j in 0..panels {
                let t0 = 2.0 * PI * j as f64 / panels as f64;
                let t1 = 2.0 * PI * (j + 1) as f64 / panels as f64;
                kinds.push((PanelKind::Param { t0, t1 }, false));
            }
        }
    }
    let g = gauss_legendre(nodes_per_panel);
    let mut mesh = BoundaryMesh {
        curve: curve.clone(),
        nodes: vec![],
        weights: vec![],
        normals: vec![],
        tangent_speed: vec![],
        panel_index: vec![],
        local_u: vec![],
        corner_nodes: vec![],
        grading_exponent,
        nodes_per_panel,
        panels: kinds
            .iter()
            .enumerate()
            .map(|(i, (k, c))| Panel { kind: *k, start: i * nodes_per_panel, length: 0.0, corner_adjacent: *c })
            .collect(),
    };
    for p in 0..mesh.panels.len() {
        let mut len = 0.0;
        for (u, w) in g.nodes.iter().zip(&g.weights) {
            let (y, dy) = mesh.eval(p, *u);
            let s = norm(dy);
            if mesh.panels[p].corner_adjacent {
                mesh.corner_nodes.push(mesh.nodes.len());
            }
            mesh.nodes.push(y);
            mesh.weights.push(w * s);
            mesh.normals.push(BoundaryMesh::normal_from(dy));
            mesh.tangent_speed.push(s);
            mesh.panel_index.push(p);
            mesh.local_u.push(*u);
            len += w * s;
        }
        mesh.panels[p].length = len;
    }
    Ok(mesh)
}

/// Discrete `|∫ g·n dσ|`.
pub fn compatibility_defect(g: &Density, mesh: &BoundaryMesh) -> Result<f64> {
    if g.len() != mesh.len() {
        return Err(Error::arg(format!("density has {} entries, mesh has {} nodes", g.len(), mesh.len())));
    }
    let s: C64 = (0..mesh.len()).map(|i| (g[i][0] * mesh.normals[i][0] + g[i][1] * mesh.normals[i][1]) * mesh.weights[i]).sum();
    Ok(s.norm())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Interior,
    Exterior,
}

/// Points along the inward (interior) or outward (exterior) normal from
/// mesh node `q_index`, each checked to lie in the approach cone
/// `|x − q| < α dist(x, ∂Ω)` and on the requested side.
pub fn approach_samples(mesh: &BoundaryMesh, q_index: usize, alpha: f64, distances: &[f64], side: Side) -> Result<Vec<[f64; 2]>> {
    let q = *mesh.nodes.get(q_index).ok_or_else(|| Error::arg(format!("node {q_index} out of range")))?;
    let n = mesh.normals[q_index];
    let sgn = if side == Side::Interior { -1.0 } else { 1.0 };
    approach_samples_along(&mesh.curve, q, [sgn * n[0], sgn * n[1]], alpha, distances, side)
}

/// Same as [`approach_samples`] from an arbitrary boundary point along a given
/// unit direction (e.g. a corner bisector).
pub fn approach_samples_along(
    curve: &BoundaryCurve,
    q: [f64; 2],
    dir: [f64; 2],
    alpha: f64,
    distances: &[f64],
    side: Side,
) -> Result<Vec<[f64; 2]>> {
    if !(alpha > 1.0) {
        return Err(Error::arg(format!("alpha = {alpha} must exceed 1")));
    }
    if distances.windows(2).any(|w| !(w[1] < w[0])) || distances.iter().any(|d| !(*d > 0.0)) {
        return Err(Error::arg("distances must be positive and strictly decreasing"));
    }
    distances
        .iter()
        .map(|&d| {
            let x = [q[0] + d * dir[0], q[1] + d * dir[1]];
            let inside = curve.contains(x);
            if inside != (side == Side::Interior) {
                return Err(Error::Geometry(format!("sample at distance {d} left the {side:?} component")));
            }
            if !(norm(sub(x, q)) < alpha * curve.distance(x)) {
                return Err(Error::Geometry(format!("sample at distance {d} exits the approach region (α = {alpha})")));
            }
            Ok(x)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_square() -> BoundaryCurve {
        BoundaryCurve::Polygon { vertices: vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]] }
    }

    #[test]
    fn perimeters() {
        let c = BoundaryCurve::Circle { radius: 1.0, center: [0.0, 0.0] };
        assert!((build_mesh(&c, 16, 8, 1.0).unwrap().perimeter() - 2.0 * PI).abs() < 1e-12);
        assert!((build_mesh(&unit_square(), 16, 8, 3.0).unwrap().perimeter() - 4.0).abs() < 1e-10);
        // 50-digit reference: 8 E(3/4)
        let e = BoundaryCurve::Ellipse { a: 2.0, b: 1.0, center: [0.0, 0.0] };
        assert!((build_mesh(&e, 64, 16, 1.0).unwrap().perimeter() - 9.688448220547676).abs() < 1e-10);
        let s = BoundaryCurve::Star { r0: 1.0, cos: vec![0.0, 0.0, 0.0, 0.0, 0.3], sin: vec![] };
        assert!((build_mesh(&s, 64, 16, 1.0).unwrap().perimeter() - 9.017203500515143).abs() < 1e-10);
        assert!((s.area() - 3.282964323001334).abs() < 1e-12);
    }

    #[test]
    fn corner_grading_ratio() {
        let m = build_mesh(&unit_square(), 16, 8, 3.0).unwrap();
        // first panels of edge 0 run from the corner outward
        let l: Vec<f64> = m.panels.iter().take(4).map(|p| p.length).collect();
        for w in l.windows(2).skip(1) {
            assert!((w[0] / w[1] - 0.125).abs() < 1e-12);
        }
        assert!(!m.corner_nodes.is_empty());
    }

    #[test]
    fn normals_point_outward() {
        for c in [
            BoundaryCurve::Circle { radius: 1.0, center: [0.0, 0.0] },
            BoundaryCurve::Ellipse { a: 2.0, b: 1.0, center: [0.3, 0.0] },
            unit_square(),
        ] {
            let m = build_mesh(&c, 16, 6, 3.0).unwrap();
            let eps = 1e-6 * 2.0;
            for i in 0..m.len() {
                let (x, n) = (m.nodes[i], m.normals[i]);
                assert!((norm(n) - 1.0).abs() < 1e-14);
                assert!(!c.contains([x[0] + eps * n[0], x[1] + eps * n[1]]));
                assert!(c.contains([x[0] - eps * n[0], x[1] - eps * n[1]]));
            }
        }
    }

    #[test]
    fn compatibility_examples() {
        let c = BoundaryCurve::Circle { radius: 1.0, center: [0.0, 0.0] };
        let m = build_mesh(&c, 16, 8, 1.0).unwrap();
        let g: Density = m.normals.iter().map(|n| [C64::new(n[0], 0.0), C64::new(n[1], 0.0)]).collect();
        assert!((compatibility_defect(&g, &m).unwrap() - 2.0 * PI).abs() < 1e-12);
        let t: Density = m.normals.iter().map(|n| [C64::new(-n[1], 0.0), C64::new(n[0], 0.0)]).collect();
        assert!(compatibility_defect(&t, &m).unwrap() < 1e-12);
    }

    #[test]
    fn approach_examples() {
        let c = BoundaryCurve::Circle { radius: 1.0, center: [0.0, 0.0] };
        let m = build_mesh(&c, 16, 8, 1.0).unwrap();
        let i = m.nodes.iter().position(|x| x[1].abs() < 0.2 && x[0] > 0.0).unwrap();
        let pts = approach_samples(&m, i, 2.0, &[0.1], Side::Interior).unwrap();
        assert!((norm(pts[0]) - 0.9).abs() < 1e-14);
        let pts = approach_samples(&m, i, 2.0, &[0.05], Side::Exterior).unwrap();
        assert!((norm(pts[0]) - 1.05).abs() < 1e-14);
        let sq = unit_square();
        let d = sq.corner_bisector(0).unwrap();
        assert!((d[0] - d[1]).abs() < 1e-15 && d[0] > 0.0);
        assert!(approach_samples_along(&sq, [0.0, 0.0], d, 2.0, &[0.1, 0.01], Side::Interior).is_ok());
    }

    #[test]
    fn rejects_bad_polygons() {
        let bow = BoundaryCurve::Polygon { vertices: vec![[0.0, 0.0], [1.0, 1.0], [1.0, 0.0], [0.0, 1.0]] };
        assert!(build_mesh(&bow, 16, 8, 3.0).is_err());
        let degenerate = BoundaryCurve::Polygon { vertices: vec![[0.0, 0.0], [0.0, 0.0], [1.0, 0.0], [0.0, 1.0]] };
        assert!(build_mesh(&degenerate, 16, 8, 3.0).is_err());
        let cw = BoundaryCurve::Polygon { vertices: vec![[0.0, 0.0], [0.0, 1.0], [1.0, 1.0], [1.0, 0.0]] };
        assert!(build_mesh(&cw, 16, 8, 3.0).is_err());
    }
}
