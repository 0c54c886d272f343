use super::{BoundaryPiece, LipProfile, Vec2};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Relative tolerance on the `θ < π` corner test; turns below it count as smooth.
pub const CORNER_ANGLE_TOL: f64 = 1e-9;

/// Relative (to the diameter) tolerance on head-to-tail chaining of pieces.
pub const CHAIN_TOL: f64 = 1e-12;

/// A convex boundary corner located at the start point of `piece`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Corner {
    pub piece: usize,
    /// Interior angle in radians, in `(0, π)`.
    pub angle: f64,
}

/// The constructor a domain came from; used for serialization and mesh strategy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Shape {
    Disk {
        radius: f64,
    },
    Ellipse {
        a: f64,
        b: f64,
        rotation: f64,
    },
    Rectangle {
        width: f64,
        height: f64,
    },
    Polygon {
        vertices: Vec<Vec2>,
    },
    /// Anything without a closed-form description (e.g. translated curved domains).
    Custom,
}

/// Domain constructors.
#[derive(Debug, Clone)]
pub enum CanonicalKind {
    Disk(f64),
    Rectangle(f64, f64),
    Ellipse(f64, f64),
    Polygon(Vec<Vec2>),
    LipPolygon(LipProfile),
}

/// A bounded simply connected planar domain given by a counterclockwise
/// loop of smooth boundary pieces with convex corners only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    pieces: Vec<BoundaryPiece>,
    corners: Vec<Corner>,
    shape: Shape,
    pub label: String,
}

impl Domain {
    /// Validates the loop and computes its corner list.
    pub fn from_pieces(pieces: Vec<BoundaryPiece>, shape: Shape, label: impl Into<String>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::Domain("no boundary pieces".into()));
        }
        let diam = sampled_diameter(&pieces);
        if !(diam > 0.0) || !diam.is_finite() {
            return Err(Error::Domain("degenerate boundary".into()));
        }
        for (i, p) in pieces.iter().enumerate() {
            for k in 0..=16 {
                if p.deriv1(k as f64 / 16.0).norm() < super::piece::SINGULAR_SPEED {
                    return Err(Error::Domain(format!("piece {i}: singular parameterization")));
                }
            }
        }
        let n = pieces.len();
        let mut corners = Vec::new();
        let mut total_turn = 0.0;
        for i in 0..n {
            let prev = &pieces[(i + n - 1) % n];
            let cur = &pieces[i];
            let gap = prev.point(1.0).dist(cur.point(0.0));
            if gap > CHAIN_TOL * diam {
                return Err(Error::Domain(format!("pieces {} and {} do not chain (gap {gap:e})", (i + n - 1) % n, i)));
            }
            let t_in = prev.deriv1(1.0).normalized();
            let t_out = cur.deriv1(0.0).normalized();
            let turn = t_in.cross(t_out).atan2(t_in.dot(t_out));
            total_turn += turn + smooth_turning(cur);
            if turn.abs() <= CORNER_ANGLE_TOL {
                continue;
            }
            if turn < 0.0 {
                return Err(Error::Domain(format!(
                    "non-convex corner at start of piece {i} (interior angle {:.6} rad)",
                    PI - turn
                )));
            }
            corners.push(Corner { piece: i, angle: PI - turn });
        }
        let area = loop_area(&pieces);
        if area <= 0.0 {
            return Err(Error::Domain("boundary loop is not counterclockwise".into()));
        }
        if (total_turn - 2.0 * PI).abs() > 1e-6 {
            return Err(Error::Domain(format!("self-intersecting boundary (total turning {:.6} rad)", total_turn)));
        }
        Ok(Domain { pieces, corners, shape, label: label.into() })
    }

    pub fn canonical(kind: CanonicalKind) -> Result<Self> {
        match kind {
            CanonicalKind::Disk(r) => {
                positive("radius", r)?;
                let piece = BoundaryPiece::EllipseArc {
                    center: Vec2::ZERO,
                    semi_a: r,
                    semi_b: r,
                    rotation: 0.0,
                    theta0: 0.0,
                    theta1: 2.0 * PI,
                };
                Domain::from_pieces(vec![piece], Shape::Disk { radius: r }, format!("disk:{r}"))
            }
            CanonicalKind::Ellipse(a, b) => {
                positive("semi-axis a", a)?;
                positive("semi-axis b", b)?;
                let piece = BoundaryPiece::EllipseArc {
                    center: Vec2::ZERO,
                    semi_a: a,
                    semi_b: b,
                    rotation: 0.0,
                    theta0: 0.0,
                    theta1: 2.0 * PI,
                };
                Domain::from_pieces(vec![piece], Shape::Ellipse { a, b, rotation: 0.0 }, format!("ellipse:{a},{b}"))
            }
            CanonicalKind::Rectangle(w, h) => {
                positive("width", w)?;
                positive("height", h)?;
                let v = [Vec2::new(0.0, 0.0), Vec2::new(w, 0.0), Vec2::new(w, h), Vec2::new(0.0, h)];
                let pieces = (0..4).map(|i| BoundaryPiece::segment(v[i], v[(i + 1) % 4])).collect();
                Domain::from_pieces(pieces, Shape::Rectangle { width: w, height: h }, format!("rectangle:{w},{h}"))
            }
            CanonicalKind::Polygon(vertices) => Domain::polygon(vertices, "polygon"),
            CanonicalKind::LipPolygon(profile) => {
                profile.validate()?;
                Domain::polygon(profile.polygon_vertices(), "lip_polygon")
            }
        }
    }

    pub fn polygon(vertices: Vec<Vec2>, label: impl Into<String>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::Domain("polygon needs at least 3 vertices".into()));
        }
        if vertices.iter().any(|v| !v.x.is_finite() || !v.y.is_finite()) {
            return Err(Error::Domain("non-finite polygon vertex".into()));
        }
        let n = vertices.len();
        for i in 0..n {
            if vertices[i] == vertices[(i + 1) % n] {
                return Err(Error::Domain(format!("repeated polygon vertex {i}")));
            }
        }
        let pieces = (0..n).map(|i| BoundaryPiece::segment(vertices[i], vertices[(i + 1) % n])).collect();
        Domain::from_pieces(pieces, Shape::Polygon { vertices }, label)
    }

    pub fn pieces(&self) -> &[BoundaryPiece] {
        &self.pieces
    }

    pub fn corners(&self) -> &[Corner] {
        &self.corners
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn piece(&self, i: usize) -> Result<&BoundaryPiece> {
        self.pieces.get(i).ok_or_else(|| Error::InvalidInput(format!("piece index {i} out of range")))
    }

    pub fn has_corner_at_start(&self, piece: usize) -> bool {
        self.corners.iter().any(|c| c.piece == piece)
    }

    /// Whether `(piece, t)` is one of the domain's corners.
    pub fn is_corner_point(&self, piece: usize, t: f64) -> bool {
        const T_EPS: f64 = 1e-12;
        let n = self.pieces.len();
        (t <= T_EPS && self.has_corner_at_start(piece))
            || (t >= 1.0 - T_EPS && self.has_corner_at_start((piece + 1) % n))
    }

    fn check_param(&self, piece: usize, t: f64) -> Result<&BoundaryPiece> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::InvalidInput(format!("parameter {t} outside [0, 1]")));
        }
        self.piece(piece)
    }

    pub fn outward_normal(&self, piece: usize, t: f64) -> Result<Vec2> {
        let p = self.check_param(piece, t)?;
        if self.is_corner_point(piece, t) {
            return Err(Error::CornerPoint);
        }
        p.normal(t)
    }

    pub fn signed_curvature(&self, piece: usize, t: f64) -> Result<f64> {
        let p = self.check_param(piece, t)?;
        if self.is_corner_point(piece, t) {
            return Err(Error::CornerPoint);
        }
        p.curvature(t)
    }

    pub fn point(&self, piece: usize, t: f64) -> Result<Vec2> {
        Ok(self.check_param(piece, t)?.point(t))
    }

    /// Corner locations in loop order.
    pub fn corner_points(&self) -> Vec<Vec2> {
        self.corners.iter().map(|c| self.pieces[c.piece].point(0.0)).collect()
    }

    /// Rigid rotation about the origin.
    pub fn rotated(&self, angle: f64) -> Domain {
        let pieces = self.pieces.iter().map(|p| p.rotated(angle)).collect();
        let shape = match &self.shape {
            Shape::Disk { radius } => Shape::Disk { radius: *radius },
            Shape::Ellipse { a, b, rotation } => Shape::Ellipse { a: *a, b: *b, rotation: rotation + angle },
            Shape::Rectangle { .. } | Shape::Polygon { .. } => {
                Shape::Polygon { vertices: self.pieces.iter().map(|p| p.point(0.0).rotated(angle)).collect() }
            }
            Shape::Custom => Shape::Custom,
        };
        self.with(pieces, shape, format!("{}@rot{angle}", self.label))
    }

    pub fn translated(&self, by: impl Into<Vec2>) -> Domain {
        let by = by.into();
        let pieces = self.pieces.iter().map(|p| p.translated(by)).collect();
        let shape = match &self.shape {
            Shape::Rectangle { .. } | Shape::Polygon { .. } => {
                Shape::Polygon { vertices: self.pieces.iter().map(|p| p.point(0.0) + by).collect() }
            }
            _ => Shape::Custom,
        };
        self.with(pieces, shape, self.label.clone())
    }

    /// Uniform scaling about the origin by `s > 0`.
    pub fn scaled(&self, s: f64) -> Domain {
        let pieces = self.pieces.iter().map(|p| p.scaled(s)).collect();
        let shape = match &self.shape {
            Shape::Disk { radius } => Shape::Disk { radius: radius * s },
            Shape::Ellipse { a, b, rotation } => Shape::Ellipse { a: a * s, b: b * s, rotation: *rotation },
            Shape::Rectangle { width, height } => Shape::Rectangle { width: width * s, height: height * s },
            Shape::Polygon { vertices } => Shape::Polygon { vertices: vertices.iter().map(|v| *v * s).collect() },
            Shape::Custom => Shape::Custom,
        };
        self.with(pieces, shape, self.label.clone())
    }

    // Rigid motions and scalings keep corners and orientation, so no revalidation.
    fn with(&self, pieces: Vec<BoundaryPiece>, shape: Shape, label: String) -> Domain {
        Domain { pieces, corners: self.corners.clone(), shape, label }
    }

    pub fn area(&self) -> f64 {
        loop_area(&self.pieces)
    }

    pub fn perimeter(&self) -> f64 {
        self.pieces.iter().map(BoundaryPiece::length).sum()
    }

    pub fn diameter(&self) -> f64 {
        sampled_diameter(&self.pieces)
    }

    /// `(min, max)` corners of the axis-aligned bounding box (sampled for curved pieces).
    pub fn bounding_box(&self) -> (Vec2, Vec2) {
        let mut lo = Vec2::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in self.sample_boundary(256) {
            lo = Vec2::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Vec2::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        (lo, hi)
    }

    /// Boundary points: vertices of straight pieces, `per_piece` samples of curved ones.
    pub fn sample_boundary(&self, per_piece: usize) -> Vec<Vec2> {
        let mut out = Vec::new();
        for p in &self.pieces {
            let n = if p.is_straight() { 1 } else { per_piece.max(1) };
            for k in 0..n {
                out.push(p.point(k as f64 / n as f64));
            }
        }
        out
    }

    /// Closest boundary point to `p`: `(piece, t, distance)`.
    pub fn closest_boundary_param(&self, p: Vec2) -> (usize, f64, f64) {
        let mut best = (0, 0.0, f64::INFINITY);
        for (i, piece) in self.pieces.iter().enumerate() {
            let (t, d) = piece.closest_param(p);
            if d < best.2 {
                best = (i, t, d);
            }
        }
        best
    }

    /// Even-odd point-in-domain test against a fine boundary polygon.
    pub fn contains(&self, p: Vec2) -> bool {
        let poly = self.sample_boundary(512);
        let n = poly.len();
        let mut inside = false;
        for i in 0..n {
            let a = poly[i];
            let b = poly[(i + 1) % n];
            if (a.y > p.y) != (b.y > p.y) {
                let x = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
                if p.x < x {
                    inside = !inside;
                }
            }
        }
        inside
    }
}

fn positive(what: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{what} must be positive, got {v}")))
    }
}

fn sampled_diameter(pieces: &[BoundaryPiece]) -> f64 {
    let pts: Vec<Vec2> = pieces
        .iter()
        .flat_map(|p| {
            let n = if p.is_straight() { 1 } else { 64 };
            (0..n).map(move |k| p.point(k as f64 / n as f64))
        })
        .collect();
    let mut d: f64 = 0.0;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            d = d.max(pts[i].dist(pts[j]));
        }
    }
    d
}

/// Total tangent turning along a smooth piece.
fn smooth_turning(p: &BoundaryPiece) -> f64 {
    if p.is_straight() {
        return 0.0;
    }
    let n = 1024;
    let mut prev = p.deriv1(0.0);
    let mut total = 0.0;
    for k in 1..=n {
        let cur = p.deriv1(k as f64 / n as f64);
        total += prev.cross(cur).atan2(prev.dot(cur));
        prev = cur;
    }
    total
}

/// Signed area `½∮(x dy − y dx)`; exact for segments, Gauss–Legendre for arcs.
fn loop_area(pieces: &[BoundaryPiece]) -> f64 {
    const GL_X: [f64; 5] =
        [-0.906_179_845_938_664, -0.538_469_310_105_683, 0.0, 0.538_469_310_105_683, 0.906_179_845_938_664];
    const GL_W: [f64; 5] = [
        0.236_926_885_056_189,
        0.478_628_670_499_366,
        0.568_888_888_888_889,
        0.478_628_670_499_366,
        0.236_926_885_056_189,
    ];
    let mut a = 0.0;
    for p in pieces {
        match p {
            BoundaryPiece::Segment { start, end } => a += 0.5 * start.cross(*end),
            BoundaryPiece::EllipseArc { .. } => {
                let panels = 64;
                for k in 0..panels {
                    let t0 = k as f64 / panels as f64;
                    let half = 0.5 / panels as f64;
                    for (x, w) in GL_X.iter().zip(GL_W) {
                        let t = t0 + half * (1.0 + x);
                        a += 0.5 * p.point(t).cross(p.deriv1(t)) * w * half;
                    }
                }
            }
        }
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lip_triangle() -> Domain {
        Domain::polygon(vec![Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(0.5, 0.45)], "lip_triangle").unwrap()
    }

    #[test]
    fn disk_normal_and_curvature() {
        let d = Domain::canonical(CanonicalKind::Disk(1.0)).unwrap();
        let n = d.outward_normal(0, 0.0).unwrap();
        assert!((n.x - 1.0).abs() < 1e-12 && n.y.abs() < 1e-12);
        for k in 0..=20 {
            let t = k as f64 / 20.0;
            assert!((d.signed_curvature(0, t).unwrap() + 1.0).abs() < 1e-12);
        }
        assert!(d.corners().is_empty());
    }

    #[test]
    fn disk_radius_scales_curvature() {
        let d = Domain::canonical(CanonicalKind::Disk(2.5)).unwrap();
        assert!((d.signed_curvature(0, 0.3).unwrap() + 0.4).abs() < 1e-12);
    }

    #[test]
    fn square_edges() {
        let d = Domain::canonical(CanonicalKind::Rectangle(1.0, 1.0)).unwrap();
        assert_eq!(d.pieces().len(), 4);
        assert_eq!(d.corners().len(), 4);
        for c in d.corners() {
            assert!((c.angle - PI / 2.0).abs() < 1e-12);
        }
        for t in [0.1, 0.5, 0.9] {
            let n = d.outward_normal(0, t).unwrap();
            assert_eq!((n.x, n.y), (0.0, -1.0));
            assert_eq!(d.signed_curvature(2, t).unwrap(), 0.0);
        }
        assert!(matches!(d.outward_normal(1, 0.0), Err(Error::CornerPoint)));
        assert!(matches!(d.outward_normal(0, 1.0), Err(Error::CornerPoint)));
        assert!(matches!(d.signed_curvature(3, 1.0), Err(Error::CornerPoint)));
    }

    #[test]
    fn ellipse_axis_values() {
        let d = Domain::canonical(CanonicalKind::Ellipse(2.0, 1.0)).unwrap();
        let n = d.outward_normal(0, 0.25).unwrap();
        assert!(n.x.abs() < 1e-12 && (n.y - 1.0).abs() < 1e-12);
        assert!((d.signed_curvature(0, 0.0).unwrap() + 2.0).abs() < 1e-12);
        assert!((d.area() - 2.0 * PI).abs() < 1e-10);
    }

    #[test]
    fn triangle_has_three_convex_corners() {
        let d = lip_triangle();
        assert_eq!(d.pieces().len(), 3);
        assert_eq!(d.corners().len(), 3);
        let sum: f64 = d.corners().iter().map(|c| c.angle).sum();
        assert!((sum - PI).abs() < 1e-12);
        assert!((d.area() - 0.225).abs() < 1e-15);
    }

    #[test]
    fn reflex_corner_rejected() {
        let v = vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(2.0, 0.0),
            Vec2::new(2.0, 2.0),
            Vec2::new(1.0, 0.5),
            Vec2::new(0.0, 2.0),
        ];
        let err = Domain::polygon(v, "dart").unwrap_err();
        assert!(err.to_string().contains("non-convex corner"), "{err}");
    }

    #[test]
    fn self_intersecting_polygon_rejected() {
        // pentagram: every turn is convex but the loop winds twice
        let v: Vec<Vec2> = (0..5)
            .map(|k| {
                let a = PI / 2.0 + 4.0 * PI * k as f64 / 5.0;
                Vec2::new(a.cos(), a.sin())
            })
            .collect();
        let err = Domain::polygon(v, "star").unwrap_err();
        assert!(err.to_string().contains("self-intersecting"), "{err}");
    }

    #[test]
    fn clockwise_polygon_rejected() {
        let v = vec![Vec2::new(0.0, 0.0), Vec2::new(0.0, 1.0), Vec2::new(1.0, 0.0)];
        assert!(Domain::polygon(v, "cw").is_err());
    }

    #[test]
    fn collinear_vertex_is_not_a_corner() {
        let v = vec![Vec2::new(0.0, 0.0), Vec2::new(0.5, 0.0), Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)];
        let d = Domain::polygon(v, "tri").unwrap();
        assert_eq!(d.corners().len(), 3);
        assert!(d.outward_normal(1, 0.0).is_ok());
    }

    #[test]
    fn rotation_keeps_curvature_and_rotates_normals() {
        let d = Domain::canonical(CanonicalKind::Ellipse(2.0, 1.0)).unwrap();
        let r = d.rotated(0.7);
        for k in 0..40 {
            let t = k as f64 / 40.0;
            assert!((d.signed_curvature(0, t).unwrap() - r.signed_curvature(0, t).unwrap()).abs() < 1e-10);
            let n0 = d.outward_normal(0, t).unwrap().rotated(0.7);
            let n1 = r.outward_normal(0, t).unwrap();
            assert!(n0.dist(n1) < 1e-12);
        }
    }

    #[test]
    fn rotated_square_corners() {
        let s = 1.0;
        let d = Domain::canonical(CanonicalKind::Rectangle(s, s)).unwrap().translated([-0.5, -0.5]);
        let r = d.rotated(PI / 4.0);
        let h = std::f64::consts::SQRT_2 / 2.0 * s;
        let pts = r.corner_points();
        assert!(pts[0].dist(Vec2::new(0.0, -h)) < 1e-12);
        assert!(pts[1].dist(Vec2::new(h, 0.0)) < 1e-12);
        for i in 0..4 {
            assert_eq!(r.signed_curvature(i, 0.5).unwrap(), 0.0);
        }
    }

    #[test]
    fn contains_and_closest_point() {
        let d = Domain::canonical(CanonicalKind::Disk(1.0)).unwrap();
        assert!(d.contains(Vec2::new(0.3, 0.2)));
        assert!(!d.contains(Vec2::new(0.9, 0.9)));
        let (piece, t, dist) = d.closest_boundary_param(Vec2::new(0.0, 0.5));
        assert_eq!(piece, 0);
        assert!((t - 0.25).abs() < 1e-9 && (dist - 0.5).abs() < 1e-12);
    }
}
