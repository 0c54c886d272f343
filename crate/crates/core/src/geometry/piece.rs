use super::Vec2;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Threshold below which |γ'| is treated as a singular parameterization.
pub const SINGULAR_SPEED: f64 = 1e-12;

/// One smooth piece of a counterclockwise boundary loop, parameterized over `t ∈ [0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum BoundaryPiece {
    Segment {
        start: Vec2,
        end: Vec2,
    },
    /// `center + R(rotation) (a cos θ, b sin θ)` with `θ = theta0 + (theta1 - theta0) t`.
    EllipseArc {
        center: Vec2,
        semi_a: f64,
        semi_b: f64,
        rotation: f64,
        theta0: f64,
        theta1: f64,
    },
}

impl BoundaryPiece {
    pub fn segment(start: impl Into<Vec2>, end: impl Into<Vec2>) -> Self {
        BoundaryPiece::Segment { start: start.into(), end: end.into() }
    }

    pub fn point(&self, t: f64) -> Vec2 {
        match *self {
            BoundaryPiece::Segment { start, end } => start.lerp(end, t),
            BoundaryPiece::EllipseArc { center, semi_a, semi_b, rotation, theta0, theta1 } => {
                let th = theta0 + (theta1 - theta0) * t;
                center + Vec2::new(semi_a * th.cos(), semi_b * th.sin()).rotated(rotation)
            }
        }
    }

    pub fn deriv1(&self, t: f64) -> Vec2 {
        match *self {
            BoundaryPiece::Segment { start, end } => end - start,
            BoundaryPiece::EllipseArc { semi_a, semi_b, rotation, theta0, theta1, .. } => {
                let dth = theta1 - theta0;
                let th = theta0 + dth * t;
                Vec2::new(-semi_a * th.sin(), semi_b * th.cos()).rotated(rotation) * dth
            }
        }
    }

    pub fn deriv2(&self, t: f64) -> Vec2 {
        match *self {
            BoundaryPiece::Segment { .. } => Vec2::ZERO,
            BoundaryPiece::EllipseArc { semi_a, semi_b, rotation, theta0, theta1, .. } => {
                let dth = theta1 - theta0;
                let th = theta0 + dth * t;
                Vec2::new(-semi_a * th.cos(), -semi_b * th.sin()).rotated(rotation) * (dth * dth)
            }
        }
    }

    pub fn is_straight(&self) -> bool {
        matches!(self, BoundaryPiece::Segment { .. })
    }

    /// Outward unit normal `(y', -x') / |γ'|` of a counterclockwise piece.
    pub fn normal(&self, t: f64) -> Result<Vec2> {
        let d = self.deriv1(t);
        let speed = d.norm();
        if speed < SINGULAR_SPEED {
            return Err(Error::SingularParameterization);
        }
        Ok(Vec2::new(d.y, -d.x) / speed)
    }

    /// Signed curvature w.r.t. the outer normal; nonpositive on convex arcs.
    pub fn curvature(&self, t: f64) -> Result<f64> {
        if let BoundaryPiece::Segment { start, end } = self {
            if start.dist(*end) < SINGULAR_SPEED {
                return Err(Error::SingularParameterization);
            }
            return Ok(0.0);
        }
        let d1 = self.deriv1(t);
        let d2 = self.deriv2(t);
        let speed = d1.norm();
        if speed < SINGULAR_SPEED {
            return Err(Error::SingularParameterization);
        }
        Ok(-d1.cross(d2) / (speed * speed * speed))
    }

    pub fn length(&self) -> f64 {
        match *self {
            BoundaryPiece::Segment { start, end } => start.dist(end),
            BoundaryPiece::EllipseArc { .. } => {
                // Composite Simpson; the integrand is smooth and periodic-ish.
                let n = 512;
                let h = 1.0 / n as f64;
                let mut s = self.deriv1(0.0).norm() + self.deriv1(1.0).norm();
                for i in 1..n {
                    let w = if i % 2 == 1 { 4.0 } else { 2.0 };
                    s += w * self.deriv1(i as f64 * h).norm();
                }
                s * h / 3.0
            }
        }
    }

    /// Parameters `t_0 = 0 < … < t_n = 1` splitting the piece into `n` arcs of equal length.
    pub fn equal_arclength_params(&self, n: usize) -> Vec<f64> {
        assert!(n >= 1);
        if self.is_straight() {
            return (0..=n).map(|i| i as f64 / n as f64).collect();
        }
        let samples = 64 * n.max(16);
        let mut cum = Vec::with_capacity(samples + 1);
        cum.push(0.0);
        let mut prev = self.point(0.0);
        for i in 1..=samples {
            let p = self.point(i as f64 / samples as f64);
            cum.push(cum[i - 1] + prev.dist(p));
            prev = p;
        }
        let total = cum[samples];
        let mut out = vec![0.0];
        let mut j = 0;
        for k in 1..n {
            let target = total * k as f64 / n as f64;
            while cum[j + 1] < target {
                j += 1;
            }
            let frac = (target - cum[j]) / (cum[j + 1] - cum[j]);
            out.push((j as f64 + frac) / samples as f64);
        }
        out.push(1.0);
        out
    }

    /// Parameter of the point on the piece closest to `p`, and the distance.
    pub fn closest_param(&self, p: Vec2) -> (f64, f64) {
        match *self {
            BoundaryPiece::Segment { start, end } => {
                let d = end - start;
                let t = ((p - start).dot(d) / d.norm_sq()).clamp(0.0, 1.0);
                (t, self.point(t).dist(p))
            }
            BoundaryPiece::EllipseArc { .. } => {
                let n = 256;
                let mut best = (0.0, f64::INFINITY);
                for i in 0..=n {
                    let t = i as f64 / n as f64;
                    let d = self.point(t).dist(p);
                    if d < best.1 {
                        best = (t, d);
                    }
                }
                let mut t = best.0;
                for _ in 0..30 {
                    let r = self.point(t) - p;
                    let d1 = self.deriv1(t);
                    let g = r.dot(d1);
                    let dg = d1.norm_sq() + r.dot(self.deriv2(t));
                    if dg <= 0.0 {
                        break;
                    }
                    let next = (t - g / dg).clamp(0.0, 1.0);
                    if (next - t).abs() < 1e-16 {
                        t = next;
                        break;
                    }
                    t = next;
                }
                let d = self.point(t).dist(p);
                if d <= best.1 {
                    (t, d)
                } else {
                    best
                }
            }
        }
    }

    pub fn rotated(&self, angle: f64) -> BoundaryPiece {
        match *self {
            BoundaryPiece::Segment { start, end } => {
                BoundaryPiece::Segment { start: start.rotated(angle), end: end.rotated(angle) }
            }
            BoundaryPiece::EllipseArc { center, semi_a, semi_b, rotation, theta0, theta1 } => {
                BoundaryPiece::EllipseArc {
                    center: center.rotated(angle),
                    semi_a,
                    semi_b,
                    rotation: rotation + angle,
                    theta0,
                    theta1,
                }
            }
        }
    }

    pub fn translated(&self, by: Vec2) -> BoundaryPiece {
        let mut out = self.clone();
        match &mut out {
            BoundaryPiece::Segment { start, end } => {
                *start += by;
                *end += by;
            }
            BoundaryPiece::EllipseArc { center, .. } => *center += by,
        }
        out
    }

    pub fn scaled(&self, s: f64) -> BoundaryPiece {
        match *self {
            BoundaryPiece::Segment { start, end } => BoundaryPiece::Segment { start: start * s, end: end * s },
            BoundaryPiece::EllipseArc { center, semi_a, semi_b, rotation, theta0, theta1 } => {
                BoundaryPiece::EllipseArc {
                    center: center * s,
                    semi_a: semi_a * s,
                    semi_b: semi_b * s,
                    rotation,
                    theta0,
                    theta1,
                }
            }
        }
    }
}
