//! Lip-domain validation and the opposite-quadrant normal test.

use super::{Domain, Vec2};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Tolerance on the unit Lipschitz bound.
pub const LIPSCHITZ_TOL: f64 = 1e-9;

/// Default sample grid for Lipschitz checks.
pub const DEFAULT_LIP_GRID: usize = 512;

/// Region between two piecewise-linear graphs `f1 < f2` over `[a, b]`,
/// pinched at both ends.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LipProfile {
    /// Breakpoints of `f1`, sorted by x, from `a` to `b`.
    pub lower: Vec<Vec2>,
    /// Breakpoints of `f2`, sorted by x, from `a` to `b`.
    pub upper: Vec<Vec2>,
}

impl LipProfile {
    pub fn new(lower: Vec<Vec2>, upper: Vec<Vec2>) -> Self {
        LipProfile { lower, upper }
    }

    /// Samples two profile functions at `n + 1` uniformly spaced points.
    pub fn from_fns(a: f64, b: f64, f1: impl Fn(f64) -> f64, f2: impl Fn(f64) -> f64, n: usize) -> Self {
        let xs: Vec<f64> = (0..=n).map(|i| a + (b - a) * i as f64 / n as f64).collect();
        LipProfile {
            lower: xs.iter().map(|&x| Vec2::new(x, f1(x))).collect(),
            upper: xs.iter().map(|&x| Vec2::new(x, f2(x))).collect(),
        }
    }

    pub fn a(&self) -> f64 {
        self.lower[0].x
    }

    pub fn b(&self) -> f64 {
        self.lower[self.lower.len() - 1].x
    }

    pub fn f1(&self, x: f64) -> f64 {
        eval_polyline(&self.lower, x)
    }

    pub fn f2(&self, x: f64) -> f64 {
        eval_polyline(&self.upper, x)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Domain(format!("lip profile: {m}")));
        if self.lower.len() < 2 || self.upper.len() < 2 {
            return bad("each graph needs at least two breakpoints");
        }
        for g in [&self.lower, &self.upper] {
            if g.windows(2).any(|w| !(w[1].x > w[0].x)) {
                return bad("breakpoints must be strictly increasing in x");
            }
        }
        let (a, b) = (self.a(), self.b());
        if self.upper[0].x != a || self.upper[self.upper.len() - 1].x != b {
            return bad("graphs must share the interval [a, b]");
        }
        let scale = (b - a).abs().max(1.0);
        if (self.f1(a) - self.f2(a)).abs() > 1e-12 * scale || (self.f1(b) - self.f2(b)).abs() > 1e-12 * scale {
            return bad("graphs must meet at both ends");
        }
        let grid = DEFAULT_LIP_GRID;
        let xs: Vec<f64> = (0..grid).map(|i| a + (b - a) * i as f64 / (grid - 1) as f64).collect();
        if xs[1..grid - 1].iter().any(|&x| self.f1(x) >= self.f2(x)) {
            return bad("f1 < f2 fails inside (a, b)");
        }
        for f in [&self.lower, &self.upper] {
            let ys: Vec<f64> = xs.iter().map(|&x| eval_polyline(f, x)).collect();
            let l = max_difference_quotient(&xs, &ys);
            if l > 1.0 + LIPSCHITZ_TOL {
                return bad(&format!("Lipschitz constant {l:.6} exceeds 1"));
            }
        }
        Ok(())
    }

    /// Counterclockwise polygon: lower graph left to right, upper graph back.
    pub fn polygon_vertices(&self) -> Vec<Vec2> {
        let mut v = self.lower.clone();
        let n = self.upper.len();
        v.extend(self.upper[1..n - 1].iter().rev().cloned());
        v
    }
}

fn eval_polyline(pts: &[Vec2], x: f64) -> f64 {
    let n = pts.len();
    if x <= pts[0].x {
        return pts[0].y;
    }
    if x >= pts[n - 1].x {
        return pts[n - 1].y;
    }
    let j = pts.partition_point(|p| p.x <= x).max(1) - 1;
    let (p, q) = (pts[j], pts[j + 1]);
    p.y + (q.y - p.y) * (x - p.x) / (q.x - p.x)
}

/// Largest `|y_i − y_j| / |x_i − x_j|` over all pairs.
pub fn max_difference_quotient(xs: &[f64], ys: &[f64]) -> f64 {
    let mut m: f64 = 0.0;
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            let dx = (xs[j] - xs[i]).abs();
            if dx > 0.0 {
                m = m.max((ys[j] - ys[i]).abs() / dx);
            }
        }
    }
    m
}

/// Outcome of [`is_lip_domain`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LipVerdict {
    pub is_lip: bool,
    pub reason: Option<String>,
    /// Largest sampled difference quotient of the reconstructed graphs.
    pub max_slope: f64,
    /// The domain starts or ends with a vertical boundary segment, so the
    /// graphs are not pinched there (axis-aligned rectangles).
    pub degenerate_ends: bool,
}

impl LipVerdict {
    fn no(reason: impl Into<String>, max_slope: f64) -> Self {
        LipVerdict { is_lip: false, reason: Some(reason.into()), max_slope, degenerate_ends: false }
    }
}

/// Reconstructs the lower/upper boundary graphs over the x-projection on a
/// `grid`-point sample and checks the unit Lipschitz bound.
pub fn is_lip_domain(domain: &Domain, grid: usize) -> Result<LipVerdict> {
    if grid < 64 {
        return Err(Error::InvalidInput(format!("lip grid must be >= 64, got {grid}")));
    }
    let poly = domain.sample_boundary(8 * grid);
    let n = poly.len();
    let diam = domain.diameter();
    let tol = 1e-12 * diam;
    let (a, b) = poly.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p.x), hi.max(p.x)));

    let mut degenerate_ends = false;
    for i in 0..n {
        let (p, q) = (poly[i], poly[(i + 1) % n]);
        if (q.x - p.x).abs() <= tol && (q.y - p.y).abs() > tol {
            if (p.x - a).abs() <= tol || (p.x - b).abs() <= tol {
                degenerate_ends = true;
            } else {
                return Ok(LipVerdict::no("cross section not an interval graph", f64::INFINITY));
            }
        }
    }

    let xs: Vec<f64> = (0..grid).map(|i| a + (b - a) * i as f64 / (grid - 1) as f64).collect();
    let mut f1 = Vec::with_capacity(grid);
    let mut f2 = Vec::with_capacity(grid);
    for (gi, &x) in xs.iter().enumerate() {
        let mut ys: Vec<f64> = Vec::new();
        for i in 0..n {
            let (p, q) = (poly[i], poly[(i + 1) % n]);
            if (q.x - p.x).abs() <= tol {
                if (p.x - x).abs() <= tol {
                    ys.push(p.y);
                    ys.push(q.y);
                }
                continue;
            }
            let (lo, hi) = if p.x < q.x { (p, q) } else { (q, p) };
            if x >= lo.x - tol && x <= hi.x + tol {
                let s = ((x - lo.x) / (hi.x - lo.x)).clamp(0.0, 1.0);
                ys.push(lo.y + s * (hi.y - lo.y));
            }
        }
        ys.sort_by(f64::total_cmp);
        ys.dedup_by(|u, v| (*u - *v).abs() <= 1e-9 * diam);
        let interior = gi > 0 && gi + 1 < grid;
        if ys.is_empty() || ys.len() > 2 || (interior && ys.len() < 2) {
            return Ok(LipVerdict::no(format!("cross section at x = {x} is not an interval"), f64::INFINITY));
        }
        f1.push(ys[0]);
        f2.push(ys[ys.len() - 1]);
    }

    let slope = max_difference_quotient(&xs, &f1).max(max_difference_quotient(&xs, &f2));
    if slope > 1.0 + LIPSCHITZ_TOL {
        return Ok(LipVerdict::no(format!("Lipschitz constant {slope:.6} exceeds 1"), slope));
    }
    let pinch_tol = 1e-9 * diam;
    if f2[0] - f1[0] > pinch_tol || f2[grid - 1] - f1[grid - 1] > pinch_tol {
        degenerate_ends = true;
    }
    let reason = degenerate_ends.then(|| "degenerate endpoints: f1 != f2 at an end of [a, b]".to_string());
    Ok(LipVerdict { is_lip: true, reason, max_slope: slope, degenerate_ends })
}

/// Outcome of [`normals_in_opposite_quadrants`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum QuadrantCheck {
    Holds,
    FailsAt { point: Vec2, normal: Vec2 },
}

impl QuadrantCheck {
    pub fn holds(&self) -> bool {
        matches!(self, QuadrantCheck::Holds)
    }
}

/// Checks `ν_x ν_y ≤ 0` (closed second/fourth quadrants) at `samples`
/// interior points of every piece.
pub fn normals_in_opposite_quadrants(domain: &Domain, samples: usize) -> Result<QuadrantCheck> {
    if samples < 16 {
        return Err(Error::InvalidInput(format!("need >= 16 samples per piece, got {samples}")));
    }
    for piece in domain.pieces() {
        for k in 0..samples {
            let t = (k as f64 + 0.5) / samples as f64;
            let nu = piece.normal(t)?;
            if nu.x * nu.y > 1e-12 {
                return Ok(QuadrantCheck::FailsAt { point: piece.point(t), normal: nu });
            }
        }
    }
    Ok(QuadrantCheck::Holds)
}
