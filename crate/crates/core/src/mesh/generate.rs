use super::{delaunay, Mesh};
use crate::error::{Error, Result};
use crate::geometry::{BoundaryPiece, Domain, Shape, Vec2};
use std::collections::HashMap;
use std::f64::consts::FRAC_PI_2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeshOptions {
    /// Upper bound on the number of vertices of the unstructured generator.
    pub vertex_cap: usize,
}

impl Default for MeshOptions {
    fn default() -> Self {
        MeshOptions { vertex_cap: 500_000 }
    }
}

/// Triangulates `domain` with edges no longer than `1.5 · target_h`.
///
/// Strategy by shape: axis-aligned rectangles get a structured "union jack"
/// grid (symmetric under the rectangle's symmetry group); centered disks and
/// axis-aligned ellipses are meshed on one quadrant and mirrored across both
/// axes; everything else goes through Delaunay refinement.
pub fn generate_mesh(domain: &Domain, target_h: f64, opts: &MeshOptions) -> Result<Mesh> {
    let diam = domain.diameter();
    if !(target_h > 0.0 && target_h.is_finite()) || target_h >= 0.5 * diam {
        return Err(Error::Mesh(format!(
            "target h = {target_h} must be positive and below half the diameter ({:.6})",
            0.5 * diam
        )));
    }
    if let Some((lo, hi)) = axis_aligned_rectangle(domain) {
        return structured(domain, lo, hi, target_h);
    }
    match *domain.shape() {
        Shape::Disk { radius } => quarter_mirrored(domain, radius, radius, target_h, opts),
        Shape::Ellipse { a, b, rotation: 0.0 } => quarter_mirrored(domain, a, b, target_h, opts),
        _ => {
            let corners: Vec<bool> = (0..domain.pieces().len()).map(|i| domain.has_corner_at_start(i)).collect();
            let (v, t) = delaunay::triangulate(domain.pieces(), &corners, target_h, opts.vertex_cap)?;
            Mesh::from_triangulation(v, t, domain)
        }
    }
}

fn axis_aligned_rectangle(domain: &Domain) -> Option<(Vec2, Vec2)> {
    if domain.pieces().len() != 4 || domain.corners().len() != 4 {
        return None;
    }
    let tol = 1e-12 * domain.diameter();
    for p in domain.pieces() {
        let BoundaryPiece::Segment { start, end } = *p else { return None };
        if (start.x - end.x).abs() > tol && (start.y - end.y).abs() > tol {
            return None;
        }
    }
    let (lo, hi) = domain.bounding_box();
    Some((lo, hi))
}

fn structured(domain: &Domain, lo: Vec2, hi: Vec2, h: f64) -> Result<Mesh> {
    let even = |len: f64| {
        let n = (len / h).ceil().max(2.0) as usize;
        n + n % 2
    };
    let (nx, ny) = (even(hi.x - lo.x), even(hi.y - lo.y));
    let coord = |lo: f64, hi: f64, n: usize, i: usize| {
        if i == 0 {
            lo
        } else if i == n {
            hi
        } else {
            let (c, half) = (0.5 * (lo + hi), 0.5 * (hi - lo));
            c + half * ((2 * i) as f64 - n as f64) / n as f64
        }
    };
    let mut vertices = Vec::with_capacity((nx + 1) * (ny + 1));
    for j in 0..=ny {
        for i in 0..=nx {
            vertices.push(Vec2::new(coord(lo.x, hi.x, nx, i), coord(lo.y, hi.y, ny, j)));
        }
    }
    let id = |i: usize, j: usize| j * (nx + 1) + i;
    let mut triangles = Vec::with_capacity(2 * nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let (a, b, c, d) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
            if (i + j) % 2 == 0 {
                triangles.push([a, b, c]);
                triangles.push([a, c, d]);
            } else {
                triangles.push([a, b, d]);
                triangles.push([b, c, d]);
            }
        }
    }
    Mesh::from_triangulation(vertices, triangles, domain)
}

fn quarter_mirrored(domain: &Domain, a: f64, b: f64, h: f64, opts: &MeshOptions) -> Result<Mesh> {
    let curves = [
        BoundaryPiece::segment(Vec2::ZERO, Vec2::new(a, 0.0)),
        BoundaryPiece::EllipseArc {
            center: Vec2::ZERO,
            semi_a: a,
            semi_b: b,
            rotation: 0.0,
            theta0: 0.0,
            theta1: FRAC_PI_2,
        },
        BoundaryPiece::segment(Vec2::new(0.0, b), Vec2::ZERO),
    ];
    let (qv, qt) = delaunay::triangulate(&curves, &[true; 3], h, opts.vertex_cap / 4 + 1)?;
    let mut vertices = Vec::with_capacity(4 * qv.len());
    let mut index: HashMap<(u64, u64), usize> = HashMap::new();
    let mut triangles = Vec::with_capacity(4 * qt.len());
    for (sx, sy) in [(1.0, 1.0), (-1.0, 1.0), (-1.0, -1.0), (1.0, -1.0)] {
        let map: Vec<usize> = qv
            .iter()
            .map(|p| {
                // `+ 0.0` folds −0 into +0 so axis vertices are shared.
                let q = Vec2::new(sx * p.x + 0.0, sy * p.y + 0.0);
                *index.entry((q.x.to_bits(), q.y.to_bits())).or_insert_with(|| {
                    vertices.push(q);
                    vertices.len() - 1
                })
            })
            .collect();
        for &[i, j, k] in &qt {
            if sx * sy > 0.0 {
                triangles.push([map[i], map[j], map[k]]);
            } else {
                triangles.push([map[i], map[k], map[j]]);
            }
        }
    }
    Mesh::from_triangulation(vertices, triangles, domain)
}
