//! Conforming triangulations with the boundary data needed by the vector form.

mod delaunay;
mod generate;
pub mod io;

pub use generate::{generate_mesh, MeshOptions};

use crate::error::{Error, Result};
use crate::geometry::{Domain, Vec2};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// A boundary edge `a → b`, oriented with the domain on its left.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryEdge {
    pub a: usize,
    pub b: usize,
    /// Boundary piece of the domain the edge approximates.
    pub piece: usize,
    /// Signed curvature sampled at the edge midpoint.
    pub kappa: f64,
    /// Exact outward unit normal sampled at the edge midpoint.
    pub normal: Vec2,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryVertex {
    pub vertex: usize,
    /// Normalized average of the two adjacent edge normals; `None` at corners.
    pub normal: Option<Vec2>,
    pub is_corner: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    /// Reflection `(x, y) ↦ (−x, y)`.
    X,
    /// Reflection `(x, y) ↦ (x, −y)`.
    Y,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    vertices: Vec<Vec2>,
    triangles: Vec<[usize; 3]>,
    boundary_edges: Vec<BoundaryEdge>,
    boundary_vertices: Vec<BoundaryVertex>,
    boundary_slot: Vec<Option<usize>>,
    h_max: f64,
}

impl Mesh {
    /// Assembles a mesh from raw parts and checks every structural invariant.
    ///
    /// `boundary_edges` must list the boundary cycle in order; `corners` are
    /// vertex indices.
    pub fn from_parts(
        vertices: Vec<Vec2>,
        triangles: Vec<[usize; 3]>,
        boundary_edges: Vec<BoundaryEdge>,
        corners: &[usize],
    ) -> Result<Mesh> {
        let nv = vertices.len();
        if boundary_edges.is_empty() {
            return Err(Error::Mesh("empty boundary".into()));
        }
        let cycle = boundary_cycle(nv, &triangles)?;
        if cycle.len() != boundary_edges.len() {
            return Err(Error::Mesh(format!(
                "boundary lists {} edges but connectivity has {}",
                boundary_edges.len(),
                cycle.len()
            )));
        }
        let directed: HashMap<usize, usize> = cycle.iter().copied().collect();
        for (i, e) in boundary_edges.iter().enumerate() {
            if directed.get(&e.a) != Some(&e.b) {
                return Err(Error::Mesh(format!("boundary edge {i} ({}, {}) is not a boundary edge", e.a, e.b)));
            }
            let next = &boundary_edges[(i + 1) % boundary_edges.len()];
            if next.a != e.b {
                return Err(Error::Mesh(format!("boundary edges {i} and {} do not chain", i + 1)));
            }
            if !(e.normal.x.is_finite() && e.normal.y.is_finite()) || (e.normal.norm() - 1.0).abs() > 1e-9 {
                return Err(Error::Mesh(format!("boundary edge {i} normal is not a unit vector")));
            }
        }
        let mut slot = vec![None; nv];
        for (i, e) in boundary_edges.iter().enumerate() {
            slot[e.a] = Some(i);
        }
        for &c in corners {
            if c >= nv || slot[c].is_none() {
                return Err(Error::Mesh(format!("corner {c} is not a boundary vertex")));
            }
        }
        let nb = boundary_edges.len();
        let boundary_vertices = (0..nb)
            .map(|i| {
                let out = &boundary_edges[i];
                let inc = &boundary_edges[(i + nb - 1) % nb];
                let is_corner = corners.contains(&out.a);
                let normal = (!is_corner).then(|| (inc.normal + out.normal).normalized());
                BoundaryVertex { vertex: out.a, normal, is_corner }
            })
            .collect();
        let h_max = triangles
            .iter()
            .flat_map(|t| (0..3).map(move |k| (t[k], t[(k + 1) % 3])))
            .map(|(a, b)| vertices[a].dist(vertices[b]))
            .fold(0.0, f64::max);
        Ok(Mesh { vertices, triangles, boundary_edges, boundary_vertices, boundary_slot: slot, h_max })
    }

    /// Builds a mesh from a triangulation of `domain`, sampling κ and ν at the
    /// projection of each boundary edge midpoint onto the exact boundary.
    pub fn from_triangulation(vertices: Vec<Vec2>, triangles: Vec<[usize; 3]>, domain: &Domain) -> Result<Mesh> {
        let cycle = boundary_cycle(vertices.len(), &triangles)?;
        let mut edges = Vec::with_capacity(cycle.len());
        for &(a, b) in &cycle {
            let mid = (vertices[a] + vertices[b]) * 0.5;
            let (piece, t, _) = domain.closest_boundary_param(mid);
            let kappa = domain.signed_curvature(piece, t)?;
            let normal = domain.outward_normal(piece, t)?;
            edges.push(BoundaryEdge { a, b, piece, kappa, normal });
        }
        let tol = 1e-9 * domain.diameter();
        let mut corners = Vec::new();
        for c in domain.corner_points() {
            let v = cycle
                .iter()
                .map(|&(a, _)| a)
                .find(|&a| vertices[a].dist(c) <= tol)
                .ok_or_else(|| Error::Mesh(format!("domain corner ({}, {}) is not a mesh vertex", c.x, c.y)))?;
            corners.push(v);
        }
        Mesh::from_parts(vertices, triangles, edges, &corners)
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    /// Boundary edges in cycle order.
    pub fn boundary_edges(&self) -> &[BoundaryEdge] {
        &self.boundary_edges
    }

    /// Boundary vertices in cycle order (`boundary_vertices()[i].vertex == boundary_edges()[i].a`).
    pub fn boundary_vertices(&self) -> &[BoundaryVertex] {
        &self.boundary_vertices
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_triangles(&self) -> usize {
        self.triangles.len()
    }

    /// Longest edge length.
    pub fn h_max(&self) -> f64 {
        self.h_max
    }

    pub fn is_boundary(&self, v: usize) -> bool {
        self.boundary_slot[v].is_some()
    }

    pub fn boundary_vertex(&self, v: usize) -> Option<&BoundaryVertex> {
        self.boundary_slot[v].map(|i| &self.boundary_vertices[i])
    }

    pub fn corner_vertices(&self) -> Vec<usize> {
        self.boundary_vertices.iter().filter(|b| b.is_corner).map(|b| b.vertex).collect()
    }

    pub fn triangle_points(&self, t: usize) -> [Vec2; 3] {
        let [a, b, c] = self.triangles[t];
        [self.vertices[a], self.vertices[b], self.vertices[c]]
    }

    /// Signed area of triangle `t` (positive for every valid mesh).
    pub fn triangle_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangle_points(t);
        0.5 * (b - a).cross(c - a)
    }

    pub fn centroid(&self, t: usize) -> Vec2 {
        let [a, b, c] = self.triangle_points(t);
        (a + b + c) / 3.0
    }

    pub fn area(&self) -> f64 {
        (0..self.triangles.len()).map(|t| self.triangle_area(t)).sum()
    }

    pub fn boundary_length(&self) -> f64 {
        self.boundary_edges.iter().map(|e| self.vertices[e.a].dist(self.vertices[e.b])).sum()
    }

    /// Smallest interior angle over all triangles, in degrees.
    pub fn min_angle_deg(&self) -> f64 {
        let mut min = f64::INFINITY;
        for t in 0..self.triangles.len() {
            let p = self.triangle_points(t);
            for k in 0..3 {
                let u = p[(k + 1) % 3] - p[k];
                let v = p[(k + 2) % 3] - p[k];
                min = min.min(u.cross(v).abs().atan2(u.dot(v)).to_degrees());
            }
        }
        min
    }

    /// Euclidean distance from `p` to the boundary polyline.
    pub fn distance_to_boundary(&self, p: Vec2) -> f64 {
        self.boundary_edges
            .iter()
            .map(|e| point_segment_distance(p, self.vertices[e.a], self.vertices[e.b]))
            .fold(f64::INFINITY, f64::min)
    }

    /// Copy with every coordinate multiplied by `s > 0`; curvature scales by `1/s`.
    pub fn scaled(&self, s: f64) -> Mesh {
        let mut m = self.clone();
        for v in &mut m.vertices {
            *v = *v * s;
        }
        for e in &mut m.boundary_edges {
            e.kappa /= s;
        }
        m.h_max *= s;
        m
    }

    /// Copy rotated counter-clockwise about the origin; normals rotate with it.
    pub fn rotated(&self, angle: f64) -> Mesh {
        let mut m = self.clone();
        for v in &mut m.vertices {
            *v = v.rotated(angle);
        }
        for e in &mut m.boundary_edges {
            e.normal = e.normal.rotated(angle);
        }
        for b in &mut m.boundary_vertices {
            b.normal = b.normal.map(|n| n.rotated(angle));
        }
        m
    }

    /// Vertex permutation realizing the reflection about `axis`, if the mesh
    /// vertex set is mirror symmetric to within `1e-9` of its diameter.
    pub fn reflection_map(&self, axis: Axis) -> Option<Vec<usize>> {
        let (lo, hi) = self.vertices.iter().fold(
            (Vec2::new(f64::INFINITY, f64::INFINITY), Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY)),
            |(lo, hi), v| (Vec2::new(lo.x.min(v.x), lo.y.min(v.y)), Vec2::new(hi.x.max(v.x), hi.y.max(v.y))),
        );
        let tol = 1e-9 * hi.dist(lo).max(f64::MIN_POSITIVE);
        let cell = 4.0 * tol;
        let key = |p: Vec2| ((p.x / cell).floor() as i64, (p.y / cell).floor() as i64);
        let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
        for (i, v) in self.vertices.iter().enumerate() {
            grid.entry(key(*v)).or_default().push(i);
        }
        let mut map = Vec::with_capacity(self.vertices.len());
        for v in &self.vertices {
            let target = match axis {
                Axis::X => Vec2::new(-v.x, v.y),
                Axis::Y => Vec2::new(v.x, -v.y),
            };
            let (kx, ky) = key(target);
            let hit = (-1..=1)
                .flat_map(|dx| (-1..=1).map(move |dy| (kx + dx, ky + dy)))
                .filter_map(|k| grid.get(&k))
                .flatten()
                .copied()
                .find(|&j| self.vertices[j].dist(target) <= tol)?;
            map.push(hit);
        }
        Some(map)
    }

    /// Red refinement: every triangle is split into four through its edge
    /// midpoints; midpoints of curved boundary edges are moved onto `domain`.
    pub fn refine_uniform(&self, domain: &Domain) -> Result<Mesh> {
        let mut vertices = self.vertices.clone();
        let mut mids: HashMap<(usize, usize), usize> = HashMap::new();
        let boundary_piece: HashMap<(usize, usize), usize> =
            self.boundary_edges.iter().map(|e| ((e.a.min(e.b), e.a.max(e.b)), e.piece)).collect();
        let mut midpoint = |a: usize, b: usize, vertices: &mut Vec<Vec2>| -> usize {
            let key = (a.min(b), a.max(b));
            *mids.entry(key).or_insert_with(|| {
                let mut p = (vertices[a] + vertices[b]) * 0.5;
                if let Some(&piece) = boundary_piece.get(&key) {
                    let curve = &domain.pieces()[piece.min(domain.pieces().len() - 1)];
                    if !curve.is_straight() {
                        let (piece, t, _) = domain.closest_boundary_param(p);
                        p = domain.pieces()[piece].point(t);
                    }
                }
                vertices.push(p);
                vertices.len() - 1
            })
        };
        let mut triangles = Vec::with_capacity(4 * self.triangles.len());
        for &[a, b, c] in &self.triangles {
            let ab = midpoint(a, b, &mut vertices);
            let bc = midpoint(b, c, &mut vertices);
            let ca = midpoint(c, a, &mut vertices);
            triangles.extend_from_slice(&[[a, ab, ca], [ab, b, bc], [ca, bc, c], [ab, bc, ca]]);
        }
        Mesh::from_triangulation(vertices, triangles, domain)
    }
}

pub(crate) fn point_segment_distance(p: Vec2, a: Vec2, b: Vec2) -> f64 {
    let d = b - a;
    let len2 = d.norm_sq();
    let t = if len2 > 0.0 { ((p - a).dot(d) / len2).clamp(0.0, 1.0) } else { 0.0 };
    p.dist(a + d * t)
}

/// Checks connectivity and returns the directed boundary edges in cycle order,
/// starting from the boundary edge with the smallest start vertex.
fn boundary_cycle(nv: usize, triangles: &[[usize; 3]]) -> Result<Vec<(usize, usize)>> {
    if triangles.is_empty() {
        return Err(Error::Mesh("no triangles".into()));
    }
    let mut used = vec![false; nv];
    let mut directed: HashMap<(usize, usize), usize> = HashMap::with_capacity(3 * triangles.len());
    for (t, tri) in triangles.iter().enumerate() {
        if tri.iter().any(|&v| v >= nv) {
            return Err(Error::Mesh(format!("triangle {t} references a vertex outside 0..{nv}")));
        }
        if tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] {
            return Err(Error::Mesh(format!("triangle {t} repeats a vertex")));
        }
        for k in 0..3 {
            used[tri[k]] = true;
            if directed.insert((tri[k], tri[(k + 1) % 3]), t).is_some() {
                return Err(Error::Mesh(format!(
                    "non-conforming connectivity: edge ({}, {}) used twice with the same orientation",
                    tri[k],
                    tri[(k + 1) % 3]
                )));
            }
        }
    }
    if let Some(v) = used.iter().position(|u| !u) {
        return Err(Error::Mesh(format!("vertex {v} is not used by any triangle")));
    }
    let mut next: HashMap<usize, usize> = HashMap::new();
    for &(a, b) in directed.keys() {
        if !directed.contains_key(&(b, a)) && next.insert(a, b).is_some() {
            return Err(Error::Mesh(format!("boundary is pinched at vertex {a}")));
        }
    }
    if next.is_empty() {
        return Err(Error::Mesh("empty boundary".into()));
    }
    let start = *next.keys().min().unwrap();
    let mut cycle = Vec::with_capacity(next.len());
    let mut a = start;
    loop {
        let b = next[&a];
        cycle.push((a, b));
        a = b;
        if a == start {
            break;
        }
        if cycle.len() > next.len() {
            return Err(Error::Mesh("open boundary cycle".into()));
        }
    }
    if cycle.len() != next.len() {
        return Err(Error::Mesh("boundary has more than one cycle".into()));
    }
    let n_edges = directed.len() - (directed.len() - cycle.len()) / 2;
    let euler = nv as i64 - n_edges as i64 + triangles.len() as i64;
    if euler != 1 {
        return Err(Error::Mesh(format!("triangulation is not a disk (Euler characteristic {euler})")));
    }
    Ok(cycle)
}
