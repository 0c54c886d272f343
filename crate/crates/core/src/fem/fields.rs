use super::{element, VectorField};
use crate::geometry::Vec2;
use crate::mesh::Mesh;
use crate::par::Execution;

/// Exact gradient of the P1 interpolant on each triangle.
pub fn gradient_field(mesh: &Mesh, psi: &[f64], exec: Execution) -> Vec<Vec2> {
    assert_eq!(psi.len(), mesh.n_vertices());
    exec.map(mesh.n_triangles(), |t| {
        let (_, g) = element(mesh, t);
        let v = mesh.triangles()[t];
        g[0] * psi[v[0]] + g[1] * psi[v[1]] + g[2] * psi[v[2]]
    })
}

/// `∇⊥φ = (−∂₂φ, ∂₁φ)` per triangle.
pub fn perp_gradient_field(mesh: &Mesh, phi: &[f64], exec: Execution) -> Vec<Vec2> {
    gradient_field(mesh, phi, exec).into_iter().map(|g| g.perp()).collect()
}

fn recover(mesh: &Mesh, per_triangle: &[Vec2]) -> VectorField {
    let n = mesh.n_vertices();
    let mut acc = vec![Vec2::ZERO; n];
    let mut weight = vec![0.0; n];
    for (t, tri) in mesh.triangles().iter().enumerate() {
        let a = mesh.triangle_area(t);
        for &v in tri {
            acc[v] += per_triangle[t] * a;
            weight[v] += a;
        }
    }
    let (u1, u2) = acc.iter().zip(&weight).map(|(s, w)| (s.x / w, s.y / w)).unzip();
    VectorField { u1, u2 }
}

/// Nodal gradient by area-weighted averaging of the adjacent triangle gradients.
pub fn lift_gradient(mesh: &Mesh, psi: &[f64], exec: Execution) -> VectorField {
    recover(mesh, &gradient_field(mesh, psi, exec))
}

/// Nodal `∇⊥φ` by area-weighted averaging.
pub fn lift_perp_gradient(mesh: &Mesh, phi: &[f64], exec: Execution) -> VectorField {
    recover(mesh, &perp_gradient_field(mesh, phi, exec))
}

/// Removes the normal component at smooth boundary vertices and zeroes corners.
pub fn project_tangential(mesh: &Mesh, u: &VectorField) -> VectorField {
    let mut out = u.clone();
    for b in mesh.boundary_vertices() {
        let v = b.vertex;
        let w = match b.normal {
            Some(n) => {
                let t = n.perp();
                t * u.at(v).dot(t)
            }
            None => Vec2::ZERO,
        };
        out.u1[v] = w.x;
        out.u2[v] = w.y;
    }
    out
}

/// Per-triangle curl `∂₁u₂ − ∂₂u₁` and divergence `∂₁u₁ + ∂₂u₂` with their L² norms.
#[derive(Debug, Clone, PartialEq)]
pub struct CurlDiv {
    pub curl: Vec<f64>,
    pub div: Vec<f64>,
    pub curl_l2: f64,
    pub div_l2: f64,
}

pub fn curl_div(mesh: &Mesh, u: &VectorField, exec: Execution) -> CurlDiv {
    let g1 = gradient_field(mesh, &u.u1, exec);
    let g2 = gradient_field(mesh, &u.u2, exec);
    let curl: Vec<f64> = g1.iter().zip(&g2).map(|(a, b)| b.x - a.y).collect();
    let div: Vec<f64> = g1.iter().zip(&g2).map(|(a, b)| a.x + b.y).collect();
    let l2 = |f: &[f64]| f.iter().enumerate().map(|(t, c)| mesh.triangle_area(t) * c * c).sum::<f64>().sqrt();
    let (curl_l2, div_l2) = (l2(&curl), l2(&div));
    CurlDiv { curl, div, curl_l2, div_l2 }
}

/// Consistent-mass inner product `∫ a b` of two P1 fields.
pub fn mass_inner(mesh: &Mesh, a: &[f64], b: &[f64]) -> f64 {
    mesh.triangles()
        .iter()
        .enumerate()
        .map(|(t, v)| {
            let (sa, sb): (f64, f64) = (v.iter().map(|&i| a[i]).sum(), v.iter().map(|&i| b[i]).sum());
            let diag: f64 = v.iter().map(|&i| a[i] * b[i]).sum();
            mesh.triangle_area(t) / 12.0 * (diag + sa * sb)
        })
        .sum()
}

pub fn vector_mass_inner(mesh: &Mesh, u: &VectorField, w: &VectorField) -> f64 {
    mass_inner(mesh, &u.u1, &w.u1) + mass_inner(mesh, &u.u2, &w.u2)
}

/// `‖⟨u, ν⟩‖_{L²(∂Ω)} / ‖u‖_{L²(∂Ω)}` with edge normals and trapezoidal quadrature.
pub fn boundary_normal_trace(mesh: &Mesh, u: &VectorField) -> f64 {
    let (mut num, mut den) = (0.0, 0.0);
    for e in mesh.boundary_edges() {
        let len = mesh.vertices()[e.a].dist(mesh.vertices()[e.b]);
        for v in [e.a, e.b] {
            num += 0.5 * len * u.at(v).dot(e.normal).powi(2);
            den += 0.5 * len * u.at(v).norm_sq();
        }
    }
    if den > 0.0 {
        (num / den).sqrt()
    } else {
        0.0
    }
}
