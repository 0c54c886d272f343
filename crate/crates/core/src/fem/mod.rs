//! P1 finite elements for the scalar Laplacians and the curvature-weighted
//! vector form on tangential fields.

mod fields;

pub use fields::{
    boundary_normal_trace, curl_div, gradient_field, lift_gradient, lift_perp_gradient, mass_inner,
    perp_gradient_field, project_tangential, vector_mass_inner, CurlDiv,
};

use crate::error::{Error, Result};
use crate::geometry::Vec2;
use crate::mesh::Mesh;
use crate::par::Execution;
use crate::sparse::CsrMatrix;
use serde::{Deserialize, Serialize};

/// Nodal values of a piecewise-linear function.
pub type ScalarField = Vec<f64>;

/// Two piecewise-linear components.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    pub u1: Vec<f64>,
    pub u2: Vec<f64>,
}

impl VectorField {
    pub fn zeros(n: usize) -> Self {
        VectorField { u1: vec![0.0; n], u2: vec![0.0; n] }
    }

    pub fn from_fn(mesh: &Mesh, f: impl Fn(Vec2) -> Vec2) -> Self {
        let (u1, u2) = mesh.vertices().iter().map(|&p| f(p)).map(|v| (v.x, v.y)).unzip();
        VectorField { u1, u2 }
    }

    pub fn at(&self, v: usize) -> Vec2 {
        Vec2::new(self.u1[v], self.u2[v])
    }

    pub fn scaled(&self, s: f64) -> Self {
        VectorField { u1: self.u1.iter().map(|x| x * s).collect(), u2: self.u2.iter().map(|x| x * s).collect() }
    }
}

/// Interpolates `f` at the mesh vertices.
pub fn interpolate(mesh: &Mesh, f: impl Fn(Vec2) -> f64) -> ScalarField {
    mesh.vertices().iter().map(|&p| f(p)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProblemKind {
    NeumannScalar,
    DirichletScalar,
    VectorA,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryCondition {
    Neumann,
    Dirichlet,
}

/// One free unknown: a scalar nodal value (`frame == None`) or the coefficient
/// of a vector field at `vertex` along the unit vector `frame`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dof {
    pub vertex: usize,
    pub frame: Option<Vec2>,
}

/// A symmetric pencil `(form, mass)` over the free unknowns in `dofs`.
#[derive(Debug, Clone)]
pub struct AssembledSystem {
    pub kind: ProblemKind,
    pub form: CsrMatrix,
    pub mass: CsrMatrix,
    pub dofs: Vec<Dof>,
    pub n_vertices: usize,
}

impl AssembledSystem {
    pub fn n_dofs(&self) -> usize {
        self.dofs.len()
    }

    /// Nodal scalar field; eliminated vertices get zero.
    pub fn to_scalar_field(&self, x: &[f64]) -> ScalarField {
        assert_ne!(self.kind, ProblemKind::VectorA);
        let mut f = vec![0.0; self.n_vertices];
        for (d, &xi) in self.dofs.iter().zip(x) {
            f[d.vertex] = xi;
        }
        f
    }

    /// Coefficients of a nodal scalar field (values at eliminated vertices are dropped).
    pub fn from_scalar_field(&self, f: &[f64]) -> Vec<f64> {
        assert_ne!(self.kind, ProblemKind::VectorA);
        self.dofs.iter().map(|d| f[d.vertex]).collect()
    }

    /// Nodal vector field `u(v) = Σ x_d e_d` over the DOFs at `v`.
    pub fn to_vector_field(&self, x: &[f64]) -> VectorField {
        assert_eq!(self.kind, ProblemKind::VectorA);
        let mut u = VectorField::zeros(self.n_vertices);
        for (d, &xi) in self.dofs.iter().zip(x) {
            let e = d.frame.expect("vector dof has a frame");
            u.u1[d.vertex] += xi * e.x;
            u.u2[d.vertex] += xi * e.y;
        }
        u
    }

    /// Orthogonal projection of a nodal field onto the constrained space.
    pub fn from_vector_field(&self, u: &VectorField) -> Vec<f64> {
        assert_eq!(self.kind, ProblemKind::VectorA);
        self.dofs.iter().map(|d| u.at(d.vertex).dot(d.frame.expect("vector dof has a frame"))).collect()
    }
}

/// Per-triangle P1 data: area and gradients of the three hat functions.
pub(crate) fn element(mesh: &Mesh, t: usize) -> (f64, [Vec2; 3]) {
    let p = mesh.triangle_points(t);
    let area = 0.5 * (p[1] - p[0]).cross(p[2] - p[0]);
    let g = std::array::from_fn(|i| {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        Vec2::new(p[j].y - p[k].y, p[k].x - p[j].x) / (2.0 * area)
    });
    (area, g)
}

type Local = ([usize; 3], [[f64; 3]; 3], [[f64; 3]; 3]);

fn local_matrices(mesh: &Mesh, exec: Execution) -> Result<Vec<Local>> {
    let total = mesh.area();
    let locals = exec.map(mesh.n_triangles(), |t| {
        let (area, g) = element(mesh, t);
        let mut k = [[0.0; 3]; 3];
        let mut m = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                k[i][j] = area * g[i].dot(g[j]);
                m[i][j] = area / 12.0 * if i == j { 2.0 } else { 1.0 };
            }
        }
        (mesh.triangles()[t], k, m, area)
    });
    locals
        .into_iter()
        .enumerate()
        .map(|(t, (v, k, m, area))| {
            if !(area >= 1e-14 * total) {
                Err(Error::Assembly(format!("degenerate triangle {t} (area {area:e})")))
            } else {
                Ok((v, k, m))
            }
        })
        .collect()
}

/// Stiffness and consistent mass of the P1 Laplacian.
pub fn assemble_scalar(mesh: &Mesh, bc: BoundaryCondition, exec: Execution) -> Result<AssembledSystem> {
    let locals = local_matrices(mesh, exec)?;
    let nv = mesh.n_vertices();
    let mut index = vec![usize::MAX; nv];
    let mut dofs = Vec::new();
    for (v, slot) in index.iter_mut().enumerate() {
        if bc == BoundaryCondition::Neumann || !mesh.is_boundary(v) {
            *slot = dofs.len();
            dofs.push(Dof { vertex: v, frame: None });
        }
    }
    let mut kt = Vec::with_capacity(9 * locals.len());
    let mut mt = Vec::with_capacity(9 * locals.len());
    for (v, k, m) in &locals {
        for i in 0..3 {
            for j in 0..3 {
                let (a, b) = (index[v[i]], index[v[j]]);
                if a != usize::MAX && b != usize::MAX {
                    kt.push((a, b, k[i][j]));
                    mt.push((a, b, m[i][j]));
                }
            }
        }
    }
    let n = dofs.len();
    if n == 0 {
        return Err(Error::Assembly("no free degrees of freedom".into()));
    }
    let kind = match bc {
        BoundaryCondition::Neumann => ProblemKind::NeumannScalar,
        BoundaryCondition::Dirichlet => ProblemKind::DirichletScalar,
    };
    Ok(AssembledSystem {
        kind,
        form: CsrMatrix::from_triplets(n, n, &kt),
        mass: CsrMatrix::from_triplets(n, n, &mt),
        dofs,
        n_vertices: nv,
    })
}

/// The vector form `∫ ∇u₁·∇v₁ + ∇u₂·∇v₂ − ∫_∂Ω κ u·v` on fields whose
/// boundary trace is tangential.
///
/// Interior vertices carry `(e₁, e₂)`; a smooth boundary vertex carries only
/// its tangent `(−ν₂, ν₁)`; corners carry nothing. The boundary term uses the
/// edge-midpoint curvature with the exact P1 edge mass.
pub fn assemble_vector_a(mesh: &Mesh, exec: Execution) -> Result<AssembledSystem> {
    for (i, e) in mesh.boundary_edges().iter().enumerate() {
        if !e.kappa.is_finite() {
            return Err(Error::Assembly(format!("missing curvature sample on boundary edge {i}")));
        }
    }
    let locals = local_matrices(mesh, exec)?;
    let nv = mesh.n_vertices();
    let mut frames: Vec<Vec<(usize, Vec2)>> = vec![Vec::new(); nv];
    let mut dofs = Vec::new();
    for (v, slot) in frames.iter_mut().enumerate() {
        let es: Vec<Vec2> = match mesh.boundary_vertex(v) {
            None => vec![Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)],
            Some(b) if b.is_corner => vec![],
            Some(b) => {
                let n = b.normal.expect("smooth boundary vertex has a normal");
                vec![Vec2::new(-n.y, n.x)]
            }
        };
        for e in es {
            slot.push((dofs.len(), e));
            dofs.push(Dof { vertex: v, frame: Some(e) });
        }
    }
    let mut st: Vec<(usize, usize, f64)> = Vec::with_capacity(9 * locals.len() + 4 * mesh.boundary_edges().len());
    let mut mt = Vec::with_capacity(9 * locals.len());
    for (v, k, m) in &locals {
        for i in 0..3 {
            for j in 0..3 {
                st.push((v[i], v[j], k[i][j]));
                mt.push((v[i], v[j], m[i][j]));
            }
        }
    }
    for e in mesh.boundary_edges() {
        let len = mesh.vertices()[e.a].dist(mesh.vertices()[e.b]);
        let w = e.kappa * len / 6.0;
        st.push((e.a, e.a, -2.0 * w));
        st.push((e.a, e.b, -w));
        st.push((e.b, e.a, -w));
        st.push((e.b, e.b, -2.0 * w));
    }
    let expand = |scalar: &[(usize, usize, f64)]| {
        let mut out = Vec::with_capacity(2 * scalar.len());
        for &(i, j, val) in scalar {
            for &(a, ea) in &frames[i] {
                for &(b, eb) in &frames[j] {
                    let d = ea.dot(eb);
                    if d != 0.0 {
                        out.push((a, b, val * d));
                    }
                }
            }
        }
        out
    };
    let n = dofs.len();
    if n == 0 {
        return Err(Error::Assembly("no free degrees of freedom".into()));
    }
    let (form, mass) =
        exec.join(|| CsrMatrix::from_triplets(n, n, &expand(&st)), || CsrMatrix::from_triplets(n, n, &expand(&mt)));
    Ok(AssembledSystem { kind: ProblemKind::VectorA, form, mass, dofs, n_vertices: nv })
}

/// `a[u] / ‖u‖²_M` for the projection of `u` onto the constrained space.
pub fn rayleigh_quotient_a(system: &AssembledSystem, u: &VectorField) -> Result<f64> {
    if system.kind != ProblemKind::VectorA {
        return Err(Error::InvalidInput("rayleigh_quotient_a needs the vector system".into()));
    }
    let x = system.from_vector_field(u);
    let den = system.mass.quad_form(&x);
    if !(den > 0.0) {
        return Err(Error::InvalidInput("field has zero mass norm".into()));
    }
    Ok(system.form.quad_form(&x) / den)
}

/// Scalar Rayleigh quotient `xᵀKx / xᵀMx` of a nodal field.
pub fn rayleigh_quotient_scalar(system: &AssembledSystem, f: &[f64]) -> Result<f64> {
    let x = system.from_scalar_field(f);
    let den = system.mass.quad_form(&x);
    if !(den > 0.0) {
        return Err(Error::InvalidInput("field has zero mass norm".into()));
    }
    Ok(system.form.quad_form(&x) / den)
}
