//! Legacy ASCII VTK export of a scalar field with its gradient.

use crate::error::{Error, Result};
use crate::fem::{gradient_field, lift_gradient};
use crate::geometry::Vec2;
use crate::mesh::Mesh;
use crate::par::Execution;
use std::fmt::Write as _;
use std::path::Path;

/// Unstructured grid with point data `psi` and `grad_psi` (recovered nodal
/// gradient) and one cell scalar `d<k>` per direction holding `∂_{d_k} ψ`.
pub fn format_vtk(mesh: &Mesh, psi: &[f64], directions: &[Vec2]) -> Result<String> {
    if psi.len() != mesh.n_vertices() {
        return Err(Error::InvalidInput(format!("field has {} values for {} vertices", psi.len(), mesh.n_vertices())));
    }
    let exec = Execution::default();
    let nodal = lift_gradient(mesh, psi, exec);
    let cell = gradient_field(mesh, psi, exec);
    let (nv, nt) = (mesh.n_vertices(), mesh.n_triangles());
    let mut s = String::new();
    writeln!(s, "# vtk DataFile Version 3.0\nsecond Neumann eigenfunction\nASCII\nDATASET UNSTRUCTURED_GRID").unwrap();
    writeln!(s, "POINTS {nv} double").unwrap();
    for p in mesh.vertices() {
        writeln!(s, "{} {} 0", p.x, p.y).unwrap();
    }
    writeln!(s, "CELLS {nt} {}", 4 * nt).unwrap();
    for t in mesh.triangles() {
        writeln!(s, "3 {} {} {}", t[0], t[1], t[2]).unwrap();
    }
    writeln!(s, "CELL_TYPES {nt}").unwrap();
    for _ in 0..nt {
        s.push_str("5\n");
    }
    writeln!(s, "POINT_DATA {nv}\nSCALARS psi double 1\nLOOKUP_TABLE default").unwrap();
    for v in psi {
        writeln!(s, "{v}").unwrap();
    }
    writeln!(s, "VECTORS grad_psi double").unwrap();
    for v in 0..nv {
        let g = nodal.at(v);
        writeln!(s, "{} {} 0", g.x, g.y).unwrap();
    }
    if !directions.is_empty() {
        writeln!(s, "CELL_DATA {nt}").unwrap();
        for (k, d) in directions.iter().enumerate() {
            let d = d.normalized();
            writeln!(s, "SCALARS d{k} double 1\nLOOKUP_TABLE default").unwrap();
            for g in &cell {
                writeln!(s, "{}", g.dot(d)).unwrap();
            }
        }
    }
    Ok(s)
}

pub fn write_vtk(path: &Path, mesh: &Mesh, psi: &[f64], directions: &[Vec2]) -> Result<()> {
    std::fs::write(path, format_vtk(mesh, psi, directions)?)?;
    Ok(())
}
