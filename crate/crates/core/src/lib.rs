//! Finite-element laboratory for planar Laplacian eigenvalue problems.
//!
//! Besides the scalar Neumann and Dirichlet Laplacians, the crate discretizes
//! the vector operator `A` defined on tangential vector fields by the form
//!
//! ```text
//! a[u, v] = ∫_Ω (∇u₁·∇v₁ + ∇u₂·∇v₂) − ∫_∂Ω κ ⟨u, v⟩,   ⟨u, ν⟩ = 0 on ∂Ω,
//! ```
//!
//! with `κ` the signed boundary curvature. On simply connected domains the
//! spectrum of `A` is the union of the positive Neumann and Dirichlet
//! eigenvalues; [`spectral`] checks that numerically, and [`hotspots`]
//! post-processes the first nontrivial Neumann eigenfunction.
//!
//! Pipeline: [`geometry`] → [`mesh`] → [`fem`] → [`eigensolve`] →
//! [`spectral`] / [`hotspots`].

pub mod eigensolve;
mod error;
pub mod fem;
pub mod geometry;
pub mod hotspots;
pub mod mesh;
pub mod par;
pub mod sparse;
pub mod spectral;
pub mod vtk;

pub use error::{Error, ErrorClass, Result};
pub use par::Execution;
