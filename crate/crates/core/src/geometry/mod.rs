//! Planar simply connected domains described by piecewise-smooth,
//! counterclockwise boundary loops with convex corners.
//!
//! Curvature follows the outer-normal convention
//! `κ = −(x′y″ − y′x″) / |γ′|³`, so convex boundaries have `κ ≤ 0` and a
//! circle of radius `R` has `κ = −1/R`.

mod domain;
pub mod io;
mod lip;
mod piece;
mod vec2;

pub use domain::{CanonicalKind, Corner, Domain, Shape, CHAIN_TOL, CORNER_ANGLE_TOL};
pub use lip::{
    is_lip_domain, max_difference_quotient, normals_in_opposite_quadrants, LipProfile, LipVerdict, QuadrantCheck,
    DEFAULT_LIP_GRID, LIPSCHITZ_TOL,
};
pub use piece::{BoundaryPiece, SINGULAR_SPEED};
pub use vec2::Vec2;

/// The named test polygons understood by front ends.
pub fn named_polygon(name: &str) -> Option<Vec<Vec2>> {
    let v = |pts: &[(f64, f64)]| pts.iter().map(|&p| Vec2::from(p)).collect();
    match name {
        "lip_triangle" => Some(v(&[(0.0, 0.0), (1.0, 0.0), (0.5, 0.45)])),
        "equilateral" => Some(v(&[(0.0, 0.0), (1.0, 0.0), (0.5, 0.75f64.sqrt())])),
        "right_triangle" => Some(v(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)])),
        "obtuse_trapezoid" => Some(v(&[(0.0, 0.0), (1.0, 0.0), (0.8, 0.3), (0.3, 0.3)])),
        "diamond" => Some(v(&[(0.0, -0.5), (0.5, 0.0), (0.0, 0.5), (-0.5, 0.0)])),
        _ => None,
    }
}
