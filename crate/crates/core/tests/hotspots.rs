mod common;

use common::*;
use hotspot_lab::eigensolve::{smallest_eigenpairs, EigenOptions, Spectrum};
use hotspot_lab::fem::{assemble_scalar, interpolate, BoundaryCondition};
use hotspot_lab::geometry::{Domain, Vec2};
use hotspot_lab::hotspots::*;
use hotspot_lab::mesh::Mesh;
use hotspot_lab::{Error, Execution};
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, PI};

fn cfg() -> HotspotConfig {
    HotspotConfig::default()
}

fn neumann(m: &Mesh, k: usize) -> Spectrum {
    let s = assemble_scalar(m, BoundaryCondition::Neumann, Execution::Parallel).unwrap();
    smallest_eigenpairs(&s, k, &EigenOptions::default()).unwrap()
}

fn psi2(m: &Mesh) -> Vec<f64> {
    neumann(m, 2).pairs[1].vector.clone()
}

#[test]
fn extrema_of_simple_fields() {
    let m = mesh(&square(), 0.05);
    let e = locate_extrema(&m, &interpolate(&m, |p| (PI * p.x).cos())).unwrap();
    assert!(e.max.on_boundary && e.min.on_boundary);
    assert_eq!((e.max.point.x, e.min.point.x), (0.0, 1.0));
    assert!(e.max_boundary_margin >= 0.0 && e.min_boundary_margin >= 0.0);

    let m = mesh(&disk(), 0.1);
    let e = locate_extrema(&m, &interpolate(&m, |p| p.norm_sq())).unwrap();
    assert!(e.max.on_boundary && !e.min.on_boundary);
    assert!(e.min.point.norm() < 1e-12, "{:?}", e.min.point);
    assert!(e.min_boundary_margin < 0.0);

    assert!(matches!(locate_extrema(&m, &vec![2.0; m.n_vertices()]), Err(Error::InvalidInput(_))));
}

#[test]
fn critical_scan_of_cosine_stays_near_the_ends() {
    let m = mesh(&square(), 0.05);
    let found = interior_critical_scan(&m, &interpolate(&m, |p| (PI * p.x).cos()), 0.2, 0.0).unwrap();
    assert!(!found.is_empty());
    let h = m.h_max();
    assert!(found.iter().all(|c| c.point.x <= h || c.point.x >= 1.0 - h), "{found:?}");
    assert!(found.iter().all(|c| c.relative_gradient < 0.2));

    let affine = interpolate(&m, |p| p.x + p.y);
    assert!(interior_critical_scan(&m, &affine, 0.9, 0.0).unwrap().is_empty());
}

#[test]
fn multiplicity_of_mu2() {
    for (d, expect) in [(square(), 2), (lip_triangle(), 1), (disk(), 2)] {
        let s = neumann(&mesh(&d, 0.05), 5);
        assert_eq!(simplicity_check(&s, 1e-2).unwrap(), (1, expect), "{}", d.label);
    }
    // A cluster running into the end of the computed list cannot be sized.
    let s = neumann(&mesh(&square(), 0.1), 3);
    assert!(matches!(simplicity_check(&s, 1e-2), Err(Error::Resolution(_))));
}

#[test]
fn directional_derivatives_of_linear_and_cosine_fields() {
    let m = mesh(&lip_triangle(), 0.05);
    let r = directional_positivity(&m, &interpolate(&m, |p| p.x), &lip_directions(), &cfg()).unwrap();
    for c in &r.checks {
        assert_eq!(c.positive_fraction, 1.0);
        assert!((c.min_normalized - FRAC_1_SQRT_2).abs() < 1e-12, "{c:?}");
    }
    assert!(r.passed && !r.flipped);

    let m = mesh(&square(), 0.05);
    let r = directional_positivity(&m, &interpolate(&m, |p| (PI * p.x).cos()), &lip_directions(), &cfg()).unwrap();
    assert!(r.flipped);
    assert!(r.checks.iter().all(|c| c.positive_fraction == 1.0 && !c.degenerate));
    assert_eq!(r.degenerate_axes, vec![Vec2::new(0.0, 1.0)]);

    let zero = vec![0.0; m.n_vertices()];
    assert!(directional_positivity(&m, &zero, &lip_directions(), &cfg()).is_err());
}

#[test]
fn lip_triangle_full_pipeline() {
    let d = lip_triangle();
    let m = mesh(&d, 0.03);
    let r = analyze(&d, &m, &neumann(&m, 4), &cfg()).unwrap();
    assert!(r.passed, "{r:?}");
    assert_eq!(r.multiplicity, 1);
    assert!(r.extrema.max.on_boundary && r.extrema.min.on_boundary);
    assert!(r.critical_candidates.is_empty());
    let dr = r.directional.as_ref().unwrap();
    assert!(dr.checks.iter().all(|c| c.positive_fraction >= 0.99 && c.min_normalized > 0.0), "{dr:?}");
    let rot = r.rotated.unwrap();
    assert!(rot.passed && rot.positive_fraction.iter().all(|&f| f >= 0.99));
    assert!(r.rotation_disagreement.unwrap() <= 0.01);
    assert!(r.symmetry.is_none());
}

#[test]
fn directional_fractions_are_stable_under_refinement() {
    let d = lip_triangle();
    let coarse = mesh(&d, 0.05);
    let fine = coarse.refine_uniform(&d).unwrap();
    let f = |m: &Mesh| {
        let r = directional_positivity(m, &psi2(m), &lip_directions(), &cfg()).unwrap();
        r.checks.iter().map(|c| c.positive_fraction).collect::<Vec<_>>()
    };
    let (a, b) = (f(&coarse), f(&fine));
    for (x, y) in a.iter().zip(&b) {
        assert!((x - y).abs() <= 0.01, "{a:?} {b:?}");
    }
}

#[test]
fn rotated_lip_triangle_has_positive_components() {
    let d = lip_triangle().rotated(FRAC_PI_4);
    let m = mesh(&d, 0.04);
    let r = rotated_lip_component_positivity(&d, &m, &psi2(&m), &cfg()).unwrap();
    assert!(r.passed && r.positive_fraction.iter().all(|&f| f >= 0.99), "{r:?}");
    assert!(!r.degenerate[0] && !r.degenerate[1]);

    let r = rotated_lip_component_positivity(&d, &m, &interpolate(&m, |p| p.x + p.y), &cfg()).unwrap();
    assert_eq!(r.positive_fraction, [1.0, 1.0]);

    // Unrotated, the right edge has an outward normal in the first quadrant.
    let plain = lip_triangle();
    let pm = mesh(&plain, 0.1);
    let err = rotated_lip_component_positivity(&plain, &pm, &psi2(&pm), &cfg());
    assert!(matches!(err, Err(Error::InvalidInput(ref s)) if s.contains("rotated lip")), "{err:?}");
}

#[test]
fn square_in_rotated_position_has_a_vanishing_component() {
    // The diamond rotated by π/4 is the axis-aligned square.
    let d = centered_square();
    let m = mesh(&d, 0.05);
    let s = neumann(&m, 4);
    let basis: Vec<&[f64]> = s.pairs[1..3].iter().map(|p| p.vector.as_slice()).collect();
    let psi = axis_aligned_member(&m, &basis, Vec2::new(0.0, 1.0));
    let r = rotated_lip_component_positivity(&d, &m, &psi, &cfg()).unwrap();
    assert!(r.degenerate[1] && !r.degenerate[0], "{r:?}");
    assert!(r.positive_fraction[0] >= 0.99);
}

#[test]
fn ellipse_follows_the_nodal_axis_picture() {
    let d = ellipse();
    let m = mesh(&d, 0.05);
    let r = symmetry_analysis(&m, &psi2(&m), &cfg()).unwrap();
    assert_eq!((r.x.parity, r.y.parity), (Parity::Odd, Parity::Even));
    let mono = r.monotone.unwrap();
    assert!(mono.passed && mono.min_normalized > 0.0 && mono.nodal_within_tolerance, "{mono:?}");
    assert!(!mono.cross_derivative_vanishes);
}

#[test]
fn symmetry_of_model_fields_on_centered_square() {
    let m = mesh(&centered_square(), 0.05);
    let r = symmetry_analysis(&m, &interpolate(&m, |p| (PI * (p.x + 0.5)).cos()), &cfg()).unwrap();
    assert_eq!((r.x.parity, r.y.parity), (Parity::Odd, Parity::Even));
    assert!(r.x.odd_score < 1e-12 && r.y.even_score < 1e-12);
    assert!(r.monotone.unwrap().cross_derivative_vanishes);

    let r = symmetry_analysis(&m, &interpolate(&m, |p| p.x * p.y), &cfg()).unwrap();
    assert_eq!((r.x.parity, r.y.parity), (Parity::Odd, Parity::Odd));
    assert!(r.monotone.is_none());

    let off = mesh(&lip_triangle(), 0.1);
    let err = symmetry_analysis(&off, &interpolate(&off, |p| p.x), &cfg());
    assert!(matches!(err, Err(Error::InvalidInput(ref s)) if s.contains("reflection maps unavailable")));
}

#[test]
fn reports_ignore_the_sign_of_psi() {
    for d in [lip_triangle(), ellipse()] {
        let m = mesh(&d, 0.05);
        let psi = psi2(&m);
        let neg: Vec<f64> = psi.iter().map(|v| -v).collect();
        let a = analyze_field(&d, &m, &psi, 1.0, 1, &cfg()).unwrap();
        let b = analyze_field(&d, &m, &neg, 1.0, 1, &cfg()).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn extrema_on_boundary_across_suite() {
    let suite: Vec<Domain> = vec![square(), disk(), ellipse(), lip_triangle()];
    for d in suite {
        for h in [0.1, 0.05] {
            let m = mesh(&d, h);
            let r = analyze(&d, &m, &neumann(&m, 5), &cfg()).unwrap();
            assert!(r.extrema.max.on_boundary && r.extrema.min.on_boundary, "{} {h}", d.label);
        }
    }
}

#[test]
fn vtk_export_lists_every_section() {
    let m = mesh(&square(), 0.25);
    let text = hotspot_lab::vtk::format_vtk(&m, &interpolate(&m, |p| p.x), &lip_directions()).unwrap();
    for key in ["DATASET UNSTRUCTURED_GRID", "SCALARS psi", "VECTORS grad_psi", "CELL_DATA", "SCALARS d0", "SCALARS d1"]
    {
        assert!(text.contains(key), "{key}");
    }
    assert!(text.contains(&format!("POINTS {} double", m.n_vertices())));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("psi.vtk");
    hotspot_lab::vtk::write_vtk(&path, &m, &interpolate(&m, |p| p.x), &[]).unwrap();
    assert!(!std::fs::read_to_string(path).unwrap().contains("CELL_DATA"));
}
