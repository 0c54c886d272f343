use hotspot_lab::geometry::{named_polygon, CanonicalKind, Domain, Vec2};
use hotspot_lab::mesh::{generate_mesh, io, Axis, Mesh, MeshOptions};
use std::f64::consts::{FRAC_PI_4, PI};

fn mesh(d: &Domain, h: f64) -> Mesh {
    generate_mesh(d, h, &MeshOptions::default()).unwrap()
}

fn lip_triangle() -> Domain {
    Domain::polygon(named_polygon("lip_triangle").unwrap(), "lip_triangle").unwrap()
}

fn check_contract(d: &Domain, m: &Mesh, h: f64) {
    assert!(m.h_max() <= 1.5 * h, "h_max {} > 1.5 h", m.h_max());
    assert!(m.min_angle_deg() >= 20.0, "min angle {}", m.min_angle_deg());
    for t in 0..m.n_triangles() {
        assert!(m.triangle_area(t) > 0.0);
    }
    for e in m.boundary_edges() {
        let p = m.vertices()[e.a];
        let (_, _, dist) = d.closest_boundary_param(p);
        assert!(dist < 1e-10, "boundary vertex off the boundary by {dist}");
        assert!(e.kappa <= 1e-12);
    }
    assert_eq!(m.corner_vertices().len(), d.corners().len());
    for b in m.boundary_vertices() {
        if let Some(n) = b.normal {
            assert!((n.norm() - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn unit_square_is_structured() {
    let d = Domain::canonical(CanonicalKind::Rectangle(1.0, 1.0)).unwrap();
    let m = mesh(&d, 0.1);
    assert_eq!(m.n_triangles(), 200);
    assert!(m.boundary_edges().iter().all(|e| e.kappa == 0.0));
    assert!((m.area() - 1.0).abs() < 1e-12);
    check_contract(&d, &m, 0.1);
    assert!(m.min_angle_deg() >= 44.9);
}

#[test]
fn disk_curvature_samples_are_exact() {
    let d = Domain::canonical(CanonicalKind::Disk(1.0)).unwrap();
    let m = mesh(&d, 0.1);
    for e in m.boundary_edges() {
        assert!((e.kappa + 1.0).abs() < 1e-12, "{}", e.kappa);
    }
    check_contract(&d, &m, 0.1);
    let m = mesh(&d, 0.05);
    assert!((m.boundary_length() - 2.0 * PI).abs() < 0.01 * 2.0 * PI);
    assert!(m.reflection_map(Axis::X).is_some());
    assert!(m.reflection_map(Axis::Y).is_some());
}

#[test]
fn lip_triangle_has_three_corners() {
    let d = lip_triangle();
    let m = mesh(&d, 0.05);
    assert_eq!(m.corner_vertices().len(), 3);
    assert!((m.area() - d.area()).abs() < 1e-10);
    check_contract(&d, &m, 0.05);
    let r = d.rotated(FRAC_PI_4);
    check_contract(&r, &mesh(&r, 0.05), 0.05);
}

#[test]
fn ellipse_is_mirror_symmetric() {
    let d = Domain::canonical(CanonicalKind::Ellipse(2.0, 1.0)).unwrap();
    let m = mesh(&d, 0.1);
    check_contract(&d, &m, 0.1);
    let mx = m.reflection_map(Axis::X).unwrap();
    for (i, &j) in mx.iter().enumerate() {
        assert_eq!(m.vertices()[j], Vec2::new(-m.vertices()[i].x, m.vertices()[i].y));
    }
    assert!((m.area() - 2.0 * PI).abs() < 0.02);
}

#[test]
fn refinement_quadruples_and_halves() {
    for d in [Domain::canonical(CanonicalKind::Disk(1.0)).unwrap(), lip_triangle()] {
        let m = mesh(&d, 0.1);
        let r = m.refine_uniform(&d).unwrap();
        assert_eq!(r.n_triangles(), 4 * m.n_triangles());
        let ratio = r.h_max() / m.h_max();
        assert!((ratio - 0.5).abs() < 0.05, "{ratio}");
    }
    let d = Domain::canonical(CanonicalKind::Disk(1.0)).unwrap();
    let r = mesh(&d, 0.1).refine_uniform(&d).unwrap();
    assert!(r.boundary_edges().iter().all(|e| (e.kappa + 1.0).abs() < 1e-12));
}

#[test]
fn file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for d in [lip_triangle(), Domain::canonical(CanonicalKind::Disk(1.0)).unwrap()] {
        let m = mesh(&d, 0.1);
        let path = dir.path().join("m.txt");
        io::write_mesh(&m, &path).unwrap();
        assert_eq!(io::read_mesh(&path).unwrap(), m);
    }
}

#[test]
fn too_coarse_or_too_fine() {
    let d = lip_triangle();
    assert!(generate_mesh(&d, 0.8, &MeshOptions::default()).is_err());
    let err = generate_mesh(&d, 0.001, &MeshOptions { vertex_cap: 2000 }).unwrap_err();
    assert!(matches!(err, hotspot_lab::Error::MeshResource { .. }), "{err}");
}

#[test]
fn acute_corners_terminate() {
    // A 5° corner at the origin: quality refinement must not chase the input angle.
    let pts = vec![Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(0.25, 0.0225)];
    let d = Domain::polygon(pts, "sliver").unwrap();
    for h in [0.2, 0.05, 0.02] {
        let m = mesh(&d, h);
        assert!(m.h_max() <= 1.5 * h);
        assert!((m.area() - d.area()).abs() < 1e-12);
        assert_eq!(m.corner_vertices().len(), 3);
        assert!(m.n_vertices() < 20_000, "{} vertices at h = {h}", m.n_vertices());
    }
}
