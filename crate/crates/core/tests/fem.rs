mod common;

use common::*;
use hotspot_lab::fem::*;
use hotspot_lab::geometry::{Domain, Vec2};
use hotspot_lab::mesh::Mesh;
use hotspot_lab::Execution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

const PAR: Execution = Execution::Parallel;

fn reference_triangle() -> Mesh {
    let pts = vec![Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)];
    let d = Domain::polygon(pts.clone(), "ref").unwrap();
    Mesh::from_triangulation(pts, vec![[0, 1, 2]], &d).unwrap()
}

#[test]
fn reference_triangle_stiffness_rows_sum_to_zero() {
    let s = assemble_scalar(&reference_triangle(), BoundaryCondition::Neumann, PAR).unwrap();
    let k = s.form.to_dense();
    assert_eq!(k.shape(), (3, 3));
    for i in 0..3 {
        assert!(k.row(i).sum().abs() < 1e-15);
    }
    assert!((k[(0, 0)] - 1.0).abs() < 1e-15);
    assert!((k[(1, 1)] - 0.5).abs() < 1e-15);
    let m = s.mass.to_dense();
    assert!((m.sum() - 0.5).abs() < 1e-15, "mass integrates 1 to the area");
}

#[test]
fn neumann_kernel_and_dirichlet_elimination() {
    let mesh = mesh(&disk(), 0.15);
    let n = assemble_scalar(&mesh, BoundaryCondition::Neumann, PAR).unwrap();
    let ones = vec![1.0; n.n_dofs()];
    assert!(n.form.matvec(&ones, PAR).iter().all(|v| v.abs() < 1e-12));
    let d = assemble_scalar(&mesh, BoundaryCondition::Dirichlet, PAR).unwrap();
    assert_eq!(d.n_dofs(), mesh.n_vertices() - mesh.boundary_vertices().len());
    assert!(d.dofs.iter().all(|dof| !mesh.is_boundary(dof.vertex)));
}

#[test]
fn gradients_of_linear_fields_are_exact() {
    let mesh = mesh(&lip_triangle(), 0.1);
    let g = gradient_field(&mesh, &interpolate(&mesh, |p| p.x), PAR);
    assert!(g.iter().all(|v| (v.x - 1.0).abs() < 1e-12 && v.y.abs() < 1e-12));
    let g = gradient_field(&mesh, &interpolate(&mesh, |p| p.x + 2.0 * p.y), PAR);
    assert!(g.iter().all(|v| (v.x - 1.0).abs() < 1e-12 && (v.y - 2.0).abs() < 1e-12));
    let g = perp_gradient_field(&mesh, &interpolate(&mesh, |p| p.y), PAR);
    assert!(g.iter().all(|v| (v.x + 1.0).abs() < 1e-12 && v.y.abs() < 1e-12));
    let g = perp_gradient_field(&mesh, &interpolate(&mesh, |p| p.x), PAR);
    assert!(g.iter().all(|v| v.x.abs() < 1e-12 && (v.y - 1.0).abs() < 1e-12));
}

#[test]
fn recovered_gradient_of_cosine_converges() {
    let err = |h: f64| {
        let mesh = mesh(&square(), h);
        let u = lift_gradient(&mesh, &interpolate(&mesh, |p| (PI * p.x).cos()), PAR);
        (0..mesh.n_vertices())
            .map(|v| {
                let p = mesh.vertices()[v];
                (u.at(v) - Vec2::new(-PI * (PI * p.x).sin(), 0.0)).norm()
            })
            .fold(0.0, f64::max)
    };
    let (e1, e2) = (err(0.1), err(0.05));
    assert!(e1 < 0.5 && e2 < 0.6 * e1, "{e1} {e2}");
}

#[test]
fn dirichlet_perp_gradient_is_nearly_tangential() {
    let trace = |h: f64| {
        let mesh = mesh(&square(), h);
        let u = lift_perp_gradient(&mesh, &interpolate(&mesh, |p| (PI * p.x).sin() * (PI * p.y).sin()), PAR);
        boundary_normal_trace(&mesh, &u)
    };
    let (t1, t2) = (trace(0.1), trace(0.05));
    assert!(t1 < 0.2 && t2 < 0.6 * t1, "{t1} {t2}");
}

#[test]
fn curl_and_divergence() {
    let m = mesh(&disk(), 0.1);
    let cd = curl_div(&m, &VectorField::from_fn(&m, |p| Vec2::new(-p.y, p.x)), PAR);
    assert!(cd.curl.iter().all(|c| (c - 2.0).abs() < 1e-12));
    assert!(cd.div.iter().all(|d| d.abs() < 1e-12));

    let defects = |h: f64| {
        let mesh = mesh(&lip_triangle(), h);
        let g = lift_gradient(&mesh, &interpolate(&mesh, |p| p.norm_sq()), PAR);
        let p = lift_perp_gradient(&mesh, &interpolate(&mesh, |p| p.x * p.y), PAR);
        (curl_div(&mesh, &g, PAR).curl_l2, curl_div(&mesh, &p, PAR).div_l2)
    };
    let (a, b) = (defects(0.1), defects(0.05));
    assert!(b.0 <= 0.75 * a.0 + 1e-13, "curl {a:?} {b:?}");
    assert!(b.1 <= 0.75 * a.1 + 1e-13, "div {a:?} {b:?}");
}

#[test]
fn vector_form_matches_its_definition() {
    // form(u, u) = ∫|∇u₁|² + |∇u₂|² − ∫_{∂Ω} κ|u|², evaluated independently.
    for (d, h) in [(square(), 0.1), (disk(), 0.15), (ellipse(), 0.2)] {
        let mesh = mesh(&d, h);
        let a = assemble_vector_a(&mesh, PAR).unwrap();
        let k = assemble_scalar(&mesh, BoundaryCondition::Neumann, PAR).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..5 {
            let x: Vec<f64> = (0..a.n_dofs()).map(|_| rng.random_range(-1.0..1.0)).collect();
            let u = a.to_vector_field(&x);
            let mut expected = k.form.quad_form(&u.u1) + k.form.quad_form(&u.u2);
            for e in mesh.boundary_edges() {
                let len = mesh.vertices()[e.a].dist(mesh.vertices()[e.b]);
                let (ua, ub) = (u.at(e.a), u.at(e.b));
                expected -= e.kappa * len / 3.0 * (ua.norm_sq() + ub.norm_sq() + ua.dot(ub));
            }
            let got = a.form.quad_form(&x);
            assert!(rel(got, expected) < 1e-10, "{} {got} {expected}", d.label);
        }
    }
}

#[test]
fn rayleigh_quotient_of_cosine_gradient_on_square() {
    let mesh = mesh(&square(), 0.05);
    let a = assemble_vector_a(&mesh, PAR).unwrap();
    let u = lift_gradient(&mesh, &interpolate(&mesh, |p| (PI * p.x).cos()), PAR);
    let rq = rayleigh_quotient_a(&a, &u).unwrap();
    assert!(rel(rq, PI * PI) < 0.01, "{rq}");
    let rq2 = rayleigh_quotient_a(&a, &u.scaled(7.3)).unwrap();
    assert!(rel(rq2, rq) < 1e-12);
}

#[test]
fn rotation_field_on_disk_bounds_mu2() {
    // u = (−y, x): ∫|∇u|² = 2π, −∫κ|u|² = 2π, ∫|u|² = π/2, so R(u) = 8.
    let mesh = mesh(&disk(), 0.05);
    let a = assemble_vector_a(&mesh, PAR).unwrap();
    let u = VectorField::from_fn(&mesh, |p| Vec2::new(-p.y, p.x));
    let rq = rayleigh_quotient_a(&a, &u).unwrap();
    assert!(rel(rq, 8.0) < 0.02, "{rq}");
    assert!(rq >= J1_PRIME_1 * J1_PRIME_1);
}

#[test]
fn zero_field_is_rejected() {
    let mesh = mesh(&square(), 0.2);
    let a = assemble_vector_a(&mesh, PAR).unwrap();
    assert!(rayleigh_quotient_a(&a, &VectorField::zeros(mesh.n_vertices())).is_err());
}

#[test]
fn constraint_is_exact_and_form_is_nonnegative() {
    for (d, h) in [(disk(), 0.1), (lip_triangle(), 0.05), (ellipse(), 0.15)] {
        let mesh = mesh(&d, h);
        let a = assemble_vector_a(&mesh, PAR).unwrap();
        assert_eq!(a.form.max_asymmetry(), 0.0);
        assert_eq!(a.mass.max_asymmetry(), 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let x: Vec<f64> = (0..a.n_dofs()).map(|_| rng.random_range(-1.0..1.0)).collect();
            assert!(a.form.quad_form(&x) >= 0.0);
            let u = a.to_vector_field(&x);
            for b in mesh.boundary_vertices() {
                match b.normal {
                    Some(n) => assert!(u.at(b.vertex).dot(n).abs() < 1e-14),
                    None => assert_eq!(u.at(b.vertex), Vec2::ZERO),
                }
            }
        }
    }
}

#[test]
fn min_principle_under_refinement() {
    // R(lift ∇ψ) for ψ = cos πx approaches π² from above as the grid is regenerated at h/2.
    let mut prev = f64::INFINITY;
    for h in [0.1, 0.05, 0.025] {
        let m = mesh(&square(), h);
        let a = assemble_vector_a(&m, PAR).unwrap();
        let u = lift_gradient(&m, &interpolate(&m, |p| (PI * p.x).cos()), PAR);
        let rq = rayleigh_quotient_a(&a, &u).unwrap();
        assert!(rq > PI * PI);
        let err = rel(rq, PI * PI);
        assert!(err < 0.3 * prev, "{err} {prev}");
        prev = err;
    }
}

#[test]
fn degenerate_triangle_is_an_error() {
    // Vertex 4 sits 1e-17 above the bottom edge, so triangle (0, 1, 4) is a sliver.
    let pts =
        vec![Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(1.0, 1.0), Vec2::new(0.0, 1.0), Vec2::new(0.5, 1e-17)];
    let tris = vec![[0, 1, 4], [0, 4, 3], [4, 1, 2], [4, 2, 3]];
    let m = Mesh::from_triangulation(pts, tris, &square()).unwrap();
    assert!(assemble_scalar(&m, BoundaryCondition::Neumann, PAR).is_err());
    assert!(assemble_vector_a(&m, PAR).is_err());
}
