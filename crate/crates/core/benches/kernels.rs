//! Sequential vs parallel execution of the data-parallel kernels.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hotspot_lab::eigensolve::{smallest_eigenpairs, EigenOptions};
use hotspot_lab::fem::{assemble_scalar, assemble_vector_a, curl_div, interpolate, lift_gradient, BoundaryCondition};
use hotspot_lab::geometry::{CanonicalKind, Domain};
use hotspot_lab::mesh::{generate_mesh, Mesh, MeshOptions};
use hotspot_lab::Execution;
use std::hint::black_box;

const POLICIES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn disk(h: f64) -> Mesh {
    let d = Domain::canonical(CanonicalKind::Disk(1.0)).unwrap();
    generate_mesh(&d, h, &MeshOptions::default()).unwrap()
}

fn assembly(c: &mut Criterion) {
    let mut g = c.benchmark_group("assemble_vector_a");
    for h in [0.05, 0.02] {
        let m = disk(h);
        for (name, exec) in POLICIES {
            g.bench_with_input(BenchmarkId::new(name, m.n_triangles()), &m, |b, m| {
                b.iter(|| assemble_vector_a(black_box(m), exec).unwrap())
            });
        }
    }
    g.finish();
}

fn eigensolve(c: &mut Criterion) {
    let mut g = c.benchmark_group("neumann_eigensolve");
    g.sample_size(10);
    let m = disk(0.04);
    let s = assemble_scalar(&m, BoundaryCondition::Neumann, Execution::Parallel).unwrap();
    for (name, exec) in POLICIES {
        let opts = EigenOptions { exec, ..EigenOptions::default() };
        g.bench_function(BenchmarkId::new(name, s.n_dofs()), |b| {
            b.iter(|| smallest_eigenpairs(black_box(&s), 6, &opts).unwrap())
        });
    }
    g.finish();
}

fn post_processing(c: &mut Criterion) {
    let mut g = c.benchmark_group("gradient_recovery_and_curl_div");
    let m = disk(0.02);
    let psi = interpolate(&m, |p| p.x * (1.0 - p.norm_sq()));
    for (name, exec) in POLICIES {
        g.bench_function(BenchmarkId::new(name, m.n_vertices()), |b| {
            b.iter(|| {
                let u = lift_gradient(black_box(&m), &psi, exec);
                curl_div(&m, &u, exec)
            })
        });
    }
    g.finish();
}

criterion_group!(benches, assembly, eigensolve, post_processing);
criterion_main!(benches);
