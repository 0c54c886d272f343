#![allow(dead_code)]

use hotspot_lab::geometry::{named_polygon, CanonicalKind, Domain};
use hotspot_lab::mesh::{generate_mesh, Mesh, MeshOptions};
use std::f64::consts::PI;

pub fn mesh(d: &Domain, h: f64) -> Mesh {
    generate_mesh(d, h, &MeshOptions::default()).unwrap()
}

pub fn square() -> Domain {
    Domain::canonical(CanonicalKind::Rectangle(1.0, 1.0)).unwrap()
}

/// `[−½, ½]²`, symmetric about both axes.
pub fn centered_square() -> Domain {
    square().translated((-0.5, -0.5))
}

pub fn disk() -> Domain {
    Domain::canonical(CanonicalKind::Disk(1.0)).unwrap()
}

pub fn ellipse() -> Domain {
    Domain::canonical(CanonicalKind::Ellipse(2.0, 1.0)).unwrap()
}

pub fn lip_triangle() -> Domain {
    Domain::polygon(named_polygon("lip_triangle").unwrap(), "lip_triangle").unwrap()
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// `Jₙ(x) = (1/π) ∫₀^π cos(nτ − x sin τ) dτ`. The integrand is smooth and
/// periodic, so the trapezoid rule converges geometrically.
pub fn bessel_j(n: i32, x: f64) -> f64 {
    let m = 200;
    let mut s = 0.0;
    for k in 0..=m {
        let t = PI * k as f64 / m as f64;
        let w = if k == 0 || k == m { 0.5 } else { 1.0 };
        s += w * (n as f64 * t - x * t.sin()).cos();
    }
    s / m as f64
}

pub fn bessel_j_prime(n: i32, x: f64) -> f64 {
    if n == 0 {
        -bessel_j(1, x)
    } else {
        0.5 * (bessel_j(n - 1, x) - bessel_j(n + 1, x))
    }
}

fn roots(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> Vec<f64> {
    let step = 1e-2;
    let mut out = Vec::new();
    let mut a = lo;
    while a < hi {
        let b = a + step;
        let (fa, fb) = (f(a), f(b));
        if fa * fb < 0.0 {
            let (mut x0, mut x1, mut f0) = (a, b, fa);
            for _ in 0..200 {
                let mid = 0.5 * (x0 + x1);
                let fm = f(mid);
                if fm * f0 <= 0.0 {
                    x1 = mid;
                } else {
                    x0 = mid;
                    f0 = fm;
                }
            }
            out.push(0.5 * (x0 + x1));
        }
        a = b;
    }
    out
}

/// Positive zeros of `Jₙ` below `hi`.
pub fn bessel_zeros(n: i32, hi: f64) -> Vec<f64> {
    roots(|x| bessel_j(n, x), 0.5, hi)
}

/// Positive zeros of `Jₙ′` below `hi`.
pub fn bessel_prime_zeros(n: i32, hi: f64) -> Vec<f64> {
    roots(|x| bessel_j_prime(n, x), 0.5, hi)
}

/// Unit-disk eigenvalues below `bound`, with multiplicity, from the oracle.
pub fn disk_spectrum(neumann: bool, bound: f64) -> Vec<f64> {
    let mut out = Vec::new();
    for n in 0..12 {
        let z = if neumann { bessel_prime_zeros(n, bound.sqrt()) } else { bessel_zeros(n, bound.sqrt()) };
        for j in z {
            let mult = if n == 0 { 1 } else { 2 };
            out.extend(std::iter::repeat_n(j * j, mult));
        }
    }
    out.sort_by(f64::total_cmp);
    out
}

/// Frozen oracle outputs, checked against the root finder in `bessel_oracle`.
pub const J1_PRIME_1: f64 = 1.841_183_781_340_659_3;
pub const J0_1: f64 = 2.404_825_557_695_773;
pub const J1_1: f64 = 3.831_705_970_207_512_3;
pub const J2_PRIME_1: f64 = 3.054_236_928_227_140_4;
