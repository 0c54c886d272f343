//! Subcommand drivers and the error-to-exit-code mapping.

use crate::config::RunConfig;
use crate::output::{fmt12, to_json, write_atomic};
use crate::spec::parse_domain_spec;
use crate::Common;
use hotspot_lab::eigensolve::smallest_eigenpairs;
use hotspot_lab::fem::{assemble_scalar, BoundaryCondition};
use hotspot_lab::geometry::{is_lip_domain, Domain, Shape};
use hotspot_lab::hotspots::{analyze, lip_directions};
use hotspot_lab::mesh::io::format_mesh;
use hotspot_lab::mesh::{generate_mesh, Mesh, MeshOptions};
use hotspot_lab::spectral::{check_friedlander, classify_eigenfields, compute_spectra, verify_union};
use hotspot_lab::vtk::format_vtk;
use hotspot_lab::{Error, ErrorClass};
use serde::Serialize;
use std::fmt::Write as _;
use std::path::Path;

pub const EXIT_CHECK_FAILED: u8 = 1;
pub const EXIT_SOLVER: u8 = 2;
pub const EXIT_MESH: u8 = 3;
pub const EXIT_INPUT: u8 = 4;
pub const EXIT_NOT_LIP: u8 = 5;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure { code: EXIT_INPUT, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match (&e, e.class()) {
            // A vanishing eigenfunction is an analysis failure, not bad input.
            (Error::TrivialEigenfunction, _) => EXIT_SOLVER,
            (_, ErrorClass::Solver) => EXIT_SOLVER,
            (_, ErrorClass::Mesh) => EXIT_MESH,
            (_, ErrorClass::Geometry | ErrorClass::Input) => EXIT_INPUT,
        };
        Failure { code, message: e.to_string() }
    }
}

type Outcome = Result<u8, Failure>;

/// Everything a subcommand needs besides the configuration.
pub struct Context {
    pub domain: Domain,
    pub mesh: Mesh,
}

/// Loads and validates the configuration, builds the domain and the mesh, then
/// hands over to `command`. Nothing is written before the inputs are known good.
pub fn run(flags: &Common, command: impl FnOnce(&RunConfig, &Context) -> Outcome) -> Outcome {
    let mut cfg = RunConfig::load(flags.config.as_deref()).map_err(Failure::input)?;
    cfg.apply(flags);
    cfg.validate().map_err(Failure::input)?;
    let domain = parse_domain_spec(cfg.domain.as_deref().unwrap_or_default())?;
    let mesh = generate_mesh(&domain, cfg.h, &MeshOptions::default())?;
    std::fs::create_dir_all(&cfg.out).map_err(|e| Failure::input(format!("{}: {e}", cfg.out.display())))?;
    if cfg.export.mesh {
        write(&cfg.out, "mesh.txt", format_mesh(&mesh))?;
    }
    command(&cfg, &Context { domain, mesh })
}

fn write(dir: &Path, name: &str, contents: impl AsRef<[u8]>) -> Result<(), Failure> {
    let path = dir.join(name);
    write_atomic(&path, contents.as_ref()).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn json<T: Serialize>(value: &T) -> Result<String, Failure> {
    to_json(value).map_err(|e| Failure { code: EXIT_SOLVER, message: format!("serialization failed: {e}") })
}

pub fn spectrum(cfg: &RunConfig, ctx: &Context) -> Outcome {
    let s = compute_spectra(&ctx.mesh, cfg.m, cfg.m, cfg.m, &cfg.eigen())?;
    write(&cfg.out, "neumann.csv", s.neumann.to_csv())?;
    write(&cfg.out, "dirichlet.csv", s.dirichlet.to_csv())?;
    write(&cfg.out, "operator_a.csv", s.a.to_csv())?;
    Ok(0)
}

#[derive(Serialize)]
struct VerifyOutput<U, C, F> {
    domain: String,
    h: f64,
    h_max: f64,
    union: U,
    classification: C,
    friedlander: F,
    passed: bool,
}

pub fn verify(cfg: &RunConfig, ctx: &Context) -> Outcome {
    let opts = cfg.verify_options();
    let (union, spectra) = verify_union(&ctx.domain, &ctx.mesh, cfg.m, &opts)?;
    let classification = classify_eigenfields(&spectra, &ctx.mesh, cfg.m, &opts.thresholds);
    let friedlander = check_friedlander(&spectra.neumann, &spectra.dirichlet)?;
    let passed = union.passed && classification.passed && friedlander.holds;
    let report = VerifyOutput {
        domain: ctx.domain.label.clone(),
        h: cfg.h,
        h_max: ctx.mesh.h_max(),
        union,
        classification,
        friedlander,
        passed,
    };
    write(&cfg.out, "verify.json", json(&report)?)?;
    Ok(if passed { 0 } else { EXIT_CHECK_FAILED })
}

pub fn hotspots(cfg: &RunConfig, ctx: &Context, require_lip: bool, eps: Option<f64>) -> Outcome {
    let mut hcfg = cfg.hotspots;
    if let Some(e) = eps {
        if !(e > 0.0 && e.is_finite()) {
            return Err(Failure::input(format!("--eps must be positive, got {e}")));
        }
        hcfg.eps_critical = e;
    }
    if require_lip {
        let verdict = is_lip_domain(&ctx.domain, hcfg.lip_grid)?;
        if !verdict.is_lip {
            let why = verdict.reason.unwrap_or_else(|| "not a lip domain".into());
            return Err(Failure { code: EXIT_NOT_LIP, message: format!("{}: {why}", ctx.domain.label) });
        }
    }
    let system = assemble_scalar(&ctx.mesh, BoundaryCondition::Neumann, cfg.exec())?;
    let eigen = cfg.eigen();
    let limit = system.n_dofs().min(64);
    let mut k = cfg.m.max(4).min(limit);
    // More eigenpairs are requested until the second cluster is closed off.
    let report = loop {
        let neumann = smallest_eigenpairs(&system, k, &eigen)?;
        match analyze(&ctx.domain, &ctx.mesh, &neumann, &hcfg) {
            Err(Error::Resolution(_)) if k < limit => k = (2 * k).min(limit),
            r => break r?,
        }
    };
    write(&cfg.out, "hotspots.json", json(&report)?)?;
    if cfg.export.vtk {
        write(&cfg.out, "hotspots.vtk", format_vtk(&ctx.mesh, &report.psi2, &lip_directions())?)?;
    }
    Ok(if report.passed { 0 } else { EXIT_CHECK_FAILED })
}

/// `(μ₂, λ₁)` in closed form where available.
fn analytic_reference(domain: &Domain) -> Option<(f64, f64)> {
    const PI2: f64 = std::f64::consts::PI * std::f64::consts::PI;
    // First zeros of J₁′ and J₀.
    const J1P: f64 = 1.8411837813406593;
    const J0: f64 = 2.404825557695773;
    match *domain.shape() {
        Shape::Rectangle { width, height } => {
            Some((PI2 / width.max(height).powi(2), PI2 * (1.0 / (width * width) + 1.0 / (height * height))))
        }
        Shape::Disk { radius } => Some(((J1P / radius).powi(2), (J0 / radius).powi(2))),
        _ => None,
    }
}

struct Level {
    h: f64,
    mu2: f64,
    lambda1: f64,
    a1: f64,
}

pub fn convergence(cfg: &RunConfig, ctx: &Context) -> Outcome {
    let eigen = cfg.eigen();
    let mut levels = Vec::with_capacity(cfg.refinements + 1);
    let mut mesh = ctx.mesh.clone();
    for level in 0..=cfg.refinements {
        if level > 0 {
            mesh = mesh.refine_uniform(&ctx.domain)?;
        }
        let s = compute_spectra(&mesh, 4, 2, 2, &eigen)?;
        let f = check_friedlander(&s.neumann, &s.dirichlet)?;
        let a1 = *s.a.values().first().ok_or_else(|| Error::Resolution("no A eigenvalue computed".into()))?;
        levels.push(Level { h: mesh.h_max(), mu2: f.mu2, lambda1: f.lambda1, a1 });
    }

    let analytic = analytic_reference(&ctx.domain);
    let (reference, source) = match analytic {
        Some((mu2, lambda1)) => (Some([mu2, lambda1, mu2]), "analytic"),
        None => (extrapolate(&levels), "richardson"),
    };
    let mut csv = String::from("level,h,mu2,lambda1,a1,mu2_rel_err,lambda1_rel_err,a1_rel_err\n");
    for (i, l) in levels.iter().enumerate() {
        let _ = write!(csv, "{i},{},{},{},{}", fmt12(l.h), fmt12(l.mu2), fmt12(l.lambda1), fmt12(l.a1));
        for (v, r) in [l.mu2, l.lambda1, l.a1].into_iter().zip(reference.unwrap_or([f64::NAN; 3])) {
            if r.is_finite() {
                let _ = write!(csv, ",{}", fmt12((v - r).abs() / r.abs()));
            } else {
                csv.push(',');
            }
        }
        csv.push('\n');
    }
    let _ = writeln!(csv, "# reference {source}");
    if let Some(p) = fitted_order(&levels, analytic.map(|r| r.0)) {
        let _ = writeln!(csv, "# fitted order mu2 {}", fmt12(p));
    }
    write(&cfg.out, "convergence.csv", csv)?;
    Ok(0)
}

/// Order from three successive levels, `log(|v₀ − v₁| / |v₁ − v₂|) / log(h₁ / h₂)`.
fn difference_order(v: [f64; 3], h: [f64; 3]) -> Option<f64> {
    let (d0, d1) = ((v[0] - v[1]).abs(), (v[1] - v[2]).abs());
    (d0 > 0.0 && d1 > 0.0).then(|| (d0 / d1).ln() / (h[1] / h[2]).ln())
}

/// Richardson extrapolation from the two finest levels, with the order fitted
/// from the three finest when available and 2 otherwise.
fn extrapolate(levels: &[Level]) -> Option<[f64; 3]> {
    let n = levels.len();
    if n < 2 {
        return None;
    }
    let (c, f) = (&levels[n - 2], &levels[n - 1]);
    let ratio = c.h / f.h;
    let pick = |g: fn(&Level) -> f64| {
        let p = (n >= 3)
            .then(|| difference_order([g(&levels[n - 3]), g(c), g(f)], [levels[n - 3].h, c.h, f.h]))
            .flatten()
            .filter(|p| p.is_finite() && *p > 0.5)
            .unwrap_or(2.0);
        g(f) + (g(f) - g(c)) / (ratio.powf(p) - 1.0)
    };
    Some([pick(|l| l.mu2), pick(|l| l.lambda1), pick(|l| l.a1)])
}

/// Least-squares slope of `log err` against `log h` for `μ₂` when the exact
/// value is known, otherwise the difference-based order of the three finest levels.
fn fitted_order(levels: &[Level], exact_mu2: Option<f64>) -> Option<f64> {
    if levels.len() < 2 {
        return None;
    }
    match exact_mu2 {
        Some(r) => {
            let pts: Vec<(f64, f64)> = levels
                .iter()
                .map(|l| (l.h.ln(), ((l.mu2 - r).abs() / r).ln()))
                .filter(|(_, e)| e.is_finite())
                .collect();
            if pts.len() < 2 {
                return None;
            }
            let n = pts.len() as f64;
            let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / n, pts.iter().map(|p| p.1).sum::<f64>() / n);
            let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
            let sxx: f64 = pts.iter().map(|(x, _)| (x - mx).powi(2)).sum();
            (sxx > 0.0).then(|| sxy / sxx)
        }
        None => {
            let n = levels.len();
            if n < 3 {
                return None;
            }
            let l = &levels[n - 3..];
            difference_order([l[0].mu2, l[1].mu2, l[2].mu2], [l[0].h, l[1].h, l[2].h])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lv(h: f64, v: f64) -> Level {
        Level { h, mu2: v, lambda1: v, a1: v }
    }

    #[test]
    fn exact_second_order_sequences() {
        // v(h) = 1 + h², so both estimators see order 2 and the limit 1.
        let levels: Vec<Level> = [0.4, 0.2, 0.1].iter().map(|&h| lv(h, 1.0 + h * h)).collect();
        assert!((fitted_order(&levels, Some(1.0)).unwrap() - 2.0).abs() < 1e-12);
        assert!((fitted_order(&levels, None).unwrap() - 2.0).abs() < 1e-12);
        assert!((extrapolate(&levels).unwrap()[0] - 1.0).abs() < 1e-12);
        assert!(fitted_order(&levels[..1], Some(1.0)).is_none());
        assert!(extrapolate(&levels[..1]).is_none());
    }

    #[test]
    fn exit_codes_follow_error_class() {
        let code = |e: Error| Failure::from(e).code;
        assert_eq!(code(Error::Resolution("x".into())), EXIT_SOLVER);
        assert_eq!(code(Error::TrivialEigenfunction), EXIT_SOLVER);
        assert_eq!(code(Error::Mesh("x".into())), EXIT_MESH);
        assert_eq!(code(Error::Parse { line: 1, msg: "x".into() }), EXIT_INPUT);
        assert_eq!(code(Error::Domain("x".into())), EXIT_INPUT);
    }
}
