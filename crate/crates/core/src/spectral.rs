//! Numerical checks of the spectral identities linking the vector operator `A`
//! to the scalar Neumann and Dirichlet Laplacians.
//!
//! * the positive spectrum of `A` is the merged Neumann/Dirichlet list;
//! * eigenfields split into gradients (curl-free, Neumann type) and
//!   perpendicular gradients (divergence-free, Dirichlet type);
//! * `∇ψ` and `∇⊥φ` are (approximate) eigenfields of `A`;
//! * `μ₂ < λ₁`.

use crate::eigensolve::{smallest_eigenpairs, EigenOptions, Spectrum};
use crate::error::{Error, Result};
use crate::fem::{
    assemble_scalar, assemble_vector_a, boundary_normal_trace, curl_div, gradient_field, lift_gradient,
    lift_perp_gradient, rayleigh_quotient_a, AssembledSystem, BoundaryCondition, VectorField,
};
use crate::geometry::Domain;
use crate::mesh::Mesh;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

/// Eigenvalues at or below this are treated as the constant Neumann mode.
pub const ZERO_MODE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    Neumann,
    Dirichlet,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReferenceEigenvalue {
    pub value: f64,
    pub source: Source,
    /// Position in the positive part of the source spectrum.
    pub index: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Match {
    pub a_index: usize,
    pub reference_index: usize,
    pub relative_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnionReport {
    pub domain: String,
    pub m: usize,
    pub tolerance: f64,
    pub reference: Vec<ReferenceEigenvalue>,
    pub computed: Vec<f64>,
    pub matching: Vec<Match>,
    pub max_relative_gap: f64,
    pub unmatched_a: Vec<usize>,
    pub unmatched_reference: Vec<usize>,
    pub passed: bool,
}

/// Neumann, Dirichlet and `A` spectra of one mesh.
#[derive(Debug, Clone)]
pub struct Spectra {
    pub neumann: Spectrum,
    pub dirichlet: Spectrum,
    pub a: Spectrum,
    pub a_system: AssembledSystem,
}

impl Spectra {
    /// Neumann eigenvalues above the zero mode.
    pub fn positive_neumann(&self) -> Vec<(usize, f64)> {
        self.neumann.values().into_iter().enumerate().filter(|&(_, v)| v > ZERO_MODE_TOL).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub eigen: EigenOptions,
    /// Maximum relative gap for a matched pair.
    pub union_tol: f64,
    /// Extra eigenpairs beyond `m` so that clusters at the cut are complete.
    pub pad: usize,
    pub thresholds: Thresholds,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { eigen: EigenOptions::default(), union_tol: 2e-2, pad: 4, thresholds: Thresholds::default() }
    }
}

/// Classification cut-offs on `r = curl / (curl + div)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub neumann_max: f64,
    pub dirichlet_min: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds { neumann_max: 0.2, dirichlet_min: 0.8 }
    }
}

/// Solves the three eigenproblems (concurrently when parallel).
pub fn compute_spectra(
    mesh: &Mesh,
    k_neumann: usize,
    k_dirichlet: usize,
    k_a: usize,
    opts: &EigenOptions,
) -> Result<Spectra> {
    let exec = opts.exec;
    let ((neumann, dirichlet), a) = exec.join(
        || {
            exec.join(
                || {
                    let s = assemble_scalar(mesh, BoundaryCondition::Neumann, exec)?;
                    smallest_eigenpairs(&s, k_neumann, opts)
                },
                || {
                    let s = assemble_scalar(mesh, BoundaryCondition::Dirichlet, exec)?;
                    smallest_eigenpairs(&s, k_dirichlet, opts)
                },
            )
        },
        || {
            let s = assemble_vector_a(mesh, exec)?;
            smallest_eigenpairs(&s, k_a, opts).map(|sp| (sp, s))
        },
    );
    let (a, a_system) = a?;
    Ok(Spectra { neumann: neumann?, dirichlet: dirichlet?, a, a_system })
}

/// Compares the `m` smallest eigenvalues of `A` with the merged positive
/// Neumann and Dirichlet eigenvalues, matched in order.
pub fn verify_union(domain: &Domain, mesh: &Mesh, m: usize, opts: &VerifyOptions) -> Result<(UnionReport, Spectra)> {
    if m < 4 {
        return Err(Error::InvalidInput(format!("union check needs m >= 4, got {m}")));
    }
    // The reference list draws on the Neumann and Dirichlet problems jointly.
    let interior = (0..mesh.n_vertices()).filter(|&v| !mesh.is_boundary(v)).count();
    let free = mesh.n_vertices() + interior;
    if free < 40 * m {
        return Err(Error::Resolution(format!(
            "{free} free Neumann plus Dirichlet DOFs cannot resolve {m} eigenvalues (need at least {})",
            40 * m
        )));
    }
    let k = m + opts.pad;
    let spectra = compute_spectra(mesh, k + 1, k, k, &opts.eigen)?;
    let report = union_report(&domain.label, &spectra, m, opts.union_tol)?;
    Ok((report, spectra))
}

pub fn merged_reference(spectra: &Spectra) -> Vec<ReferenceEigenvalue> {
    let mut reference: Vec<ReferenceEigenvalue> = spectra
        .positive_neumann()
        .into_iter()
        .enumerate()
        .map(|(index, (_, value))| ReferenceEigenvalue { value, source: Source::Neumann, index })
        .chain(spectra.dirichlet.values().into_iter().enumerate().map(|(index, value)| ReferenceEigenvalue {
            value,
            source: Source::Dirichlet,
            index,
        }))
        .collect();
    reference.sort_by(|a, b| a.value.total_cmp(&b.value));
    reference
}

pub fn union_report(label: &str, spectra: &Spectra, m: usize, tol: f64) -> Result<UnionReport> {
    let reference = merged_reference(spectra);
    let computed = spectra.a.values();
    if reference.len() < m || computed.len() < m {
        return Err(Error::Resolution(format!(
            "reference list has {} entries and A spectrum {}, need {m}",
            reference.len(),
            computed.len()
        )));
    }
    let mut matching = Vec::with_capacity(m);
    let (mut unmatched_a, mut unmatched_reference) = (Vec::new(), Vec::new());
    let mut max_gap: f64 = 0.0;
    for i in 0..m {
        let gap = (computed[i] - reference[i].value).abs() / reference[i].value.abs();
        max_gap = max_gap.max(gap);
        if gap <= tol {
            matching.push(Match { a_index: i, reference_index: i, relative_gap: gap });
        } else {
            unmatched_a.push(i);
            unmatched_reference.push(i);
        }
    }
    let passed = unmatched_a.is_empty() && max_gap <= tol;
    Ok(UnionReport {
        domain: label.to_string(),
        m,
        tolerance: tol,
        reference,
        computed,
        matching,
        max_relative_gap: max_gap,
        unmatched_a,
        unmatched_reference,
        passed,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldType {
    NeumannType,
    DirichletType,
    Mixed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldClass {
    pub index: usize,
    pub eigenvalue: f64,
    pub cluster: usize,
    pub curl_norm: f64,
    pub div_norm: f64,
    pub ratio: f64,
    pub label: FieldType,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterCheck {
    pub indices: Vec<usize>,
    /// False when the cluster may continue past the computed range.
    pub complete: bool,
    pub neumann_type: usize,
    pub dirichlet_type: usize,
    pub mixed: usize,
    pub reference_neumann: usize,
    pub reference_dirichlet: usize,
    pub consistent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub thresholds: Thresholds,
    pub fields: Vec<FieldClass>,
    pub clusters: Vec<ClusterCheck>,
    pub passed: bool,
}

pub fn label_for(ratio: f64, t: &Thresholds) -> FieldType {
    if ratio <= t.neumann_max {
        FieldType::NeumannType
    } else if ratio >= t.dirichlet_min {
        FieldType::DirichletType
    } else {
        FieldType::Mixed
    }
}

/// Labels every computed `A` eigenfield by its curl ratio. Inside a cluster the
/// fields are first rotated to the basis solving `C y = ρ (C + D) y`, where
/// `C` and `D` are the curl and divergence Gram matrices of the cluster, so
/// the labels do not depend on the arbitrary basis returned by the solver.
/// Cluster checks compare label counts with the provenance counts of the
/// reference entries at the same positions; only clusters within the first
/// `m` entries decide `passed`.
pub fn classify_eigenfields(spectra: &Spectra, mesh: &Mesh, m: usize, thresholds: &Thresholds) -> Classification {
    let exec = crate::par::Execution::default();
    let a = &spectra.a;
    let reference = merged_reference(spectra);
    let fields: Vec<VectorField> = a.pairs.iter().map(|p| spectra.a_system.to_vector_field(&p.vector)).collect();
    let per_tri: Vec<(Vec<f64>, Vec<f64>)> = fields
        .iter()
        .map(|u| {
            let cd = curl_div(mesh, u, exec);
            (cd.curl, cd.div)
        })
        .collect();
    let areas: Vec<f64> = (0..mesh.n_triangles()).map(|t| mesh.triangle_area(t)).collect();
    let gram = |rows: Vec<&Vec<f64>>| {
        DMatrix::from_fn(rows.len(), rows.len(), |i, j| {
            areas.iter().zip(rows[i].iter().zip(rows[j])).map(|(w, (p, q))| w * p * q).sum::<f64>()
        })
    };
    let mut out_fields = Vec::with_capacity(a.len());
    let mut clusters = Vec::new();
    for (cid, idx) in a.clusters.iter().enumerate() {
        let c = gram(idx.iter().map(|&i| &per_tri[i].0).collect());
        let d = gram(idx.iter().map(|&i| &per_tri[i].1).collect());
        let ratios: Vec<(f64, f64, f64)> = if idx.len() == 1 {
            let (cn, dn) = (c[(0, 0)].sqrt(), d[(0, 0)].sqrt());
            vec![(cn, dn, cn / (cn + dn))]
        } else {
            helmholtz_split(&c, &d)
        };
        let mut counts = [0usize; 3];
        for (slot, &i) in idx.iter().enumerate() {
            let (curl_norm, div_norm, ratio) = ratios[slot];
            let label = label_for(ratio, thresholds);
            counts[label as usize] += 1;
            out_fields.push(FieldClass {
                index: i,
                eigenvalue: a.pairs[i].value,
                cluster: cid,
                curl_norm,
                div_norm,
                ratio,
                label,
            });
        }
        let complete = *idx.last().unwrap() + 1 < a.len();
        let refs = idx.iter().filter_map(|&i| reference.get(i));
        let (rn, rd) = refs.fold((0, 0), |(n, d), r| match r.source {
            Source::Neumann => (n + 1, d),
            Source::Dirichlet => (n, d + 1),
        });
        let consistent = counts[0] == rn && counts[1] == rd && counts[2] == 0;
        clusters.push(ClusterCheck {
            indices: idx.clone(),
            complete,
            neumann_type: counts[0],
            dirichlet_type: counts[1],
            mixed: counts[2],
            reference_neumann: rn,
            reference_dirichlet: rd,
            consistent,
        });
    }
    let passed = clusters.iter().filter(|c| c.indices[0] < m).all(|c| c.complete && c.consistent);
    Classification { thresholds: *thresholds, fields: out_fields, clusters, passed }
}

/// Solves `C y = ρ (C + D) y`; returns `(curl, div, ratio)` per rotated field,
/// ordered by increasing `ρ`.
fn helmholtz_split(c: &DMatrix<f64>, d: &DMatrix<f64>) -> Vec<(f64, f64, f64)> {
    let s = c + d;
    let n = s.nrows();
    let Some(chol) = nalgebra::Cholesky::new(s.clone()) else {
        return (0..n).map(|i| (c[(i, i)].sqrt(), d[(i, i)].sqrt(), 0.5)).collect();
    };
    let l = chol.l();
    let mut w = c.clone();
    l.solve_lower_triangular_mut(&mut w);
    let mut wt = w.transpose();
    l.solve_lower_triangular_mut(&mut wt);
    let sym = (&wt + wt.transpose()) * 0.5;
    let eig = nalgebra::SymmetricEigen::new(sym);
    let mut rho: Vec<f64> = eig.eigenvalues.iter().map(|r| r.clamp(0.0, 1.0)).collect();
    rho.sort_by(f64::total_cmp);
    rho.into_iter()
        .map(|r| {
            let (cn, dn) = (r.sqrt(), (1.0 - r).sqrt());
            (cn, dn, cn / (cn + dn))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TranslationReport {
    pub eigenvalue: f64,
    pub rayleigh_quotient: f64,
    /// `|R(u) − eigenvalue| / eigenvalue`.
    pub relative_defect: f64,
    /// Curl share for `∇ψ`, divergence share for `∇⊥φ`; ideally zero.
    pub helmholtz_defect: f64,
    /// Relative normal trace of the recovered field on the boundary.
    pub normal_trace_defect: f64,
}

/// Checks that the recovered `∇ψ` (Neumann) or `∇⊥φ` (Dirichlet) has Rayleigh
/// quotient `eigenvalue` for the vector form. The field should be an
/// eigenfunction with small residual; that is the caller's responsibility.
pub fn verify_translation(
    mesh: &Mesh,
    a_system: &AssembledSystem,
    f: &[f64],
    eigenvalue: f64,
    bc: BoundaryCondition,
) -> Result<TranslationReport> {
    let exec = crate::par::Execution::default();
    let g = gradient_field(mesh, f, exec);
    let gmax = g.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let fmax = f.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if !(gmax > 1e-12 * fmax / mesh.h_max().max(f64::MIN_POSITIVE)) || gmax == 0.0 {
        return Err(Error::TrivialEigenfunction);
    }
    let u = match bc {
        BoundaryCondition::Neumann => lift_gradient(mesh, f, exec),
        BoundaryCondition::Dirichlet => lift_perp_gradient(mesh, f, exec),
    };
    let rq = rayleigh_quotient_a(a_system, &u)?;
    let cd = curl_div(mesh, &u, exec);
    let total = cd.curl_l2 + cd.div_l2;
    let helmholtz_defect = match bc {
        BoundaryCondition::Neumann => cd.curl_l2 / total,
        BoundaryCondition::Dirichlet => cd.div_l2 / total,
    };
    Ok(TranslationReport {
        eigenvalue,
        rayleigh_quotient: rq,
        relative_defect: (rq - eigenvalue).abs() / eigenvalue.abs(),
        helmholtz_defect,
        normal_trace_defect: boundary_normal_trace(mesh, &u),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FriedlanderReport {
    pub mu2: f64,
    pub lambda1: f64,
    pub holds: bool,
}

/// `μ₂ < λ₁` with a margin of `1e-10`.
pub fn check_friedlander(neumann: &Spectrum, dirichlet: &Spectrum) -> Result<FriedlanderReport> {
    let mu2 = neumann
        .values()
        .into_iter()
        .find(|&v| v > ZERO_MODE_TOL)
        .ok_or_else(|| Error::Resolution("no positive Neumann eigenvalue computed".into()))?;
    let lambda1 =
        *dirichlet.values().first().ok_or_else(|| Error::Resolution("no Dirichlet eigenvalue computed".into()))?;
    Ok(FriedlanderReport { mu2, lambda1, holds: mu2 < lambda1 - 1e-10 })
}

/// `|(u, w)_M| / (‖u‖_M ‖w‖_M)` for two coefficient vectors of the `A` system.
pub fn mass_cosine(system: &AssembledSystem, x: &[f64], y: &[f64]) -> f64 {
    let b = system.mass.bilinear(x, y);
    (b / (system.mass.quad_form(x) * system.mass.quad_form(y)).sqrt()).abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_follow_thresholds() {
        let t = Thresholds::default();
        assert_eq!(label_for(0.0, &t), FieldType::NeumannType);
        assert_eq!(label_for(0.2, &t), FieldType::NeumannType);
        assert_eq!(label_for(0.5, &t), FieldType::Mixed);
        assert_eq!(label_for(0.8, &t), FieldType::DirichletType);
    }

    #[test]
    fn split_of_a_rotated_pair() {
        // Two fields: pure curl and pure divergence, mixed by a rotation.
        let (c0, d0) = (
            DMatrix::from_row_slice(2, 2, &[4.0, 0.0, 0.0, 0.0]),
            DMatrix::from_row_slice(2, 2, &[0.0, 0.0, 0.0, 9.0]),
        );
        let r = nalgebra::Rotation2::new(0.7).into_inner();
        let rt = r.transpose();
        let (c, d) = (rt * c0 * r, rt * d0 * r);
        let split = helmholtz_split(
            &DMatrix::from_iterator(2, 2, c.iter().copied()),
            &DMatrix::from_iterator(2, 2, d.iter().copied()),
        );
        assert!(split[0].2 < 1e-6, "{split:?}");
        assert!(split[1].2 > 1.0 - 1e-6, "{split:?}");
    }
}
