//! Post-processing of the second Neumann eigenfunction: where its extrema sit,
//! whether it has interior critical points, and the monotonicity and symmetry
//! properties that force the extrema to the boundary.

use crate::eigensolve::{cluster, Spectrum};
use crate::error::{Error, Result};
use crate::fem::{gradient_field, lift_gradient, mass_inner};
use crate::geometry::{is_lip_domain, normals_in_opposite_quadrants, Domain, LipVerdict, Vec2, DEFAULT_LIP_GRID};
use crate::mesh::{Axis, Mesh};
use crate::par::Execution;
use crate::spectral::ZERO_MODE_TOL;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_1_SQRT_2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct HotspotConfig {
    /// Relative gradient below which an interior vertex is a critical candidate.
    pub eps_critical: f64,
    /// Interior means at least `collar_factor · h` away from the boundary.
    pub collar_factor: f64,
    /// Required share of triangles with a positive directional derivative.
    pub fraction_threshold: f64,
    pub parity_threshold: f64,
    /// Nodal edges of the cross derivative must lie within `nodal_factor · h` of an axis.
    pub nodal_factor: f64,
    /// A derivative with `‖∂_d ψ‖ / ‖∇ψ‖ ≤ degenerate_tol` is treated as identically zero.
    pub degenerate_tol: f64,
    pub cluster_tol: f64,
    pub lip_grid: usize,
    pub quadrant_samples: usize,
}

impl Default for HotspotConfig {
    fn default() -> Self {
        HotspotConfig {
            eps_critical: 0.05,
            collar_factor: 2.0,
            fraction_threshold: 0.99,
            parity_threshold: 0.05,
            nodal_factor: 2.0,
            degenerate_tol: 5e-2,
            cluster_tol: 1e-2,
            lip_grid: DEFAULT_LIP_GRID,
            quadrant_samples: 64,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extremum {
    pub vertex: usize,
    pub point: Vec2,
    pub value: f64,
    pub on_boundary: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extrema {
    pub max: Extremum,
    pub min: Extremum,
    /// `(max over ∂Ω − max over interior) / range`; positive when the boundary wins.
    pub max_boundary_margin: f64,
    /// `(min over interior − min over ∂Ω) / range`; positive when the boundary wins.
    pub min_boundary_margin: f64,
}

pub fn locate_extrema(mesh: &Mesh, psi: &[f64]) -> Result<Extrema> {
    check_len(mesh, psi)?;
    let pick = |better: fn(f64, f64) -> bool, filter: &dyn Fn(usize) -> bool| {
        (0..psi.len()).filter(|&v| filter(v)).fold(None::<usize>, |best, v| match best {
            Some(b) if !better(psi[v], psi[b]) => Some(b),
            _ => Some(v),
        })
    };
    let gt = |a: f64, b: f64| a > b;
    let lt = |a: f64, b: f64| a < b;
    let imax = pick(gt, &|_| true).ok_or_else(|| Error::InvalidInput("empty field".into()))?;
    let imin = pick(lt, &|_| true).unwrap();
    let range = psi[imax] - psi[imin];
    if !(range > 1e-12 * psi[imax].abs().max(psi[imin].abs())) {
        return Err(Error::InvalidInput("field is constant".into()));
    }
    let bmax = pick(gt, &|v| mesh.is_boundary(v)).unwrap();
    let bmin = pick(lt, &|v| mesh.is_boundary(v)).unwrap();
    let inner = |f: fn(f64, f64) -> bool| pick(f, &|v| !mesh.is_boundary(v));
    let ext =
        |v: usize| Extremum { vertex: v, point: mesh.vertices()[v], value: psi[v], on_boundary: mesh.is_boundary(v) };
    let (max_margin, min_margin) = match (inner(gt), inner(lt)) {
        (Some(a), Some(b)) => ((psi[bmax] - psi[a]) / range, (psi[b] - psi[bmin]) / range),
        _ => (1.0, 1.0),
    };
    Ok(Extrema { max: ext(imax), min: ext(imin), max_boundary_margin: max_margin, min_boundary_margin: min_margin })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalCandidate {
    pub vertex: usize,
    pub point: Vec2,
    /// `|∇ψ(v)| / max |∇ψ|` with the recovered nodal gradient.
    pub relative_gradient: f64,
}

/// Interior vertices at distance at least `collar` from the boundary whose
/// recovered gradient is below `eps · max |∇ψ|`.
pub fn interior_critical_scan(mesh: &Mesh, psi: &[f64], eps: f64, collar: f64) -> Result<Vec<CriticalCandidate>> {
    check_len(mesh, psi)?;
    let g = lift_gradient(mesh, psi, Execution::default());
    let norms: Vec<f64> = (0..psi.len()).map(|v| g.at(v).norm()).collect();
    let gmax = norms.iter().copied().fold(0.0, f64::max);
    if gmax == 0.0 {
        return Err(Error::InvalidInput("field is constant".into()));
    }
    Ok((0..psi.len())
        .filter(|&v| !mesh.is_boundary(v) && norms[v] < eps * gmax)
        .filter(|&v| mesh.distance_to_boundary(mesh.vertices()[v]) >= collar)
        .map(|v| CriticalCandidate { vertex: v, point: mesh.vertices()[v], relative_gradient: norms[v] / gmax })
        .collect())
}

/// Index of `μ₂` and the size of its cluster.
pub fn simplicity_check(neumann: &Spectrum, cluster_tol: f64) -> Result<(usize, usize)> {
    let values = neumann.values();
    let first = values
        .iter()
        .position(|&v| v > ZERO_MODE_TOL)
        .ok_or_else(|| Error::Resolution("no positive Neumann eigenvalue computed".into()))?;
    let groups = cluster(&values, cluster_tol);
    let group = groups.iter().find(|g| g.contains(&first)).unwrap();
    if *group.last().unwrap() + 1 == values.len() {
        return Err(Error::Resolution("the second Neumann cluster reaches the last computed eigenpair".into()));
    }
    Ok((first, group.len()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DirectionalCheck {
    pub direction: Vec2,
    pub positive_fraction: f64,
    /// Minimum over interior triangles of `∂_d ψ / max |∇ψ|`.
    pub min_normalized: f64,
    /// `‖∂_d ψ‖ / ‖∇ψ‖`.
    pub l2_ratio: f64,
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirectionalReport {
    pub checks: Vec<DirectionalCheck>,
    pub flipped: bool,
    /// Among `e₁`, `e₂`, `(e₁ ± e₂)/√2`, the directions along which `ψ` is constant.
    pub degenerate_axes: Vec<Vec2>,
    pub passed: bool,
}

pub fn lip_directions() -> [Vec2; 2] {
    [Vec2::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2), Vec2::new(FRAC_1_SQRT_2, -FRAC_1_SQRT_2)]
}

struct TriangleGradients {
    grads: Vec<Vec2>,
    areas: Vec<f64>,
    interior: Vec<bool>,
    gmax: f64,
}

impl TriangleGradients {
    fn new(mesh: &Mesh, psi: &[f64], collar: f64) -> Result<Self> {
        check_len(mesh, psi)?;
        let exec = Execution::default();
        let grads = gradient_field(mesh, psi, exec);
        let gmax = grads.iter().map(|g| g.norm()).fold(0.0, f64::max);
        if gmax == 0.0 {
            return Err(Error::InvalidInput("field is constant".into()));
        }
        let areas = (0..mesh.n_triangles()).map(|t| mesh.triangle_area(t)).collect();
        let interior = exec.map(mesh.n_triangles(), |t| mesh.distance_to_boundary(mesh.centroid(t)) >= collar);
        Ok(TriangleGradients { grads, areas, interior, gmax })
    }

    fn mean(&self, d: Vec2) -> f64 {
        self.grads.iter().zip(&self.areas).map(|(g, a)| a * g.dot(d)).sum()
    }

    /// `‖∂_d ψ‖ / ‖∇ψ‖` in L².
    fn l2_ratio(&self, d: Vec2) -> f64 {
        let (num, den) = self
            .grads
            .iter()
            .zip(&self.areas)
            .fold((0.0, 0.0), |(n, m), (g, a)| (n + a * g.dot(d).powi(2), m + a * g.norm_sq()));
        (num / den).sqrt()
    }

    fn is_degenerate(&self, d: Vec2, tol: f64) -> bool {
        self.l2_ratio(d) <= tol
    }

    fn positive_fraction(&self, d: Vec2, sign: f64) -> f64 {
        self.grads.iter().filter(|g| sign * g.dot(d) > 0.0).count() as f64 / self.grads.len() as f64
    }

    fn min_normalized(&self, d: Vec2, sign: f64) -> f64 {
        self.grads
            .iter()
            .zip(&self.interior)
            .filter(|(_, &i)| i)
            .map(|(g, _)| sign * g.dot(d) / self.gmax)
            .fold(f64::INFINITY, f64::min)
    }
}

/// Positivity of `∂_d ψ` for each direction after fixing the sign of `ψ` so
/// that the mean of `∂_{d₀} ψ` is nonnegative.
pub fn directional_positivity(
    mesh: &Mesh,
    psi: &[f64],
    directions: &[Vec2],
    cfg: &HotspotConfig,
) -> Result<DirectionalReport> {
    if directions.is_empty() {
        return Err(Error::InvalidInput("no directions given".into()));
    }
    let tg = TriangleGradients::new(mesh, psi, cfg.collar_factor * mesh.h_max())?;
    let flipped = tg.mean(directions[0]) < 0.0;
    let sign = if flipped { -1.0 } else { 1.0 };
    let checks: Vec<DirectionalCheck> = directions
        .iter()
        .map(|&d| {
            let d = d.normalized();
            DirectionalCheck {
                direction: d,
                positive_fraction: tg.positive_fraction(d, sign),
                min_normalized: tg.min_normalized(d, sign),
                l2_ratio: tg.l2_ratio(d),
                degenerate: tg.is_degenerate(d, cfg.degenerate_tol),
            }
        })
        .collect();
    let axes = [Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0), lip_directions()[0], lip_directions()[1]];
    let degenerate_axes = axes.into_iter().filter(|&d| tg.is_degenerate(d, cfg.degenerate_tol)).collect();
    let passed = checks.iter().all(|c| c.degenerate || c.positive_fraction >= cfg.fraction_threshold);
    Ok(DirectionalReport { checks, flipped, degenerate_axes, passed })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComponentReport {
    pub positive_fraction: [f64; 2],
    pub min_normalized: [f64; 2],
    pub l2_ratio: [f64; 2],
    pub degenerate: [bool; 2],
    pub flipped: bool,
    pub passed: bool,
}

/// Positivity of `∂₁ψ` and `∂₂ψ` on a domain whose outward normals lie in the
/// closed second and fourth quadrants.
pub fn rotated_lip_component_positivity(
    domain: &Domain,
    mesh: &Mesh,
    psi: &[f64],
    cfg: &HotspotConfig,
) -> Result<ComponentReport> {
    if !normals_in_opposite_quadrants(domain, cfg.quadrant_samples)?.holds() {
        return Err(Error::InvalidInput("domain is not in rotated lip position".into()));
    }
    let tg = TriangleGradients::new(mesh, psi, cfg.collar_factor * mesh.h_max())?;
    let e = [Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)];
    let flipped = tg.mean(e[0]) + tg.mean(e[1]) < 0.0;
    let sign = if flipped { -1.0 } else { 1.0 };
    let positive_fraction = e.map(|d| tg.positive_fraction(d, sign));
    let min_normalized = e.map(|d| tg.min_normalized(d, sign));
    let l2_ratio = e.map(|d| tg.l2_ratio(d));
    let degenerate = l2_ratio.map(|r| r <= cfg.degenerate_tol);
    let passed = (0..2).all(|i| degenerate[i] || positive_fraction[i] >= cfg.fraction_threshold);
    Ok(ComponentReport { positive_fraction, min_normalized, l2_ratio, degenerate, flipped, passed })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Odd,
    Even,
    Neither,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisParity {
    /// `‖ψ + ψ∘R‖_M / ‖ψ‖_M`: small for odd fields.
    pub odd_score: f64,
    /// `‖ψ − ψ∘R‖_M / ‖ψ‖_M`: small for even fields.
    pub even_score: f64,
    pub parity: Parity,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonotoneCheck {
    /// `0` when `ψ` is odd in `x` (checks `∂ₓψ`), `1` when odd in `y`.
    pub odd_axis: usize,
    pub positive_fraction: f64,
    pub min_normalized: f64,
    /// `‖∂_cross ψ‖ / ‖∇ψ‖`.
    pub cross_l2_ratio: f64,
    /// The cross derivative vanishes identically (rectangle-like case).
    pub cross_derivative_vanishes: bool,
    /// Largest distance from a sign-change edge of the cross derivative to the axes.
    pub nodal_max_distance: f64,
    pub nodal_within_tolerance: bool,
    pub passed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymmetryReport {
    pub x: AxisParity,
    pub y: AxisParity,
    /// Present when `ψ` is odd in one axis and even in the other.
    pub monotone: Option<MonotoneCheck>,
}

pub fn symmetry_analysis(mesh: &Mesh, psi: &[f64], cfg: &HotspotConfig) -> Result<SymmetryReport> {
    check_len(mesh, psi)?;
    let (Some(rx), Some(ry)) = (mesh.reflection_map(Axis::X), mesh.reflection_map(Axis::Y)) else {
        return Err(Error::InvalidInput("reflection maps unavailable".into()));
    };
    let norm = mass_inner(mesh, psi, psi).sqrt();
    if norm == 0.0 {
        return Err(Error::InvalidInput("field is zero".into()));
    }
    let parity = |map: &[usize]| {
        let score = |s: f64| {
            let w: Vec<f64> = (0..psi.len()).map(|v| psi[v] + s * psi[map[v]]).collect();
            mass_inner(mesh, &w, &w).sqrt() / norm
        };
        let (odd_score, even_score) = (score(1.0), score(-1.0));
        let parity = if odd_score <= cfg.parity_threshold {
            Parity::Odd
        } else if even_score <= cfg.parity_threshold {
            Parity::Even
        } else {
            Parity::Neither
        };
        AxisParity { odd_score, even_score, parity }
    };
    let (x, y) = (parity(&rx), parity(&ry));
    let odd_axis = match (x.parity, y.parity) {
        (Parity::Odd, Parity::Even) => Some(0),
        (Parity::Even, Parity::Odd) => Some(1),
        _ => None,
    };
    let monotone = match odd_axis {
        Some(axis) => Some(monotone_check(mesh, psi, axis, cfg)?),
        None => None,
    };
    Ok(SymmetryReport { x, y, monotone })
}

fn monotone_check(mesh: &Mesh, psi: &[f64], axis: usize, cfg: &HotspotConfig) -> Result<MonotoneCheck> {
    let h = mesh.h_max();
    let tg = TriangleGradients::new(mesh, psi, cfg.collar_factor * h)?;
    let (d, cross) =
        if axis == 0 { (Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)) } else { (Vec2::new(0.0, 1.0), Vec2::new(1.0, 0.0)) };
    let sign = if tg.mean(d) < 0.0 { -1.0 } else { 1.0 };
    let interior: Vec<f64> =
        tg.grads.iter().zip(&tg.interior).filter(|(_, &i)| i).map(|(g, _)| sign * g.dot(d)).collect();
    let positive_fraction = interior.iter().filter(|&&v| v > 0.0).count() as f64 / interior.len().max(1) as f64;
    let min_normalized = interior.iter().copied().fold(f64::INFINITY, f64::min) / tg.gmax;

    let nodal = lift_gradient(mesh, psi, Execution::default());
    let c: Vec<f64> = (0..psi.len()).map(|v| nodal.at(v).dot(cross)).collect();
    let cross_l2_ratio = tg.l2_ratio(cross);
    let cross_derivative_vanishes = cross_l2_ratio <= cfg.degenerate_tol;
    let mut nodal_max_distance: f64 = 0.0;
    if !cross_derivative_vanishes {
        let p = mesh.vertices();
        for tri in mesh.triangles() {
            for k in 0..3 {
                let (a, b) = (tri[k], tri[(k + 1) % 3]);
                if c[a] * c[b] < 0.0 {
                    nodal_max_distance = nodal_max_distance.max(distance_to_axes(p[a], p[b]));
                }
            }
        }
    }
    let nodal_within_tolerance = nodal_max_distance <= cfg.nodal_factor * h;
    Ok(MonotoneCheck {
        odd_axis: axis,
        positive_fraction,
        min_normalized,
        cross_l2_ratio,
        cross_derivative_vanishes,
        nodal_max_distance,
        nodal_within_tolerance,
        passed: positive_fraction == 1.0 && nodal_within_tolerance,
    })
}

/// Distance from segment `ab` to the union of the coordinate axes.
fn distance_to_axes(a: Vec2, b: Vec2) -> f64 {
    let to_line = |u: f64, v: f64| if u * v <= 0.0 { 0.0 } else { u.abs().min(v.abs()) };
    to_line(a.x, b.x).min(to_line(a.y, b.y))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HotspotReport {
    pub domain: String,
    pub h: f64,
    pub mu2: f64,
    pub multiplicity: usize,
    pub extrema: Extrema,
    pub critical_candidates: Vec<CriticalCandidate>,
    pub lip: LipVerdict,
    pub directional: Option<DirectionalReport>,
    /// Component check on the domain rotated by `π/4`.
    pub rotated: Option<ComponentReport>,
    /// Largest difference between matching fractions of the two checks.
    pub rotation_disagreement: Option<f64>,
    pub symmetry: Option<SymmetryReport>,
    pub passed: bool,
    /// Sign-normalized `ψ₂` at the mesh vertices.
    pub psi2: Vec<f64>,
}

/// Runs every hot-spot check on `ψ₂` taken from a Neumann spectrum.
///
/// In a multiple cluster the member with the smallest `‖∂_d ψ‖ / ‖∇ψ‖` is
/// used, where `d = (e₁ − e₂)/√2` on lip domains with pinched ends and
/// `d = e₂` otherwise.
pub fn analyze(domain: &Domain, mesh: &Mesh, neumann: &Spectrum, cfg: &HotspotConfig) -> Result<HotspotReport> {
    let (first, multiplicity) = simplicity_check(neumann, cfg.cluster_tol)?;
    let basis: Vec<&[f64]> = (first..first + multiplicity).map(|i| neumann.pairs[i].vector.as_slice()).collect();
    if basis.iter().any(|v| v.len() != mesh.n_vertices()) {
        return Err(Error::InvalidInput("spectrum does not belong to a Neumann problem on this mesh".into()));
    }
    let psi = if multiplicity == 1 {
        basis[0].to_vec()
    } else {
        let lip = is_lip_domain(domain, cfg.lip_grid)?;
        let d = if lip.is_lip && !lip.degenerate_ends { lip_directions()[1] } else { Vec2::new(0.0, 1.0) };
        axis_aligned_member(mesh, &basis, d)
    };
    analyze_field(domain, mesh, &psi, neumann.pairs[first].value, multiplicity, cfg)
}

/// Member of `span(basis)` minimizing `‖∂_d ψ‖² / ‖∇ψ‖²`.
pub fn axis_aligned_member(mesh: &Mesh, basis: &[&[f64]], d: Vec2) -> Vec<f64> {
    let exec = Execution::default();
    let grads: Vec<Vec<Vec2>> = basis.iter().map(|b| gradient_field(mesh, b, exec)).collect();
    let areas: Vec<f64> = (0..mesh.n_triangles()).map(|t| mesh.triangle_area(t)).collect();
    let n = basis.len();
    let form = |f: &dyn Fn(Vec2, Vec2) -> f64| {
        DMatrix::from_fn(n, n, |i, j| {
            areas.iter().enumerate().map(|(t, a)| a * f(grads[i][t], grads[j][t])).sum::<f64>()
        })
    };
    let p = form(&|u, v| u.dot(d) * v.dot(d));
    let g = form(&|u, v| u.dot(v));
    let Some(chol) = nalgebra::Cholesky::new(g) else {
        return basis[0].to_vec();
    };
    let l = chol.l();
    let mut w = p;
    l.solve_lower_triangular_mut(&mut w);
    let mut wt = w.transpose();
    l.solve_lower_triangular_mut(&mut wt);
    let eig = nalgebra::SymmetricEigen::new((&wt + wt.transpose()) * 0.5);
    let k = eig.eigenvalues.imin();
    let mut y = eig.eigenvectors.column(k).into_owned();
    l.transpose().solve_upper_triangular_mut(&mut y);
    (0..basis[0].len()).map(|v| (0..n).map(|i| y[i] * basis[i][v]).sum()).collect()
}

/// Flips `ψ` so that its largest-magnitude entry (lowest index on ties) is positive.
pub fn normalize_sign(psi: &mut [f64]) {
    let mut best = 0;
    for (i, v) in psi.iter().enumerate() {
        if v.abs() > psi[best].abs() {
            best = i;
        }
    }
    if psi.get(best).is_some_and(|&v| v < 0.0) {
        psi.iter_mut().for_each(|v| *v = -*v);
    }
}

pub fn analyze_field(
    domain: &Domain,
    mesh: &Mesh,
    psi: &[f64],
    mu2: f64,
    multiplicity: usize,
    cfg: &HotspotConfig,
) -> Result<HotspotReport> {
    check_len(mesh, psi)?;
    let mut psi = psi.to_vec();
    normalize_sign(&mut psi);
    let h = mesh.h_max();
    let extrema = locate_extrema(mesh, &psi)?;
    let critical_candidates = interior_critical_scan(mesh, &psi, cfg.eps_critical, cfg.collar_factor * h)?;
    let lip = is_lip_domain(domain, cfg.lip_grid)?;
    let (mut directional, mut rotated, mut rotation_disagreement) = (None, None, None);
    if lip.is_lip {
        let dirs = lip_directions();
        let dr = directional_positivity(mesh, &psi, &dirs, cfg)?;
        // Vertical end segments rotate out of the admissible normal quadrants.
        if !lip.degenerate_ends {
            let angle = std::f64::consts::FRAC_PI_4;
            let cr = rotated_lip_component_positivity(&domain.rotated(angle), &mesh.rotated(angle), &psi, cfg)?;
            // The rotation sends ∂ along (e₁ + e₂)/√2 to ∂₂ and (e₁ − e₂)/√2 to ∂₁.
            let diff = (dr.checks[0].positive_fraction - cr.positive_fraction[1])
                .abs()
                .max((dr.checks[1].positive_fraction - cr.positive_fraction[0]).abs());
            rotation_disagreement = Some(diff);
            rotated = Some(cr);
        }
        directional = Some(dr);
    }
    let symmetry = match symmetry_analysis(mesh, &psi, cfg) {
        Ok(s) => Some(s),
        Err(Error::InvalidInput(_)) => None,
        Err(e) => return Err(e),
    };
    let passed = extrema.max.on_boundary
        && extrema.min.on_boundary
        && critical_candidates.is_empty()
        && directional.as_ref().is_none_or(|d| d.passed);
    Ok(HotspotReport {
        domain: domain.label.clone(),
        h,
        mu2,
        multiplicity,
        extrema,
        critical_candidates,
        lip,
        directional,
        rotated,
        rotation_disagreement,
        symmetry,
        passed,
        psi2: psi,
    })
}

fn check_len(mesh: &Mesh, psi: &[f64]) -> Result<()> {
    if psi.len() != mesh.n_vertices() {
        return Err(Error::InvalidInput(format!("field has {} values for {} vertices", psi.len(), mesh.n_vertices())));
    }
    if psi.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("field has non-finite values".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axes_distance() {
        assert_eq!(distance_to_axes(Vec2::new(-1.0, 2.0), Vec2::new(1.0, 3.0)), 0.0);
        assert_eq!(distance_to_axes(Vec2::new(0.5, 2.0), Vec2::new(1.0, 0.2)), 0.2);
    }

    #[test]
    fn sign_normalization_ignores_input_sign() {
        let a = vec![0.3, -1.0, 1.0, 0.2];
        let mut p = a.clone();
        let mut q: Vec<f64> = a.iter().map(|v| -v).collect();
        normalize_sign(&mut p);
        normalize_sign(&mut q);
        assert_eq!(p, q);
    }
}
