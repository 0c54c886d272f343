//! Smallest eigenpairs of symmetric pencils `K x = λ M x`.
//!
//! Small problems are reduced densely through the Cholesky factor of `M`.
//! Larger ones use shift-invert block subspace iteration with Rayleigh–Ritz
//! projection; the shifted matrix is factored once by an envelope Cholesky
//! after reverse Cuthill–McKee reordering.

mod envelope;

pub use envelope::{rcm_order, EnvelopeCholesky};

use crate::error::{Error, Result};
use crate::fem::{AssembledSystem, ProblemKind};
use crate::par::Execution;
use crate::sparse::{dot, CsrMatrix};
use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenOptions {
    /// Residual tolerance (see [`residual`]).
    pub tol: f64,
    /// Relative clustering tolerance.
    pub cluster_tol: f64,
    pub seed: u64,
    pub max_iterations: usize,
    /// Problems up to this size use the dense path.
    pub dense_threshold: usize,
    pub exec: Execution,
}

impl Default for EigenOptions {
    fn default() -> Self {
        EigenOptions {
            tol: 1e-8,
            cluster_tol: 1e-2,
            seed: 0x5eed,
            max_iterations: 1000,
            dense_threshold: 400,
            exec: Execution::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Eigenpair {
    pub value: f64,
    /// M-normalized coefficient vector.
    pub vector: Vec<f64>,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub kind: Option<ProblemKind>,
    pub pairs: Vec<Eigenpair>,
    /// Consecutive index groups forming numerical multiplets.
    pub clusters: Vec<Vec<usize>>,
}

impl Spectrum {
    pub fn values(&self) -> Vec<f64> {
        self.pairs.iter().map(|p| p.value).collect()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn cluster_of(&self, i: usize) -> Option<usize> {
        self.clusters.iter().position(|c| c.contains(&i))
    }

    /// Regroups the eigenvalues with a new tolerance.
    pub fn reclustered(mut self, cluster_tol: f64) -> Spectrum {
        self.clusters = cluster(&self.values(), cluster_tol);
        self
    }

    /// CSV with header `index,eigenvalue,residual,cluster_id`, 12 significant digits.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("index,eigenvalue,residual,cluster_id\n");
        for (i, p) in self.pairs.iter().enumerate() {
            let c = self.cluster_of(i).unwrap_or(usize::MAX);
            let _ = writeln!(s, "{i},{:.11e},{:.11e},{c}", p.value, p.residual);
        }
        s
    }
}

/// Groups sorted `values` so that neighbours with
/// `|λᵢ − λᵢ₋₁| ≤ cluster_tol · (1 + |λᵢ₋₁|)` share a group.
pub fn cluster(values: &[f64], cluster_tol: f64) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    for (i, &v) in values.iter().enumerate() {
        match out.last_mut() {
            Some(g) if (v - values[i - 1]).abs() <= cluster_tol * (1.0 + values[i - 1].abs()) => g.push(i),
            _ => out.push(vec![i]),
        }
    }
    out
}

/// `‖Kx − λMx‖₂ / ((1 + |λ|) ‖x‖_M)`.
pub fn residual(k: &CsrMatrix, m: &CsrMatrix, lambda: f64, x: &[f64], exec: Execution) -> f64 {
    let kx = k.matvec(x, exec);
    let mx = m.matvec(x, exec);
    let r: f64 = kx.iter().zip(&mx).map(|(a, b)| (a - lambda * b).powi(2)).sum::<f64>().sqrt();
    r / ((1.0 + lambda.abs()) * dot(x, &mx).sqrt())
}

pub fn smallest_eigenpairs(system: &AssembledSystem, k: usize, opts: &EigenOptions) -> Result<Spectrum> {
    let mut s = solve_pencil(&system.form, &system.mass, k, opts)?;
    s.kind = Some(system.kind);
    Ok(s)
}

/// The `k` smallest eigenpairs of the symmetric pencil `(a, m)`, `m` positive definite.
pub fn solve_pencil(a: &CsrMatrix, m: &CsrMatrix, k: usize, opts: &EigenOptions) -> Result<Spectrum> {
    let n = a.nrows();
    if k == 0 || k >= n {
        return Err(Error::InvalidInput(format!("requested {k} eigenpairs of a problem with {n} unknowns")));
    }
    if !(opts.tol > 0.0 && opts.tol <= 1e-4) {
        return Err(Error::InvalidInput(format!("solver tolerance {} outside (0, 1e-4]", opts.tol)));
    }
    let (values, vectors) = if n <= opts.dense_threshold { dense(a, m, k)? } else { subspace(a, m, k, opts)? };
    let mut pairs = Vec::with_capacity(k);
    for (value, mut vector) in values.into_iter().zip(vectors) {
        normalize_sign(&mut vector);
        let residual = residual(a, m, value, &vector, opts.exec);
        if !(residual <= opts.tol) {
            let mut residuals = vec![0.0; pairs.len()];
            residuals.push(residual);
            return Err(Error::NoConvergence { iterations: 0, residuals });
        }
        pairs.push(Eigenpair { value, vector, residual });
    }
    let clusters = cluster(&pairs.iter().map(|p| p.value).collect::<Vec<_>>(), opts.cluster_tol);
    Ok(Spectrum { kind: None, pairs, clusters })
}

/// Makes the largest-magnitude entry positive so results are reproducible.
fn normalize_sign(x: &mut [f64]) {
    let big = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if let Some(v) = x.iter().find(|v| v.abs() > 0.5 * big) {
        if *v < 0.0 {
            x.iter_mut().for_each(|v| *v = -*v);
        }
    }
}

fn dense(a: &CsrMatrix, m: &CsrMatrix, k: usize) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let chol = nalgebra::Cholesky::new(m.to_dense())
        .ok_or_else(|| Error::IndefiniteMass("Cholesky factorization of the mass matrix failed".into()))?;
    let l = chol.l();
    let mut c = a.to_dense();
    // C = L⁻¹ A L⁻ᵀ
    if !l.solve_lower_triangular_mut(&mut c) {
        return Err(Error::IndefiniteMass("singular mass factor".into()));
    }
    let mut ct = c.transpose();
    l.solve_lower_triangular_mut(&mut ct);
    let c = (&ct + ct.transpose()) * 0.5;
    let eig = SymmetricEigen::new(c);
    let mut idx: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    idx.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let lt = l.transpose();
    let mut values = Vec::with_capacity(k);
    let mut vectors = Vec::with_capacity(k);
    for &i in idx.iter().take(k) {
        let mut y = DMatrix::from_column_slice(eig.eigenvectors.nrows(), 1, eig.eigenvectors.column(i).as_slice());
        lt.solve_upper_triangular_mut(&mut y);
        values.push(eig.eigenvalues[i]);
        vectors.push(y.as_slice().to_vec());
    }
    Ok((values, vectors))
}

/// M-orthonormalizes the columns of `y` in place (modified Gram–Schmidt, two
/// passes), replacing numerically dependent columns with fresh random ones.
fn m_orthonormalize(y: &mut [Vec<f64>], m: &CsrMatrix, rng: &mut ChaCha8Rng, exec: Execution) {
    let mut my: Vec<Vec<f64>> = Vec::with_capacity(y.len());
    for j in 0..y.len() {
        for attempt in 0..3 {
            let norm0 = dot(&y[j], &m.matvec(&y[j], exec)).sqrt();
            for _pass in 0..2 {
                for i in 0..j {
                    let c = dot(&my[i], &y[j]);
                    let (yi, yj) = (&y[i].clone(), &mut y[j]);
                    yj.iter_mut().zip(yi).for_each(|(a, b)| *a -= c * b);
                }
            }
            let mj = m.matvec(&y[j], exec);
            let norm = dot(&y[j], &mj).sqrt();
            if norm > 1e-10 * norm0 && norm > 0.0 {
                y[j].iter_mut().for_each(|v| *v /= norm);
                my.push(mj.into_iter().map(|v| v / norm).collect());
                break;
            }
            assert!(attempt < 2, "could not extend the M-orthonormal basis");
            y[j].iter_mut().for_each(|v| *v = rng.random_range(-1.0..1.0));
        }
    }
}

fn subspace(a: &CsrMatrix, m: &CsrMatrix, k: usize, opts: &EigenOptions) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let n = a.nrows();
    let exec = opts.exec;
    let p = (2 * k).max(k + 8).min(n);
    let scale = a.trace().abs() / m.trace();
    let mut sigma = -1e-4 * scale;
    let factor = loop {
        match EnvelopeCholesky::factor(&CsrMatrix::lin_comb(1.0, a, -sigma, m)) {
            Ok(f) => break f,
            Err(Error::NotPositiveDefinite { .. }) if sigma > -scale => sigma = 10.0 * sigma - 1e-3 * scale,
            Err(e) => return Err(e),
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut x: Vec<Vec<f64>> = (0..p).map(|_| (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()).collect();
    m_orthonormalize(&mut x, m, &mut rng, exec);
    let mut residuals = vec![f64::INFINITY; k];
    for iter in 0..opts.max_iterations {
        let mut y = exec.map(p, |j| factor.solve(&m.matvec(&x[j], exec)));
        m_orthonormalize(&mut y, m, &mut rng, exec);
        let ay: Vec<Vec<f64>> = y.iter().map(|c| a.matvec(c, exec)).collect();
        let h = DMatrix::from_fn(p, p, |i, j| 0.5 * (dot(&y[i], &ay[j]) + dot(&y[j], &ay[i])));
        let eig = SymmetricEigen::new(h);
        let mut idx: Vec<usize> = (0..p).collect();
        idx.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
        let combine = |cols: &[Vec<f64>], i: usize| -> Vec<f64> {
            let z = eig.eigenvectors.column(idx[i]);
            let mut out = vec![0.0; n];
            for (c, &w) in cols.iter().zip(z.iter()) {
                out.iter_mut().zip(c).for_each(|(o, v)| *o += w * v);
            }
            out
        };
        x = exec.map(p, |i| combine(&y, i));
        let theta: Vec<f64> = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
        residuals = exec.map(k, |i| residual(a, m, theta[i], &x[i], Execution::Sequential));
        if residuals.iter().all(|&r| r <= opts.tol) {
            return Ok((theta[..k].to_vec(), x.into_iter().take(k).collect()));
        }
        if iter + 1 == opts.max_iterations {
            break;
        }
    }
    Err(Error::NoConvergence { iterations: opts.max_iterations, residuals })
}
