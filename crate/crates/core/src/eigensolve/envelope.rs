//! Reverse Cuthill–McKee ordering and envelope (skyline) Cholesky.

use crate::error::{Error, Result};
use crate::sparse::CsrMatrix;
use std::collections::VecDeque;

/// RCM permutation: `perm[new] = old`.
pub fn rcm_order(a: &CsrMatrix) -> Vec<usize> {
    let n = a.nrows();
    let adj: Vec<Vec<usize>> = (0..n).map(|i| a.row(i).0.iter().copied().filter(|&j| j != i).collect()).collect();
    let degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut placed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for seed in 0..n {
        if placed[seed] {
            continue;
        }
        let start = pseudo_peripheral(&adj, &degree, &placed, seed);
        let mut queue = VecDeque::from([start]);
        placed[start] = true;
        while let Some(v) = queue.pop_front() {
            order.push(v);
            let mut next: Vec<usize> = adj[v].iter().copied().filter(|&w| !placed[w]).collect();
            next.sort_by_key(|&w| (degree[w], w));
            for w in next {
                placed[w] = true;
                queue.push_back(w);
            }
        }
    }
    order.reverse();
    order
}

/// George–Liu search: restart the BFS from a far, low-degree vertex while the
/// eccentricity keeps growing.
fn pseudo_peripheral(adj: &[Vec<usize>], degree: &[usize], placed: &[bool], seed: usize) -> usize {
    let mut start = seed;
    let mut ecc = 0;
    let mut depth = vec![usize::MAX; adj.len()];
    for round in 0..10 {
        depth.iter_mut().for_each(|d| *d = usize::MAX);
        depth[start] = 0;
        let mut queue = VecDeque::from([start]);
        let mut far = (0, start);
        while let Some(v) = queue.pop_front() {
            let d = depth[v];
            if d > far.0 || (d == far.0 && degree[v] < degree[far.1]) {
                far = (d, v);
            }
            for &w in &adj[v] {
                if !placed[w] && depth[w] == usize::MAX {
                    depth[w] = d + 1;
                    queue.push_back(w);
                }
            }
        }
        if round > 0 && far.0 <= ecc {
            break;
        }
        ecc = far.0;
        start = far.1;
    }
    start
}

/// Lower-triangular Cholesky factor stored row by row over the envelope.
#[derive(Debug, Clone)]
pub struct EnvelopeCholesky {
    perm: Vec<usize>,
    /// First stored column of each (permuted) row.
    first: Vec<usize>,
    /// Offset of row `i` in `vals`; row `i` holds columns `first[i]..=i`.
    start: Vec<usize>,
    vals: Vec<f64>,
}

impl EnvelopeCholesky {
    pub fn factor(a: &CsrMatrix) -> Result<Self> {
        let n = a.nrows();
        let perm = rcm_order(a);
        let mut inv = vec![0; n];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let mut first: Vec<usize> = (0..n).collect();
        for (new, &old) in perm.iter().enumerate() {
            for &j in a.row(old).0 {
                let jn = inv[j];
                if jn < first[new] {
                    first[new] = jn;
                }
            }
        }
        let mut start = vec![0; n + 1];
        for i in 0..n {
            start[i + 1] = start[i] + (i - first[i] + 1);
        }
        let mut vals = vec![0.0; start[n]];
        for (new, &old) in perm.iter().enumerate() {
            let (c, v) = a.row(old);
            for (&j, &x) in c.iter().zip(v) {
                let jn = inv[j];
                if jn <= new {
                    vals[start[new] + jn - first[new]] += x;
                }
            }
        }
        for i in 0..n {
            let fi = first[i];
            for j in fi..=i {
                let fj = first[j];
                let lo = fi.max(fj);
                let ri = &vals[start[i] + lo - fi..start[i] + j - fi];
                let rj = &vals[start[j] + lo - fj..start[j] + j - fj];
                let s: f64 = ri.iter().zip(rj).map(|(x, y)| x * y).sum();
                let aij = vals[start[i] + j - fi] - s;
                if j < i {
                    vals[start[i] + j - fi] = aij / vals[start[j + 1] - 1];
                } else {
                    if !(aij > 0.0) {
                        return Err(Error::NotPositiveDefinite { row: perm[i], pivot: aij });
                    }
                    vals[start[i] + i - fi] = aij.sqrt();
                }
            }
        }
        Ok(EnvelopeCholesky { perm, first, start, vals })
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    /// Stored entries of the factor.
    pub fn envelope_size(&self) -> usize {
        self.vals.len()
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.dim();
        let mut y: Vec<f64> = self.perm.iter().map(|&o| b[o]).collect();
        for i in 0..n {
            let fi = self.first[i];
            let row = &self.vals[self.start[i]..self.start[i + 1]];
            let s: f64 = row[..i - fi].iter().zip(&y[fi..i]).map(|(l, x)| l * x).sum();
            y[i] = (y[i] - s) / row[i - fi];
        }
        for i in (0..n).rev() {
            let fi = self.first[i];
            let row = &self.vals[self.start[i]..self.start[i + 1]];
            y[i] /= row[i - fi];
            let xi = y[i];
            for (k, l) in (fi..i).zip(row) {
                y[k] -= l * xi;
            }
        }
        let mut x = vec![0.0; n];
        for (new, &old) in self.perm.iter().enumerate() {
            x[old] = y[new];
        }
        x
    }
}
