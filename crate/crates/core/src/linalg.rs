//! Dense eigen-solves on the connected blocks of sparse Gram matrices.
//!
//! Every operator handled here is banded in the spin label and conserves some
//! combination of `i` and `j`, so `A*A` and `AA*` split into many small
//! blocks. Each block is solved densely.

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;

use crate::sparse::C64;

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }

    fn groups(&mut self) -> Vec<Vec<usize>> {
        let n = self.parent.len();
        let mut slot = vec![usize::MAX; n];
        let mut out: Vec<Vec<usize>> = Vec::new();
        for x in 0..n {
            let r = self.find(x);
            if slot[r] == usize::MAX {
                slot[r] = out.len();
                out.push(Vec::new());
            }
            out[slot[r]].push(x);
        }
        out
    }
}

/// Eigen-decomposition of a Hermitian matrix, ascending eigenvalues. Takes the
/// real symmetric path when every entry is real.
pub fn hermitian_eigen(m: &DMatrix<C64>) -> (Vec<f64>, DMatrix<C64>) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), DMatrix::zeros(0, 0));
    }
    let (vals, vecs) = if m.iter().all(|v| v.im == 0.0) {
        let real = m.map(|v| v.re);
        let eig = SymmetricEigen::new(real);
        (eig.eigenvalues.iter().copied().collect::<Vec<_>>(), eig.eigenvectors.map(|v| C64::new(v, 0.0)))
    } else {
        let eig = SymmetricEigen::new(m.clone());
        (eig.eigenvalues.iter().copied().collect::<Vec<_>>(), eig.eigenvectors)
    };
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
    let sorted_vals = order.iter().map(|&k| vals[k]).collect();
    let sorted_vecs = DMatrix::from_fn(n, n, |r, c| vecs[(r, order[c])]);
    (sorted_vals, sorted_vecs)
}

/// Largest singular value of the sparse matrix given by `cols` (each a list
/// of `(row, value)`), with `nrows` rows.
pub fn largest_singular_value(cols: &[&[(usize, C64)]], nrows: usize) -> f64 {
    let ncols = cols.len();
    let mut by_row: Vec<Vec<(usize, C64)>> = vec![Vec::new(); nrows];
    for (c, col) in cols.iter().enumerate() {
        for &(r, v) in col.iter() {
            by_row[r].push((c, v));
        }
    }
    let mut uf = UnionFind::new(ncols);
    for row in &by_row {
        if let Some(&(first, _)) = row.first() {
            for &(c, _) in &row[1..] {
                uf.union(first, c);
            }
        }
    }
    let groups = uf.groups();
    groups
        .par_iter()
        .map(|group| {
            if group.iter().all(|&c| cols[c].is_empty()) {
                return 0.0;
            }
            let local: std::collections::HashMap<usize, usize> =
                group.iter().enumerate().map(|(k, &c)| (c, k)).collect();
            let mut rows: Vec<usize> = group.iter().flat_map(|&c| cols[c].iter().map(|e| e.0)).collect();
            rows.sort_unstable();
            rows.dedup();
            let m = group.len();
            let mut g = DMatrix::<C64>::zeros(m, m);
            for &r in &rows {
                let row = &by_row[r];
                for &(ca, va) in row {
                    let a = local[&ca];
                    for &(cb, vb) in row {
                        g[(a, local[&cb])] += va.conj() * vb;
                    }
                }
            }
            let (vals, _) = hermitian_eigen(&g);
            vals.last().copied().unwrap_or(0.0).max(0.0).sqrt()
        })
        .reduce(|| 0.0, f64::max)
}

/// Near-kernel bookkeeping for a rectangular sparse matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelCounts {
    /// Right singular directions with σ < tol (including structural zeros).
    pub ker_all: usize,
    pub coker_all: usize,
    /// Dimension of the part of the near-kernel whose mass on the boundary
    /// coordinates is below the threshold.
    pub ker_interior: usize,
    pub coker_interior: usize,
    /// Smallest singular value ≥ tol, if any.
    pub min_retained_sigma: Option<f64>,
}

/// Counts how many directions of `span` (orthonormal columns) carry less than
/// `threshold` of their mass on the coordinates flagged in `boundary`.
fn interior_directions(span: &DMatrix<C64>, boundary: &[bool], threshold: f64) -> usize {
    let k = span.ncols();
    if k == 0 {
        return 0;
    }
    let mut mass = DMatrix::<C64>::zeros(k, k);
    for (r, &b) in boundary.iter().enumerate() {
        if !b {
            continue;
        }
        for a in 0..k {
            let va = span[(r, a)].conj();
            if va == C64::new(0.0, 0.0) {
                continue;
            }
            for c in 0..k {
                mass[(a, c)] += va * span[(r, c)];
            }
        }
    }
    let (vals, _) = hermitian_eigen(&mass);
    vals.iter().filter(|&&v| v < threshold).count()
}

/// Near-kernel analysis of the matrix with columns `cols` (`nrows` rows).
/// `row_boundary`/`col_boundary` flag coordinates on the outer shells.
pub fn kernel_counts(
    cols: &[Vec<(usize, C64)>],
    nrows: usize,
    row_boundary: &[bool],
    col_boundary: &[bool],
    tol: f64,
    boundary_mass: f64,
) -> KernelCounts {
    let ncols = cols.len();
    // bipartite graph: rows are nodes 0..nrows, columns nrows..nrows+ncols
    let mut uf = UnionFind::new(nrows + ncols);
    for (c, col) in cols.iter().enumerate() {
        for &(r, _) in col {
            uf.union(r, nrows + c);
        }
    }
    let groups = uf.groups();
    let tol2 = tol * tol;
    let parts: Vec<KernelCounts> = groups
        .par_iter()
        .map(|group| {
            let rows: Vec<usize> = group.iter().copied().filter(|&x| x < nrows).collect();
            let cs: Vec<usize> = group.iter().filter(|&&x| x >= nrows).map(|&x| x - nrows).collect();
            let row_pos: std::collections::HashMap<usize, usize> =
                rows.iter().enumerate().map(|(k, &r)| (r, k)).collect();
            let mut b = DMatrix::<C64>::zeros(rows.len(), cs.len());
            for (k, &c) in cs.iter().enumerate() {
                for &(r, v) in &cols[c] {
                    b[(row_pos[&r], k)] = v;
                }
            }
            let bh = b.adjoint();
            let (right_vals, right_vecs) = hermitian_eigen(&(&bh * &b));
            let (left_vals, left_vecs) = hermitian_eigen(&(&b * &bh));
            let near_right: Vec<usize> = (0..right_vals.len()).filter(|&k| right_vals[k] < tol2).collect();
            let near_left: Vec<usize> = (0..left_vals.len()).filter(|&k| left_vals[k] < tol2).collect();
            let retained = right_vals
                .iter()
                .chain(left_vals.iter())
                .filter(|&&v| v >= tol2)
                .map(|v| v.sqrt())
                .fold(None, |acc: Option<f64>, v| Some(acc.map_or(v, |a| a.min(v))));
            let right_span = right_vecs.select_columns(&near_right);
            let left_span = left_vecs.select_columns(&near_left);
            let col_b: Vec<bool> = cs.iter().map(|&c| col_boundary[c]).collect();
            let row_b: Vec<bool> = rows.iter().map(|&r| row_boundary[r]).collect();
            KernelCounts {
                ker_all: near_right.len(),
                coker_all: near_left.len(),
                ker_interior: interior_directions(&right_span, &col_b, boundary_mass),
                coker_interior: interior_directions(&left_span, &row_b, boundary_mass),
                min_retained_sigma: retained,
            }
        })
        .collect();
    parts.into_iter().fold(
        KernelCounts {
            ker_all: 0,
            coker_all: 0,
            ker_interior: 0,
            coker_interior: 0,
            min_retained_sigma: None,
        },
        |acc, p| KernelCounts {
            ker_all: acc.ker_all + p.ker_all,
            coker_all: acc.coker_all + p.coker_all,
            ker_interior: acc.ker_interior + p.ker_interior,
            coker_interior: acc.coker_interior + p.coker_interior,
            min_retained_sigma: match (acc.min_retained_sigma, p.min_retained_sigma) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (a, b) => a.or(b),
            },
        },
    )
}
