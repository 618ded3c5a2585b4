//! Column-major sparse operators between truncated spaces.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::halfint::TruncatedSpace;

pub type C64 = Complex64;

#[inline]
pub fn re(v: f64) -> C64 {
    C64::new(v, 0.0)
}

/// Sparse matrix tagged with its domain/codomain truncations and the largest
/// shell jump `|Δn2|` it can induce.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseOperator {
    domain: TruncatedSpace,
    codomain: TruncatedSpace,
    /// `cols[c]` holds `(row, value)` pairs sorted by row, no duplicates, no zeros.
    cols: Vec<Vec<(usize, C64)>>,
    band: i64,
}

impl SparseOperator {
    pub fn zeros(domain: TruncatedSpace, codomain: TruncatedSpace, band: i64) -> Self {
        SparseOperator { domain, codomain, cols: vec![Vec::new(); domain.dim()], band }
    }

    /// Build from `(row, col, value)` triplets; duplicates are summed and
    /// exact zeros dropped.
    pub fn from_triplets(
        domain: TruncatedSpace,
        codomain: TruncatedSpace,
        band: i64,
        triplets: impl IntoIterator<Item = (usize, usize, C64)>,
    ) -> Result<Self> {
        let mut acc: Vec<BTreeMap<usize, C64>> = vec![BTreeMap::new(); domain.dim()];
        for (r, c, v) in triplets {
            if c >= domain.dim() || r >= codomain.dim() {
                return Err(Error::SpaceMismatch(format!(
                    "entry ({r}, {c}) outside {}x{}",
                    codomain.dim(),
                    domain.dim()
                )));
            }
            *acc[c].entry(r).or_insert(C64::new(0.0, 0.0)) += v;
        }
        let cols = acc
            .into_iter()
            .map(|m| m.into_iter().filter(|(_, v)| *v != C64::new(0.0, 0.0)).collect())
            .collect();
        let op = SparseOperator { domain, codomain, cols, band };
        op.check_band()?;
        Ok(op)
    }

    /// Build from per-column entry lists `(row, value)`; duplicates are summed.
    pub(crate) fn from_columns(
        domain: TruncatedSpace,
        codomain: TruncatedSpace,
        band: i64,
        cols: Vec<Vec<(usize, C64)>>,
    ) -> Self {
        debug_assert_eq!(cols.len(), domain.dim());
        let cols = cols
            .into_iter()
            .map(|mut col| {
                col.sort_by_key(|e| e.0);
                let mut merged: Vec<(usize, C64)> = Vec::with_capacity(col.len());
                for (r, v) in col {
                    match merged.last_mut() {
                        Some(last) if last.0 == r => last.1 += v,
                        _ => merged.push((r, v)),
                    }
                }
                merged.retain(|e| e.1 != C64::new(0.0, 0.0));
                merged
            })
            .collect();
        SparseOperator { domain, codomain, cols, band }
    }

    pub fn identity(space: TruncatedSpace) -> Self {
        let cols = (0..space.dim()).map(|c| vec![(c, re(1.0))]).collect();
        SparseOperator { domain: space, codomain: space, cols, band: 0 }
    }

    pub fn diagonal(space: TruncatedSpace, values: &[C64]) -> Self {
        assert_eq!(values.len(), space.dim());
        let cols = values
            .iter()
            .enumerate()
            .map(|(c, &v)| if v == re(0.0) { Vec::new() } else { vec![(c, v)] })
            .collect();
        SparseOperator { domain: space, codomain: space, cols, band: 0 }
    }

    fn check_band(&self) -> Result<()> {
        for (c, col) in self.cols.iter().enumerate() {
            let cn = self.domain.label_at(c).expect("column in range").n2;
            for &(r, _) in col {
                let rn = self.codomain.label_at(r).expect("row in range").n2;
                if (rn - cn).abs() > self.band {
                    return Err(Error::Parameter(format!(
                        "entry ({r}, {c}) jumps {} shells, band is {}",
                        (rn - cn).abs(),
                        self.band
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn domain(&self) -> TruncatedSpace {
        self.domain
    }

    pub fn codomain(&self) -> TruncatedSpace {
        self.codomain
    }

    pub fn band(&self) -> i64 {
        self.band
    }

    pub fn with_band(mut self, band: i64) -> Self {
        self.band = band;
        self
    }

    pub fn rows(&self) -> usize {
        self.codomain.dim()
    }

    pub fn ncols(&self) -> usize {
        self.domain.dim()
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn column(&self, c: usize) -> &[(usize, C64)] {
        &self.cols[c]
    }

    pub fn get(&self, r: usize, c: usize) -> C64 {
        match self.cols[c].binary_search_by_key(&r, |e| e.0) {
            Ok(k) => self.cols[c][k].1,
            Err(_) => C64::new(0.0, 0.0),
        }
    }

    /// Entries in column-major order, rows ascending within a column.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        self.cols.iter().enumerate().flat_map(|(c, col)| col.iter().map(move |&(r, v)| (r, c, v)))
    }

    pub fn is_real(&self) -> bool {
        self.entries().all(|(_, _, v)| v.im == 0.0)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut cols: Vec<Vec<(usize, C64)>> = vec![Vec::new(); self.codomain.dim()];
        for (r, c, v) in self.entries() {
            cols[r].push((c, v.conj()));
        }
        SparseOperator { domain: self.codomain, codomain: self.domain, cols, band: self.band }
    }

    pub fn scale(&self, s: C64) -> Self {
        let cols = self
            .cols
            .iter()
            .map(|col| col.iter().map(|&(r, v)| (r, v * s)).filter(|e| e.1 != re(0.0)).collect())
            .collect();
        SparseOperator { cols, ..self.clone() }
    }

    fn same_shape(&self, other: &Self, what: &str) -> Result<()> {
        if self.domain != other.domain || self.codomain != other.codomain {
            return Err(Error::SpaceMismatch(format!(
                "{what}: ({} -> {}) vs ({} -> {})",
                self.domain.n2_max(),
                self.codomain.n2_max(),
                other.domain.n2_max(),
                other.codomain.n2_max()
            )));
        }
        Ok(())
    }

    /// `self + s * other`.
    pub fn add_scaled(&self, other: &Self, s: C64) -> Result<Self> {
        self.same_shape(other, "sum")?;
        let cols = self
            .cols
            .iter()
            .zip(&other.cols)
            .map(|(a, b)| {
                let mut out = Vec::with_capacity(a.len() + b.len());
                let (mut x, mut y) = (0, 0);
                while x < a.len() || y < b.len() {
                    let next = match (a.get(x), b.get(y)) {
                        (Some(&(ra, va)), Some(&(rb, vb))) if ra == rb => {
                            x += 1;
                            y += 1;
                            (ra, va + s * vb)
                        }
                        (Some(&(ra, va)), Some(&(rb, _))) if ra < rb => {
                            x += 1;
                            (ra, va)
                        }
                        (Some(&(ra, va)), None) => {
                            x += 1;
                            (ra, va)
                        }
                        (_, Some(&(rb, vb))) => {
                            y += 1;
                            (rb, s * vb)
                        }
                        (None, None) => unreachable!(),
                    };
                    if next.1 != re(0.0) {
                        out.push(next);
                    }
                }
                out
            })
            .collect();
        Ok(SparseOperator {
            domain: self.domain,
            codomain: self.codomain,
            cols,
            band: self.band.max(other.band),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.add_scaled(other, re(1.0))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add_scaled(other, re(-1.0))
    }

    /// Composition `self ∘ rhs`. Components leaving the truncation were
    /// already dropped by the factors, so only columns at least
    /// `band(self) + band(rhs)` shells inside the cut are exact.
    pub fn compose(&self, rhs: &Self) -> Result<Self> {
        if rhs.codomain != self.domain {
            return Err(Error::SpaceMismatch("composition: inner spaces differ".into()));
        }
        let mut acc = vec![C64::new(0.0, 0.0); self.codomain.dim()];
        let mut touched: Vec<usize> = Vec::new();
        let mut mark = vec![false; self.codomain.dim()];
        let cols = rhs
            .cols
            .iter()
            .map(|col| {
                for &(k, b) in col {
                    for &(r, a) in &self.cols[k] {
                        if !mark[r] {
                            mark[r] = true;
                            touched.push(r);
                        }
                        acc[r] += a * b;
                    }
                }
                touched.sort_unstable();
                let out: Vec<(usize, C64)> = touched
                    .iter()
                    .map(|&r| (r, acc[r]))
                    .filter(|e| e.1 != re(0.0))
                    .collect();
                for &r in &touched {
                    acc[r] = C64::new(0.0, 0.0);
                    mark[r] = false;
                }
                touched.clear();
                out
            })
            .collect();
        Ok(SparseOperator {
            domain: rhs.domain,
            codomain: self.codomain,
            cols,
            band: self.band + rhs.band,
        })
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        let mut out = SparseOperator::identity(self.domain);
        for _ in 0..k {
            out = self.compose(&out)?;
        }
        Ok(out)
    }

    /// Columns `0..ncols` (an interior prefix) as a dense matrix.
    pub fn to_dense(&self) -> DMatrix<C64> {
        let mut m = DMatrix::zeros(self.rows(), self.ncols());
        for (r, c, v) in self.entries() {
            m[(r, c)] = v;
        }
        m
    }

    /// Euclidean norm of column `c`.
    pub fn column_norm(&self, c: usize) -> f64 {
        self.cols[c].iter().map(|e| e.1.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest column norm over the first `ncols` columns.
    pub fn max_column_norm(&self, ncols: usize) -> f64 {
        (0..ncols.min(self.ncols())).map(|c| self.column_norm(c)).fold(0.0, f64::max)
    }

    /// Largest entrywise difference over the first `ncols` columns.
    pub fn max_abs_diff(&self, other: &Self, ncols: usize) -> Result<f64> {
        let d = self.sub(other)?;
        Ok(d.cols.iter().take(ncols).flatten().map(|e| e.1.norm()).fold(0.0, f64::max))
    }
}

/// `AB − BA`.
pub fn commutator(a: &SparseOperator, b: &SparseOperator) -> Result<SparseOperator> {
    if a.domain != a.codomain || b.domain != b.codomain || a.domain != b.domain {
        return Err(Error::SpaceMismatch("commutator needs square operators on one space".into()));
    }
    let ab = a.compose(b)?;
    let ba = b.compose(a)?;
    Ok(ab.sub(&ba)?.with_band(a.band + b.band))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(n: i64) -> TruncatedSpace {
        TruncatedSpace::new(n).unwrap()
    }

    #[test]
    fn triplets_merge_and_drop_zeros() {
        let s = space(1);
        let op = SparseOperator::from_triplets(
            s,
            s,
            1,
            vec![(0, 1, re(1.0)), (0, 1, re(2.0)), (2, 1, re(1.0)), (2, 1, re(-1.0))],
        )
        .unwrap();
        assert_eq!(op.nnz(), 1);
        assert_eq!(op.get(0, 1), re(3.0));
    }

    #[test]
    fn band_violation_is_rejected() {
        let s = space(2);
        // row 5 sits on shell 2, column 0 on shell 0
        assert!(SparseOperator::from_triplets(s, s, 1, vec![(5, 0, re(1.0))]).is_err());
    }

    #[test]
    fn compose_and_commute() {
        let s = space(2);
        let id = SparseOperator::identity(s);
        let d: Vec<C64> = (0..s.dim()).map(|k| re(k as f64)).collect();
        let diag = SparseOperator::diagonal(s, &d);
        let sq = diag.compose(&diag).unwrap();
        assert_eq!(sq.get(3, 3), re(9.0));
        let c = commutator(&id, &diag).unwrap();
        assert_eq!(c.nnz(), 0);
        let adj = diag.scale(C64::new(0.0, 1.0)).adjoint();
        assert_eq!(adj.get(2, 2), C64::new(0.0, -2.0));
    }
}
