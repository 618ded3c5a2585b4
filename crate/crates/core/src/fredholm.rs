//! Fredholm indices of row compressions `P_k A P_k` and the K-homology
//! pairings built from them.
//!
//! A square truncation of a Fredholm operator always has index zero, so the
//! truncated near-kernel is filtered: only directions carrying less than 10%
//! of their mass on the two outermost shells are counted. A second method
//! works sector by sector on the lower-bidiagonal blocks of `P_k γ_r P_k`
//! and reads the index off the tail of each block.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};

use crate::assembly::{build_gamma, build_generator, choose_r, GeneratorTag};
use crate::coefficients::{k_coefficient, rep_coefficient, CoeffKind, DeformationParam};
use crate::dirac::DiracFamily;
use crate::error::{Error, Result};
use crate::halfint::{BasisLabel, TruncatedSpace};
use crate::linalg::{kernel_counts, largest_singular_value};
use crate::sparse::{re, SparseOperator, C64};

/// Share of a near-kernel direction allowed on the outer shells.
pub const BOUNDARY_MASS: f64 = 0.1;
/// Number of outer shells treated as boundary.
pub const BOUNDARY_SHELLS: i64 = 2;
pub const DEFAULT_TOL: f64 = 1e-6;

/// Projection onto the labels with `n − i = k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RowProjection {
    pub k: i64,
}

impl RowProjection {
    pub fn new(k: i64) -> Result<Self> {
        if k < 0 {
            return Err(Error::Parameter(format!("row index must be nonnegative, got {k}")));
        }
        Ok(RowProjection { k })
    }

    pub fn contains(&self, l: BasisLabel) -> bool {
        l.row() == self.k
    }
}

pub fn projection(space: TruncatedSpace, p: RowProjection) -> Result<SparseOperator> {
    if 2 * p.k > space.n2_max() {
        return Err(Error::TruncationTooSmall { needed: 2 * p.k, have: space.n2_max() });
    }
    let diag: Vec<C64> = space.labels().map(|l| re(if p.contains(l) { 1.0 } else { 0.0 })).collect();
    Ok(SparseOperator::diagonal(space, &diag))
}

/// A block `Q A P` between ranges of row projections, with rows and
/// columns labelled. Labels may repeat when several copies of the space are
/// stacked.
#[derive(Debug, Clone, PartialEq)]
pub struct Compression {
    pub n2_max: i64,
    pub rows: Vec<BasisLabel>,
    pub cols: Vec<BasisLabel>,
    /// Column-major entries `(row position, value)`.
    pub entries: Vec<Vec<(usize, C64)>>,
}

impl Compression {
    pub fn get(&self, r: usize, c: usize) -> C64 {
        self.entries[c].iter().find(|e| e.0 == r).map_or(re(0.0), |e| e.1)
    }

    pub fn column_norm(&self, c: usize) -> f64 {
        self.entries[c].iter().map(|e| e.1.norm_sqr()).sum::<f64>().sqrt()
    }

    fn boundary(&self, labels: &[BasisLabel]) -> Vec<bool> {
        labels.iter().map(|l| l.n2 > self.n2_max - BOUNDARY_SHELLS).collect()
    }
}

fn range_positions(space: TruncatedSpace, rows: &BTreeSet<i64>) -> (Vec<BasisLabel>, HashMap<usize, usize>) {
    let mut labels = Vec::new();
    let mut pos = HashMap::new();
    for (idx, l) in space.labels().enumerate() {
        if rows.contains(&l.row()) {
            pos.insert(idx, labels.len());
            labels.push(l);
        }
    }
    (labels, pos)
}

/// `Q A P` with `P`, `Q` sums of row projections over the given row sets.
pub fn compress_rows(a: &SparseOperator, from: &BTreeSet<i64>, to: &BTreeSet<i64>) -> Compression {
    let space = a.domain();
    let (cols, col_pos) = range_positions(space, from);
    let (rows, row_pos) = range_positions(a.codomain(), to);
    let mut entries = vec![Vec::new(); cols.len()];
    for (&idx, &c) in &col_pos {
        entries[c] = a.column(idx).iter().filter_map(|&(r, v)| row_pos.get(&r).map(|&rr| (rr, v))).collect();
    }
    Compression { n2_max: space.n2_max(), rows, cols, entries }
}

pub fn compress(a: &SparseOperator, p: RowProjection, q: RowProjection) -> Compression {
    compress_rows(a, &BTreeSet::from([p.k]), &BTreeSet::from([q.k]))
}

/// Integer index once the last three sizes agree, `unstable` otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stabilized {
    Value(i64),
    Unstable,
}

impl Stabilized {
    pub fn value(self) -> Option<i64> {
        match self {
            Stabilized::Value(v) => Some(v),
            Stabilized::Unstable => None,
        }
    }
}

impl fmt::Display for Stabilized {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stabilized::Value(v) => write!(f, "{v}"),
            Stabilized::Unstable => f.write_str("unstable"),
        }
    }
}

impl Serialize for Stabilized {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Stabilized::Value(v) => s.serialize_i64(*v),
            Stabilized::Unstable => s.serialize_str("unstable"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndexReport {
    pub truncation_sizes: Vec<i64>,
    /// Filtered kernel and cokernel dimensions per size.
    pub ker_dims: Vec<usize>,
    pub coker_dims: Vec<usize>,
    /// Unfiltered counts, kept for diagnostics.
    pub raw_ker_dims: Vec<usize>,
    pub raw_coker_dims: Vec<usize>,
    pub indices: Vec<i64>,
    /// Smallest singular value kept out of the near-kernel, per size.
    pub min_retained_sigma: Vec<f64>,
    /// Whether that value exceeded `10·tol` at every size.
    pub gap_ok: bool,
    pub stabilized_index: Stabilized,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sector_indices: Option<Vec<(i64, i64)>>,
    pub tol: f64,
}

fn check_sizes(sizes: &[i64]) -> Result<()> {
    if sizes.len() < 3 || sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Parameter(format!("need at least 3 strictly increasing sizes, got {sizes:?}")));
    }
    Ok(())
}

/// Runs the filtered near-kernel count on `build(space)` for every size.
pub fn index_of_compressions(
    build: impl Fn(TruncatedSpace) -> Result<Compression>,
    sizes: &[i64],
    tol: f64,
) -> Result<IndexReport> {
    check_sizes(sizes)?;
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Parameter(format!("tolerance must be positive, got {tol}")));
    }
    let mut rep = IndexReport {
        truncation_sizes: sizes.to_vec(),
        ker_dims: vec![],
        coker_dims: vec![],
        raw_ker_dims: vec![],
        raw_coker_dims: vec![],
        indices: vec![],
        min_retained_sigma: vec![],
        gap_ok: true,
        stabilized_index: Stabilized::Unstable,
        sector_indices: None,
        tol,
    };
    for &n2_max in sizes {
        let c = build(TruncatedSpace::new(n2_max)?)?;
        let kc = kernel_counts(
            &c.entries,
            c.rows.len(),
            &c.boundary(&c.rows),
            &c.boundary(&c.cols),
            tol,
            BOUNDARY_MASS,
        );
        let sigma = kc.min_retained_sigma.unwrap_or(f64::INFINITY);
        rep.gap_ok &= sigma > 10.0 * tol;
        rep.ker_dims.push(kc.ker_interior);
        rep.coker_dims.push(kc.coker_interior);
        rep.raw_ker_dims.push(kc.ker_all);
        rep.raw_coker_dims.push(kc.coker_all);
        rep.indices.push(kc.ker_interior as i64 - kc.coker_interior as i64);
        rep.min_retained_sigma.push(sigma);
    }
    let last = &rep.indices[rep.indices.len() - 3..];
    if rep.gap_ok && last.iter().all(|&v| v == last[0]) {
        rep.stabilized_index = Stabilized::Value(last[0]);
    }
    Ok(rep)
}

/// Index of `P A P` where `a` builds the operator on each truncation.
pub fn numerical_index(
    a: impl Fn(TruncatedSpace) -> Result<SparseOperator>,
    p: RowProjection,
    sizes: &[i64],
    tol: f64,
) -> Result<IndexReport> {
    index_of_compressions(|space| Ok(compress(&a(space)?, p, p)), sizes, tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SectorModel {
    /// Entries of the untruncated `P_k γ_r P_k`, summed over `ε`-paths.
    Exact,
    /// The leading-order closed forms for `k = 0`. They agree with the exact
    /// entries up to terms that vanish as `n → ∞`.
    ClosedForm,
}

/// Lower-bidiagonal block of `P_k γ_r P_k` on the sector `n + j = s`, over the
/// labels `(n2, n2 − 2k, 2s − n2)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectorMatrix {
    pub s: i64,
    pub k: i64,
    pub n2: Vec<i64>,
    pub diag: Vec<f64>,
    /// `sub[m]` maps the label at `n2[m]` to the one at `n2[m] + 1`.
    pub sub: Vec<f64>,
}

fn sector_label(k: i64, s: i64, n2: i64) -> BasisLabel {
    BasisLabel { n2, i2: n2 - 2 * k, j2: 2 * s - n2 }
}

/// `(β*β)^r` applied to a finite combination, using `β*β = ββ*` and the
/// `k_ε` coefficients.
fn bsb_power(q: DeformationParam, r: u32, start: Vec<(BasisLabel, f64)>) -> Result<HashMap<BasisLabel, f64>> {
    let mut cur: HashMap<BasisLabel, f64> = HashMap::new();
    for (l, v) in start {
        *cur.entry(l).or_insert(0.0) += v;
    }
    for _ in 0..r {
        let mut next: HashMap<BasisLabel, f64> = HashMap::with_capacity(cur.len() * 3);
        for (&l, &v) in &cur {
            for eps in -1..=1 {
                if let Some(t) = l.shifted(2 * eps, 0, 0) {
                    let c = k_coefficient(q, eps, l)?;
                    if c != 0.0 {
                        *next.entry(t).or_insert(0.0) += c * v;
                    }
                }
            }
        }
        cur = next;
    }
    Ok(cur)
}

fn exact_entries(q: DeformationParam, r: u32, k: i64, s: i64, n2: i64) -> Result<(f64, f64)> {
    let l = sector_label(k, s, n2);
    let diag_path = bsb_power(q, r, vec![(l, 1.0)])?;
    let diag = 1.0 - diag_path.get(&l).copied().unwrap_or(0.0);
    let mut beta_col = Vec::new();
    for kind in [CoeffKind::BPlus, CoeffKind::BMinus] {
        if let Some(t) = kind.target(l) {
            beta_col.push((t, rep_coefficient(q, kind, l)?));
        }
    }
    let sub_path = bsb_power(q, r, beta_col)?;
    let sub = sub_path.get(&sector_label(k, s, n2 + 1)).copied().unwrap_or(0.0);
    Ok((diag, sub))
}

fn closed_form_entries(q: f64, r: u32, s: i64, n2: i64) -> (f64, f64) {
    // n − j = n2 − s in doubled-free units, so q^{2n−2j} = q^{2(n2−s)}
    let gap = 2 * (n2 - s);
    let base = q.powi((2 * r as i64 * s) as i32) * (1.0 - q.powi(gap as i32)).powi(r as i32);
    let diag = 1.0 - base;
    let sub = -base * q.powi(s as i32) * (1.0 - q.powi(gap as i32 + 2)).sqrt();
    (diag, sub)
}

/// The block of sector `s` over `n2 = max(k, s) ..= n2_hi`.
pub fn sector_matrix(
    q: DeformationParam,
    r: u32,
    k: i64,
    s: i64,
    n2_hi: i64,
    model: SectorModel,
) -> Result<SectorMatrix> {
    let qv = q.require_quantum("sector decomposition")?;
    if k < 0 || s < 0 {
        return Err(Error::Parameter(format!("row and sector must be nonnegative (k={k}, s={s})")));
    }
    if model == SectorModel::ClosedForm && k != 0 {
        return Err(Error::Parameter("closed forms exist only for the row k = 0".into()));
    }
    let lo = k.max(s);
    let n2: Vec<i64> = (lo..=n2_hi).collect();
    let pairs: Vec<(f64, f64)> = n2
        .par_iter()
        .map(|&m| match model {
            SectorModel::Exact => exact_entries(q, r, k, s, m),
            SectorModel::ClosedForm => Ok(closed_form_entries(qv, r, s, m)),
        })
        .collect::<Result<_>>()?;
    let diag = pairs.iter().map(|p| p.0).collect();
    let sub = pairs.iter().take(pairs.len().saturating_sub(1)).map(|p| p.1).collect();
    Ok(SectorMatrix { s, k, n2, diag, sub })
}

/// Every sector of `P_k γ_r P_k` present in the truncation `n2 ≤ n2_max`.
pub fn sector_decompose(
    q: DeformationParam,
    r: u32,
    k: i64,
    n2_max: i64,
    model: SectorModel,
) -> Result<Vec<SectorMatrix>> {
    (0..=n2_max)
        .filter(|&s| k.max(s) <= n2_max)
        .map(|s| sector_matrix(q, r, k, s, n2_max, model))
        .collect()
}

/// Reassembles sector blocks into `P_k γ_r P_k` on the truncation, in the
/// row/column order of [`compress`].
pub fn embed_sectors(space: TruncatedSpace, sectors: &[SectorMatrix]) -> Result<Compression> {
    let k = sectors.first().map_or(0, |s| s.k);
    let (labels, _) = range_positions(space, &BTreeSet::from([k]));
    let pos: HashMap<BasisLabel, usize> = labels.iter().enumerate().map(|(p, &l)| (l, p)).collect();
    let mut entries = vec![Vec::new(); labels.len()];
    for sm in sectors {
        for (m, &n2) in sm.n2.iter().enumerate() {
            let c = *pos
                .get(&sector_label(sm.k, sm.s, n2))
                .ok_or_else(|| Error::SpaceMismatch(format!("sector {} label at n2={n2} outside truncation", sm.s)))?;
            entries[c].push((c, re(sm.diag[m])));
            if let Some(&v) = sm.sub.get(m) {
                if let Some(&rp) = pos.get(&sector_label(sm.k, sm.s, n2 + 1)) {
                    entries[c].push((rp, re(v)));
                }
            }
        }
    }
    Ok(Compression { n2_max: space.n2_max(), rows: labels.clone(), cols: labels, entries })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SectorIndex {
    MinusOne,
    Zero,
    Undetermined,
}

impl SectorIndex {
    pub fn value(self) -> Option<i64> {
        match self {
            SectorIndex::MinusOne => Some(-1),
            SectorIndex::Zero => Some(0),
            SectorIndex::Undetermined => None,
        }
    }
}

const TAIL_TOL: f64 = 1e-6;

fn settled(a: f64, b: f64) -> bool {
    (a - b).abs() <= TAIL_TOL * a.abs().max(b.abs()).max(1.0)
}

/// Index of a lower-bidiagonal block from its tail: shift-dominated tails
/// (`|sub| > |diag|`) contribute `−1`, diagonal-dominated ones `0`.
pub fn sector_index(sm: &SectorMatrix) -> Result<SectorIndex> {
    let m = sm.sub.len();
    if m < 2 {
        return Err(Error::NotConverged(format!("sector {} has fewer than two tail pairs", sm.s)));
    }
    let (d0, d1) = (sm.diag[m - 2], sm.diag[m - 1]);
    let (g0, g1) = (sm.sub[m - 2], sm.sub[m - 1]);
    if !(settled(d0, d1) && settled(g0, g1)) {
        return Err(Error::NotConverged(format!(
            "sector {}: tail diag {d0} -> {d1}, sub {g0} -> {g1}",
            sm.s
        )));
    }
    let gap = d1.abs() - g1.abs();
    Ok(if gap.abs() < 1e-9 {
        SectorIndex::Undetermined
    } else if gap < 0.0 {
        SectorIndex::MinusOne
    } else {
        SectorIndex::Zero
    })
}

/// Extends the sector past any truncation until its tail settles.
pub fn sector_index_converged(q: DeformationParam, r: u32, k: i64, s: i64) -> Result<SectorIndex> {
    let lo = k.max(s);
    let mut hi = lo + 16;
    loop {
        let sm = sector_matrix(q, r, k, s, hi, SectorModel::Exact)?;
        match sector_index(&sm) {
            Err(Error::NotConverged(_)) if hi - lo < 4096 => hi = lo + 2 * (hi - lo),
            other => return other,
        }
    }
}

/// Total index, or `None` if some sector is undetermined, plus the nonzero
/// `(sector, index)` contributions.
pub type SectorTotal = (Option<i64>, Vec<(i64, i64)>);

/// Sector-method index of `P_k γ_r P_k` summed over the sectors present at
/// truncation `n2_max`.
pub fn sector_total(q: DeformationParam, r: u32, k: i64, n2_max: i64) -> Result<SectorTotal> {
    let per: Vec<(i64, SectorIndex)> = (0..=n2_max)
        .into_par_iter()
        .filter(|&s| k.max(s) <= n2_max)
        .map(|s| Ok((s, sector_index_converged(q, r, k, s)?)))
        .collect::<Result<_>>()?;
    let mut total = Some(0);
    let mut table = Vec::new();
    for (s, idx) in per {
        match idx.value() {
            Some(v) => {
                total = total.map(|t| t + v);
                if v != 0 {
                    table.push((s, v));
                }
            }
            None => total = None,
        }
    }
    Ok((total, table))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairingReport {
    pub r: u32,
    pub rows: Vec<i64>,
    pub per_row: Vec<IndexReport>,
    /// `−Σ_k index(P_k γ_r P_k)`.
    pub pairing: Stabilized,
}

/// Pairing of `[γ_r]` with the class of a Dirac operator whose sign is
/// `I − 2 Σ_{k∈F} P_k`.
pub fn pairing(
    sizes: &[i64],
    q: DeformationParam,
    r: Option<u32>,
    rows: &BTreeSet<i64>,
    tol: f64,
) -> Result<PairingReport> {
    check_sizes(sizes)?;
    let r = match r {
        Some(r) => r,
        None => choose_r(q)?.r,
    };
    let mut per_row = Vec::new();
    let mut total = Some(0i64);
    for &k in rows {
        let p = RowProjection::new(k)?;
        let rep = numerical_index(|space| build_gamma(space, q, r), p, sizes, tol)?;
        total = total.and_then(|t| rep.stabilized_index.value().map(|v| t - v));
        per_row.push(rep);
    }
    Ok(PairingReport {
        r,
        rows: rows.iter().copied().collect(),
        per_row,
        pairing: total.map_or(Stabilized::Unstable, Stabilized::Value),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompactnessProfile {
    pub from: i64,
    pub to: i64,
    pub n2_max: i64,
    /// `(n2, norm of the compression on the columns at shell n2)`, over the
    /// shells whose columns are exact.
    pub series: Vec<(i64, f64)>,
    pub compact_consistent: bool,
}

pub fn compactness_profile(a: &SparseOperator, from: RowProjection, to: RowProjection) -> Result<CompactnessProfile> {
    if from == to {
        return Err(Error::Parameter("compactness profile needs two different rows".into()));
    }
    let space = a.domain();
    let c = compress(a, from, to);
    let top = space.n2_max() - a.band();
    let series: Vec<(i64, f64)> = (from.k..=top)
        .into_par_iter()
        .map(|n2| {
            let cols: Vec<&[(usize, C64)]> = c
                .cols
                .iter()
                .enumerate()
                .filter(|(_, l)| l.n2 == n2)
                .map(|(k, _)| c.entries[k].as_slice())
                .collect();
            (n2, largest_singular_value(&cols, c.rows.len()))
        })
        .collect();
    let peak = series.iter().map(|s| s.1).fold(0.0, f64::max);
    let tail = &series[series.len() / 2..];
    let decreasing = tail.windows(2).all(|w| w[1].1 <= 1.05 * w[0].1 + 1e-300);
    let last = series.last().map_or(0.0, |s| s.1);
    let compact_consistent = peak == 0.0 || (decreasing && last <= 0.1 * peak);
    Ok(CompactnessProfile { from: from.k, to: to.k, n2_max: space.n2_max(), series, compact_consistent })
}

/// The block unitary `[[α, −cβ*], [β, α*]]` on two copies of the truncation,
/// with `c = q` (or 1 classically), compressed by `P ⊕ P`.
pub fn fundamental_unitary_compression(
    space: TruncatedSpace,
    q: DeformationParam,
    rows: &BTreeSet<i64>,
) -> Result<Compression> {
    let g = |t| build_generator(space, q, t);
    let (a, a_s, b, b_s) = (g(GeneratorTag::Alpha)?, g(GeneratorTag::AlphaStar)?, g(GeneratorTag::Beta)?, g(GeneratorTag::BetaStar)?);
    let c = q.q();
    let blocks = [
        [compress_rows(&a, rows, rows), compress_rows(&b_s.scale(re(-c)), rows, rows)],
        [compress_rows(&b, rows, rows), compress_rows(&a_s, rows, rows)],
    ];
    let m = blocks[0][0].cols.len();
    let mut entries = Vec::with_capacity(2 * m);
    for (top, bottom) in blocks[0].iter().zip(&blocks[1]) {
        for col in 0..m {
            let mut e: Vec<(usize, C64)> = top.entries[col].clone();
            e.extend(bottom.entries[col].iter().map(|&(r, v)| (r + m, v)));
            entries.push(e);
        }
    }
    let labels: Vec<BasisLabel> = blocks[0][0].cols.iter().chain(&blocks[0][0].cols).copied().collect();
    Ok(Compression { n2_max: space.n2_max(), rows: labels.clone(), cols: labels, entries })
}

/// Index of the fundamental unitary compressed by the negative spectral
/// projection of `D` (up to compacts).
pub fn pairing_fundamental_unitary(
    sizes: &[i64],
    q: DeformationParam,
    family: &DiracFamily,
    tol: f64,
) -> Result<IndexReport> {
    let rows = family
        .negative_rows()
        .ok_or_else(|| Error::Parameter(format!("family {family} has no row-projection sign")))?;
    index_of_compressions(|space| fundamental_unitary_compression(space, q, &rows), sizes, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: DeformationParam = DeformationParam::Quantum(0.5);

    #[test]
    fn projection_rank_and_partition() {
        let space = TruncatedSpace::new(4).unwrap();
        let p0 = projection(space, RowProjection::new(0).unwrap()).unwrap();
        let rank: f64 = (0..space.dim()).map(|k| p0.get(k, k).re).sum();
        assert_eq!(rank, 15.0);
        let p1 = projection(space, RowProjection::new(1).unwrap()).unwrap();
        assert_eq!(p0.compose(&p1).unwrap().nnz(), 0);
        let mut total = SparseOperator::zeros(space, space, 0);
        for k in 0..=2 {
            total = total.add(&projection(space, RowProjection::new(k).unwrap()).unwrap()).unwrap();
        }
        // rows k = 3, 4 only live on shells n2 >= 6 and n2 >= 8 when 2k > n2_max
        let rest = SparseOperator::identity(space).sub(&total).unwrap();
        assert!(rest.entries().all(|(r, c, _)| r == c && space.label_at(c).unwrap().row() > 2));
        assert!(projection(space, RowProjection::new(3).unwrap()).is_err());
    }

    #[test]
    fn compress_identity() {
        let space = TruncatedSpace::new(5).unwrap();
        let p = RowProjection::new(1).unwrap();
        let c = compress(&SparseOperator::identity(space), p, p);
        assert_eq!(c.rows, c.cols);
        for k in 0..c.cols.len() {
            assert_eq!(c.entries[k], vec![(k, re(1.0))]);
        }
    }

    #[test]
    fn closed_form_limits() {
        let s0 = sector_matrix(Q, 1, 0, 0, 80, SectorModel::ClosedForm).unwrap();
        assert!(s0.diag.last().unwrap().abs() < 1e-12);
        assert!((s0.sub.last().unwrap() + 1.0).abs() < 1e-12);
        let s1 = sector_matrix(Q, 1, 0, 1, 80, SectorModel::ClosedForm).unwrap();
        assert!((s1.diag.last().unwrap() - 0.75).abs() < 1e-12);
        assert!((s1.sub.last().unwrap() + 0.125).abs() < 1e-12);
    }

    #[test]
    fn exact_sector_zero_start() {
        let s0 = sector_matrix(Q, 1, 0, 0, 4, SectorModel::Exact).unwrap();
        assert!((s0.diag[0] - 0.2).abs() < 1e-15);
        assert!(sector_matrix(Q, 1, 1, 0, 4, SectorModel::ClosedForm).is_err());
    }

    #[test]
    fn sector_indices_at_half() {
        assert_eq!(sector_index_converged(Q, 1, 0, 0).unwrap(), SectorIndex::MinusOne);
        for s in 1..6 {
            assert_eq!(sector_index_converged(Q, 1, 0, s).unwrap(), SectorIndex::Zero);
        }
        let (total, table) = sector_total(Q, 1, 0, 20).unwrap();
        assert_eq!(total, Some(-1));
        assert_eq!(table, vec![(0, -1)]);
    }

    #[test]
    fn unconverged_tail_is_an_error() {
        let sm = sector_matrix(Q, 1, 0, 0, 3, SectorModel::Exact).unwrap();
        assert!(matches!(sector_index(&sm), Err(Error::NotConverged(_))));
    }

    #[test]
    fn identity_has_index_zero() {
        let rep = numerical_index(|s| Ok(SparseOperator::identity(s)), RowProjection { k: 0 }, &[6, 8, 10], 1e-6).unwrap();
        assert_eq!(rep.stabilized_index, Stabilized::Value(0));
        assert!(numerical_index(|s| Ok(SparseOperator::identity(s)), RowProjection { k: 0 }, &[6, 8], 1e-6).is_err());
    }

    #[test]
    fn empty_pairing() {
        let rep = pairing(&[8, 10, 12], Q, None, &BTreeSet::new(), 1e-6).unwrap();
        assert_eq!(rep.pairing, Stabilized::Value(0));
    }

    #[test]
    fn identity_is_not_compact_off_diagonal_trivially() {
        let space = TruncatedSpace::new(10).unwrap();
        let prof =
            compactness_profile(&SparseOperator::identity(space), RowProjection { k: 0 }, RowProjection { k: 1 }).unwrap();
        assert!(prof.series.iter().all(|s| s.1 == 0.0));
        assert!(prof.compact_consistent);
        assert!(compactness_profile(&SparseOperator::identity(space), RowProjection { k: 0 }, RowProjection { k: 0 }).is_err());
    }

    #[test]
    fn trivial_sign_pairs_to_zero() {
        let fam = DiracFamily::sign_set([]).unwrap();
        let rep = pairing_fundamental_unitary(&[6, 8, 10], Q, &fam, 1e-6).unwrap();
        assert_eq!(rep.stabilized_index, Stabilized::Value(0));
        assert!(pairing_fundamental_unitary(&[6, 8, 10], Q, &DiracFamily::Table(Default::default()), 1e-6).is_err());
    }
}
