//! Equivariant Dirac operators `e^(n)_{ij} ↦ d(n,i) e^(n)_{ij}` and the
//! scans that test them: growth of `d` along the lattice, signs of the row
//! and tail sets, the eigenvalue counting function, and multiplicities.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::assembly::{build_generator, commutator, interior_norm, GeneratorTag};
use crate::coefficients::DeformationParam;
use crate::error::{Error, Result};
use crate::halfint::{BasisLabel, TruncatedSpace};
use crate::sparse::{re, SparseOperator, C64};

#[derive(Debug, Clone, PartialEq)]
pub enum DiracFamily {
    /// `d = −(2n+1)` on the row `n = i`, `2n+1` elsewhere.
    GenericQ,
    /// `d = −(2n+1)` on the rows `n − i ∈ F`, `2n+1` elsewhere.
    SignSet(BTreeSet<i64>),
    /// The `⌊√(2n)⌋` staircase, four-summable with nontrivial sign.
    ClassicalStaircase,
    /// Explicit values keyed by `(n2, i2)`.
    Table(BTreeMap<(i64, i64), f64>),
}

impl DiracFamily {
    pub fn sign_set(rows: impl IntoIterator<Item = i64>) -> Result<Self> {
        let set: BTreeSet<i64> = rows.into_iter().collect();
        if let Some(&k) = set.iter().find(|&&k| k < 0) {
            return Err(Error::Parameter(format!("sign-set rows must be nonnegative, got {k}")));
        }
        Ok(DiracFamily::SignSet(set))
    }

    pub fn table(entries: BTreeMap<(i64, i64), f64>) -> Result<Self> {
        for (&(n2, i2), &v) in &entries {
            if !BasisLabel::is_valid(n2, i2, n2) {
                return Err(Error::InvalidLabel { n2, i2, j2: n2 });
            }
            if v == 0.0 || !v.is_finite() {
                return Err(Error::Parameter(format!("table value at (n2={n2}, i2={i2}) must be finite and nonzero")));
            }
        }
        Ok(DiracFamily::Table(entries))
    }

    /// Rows `k` with `d(n, n−k) < 0` for all large `n`, when the family is a
    /// row-sign family. Used to build `sign D = I − 2 Σ P_k`.
    pub fn negative_rows(&self) -> Option<BTreeSet<i64>> {
        match self {
            DiracFamily::GenericQ | DiracFamily::ClassicalStaircase => Some(BTreeSet::from([0])),
            DiracFamily::SignSet(f) => Some(f.clone()),
            DiracFamily::Table(_) => None,
        }
    }

    fn is_builtin(&self) -> bool {
        !matches!(self, DiracFamily::Table(_))
    }
}

impl fmt::Display for DiracFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiracFamily::GenericQ => write!(f, "generic"),
            DiracFamily::ClassicalStaircase => write!(f, "staircase"),
            DiracFamily::SignSet(s) => {
                let rows: Vec<String> = s.iter().map(|k| k.to_string()).collect();
                write!(f, "signset:{}", rows.join(","))
            }
            DiracFamily::Table(t) => write!(f, "table({} entries)", t.len()),
        }
    }
}

impl FromStr for DiracFamily {
    type Err = Error;

    /// Accepts `generic`, `staircase` and `signset:0,1,…`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "generic" => Ok(DiracFamily::GenericQ),
            "staircase" => Ok(DiracFamily::ClassicalStaircase),
            _ => {
                let rows = s
                    .strip_prefix("signset:")
                    .ok_or_else(|| Error::Parameter(format!("unknown family '{s}'")))?;
                let parsed: std::result::Result<Vec<i64>, _> =
                    rows.split(',').filter(|t| !t.trim().is_empty()).map(|t| t.trim().parse::<i64>()).collect();
                let parsed = parsed.map_err(|e| Error::Parameter(format!("bad sign-set row list '{rows}': {e}")))?;
                DiracFamily::sign_set(parsed)
            }
        }
    }
}

fn isqrt(v: i64) -> i64 {
    let mut r = (v as f64).sqrt() as i64;
    while r * r > v {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= v {
        r += 1;
    }
    r
}

/// `(s, k)` of the staircase on shell `n2 = 2n`: step `s = max(1, ⌊√(2n)⌋)` and
/// `k = ⌈2n/s⌉ − 1`.
fn staircase_params(n2: i64) -> (i64, i64) {
    let s = isqrt(n2).max(1);
    let k = (n2 + s - 1) / s - 1;
    (s, k)
}

fn staircase(n2: i64, i2: i64) -> f64 {
    let t = (n2 - i2) / 2;
    if n2 <= 1 {
        return if t == 0 { -1.0 } else { 2.0 };
    }
    let (s, k) = staircase_params(n2);
    let v = if t == 0 {
        -s
    } else if t < k {
        (t + 1) * s
    } else {
        n2
    };
    v as f64
}

pub fn d_value(family: &DiracFamily, n2: i64, i2: i64) -> Result<f64> {
    if !BasisLabel::is_valid(n2, i2, n2) {
        return Err(Error::InvalidLabel { n2, i2, j2: n2 });
    }
    let row = (n2 - i2) / 2;
    let level = (n2 + 1) as f64;
    Ok(match family {
        DiracFamily::GenericQ => {
            if row == 0 {
                -level
            } else {
                level
            }
        }
        DiracFamily::SignSet(f) => {
            if f.contains(&row) {
                -level
            } else {
                level
            }
        }
        DiracFamily::ClassicalStaircase => staircase(n2, i2),
        DiracFamily::Table(t) => *t
            .get(&(n2, i2))
            .ok_or_else(|| Error::Parameter(format!("table has no value at (n2={n2}, i2={i2})")))?,
    })
}

pub fn build_dirac(space: TruncatedSpace, family: &DiracFamily) -> Result<SparseOperator> {
    let mut cache: BTreeMap<(i64, i64), f64> = BTreeMap::new();
    let mut diag: Vec<C64> = Vec::with_capacity(space.dim());
    for l in space.labels() {
        let v = match cache.get(&(l.n2, l.i2)) {
            Some(&v) => v,
            None => {
                let v = d_value(family, l.n2, l.i2)?;
                cache.insert((l.n2, l.i2), v);
                v
            }
        };
        diag.push(re(v));
    }
    Ok(SparseOperator::diagonal(space, &diag))
}

/// Interior norms of `[D, g]` across truncation sizes.
pub fn commutator_norms(
    family: &DiracFamily,
    q: DeformationParam,
    g: GeneratorTag,
    sizes: &[i64],
) -> Result<Vec<(i64, f64)>> {
    sizes
        .iter()
        .map(|&n2_max| {
            let space = TruncatedSpace::new(n2_max)?;
            let d = build_dirac(space, family)?;
            let a = build_generator(space, q, g)?;
            let c = commutator(&d, &a)?;
            Ok((n2_max, interior_norm(&c, c.band())?))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Quantum,
    Classical,
}

impl Branch {
    pub fn of(q: DeformationParam) -> Self {
        if q.is_classical() {
            Branch::Classical
        } else {
            Branch::Quantum
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthReport {
    pub n2_scan: i64,
    pub branch: Branch,
    /// sup of `|d(n+½, i+½) − d(n,i)|`, divided by `((2n+2)/(n+i+1))^{1/2}` on
    /// the classical branch.
    pub sup_plus: f64,
    /// sup of `|d(n+½, i−½) − d(n,i)|` divided by `n+i+1` (quantum) or by
    /// `((2n+2)/(n−i+1))^{1/2}` (classical).
    pub sup_minus_scaled: f64,
    /// Per-shell maxima, indexed by the source shell `n2 = 0..n2_scan`.
    pub plus_series: Vec<f64>,
    pub minus_series: Vec<f64>,
    pub plus_bounded: bool,
    pub minus_bounded: bool,
    pub satisfied: bool,
}

/// Trend test for boundedness: past the midpoint, no shell maximum exceeds
/// the midpoint maximum by more than 5%.
fn bounded_trend(series: &[f64]) -> bool {
    let h = series.len() / 2;
    let Some(&base) = series.get(h) else { return true };
    series[h..].iter().all(|&v| v <= 1.05 * base + 1e-12)
}

pub fn check_growth_conditions(family: &DiracFamily, n2_scan: i64, branch: Branch) -> Result<GrowthReport> {
    if n2_scan < 4 {
        return Err(Error::Parameter(format!("growth scan needs n2_scan >= 4, got {n2_scan}")));
    }
    let shells: Result<Vec<(f64, f64)>> = (0..n2_scan)
        .into_par_iter()
        .map(|n2| {
            let (mut p, mut m) = (0.0f64, 0.0f64);
            for i2 in (-n2..=n2).step_by(2) {
                let d = d_value(family, n2, i2)?;
                let up = (d_value(family, n2 + 1, i2 + 1)? - d).abs();
                let down = (d_value(family, n2 + 1, i2 - 1)? - d).abs();
                let (n2f, i2f) = (n2 as f64, i2 as f64);
                let (sp, sm) = match branch {
                    Branch::Quantum => (up, down / ((n2f + i2f) / 2.0 + 1.0)),
                    Branch::Classical => (
                        up / (2.0 * (n2f + 2.0) / (n2f + i2f + 2.0)).sqrt(),
                        down / (2.0 * (n2f + 2.0) / (n2f - i2f + 2.0)).sqrt(),
                    ),
                };
                p = p.max(sp);
                m = m.max(sm);
            }
            Ok((p, m))
        })
        .collect();
    let shells = shells?;
    let plus_series: Vec<f64> = shells.iter().map(|s| s.0).collect();
    let minus_series: Vec<f64> = shells.iter().map(|s| s.1).collect();
    let plus_bounded = bounded_trend(&plus_series);
    let minus_bounded = bounded_trend(&minus_series);
    Ok(GrowthReport {
        n2_scan,
        branch,
        sup_plus: plus_series.iter().copied().fold(0.0, f64::max),
        sup_minus_scaled: minus_series.iter().copied().fold(0.0, f64::max),
        plus_series,
        minus_series,
        plus_bounded,
        minus_bounded,
        satisfied: plus_bounded && minus_bounded,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
    #[serde(rename = "mixed")]
    Mixed,
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
            Sign::Mixed => "mixed",
        })
    }
}

fn sign_of(values: impl IntoIterator<Item = f64>) -> Sign {
    let (mut pos, mut neg) = (false, false);
    for v in values {
        pos |= v > 0.0;
        neg |= v < 0.0;
    }
    match (pos, neg) {
        (true, true) => Sign::Mixed,
        (false, true) => Sign::Minus,
        _ => Sign::Plus,
    }
}

/// Signs of the sets `T(m)` and `S(m,n,r)`, `r = 0..=m`. Row `r` holds the
/// values `d((j+r)/2, (j−r)/2)`, that is `n2 = j + r`, `i2 = j − r`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignStructure {
    pub m: i64,
    pub n: i64,
    /// Rows and the `j` coordinate are scanned up to this value.
    pub scan: i64,
    pub sign_t: Sign,
    pub sign_s: Vec<Sign>,
}

pub fn sign_structure(family: &DiracFamily, m: i64, n: i64, scan: i64) -> Result<SignStructure> {
    if m < 0 || n < 0 || scan <= n || scan <= m {
        return Err(Error::Parameter(format!("sign scan needs 0 <= m, n < scan (m={m}, n={n}, scan={scan})")));
    }
    let row = |r: i64, js: std::ops::RangeInclusive<i64>| -> Result<Vec<f64>> {
        js.map(|j| d_value(family, j + r, j - r)).collect()
    };
    let sign_s = (0..=m).map(|r| Ok(sign_of(row(r, n + 1..=scan)?))).collect::<Result<Vec<_>>>()?;
    let mut tail = Vec::new();
    for r in m + 1..=scan {
        tail.extend(row(r, 0..=scan)?);
    }
    Ok(SignStructure { m, n, scan, sign_t: sign_of(tail), sign_s })
}

/// Shell-by-shell witnesses `|d(n,i)| ≤ K√n` on shells carrying both signs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShellWitness {
    pub n2: i64,
    pub mixed: bool,
    /// The `i2` of smallest `|d|` on a mixed shell when it meets the bound.
    pub witness_i2: Option<i64>,
    pub ok: bool,
}

pub fn classical_sign_sum_check(family: &DiracFamily, k: f64, n2_scan: i64) -> Result<Vec<ShellWitness>> {
    (1..=n2_scan)
        .map(|n2| {
            let vals: Vec<(i64, f64)> =
                (-n2..=n2).step_by(2).map(|i2| Ok((i2, d_value(family, n2, i2)?))).collect::<Result<_>>()?;
            let mixed = sign_of(vals.iter().map(|v| v.1)) == Sign::Mixed;
            if !mixed {
                return Ok(ShellWitness { n2, mixed, witness_i2: None, ok: true });
            }
            let bound = k * (n2 as f64 / 2.0).sqrt();
            let best = vals.iter().min_by(|a, b| a.1.abs().total_cmp(&b.1.abs())).copied();
            let witness_i2 = best.filter(|b| b.1.abs() <= bound).map(|b| b.0);
            Ok(ShellWitness { n2, mixed, witness_i2, ok: witness_i2.is_some() })
        })
        .collect()
}

/// `|d|` values on each shell with their multiplicities, sorted by value.
fn absolute_spectrum(family: &DiracFamily, shells: std::ops::RangeInclusive<i64>) -> Result<Vec<(f64, u64)>> {
    let per_shell: Result<Vec<Vec<(f64, u64)>>> = shells
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|n2| {
            (-n2..=n2)
                .step_by(2)
                .map(|i2| Ok((d_value(family, n2, i2)?.abs(), (n2 + 1) as u64)))
                .collect()
        })
        .collect();
    let mut all: Vec<(f64, u64)> = per_shell?.into_iter().flatten().collect();
    all.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut merged: Vec<(f64, u64)> = Vec::new();
    for (v, m) in all {
        match merged.last_mut() {
            Some(last) if last.0 == v => last.1 += m,
            _ => merged.push((v, m)),
        }
    }
    Ok(merged)
}

/// Strict bound below which every lattice point with `|d|` under it lies in
/// the truncation: the smallest `|d|` over the shells just past the cut.
/// For the built-in families `min_i |d(n,i)|` grows at most linearly, so the
/// shells up to `2·n2_max + 2` settle it. Tables have no values past the
/// cut and fall back to the boundary shell.
fn truncation_bound(family: &DiracFamily, n2_max: i64) -> Result<f64> {
    let shells = if family.is_builtin() { n2_max + 1..=2 * n2_max + 2 } else { n2_max..=n2_max };
    let spec = absolute_spectrum(family, shells)?;
    Ok(spec.first().map_or(f64::INFINITY, |v| v.0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionFit {
    pub n2_max: i64,
    pub lambda_grid: Vec<f64>,
    pub counting: Vec<u64>,
    pub slope: f64,
    /// Coefficient of determination of the log-log fit.
    pub fit_quality: f64,
    pub complete_up_to: f64,
}

/// Least-squares slope and R² of `y` against `x`.
fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    let slope = sxy / sxx;
    let r2 = if syy == 0.0 { 1.0 } else { (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0) };
    (slope, r2)
}

fn counting(spec: &[(f64, u64)], lambda: f64) -> u64 {
    spec.iter().take_while(|v| v.0 <= lambda).map(|v| v.1).sum()
}

/// Fits the growth exponent of `N(Λ)` over `Λ ∈ [complete/4, complete]`.
pub fn spectral_dimension(family: &DiracFamily, n2_max: i64, grid_size: usize) -> Result<DimensionFit> {
    if n2_max < 20 {
        return Err(Error::Parameter(format!("spectral dimension needs n2_max >= 20, got {n2_max}")));
    }
    let spec = absolute_spectrum(family, 0..=n2_max)?;
    let bound = truncation_bound(family, n2_max)?;
    let complete_up_to = spec.iter().map(|v| v.0).take_while(|&v| v < bound).last().unwrap_or(0.0);
    let lo = complete_up_to / 4.0;
    if grid_size < 5 || lo.is_nan() || lo <= 0.0 {
        return Err(Error::DegenerateFit(format!(
            "grid of {grid_size} points over [{lo}, {complete_up_to}] is too small"
        )));
    }
    let (llo, lhi) = (lo.ln(), complete_up_to.ln());
    let lambda_grid: Vec<f64> = (0..grid_size)
        .map(|k| (llo + (lhi - llo) * k as f64 / (grid_size - 1) as f64).exp())
        .collect();
    let counts: Vec<u64> = lambda_grid.iter().map(|&l| counting(&spec, l)).collect();
    let usable: Vec<(f64, f64)> = lambda_grid
        .iter()
        .zip(&counts)
        .filter(|(_, &c)| c > 0)
        .map(|(&l, &c)| (l.ln(), (c as f64).ln()))
        .collect();
    let distinct: BTreeSet<u64> = counts.iter().copied().filter(|&c| c > 0).collect();
    if usable.len() < 5 || distinct.len() < 2 {
        return Err(Error::DegenerateFit(format!("only {} usable grid points", usable.len())));
    }
    let (x, y): (Vec<f64>, Vec<f64>) = usable.into_iter().unzip();
    let (slope, fit_quality) = linear_fit(&x, &y);
    Ok(DimensionFit { n2_max, lambda_grid, counting: counts, slope, fit_quality, complete_up_to })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiplicityProfile {
    pub n2_max: i64,
    /// Every `|D|` eigenvalue in the truncation with its multiplicity.
    pub entries: Vec<(f64, u64)>,
    /// Eigenvalues below this value have their full multiplicity inside the
    /// truncation.
    pub complete_up_to: f64,
    /// Fitted exponent of multiplicity against eigenvalue over the complete range.
    pub exponent: f64,
}

pub fn multiplicity_profile(family: &DiracFamily, n2_max: i64) -> Result<MultiplicityProfile> {
    let entries = absolute_spectrum(family, 0..=n2_max)?;
    let bound = truncation_bound(family, n2_max)?;
    let complete: Vec<&(f64, u64)> = entries.iter().filter(|v| v.0 < bound).collect();
    let complete_up_to = complete.last().map_or(0.0, |v| v.0);
    let lo = complete_up_to / 4.0;
    let (x, y): (Vec<f64>, Vec<f64>) =
        complete.iter().filter(|v| v.0 >= lo && v.0 > 0.0).map(|v| (v.0.ln(), (v.1 as f64).ln())).unzip();
    if x.len() < 3 {
        return Err(Error::DegenerateFit(format!("only {} complete eigenvalues to fit", x.len())));
    }
    let (exponent, _) = linear_fit(&x, &y);
    Ok(MultiplicityProfile { n2_max, entries, complete_up_to, exponent })
}
