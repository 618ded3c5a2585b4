//! Matrices of the algebra generators, the dual generators `A₀`, `A₁`, and the
//! elements built from them (monomials, `γ_r`, the approximate `K₁` generator).
//!
//! Components that leave the truncation are dropped. A column is exact when
//! it lies at least `band` shells inside the cut, so every measurement goes
//! through [`interior_norm`] or an explicit interior column count.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::coefficients::{
    alpha_star_coefficient, k_coefficient, rep_coefficient, AlphaStarKind, CoeffKind, DeformationParam,
};
use crate::error::{Error, Result};
use crate::halfint::{BasisLabel, TruncatedSpace};
use crate::linalg::{hermitian_eigen, largest_singular_value};
use crate::sparse::{re, SparseOperator, C64};

pub use crate::sparse::commutator;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GeneratorTag {
    Alpha,
    AlphaStar,
    Beta,
    BetaStar,
    A0,
    A1,
    A1Star,
    Identity,
}

fn shift_operator(
    space: TruncatedSpace,
    band: i64,
    mut coeffs: impl FnMut(BasisLabel) -> Result<Vec<(Option<BasisLabel>, f64)>>,
) -> Result<SparseOperator> {
    let mut cols = Vec::with_capacity(space.dim());
    for label in space.labels() {
        let mut col = Vec::with_capacity(2);
        for (target, v) in coeffs(label)? {
            if let Some(t) = target {
                if let Some(r) = space.index_of(t) {
                    if v != 0.0 {
                        col.push((r, re(v)));
                    }
                }
            }
        }
        cols.push(col);
    }
    Ok(SparseOperator::from_columns(space, space, band, cols))
}

fn rep_pair(q: DeformationParam, plus: CoeffKind, minus: CoeffKind, l: BasisLabel) -> Result<Vec<(Option<BasisLabel>, f64)>> {
    Ok(vec![
        (plus.target(l), rep_coefficient(q, plus, l)?),
        (minus.target(l), rep_coefficient(q, minus, l)?),
    ])
}

/// `(q^{−2n} + q^{2n+2} − q^{−2j} − q^{2j+2})^{1/2}`, the `A₁` coefficient.
fn a1_coefficient(q: f64, l: BasisLabel) -> f64 {
    if l.j2 >= l.n2 {
        return 0.0;
    }
    let p = |e: i64| q.powi(e as i32);
    (p(-l.n2) + p(l.n2 + 2) - p(-l.j2) - p(l.j2 + 2)).max(0.0).sqrt()
}

pub fn build_generator(space: TruncatedSpace, q: DeformationParam, g: GeneratorTag) -> Result<SparseOperator> {
    q.validate()?;
    match g {
        GeneratorTag::Identity => Ok(SparseOperator::identity(space)),
        GeneratorTag::Alpha => shift_operator(space, 1, |l| rep_pair(q, CoeffKind::APlus, CoeffKind::AMinus, l)),
        GeneratorTag::Beta => shift_operator(space, 1, |l| rep_pair(q, CoeffKind::BPlus, CoeffKind::BMinus, l)),
        GeneratorTag::BetaStar => {
            shift_operator(space, 1, |l| rep_pair(q, CoeffKind::BStarPlus, CoeffKind::BStarMinus, l))
        }
        GeneratorTag::AlphaStar => shift_operator(space, 1, |l| {
            Ok(vec![
                (AlphaStarKind::Plus.target(l), alpha_star_coefficient(q, AlphaStarKind::Plus, l)?),
                (AlphaStarKind::Minus.target(l), alpha_star_coefficient(q, AlphaStarKind::Minus, l)?),
            ])
        }),
        GeneratorTag::A0 => {
            let q = q.require_quantum("dual generator A0")?;
            let diag: Vec<C64> = space.labels().map(|l| re(q.powf(l.j2 as f64 / 2.0))).collect();
            Ok(SparseOperator::diagonal(space, &diag))
        }
        GeneratorTag::A1 => {
            let q = q.require_quantum("dual generator A1")?;
            shift_operator(space, 0, |l| Ok(vec![(l.shifted(0, 0, 2), a1_coefficient(q, l))]))
        }
        GeneratorTag::A1Star => {
            let q = q.require_quantum("dual generator A1*")?;
            // A₁* e^(n)_{ij} = c(n, i, j−1) e^(n)_{i,j−1}
            shift_operator(space, 0, |l| {
                let down = l.shifted(0, 0, -2);
                Ok(vec![(down, down.map_or(0.0, |d| a1_coefficient(q, d)))])
            })
        }
    }
}

/// `ββ*` assembled directly from the `k_ε` coefficients, band 2.
pub fn build_k_assembly(space: TruncatedSpace, q: DeformationParam) -> Result<SparseOperator> {
    shift_operator(space, 2, |l| {
        (-1..=1).map(|eps| Ok((l.shifted(2 * eps, 0, 0), k_coefficient(q, eps, l)?))).collect()
    })
}

/// `α_p β^s (β*)^t` with `α_p = α^p` for `p ≥ 0` and `(α*)^{−p}` otherwise.
pub fn build_monomial(space: TruncatedSpace, q: DeformationParam, p: i64, s: u32, t: u32) -> Result<SparseOperator> {
    let band = p.abs() + s as i64 + t as i64;
    if band > space.n2_max() {
        return Err(Error::TruncationTooSmall { needed: band, have: space.n2_max() });
    }
    let alpha_tag = if p >= 0 { GeneratorTag::Alpha } else { GeneratorTag::AlphaStar };
    let alpha = build_generator(space, q, alpha_tag)?;
    let beta = build_generator(space, q, GeneratorTag::Beta)?;
    let beta_star = build_generator(space, q, GeneratorTag::BetaStar)?;
    let mut out = beta_star.pow(t)?;
    out = beta.pow(s)?.compose(&out)?;
    out = alpha.pow(p.unsigned_abs() as u32)?.compose(&out)?;
    Ok(out.with_band(band))
}

/// Choice of the exponent `r` in `γ_r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RChoice {
    pub r: u32,
    /// Set when `q^{2(r−1)} = ½` (to rounding), so only the strict inequality holds.
    pub tie: bool,
}

/// Smallest `r ≥ 1` with `q^{2r} < ½`.
pub fn choose_r(q: DeformationParam) -> Result<RChoice> {
    let q = q.require_quantum("choice of r")?;
    let q2 = q * q;
    // powers within rounding of ½ count as equal to it
    let near_half = |v: f64| (v - 0.5).abs() <= 1e-14;
    let mut r = 1u32;
    let mut pow = q2;
    while pow > 0.5 || near_half(pow) {
        r += 1;
        pow *= q2;
    }
    let tie = near_half(q2.powi(r as i32 - 1));
    Ok(RChoice { r, tie })
}

/// `γ_r = (β*β)^r (β − I) + I`, band `2r + 1`.
pub fn build_gamma(space: TruncatedSpace, q: DeformationParam, r: u32) -> Result<SparseOperator> {
    let band = 2 * r as i64 + 1;
    if band > space.n2_max() {
        return Err(Error::TruncationTooSmall { needed: band, have: space.n2_max() });
    }
    let beta = build_generator(space, q, GeneratorTag::Beta)?;
    let beta_star = build_generator(space, q, GeneratorTag::BetaStar)?;
    let id = SparseOperator::identity(space);
    let bsb = beta_star.compose(&beta)?;
    let shifted = beta.sub(&id)?;
    let gamma = bsb.pow(r)?.compose(&shifted)?.add(&id)?;
    Ok(gamma.with_band(band))
}

/// Truncated stand-in for `χ_{{1}}(β*β)(β − I) + I`.
#[derive(Debug, Clone)]
pub struct UApprox {
    pub op: SparseOperator,
    pub window: f64,
    /// Smallest truncated eigenvalue of `β*β` above the window.
    pub min_above: Option<f64>,
    /// Largest truncated eigenvalue of `β*β` at or below the window.
    pub max_below: Option<f64>,
    pub projection_rank: usize,
}

pub fn build_u_approx(space: TruncatedSpace, q: DeformationParam, window: f64) -> Result<UApprox> {
    let qv = q.require_quantum("approximate K1 generator")?;
    if !(window > qv && window < 1.0) {
        return Err(Error::Parameter(format!("window must lie in (q, 1) = ({qv}, 1), got {window}")));
    }
    let beta = build_generator(space, q, GeneratorTag::Beta)?;
    let beta_star = build_generator(space, q, GeneratorTag::BetaStar)?;
    let bsb = beta_star.compose(&beta)?;
    // β*β keeps (i, j) fixed, so it is block diagonal over (i2, j2)
    let mut blocks: BTreeMap<(i64, i64), Vec<usize>> = BTreeMap::new();
    for (k, l) in space.labels().enumerate() {
        blocks.entry((l.i2, l.j2)).or_default().push(k);
    }
    let mut cols: Vec<Vec<(usize, C64)>> = vec![Vec::new(); space.dim()];
    let (mut min_above, mut max_below): (Option<f64>, Option<f64>) = (None, None);
    let mut rank = 0;
    for idx in blocks.values() {
        let m = idx.len();
        let mut block = DMatrix::<C64>::zeros(m, m);
        for (b, &c) in idx.iter().enumerate() {
            for (a, &r) in idx.iter().enumerate() {
                block[(a, b)] = bsb.get(r, c);
            }
        }
        let sym = (&block + block.adjoint()).map(|v| v * 0.5);
        let (vals, vecs) = hermitian_eigen(&sym);
        let keep: Vec<usize> = (0..m).filter(|&k| vals[k] > window).collect();
        for &v in &vals {
            if v > window {
                min_above = Some(min_above.map_or(v, |x: f64| x.min(v)));
            } else {
                max_below = Some(max_below.map_or(v, |x: f64| x.max(v)));
            }
        }
        rank += keep.len();
        if keep.is_empty() {
            continue;
        }
        let sel = vecs.select_columns(&keep);
        let proj = &sel * sel.adjoint();
        for (b, &c) in idx.iter().enumerate() {
            for (a, &r) in idx.iter().enumerate() {
                let v = proj[(a, b)];
                if v.norm() > 1e-300 {
                    cols[c].push((r, v));
                }
            }
        }
    }
    let proj = SparseOperator::from_columns(space, space, space.n2_max(), cols);
    let id = SparseOperator::identity(space);
    let u = proj.compose(&beta.sub(&id)?)?.add(&id)?;
    Ok(UApprox { op: u.with_band(space.n2_max()), window, min_above, max_below, projection_rank: rank })
}

/// Interior residuals of the defining relations, keyed by name.
pub fn relation_residuals(space: TruncatedSpace, q: DeformationParam) -> Result<BTreeMap<String, f64>> {
    if space.n2_max() < 2 {
        return Err(Error::TruncationTooSmall { needed: 2, have: space.n2_max() });
    }
    let qv = q.q();
    let a = build_generator(space, q, GeneratorTag::Alpha)?;
    let a_s = build_generator(space, q, GeneratorTag::AlphaStar)?;
    let b = build_generator(space, q, GeneratorTag::Beta)?;
    let b_s = build_generator(space, q, GeneratorTag::BetaStar)?;
    let id = SparseOperator::identity(space);
    let interior = space.interior_len(2);
    let residual = |m: SparseOperator| m.max_column_norm(interior);

    let mut out = BTreeMap::new();
    out.insert(
        "a*a+b*b=I".to_string(),
        residual(a_s.compose(&a)?.add(&b_s.compose(&b)?)?.sub(&id)?),
    );
    out.insert(
        "aa*+q^2bb*=I".to_string(),
        residual(a.compose(&a_s)?.add_scaled(&b.compose(&b_s)?, re(qv * qv))?.sub(&id)?),
    );
    out.insert("ab=qba".to_string(), residual(a.compose(&b)?.add_scaled(&b.compose(&a)?, re(-qv))?));
    out.insert("ab*=qb*a".to_string(), residual(a.compose(&b_s)?.add_scaled(&b_s.compose(&a)?, re(-qv))?));
    out.insert("b*b=bb*".to_string(), residual(b_s.compose(&b)?.sub(&b.compose(&b_s)?)?));
    Ok(out)
}

/// Largest singular value of `a` restricted to the columns at least `band`
/// shells inside the truncation. Those columns are computed exactly, so
/// this is a lower bound for the untruncated norm that is nondecreasing in
/// the truncation size.
pub fn interior_norm(a: &SparseOperator, band: i64) -> Result<f64> {
    if band < a.band() {
        return Err(Error::Parameter(format!("band {band} is below the operator band {}", a.band())));
    }
    Ok(leading_columns_norm(a, a.domain().interior_len(band)))
}

/// Largest singular value of the first `ncols` columns of `a`.
pub fn leading_columns_norm(a: &SparseOperator, ncols: usize) -> f64 {
    let cols: Vec<&[(usize, C64)]> = (0..ncols.min(a.ncols())).map(|c| a.column(c)).collect();
    largest_singular_value(&cols, a.rows())
}

/// `⟨e^(0)_{00}, A e^(0)_{00}⟩`, the Haar state in the GNS picture.
pub fn haar_state(space: TruncatedSpace, a: &SparseOperator) -> Result<C64> {
    if a.band() > space.n2_max() {
        return Err(Error::TruncationTooSmall { needed: a.band(), have: space.n2_max() });
    }
    Ok(a.get(0, 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const Q: DeformationParam = DeformationParam::Quantum(0.5);

    fn space(n: i64) -> TruncatedSpace {
        TruncatedSpace::new(n).unwrap()
    }

    fn idx(s: TruncatedSpace, n2: i64, i2: i64, j2: i64) -> usize {
        s.index_of(BasisLabel::new(n2, i2, j2).unwrap()).unwrap()
    }

    #[test]
    fn alpha_first_column() {
        let s = space(3);
        let a = build_generator(s, Q, GeneratorTag::Alpha).unwrap();
        let col = a.column(0);
        assert_eq!(col.len(), 1);
        assert_eq!(col[0].0, idx(s, 1, -1, -1));
        assert_abs_diff_eq!(col[0].1.re, 0.5 / 1.25f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn dual_generators() {
        let s = space(4);
        let a0 = build_generator(s, Q, GeneratorTag::A0).unwrap();
        for n2 in 0..=4 {
            let k = idx(s, n2, n2, n2);
            assert_abs_diff_eq!(a0.get(k, k).re, 0.5f64.powf(n2 as f64 / 2.0), epsilon = 1e-15);
        }
        let a1 = build_generator(s, Q, GeneratorTag::A1).unwrap();
        for l in s.labels().filter(|l| l.j2 == l.n2) {
            assert!(a1.column(s.index_of(l).unwrap()).is_empty());
        }
        let a1s = build_generator(s, Q, GeneratorTag::A1Star).unwrap();
        assert!(a1s.max_abs_diff(&a1.adjoint(), s.dim()).unwrap() < 1e-14);
        assert!(build_generator(s, DeformationParam::Classical, GeneratorTag::A0).is_err());
        assert!(build_generator(s, DeformationParam::Classical, GeneratorTag::A1).is_err());
    }

    #[test]
    fn adjoints_agree_with_transposes() {
        let s = space(10);
        for q in [Q, DeformationParam::Classical] {
            for (g, gs) in [(GeneratorTag::Alpha, GeneratorTag::AlphaStar), (GeneratorTag::Beta, GeneratorTag::BetaStar)] {
                let m = build_generator(s, q, g).unwrap();
                let ms = build_generator(s, q, gs).unwrap();
                let d = ms.max_abs_diff(&m.adjoint(), s.interior_len(1)).unwrap();
                assert!(d <= 1e-14, "{g:?}: {d}");
            }
        }
    }

    #[test]
    fn monomials() {
        let s = space(6);
        let id = build_monomial(s, Q, 0, 0, 0).unwrap();
        assert_eq!(id, SparseOperator::identity(s));
        let a = build_monomial(s, Q, 1, 0, 0).unwrap();
        assert_eq!(a, build_generator(s, Q, GeneratorTag::Alpha).unwrap());
        assert!(matches!(build_monomial(s, Q, 3, 2, 2), Err(Error::TruncationTooSmall { .. })));
    }

    #[test]
    fn k_oracle() {
        let s = space(20);
        let bbs = build_monomial(s, Q, 0, 1, 1).unwrap();
        let k = build_k_assembly(s, Q).unwrap();
        assert!(bbs.max_abs_diff(&k, s.interior_len(2)).unwrap() <= 1e-12);
        assert!(build_k_assembly(s, DeformationParam::Classical).is_err());
    }

    #[test]
    fn r_choice() {
        assert_eq!(choose_r(Q).unwrap().r, 1);
        assert_eq!(choose_r(DeformationParam::Quantum(0.9)).unwrap().r, 4);
        assert_eq!(choose_r(DeformationParam::Quantum(0.99)).unwrap().r, 35);
        let tie = choose_r(DeformationParam::Quantum(0.5f64.sqrt())).unwrap();
        assert_eq!(tie.r, 2);
        assert!(tie.tie);
        assert!(choose_r(DeformationParam::Classical).is_err());
    }

    #[test]
    fn gamma_zero_is_beta() {
        let s = space(4);
        let g0 = build_gamma(s, Q, 0).unwrap();
        let b = build_generator(s, Q, GeneratorTag::Beta).unwrap();
        assert!(g0.max_abs_diff(&b, s.dim()).unwrap() < 1e-15);
        assert!(build_gamma(s, Q, 2).is_err());
    }

    #[test]
    fn haar_values() {
        let s = space(4);
        let id = SparseOperator::identity(s);
        assert_eq!(haar_state(s, &id).unwrap(), re(1.0));
        let b = build_generator(s, Q, GeneratorTag::Beta).unwrap();
        assert_eq!(haar_state(s, &b).unwrap(), re(0.0));
        let bbs = b.compose(&build_generator(s, Q, GeneratorTag::BetaStar).unwrap()).unwrap();
        assert_abs_diff_eq!(haar_state(s, &bbs).unwrap().re, 1.0 / 1.25, epsilon = 1e-15);
        let c = DeformationParam::Classical;
        let bc = build_generator(s, c, GeneratorTag::Beta).unwrap();
        let bbc = bc.compose(&build_generator(s, c, GeneratorTag::BetaStar).unwrap()).unwrap();
        assert_abs_diff_eq!(haar_state(s, &bbc).unwrap().re, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn contractions() {
        let s = space(12);
        for g in [GeneratorTag::Alpha, GeneratorTag::Beta, GeneratorTag::BetaStar, GeneratorTag::AlphaStar] {
            let m = build_generator(s, Q, g).unwrap();
            assert!(interior_norm(&m, 1).unwrap() <= 1.0 + 1e-12);
        }
        let id = SparseOperator::identity(s);
        assert_abs_diff_eq!(interior_norm(&id, 0).unwrap(), 1.0, epsilon = 1e-14);
        let g = build_gamma(s, Q, 1).unwrap();
        assert!(interior_norm(&g, 3).unwrap() / 3.0 <= 1.0 + 1e-12);
        assert!(interior_norm(&g, 1).is_err());
    }

    #[test]
    fn u_window_checks() {
        let s = space(6);
        assert!(build_u_approx(s, Q, 0.4).is_err());
        assert!(build_u_approx(s, Q, 1.0).is_err());
        assert!(build_u_approx(s, DeformationParam::Classical, 0.9).is_err());
        let u = build_u_approx(s, Q, 0.999).unwrap();
        assert!(u.min_above.is_none() || u.min_above.unwrap() > 0.999);
    }
}
