//! Matrix coefficients of the generators on the basis `e^(n)_{ij}`.
//!
//! Every coefficient is attached to a shift of the label. The shift target is
//! checked before the closed form is evaluated; coefficients of shifts that
//! leave the lattice are exactly zero, which also keeps the `0/0` forms at
//! the lattice edges (for example `a_-` at `n = 0`) from ever being evaluated.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::halfint::BasisLabel;

/// Deformation parameter. The branch is a tag; `q = 1` is never detected by
/// comparing floats.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum DeformationParam {
    Quantum(f64),
    Classical,
}

impl DeformationParam {
    pub fn quantum(q: f64) -> Result<Self> {
        let p = DeformationParam::Quantum(q);
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            DeformationParam::Quantum(q) if q.is_finite() && q > 0.0 && q < 1.0 => Ok(()),
            DeformationParam::Quantum(q) => {
                Err(Error::Parameter(format!("quantum branch needs 0 < q < 1, got {q}")))
            }
            DeformationParam::Classical => Ok(()),
        }
    }

    pub fn q(&self) -> f64 {
        match *self {
            DeformationParam::Quantum(q) => q,
            DeformationParam::Classical => 1.0,
        }
    }

    pub fn is_classical(&self) -> bool {
        matches!(self, DeformationParam::Classical)
    }

    pub fn branch_name(&self) -> &'static str {
        match self {
            DeformationParam::Quantum(_) => "quantum",
            DeformationParam::Classical => "classical",
        }
    }

    pub(crate) fn require_quantum(&self, what: &str) -> Result<f64> {
        self.validate()?;
        match *self {
            DeformationParam::Quantum(q) => Ok(q),
            DeformationParam::Classical => Err(Error::UnsupportedBranch {
                branch: "classical",
                what: what.to_string(),
            }),
        }
    }
}

impl Default for DeformationParam {
    fn default() -> Self {
        DeformationParam::Quantum(0.5)
    }
}

/// The six coefficient families of the `α`, `β`, `β*` actions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CoeffKind {
    APlus,
    AMinus,
    BPlus,
    BMinus,
    BStarPlus,
    BStarMinus,
}

impl CoeffKind {
    pub const ALL: [CoeffKind; 6] = [
        CoeffKind::APlus,
        CoeffKind::AMinus,
        CoeffKind::BPlus,
        CoeffKind::BMinus,
        CoeffKind::BStarPlus,
        CoeffKind::BStarMinus,
    ];

    /// Doubled shift `(Δn2, Δi2, Δj2)` from the source label to the target.
    pub fn shift(self) -> (i64, i64, i64) {
        match self {
            CoeffKind::APlus => (1, -1, -1),
            CoeffKind::AMinus => (-1, -1, -1),
            CoeffKind::BPlus => (1, 1, -1),
            CoeffKind::BMinus => (-1, 1, -1),
            CoeffKind::BStarPlus => (1, -1, 1),
            CoeffKind::BStarMinus => (-1, -1, 1),
        }
    }

    pub fn target(self, label: BasisLabel) -> Option<BasisLabel> {
        let (dn, di, dj) = self.shift();
        label.shifted(dn, di, dj)
    }
}

/// Coefficients of `α*`, obtained by reading the `α` action backwards:
/// the `+` coefficient at `(n,i,j)` is `a_-(n+½, i+½, j+½)` and the `−`
/// coefficient is `a_+(n−½, i+½, j+½)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AlphaStarKind {
    Plus,
    Minus,
}

impl AlphaStarKind {
    pub fn shift(self) -> (i64, i64, i64) {
        match self {
            AlphaStarKind::Plus => (1, 1, 1),
            AlphaStarKind::Minus => (-1, 1, 1),
        }
    }

    pub fn target(self, label: BasisLabel) -> Option<BasisLabel> {
        let (dn, di, dj) = self.shift();
        label.shifted(dn, di, dj)
    }
}

/// `q^e` for an integer exponent built from doubled labels.
#[inline]
fn qp(q: f64, e: i64) -> f64 {
    q.powi(e as i32)
}

/// `(1 − q^a)` with `a` an integer exponent.
#[inline]
fn om(q: f64, a: i64) -> f64 {
    1.0 - qp(q, a)
}

fn quantum_rep(q: f64, kind: CoeffKind, l: BasisLabel) -> f64 {
    let (n2, i2, j2) = (l.n2, l.i2, l.j2);
    match kind {
        CoeffKind::APlus => (qp(q, 2 * n2 + i2 + j2 + 2) * om(q, n2 - j2 + 2) * om(q, n2 - i2 + 2)
            / (om(q, 2 * n2 + 2) * om(q, 2 * n2 + 4)))
            .sqrt(),
        CoeffKind::AMinus => {
            (om(q, n2 + j2) * om(q, n2 + i2) / (om(q, 2 * n2) * om(q, 2 * n2 + 2))).sqrt()
        }
        CoeffKind::BPlus => -(qp(q, n2 + j2) * om(q, n2 - j2 + 2) * om(q, n2 + i2 + 2)
            / (om(q, 2 * n2 + 2) * om(q, 2 * n2 + 4)))
            .sqrt(),
        CoeffKind::BMinus => (qp(q, n2 + i2) * om(q, n2 + j2) * om(q, n2 - i2)
            / (om(q, 2 * n2) * om(q, 2 * n2 + 2)))
            .sqrt(),
        CoeffKind::BStarPlus => (qp(q, n2 + i2) * om(q, n2 + j2 + 2) * om(q, n2 - i2 + 2)
            / (om(q, 2 * n2 + 2) * om(q, 2 * n2 + 4)))
            .sqrt(),
        CoeffKind::BStarMinus => -(qp(q, n2 + j2) * om(q, n2 - j2) * om(q, n2 + i2)
            / (om(q, 2 * n2) * om(q, 2 * n2 + 2)))
            .sqrt(),
    }
}

fn classical_rep(kind: CoeffKind, l: BasisLabel) -> f64 {
    // doubled units: n - j + 1 = (n2 - j2 + 2)/2 and (2n+1)(2n+2) = (n2+1)(n2+2),
    // so each numerator pair carries a factor 1/4
    let (n2, i2, j2) = (l.n2 as f64, l.i2 as f64, l.j2 as f64);
    let up = (n2 + 1.0) * (n2 + 2.0);
    let down = n2 * (n2 + 1.0);
    match kind {
        CoeffKind::APlus => ((n2 - j2 + 2.0) * (n2 - i2 + 2.0) / (4.0 * up)).sqrt(),
        CoeffKind::AMinus => ((n2 + j2) * (n2 + i2) / (4.0 * down)).sqrt(),
        CoeffKind::BPlus => -((n2 - j2 + 2.0) * (n2 + i2 + 2.0) / (4.0 * up)).sqrt(),
        CoeffKind::BMinus => ((n2 + j2) * (n2 - i2) / (4.0 * down)).sqrt(),
        CoeffKind::BStarPlus => ((n2 + j2 + 2.0) * (n2 - i2 + 2.0) / (4.0 * up)).sqrt(),
        CoeffKind::BStarMinus => -((n2 - j2) * (n2 + i2) / (4.0 * down)).sqrt(),
    }
}

/// Coefficient of the given kind at `label`; zero when the shifted target is
/// not a lattice point.
pub fn rep_coefficient(q: DeformationParam, kind: CoeffKind, label: BasisLabel) -> Result<f64> {
    q.validate()?;
    if kind.target(label).is_none() {
        return Ok(0.0);
    }
    Ok(match q {
        DeformationParam::Quantum(q) => quantum_rep(q, kind, label),
        DeformationParam::Classical => classical_rep(kind, label),
    })
}

/// Coefficient of the `α*` action at `label`; zero off-lattice.
pub fn alpha_star_coefficient(
    q: DeformationParam,
    kind: AlphaStarKind,
    label: BasisLabel,
) -> Result<f64> {
    q.validate()?;
    if kind.target(label).is_none() {
        return Ok(0.0);
    }
    let (n2, i2, j2) = (label.n2, label.i2, label.j2);
    Ok(match (q, kind) {
        (DeformationParam::Quantum(q), AlphaStarKind::Plus) => (om(q, n2 + j2 + 2)
            * om(q, n2 + i2 + 2)
            / (om(q, 2 * n2 + 2) * om(q, 2 * n2 + 4)))
            .sqrt(),
        (DeformationParam::Quantum(q), AlphaStarKind::Minus) => (qp(q, 2 * n2 + i2 + j2 + 2)
            * om(q, n2 - j2)
            * om(q, n2 - i2)
            / (om(q, 2 * n2) * om(q, 2 * n2 + 2)))
            .sqrt(),
        (DeformationParam::Classical, kind) => {
            let (n2, i2, j2) = (n2 as f64, i2 as f64, j2 as f64);
            match kind {
                AlphaStarKind::Plus => {
                    ((n2 + j2 + 2.0) * (n2 + i2 + 2.0) / (4.0 * (n2 + 1.0) * (n2 + 2.0))).sqrt()
                }
                AlphaStarKind::Minus => ((n2 - j2) * (n2 - i2) / (4.0 * n2 * (n2 + 1.0))).sqrt(),
            }
        }
    })
}

/// `k_ε(n,i,j)`: coefficient of `e^(n+ε)_{ij}` in `ββ* e^(n)_{ij}`.
pub fn k_coefficient(q: DeformationParam, eps: i64, label: BasisLabel) -> Result<f64> {
    let q = q.require_quantum("k coefficients of ββ*")?;
    if !(-1..=1).contains(&eps) {
        return Err(Error::Parameter(format!("eps must be -1, 0 or 1, got {eps}")));
    }
    if label.shifted(2 * eps, 0, 0).is_none() {
        return Ok(0.0);
    }
    let (n2, i2, j2) = (label.n2, label.i2, label.j2);
    let v = match eps {
        1 => -(qp(q, 2 * n2 + i2 + j2 + 2)
            * (om(q, n2 + j2 + 2) / om(q, 2 * n2 + 2))
            * (om(q, n2 - i2 + 2) / om(q, 2 * n2 + 4))
            * (om(q, n2 - j2 + 2) / om(q, 2 * n2 + 4))
            * (om(q, n2 + i2 + 2) / om(q, 2 * n2 + 6)))
            .sqrt(),
        0 => {
            // the two summands pass through n − ½ and n + ½ respectively
            let lower = if CoeffKind::BStarMinus.target(label).is_some() {
                qp(q, n2 + j2) * om(q, n2 - j2) * om(q, n2 + i2) / (om(q, 2 * n2) * om(q, 2 * n2 + 2))
            } else {
                0.0
            };
            let upper = if CoeffKind::BStarPlus.target(label).is_some() {
                qp(q, n2 + i2) * om(q, n2 + j2 + 2) * om(q, n2 - i2 + 2)
                    / (om(q, 2 * n2 + 2) * om(q, 2 * n2 + 4))
            } else {
                0.0
            };
            lower + upper
        }
        _ => -(qp(q, 2 * n2 + i2 + j2 - 2) * om(q, n2 - j2) * om(q, n2 + i2) * om(q, n2 + j2)
            * om(q, n2 - i2)
            / (om(q, 2 * n2 - 2) * om(q, 2 * n2) * om(q, 2 * n2) * om(q, 2 * n2 + 2)))
            .sqrt(),
    };
    Ok(v)
}

/// Minimum and maximum of a coefficient over all `(i2, j2)` at level `n2`.
pub fn coefficient_bounds(q: DeformationParam, kind: CoeffKind, n2: i64) -> Result<(f64, f64)> {
    if n2 < 0 {
        return Err(Error::Parameter(format!("n2 must be nonnegative, got {n2}")));
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i2 in (-n2..=n2).step_by(2) {
        for j2 in (-n2..=n2).step_by(2) {
            let v = rep_coefficient(q, kind, BasisLabel { n2, i2, j2 })?;
            lo = lo.min(v);
            hi = hi.max(v);
        }
    }
    Ok((lo, hi))
}
