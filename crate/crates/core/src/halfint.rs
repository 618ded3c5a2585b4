//! Exact half-integer labels for the orthonormal basis `e^(n)_{ij}` and the
//! spin truncation of the GNS space.
//!
//! Every quantity is stored doubled (`n2 = 2n`, `i2 = 2i`, `j2 = 2j`) so the
//! lattice conditions are integer arithmetic.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::error::{Error, Result};

/// A value in ½ℤ, stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct HalfInt {
    twice: i64,
}

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt { twice: 0 };
    pub const HALF: HalfInt = HalfInt { twice: 1 };
    pub const ONE: HalfInt = HalfInt { twice: 2 };

    pub const fn from_twice(twice: i64) -> Self {
        HalfInt { twice }
    }

    pub const fn from_int(v: i64) -> Self {
        HalfInt { twice: 2 * v }
    }

    pub const fn twice(self) -> i64 {
        self.twice
    }

    pub fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }

    pub fn to_f64(self) -> f64 {
        self.twice as f64 / 2.0
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt::from_twice(self.twice + rhs.twice)
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt::from_twice(self.twice - rhs.twice)
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt::from_twice(-self.twice)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

/// Index `(n, i, j)` of the basis vector `e^(n)_{ij}`, doubled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisLabel {
    pub n2: i64,
    pub i2: i64,
    pub j2: i64,
}

impl BasisLabel {
    /// Checked constructor.
    pub fn new(n2: i64, i2: i64, j2: i64) -> Result<Self> {
        if Self::is_valid(n2, i2, j2) {
            Ok(BasisLabel { n2, i2, j2 })
        } else {
            Err(Error::InvalidLabel { n2, i2, j2 })
        }
    }

    pub fn from_halves(n: HalfInt, i: HalfInt, j: HalfInt) -> Result<Self> {
        Self::new(n.twice(), i.twice(), j.twice())
    }

    /// Range and parity conditions: `n ≥ 0`, `|i|, |j| ≤ n`, `n − i, n − j ∈ ℤ`.
    pub fn is_valid(n2: i64, i2: i64, j2: i64) -> bool {
        n2 >= 0
            && i2.abs() <= n2
            && j2.abs() <= n2
            && (n2 - i2).rem_euclid(2) == 0
            && (n2 - j2).rem_euclid(2) == 0
    }

    /// The label shifted by `(dn2, di2, dj2)` when the result is a lattice point.
    pub fn shifted(self, dn2: i64, di2: i64, dj2: i64) -> Option<BasisLabel> {
        let (n2, i2, j2) = (self.n2 + dn2, self.i2 + di2, self.j2 + dj2);
        Self::is_valid(n2, i2, j2).then_some(BasisLabel { n2, i2, j2 })
    }

    pub fn n(self) -> HalfInt {
        HalfInt::from_twice(self.n2)
    }

    pub fn i(self) -> HalfInt {
        HalfInt::from_twice(self.i2)
    }

    pub fn j(self) -> HalfInt {
        HalfInt::from_twice(self.j2)
    }

    /// Row index `k = n − i` of the projection `P_k` containing this label.
    pub fn row(self) -> i64 {
        (self.n2 - self.i2) / 2
    }

    /// Conserved sector quantity `s = n + j` of `P_k γ_r P_k`.
    pub fn sector(self) -> i64 {
        (self.n2 + self.j2) / 2
    }
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e({})_({},{})", self.n(), self.i(), self.j())
    }
}

/// Number of labels with `n2 < shell`: `Σ_{m<shell} (m+1)²`.
fn labels_below(shell: i64) -> usize {
    let s = shell as usize;
    s * (s + 1) * (2 * s + 1) / 6
}

/// Span of all labels with `n2 ≤ n2_max`, ordered lexicographically by
/// `(n2, i2, j2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TruncatedSpace {
    n2_max: i64,
}

impl TruncatedSpace {
    pub fn new(n2_max: i64) -> Result<Self> {
        if n2_max < 0 {
            return Err(Error::Parameter(format!("n2_max must be nonnegative, got {n2_max}")));
        }
        Ok(TruncatedSpace { n2_max })
    }

    pub fn n2_max(&self) -> i64 {
        self.n2_max
    }

    pub fn dim(&self) -> usize {
        labels_below(self.n2_max + 1)
    }

    pub fn contains(&self, label: BasisLabel) -> bool {
        label.n2 <= self.n2_max
    }

    /// Ordinal of `label`, computed arithmetically.
    pub fn index_of(&self, label: BasisLabel) -> Option<usize> {
        if !self.contains(label) {
            return None;
        }
        let width = (label.n2 + 1) as usize;
        let a = ((label.i2 + label.n2) / 2) as usize;
        let b = ((label.j2 + label.n2) / 2) as usize;
        Some(labels_below(label.n2) + a * width + b)
    }

    /// Inverse of [`TruncatedSpace::index_of`].
    pub fn label_at(&self, index: usize) -> Option<BasisLabel> {
        if index >= self.dim() {
            return None;
        }
        // the shell is the largest n2 with labels_below(n2) <= index
        let mut n2 = (((3 * index) as f64).cbrt() as i64 - 1).max(0);
        while labels_below(n2 + 1) <= index {
            n2 += 1;
        }
        while labels_below(n2) > index {
            n2 -= 1;
        }
        let off = index - labels_below(n2);
        let width = (n2 + 1) as usize;
        let (a, b) = ((off / width) as i64, (off % width) as i64);
        Some(BasisLabel { n2, i2: 2 * a - n2, j2: 2 * b - n2 })
    }

    pub fn enumerate(&self) -> Vec<BasisLabel> {
        self.labels().collect()
    }

    pub fn labels(&self) -> impl Iterator<Item = BasisLabel> {
        let n2_max = self.n2_max;
        (0..=n2_max).flat_map(|n2| {
            (0..=n2).flat_map(move |a| {
                (0..=n2).map(move |b| BasisLabel { n2, i2: 2 * a - n2, j2: 2 * b - n2 })
            })
        })
    }

    /// Labels whose images under an operator of the given band stay inside
    /// the truncation (`n2 ≤ n2_max − band`).
    pub fn interior(&self, band: i64) -> Interior {
        if band > self.n2_max {
            return Interior { labels: Vec::new(), band_exceeds_truncation: true };
        }
        let inner = TruncatedSpace { n2_max: self.n2_max - band.max(0) };
        Interior { labels: inner.enumerate(), band_exceeds_truncation: false }
    }

    /// Ordinals of the interior labels; they form a prefix of the ordering.
    pub fn interior_len(&self, band: i64) -> usize {
        if band > self.n2_max {
            0
        } else {
            labels_below(self.n2_max - band.max(0) + 1)
        }
    }
}

/// Result of [`TruncatedSpace::interior`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interior {
    pub labels: Vec<BasisLabel>,
    /// Set when the band is larger than the truncation and the set is empty.
    pub band_exceeds_truncation: bool,
}
