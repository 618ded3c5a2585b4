//! Equivariant Dirac operators on quantum SU(2), realized on finite
//! truncations of the GNS space of the Haar state.
//!
//! Basis labels `e^(n)_{ij}` are stored with doubled half-integers. Operators
//! are sparse and banded in `n`, and every measurement is taken on columns
//! far enough from the cut to be exact.

pub mod assembly;
pub mod coefficients;
pub mod dirac;
pub mod error;
pub mod fredholm;
pub mod halfint;
pub mod linalg;
pub mod report;
pub mod sparse;

pub use coefficients::DeformationParam;
pub use error::{Error, Result};
pub use halfint::{BasisLabel, HalfInt, TruncatedSpace};
pub use sparse::{SparseOperator, C64};
