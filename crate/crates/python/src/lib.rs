//! Python bindings. Operators are exposed as an opaque `Operator` class;
//! analyses return plain dicts, tuples and lists.

use std::collections::{BTreeMap, BTreeSet};

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use suq2::dirac::{self, Branch, DiracFamily};
use suq2::fredholm::{self, RowProjection};
use suq2::report::{self, RunConfig};
use suq2::{assembly, DeformationParam, SparseOperator, TruncatedSpace, C64};

fn err(e: suq2::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn deformation(q: f64, classical: bool) -> PyResult<DeformationParam> {
    if classical {
        Ok(DeformationParam::Classical)
    } else {
        DeformationParam::quantum(q).map_err(err)
    }
}

fn family(name: &str) -> PyResult<DiracFamily> {
    name.parse::<DiracFamily>().map_err(err)
}

/// Finite-truncation operator in column-major sparse storage.
#[pyclass(name = "Operator", module = "suq2py", frozen)]
struct PyOperator {
    inner: SparseOperator,
}

fn wrap(r: suq2::Result<SparseOperator>) -> PyResult<PyOperator> {
    r.map(|inner| PyOperator { inner }).map_err(err)
}

#[pymethods]
impl PyOperator {
    #[getter]
    fn shape(&self) -> (usize, usize) {
        (self.inner.rows(), self.inner.ncols())
    }

    #[getter]
    fn nnz(&self) -> usize {
        self.inner.nnz()
    }

    #[getter]
    fn band(&self) -> i64 {
        self.inner.band()
    }

    #[getter]
    fn n2_max(&self) -> i64 {
        self.inner.domain().n2_max()
    }

    fn get(&self, row: usize, col: usize) -> PyResult<C64> {
        if row >= self.inner.rows() || col >= self.inner.ncols() {
            return Err(PyValueError::new_err(format!("index ({row}, {col}) out of range")));
        }
        Ok(self.inner.get(row, col))
    }

    /// `(row, col, value)` triplets in column-major order.
    fn entries(&self) -> Vec<(usize, usize, C64)> {
        self.inner.entries().collect()
    }

    fn to_dense(&self) -> Vec<Vec<C64>> {
        let m = self.inner.to_dense();
        (0..m.nrows()).map(|r| m.row(r).iter().copied().collect()).collect()
    }

    fn adjoint(&self) -> PyOperator {
        PyOperator { inner: self.inner.adjoint() }
    }

    fn __matmul__(&self, other: &PyOperator) -> PyResult<PyOperator> {
        wrap(self.inner.compose(&other.inner))
    }

    fn __add__(&self, other: &PyOperator) -> PyResult<PyOperator> {
        wrap(self.inner.add(&other.inner))
    }

    fn __sub__(&self, other: &PyOperator) -> PyResult<PyOperator> {
        wrap(self.inner.sub(&other.inner))
    }

    /// Operator norm restricted to columns unaffected by truncation.
    #[pyo3(signature = (band=None))]
    fn interior_norm(&self, band: Option<i64>) -> PyResult<f64> {
        assembly::interior_norm(&self.inner, band.unwrap_or(self.inner.band())).map_err(err)
    }

    fn __repr__(&self) -> String {
        let (r, c) = self.shape();
        format!("Operator({r}x{c}, nnz={}, band={})", self.inner.nnz(), self.inner.band())
    }
}

/// Basis labels `(n2, i2, j2)` in storage order.
#[pyfunction]
fn labels(n2_max: i64) -> PyResult<Vec<(i64, i64, i64)>> {
    let s = TruncatedSpace::new(n2_max).map_err(err)?;
    Ok(s.labels().map(|l| (l.n2, l.i2, l.j2)).collect())
}

/// Named operator: alpha, alpha*, beta, beta*, A0, A1, A1*, identity, gamma, dirac.
#[pyfunction]
#[pyo3(signature = (name, n2_max, q=0.5, classical=false, r=None, family="generic"))]
fn operator(name: &str, n2_max: i64, q: f64, classical: bool, r: Option<u32>, family: &str) -> PyResult<PyOperator> {
    let config = RunConfig {
        q: if classical { 1.0 } else { q },
        branch: if classical { Branch::Classical } else { Branch::Quantum },
        n2_max,
        r,
        family: family.to_string(),
        ..RunConfig::default()
    };
    wrap(report::build_named(name, &config))
}

#[pyfunction]
#[pyo3(signature = (n2_max, q=0.5, classical=false))]
fn relation_residuals(n2_max: i64, q: f64, classical: bool) -> PyResult<BTreeMap<String, f64>> {
    let space = TruncatedSpace::new(n2_max).map_err(err)?;
    assembly::relation_residuals(space, deformation(q, classical)?).map_err(err)
}

/// Eigenvalue of the Dirac operator on the `(n2, i2)` block.
#[pyfunction]
fn d_value(family_name: &str, n2: i64, i2: i64) -> PyResult<f64> {
    dirac::d_value(&family(family_name)?, n2, i2).map_err(err)
}

/// Filtered SVD index of `P_k γ_r P_k` across truncation sizes.
#[pyfunction]
#[pyo3(signature = (k, sizes, q=0.5, r=1, tol=fredholm::DEFAULT_TOL))]
fn numerical_index<'py>(
    py: Python<'py>,
    k: i64,
    sizes: Vec<i64>,
    q: f64,
    r: u32,
    tol: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let qd = deformation(q, false)?;
    let p = RowProjection::new(k).map_err(err)?;
    let rep = fredholm::numerical_index(|s| assembly::build_gamma(s, qd, r), p, &sizes, tol).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("index", rep.stabilized_index.value())?;
    d.set_item("indices", rep.indices)?;
    d.set_item("ker_dims", rep.ker_dims)?;
    d.set_item("coker_dims", rep.coker_dims)?;
    d.set_item("min_retained_sigma", rep.min_retained_sigma)?;
    d.set_item("gap_ok", rep.gap_ok)?;
    Ok(d)
}

/// Index from the exact sector decomposition, with nonzero sector contributions.
#[pyfunction]
#[pyo3(signature = (k, n2_max, q=0.5, r=1))]
fn sector_total(k: i64, n2_max: i64, q: f64, r: u32) -> PyResult<fredholm::SectorTotal> {
    fredholm::sector_total(deformation(q, false)?, r, k, n2_max).map_err(err)
}

/// Pairing of `γ_r` with the sign `I − 2 Σ_{k∈rows} P_k`; `None` if unstable.
#[pyfunction]
#[pyo3(signature = (rows, sizes, q=0.5, r=None, tol=fredholm::DEFAULT_TOL))]
fn pairing(rows: Vec<i64>, sizes: Vec<i64>, q: f64, r: Option<u32>, tol: f64) -> PyResult<Option<i64>> {
    let rows: BTreeSet<i64> = rows.into_iter().collect();
    let rep = fredholm::pairing(&sizes, deformation(q, false)?, r, &rows, tol).map_err(err)?;
    Ok(rep.pairing.value())
}

#[pyfunction]
#[pyo3(signature = (family_name, n2_max, grid_size=40))]
fn spectral_dimension<'py>(
    py: Python<'py>,
    family_name: &str,
    n2_max: i64,
    grid_size: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let fit = dirac::spectral_dimension(&family(family_name)?, n2_max, grid_size).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("slope", fit.slope)?;
    d.set_item("fit_quality", fit.fit_quality)?;
    d.set_item("complete_up_to", fit.complete_up_to)?;
    d.set_item("lambda_grid", fit.lambda_grid)?;
    d.set_item("counting", fit.counting)?;
    Ok(d)
}

/// Runs `verify`, `analyze` or `pair` and returns `(exit_code, report_toml)`.
#[pyfunction]
#[pyo3(signature = (command, q=None, classical=false, n2_max=20, rows=vec![0], sizes=vec![24, 32, 40], r=None, family="generic", tol=fredholm::DEFAULT_TOL))]
#[allow(clippy::too_many_arguments)]
fn run(
    command: &str,
    q: Option<f64>,
    classical: bool,
    n2_max: i64,
    rows: Vec<i64>,
    sizes: Vec<i64>,
    r: Option<u32>,
    family: &str,
    tol: f64,
) -> PyResult<(i32, String)> {
    let config = RunConfig {
        q: q.unwrap_or(if classical { 1.0 } else { 0.5 }),
        branch: if classical { Branch::Classical } else { Branch::Quantum },
        n2_max,
        r,
        family: family.to_string(),
        rows,
        tol,
        sizes,
        ..RunConfig::default()
    };
    let rep = match command {
        "verify" => report::cmd_verify(&config),
        "analyze" => report::cmd_analyze(&config),
        "pair" => report::cmd_pair(&config),
        other => return Err(PyValueError::new_err(format!("unknown command '{other}'"))),
    }
    .map_err(err)?;
    Ok((rep.exit_code, rep.to_toml().map_err(err)?))
}

#[pymodule]
pub fn suq2py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyOperator>()?;
    m.add_function(wrap_pyfunction!(labels, m)?)?;
    m.add_function(wrap_pyfunction!(operator, m)?)?;
    m.add_function(wrap_pyfunction!(relation_residuals, m)?)?;
    m.add_function(wrap_pyfunction!(d_value, m)?)?;
    m.add_function(wrap_pyfunction!(numerical_index, m)?)?;
    m.add_function(wrap_pyfunction!(sector_total, m)?)?;
    m.add_function(wrap_pyfunction!(pairing, m)?)?;
    m.add_function(wrap_pyfunction!(spectral_dimension, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    Ok(())
}
