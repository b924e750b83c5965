//! Python bindings: density matrices, both discord bounds, the Bloch
//! decomposition and the measurement oracles.
//!
//! Build with `cargo build -p gdiscord-py`, then import the produced cdylib
//! as `gdiscord_py` (see python/smoke_test.py for a loader).

use std::path::PathBuf;

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;

use gdiscord::bloch;
use gdiscord::bounds;
use gdiscord::cli::{sweep_csv as core_sweep_csv, SweepSpec};
use gdiscord::oracle;
use gdiscord::states;

fn err(e: gdiscord::Error) -> PyErr {
    match e {
        gdiscord::Error::Io(io) => PyIOError::new_err(io.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

/// A validated bipartite density matrix.
#[pyclass(name = "DensityMatrix")]
struct PyDensityMatrix {
    inner: states::DensityMatrix,
}

#[pymethods]
impl PyDensityMatrix {
    /// Build from a nested list of (re, im) pairs with a declared bipartition.
    #[new]
    fn new(entries: Vec<Vec<(f64, f64)>>, m: usize, n: usize) -> PyResult<Self> {
        let d = entries.len();
        if entries.iter().any(|row| row.len() != d) {
            return Err(PyValueError::new_err("matrix rows must all have length d"));
        }
        let mat = gdiscord::matrix::ComplexMatrix::from_fn(d, d, |i, j| {
            let (re, im) = entries[i][j];
            gdiscord::matrix::Complex64::new(re, im)
        });
        let inner = states::DensityMatrix::new(mat)
            .and_then(|s| s.with_bipartition(m, n))
            .map_err(err)?;
        Ok(PyDensityMatrix { inner })
    }

    #[staticmethod]
    fn bell() -> Self {
        PyDensityMatrix {
            inner: states::bell_state(),
        }
    }

    #[staticmethod]
    fn eq52(p: f64) -> PyResult<Self> {
        Ok(PyDensityMatrix {
            inner: states::eq52_state(p).map_err(err)?,
        })
    }

    #[staticmethod]
    fn eq53(p: f64) -> PyResult<Self> {
        Ok(PyDensityMatrix {
            inner: states::eq53_state(p).map_err(err)?,
        })
    }

    #[staticmethod]
    fn werner(p: f64) -> PyResult<Self> {
        Ok(PyDensityMatrix {
            inner: states::werner_qubit(p).map_err(err)?,
        })
    }

    /// Seeded random state of the given rank on an m x n bipartite space.
    #[staticmethod]
    fn random(m: usize, n: usize, rank: usize, seed: u64) -> PyResult<Self> {
        Ok(PyDensityMatrix {
            inner: states::random_bipartite_state(m, n, rank, seed).map_err(err)?,
        })
    }

    #[staticmethod]
    fn from_file(path: PathBuf) -> PyResult<Self> {
        Ok(PyDensityMatrix {
            inner: states::read_state(&path).map_err(err)?,
        })
    }

    fn save(&self, path: PathBuf) -> PyResult<()> {
        states::write_state(&self.inner, &path).map_err(err)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn bipartition(&self) -> PyResult<(usize, usize)> {
        self.inner.bipartition().map_err(err)
    }

    fn purity(&self) -> f64 {
        self.inner.purity()
    }

    fn entry(&self, i: usize, j: usize) -> PyResult<(f64, f64)> {
        let d = self.inner.dim();
        if i >= d || j >= d {
            return Err(PyValueError::new_err("index out of range"));
        }
        let z = self.inner.matrix().get(i, j);
        Ok((z.re, z.im))
    }

    fn __repr__(&self) -> String {
        match self.inner.bipartition() {
            Ok((m, n)) => format!(
                "DensityMatrix(dim={}, bipartition={}x{})",
                self.inner.dim(),
                m,
                n
            ),
            Err(_) => format!("DensityMatrix(dim={})", self.inner.dim()),
        }
    }
}

/// Both discord bounds plus the supporting spectra.
#[pyclass(name = "BoundsReport")]
struct PyBoundsReport {
    inner: bounds::BoundsReport,
}

#[pymethods]
impl PyBoundsReport {
    #[getter]
    fn tight_raw(&self) -> f64 {
        self.inner.tight_raw
    }

    #[getter]
    fn tight(&self) -> f64 {
        self.inner.tight
    }

    #[getter]
    fn luo_fu(&self) -> f64 {
        self.inner.luo_fu
    }

    #[getter]
    fn tr_cct(&self) -> f64 {
        self.inner.tr_cct
    }

    #[getter]
    fn eta(&self) -> Vec<f64> {
        self.inner.eta.clone()
    }

    #[getter]
    fn lam(&self) -> Vec<f64> {
        self.inner.lambda.clone()
    }

    #[getter]
    fn dominance_ok(&self) -> bool {
        self.inner.dominance_ok
    }

    fn __repr__(&self) -> String {
        format!(
            "BoundsReport(tight={}, luo_fu={}, dominance_ok={})",
            self.inner.tight, self.inner.luo_fu, self.inner.dominance_ok
        )
    }
}

/// Compute both lower bounds for a state.
#[pyfunction]
fn bounds_report(state: &PyDensityMatrix) -> PyResult<PyBoundsReport> {
    let (m, n) = state.inner.bipartition().map_err(err)?;
    let b = bloch::decompose(&state.inner, m, n).map_err(err)?;
    Ok(PyBoundsReport {
        inner: bounds::bounds_report(&b).map_err(err)?,
    })
}

/// (x, y, T) with T as nested rows.
type BlochData = (Vec<f64>, Vec<f64>, Vec<Vec<f64>>);

/// Bloch decomposition: returns (x, y, T) with T as nested rows.
#[pyfunction]
fn decompose(state: &PyDensityMatrix) -> PyResult<BlochData> {
    let (m, n) = state.inner.bipartition().map_err(err)?;
    let b = bloch::decompose(&state.inner, m, n).map_err(err)?;
    let t = (0..b.t.rows())
        .map(|i| (0..b.t.cols()).map(|j| b.t.get(i, j)).collect())
        .collect();
    Ok((b.x, b.y, t))
}

/// Exhaustive qubit-measurement search (subsystem A must be a qubit).
/// Returns (minimised squared distance, objective evaluations).
#[pyfunction]
#[pyo3(signature = (state, grid=oracle::DEFAULT_GRID, refine=oracle::DEFAULT_REFINE))]
fn qubit_measurement_min(
    state: &PyDensityMatrix,
    grid: usize,
    refine: usize,
) -> PyResult<(f64, usize)> {
    let res = oracle::minimize_qubit_measurement(&state.inner, grid, refine).map_err(err)?;
    Ok((res.value, res.evaluations))
}

/// Seeded Monte-Carlo upper bound over Haar-random measurement bases.
#[pyfunction]
fn measurement_upper_bound(state: &PyDensityMatrix, samples: usize, seed: u64) -> PyResult<f64> {
    Ok(
        oracle::sample_measurement_upper_bound(&state.inner, samples, seed)
            .map_err(err)?
            .value,
    )
}

/// Exact two-qubit geometric discord (closed form).
#[pyfunction]
fn dakic_two_qubit(state: &PyDensityMatrix) -> PyResult<f64> {
    let b = bloch::decompose(&state.inner, 2, 2).map_err(err)?;
    oracle::dakic_two_qubit(&b).map_err(err)
}

/// CSV sweep over a named family ("eq52", "eq53" or "werner"), same format as
/// the command-line `sweep`.
#[pyfunction]
#[pyo3(signature = (family, p_min=0.0, p_max=1.0, steps=101, oracle=false, seed=0))]
fn sweep_csv(
    family: &str,
    p_min: f64,
    p_max: f64,
    steps: usize,
    oracle: bool,
    seed: u64,
) -> PyResult<String> {
    let spec = SweepSpec {
        family: states::Family::parse(family).map_err(err)?,
        p_min,
        p_max,
        steps,
        include_oracle: oracle,
        seed,
    };
    core_sweep_csv(&spec).map_err(err)
}

#[pymodule]
fn gdiscord_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDensityMatrix>()?;
    m.add_class::<PyBoundsReport>()?;
    m.add_function(wrap_pyfunction!(bounds_report, m)?)?;
    m.add_function(wrap_pyfunction!(decompose, m)?)?;
    m.add_function(wrap_pyfunction!(qubit_measurement_min, m)?)?;
    m.add_function(wrap_pyfunction!(measurement_upper_bound, m)?)?;
    m.add_function(wrap_pyfunction!(dakic_two_qubit, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_csv, m)?)?;
    Ok(())
}
