//! Python bindings for `covsym`.
//!
//! Blocks cross the boundary as lists of lists of `complex`; errors surface as
//! `ValueError`, poles as `ArithmeticError`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;

use covsym::error::Error;
use covsym::{intertwining, io, specfun, star_algebra, verify};

fn to_py(err: Error) -> PyErr {
    match err {
        Error::Pole { .. } | Error::ConvergenceRegime { .. } | Error::NonFinite(_) => {
            PyArithmeticError::new_err(err.to_string())
        }
        _ => PyValueError::new_err(err.to_string()),
    }
}

fn matrix(rows: Vec<Vec<Complex64>>) -> PyResult<DMatrix<Complex64>> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|row| row.len() != c) {
        return Err(PyValueError::new_err("ragged block"));
    }
    Ok(DMatrix::from_fn(r, c, |i, j| rows[i][j]))
}

fn rows(m: &DMatrix<Complex64>) -> Vec<Vec<Complex64>> {
    (0..m.nrows())
        .map(|i| m.row(i).iter().copied().collect())
        .collect()
}

/// Constants of the calculus at `(n, sigma)` for even degrees up to `l_max`.
#[pyclass(name = "CalculusConstants", frozen)]
struct PyConstants {
    inner: intertwining::CalculusConstants,
}

#[pymethods]
impl PyConstants {
    #[new]
    fn new(n: usize, sigma: f64, l_max: u32) -> PyResult<Self> {
        let inner = intertwining::CalculusConstants::new(n, sigma, l_max).map_err(to_py)?;
        Ok(Self { inner })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn sigma(&self) -> f64 {
        self.inner.sigma()
    }

    #[getter]
    fn l_max(&self) -> u32 {
        self.inner.l_max()
    }

    fn d(&self) -> Complex64 {
        self.inner.d()
    }

    fn c(&self) -> Complex64 {
        self.inner.c()
    }

    fn e_ell(&self, degree: u32) -> PyResult<Complex64> {
        self.inner.e_ell(degree).map_err(to_py)
    }

    fn degrees(&self) -> Vec<u32> {
        self.inner.degrees().collect()
    }

    fn __repr__(&self) -> String {
        format!(
            "CalculusConstants(n={}, sigma={}, l_max={})",
            self.inner.n(),
            self.inner.sigma(),
            self.inner.l_max()
        )
    }
}

/// Graded block symbol.
#[pyclass(name = "Symbol", frozen)]
struct PySymbol {
    inner: star_algebra::Symbol,
}

#[pymethods]
impl PySymbol {
    #[new]
    fn new(n: usize, sigma: f64) -> Self {
        Self {
            inner: star_algebra::Symbol::zero(n, sigma),
        }
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn sigma(&self) -> f64 {
        self.inner.sigma()
    }

    /// New symbol with block `(row_degree, col_degree)` replaced.
    fn with_block(
        &self,
        row_degree: u32,
        col_degree: u32,
        block: Vec<Vec<Complex64>>,
    ) -> PyResult<Self> {
        let inner = self
            .inner
            .clone()
            .with_block(row_degree, col_degree, matrix(block)?)
            .map_err(to_py)?;
        Ok(Self { inner })
    }

    fn block(&self, row_degree: u32, col_degree: u32) -> Option<Vec<Vec<Complex64>>> {
        self.inner.block(row_degree, col_degree).map(rows)
    }

    fn keys(&self) -> Vec<(u32, u32)> {
        self.inner.blocks().map(|(k, _)| k).collect()
    }

    fn norm(&self) -> f64 {
        self.inner.norm()
    }

    fn distance(&self, other: &PySymbol) -> f64 {
        self.inner.distance(&other.inner)
    }

    fn scale(&self, factor: Complex64) -> Self {
        Self {
            inner: self.inner.scale(factor),
        }
    }

    fn __add__(&self, other: &PySymbol) -> Self {
        Self {
            inner: self.inner.add(&other.inner),
        }
    }

    fn __sub__(&self, other: &PySymbol) -> Self {
        Self {
            inner: self.inner.sub(&other.inner),
        }
    }

    fn to_json(&self) -> String {
        io::symbol_to_json(&self.inner)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: io::symbol_from_json(text).map_err(to_py)?,
        })
    }

    fn __repr__(&self) -> String {
        format!(
            "Symbol(n={}, sigma={}, blocks={:?})",
            self.inner.n(),
            self.inner.sigma(),
            self.keys()
        )
    }
}

fn wrap(r: covsym::Result<star_algebra::Symbol>) -> PyResult<PySymbol> {
    r.map(|inner| PySymbol { inner }).map_err(to_py)
}

#[pyfunction]
fn star_product(ctx: &PyConstants, f: &PySymbol, g: &PySymbol) -> PyResult<PySymbol> {
    wrap(star_algebra::star_product(&ctx.inner, &f.inner, &g.inner))
}

#[pyfunction]
fn involution(ctx: &PyConstants, f: &PySymbol) -> PyResult<PySymbol> {
    wrap(star_algebra::involution(&ctx.inner, &f.inner))
}

#[pyfunction]
fn inner_product(f: &PySymbol, g: &PySymbol) -> PyResult<Complex64> {
    star_algebra::inner_product(&f.inner, &g.inner).map_err(to_py)
}

#[pyfunction]
fn idempotent_rank_one(ctx: &PyConstants, degree: u32, f: Vec<Complex64>) -> PyResult<PySymbol> {
    wrap(star_algebra::idempotent_rank_one(
        &ctx.inner,
        degree,
        &DVector::from_vec(f),
    ))
}

#[pyfunction]
fn k_invariant_idempotent(ctx: &PyConstants, degree: u32) -> PyResult<PySymbol> {
    wrap(star_algebra::k_invariant_idempotent(&ctx.inner, degree).map(|k| k.to_symbol()))
}

#[pyfunction]
fn theta_symbol(n: usize, sigma: f64, degree: u32) -> PyResult<PySymbol> {
    wrap(star_algebra::theta_symbol(n, sigma, degree))
}

#[pyfunction]
fn truncated_identity(ctx: &PyConstants, degrees: Vec<u32>) -> PyResult<PySymbol> {
    wrap(star_algebra::truncated_identity(&ctx.inner, &degrees))
}

/// `{degree: a_ℓ}` of the projection onto the K-invariant subalgebra.
#[pyfunction]
fn k_project(f: &PySymbol) -> std::collections::BTreeMap<u32, Complex64> {
    star_algebra::k_project(&f.inner).values
}

/// Hilbert–Schmidt norm of the matrix realization.
#[pyfunction]
fn hs_norm(ctx: &PyConstants, f: &PySymbol) -> PyResult<f64> {
    star_algebra::matrix_realization(&ctx.inner, &f.inner)
        .map(|m| m.hs_norm())
        .map_err(to_py)
}

#[pyfunction]
fn e_mu(n: usize, mu: Complex64) -> PyResult<Complex64> {
    intertwining::e_mu(n, mu).map_err(to_py)
}

#[pyfunction]
fn c_mu(n: usize, mu: Complex64) -> PyResult<Complex64> {
    intertwining::c_mu(n, mu).map_err(to_py)
}

#[pyfunction]
fn d_sigma(n: usize, sigma: f64) -> PyResult<Complex64> {
    intertwining::d_sigma(n, sigma).map_err(to_py)
}

#[pyfunction]
fn eta_ell(n: usize, degree: u32, mu: Complex64) -> PyResult<Complex64> {
    if !degree.is_multiple_of(2) {
        return Err(PyValueError::new_err("degree must be even"));
    }
    intertwining::eta_ell(n, degree, mu).map_err(to_py)
}

#[pyfunction]
fn harmonic_dim(n: usize, degree: u32) -> usize {
    specfun::harmonic_dim(n, degree)
}

type SuiteRow = (u8, String, f64, f64, bool);

/// Runs the verification suite; returns `(criterion, label, residual, tolerance, passed)` rows.
#[pyfunction]
#[pyo3(signature = (n=3, sigma=1.3, l_max=8, grid_exactness=24, seed=0))]
fn run_suite(
    n: usize,
    sigma: f64,
    l_max: u32,
    grid_exactness: u32,
    seed: u64,
) -> PyResult<Vec<SuiteRow>> {
    let cfg = verify::SuiteConfig {
        n,
        sigma,
        l_max,
        grid_exactness,
        seed,
    };
    let checks = verify::run_suite(&cfg).map_err(to_py)?;
    Ok(checks
        .into_iter()
        .map(|c| {
            let passed = c.passed();
            (c.criterion, c.label, c.residual, c.tolerance, passed)
        })
        .collect())
}

#[pymodule]
#[pyo3(name = "covsym")]
fn covsym_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("BASIS_TAG", covsym::harmonics::BASIS_TAG)?;
    m.add_class::<PyConstants>()?;
    m.add_class::<PySymbol>()?;
    m.add_function(wrap_pyfunction!(star_product, m)?)?;
    m.add_function(wrap_pyfunction!(involution, m)?)?;
    m.add_function(wrap_pyfunction!(inner_product, m)?)?;
    m.add_function(wrap_pyfunction!(idempotent_rank_one, m)?)?;
    m.add_function(wrap_pyfunction!(k_invariant_idempotent, m)?)?;
    m.add_function(wrap_pyfunction!(theta_symbol, m)?)?;
    m.add_function(wrap_pyfunction!(truncated_identity, m)?)?;
    m.add_function(wrap_pyfunction!(k_project, m)?)?;
    m.add_function(wrap_pyfunction!(hs_norm, m)?)?;
    m.add_function(wrap_pyfunction!(e_mu, m)?)?;
    m.add_function(wrap_pyfunction!(c_mu, m)?)?;
    m.add_function(wrap_pyfunction!(d_sigma, m)?)?;
    m.add_function(wrap_pyfunction!(eta_ell, m)?)?;
    m.add_function(wrap_pyfunction!(harmonic_dim, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    Ok(())
}
