//! Python bindings: polynomials as coefficient lists (ascending, ints or `"a/b"` strings),
//! field elements as coordinate lists in the power basis, zero-padded when short.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use jacobian_bounds::arith::cyclotomic::{min_poly_2cos as min_poly, sophie_polynomial as sophie_poly};
use jacobian_bounds::arith::{factor_over_q, RationalPoly};
use jacobian_bounds::bounds::lower::sophie_lower_bound as sophie_lower;
use jacobian_bounds::bounds::report::BoundReport;
use jacobian_bounds::bounds::{self, bundled_class_groups, ClassGroupStore};
use jacobian_bounds::cli::parse_rational;
use jacobian_bounds::field::{self, FieldElement, IndependenceOptions};
use jacobian_bounds::signatures::{certify_rho_infty, scan_sophie_germain, SophieGermainPair};
use jacobian_bounds::Error;
use num_rational::BigRational;

fn err(e: Error) -> PyErr {
    match e {
        Error::CertificateFailed(_) | Error::Undetermined(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn rationals(values: &[Bound<'_, PyAny>]) -> PyResult<Vec<BigRational>> {
    values
        .iter()
        .map(|v| parse_rational(&v.str()?.to_string()).map_err(err))
        .collect()
}

fn poly_from(values: &[Bound<'_, PyAny>]) -> PyResult<RationalPoly> {
    Ok(RationalPoly::new(rationals(values)?))
}

fn coeff_strings(coeffs: &[BigRational]) -> Vec<String> {
    coeffs.iter().map(|c| c.to_string()).collect()
}

fn store(path: Option<&str>) -> PyResult<ClassGroupStore> {
    match path {
        Some(p) => ClassGroupStore::load(std::path::Path::new(p)).map_err(err),
        None => Ok(bundled_class_groups()),
    }
}

/// A bound report as `(line, upper, lower)`.
fn report_tuple(r: &BoundReport) -> (String, u64, Option<u64>) {
    (r.line(), r.upper_bound, r.lower_bound)
}

/// Ascending coefficients of the minimal polynomial of `zeta_q + zeta_q^-1` (or its negative).
#[pyfunction]
#[pyo3(signature = (q, negate=false))]
fn min_poly_2cos(q: u64, negate: bool) -> PyResult<Vec<String>> {
    Ok(coeff_strings(min_poly(q, negate).map_err(err)?.coeffs()))
}

/// The same polynomial as text, e.g. `x^3 - x^2 - 2x + 1`.
#[pyfunction]
#[pyo3(signature = (q, negate=false))]
fn min_poly_2cos_str(q: u64, negate: bool) -> PyResult<String> {
    Ok(min_poly(q, negate).map_err(err)?.to_string())
}

/// `(leading coefficient, [(monic factor coefficients, multiplicity), ...])`.
#[pyfunction]
fn factor(coeffs: Vec<Bound<'_, PyAny>>) -> PyResult<(String, Vec<(Vec<String>, u32)>)> {
    let f = factor_over_q(&poly_from(&coeffs)?).map_err(err)?;
    Ok((
        f.content.to_string(),
        f.factors.iter().map(|(g, e)| (coeff_strings(g.coeffs()), *e)).collect(),
    ))
}

#[pyclass(name = "NumberField", frozen)]
struct PyNumberField {
    inner: field::NumberField,
}

impl PyNumberField {
    fn element(&self, coords: &[Bound<'_, PyAny>]) -> PyResult<FieldElement> {
        let mut c = rationals(coords)?;
        if c.len() < self.inner.degree() {
            c.resize(self.inner.degree(), BigRational::from_integer(0.into()));
        }
        self.inner.element(c).map_err(err)
    }
}

#[pymethods]
impl PyNumberField {
    /// `Q[x]/(f)` for a monic irreducible integral `f` given by ascending coefficients.
    #[new]
    fn new(coeffs: Vec<Bound<'_, PyAny>>) -> PyResult<Self> {
        Ok(PyNumberField { inner: field::NumberField::new(poly_from(&coeffs)?).map_err(err)? })
    }

    /// The field of `Q(zeta_q)^+` generated by `(-1)^((p-1)/2) (zeta + zeta^-1)`.
    #[staticmethod]
    fn sophie(q: u64) -> PyResult<Self> {
        let f = sophie_poly(q).map_err(err)?;
        Ok(PyNumberField { inner: field::NumberField::new_irreducible(f).map_err(err)? })
    }

    #[getter]
    fn degree(&self) -> usize {
        self.inner.degree()
    }

    #[getter]
    fn discriminant(&self) -> String {
        self.inner.discriminant().to_string()
    }

    fn mul(&self, a: Vec<Bound<'_, PyAny>>, b: Vec<Bound<'_, PyAny>>) -> PyResult<Vec<String>> {
        let c = self.inner.mul(&self.element(&a)?, &self.element(&b)?);
        Ok(coeff_strings(c.coords()))
    }

    fn norm(&self, a: Vec<Bound<'_, PyAny>>) -> PyResult<String> {
        Ok(self.inner.norm(&self.element(&a)?).to_string())
    }

    /// Signs (+1/-1) at the real embeddings, ordered by ascending root.
    fn signature(&self, a: Vec<Bound<'_, PyAny>>) -> PyResult<Vec<i8>> {
        Ok(self.inner.signature(&self.element(&a)?).map_err(err)?.signs)
    }

    /// A square root's coordinates, or `None` for a non-square.
    fn sqrt(&self, a: Vec<Bound<'_, PyAny>>) -> PyResult<Option<Vec<String>>> {
        let v = self.inner.is_square(&self.element(&a)?).map_err(err)?;
        Ok(v.witness().map(|w| coeff_strings(w.coords())))
    }

    fn is_square(&self, a: Vec<Bound<'_, PyAny>>) -> PyResult<bool> {
        Ok(self.inner.is_square(&self.element(&a)?).map_err(err)?.is_square())
    }

    /// Dimension of the span of the given elements modulo squares.
    fn independence_rank(&self, elements: Vec<Vec<Bound<'_, PyAny>>>) -> PyResult<usize> {
        let reps = elements.iter().map(|e| self.element(e)).collect::<PyResult<Vec<_>>>()?;
        let set = field::SquareClassSet::new(reps).map_err(err)?;
        field::independence_rank_mod_squares(&self.inner, &set).map_err(err)
    }
}

/// Whether 2 is inert in `Q(zeta_p)^+`.
#[pyfunction]
fn two_inert_in_real_cyclotomic(p: u64) -> PyResult<bool> {
    bounds::two_inert_in_real_cyclotomic(p).map_err(err)
}

/// `(q, p, d_infty, certified)` for one Sophie Germain pair.
#[pyfunction]
fn certify_rho(q: u64) -> PyResult<(u64, u64, u64, bool)> {
    let c = certify_rho_infty(&SophieGermainPair::from_q(q).map_err(err)?);
    Ok((c.pair.q, c.pair.p, c.d_infty, c.rho_infty_zero))
}

/// Certificates for every pair with `q <= max_q`, sorted by `q`.
#[pyfunction]
#[pyo3(signature = (max_q, threads=None))]
fn scan_rho(py: Python<'_>, max_q: u64, threads: Option<usize>) -> Vec<(u64, u64, u64, bool)> {
    py.detach(|| scan_sophie_germain(max_q, threads))
        .iter()
        .map(|c| (c.pair.q, c.pair.p, c.d_infty, c.rho_infty_zero))
        .collect()
}

/// `(report line, upper, lower)`; `clgroups` defaults to the bundled data.
#[pyfunction]
#[pyo3(signature = (m, clgroups=None))]
fn washington_bound(m: i64, clgroups: Option<&str>) -> PyResult<(String, u64, Option<u64>)> {
    Ok(report_tuple(&bounds::washington_bound(m, &store(clgroups)?).map_err(err)?))
}

#[pyfunction]
#[pyo3(signature = (q, clgroups=None, assume_davis_taussky=false, scan_bound=bounds::DEFAULT_SCAN_BOUND))]
fn sophie_upper_bound(
    q: u64,
    clgroups: Option<&str>,
    assume_davis_taussky: bool,
    scan_bound: u64,
) -> PyResult<(String, u64, Option<u64>)> {
    let r = bounds::sophie_upper_bound(q, &store(clgroups)?, assume_davis_taussky, scan_bound).map_err(err)?;
    Ok(report_tuple(&r))
}

/// `(lower bound, partial)` from the points with `y = 1`.
#[pyfunction]
#[pyo3(signature = (q, cap=16))]
fn sophie_lower_bound(py: Python<'_>, q: u64, cap: usize) -> PyResult<(usize, bool)> {
    let lb = py
        .detach(|| sophie_lower(q, &IndependenceOptions { cap, ..Default::default() }))
        .map_err(err)?;
    Ok((lb.lower, lb.partial))
}

/// `(lower bound, number of classes, partial)` for `y^2 = f(x)` at `y = y0`.
#[pyfunction]
#[pyo3(signature = (coeffs, y0=None, cap=16))]
fn lower_bound_from_points(
    coeffs: Vec<Bound<'_, PyAny>>,
    y0: Option<Bound<'_, PyAny>>,
    cap: usize,
) -> PyResult<(usize, usize, bool)> {
    let f = poly_from(&coeffs)?;
    let y0 = match y0 {
        Some(v) => rationals(&[v])?.remove(0),
        None => BigRational::from_integer(1.into()),
    };
    let lb = bounds::lower_bound_from_points(&f, &y0, &IndependenceOptions { cap, ..Default::default() }).map_err(err)?;
    Ok((lb.lower, lb.classes.len(), lb.partial))
}

#[pymodule]
#[pyo3(name = "jacobian_bounds")]
fn jacobian_bounds_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyNumberField>()?;
    m.add_function(wrap_pyfunction!(min_poly_2cos, m)?)?;
    m.add_function(wrap_pyfunction!(min_poly_2cos_str, m)?)?;
    m.add_function(wrap_pyfunction!(factor, m)?)?;
    m.add_function(wrap_pyfunction!(two_inert_in_real_cyclotomic, m)?)?;
    m.add_function(wrap_pyfunction!(certify_rho, m)?)?;
    m.add_function(wrap_pyfunction!(scan_rho, m)?)?;
    m.add_function(wrap_pyfunction!(washington_bound, m)?)?;
    m.add_function(wrap_pyfunction!(sophie_upper_bound, m)?)?;
    m.add_function(wrap_pyfunction!(sophie_lower_bound, m)?)?;
    m.add_function(wrap_pyfunction!(lower_bound_from_points, m)?)?;
    Ok(())
}
