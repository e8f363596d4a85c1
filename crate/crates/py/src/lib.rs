//! Python bindings. Certified quantities come back as `(lo, hi)` string
//! pairs with outward-rounded decimal endpoints; reports come back as the
//! same dicts the CLI writes as JSON.

use num_bigint::BigInt;
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use serde_json::Value;

use unit_twist_core::approx::{self, UnitEntry};
use unit_twist_core::effective::{effective_gap, EffectiveConfig};
use unit_twist_core::exactnum::{format_rational, parse_rational, CertifiedReal, PrecisionPolicy};
use unit_twist_core::numfield::{format_poly_desc, AlgebraicField, FieldElement, FieldOptions};
use unit_twist_core::report::{self, EffectiveJson, Interval, PisotJson};
use unit_twist_core::twistform::{enum_solutions, twist_form};
use unit_twist_core::unitgrp::{biquadratic_family_with, cubic_family_with, UnitBasis};
use unit_twist_core::Error;

const BITS: u32 = 256;

fn err(e: Error) -> PyErr {
    match e {
        Error::PrecisionExhausted { .. } => PyArithmeticError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn interval(x: &CertifiedReal) -> (String, String) {
    let i = Interval::of(x);
    (i.lo, i.hi)
}

fn big(x: &Bound<'_, PyAny>) -> PyResult<BigInt> {
    let s = x.str()?.to_string();
    s.parse().map_err(|_| PyValueError::new_err(format!("not an integer: {s}")))
}

fn to_py(py: Python<'_>, v: &Value) -> PyResult<PyObject> {
    Ok(match v {
        Value::Null => py.None(),
        Value::Bool(b) => b.into_py(py),
        Value::Number(n) => match n.as_i64() {
            Some(i) => i.into_py(py),
            None => match n.as_u64() {
                Some(u) => u.into_py(py),
                None => n.as_f64().unwrap_or(f64::NAN).into_py(py),
            },
        },
        Value::String(s) => s.into_py(py),
        Value::Array(a) => {
            let items = a.iter().map(|x| to_py(py, x)).collect::<PyResult<Vec<_>>>()?;
            PyList::new_bound(py, items).into_py(py)
        }
        Value::Object(m) => {
            let d = PyDict::new_bound(py);
            for (k, x) in m {
                d.set_item(k, to_py(py, x)?)?;
            }
            d.into_py(py)
        }
    })
}

fn ser<T: serde::Serialize>(py: Python<'_>, x: &T) -> PyResult<PyObject> {
    let v = serde_json::to_value(x).map_err(|e| PyValueError::new_err(e.to_string()))?;
    to_py(py, &v)
}

/// A number field Q[X]/(f) with a chosen identity embedding.
#[pyclass(module = "unit_twist_lab", frozen)]
#[derive(Clone)]
struct Field {
    inner: AlgebraicField,
}

#[pymethods]
impl Field {
    #[new]
    #[pyo3(signature = (coeffs, attest_irreducible=false, identity_embedding=None, max_bits=None))]
    fn new(coeffs: Vec<i64>, attest_irreducible: bool, identity_embedding: Option<usize>, max_bits: Option<u32>) -> PyResult<Self> {
        let coeffs: Vec<BigInt> = coeffs.into_iter().map(BigInt::from).collect();
        let opts = FieldOptions {
            attest_irreducible,
            identity_embedding,
            policy: max_bits.map(PrecisionPolicy::with_max_bits),
        };
        Ok(Field {
            inner: AlgebraicField::with_options(&coeffs, opts).map_err(err)?,
        })
    }

    #[getter]
    fn degree(&self) -> usize {
        self.inner.degree()
    }

    #[getter]
    fn signature(&self) -> (usize, usize) {
        self.inner.signature()
    }

    #[getter]
    fn unit_rank(&self) -> usize {
        self.inner.unit_rank()
    }

    #[getter]
    fn polynomial(&self) -> String {
        self.inner.polynomial_string()
    }

    /// Real and imaginary enclosures of every root.
    fn embeddings(&self) -> PyResult<Vec<((String, String), (String, String))>> {
        let e = self.inner.embeddings(BITS).map_err(err)?;
        Ok(e.iter().map(|z| (interval(&z.re), interval(&z.im))).collect())
    }

    fn element(&self, coords: Vec<String>) -> PyResult<Element> {
        Ok(Element {
            inner: FieldElement::from_strings(&self.inner, &coords).map_err(err)?,
        })
    }

    fn generator(&self) -> Element {
        Element {
            inner: FieldElement::generator(&self.inner),
        }
    }

    fn __repr__(&self) -> String {
        format!("Field({})", self.inner.polynomial_string())
    }
}

#[pyclass(module = "unit_twist_lab", frozen)]
#[derive(Clone)]
struct Element {
    inner: FieldElement,
}

#[pymethods]
impl Element {
    #[getter]
    fn coords(&self) -> Vec<String> {
        self.inner.to_strings()
    }

    fn field(&self) -> Field {
        Field {
            inner: self.inner.field().clone(),
        }
    }

    fn norm(&self) -> String {
        format_rational(&self.inner.norm())
    }

    fn trace(&self) -> String {
        format_rational(&self.inner.trace())
    }

    fn minpoly(&self) -> String {
        format_poly_desc(&self.inner.minpoly_integer(), "X")
    }

    fn is_unit(&self) -> bool {
        self.inner.is_unit()
    }

    fn house(&self) -> PyResult<(String, String)> {
        Ok(interval(&self.inner.house(BITS).map_err(err)?))
    }

    fn height(&self) -> PyResult<(String, String)> {
        Ok(interval(&self.inner.height(BITS).map_err(err)?))
    }

    /// Value at the identity embedding (real part for complex embeddings).
    fn value(&self) -> PyResult<((String, String), (String, String))> {
        let z = self.inner.identity_value(BITS).map_err(err)?;
        Ok((interval(&z.re), interval(&z.im)))
    }

    fn __mul__(&self, other: &Element) -> PyResult<Element> {
        Ok(Element {
            inner: self.inner.mul(&other.inner).map_err(err)?,
        })
    }

    fn __pow__(&self, n: i64, _modulo: Option<PyObject>) -> PyResult<Element> {
        Ok(Element {
            inner: self.inner.pow(n).map_err(err)?,
        })
    }

    fn __eq__(&self, other: &Element) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("Element([{}])", self.inner.to_strings().join(", "))
    }
}

/// `(field, alpha, eps0)` for X^3 - (D^3 - 1).
#[pyfunction]
#[pyo3(signature = (d, max_bits=None))]
fn cubic_family(d: i64, max_bits: Option<u32>) -> PyResult<(Field, Element, Element)> {
    let opts = FieldOptions {
        policy: max_bits.map(PrecisionPolicy::with_max_bits),
        ..FieldOptions::default()
    };
    let c = cubic_family_with(d, opts).map_err(err)?;
    Ok((
        Field { inner: c.field.clone() },
        Element { inner: c.omega() },
        Element { inner: c.eps0 },
    ))
}

/// `(field, alpha, eps1, eps2)` for X^4 - (D^4 - 1).
#[pyfunction]
#[pyo3(signature = (d, max_bits=None))]
fn biquadratic_family(d: i64, max_bits: Option<u32>) -> PyResult<(Field, Element, Element, Element)> {
    let opts = FieldOptions {
        policy: max_bits.map(PrecisionPolicy::with_max_bits),
        ..FieldOptions::default()
    };
    let c = biquadratic_family_with(d, opts).map_err(err)?;
    Ok((
        Field { inner: c.field.clone() },
        Element { inner: c.omega() },
        Element { inner: c.eps1 },
        Element { inner: c.eps2 },
    ))
}

fn basis_of(units: &[Element]) -> PyResult<UnitBasis> {
    let first = units.first().ok_or_else(|| PyValueError::new_err("empty unit basis"))?;
    UnitBasis::new(first.inner.field(), units.iter().map(|u| u.inner.clone()).collect()).map_err(err)
}

fn powers(unit: &Element, n_lo: i64, n_hi: i64) -> PyResult<Vec<UnitEntry>> {
    (n_lo..=n_hi)
        .map(|n| {
            Ok(UnitEntry {
                label: n.to_string(),
                element: unit.inner.pow(n).map_err(err)?,
            })
        })
        .collect()
}

/// Exponents of `x` in `basis`; raises if `x` is not in the group generated
/// by the basis and the roots of unity.
#[pyfunction]
fn recover_exponents(basis: Vec<Element>, x: &Element) -> PyResult<Vec<i64>> {
    Ok(basis_of(&basis)?.recover_exponents(&x.inner).map_err(err)?.exponents)
}

#[pyfunction]
fn kappa8(basis: Vec<Element>) -> PyResult<(String, String)> {
    Ok(interval(&basis_of(&basis)?.kappa8(BITS).map_err(err)?))
}

/// Per-exponent approximation search; returns the approx report dict with
/// one minimum row per n, plus the hits.
#[pyfunction]
#[pyo3(signature = (alpha, unit, n_lo, n_hi, q_max, kappa="1", exhaustive=false))]
fn approx_search(
    py: Python<'_>,
    alpha: &Element,
    unit: &Element,
    n_lo: i64,
    n_hi: i64,
    q_max: &Bound<'_, PyAny>,
    kappa: &str,
    exhaustive: bool,
) -> PyResult<(PyObject, PyObject)> {
    let kappa = parse_rational(kappa).map_err(err)?;
    let units = powers(unit, n_lo, n_hi)?;
    let rep = approx::search_best(&alpha.inner, &units, &big(q_max)?, &kappa, approx::SearchOptions { exhaustive })
        .map_err(err)?;
    let minima: Vec<_> = rep.summaries.iter().filter_map(|s| s.minimum.clone()).collect();
    Ok((
        ser(py, &report::approx_json("search-minima", &minima))?,
        ser(py, &report::approx_json("search-hits", &rep.records))?,
    ))
}

#[pyfunction]
fn liouville_sweep(py: Python<'_>, alpha: &Element, unit: &Element, n_lo: i64, n_hi: i64, q_max: &Bound<'_, PyAny>) -> PyResult<PyObject> {
    let recs = approx::liouville_sweep(&alpha.inner, &powers(unit, n_lo, n_hi)?, &big(q_max)?).map_err(err)?;
    ser(py, &report::approx_json("liouville", &recs))
}

/// The approx CSV (schema line, header, rows) for a list of records.
#[pyfunction]
fn approx_csv(py: Python<'_>, report_dict: &Bound<'_, PyAny>) -> PyResult<String> {
    let json = py.import_bound("json")?.call_method1("dumps", (report_dict,))?.extract::<String>()?;
    let rep: report::ApproxReportJson = report::from_json(&json).map_err(err)?;
    report::approx_csv_rows(&rep.records).map_err(err)
}

#[pyfunction]
fn pisot_check(py: Python<'_>, x: &Element) -> PyResult<PyObject> {
    let cert = approx::pseudo_pisot(&x.inner).map_err(err)?;
    ser(py, &PisotJson::of(&cert))
}

/// Solutions of F_e(x, y) = k with |x|, |y| <= bound, as `(x, y)` pairs.
#[pyfunction]
fn thue_solve(alpha: &Element, unit: &Element, k: i64, bound: u64) -> PyResult<Vec<(i64, i64)>> {
    let form = twist_form(&alpha.inner, &unit.inner, "e").map_err(err)?;
    let sols = enum_solutions(&form, k, bound).map_err(err)?;
    Ok(sols.iter().map(|s| (s.x, s.y)).collect())
}

/// Coefficients of the twisted form, highest power of X first.
#[pyfunction]
fn twisted_form(alpha: &Element, unit: &Element) -> PyResult<Vec<String>> {
    let form = twist_form(&alpha.inner, &unit.inner, "e").map_err(err)?;
    Ok(form.coeffs.iter().map(|c| c.to_string()).collect())
}

#[pyfunction]
#[pyo3(signature = (alpha, unit, basis, p, q, kappa4=None))]
fn gap(
    py: Python<'_>,
    alpha: &Element,
    unit: &Element,
    basis: Vec<Element>,
    p: &Bound<'_, PyAny>,
    q: &Bound<'_, PyAny>,
    kappa4: Option<f64>,
) -> PyResult<PyObject> {
    let mut cfg = EffectiveConfig::default();
    if let Some(k) = kappa4 {
        cfg.kappa4 = k;
    }
    let rep = effective_gap(&alpha.inner, &unit.inner, &big(p)?, &big(q)?, &basis_of(&basis)?, &cfg).map_err(err)?;
    ser(py, &EffectiveJson::of(&rep))
}

#[pymodule]
fn unit_twist_lab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Field>()?;
    m.add_class::<Element>()?;
    m.add_function(wrap_pyfunction!(cubic_family, m)?)?;
    m.add_function(wrap_pyfunction!(biquadratic_family, m)?)?;
    m.add_function(wrap_pyfunction!(recover_exponents, m)?)?;
    m.add_function(wrap_pyfunction!(kappa8, m)?)?;
    m.add_function(wrap_pyfunction!(approx_search, m)?)?;
    m.add_function(wrap_pyfunction!(liouville_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(approx_csv, m)?)?;
    m.add_function(wrap_pyfunction!(pisot_check, m)?)?;
    m.add_function(wrap_pyfunction!(thue_solve, m)?)?;
    m.add_function(wrap_pyfunction!(twisted_form, m)?)?;
    m.add_function(wrap_pyfunction!(gap, m)?)?;
    Ok(())
}
