//! Python bindings for `monotone-core`.
//!
//! Points are passed as a string `"x1,..,xn,x*1,..,x*n"` or a sequence of
//! numbers; exact results come back as `fractions.Fraction`, float results as
//! `float`, and an infinite Fitzpatrick value as `math.inf`.

use monotone_core::document::{emit_operator, format_point, parse_operator, parse_point};
use monotone_core::scalar::parse_rational;
use monotone_core::{
    decide_non_enlargeable, fitz_finite, fitz_linear, in_enlargement_def, in_enlargement_fitz,
    is_self_cancelling, is_skew, ExtReal, Operator as CoreOperator, Rational, Scalar, Subspace,
    Verdict,
};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PySequence, PyString};

fn err(e: monotone_core::Error) -> PyErr {
    match e {
        monotone_core::Error::Parse(_) | monotone_core::Error::DimensionMismatch { .. }
        | monotone_core::Error::NegativeEpsilon => {
            PyValueError::new_err(e.to_string())
        }
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Mode {
    Exact,
    Float,
}

fn parse_mode(mode: &str) -> PyResult<Mode> {
    match mode {
        "exact" => Ok(Mode::Exact),
        "float" => Ok(Mode::Float),
        other => Err(PyValueError::new_err(format!(
            "mode must be 'exact' or 'float', got '{other}'"
        ))),
    }
}

fn point_text(point: &Bound<'_, PyAny>) -> PyResult<String> {
    if let Ok(s) = point.cast::<PyString>() {
        return Ok(s.to_str()?.to_owned());
    }
    let seq = point.cast::<PySequence>()?;
    let mut parts = Vec::with_capacity(seq.len()?);
    for item in seq.try_iter()? {
        parts.push(item?.str()?.to_str()?.to_owned());
    }
    Ok(parts.join(","))
}

fn scalar_to_py<'py, S: Scalar>(py: Python<'py>, v: &S, mode: Mode) -> PyResult<Bound<'py, PyAny>> {
    match mode {
        Mode::Float => Ok(v.to_f64().into_pyobject(py)?.into_any()),
        Mode::Exact => py
            .import("fractions")?
            .getattr("Fraction")?
            .call1((v.to_rational().to_string(),)),
    }
}

fn ext_to_py<'py, S: Scalar>(py: Python<'py>, v: &ExtReal<S>, mode: Mode) -> PyResult<Bound<'py, PyAny>> {
    match v.finite() {
        Some(x) => scalar_to_py(py, x, mode),
        None => Ok(f64::INFINITY.into_pyobject(py)?.into_any()),
    }
}

/// A monotone-operator candidate: a finite sample set, a linear relation or
/// an affine relation in `R^n x R^n`.
#[pyclass(module = "monotone", frozen)]
pub struct Operator {
    inner: CoreOperator<Rational>,
}

impl Operator {
    fn float(&self) -> CoreOperator<f64> {
        self.inner.map_scalar()
    }

    fn fitz_generic<'py, S: Scalar>(
        py: Python<'py>,
        op: &CoreOperator<S>,
        point: &str,
        mode: Mode,
    ) -> PyResult<Bound<'py, PyAny>> {
        let p = parse_point::<S>(point, op.n()).map_err(err)?;
        match op {
            CoreOperator::Finite(f) => scalar_to_py(py, &fitz_finite(f, &p).map_err(err)?, mode),
            _ => ext_to_py(py, &fitz_linear(op, &p).map_err(err)?, mode),
        }
    }

    fn enlarge_generic<S: Scalar>(
        op: &CoreOperator<S>,
        point: &str,
        eps: &Rational,
    ) -> PyResult<(bool, Option<bool>)> {
        let p = parse_point::<S>(point, op.n()).map_err(err)?;
        let eps = S::from_rational(eps);
        let def = in_enlargement_def(op, &p, &eps).map_err(err)?;
        let fitz = match op {
            CoreOperator::Finite(_) => None,
            _ => Some(in_enlargement_fitz(op, &p, &eps).map_err(err)?),
        };
        Ok((def, fitz))
    }

    fn decide_generic<'py, S: Scalar>(
        py: Python<'py>,
        op: &CoreOperator<S>,
        mode: Mode,
    ) -> PyResult<Bound<'py, PyDict>> {
        let out = PyDict::new(py);
        match decide_non_enlargeable(op).map_err(err)? {
            Verdict::NonEnlargeable { predual, base_point } => {
                out.set_item("verdict", "non-enlargeable")?;
                out.set_item("base_point", format_point(&base_point))?;
                out.set_item("predual", emit_operator(&CoreOperator::Linear(predual)))?;
            }
            Verdict::Enlargeable { witness, witness_eps, proof } => {
                out.set_item("verdict", "enlargeable")?;
                out.set_item("witness", format_point(&witness))?;
                out.set_item("eps", scalar_to_py(py, &witness_eps, mode)?)?;
                out.set_item("fitzpatrick", scalar_to_py(py, &proof.fitzpatrick, mode)?)?;
                out.set_item("duality", scalar_to_py(py, &proof.duality, mode)?)?;
            }
        }
        Ok(out)
    }

    fn linear(&self) -> PyResult<&Subspace<Rational>> {
        self.inner
            .linear_part()
            .ok_or_else(|| PyValueError::new_err("operation needs a linear or affine operator"))
    }
}

#[pymethods]
impl Operator {
    /// Parses a TOML operator document.
    #[staticmethod]
    fn from_document(text: &str) -> PyResult<Self> {
        let parsed = parse_operator::<Rational>(text).map_err(err)?;
        Ok(Self { inner: parsed.operator })
    }

    fn to_document(&self) -> String {
        emit_operator(&self.inner)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn kind(&self) -> &'static str {
        match self.inner {
            CoreOperator::Finite(_) => "finite",
            CoreOperator::Linear(_) => "linear",
            CoreOperator::Affine(_) => "affine",
        }
    }

    fn is_monotone(&self) -> bool {
        self.inner.is_monotone()
    }

    fn is_maximal_monotone(&self) -> PyResult<bool> {
        self.inner.is_maximal_monotone_linear().map_err(err)
    }

    fn is_skew(&self) -> PyResult<bool> {
        Ok(is_skew(self.linear()?))
    }

    fn is_self_cancelling(&self) -> PyResult<bool> {
        Ok(is_self_cancelling(self.linear()?))
    }

    fn contains(&self, point: &Bound<'_, PyAny>) -> PyResult<bool> {
        let p = parse_point::<Rational>(&point_text(point)?, self.inner.n()).map_err(err)?;
        self.inner.contains_point(&p).map_err(err)
    }

    /// The ⊢-complement of the linear part, as a linear operator.
    fn vdash(&self) -> PyResult<Self> {
        let b = match &self.inner {
            CoreOperator::Finite(f) => Subspace::span_points(f.points(), f.n()).map_err(err)?,
            _ => self.linear()?.clone(),
        };
        Ok(Self { inner: CoreOperator::Linear(b.vdash()) })
    }

    #[pyo3(signature = (point, mode = "exact"))]
    fn fitz<'py>(&self, py: Python<'py>, point: &Bound<'py, PyAny>, mode: &str) -> PyResult<Bound<'py, PyAny>> {
        let text = point_text(point)?;
        match parse_mode(mode)? {
            Mode::Exact => Self::fitz_generic(py, &self.inner, &text, Mode::Exact),
            Mode::Float => Self::fitz_generic(py, &self.float(), &text, Mode::Float),
        }
    }

    /// Membership of `point` in the ε-enlargement. Raises if the two routes
    /// disagree.
    #[pyo3(signature = (point, eps, mode = "exact"))]
    fn in_enlargement(&self, point: &Bound<'_, PyAny>, eps: &Bound<'_, PyAny>, mode: &str) -> PyResult<bool> {
        let text = point_text(point)?;
        let eps_text = eps.str()?.to_str()?.to_owned();
        let eps = parse_rational(&eps_text)
            .ok_or_else(|| PyValueError::new_err(format!("eps: malformed number '{eps_text}'")))?;
        let (def, fitz) = match parse_mode(mode)? {
            Mode::Exact => Self::enlarge_generic(&self.inner, &text, &eps)?,
            Mode::Float => Self::enlarge_generic(&self.float(), &text, &eps)?,
        };
        match fitz {
            Some(f) if f != def => Err(PyRuntimeError::new_err(format!(
                "membership routes disagree: definition {def}, fitzpatrick {f}"
            ))),
            _ => Ok(def),
        }
    }

    /// Decides non-enlargeability of a maximal monotone affine operator.
    #[pyo3(signature = (mode = "exact"))]
    fn decide<'py>(&self, py: Python<'py>, mode: &str) -> PyResult<Bound<'py, PyDict>> {
        match parse_mode(mode)? {
            Mode::Exact => Self::decide_generic(py, &self.inner, Mode::Exact),
            Mode::Float => Self::decide_generic(py, &self.float(), Mode::Float),
        }
    }

    fn __repr__(&self) -> String {
        format!("Operator(kind={:?}, n={})", self.kind(), self.inner.n())
    }
}

#[pymodule]
pub fn monotone(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Operator>()?;
    Ok(())
}
