//! Python module `pycmlattice`.

use cmlattice::alexander::{self, AlexanderPoly};
use cmlattice::changemaker::{self, Changemaker};
use cmlattice::dinvariants::{self, CorrectionTerm, SpincLabel};
use cmlattice::lattice::{self, LatticeVector};
use cmlattice::{cables, realization};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use serde::Serialize;
use serde_json::Value;

fn err(e: cmlattice::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn value_to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any(),
        Value::Number(n) => match n.as_i64() {
            Some(i) => i.into_pyobject(py)?.into_any(),
            None => n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any(),
        },
        Value::String(s) => s.into_pyobject(py)?.into_any(),
        Value::Array(xs) => {
            let list = PyList::empty(py);
            for x in xs {
                list.append(value_to_py(py, x)?)?;
            }
            list.into_any()
        }
        Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, x) in map {
                dict.set_item(k, value_to_py(py, x)?)?;
            }
            dict.into_any()
        }
    })
}

fn to_py<'py, T: Serialize>(py: Python<'py>, x: &T) -> PyResult<Bound<'py, PyAny>> {
    let v = serde_json::to_value(x).map_err(|e| PyValueError::new_err(e.to_string()))?;
    value_to_py(py, &v)
}

fn fraction<'py>(py: Python<'py>, d: CorrectionTerm) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?
        .getattr("Fraction")?
        .call1((d.numer(), d.denom()))
}

#[pyclass(name = "Changemaker", frozen, eq, hash, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyChangemaker(Changemaker);

#[pymethods]
impl PyChangemaker {
    #[new]
    fn new(sigma: Vec<i64>) -> PyResult<Self> {
        Changemaker::new(sigma).map(PyChangemaker).map_err(err)
    }

    #[getter]
    fn sigma(&self) -> Vec<i64> {
        self.0.sigma().to_vec()
    }

    #[getter]
    fn norm(&self) -> i64 {
        self.0.norm()
    }

    #[getter]
    fn l1(&self) -> i64 {
        self.0.l1()
    }

    fn sharp_genus(&self) -> i64 {
        changemaker::sharp_genus(&self.0)
    }

    /// Indices of a subset summing to `k`.
    fn make_change(&self, k: i64) -> PyResult<Vec<usize>> {
        changemaker::make_change(&self.0, k)
            .map(|c| c.indices)
            .map_err(err)
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __repr__(&self) -> String {
        format!("Changemaker({:?})", self.0.sigma())
    }
}

#[pyclass(name = "AlexanderPoly", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyAlexanderPoly(AlexanderPoly);

#[pymethods]
impl PyAlexanderPoly {
    /// From `a_0, ..., a_g`.
    #[new]
    fn new(half: Vec<i64>) -> PyResult<Self> {
        AlexanderPoly::from_half(half)
            .map(PyAlexanderPoly)
            .map_err(err)
    }

    #[staticmethod]
    fn from_symmetric(full: Vec<i64>) -> PyResult<Self> {
        AlexanderPoly::from_symmetric(&full)
            .map(PyAlexanderPoly)
            .map_err(err)
    }

    #[staticmethod]
    fn torus(r: i64, s: i64) -> PyResult<Self> {
        alexander::torus_poly(r, s)
            .map(PyAlexanderPoly)
            .map_err(err)
    }

    #[staticmethod]
    fn cable(q: i64, r: i64, companion: &PyAlexanderPoly) -> PyResult<Self> {
        alexander::cable_poly(q, r, &companion.0)
            .map(PyAlexanderPoly)
            .map_err(err)
    }

    #[getter]
    fn half(&self) -> Vec<i64> {
        self.0.half().to_vec()
    }

    #[getter]
    fn degree(&self) -> usize {
        self.0.degree()
    }

    fn to_symmetric(&self) -> Vec<i64> {
        self.0.to_symmetric()
    }

    fn is_lspace_form(&self) -> bool {
        alexander::validate_lspace_form(&self.0)
    }

    fn torsion(&self, i: i64) -> PyResult<i64> {
        alexander::torsion(&self.0, i).map(|t| t.value).map_err(err)
    }

    /// `t_0, ..., t_g`; requires L-space form.
    fn torsion_profile(&self) -> PyResult<Vec<i64>> {
        alexander::TorsionProfile::new(&self.0)
            .map(|t| t.values)
            .map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("AlexanderPoly({:?})", self.0.half())
    }
}

#[pyfunction]
fn is_changemaker(sigma: Vec<i64>) -> PyResult<bool> {
    changemaker::is_changemaker(&sigma).map_err(err)
}

#[pyfunction]
fn subset_sums_complete(sigma: Vec<i64>) -> bool {
    changemaker::subset_sums_complete(&sigma)
}

#[pyfunction]
#[pyo3(signature = (p, length=None, allow_zeros=false))]
fn enumerate_changemakers(
    p: i64,
    length: Option<usize>,
    allow_zeros: bool,
) -> PyResult<Vec<PyChangemaker>> {
    changemaker::enumerate_changemakers(p, length, allow_zeros)
        .map(|v| v.into_iter().map(PyChangemaker).collect())
        .map_err(err)
}

#[pyfunction]
fn bound_nonsharp(p: i64) -> PyResult<i64> {
    changemaker::bound_nonsharp(p).map_err(err)
}

#[pyfunction]
fn bound_sharp(p: i64) -> PyResult<i64> {
    changemaker::bound_sharp(p).map_err(err)
}

#[pyfunction]
fn hj_expand(p: i64, q: i64) -> PyResult<Vec<i64>> {
    lattice::hj_expand(p, q)
        .map(|l| l.weights().to_vec())
        .map_err(err)
}

#[pyfunction]
fn complement_basis(sigma: Vec<i64>) -> PyResult<Vec<Vec<i64>>> {
    lattice::complement_basis(&LatticeVector::new(sigma))
        .map(|b| b.into_iter().map(LatticeVector::into_coords).collect())
        .map_err(err)
}

#[pyfunction]
fn cable_genus(q: i64, r: i64, companion_genus: i64) -> PyResult<i64> {
    alexander::cable_genus(q, r, companion_genus).map_err(err)
}

#[pyfunction]
fn d_unknot(py: Python<'_>, p: i64, i: i64) -> PyResult<Bound<'_, PyAny>> {
    let label = SpincLabel::new(i, p).map_err(err)?;
    fraction(py, dinvariants::d_unknot(p, label).map_err(err)?)
}

#[pyfunction]
fn d_lspace_surgery<'py>(
    py: Python<'py>,
    p: i64,
    i: i64,
    poly: &PyAlexanderPoly,
) -> PyResult<Bound<'py, PyAny>> {
    let label = SpincLabel::new(i, p).map_err(err)?;
    fraction(
        py,
        dinvariants::d_lspace_surgery(p, label, &poly.0).map_err(err)?,
    )
}

#[pyfunction]
#[pyo3(signature = (sigma, poly, box_bound=3))]
fn lemma_c_check<'py>(
    py: Python<'py>,
    sigma: &PyChangemaker,
    poly: &PyAlexanderPoly,
    box_bound: i64,
) -> PyResult<Bound<'py, PyAny>> {
    let report = dinvariants::lemma_c_check(&sigma.0, &poly.0, box_bound).map_err(err)?;
    let out = to_py(py, &report)?;
    out.set_item("obstructed", report.obstructed())?;
    Ok(out)
}

#[pyfunction]
fn family(py: Python<'_>, n: u32) -> PyResult<Bound<'_, PyAny>> {
    let stage = cables::family(n).map_err(err)?;
    let check = cables::verify_stage(&stage).map_err(err)?;
    let out = to_py(py, &stage)?;
    out.set_item("verified", check.passed())?;
    Ok(out)
}

/// The witness as a dict, or `None` when `Lambda(p, q)` is not a
/// changemaker complement.
#[pyfunction]
fn realize(py: Python<'_>, p: i64, q: i64) -> PyResult<Option<Bound<'_, PyAny>>> {
    realization::realize(p, q)
        .map_err(err)?
        .map(|w| to_py(py, &w))
        .transpose()
}

#[pyfunction]
fn berge_bound(p: i64, g: i64) -> bool {
    realization::berge_bound(p, g)
}

#[pyfunction]
fn goda_teragaito_max(p: i64) -> PyResult<(i64, Vec<i64>)> {
    realization::goda_teragaito_max(p)
        .map(|(v, s)| (v, s.sigma().to_vec()))
        .map_err(err)
}

#[pyfunction]
#[pyo3(signature = (p_max, workers=1))]
fn scan(py: Python<'_>, p_max: i64, workers: usize) -> PyResult<Bound<'_, PyAny>> {
    let records = py
        .detach(|| realization::scan(p_max, workers))
        .map_err(err)?;
    to_py(py, &records)
}

#[pymodule]
fn pycmlattice(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyChangemaker>()?;
    m.add_class::<PyAlexanderPoly>()?;
    m.add_function(wrap_pyfunction!(is_changemaker, m)?)?;
    m.add_function(wrap_pyfunction!(subset_sums_complete, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_changemakers, m)?)?;
    m.add_function(wrap_pyfunction!(bound_nonsharp, m)?)?;
    m.add_function(wrap_pyfunction!(bound_sharp, m)?)?;
    m.add_function(wrap_pyfunction!(hj_expand, m)?)?;
    m.add_function(wrap_pyfunction!(complement_basis, m)?)?;
    m.add_function(wrap_pyfunction!(cable_genus, m)?)?;
    m.add_function(wrap_pyfunction!(d_unknot, m)?)?;
    m.add_function(wrap_pyfunction!(d_lspace_surgery, m)?)?;
    m.add_function(wrap_pyfunction!(lemma_c_check, m)?)?;
    m.add_function(wrap_pyfunction!(family, m)?)?;
    m.add_function(wrap_pyfunction!(realize, m)?)?;
    m.add_function(wrap_pyfunction!(berge_bound, m)?)?;
    m.add_function(wrap_pyfunction!(goda_teragaito_max, m)?)?;
    m.add_function(wrap_pyfunction!(scan, m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use pyo3::types::PyModule;

    #[test]
    fn module_functions() {
        Python::attach(|py| {
            let m = PyModule::new(py, "pycmlattice").unwrap();
            pycmlattice(&m).unwrap();
            let d = m.getattr("d_unknot").unwrap().call1((5, 1)).unwrap();
            assert_eq!(d.str().unwrap().to_string(), "1/5");
            let w = m.getattr("realize").unwrap().call1((5, 1)).unwrap();
            let sigma: Vec<i64> = w.get_item("sigma").unwrap().extract().unwrap();
            assert_eq!(sigma, vec![1, 2]);
            assert!(m
                .getattr("realize")
                .unwrap()
                .call1((7, 1))
                .unwrap()
                .is_none());
            assert!(m.getattr("realize").unwrap().call1((4, 2)).is_err());
        });
    }

    #[test]
    fn json_values_convert() {
        Python::attach(|py| {
            let v = serde_json::json!({ "a": [1, null, true], "b": "x" });
            let o = value_to_py(py, &v).unwrap();
            assert_eq!(
                o.repr().unwrap().to_string(),
                "{'a': [1, None, True], 'b': 'x'}"
            );
        });
    }
}
