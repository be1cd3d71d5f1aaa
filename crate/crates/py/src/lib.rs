//! Python bindings. Reports that are JSON on the Rust side come back as
//! plain dicts and lists.

use std::collections::BTreeMap;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use chm_core::catalog::builtin_matrix;
use chm_core::classification::DitaDetector;
use chm_core::{io, GroupSpec, LogHadamardMatrix, PhaseRational, RootOfUnitySum};

fn err(e: chm_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<'py>(py: Python<'py>, v: &serde_json::Value) -> PyResult<Bound<'py, PyAny>> {
    use serde_json::Value;
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any(),
        Value::Number(n) => match n.as_i64() {
            Some(i) => i.into_pyobject(py)?.into_any(),
            None => n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any(),
        },
        Value::String(s) => s.into_pyobject(py)?.into_any(),
        Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(to_py(py, item)?)?;
            }
            list.into_any()
        }
        Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, item) in map {
                dict.set_item(k, to_py(py, item)?)?;
            }
            dict.into_any()
        }
    })
}

fn report<'py, T: serde::Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &serde_json::to_value(value).map_err(|e| PyValueError::new_err(e.to_string()))?)
}

/// A phase as a fraction of a full turn, reduced to [0, 1).
#[pyclass(name = "Phase", frozen, eq, hash, ord, from_py_object)]
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct PyPhase(PhaseRational);

#[pymethods]
impl PyPhase {
    #[new]
    #[pyo3(signature = (num, den = 1))]
    fn new(num: i64, den: u64) -> PyResult<Self> {
        PhaseRational::try_new(num, den).map(PyPhase).map_err(err)
    }

    #[staticmethod]
    fn parse(s: &str) -> PyResult<Self> {
        s.parse().map(PyPhase).map_err(err)
    }

    #[getter]
    fn numerator(&self) -> u64 {
        self.0.numerator()
    }

    #[getter]
    fn denominator(&self) -> u64 {
        self.0.denominator()
    }

    fn __add__(&self, other: &PyPhase) -> PyPhase {
        PyPhase(self.0 + other.0)
    }

    fn __sub__(&self, other: &PyPhase) -> PyPhase {
        PyPhase(self.0 - other.0)
    }

    fn __neg__(&self) -> PyPhase {
        PyPhase(-self.0)
    }

    fn __float__(&self) -> f64 {
        self.0.to_f64()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Phase('{}')", self.0)
    }
}

/// A square matrix of phases.
#[pyclass(name = "Matrix", frozen, eq, from_py_object)]
#[derive(Clone, PartialEq)]
struct PyMatrix(LogHadamardMatrix);

#[pymethods]
impl PyMatrix {
    /// Entries `rows[i][j] / den`.
    #[new]
    fn new(den: u64, rows: Vec<Vec<i64>>) -> PyResult<Self> {
        LogHadamardMatrix::from_numerators(den, &rows).map(PyMatrix).map_err(err)
    }

    /// Text (`N Q` header) or JSON matrix source.
    #[staticmethod]
    fn parse(s: &str) -> PyResult<Self> {
        io::parse_auto(s).map(PyMatrix).map_err(err)
    }

    /// S8, S12, S16, H8 or F<n>.
    #[staticmethod]
    fn builtin(name: &str) -> PyResult<Self> {
        builtin_matrix(name)
            .map(PyMatrix)
            .ok_or_else(|| PyValueError::new_err(format!("unknown builtin matrix `{name}`")))
    }

    #[staticmethod]
    fn fourier(n: usize) -> PyResult<Self> {
        if n == 0 {
            return Err(PyValueError::new_err("size must be positive"));
        }
        Ok(PyMatrix(chm_core::fourier_matrix(n)))
    }

    #[getter]
    fn size(&self) -> usize {
        self.0.size()
    }

    fn __len__(&self) -> usize {
        self.0.size()
    }

    fn get(&self, i: usize, j: usize) -> PyResult<PyPhase> {
        let n = self.0.size();
        if i >= n || j >= n {
            return Err(PyValueError::new_err(format!("index ({i}, {j}) out of range for size {n}")));
        }
        Ok(PyPhase(self.0.get(i, j)))
    }

    /// `(Q, rows)` with every entry `rows[i][j] / Q`.
    fn numerators(&self) -> (u64, Vec<Vec<u64>>) {
        self.0.numerators()
    }

    fn common_denominator(&self) -> u64 {
        self.0.common_denominator()
    }

    fn is_hadamard(&self) -> bool {
        self.0.is_hadamard()
    }

    fn first_non_orthogonal_rows(&self) -> Option<(usize, usize)> {
        self.0.first_non_orthogonal_rows()
    }

    fn transpose(&self) -> PyMatrix {
        PyMatrix(self.0.transpose())
    }

    fn dephase(&self) -> PyMatrix {
        PyMatrix(self.0.dephase())
    }

    /// `result[i][j] = row_phases[i] + self[row_perm[i]][col_perm[j]] + col_phases[j]`.
    fn apply(
        &self,
        row_phases: Vec<PyPhase>,
        row_perm: Vec<usize>,
        col_perm: Vec<usize>,
        col_phases: Vec<PyPhase>,
    ) -> PyResult<PyMatrix> {
        let unwrap = |v: Vec<PyPhase>| v.into_iter().map(|p| p.0).collect();
        let t = chm_core::EquivalenceTransform::new(unwrap(row_phases), row_perm, col_perm, unwrap(col_phases))
            .map_err(err)?;
        self.0.apply(&t).map(PyMatrix).map_err(err)
    }

    fn to_text(&self) -> String {
        io::to_text(&self.0)
    }

    fn to_json(&self) -> String {
        io::to_json(&self.0)
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.0)
    }
}

fn group(spec: &str) -> PyResult<GroupSpec> {
    spec.parse().map_err(err)
}

/// Matrix of the modified grid spectrum for a group `"p1.q1,p2.q2,p3.q3"`.
#[pyfunction]
fn szabo_matrix(spec: &str) -> PyResult<PyMatrix> {
    Ok(PyMatrix(chm_core::szabo_matrix(&group(spec)?)))
}

/// `(elements, spectrum)` of the construction, as lists of rows.
#[pyfunction]
fn szabo_pair<'py>(py: Python<'py>, spec: &str) -> PyResult<(Bound<'py, PyAny>, Bound<'py, PyAny>)> {
    let g = group(spec)?;
    Ok((report(py, &chm_core::szabo_base_set(&g))?, report(py, &chm_core::szabo_modified_spectrum(&g))?))
}

#[pyfunction]
fn build_dita(m: &PyMatrix, ns: Vec<PyMatrix>) -> PyResult<PyMatrix> {
    let ns: Vec<_> = ns.into_iter().map(|x| x.0).collect();
    chm_core::build_dita(&m.0, &ns).map(PyMatrix).map_err(err)
}

/// `{"result": "found" | "none" | "exhausted", "witness": ...}`.
#[pyfunction]
#[pyo3(signature = (m, n, k, node_limit = None))]
fn detect_dita_pattern<'py>(
    py: Python<'py>,
    m: &PyMatrix,
    n: usize,
    k: usize,
    node_limit: Option<u64>,
) -> PyResult<Bound<'py, PyAny>> {
    let detector = node_limit.map(DitaDetector::with_node_limit).unwrap_or_default();
    let outcome = chm_core::classification::FactorizationOutcome {
        n,
        k,
        result: py.detach(|| detector.detect(&m.0, n, k)).map_err(err)?,
    };
    report(py, &outcome)
}

#[pyfunction]
#[pyo3(signature = (m, node_limit = None))]
fn is_dita_type<'py>(py: Python<'py>, m: &PyMatrix, node_limit: Option<u64>) -> PyResult<Bound<'py, PyAny>> {
    let detector = node_limit.map(DitaDetector::with_node_limit).unwrap_or_default();
    let r = py.detach(|| detector.is_dita_type(&m.0));
    report(py, &r)
}

#[pyfunction]
fn i_equivalent(m: &PyMatrix, row_a: usize, row_b: usize, index_set: Vec<usize>) -> PyResult<bool> {
    chm_core::i_equivalent(&m.0, row_a, row_b, &index_set).map_err(err)
}

#[pyfunction]
fn dn_equivalent(m: &PyMatrix, row_a: usize, row_b: usize, d: usize, n: usize) -> PyResult<Option<Vec<Vec<usize>>>> {
    chm_core::dn_equivalent(&m.0, row_a, row_b, d, n).map_err(err)
}

#[pyfunction]
fn f12_orbit_exclusion_check(m: &PyMatrix) -> PyResult<bool> {
    chm_core::f12_orbit_exclusion_check(&m.0).map_err(err)
}

/// `[(phase, count), ...]` in increasing phase order.
#[pyfunction]
fn haagerup_invariant(m: &PyMatrix) -> Vec<(String, u64)> {
    let h = chm_core::haagerup_invariant(&m.0);
    h.multiset().iter().map(|(p, c)| (p.to_string(), *c)).collect()
}

#[pyfunction]
#[pyo3(signature = (a, b, budget = 10_000_000))]
fn brute_force_equivalent<'py>(py: Python<'py>, a: &PyMatrix, b: &PyMatrix, budget: u64) -> PyResult<Bound<'py, PyAny>> {
    let outcome = py.detach(|| chm_core::brute_force_equivalent(&a.0, &b.0, budget)).map_err(err)?;
    report(py, &outcome)
}

/// Does `sum_r counts[r] * exp(2 pi i r / order)` vanish exactly?
#[pyfunction]
fn sum_is_zero(order: u64, counts: Vec<u64>) -> PyResult<bool> {
    Ok(RootOfUnitySum::new(order, counts).map_err(err)?.is_zero())
}

/// Instantiate a builtin family; values are phases in turns, e.g. `{"a": "1/4"}`.
#[pyfunction]
fn family_instantiate(name: &str, values: BTreeMap<String, String>) -> PyResult<PyMatrix> {
    let f = chm_core::builtin_family(name).map_err(err)?;
    let values = values
        .into_iter()
        .map(|(k, v)| Ok((k, v.parse::<PhaseRational>().map_err(err)?)))
        .collect::<PyResult<BTreeMap<_, _>>>()?;
    chm_core::family_instantiate(&f, &values).map(PyMatrix).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (name, samples = 100, seed = 0))]
fn family_verify<'py>(py: Python<'py>, name: &str, samples: usize, seed: u64) -> PyResult<Bound<'py, PyAny>> {
    let f = chm_core::builtin_family(name).map_err(err)?;
    let r = py.detach(|| chm_core::family_verify(&f, samples, seed));
    report(py, &r)
}

#[pyfunction]
fn family_params(name: &str) -> PyResult<Vec<String>> {
    Ok(chm_core::builtin_family(name).map_err(err)?.params().to_vec())
}

#[pymodule]
fn chm(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPhase>()?;
    m.add_class::<PyMatrix>()?;
    m.add_function(wrap_pyfunction!(szabo_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(szabo_pair, m)?)?;
    m.add_function(wrap_pyfunction!(build_dita, m)?)?;
    m.add_function(wrap_pyfunction!(detect_dita_pattern, m)?)?;
    m.add_function(wrap_pyfunction!(is_dita_type, m)?)?;
    m.add_function(wrap_pyfunction!(i_equivalent, m)?)?;
    m.add_function(wrap_pyfunction!(dn_equivalent, m)?)?;
    m.add_function(wrap_pyfunction!(f12_orbit_exclusion_check, m)?)?;
    m.add_function(wrap_pyfunction!(haagerup_invariant, m)?)?;
    m.add_function(wrap_pyfunction!(brute_force_equivalent, m)?)?;
    m.add_function(wrap_pyfunction!(sum_is_zero, m)?)?;
    m.add_function(wrap_pyfunction!(family_instantiate, m)?)?;
    m.add_function(wrap_pyfunction!(family_verify, m)?)?;
    m.add_function(wrap_pyfunction!(family_params, m)?)?;
    Ok(())
}
