//! Python bindings: modules, complexes, chain maps and the certified
//! constructions. Certificates cross the boundary as plain dicts.

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use precover_core::certify::{self, Certificate, Sampling};
use precover_core::classes::ModuleClass;
use precover_core::complex::{self as cx, ChainComplex, ChainMap};
use precover_core::constructions as con;
use precover_core::hom;
use precover_core::json::{ChainMapJson, ComplexJson};
use precover_core::module::ModuleJson;
use precover_core::{Error, FPModule, MatrixZn, RingSpec};

create_exception!(precover, PrecoverError, PyException);

fn py_err(e: Error) -> PyErr {
    PrecoverError::new_err(e.to_string())
}

fn json_err(e: serde_json::Error) -> PyErr {
    PrecoverError::new_err(format!("malformed JSON: {e}"))
}

fn ring(n: u64) -> PyResult<RingSpec> {
    RingSpec::new(n).map_err(py_err)
}

fn class(name: &str, ring: &RingSpec) -> PyResult<ModuleClass> {
    ModuleClass::builtin(name, ring).map_err(py_err)
}

fn to_py_json<'py, T: serde::Serialize>(py: Python<'py>, v: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(v).map_err(json_err)?;
    py.import("json")?.call_method1("loads", (text,))
}

#[pyclass(name = "Module", module = "precover", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyModuleZn {
    inner: FPModule,
}

#[pymethods]
impl PyModuleZn {
    /// Module over Z/n with the given generators and relation rows.
    #[new]
    #[pyo3(signature = (ring, generators, relations = Vec::new()))]
    fn new(ring: u64, generators: usize, relations: Vec<Vec<i64>>) -> PyResult<Self> {
        let r = self::ring(ring)?;
        let rel = MatrixZn::from_rows(&r, generators, &relations).map_err(py_err)?;
        let inner = FPModule::from_presentation(&r, generators, &rel).map_err(py_err)?;
        Ok(PyModuleZn { inner })
    }

    #[staticmethod]
    fn free(ring: u64, rank: usize) -> PyResult<Self> {
        Ok(PyModuleZn { inner: FPModule::free(&self::ring(ring)?, rank) })
    }

    #[staticmethod]
    fn cyclic(ring: u64, order: u64) -> PyResult<Self> {
        Ok(PyModuleZn { inner: FPModule::cyclic(&self::ring(ring)?, order) })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let j: ModuleJson = serde_json::from_str(text).map_err(json_err)?;
        Ok(PyModuleZn { inner: FPModule::from_json(&j).map_err(py_err)? })
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner.to_json()).map_err(json_err)
    }

    #[getter]
    fn ring(&self) -> u64 {
        self.inner.ring().modulus()
    }

    #[getter]
    fn order(&self) -> u64 {
        self.inner.order()
    }

    fn elementary_divisors(&self) -> Vec<u64> {
        self.inner.elementary_divisors()
    }

    fn is_isomorphic(&self, other: &PyModuleZn) -> bool {
        self.inner.is_isomorphic(&other.inner)
    }

    fn __repr__(&self) -> String {
        format!("Module(Z/{}, divisors={:?})", self.ring(), self.inner.elementary_divisors())
    }
}

#[pyclass(name = "Complex", module = "precover", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyComplex {
    inner: ChainComplex,
}

#[pymethods]
impl PyComplex {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let j: ComplexJson = serde_json::from_str(text).map_err(json_err)?;
        Ok(PyComplex { inner: ChainComplex::from_json(&j).map_err(py_err)? })
    }

    #[staticmethod]
    fn stalk(degree: i32, module: &PyModuleZn) -> Self {
        PyComplex { inner: ChainComplex::stalk(degree, &module.inner) }
    }

    /// `M` in degrees `n` and `n − 1` joined by the identity.
    #[staticmethod]
    fn disk(degree: i32, module: &PyModuleZn) -> Self {
        PyComplex { inner: ChainComplex::disk(degree, &module.inner) }
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner.to_json()).map_err(json_err)
    }

    fn term(&self, degree: i32) -> PyModuleZn {
        PyModuleZn { inner: self.inner.term(degree) }
    }

    /// `(lo, hi)` of the nonzero terms, or `None` for the zero complex.
    fn support(&self) -> Option<(i32, i32)> {
        self.inner.support()
    }

    fn is_exact(&self) -> bool {
        self.inner.is_exact()
    }

    fn homology_order(&self, degree: i32) -> u64 {
        self.inner.homology_order(degree)
    }

    fn reverse_dual(&self) -> PyResult<PyComplex> {
        Ok(PyComplex { inner: cx::reverse_dual(&self.inner).map_err(py_err)?.complex })
    }

    fn __repr__(&self) -> String {
        let terms: Vec<String> = self
            .inner
            .degrees()
            .map(|m| format!("{m}: {:?}", self.inner.term(m).elementary_divisors()))
            .collect();
        format!("Complex(Z/{}, {{{}}})", self.inner.ring().modulus(), terms.join(", "))
    }
}

#[pyclass(name = "ChainMap", module = "precover", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyChainMap {
    inner: ChainMap,
}

#[pymethods]
impl PyChainMap {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let j: ChainMapJson = serde_json::from_str(text).map_err(json_err)?;
        Ok(PyChainMap { inner: ChainMap::from_json(&j).map_err(py_err)? })
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner.to_json()).map_err(json_err)
    }

    #[getter]
    fn source(&self) -> PyComplex {
        PyComplex { inner: self.inner.source().clone() }
    }

    #[getter]
    fn target(&self) -> PyComplex {
        PyComplex { inner: self.inner.target().clone() }
    }

    fn is_epic(&self) -> bool {
        self.inner.is_epic()
    }

    fn is_monic(&self) -> bool {
        self.inner.is_monic()
    }

    fn is_iso(&self) -> bool {
        self.inner.is_iso()
    }
}

/// A constructed map with its kernel (precovers) or cokernel (preenvelopes)
/// and certificate.
#[pyclass(name = "Construction", module = "precover", frozen)]
struct PyConstruction {
    #[pyo3(get)]
    map: Py<PyChainMap>,
    #[pyo3(get)]
    complex: Py<PyComplex>,
    certificate: Certificate,
}

#[pymethods]
impl PyConstruction {
    #[getter]
    fn level(&self) -> &'static str {
        self.certificate.level.as_str()
    }

    #[getter]
    fn certificate<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py_json(py, &self.certificate)
    }
}

fn construction(py: Python<'_>, map: ChainMap, complex: ChainComplex, certificate: Certificate) -> PyResult<PyConstruction> {
    Ok(PyConstruction {
        map: Py::new(py, PyChainMap { inner: map })?,
        complex: Py::new(py, PyComplex { inner: complex })?,
        certificate,
    })
}

/// Order of `Hom(M, N)`.
#[pyfunction]
fn hom_order(m: &PyModuleZn, n: &PyModuleZn) -> PyResult<u64> {
    Ok(hom::hom_group(&m.inner, &n.inner).map_err(py_err)?.module().order())
}

#[pyfunction]
fn ext1(m: &PyModuleZn, n: &PyModuleZn) -> PyResult<PyModuleZn> {
    Ok(PyModuleZn { inner: hom::ext1(&m.inner, &n.inner).map_err(py_err)? })
}

#[pyfunction]
fn ext1_ch(x: &PyComplex, y: &PyComplex) -> PyResult<PyModuleZn> {
    Ok(PyModuleZn { inner: con::ext1_ch(&x.inner, &y.inner).map_err(py_err)? })
}

#[pyfunction]
#[pyo3(signature = (c, cls = "free", seed = 0, samples = 20))]
fn epic_precover(py: Python<'_>, c: &PyComplex, cls: &str, seed: u64, samples: usize) -> PyResult<PyConstruction> {
    let class = class(cls, c.inner.ring())?;
    let r = con::epic_precover(&c.inner, &class, &Sampling::new(seed, samples)).map_err(py_err)?;
    construction(py, r.map, r.kernel, r.certificate)
}

#[pyfunction]
#[pyo3(signature = (c, cls = "free", supplied = None, seed = 0, samples = 20))]
fn special_precover(
    py: Python<'_>,
    c: &PyComplex,
    cls: &str,
    supplied: Option<&PyChainMap>,
    seed: u64,
    samples: usize,
) -> PyResult<PyConstruction> {
    let class = class(cls, c.inner.ring())?;
    let s = Sampling::new(seed, samples);
    let r = con::special_precover_any(&c.inner, &class, supplied.map(|m| &m.inner), &s).map_err(py_err)?;
    construction(py, r.result.map, r.result.kernel, r.result.certificate)
}

#[pyfunction]
#[pyo3(signature = (c, cls = "free", seed = 0, samples = 20))]
fn monic_preenvelope(py: Python<'_>, c: &PyComplex, cls: &str, seed: u64, samples: usize) -> PyResult<PyConstruction> {
    let class = class(cls, c.inner.ring())?;
    let r = con::monic_preenvelope(&c.inner, &class, &Sampling::new(seed, samples)).map_err(py_err)?;
    construction(py, r.map, r.cokernel, r.certificate)
}

#[pyfunction]
#[pyo3(signature = (c, cls = "injective", seed = 0, samples = 20))]
fn special_preenvelope(py: Python<'_>, c: &PyComplex, cls: &str, seed: u64, samples: usize) -> PyResult<PyConstruction> {
    let class = class(cls, c.inner.ring())?;
    let s = Sampling::new(seed, samples);
    let r = con::special_preenvelope_any(&c.inner, &class, None, &s).map_err(py_err)?;
    construction(py, r.map, r.cokernel, r.certificate)
}

/// `[(degree, module), …]` with `C ≅ ⊕ D^degree(module)`.
#[pyfunction]
#[pyo3(signature = (c, cls = "all"))]
fn decompose(c: &PyComplex, cls: &str) -> PyResult<Vec<(i32, PyModuleZn)>> {
    let class = class(cls, c.inner.ring())?;
    let d = con::decompose_into_disks(&c.inner, &class).map_err(py_err)?;
    Ok(d.pieces.into_iter().map(|(n, m)| (n, PyModuleZn { inner: m })).collect())
}

/// Re-verifies a claimed map; `kind` is `precover`, `special-precover`,
/// `preenvelope` or `special-preenvelope`.
#[pyfunction]
#[pyo3(signature = (map, kind, cls = "free", seed = 0, samples = 20))]
fn certify_map<'py>(
    py: Python<'py>,
    map: &PyChainMap,
    kind: &str,
    cls: &str,
    seed: u64,
    samples: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let class = class(cls, map.inner.ring())?;
    let s = Sampling::new(seed, samples);
    let cert = match kind {
        "precover" => certify::certify_precover(&map.inner, &class, &s),
        "special-precover" => certify::certify_special(&map.inner, &class, &s),
        "preenvelope" => certify::certify_preenvelope(&map.inner, &class, &s),
        "special-preenvelope" => certify::certify_special_preenvelope(&map.inner, &class, &s),
        other => return Err(PrecoverError::new_err(format!("unknown claim kind {other:?}"))),
    }
    .map_err(py_err)?;
    to_py_json(py, &cert)
}

/// The bundled cover fixtures as `{name: level}`.
#[pyfunction]
#[pyo3(signature = (seed = 0, samples = 20))]
fn examples<'py>(py: Python<'py>, seed: u64, samples: usize) -> PyResult<Bound<'py, PyDict>> {
    let out = PyDict::new(py);
    for sc in con::example_scenarios(&Sampling::new(seed, samples)).map_err(py_err)? {
        out.set_item(sc.name, sc.certificate.level.as_str())?;
    }
    Ok(out)
}

#[pymodule]
fn precover(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("PrecoverError", m.py().get_type::<PrecoverError>())?;
    m.add_class::<PyModuleZn>()?;
    m.add_class::<PyComplex>()?;
    m.add_class::<PyChainMap>()?;
    m.add_class::<PyConstruction>()?;
    m.add_function(wrap_pyfunction!(hom_order, m)?)?;
    m.add_function(wrap_pyfunction!(ext1, m)?)?;
    m.add_function(wrap_pyfunction!(ext1_ch, m)?)?;
    m.add_function(wrap_pyfunction!(epic_precover, m)?)?;
    m.add_function(wrap_pyfunction!(special_precover, m)?)?;
    m.add_function(wrap_pyfunction!(monic_preenvelope, m)?)?;
    m.add_function(wrap_pyfunction!(special_preenvelope, m)?)?;
    m.add_function(wrap_pyfunction!(decompose, m)?)?;
    m.add_function(wrap_pyfunction!(certify_map, m)?)?;
    m.add_function(wrap_pyfunction!(examples, m)?)?;
    Ok(())
}
