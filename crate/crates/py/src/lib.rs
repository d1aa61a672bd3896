use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::Serialize;

use frobkit::bogomolov::{b0_with, B0Strategy};
use frobkit::cohomology::{h2_qz, DEFAULT_COHOMOLOGY_CAP};
use frobkit::constructors as cons;
use frobkit::frobenius::{find_frobenius_structures, verify_structure_theorems};
use frobkit::groupfile::GroupFile;
use frobkit::gz_classify::{frobenius_complement_criterion, gz_report, is_gz_group, is_z_group};
use frobkit::rationality::{builtin_field, certify as certify_group, explain, FieldSpec};
use frobkit::zlinalg::{kernel_mod_n as kernel_mod, smith_normal_form, SparseIntMatrix};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<T: Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    let s = serde_json::to_string(value).map_err(err)?;
    Ok(py.import("json")?.call_method1("loads", (s,))?.unbind())
}

/// A finite permutation group with all elements materialized.
#[pyclass(frozen, module = "frobkit_py")]
struct Group {
    inner: frobkit::Group,
}

fn wrap(g: Result<frobkit::Group, impl std::fmt::Display>) -> PyResult<Group> {
    g.map(|inner| Group { inner }).map_err(err)
}

#[pymethods]
impl Group {
    /// Generators are lists of images of `0..degree`.
    #[new]
    fn new(degree: usize, generators: Vec<Vec<usize>>) -> PyResult<Self> {
        let f = GroupFile {
            name: String::new(),
            degree,
            generators,
            metadata: None,
        };
        wrap(f.to_group())
    }

    #[staticmethod]
    fn cyclic(n: usize) -> PyResult<Self> {
        if n == 0 {
            return Err(err("n must be positive"));
        }
        Ok(Group { inner: cons::cyclic(n) })
    }

    #[staticmethod]
    fn abelian(orders: Vec<usize>) -> PyResult<Self> {
        if orders.contains(&0) {
            return Err(err("orders must be positive"));
        }
        Ok(Group { inner: cons::abelian(&orders) })
    }

    #[staticmethod]
    fn dihedral(n: usize) -> PyResult<Self> {
        wrap(cons::dihedral(n))
    }

    #[staticmethod]
    fn symmetric(n: usize) -> PyResult<Self> {
        wrap(cons::symmetric(n))
    }

    #[staticmethod]
    fn alternating(n: usize) -> PyResult<Self> {
        wrap(cons::alternating(n))
    }

    #[staticmethod]
    fn quaternion(order: u64) -> PyResult<Self> {
        wrap(cons::quaternion_generalized(order))
    }

    /// `⟨a, b | a^m, b^n, b a b⁻¹ = a^r⟩`
    #[staticmethod]
    fn metacyclic(m: u64, n: u64, r: u64) -> PyResult<Self> {
        wrap(cons::metacyclic(m, n, r))
    }

    #[staticmethod]
    fn sl2(p: u64) -> PyResult<Self> {
        wrap(cons::sl2(p))
    }

    /// `F_q^2 ⋊ SL2(F5)` for `q ≡ ±1 mod 10`.
    #[staticmethod]
    fn affine_binary_icosahedral(q: u32) -> PyResult<Self> {
        wrap(cons::affine_binary_icosahedral(q))
    }

    #[staticmethod]
    fn g_plus(q: u32) -> PyResult<Self> {
        cons::g_plus(q).map(|g| Group { inner: g.group().clone() }).map_err(err)
    }

    #[staticmethod]
    fn from_json(s: &str) -> PyResult<Self> {
        wrap(GroupFile::from_json(s).and_then(|f| f.to_group()))
    }

    #[pyo3(signature = (name = "group"))]
    fn to_json(&self, name: &str) -> String {
        GroupFile::from_group(name, &self.inner, None).to_json()
    }

    fn direct_product(&self, other: &Group) -> PyResult<Self> {
        wrap(self.inner.direct_product(&other.inner))
    }

    #[getter]
    fn order(&self) -> usize {
        self.inner.order()
    }

    #[getter]
    fn degree(&self) -> usize {
        self.inner.degree()
    }

    #[getter]
    fn exponent(&self) -> u64 {
        self.inner.exponent()
    }

    fn mul(&self, a: usize, b: usize) -> PyResult<usize> {
        self.check(&[a, b])?;
        Ok(self.inner.mul(a, b))
    }

    fn inv(&self, a: usize) -> PyResult<usize> {
        self.check(&[a])?;
        Ok(self.inner.inv(a))
    }

    fn element_order(&self, a: usize) -> PyResult<u64> {
        self.check(&[a])?;
        Ok(self.inner.element_order(a))
    }

    /// The permutation with index `a`, as a list of images.
    fn element(&self, a: usize) -> PyResult<Vec<usize>> {
        self.check(&[a])?;
        Ok(self.inner.element(a).images().iter().map(|&x| x as usize).collect())
    }

    fn is_abelian(&self) -> bool {
        self.inner.is_abelian()
    }

    fn is_cyclic(&self) -> bool {
        self.inner.is_cyclic()
    }

    fn is_nilpotent(&self) -> bool {
        self.inner.is_nilpotent()
    }

    fn is_solvable(&self) -> bool {
        self.inner.is_solvable()
    }

    fn is_perfect(&self) -> bool {
        self.inner.is_perfect()
    }

    fn __len__(&self) -> usize {
        self.inner.order()
    }

    fn __repr__(&self) -> String {
        format!("Group(order={}, degree={})", self.inner.order(), self.inner.degree())
    }
}

impl Group {
    fn check(&self, xs: &[usize]) -> PyResult<()> {
        match xs.iter().find(|&&x| x >= self.inner.order()) {
            Some(x) => Err(err(format!("element index {x} out of range"))),
            None => Ok(()),
        }
    }
}

#[derive(Serialize)]
struct Structure {
    kernel: Vec<usize>,
    complement: Vec<usize>,
    checks: frobkit::frobenius::TheoremChecks,
}

/// Every Frobenius kernel/complement pair, with the structure-theorem checks.
#[pyfunction]
fn frobenius_structures(py: Python<'_>, g: &Group) -> PyResult<Py<PyAny>> {
    let mut out = Vec::new();
    for s in find_frobenius_structures(&g.inner).map_err(err)? {
        let checks = verify_structure_theorems(&g.inner, &s).map_err(err)?;
        out.push(Structure {
            kernel: s.kernel.elements().to_vec(),
            complement: s.complement.elements().to_vec(),
            checks,
        });
    }
    to_py(py, &out)
}

#[pyfunction]
fn z_group(g: &Group) -> PyResult<bool> {
    is_z_group(&g.inner).map_err(err)
}

#[pyfunction]
fn gz_group(g: &Group) -> PyResult<bool> {
    is_gz_group(&g.inner).map_err(err)
}

/// Z/GZ recognition with the recovered family and parameters.
#[pyfunction]
fn classify(py: Python<'_>, g: &Group) -> PyResult<Py<PyAny>> {
    to_py(py, &gz_report(&g.inner).map_err(err)?)
}

#[pyfunction]
fn complement_criterion(py: Python<'_>, g: &Group) -> PyResult<Py<PyAny>> {
    to_py(py, &frobenius_complement_criterion(&g.inner).map_err(err)?)
}

/// Invariant factors of the Schur multiplier.
#[pyfunction]
#[pyo3(signature = (g, cap = DEFAULT_COHOMOLOGY_CAP))]
fn schur_multiplier(g: &Group, cap: usize) -> PyResult<Vec<u64>> {
    Ok(h2_qz(&g.inner, cap).map_err(err)?.invariants.factors)
}

/// Bogomolov multiplier by `method` in {"auto", "full", "sylow", "criteria"}; `None` when undecided.
#[pyfunction]
#[pyo3(signature = (g, method = "auto", cap = DEFAULT_COHOMOLOGY_CAP))]
fn b0(py: Python<'_>, g: &Group, method: &str, cap: usize) -> PyResult<Py<PyAny>> {
    let strategy = match method {
        "auto" => B0Strategy::Auto,
        "full" => B0Strategy::Full,
        "sylow" => B0Strategy::Sylow,
        "criteria" => B0Strategy::Criteria,
        other => return Err(err(format!("unknown method '{other}'"))),
    };
    let r = b0_with(&g.inner, strategy, cap).map_err(err)?;
    to_py(py, &r)
}

/// Retract-rationality verdict over `field` ("Q", "C", "Qzeta:m", "charp:q").
#[pyfunction]
#[pyo3(signature = (g, field, text = false))]
fn certify(py: Python<'_>, g: &Group, field: &str, text: bool) -> PyResult<Py<PyAny>> {
    let spec: FieldSpec = field.parse().map_err(err)?;
    let k = builtin_field(&spec).map_err(err)?;
    let v = certify_group(&g.inner, &k).map_err(err)?;
    if text {
        return Ok(explain(&v).into_pyobject(py)?.into_any().unbind());
    }
    to_py(py, &v)
}

fn sparse(rows: &[Vec<i64>]) -> PyResult<SparseIntMatrix> {
    let cols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != cols) {
        return Err(err("rows have different lengths"));
    }
    Ok(SparseIntMatrix::from_dense(rows))
}

/// Nonzero Smith diagonal, including ones.
#[pyfunction]
fn smith_diagonal(py: Python<'_>, matrix: Vec<Vec<i64>>) -> PyResult<Vec<Py<PyAny>>> {
    let s = smith_normal_form(&sparse(&matrix)?, false);
    s.diagonal
        .iter()
        .map(|d| Ok(py.import("builtins")?.getattr("int")?.call1((d.to_string(),))?.unbind()))
        .collect()
}

/// Generators and their orders for the solutions of `M x ≡ 0 (mod n)`.
#[pyfunction]
fn kernel_mod_n(matrix: Vec<Vec<i64>>, n: u64) -> PyResult<(Vec<Vec<u64>>, Vec<u64>)> {
    let k = kernel_mod(&sparse(&matrix)?, n).map_err(err)?;
    Ok((k.generators, k.orders))
}

#[pyfunction]
#[pyo3(signature = (q = 11))]
fn verify_paper(py: Python<'_>, q: u32) -> PyResult<Py<PyAny>> {
    to_py(py, &frobkit::verify::verify_paper(q).map_err(err)?)
}

#[pymodule]
fn frobkit_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Group>()?;
    m.add_function(wrap_pyfunction!(frobenius_structures, m)?)?;
    m.add_function(wrap_pyfunction!(z_group, m)?)?;
    m.add_function(wrap_pyfunction!(gz_group, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(complement_criterion, m)?)?;
    m.add_function(wrap_pyfunction!(schur_multiplier, m)?)?;
    m.add_function(wrap_pyfunction!(b0, m)?)?;
    m.add_function(wrap_pyfunction!(certify, m)?)?;
    m.add_function(wrap_pyfunction!(smith_diagonal, m)?)?;
    m.add_function(wrap_pyfunction!(kernel_mod_n, m)?)?;
    m.add_function(wrap_pyfunction!(verify_paper, m)?)?;
    Ok(())
}
