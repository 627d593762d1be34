//! Python bindings for `isoforge`.
//!
//! Rationals cross the boundary as `fractions.Fraction`; anything whose
//! `str()` parses as `p/q` or a decimal is accepted on input.

use isoforge::classify::{self, Case};
use isoforge::doubling;
use isoforge::groups::{find_isomorphism, structure_report, DEFAULT_ISO_CAP};
use isoforge::hull::{self, DEFAULT_BUDGET};
use isoforge::metrics;
use isoforge::perturb::Scheme;
use isoforge::rational;
use isoforge::rigidify::{self, RigidOptions};
use isoforge::{io, Error, FiniteGroup, GroupAction, Perm, Rational, RationalMetric};
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

create_exception!(isoforge_py, BudgetExceeded, PyException);

fn to_py(e: Error) -> PyErr {
    if e.is_budget() {
        BudgetExceeded::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

fn fraction<'py>(py: Python<'py>, r: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((rational::format(r),))
}

fn parse_rational(obj: &Bound<'_, PyAny>) -> PyResult<Rational> {
    rational::parse(&obj.str()?.to_cow()?).map_err(to_py)
}

fn py_bool(b: bool) -> &'static str {
    if b {
        "True"
    } else {
        "False"
    }
}

fn perms_to_lists(perms: &[Perm]) -> Vec<Vec<usize>> {
    perms.iter().map(|p| p.images().to_vec()).collect()
}

/// A finite group given by its Cayley table.
#[pyclass(name = "Group", frozen, skip_from_py_object, module = "isoforge_py")]
#[derive(Clone)]
struct PyGroup {
    inner: FiniteGroup,
    natural: Option<GroupAction>,
}

#[pymethods]
impl PyGroup {
    #[new]
    #[pyo3(signature = (table, identity = 0))]
    fn new(table: Vec<Vec<usize>>, identity: usize) -> PyResult<Self> {
        let inner = FiniteGroup::from_cayley(table, identity).map_err(to_py)?;
        Ok(PyGroup { inner, natural: None })
    }

    /// Looks up a zoo name such as `sym:3`, `quaternion` or `IS:2`.
    #[staticmethod]
    fn zoo(name: &str) -> PyResult<Self> {
        let entry = doubling::zoo(name).map_err(to_py)?;
        Ok(PyGroup {
            inner: entry.group,
            natural: entry.action,
        })
    }

    #[staticmethod]
    fn curated_zoo() -> PyResult<Vec<(String, PyGroup)>> {
        Ok(doubling::curated_zoo()
            .map_err(to_py)?
            .into_iter()
            .map(|(n, g)| (n, PyGroup { inner: g, natural: None }))
            .collect())
    }

    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        let (_, inner) = io::parse_group_file(text).map_err(to_py)?;
        Ok(PyGroup { inner, natural: None })
    }

    fn to_text(&self, name: &str) -> String {
        io::write_group_file(name, &self.inner)
    }

    #[getter]
    fn order(&self) -> usize {
        self.inner.order()
    }

    #[getter]
    fn identity(&self) -> usize {
        self.inner.identity()
    }

    fn mul(&self, a: usize, b: usize) -> PyResult<usize> {
        let n = self.inner.order();
        if a >= n || b >= n {
            return Err(PyValueError::new_err("element out of range"));
        }
        Ok(self.inner.mul(a, b))
    }

    fn table(&self) -> Vec<Vec<usize>> {
        self.inner.table_rows()
    }

    fn is_abelian(&self) -> bool {
        self.inner.is_abelian()
    }

    fn is_boolean(&self) -> bool {
        self.inner.is_boolean()
    }

    fn exponent(&self) -> usize {
        structure_report(&self.inner).exponent
    }

    fn center(&self) -> Vec<usize> {
        self.inner.center().into_iter().collect()
    }

    fn is_isomorphic(&self, other: &PyGroup) -> PyResult<bool> {
        Ok(find_isomorphism(&self.inner, &other.inner, DEFAULT_ISO_CAP)
            .map_err(to_py)?
            .is_some())
    }

    fn left_action(&self) -> PyAction {
        PyAction {
            inner: self.inner.left_regular_action(),
        }
    }

    fn right_action(&self) -> PyAction {
        PyAction {
            inner: self.inner.right_regular_action(),
        }
    }

    /// The permutation action the zoo family is defined by, if any.
    fn natural_action(&self) -> Option<PyAction> {
        self.natural.clone().map(|inner| PyAction { inner })
    }

    #[pyo3(signature = (budget = DEFAULT_BUDGET))]
    fn classify(&self, budget: u64) -> PyResult<PyClassification> {
        let c = classify::classify(&self.inner, budget).map_err(to_py)?;
        Ok(PyClassification {
            case: c.case.to_string(),
            hull_e: perms_to_lists(&c.hull_e.maps),
            kappa_in_hull: c.kappa_in_hull,
        })
    }

    #[pyo3(signature = (budget = DEFAULT_BUDGET))]
    fn admits_left_rigid(&self, budget: u64) -> PyResult<bool> {
        Ok(classify::admits_left_rigid(&self.inner, budget).map_err(to_py)?.admits)
    }

    fn __repr__(&self) -> String {
        format!("Group(order={})", self.inner.order())
    }
}

/// A faithful action of a group on `0..degree`.
#[pyclass(name = "Action", frozen, skip_from_py_object, module = "isoforge_py")]
#[derive(Clone)]
struct PyAction {
    inner: GroupAction,
}

#[pymethods]
impl PyAction {
    /// `perms[g]` is the image list of group element `g`.
    #[new]
    fn new(group: &PyGroup, perms: Vec<Vec<usize>>) -> PyResult<Self> {
        let degree = perms.first().map_or(0, Vec::len);
        let perms = perms
            .into_iter()
            .map(Perm::from_images)
            .collect::<isoforge::Result<Vec<_>>>()
            .map_err(to_py)?;
        let inner = GroupAction::new(group.inner.clone(), degree, perms).map_err(to_py)?;
        Ok(PyAction { inner })
    }

    #[staticmethod]
    fn trivial(degree: usize) -> Self {
        PyAction {
            inner: GroupAction::trivial(degree),
        }
    }

    #[getter]
    fn degree(&self) -> usize {
        self.inner.degree()
    }

    #[getter]
    fn group(&self) -> PyGroup {
        PyGroup {
            inner: self.inner.group().clone(),
            natural: None,
        }
    }

    fn perms(&self) -> Vec<Vec<usize>> {
        perms_to_lists(self.inner.perms())
    }

    #[pyo3(signature = (budget = DEFAULT_BUDGET))]
    fn hull(&self, budget: u64) -> PyResult<Vec<Vec<usize>>> {
        Ok(perms_to_lists(&hull::symmetrized_hull(&self.inner, budget).map_err(to_py)?.maps))
    }

    #[pyo3(signature = (budget = DEFAULT_BUDGET))]
    fn is_hull_closed(&self, budget: u64) -> PyResult<bool> {
        hull::is_hull_closed(&self.inner, budget).map_err(to_py)
    }

    fn num_pair_classes(&self) -> usize {
        hull::pair_classes(&self.inner).num_classes()
    }

    /// Builds a metric whose isometry group is the hull of this action.
    #[pyo3(signature = (seed = None, epsilon = None, scheme = "direct", verify = None, demand_exact = false, budget = DEFAULT_BUDGET))]
    fn rigid_metric(
        &self,
        seed: Option<&PyMetric>,
        epsilon: Option<&Bound<'_, PyAny>>,
        scheme: &str,
        verify: Option<bool>,
        demand_exact: bool,
        budget: u64,
    ) -> PyResult<PyRigidityReport> {
        let mut opts = RigidOptions {
            scheme: scheme.parse::<Scheme>().map_err(to_py)?,
            verify,
            demand_exact,
            budget,
            ..RigidOptions::default()
        };
        if let Some(e) = epsilon {
            opts.epsilon = parse_rational(e)?;
        }
        let r = rigidify::rigid_metric(&self.inner, seed.map(|s| &s.inner), &opts).map_err(to_py)?;
        Ok(PyRigidityReport {
            metric: PyMetric { inner: r.metric.clone() },
            group_order: r.group_order,
            hull_order: r.hull_order,
            realized_group_order: r.realized_group_order,
            exact: r.exact,
            verified: r.verified,
            corridor_ok: r.corridor_holds(),
            corridor: (rational::format(&r.corridor.0), rational::format(&r.corridor.1)),
        })
    }

    fn __repr__(&self) -> String {
        format!("Action(order={}, degree={})", self.inner.group().order(), self.inner.degree())
    }
}

/// An exact finite metric on `0..degree`.
#[pyclass(name = "Metric", frozen, skip_from_py_object, module = "isoforge_py")]
#[derive(Clone)]
struct PyMetric {
    inner: RationalMetric,
}

#[pymethods]
impl PyMetric {
    /// Full distance matrix; entries may be ints, `Fraction`s or strings.
    #[new]
    fn new(rows: Vec<Vec<Bound<'_, PyAny>>>) -> PyResult<Self> {
        let m = rows
            .iter()
            .map(|r| r.iter().map(parse_rational).collect::<PyResult<Vec<_>>>())
            .collect::<PyResult<Vec<_>>>()?;
        Ok(PyMetric {
            inner: RationalMetric::validate(m).map_err(to_py)?,
        })
    }

    #[staticmethod]
    fn discrete(degree: usize) -> Self {
        PyMetric {
            inner: RationalMetric::discrete(degree),
        }
    }

    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        Ok(PyMetric {
            inner: io::parse_metric_file(text).map_err(to_py)?,
        })
    }

    fn to_text(&self) -> String {
        io::write_metric_file(&self.inner)
    }

    #[getter]
    fn degree(&self) -> usize {
        self.inner.degree()
    }

    fn get<'py>(&self, py: Python<'py>, x: usize, y: usize) -> PyResult<Bound<'py, PyAny>> {
        let n = self.inner.degree();
        if x >= n || y >= n {
            return Err(PyValueError::new_err("point out of range"));
        }
        fraction(py, self.inner.get(x, y))
    }

    fn rows<'py>(&self, py: Python<'py>) -> PyResult<Vec<Vec<Bound<'py, PyAny>>>> {
        self.inner
            .rows()
            .iter()
            .map(|r| r.iter().map(|v| fraction(py, v)).collect())
            .collect()
    }

    fn invariantize(&self, action: &PyAction) -> PyResult<PyMetric> {
        Ok(PyMetric {
            inner: metrics::invariantize(&self.inner, &action.inner).map_err(to_py)?,
        })
    }

    fn is_invariant_under(&self, action: &PyAction) -> bool {
        self.inner.is_invariant_under(&action.inner)
    }

    #[pyo3(signature = (budget = DEFAULT_BUDGET))]
    fn isometries(&self, budget: u64) -> PyResult<Vec<Vec<usize>>> {
        Ok(perms_to_lists(&metrics::isometries(&self.inner, budget).map_err(to_py)?))
    }

    #[pyo3(signature = (budget = DEFAULT_BUDGET))]
    fn isometry_order(&self, budget: u64) -> PyResult<usize> {
        Ok(metrics::isometries(&self.inner, budget).map_err(to_py)?.len())
    }

    fn __repr__(&self) -> String {
        format!("Metric(degree={})", self.inner.degree())
    }
}

#[pyclass(name = "Classification", frozen, get_all, module = "isoforge_py")]
struct PyClassification {
    case: String,
    hull_e: Vec<Vec<usize>>,
    kappa_in_hull: bool,
}

#[pymethods]
impl PyClassification {
    fn __repr__(&self) -> String {
        format!(
            "Classification(case={}, hull_e={}, kappa_in_hull={})",
            self.case,
            self.hull_e.len(),
            py_bool(self.kappa_in_hull)
        )
    }
}

#[pyclass(name = "RigidityReport", frozen, get_all, module = "isoforge_py")]
struct PyRigidityReport {
    metric: PyMetric,
    group_order: usize,
    hull_order: usize,
    realized_group_order: usize,
    exact: bool,
    verified: bool,
    corridor_ok: bool,
    corridor: (String, String),
}

#[pymethods]
impl PyRigidityReport {
    fn __repr__(&self) -> String {
        format!(
            "RigidityReport(group_order={}, realized_group_order={}, exact={}, verified={})",
            self.group_order,
            self.realized_group_order,
            py_bool(self.exact),
            py_bool(self.verified)
        )
    }
}

/// Fraction of seeded random metrics on `points` points with trivial
/// isometry group.
#[pyfunction]
#[pyo3(signature = (points, trials, seed = 0))]
fn density<'py>(py: Python<'py>, points: usize, trials: usize, seed: u64) -> PyResult<Bound<'py, PyAny>> {
    let r = rigidify::density_trial(points, trials, seed).map_err(to_py)?;
    fraction(py, &r.fraction)
}

/// Sizes of the hull at the identity for cases A, B and C.
#[pyfunction]
fn case_sizes() -> Vec<(String, usize)> {
    [Case::A, Case::B, Case::C]
        .iter()
        .map(|c| (c.to_string(), c.hull_e_size()))
        .collect()
}

#[pymodule]
fn isoforge_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGroup>()?;
    m.add_class::<PyAction>()?;
    m.add_class::<PyMetric>()?;
    m.add_class::<PyClassification>()?;
    m.add_class::<PyRigidityReport>()?;
    m.add_function(wrap_pyfunction!(density, m)?)?;
    m.add_function(wrap_pyfunction!(case_sizes, m)?)?;
    m.add("BudgetExceeded", m.py().get_type::<BudgetExceeded>())?;
    Ok(())
}
