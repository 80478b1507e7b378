//! Python bindings for `twcoh`.

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

use twcoh::complex::{GlobalComplex, RelativeComplex};
use twcoh::eml;
use twcoh::ffs;
use twcoh::linalg::{self, Ring};
use twcoh::poset::{self, ExtInt, PosetSpec};
use twcoh::sset::{self, PresentationSpec};

create_exception!(pytwcoh, TwcohError, PyException);
create_exception!(pytwcoh, TruncationError, TwcohError);

fn err(e: twcoh::Error) -> PyErr {
    match e {
        twcoh::Error::Truncation { .. } => TruncationError::new_err(e.to_string()),
        _ => TwcohError::new_err(e.to_string()),
    }
}

fn ring(text: &str) -> PyResult<Ring> {
    Ring::parse(text).map_err(err)
}

#[pyclass(frozen, skip_from_py_object, module = "pytwcoh")]
#[derive(Clone)]
struct Poset(poset::Poset);

#[pymethods]
impl Poset {
    /// Builds a poset from labels and covering pairs `(lower, upper)`.
    #[new]
    fn new(labels: Vec<String>, covers: Vec<(usize, usize)>) -> PyResult<Self> {
        poset::Poset::new(labels, covers).map(Poset).map_err(err)
    }

    #[staticmethod]
    fn point() -> Self {
        Poset(poset::Poset::point())
    }

    #[staticmethod]
    fn linear(n: usize) -> Self {
        Poset(poset::Poset::linear(n))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let spec: PosetSpec = serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
        poset::Poset::from_spec(&spec).map(Poset).map_err(err)
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.0.to_spec()).expect("poset serializes")
    }

    #[getter]
    fn labels(&self) -> Vec<String> {
        self.0.labels().to_vec()
    }

    fn leq(&self, a: &str, b: &str) -> PyResult<bool> {
        let a = self.0.index_of(a).map_err(err)?;
        let b = self.0.index_of(b).map_err(err)?;
        Ok(self.0.leq(a, b))
    }

    fn maximal(&self) -> Vec<String> {
        self.0.maximal_elements().into_iter().map(|i| self.0.label(i).to_string()).collect()
    }

    fn is_open(&self, labels: Vec<String>) -> PyResult<bool> {
        let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
        self.0.alexandrov_open_labels(&refs).map_err(err)
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __repr__(&self) -> String {
        format!("Poset({:?})", self.0.labels())
    }
}

#[pyclass(frozen, skip_from_py_object, module = "pytwcoh")]
#[derive(Clone)]
struct Perversity {
    poset: poset::Poset,
    inner: poset::Perversity,
}

fn ext_to_py(v: ExtInt) -> String {
    v.to_string()
}

#[pymethods]
impl Perversity {
    /// `text` is an integer, `inf`, `-inf`, or a JSON map from labels to values.
    #[new]
    fn new(poset: &Poset, text: &str) -> PyResult<Self> {
        let inner = poset::parse_perversity(&poset.0, text).map_err(err)?;
        Ok(Perversity {
            poset: poset.0.clone(),
            inner,
        })
    }

    fn values(&self) -> Vec<(String, String)> {
        (0..self.poset.len())
            .map(|i| (self.poset.label(i).to_string(), ext_to_py(self.inner.at(i))))
            .collect()
    }

    fn __le__(&self, other: &Perversity) -> bool {
        self.inner.le(&other.inner)
    }

    fn __repr__(&self) -> String {
        format!("Perversity({})", self.inner.display(&self.poset))
    }
}

#[pyclass(frozen, skip_from_py_object, module = "pytwcoh")]
#[derive(Clone)]
struct CohomologyGroup(linalg::CohomologyGroup);

#[pymethods]
impl CohomologyGroup {
    #[getter]
    fn ring(&self) -> String {
        self.0.ring.to_string()
    }

    #[getter]
    fn free_rank(&self) -> usize {
        self.0.free_rank
    }

    /// Torsion coefficients as decimal strings.
    #[getter]
    fn torsion(&self) -> Vec<String> {
        self.0.torsion.iter().map(|t| t.to_string()).collect()
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn __eq__(&self, other: &CohomologyGroup) -> bool {
        self.0 == other.0
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("CohomologyGroup({})", self.0)
    }
}

#[pyclass(frozen, skip_from_py_object, module = "pytwcoh")]
#[derive(Clone)]
struct Presentation(sset::Presentation);

impl Presentation {
    fn plain(&self) -> PyResult<()> {
        if self.0.poset.len() != 1 {
            return Err(TwcohError::new_err("this construction needs a presentation over a point"));
        }
        Ok(())
    }

    fn ids(&self, cells: &[String]) -> PyResult<Vec<usize>> {
        cells.iter().map(|c| self.0.find_or_err(c).map_err(err)).collect()
    }
}

#[pymethods]
impl Presentation {
    #[staticmethod]
    fn example(name: &str) -> PyResult<Self> {
        twcoh::suite::by_name(name).map(Presentation).map_err(err)
    }

    #[staticmethod]
    fn examples() -> Vec<&'static str> {
        twcoh::suite::all().into_iter().map(|(n, _)| n).collect()
    }

    /// Parses a JSON presentation; `poset` is used when the document has none.
    #[staticmethod]
    #[pyo3(signature = (text, poset=None))]
    fn from_json(text: &str, poset: Option<&Poset>) -> PyResult<Self> {
        let spec: PresentationSpec = serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
        sset::Presentation::from_spec(&spec, poset.map(|p| &p.0))
            .map(Presentation)
            .map_err(err)
    }

    #[staticmethod]
    fn simplex(n: usize) -> Self {
        Presentation(sset::plain_simplex(n))
    }

    #[staticmethod]
    fn boundary(n: usize) -> Self {
        Presentation(sset::plain_boundary(n))
    }

    #[staticmethod]
    fn nerve(poset: &Poset) -> Self {
        Presentation(sset::nerve(&poset.0))
    }

    fn to_json(&self) -> String {
        self.0.to_json_string()
    }

    #[getter]
    fn poset(&self) -> Poset {
        Poset(self.0.poset.clone())
    }

    /// `(valid, errors)`.
    fn validate(&self) -> (bool, Vec<String>) {
        let r = self.0.validate();
        (r.valid, r.errors)
    }

    fn cell_ids(&self) -> Vec<String> {
        (0..self.0.len()).map(|i| self.0.cell(i).id.clone()).collect()
    }

    fn regular_cells(&self) -> Vec<String> {
        self.0.regular_cells().into_iter().map(|i| self.0.cell(i).id.clone()).collect()
    }

    fn count_by_dim(&self) -> Vec<usize> {
        self.0.count_by_dim()
    }

    fn euler_characteristic(&self) -> i64 {
        self.0.euler_characteristic()
    }

    fn skeleton(&self, d: usize) -> Self {
        Presentation(sset::skeleton(&self.0, d))
    }

    fn normalize(&self) -> PyResult<Self> {
        sset::normalize(&self.0).map(Presentation).map_err(err)
    }

    /// Whether the normalization comparison map passes every check.
    fn normality_certificate(&self) -> PyResult<bool> {
        ffs::normality_certificate(&self.0).map(|(_, c)| c.holds()).map_err(err)
    }

    fn prism(&self, n: usize) -> Self {
        Presentation(sset::tensor_with_standard(&self.0, n))
    }

    fn cone(&self) -> PyResult<Self> {
        self.plain()?;
        Ok(Presentation(sset::cone_on(&self.0)))
    }

    fn join(&self, other: &Presentation) -> PyResult<Self> {
        self.plain()?;
        other.plain()?;
        Ok(Presentation(sset::join(&self.0, &other.0)))
    }

    fn quotient(&self, cells: Vec<String>) -> PyResult<Self> {
        let a = self.ids(&cells)?;
        sset::quotient(&self.0, &a).map(|(q, _)| Presentation(q)).map_err(err)
    }

    fn is_isomorphic(&self, other: &Presentation) -> bool {
        sset::isomorphism(&self.0, &other.0).is_some()
    }

    /// Intersection cohomology in degrees `lo..=hi`, computed on the complex
    /// truncated at `truncation` (default `hi + 1`).
    #[pyo3(signature = (perversity, ring="Z", lo=0, hi=2, truncation=None))]
    fn cohomology(
        &self,
        perversity: &Perversity,
        ring: &str,
        lo: usize,
        hi: usize,
        truncation: Option<usize>,
    ) -> PyResult<Vec<CohomologyGroup>> {
        let r = self::ring(ring)?;
        let c = GlobalComplex::new(&self.0, truncation.unwrap_or(hi + 1)).map_err(err)?;
        (lo..=hi)
            .map(|k| c.cohomology(&perversity.inner, r, k, None).map(CohomologyGroup).map_err(err))
            .collect()
    }

    /// Cohomology relative to the closed subcomplex spanned by `subcomplex`.
    #[pyo3(signature = (subcomplex, perversity, ring="Z", lo=0, hi=2, truncation=None))]
    fn relative_cohomology(
        &self,
        subcomplex: Vec<String>,
        perversity: &Perversity,
        ring: &str,
        lo: usize,
        hi: usize,
        truncation: Option<usize>,
    ) -> PyResult<Vec<CohomologyGroup>> {
        let r = self::ring(ring)?;
        let a = self.ids(&subcomplex)?;
        let c = RelativeComplex::new(&self.0, &a, truncation.unwrap_or(hi + 1)).map_err(err)?;
        (lo..=hi)
            .map(|k| c.cohomology(&perversity.inner, r, k).map(CohomologyGroup).map_err(err))
            .collect()
    }

    /// Cohomology of the underlying filtered face set, degrees `0..kmax`.
    #[pyo3(signature = (perversity, ring="Z", kmax=3))]
    fn face_set_cohomology(&self, perversity: &Perversity, ring: &str, kmax: usize) -> PyResult<Vec<CohomologyGroup>> {
        let r = self::ring(ring)?;
        let lmax = self
            .0
            .regular_cells()
            .iter()
            .map(|&c| self.0.blocks(c).len() - 1)
            .max()
            .unwrap_or(0);
        let t = ffs::forget_to_ffs(&self.0, kmax + lmax);
        let c = ffs::delta_cochain_complex(&t, kmax).map_err(err)?;
        Ok(c.cohomology_all(&perversity.inner, r, None)
            .map_err(err)?
            .into_iter()
            .map(CohomologyGroup)
            .collect())
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __repr__(&self) -> String {
        format!("Presentation(cells_by_dim={:?})", self.0.count_by_dim())
    }
}

/// The `d`-skeleton of the perverse Eilenberg-MacLane space `K(F_q, n, P, p)`.
#[pyfunction]
fn eml_skeleton(poset: &Poset, q: u64, n: usize, perversity: &Perversity, d: usize) -> PyResult<Presentation> {
    eml::perverse_eml_skeleton(&poset.0, q, n, &perversity.inner, d)
        .map(|k| Presentation(k.pres))
        .map_err(err)
}

/// Natural operations `H^n_source -> H^m_target` over `F_q`, read at
/// truncation `d`. Returns `(group, stable)`.
#[pyfunction]
#[pyo3(signature = (poset, q, n, source, m, target, d=None))]
fn operation_group(
    poset: &Poset,
    q: u64,
    n: usize,
    source: &Perversity,
    m: usize,
    target: &Perversity,
    d: Option<usize>,
) -> PyResult<(CohomologyGroup, bool)> {
    let r = eml::operation_group(&poset.0, q, n, &source.inner, m, &target.inner, d.unwrap_or(m + 2)).map_err(err)?;
    Ok((CohomologyGroup(r.group), r.stable))
}

#[pymodule]
fn pytwcoh(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Poset>()?;
    m.add_class::<Perversity>()?;
    m.add_class::<CohomologyGroup>()?;
    m.add_class::<Presentation>()?;
    m.add_function(wrap_pyfunction!(eml_skeleton, m)?)?;
    m.add_function(wrap_pyfunction!(operation_group, m)?)?;
    m.add("TwcohError", m.py().get_type::<TwcohError>())?;
    m.add("TruncationError", m.py().get_type::<TruncationError>())?;
    Ok(())
}
