//! Python bindings. Construction entry points take the same parameters as
//! the CLI and return a `Build` holding the code and its JSON manifest.

use agcodes_core::bounds::{self, Real};
use agcodes_core::center::Strategy;
use agcodes_core::code::{Code, MinDistance};
use agcodes_core::curve::{Curve, CurveKind, Divisor};
use agcodes_core::field::{field_of_order, self_test, Field};
use agcodes_core::harness::{self, BuildManifest, BuildOutput, BuildSpec};
use agcodes_core::rational::RationalFunction;
use agcodes_core::section::SectionSpace;
use agcodes_core::Error;
use num_bigint::BigInt;
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyOSError, PyValueError};
use pyo3::prelude::*;

create_exception!(
    agcodes,
    VerificationError,
    PyException,
    "A proven guarantee failed to hold."
);

fn err(e: Error) -> PyErr {
    match e {
        Error::Verification(m) => VerificationError::new_err(m),
        Error::Io(e) => PyOSError::new_err(e.to_string()),
        e => PyValueError::new_err(e.to_string()),
    }
}

trait OrPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> OrPy<T> for agcodes_core::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(err)
    }
}

fn curve_kind(name: &str) -> PyResult<CurveKind> {
    name.parse()
        .map_err(|_| PyValueError::new_err(format!("unknown curve '{name}'")))
}

fn strategy(name: &str, seed: u64, trials: u64) -> PyResult<Strategy> {
    match name {
        "exhaustive" => Ok(Strategy::Exhaustive),
        "random" => Ok(Strategy::Random { seed, trials }),
        "greedy" => Ok(Strategy::Greedy { seed }),
        _ => Err(PyValueError::new_err(format!("unknown strategy '{name}'"))),
    }
}

fn real(x: f64) -> Real {
    // the shortest decimal that round-trips, so 0.3 means 3/10
    Real::parse(&format!("{x:e}"))
}

#[pyclass(name = "Field", frozen)]
struct PyField(Field);

#[pymethods]
impl PyField {
    #[new]
    fn new(q: u64) -> PyResult<Self> {
        Ok(PyField(field_of_order(q).py()?))
    }

    #[getter]
    fn order(&self) -> u32 {
        self.0.order()
    }

    #[getter]
    fn characteristic(&self) -> u32 {
        self.0.characteristic()
    }

    #[getter]
    fn degree(&self) -> u32 {
        self.0.degree()
    }

    /// Modulus coefficients, constant term first.
    #[getter]
    fn modulus(&self) -> Vec<u32> {
        self.0.modulus().to_vec()
    }

    fn check(&self, a: u32) -> PyResult<u32> {
        self.0.element(a).py().map(|e| e.value())
    }

    fn add(&self, a: u32, b: u32) -> PyResult<u32> {
        Ok(self.0.add(self.check(a)?, self.check(b)?))
    }

    fn sub(&self, a: u32, b: u32) -> PyResult<u32> {
        Ok(self.0.sub(self.check(a)?, self.check(b)?))
    }

    fn mul(&self, a: u32, b: u32) -> PyResult<u32> {
        Ok(self.0.mul(self.check(a)?, self.check(b)?))
    }

    fn div(&self, a: u32, b: u32) -> PyResult<u32> {
        self.0.div(self.check(a)?, self.check(b)?).py()
    }

    fn pow(&self, a: u32, e: u64) -> PyResult<u32> {
        Ok(self.0.pow(self.check(a)?, e))
    }

    #[pyo3(signature = (triples = 1000, seed = 0))]
    fn self_test(&self, triples: usize, seed: u64) -> bool {
        self_test(&self.0, triples, seed).passed()
    }

    fn __repr__(&self) -> String {
        format!("Field(q={}, modulus={:?})", self.0.order(), self.0.modulus())
    }
}

#[pyclass(name = "Code", frozen)]
struct PyCode(Code);

#[pymethods]
impl PyCode {
    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        Ok(PyCode(Code::from_text(text).py()?))
    }

    fn to_text(&self) -> String {
        self.0.to_text()
    }

    #[getter]
    fn construction(&self) -> String {
        self.0.meta().construction.clone()
    }

    #[getter]
    fn q(&self) -> u32 {
        self.0.field().order()
    }

    #[getter]
    fn alphabet_size(&self) -> u32 {
        self.0.meta().alphabet.size(self.0.field().order())
    }

    #[getter]
    fn length(&self) -> usize {
        self.0.length()
    }

    #[getter]
    fn words(&self) -> Vec<Vec<u32>> {
        self.0.words().to_vec()
    }

    #[getter]
    fn claimed_distance(&self) -> Option<i64> {
        self.0.meta().claimed_distance
    }

    fn rate(&self) -> f64 {
        self.0.rate()
    }

    /// Dimension when the words form a subspace over the field, else `None`.
    fn linear_dimension(&self) -> Option<usize> {
        self.0.linear_dimension()
    }

    /// Exact minimum distance; `None` for codes with fewer than two words.
    fn min_distance(&self) -> PyResult<Option<usize>> {
        Ok(match self.0.exact_min_distance().py()? {
            MinDistance::Undefined => None,
            MinDistance::Exact(d) => Some(d),
        })
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __contains__(&self, word: Vec<u32>) -> bool {
        self.0.contains(&word)
    }

    fn __repr__(&self) -> String {
        format!(
            "Code(construction={:?}, q={}, n={}, words={})",
            self.0.meta().construction,
            self.0.field().order(),
            self.0.length(),
            self.0.len()
        )
    }
}

#[pyclass(name = "Build", frozen)]
struct PyBuild {
    code: Code,
    text: String,
    manifest: BuildManifest,
}

impl From<BuildOutput> for PyBuild {
    fn from(out: BuildOutput) -> Self {
        PyBuild {
            code: out.code,
            text: out.text,
            manifest: out.manifest,
        }
    }
}

#[pymethods]
impl PyBuild {
    #[getter]
    fn code(&self) -> PyCode {
        PyCode(self.code.clone())
    }

    /// The code file contents.
    #[getter]
    fn text(&self) -> &str {
        &self.text
    }

    #[getter]
    fn manifest_json(&self) -> PyResult<String> {
        self.manifest.to_json().py()
    }

    #[getter]
    fn sha256(&self) -> &str {
        &self.manifest.code_sha256
    }

    #[getter]
    fn measured_distance(&self) -> Option<String> {
        self.manifest.measured_distance.clone()
    }
}

fn run(spec: BuildSpec, measure: bool) -> PyResult<PyBuild> {
    harness::run_build(&spec, measure).py().map(PyBuild::from)
}

/// Build from a JSON spec, e.g. `{"construction": "goppa", "q": 5, "divisor": "inf:2"}`.
#[pyfunction]
#[pyo3(signature = (spec_json, measure = true))]
fn build(spec_json: &str, measure: bool) -> PyResult<PyBuild> {
    let spec: BuildSpec = serde_json_from_str(spec_json)?;
    run(spec, measure)
}

fn serde_json_from_str(s: &str) -> PyResult<BuildSpec> {
    BuildManifest::from_json(s)
        .map(|m| m.spec)
        .or_else(|_| harness::parse_spec(s))
        .py()
}

#[pyfunction]
#[pyo3(signature = (q, divisor, curve = "p1", points = None, measure = true))]
fn goppa(q: u64, divisor: String, curve: &str, points: Option<Vec<String>>, measure: bool) -> PyResult<PyBuild> {
    run(
        BuildSpec::Goppa {
            q,
            curve: curve_kind(curve)?,
            divisor,
            points,
        },
        measure,
    )
}

#[pyfunction]
#[pyo3(signature = (q, divisor, m, radii, curve = "p1", strategy = "exhaustive", seed = 0, trials = 1000, measure = true))]
#[allow(clippy::too_many_arguments)]
fn xing(
    q: u64,
    divisor: String,
    m: usize,
    radii: Vec<usize>,
    curve: &str,
    strategy: &str,
    seed: u64,
    trials: u64,
    measure: bool,
) -> PyResult<PyBuild> {
    run(
        BuildSpec::Xing {
            q,
            curve: curve_kind(curve)?,
            divisor,
            m,
            radii,
            points: None,
            strategy: self::strategy(strategy, seed, trials)?,
            centers: None,
        },
        measure,
    )
}

#[pyfunction]
#[pyo3(signature = (q, h, divisor = "0".to_owned(), measure = true))]
fn section_code(q: u64, h: usize, divisor: String, measure: bool) -> PyResult<PyBuild> {
    run(
        BuildSpec::Section {
            q,
            divisor,
            h,
            points: None,
        },
        measure,
    )
}

#[pyfunction]
#[pyo3(signature = (q, h, s0, d0, divisor = "0".to_owned(), strategy = "exhaustive", seed = 0, trials = 1000, measure = true))]
#[allow(clippy::too_many_arguments)]
fn combined(
    q: u64,
    h: usize,
    s0: usize,
    d0: usize,
    divisor: String,
    strategy: &str,
    seed: u64,
    trials: u64,
    measure: bool,
) -> PyResult<PyBuild> {
    run(
        BuildSpec::Combined {
            q,
            divisor,
            h,
            s0,
            d0,
            points: None,
            strategy: self::strategy(strategy, seed, trials)?,
            center: None,
        },
        measure,
    )
}

/// Rebuilds the code of a manifest; raises `VerificationError` on a digest mismatch.
#[pyfunction]
fn replay(manifest_json: &str) -> PyResult<String> {
    harness::replay(&BuildManifest::from_json(manifest_json).py()?).py()
}

/// `(direct, predicted)` survivor totals over all center tuples.
#[pyfunction]
fn verify_averaging(spec_json: &str) -> PyResult<(num_bigint::BigUint, num_bigint::BigUint)> {
    let r = harness::verify_averaging(&serde_json_from_str(spec_json)?).py()?;
    Ok((r.direct, r.predicted))
}

/// `(genus, number of rational points)`.
#[pyfunction]
#[pyo3(signature = (q, curve = "p1"))]
fn curve_info(q: u64, curve: &str) -> PyResult<(u64, usize)> {
    let c = Curve::build(curve_kind(curve)?, &field_of_order(q).py()?).py()?;
    Ok((c.genus(), c.points().len()))
}

#[pyfunction]
#[pyo3(signature = (q, divisor, curve = "p1"))]
fn riemann_roch_dimension(q: u64, divisor: &str, curve: &str) -> PyResult<usize> {
    let field = field_of_order(q).py()?;
    let c = Curve::build(curve_kind(curve)?, &field).py()?;
    let d = Divisor::parse(&field, divisor).py()?;
    Ok(c.riemann_roch_basis(&d).py()?.len())
}

fn space(q: u64, divisor: &str) -> PyResult<SectionSpace> {
    let field = field_of_order(q).py()?;
    SectionSpace::new(&field, &Divisor::parse(&field, divisor).py()?).py()
}

/// `#M_D(h)`
#[pyfunction]
#[pyo3(signature = (q, h, divisor = "0"))]
fn section_count(q: u64, h: usize, divisor: &str) -> PyResult<usize> {
    Ok(space(q, divisor)?.enumerate(h).py()?.len())
}

/// Height of the section `f` (text `num/den`, coefficients low degree first).
#[pyfunction]
#[pyo3(signature = (q, f, divisor = "0"))]
fn height(q: u64, f: &str, divisor: &str) -> PyResult<usize> {
    let s = space(q, divisor)?;
    let f = RationalFunction::parse(s.field(), f).py()?;
    Ok(s.height(&f))
}

#[pyfunction]
#[pyo3(signature = (q, f, g, divisor = "0"))]
fn total_multiplicity(q: u64, f: &str, g: &str, divisor: &str) -> PyResult<u64> {
    let s = space(q, divisor)?;
    let f = RationalFunction::parse(s.field(), f).py()?;
    let g = RationalFunction::parse(s.field(), g).py()?;
    s.total_multiplicity(&f, &g).py()
}

#[pyfunction]
fn entropy(q: u64, delta: f64) -> PyResult<f64> {
    Ok(bounds::entropy(q, &real(delta)).py()?.to_f64())
}

#[pyfunction]
fn gv_feasible(q: u64, delta: f64) -> PyResult<f64> {
    Ok(bounds::gv_feasible(q, &real(delta)).py()?.to_f64())
}

#[pyfunction]
fn goppa_line(q: u64) -> PyResult<f64> {
    Ok(bounds::goppa_line(q).py()?.to_f64())
}

#[pyfunction]
fn xing_gain(q: u64, m: u32) -> PyResult<f64> {
    Ok(bounds::xing_gain(q, m).py()?.to_f64())
}

#[pyfunction]
fn xing_gain_limit(q: u64) -> PyResult<f64> {
    Ok(bounds::xing_gain_limit(q).py()?.to_f64())
}

#[pyfunction]
fn new_gain(q: u64) -> PyResult<f64> {
    Ok(bounds::new_gain(q).py()?.to_f64())
}

/// `(numerator, denominator)` of the optimal radius fraction for layer `i`.
#[pyfunction]
fn optimal_sigma(q: u64, i: u32) -> (BigInt, BigInt) {
    let r = bounds::optimal_sigma(q, i);
    (r.numer().clone(), r.denom().clone())
}

#[pyfunction]
fn optimal_sigma0(q: u64) -> (BigInt, BigInt) {
    let r = bounds::optimal_sigma0(q);
    (r.numer().clone(), r.denom().clone())
}

#[pyfunction]
fn gv_crossing(q: u64) -> PyResult<bool> {
    Ok(bounds::gv_crossing(q).py()?.crosses)
}

#[pyfunction]
#[pyo3(signature = (q, grid = 99, m = 1))]
fn frontier_csv(q: u64, grid: usize, m: u32) -> PyResult<String> {
    Ok(bounds::frontier_table(q, grid, m).py()?.to_csv())
}

#[pymodule]
fn agcodes(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("VerificationError", m.py().get_type::<VerificationError>())?;
    m.add_class::<PyField>()?;
    m.add_class::<PyCode>()?;
    m.add_class::<PyBuild>()?;
    m.add_function(wrap_pyfunction!(build, m)?)?;
    m.add_function(wrap_pyfunction!(goppa, m)?)?;
    m.add_function(wrap_pyfunction!(xing, m)?)?;
    m.add_function(wrap_pyfunction!(section_code, m)?)?;
    m.add_function(wrap_pyfunction!(combined, m)?)?;
    m.add_function(wrap_pyfunction!(replay, m)?)?;
    m.add_function(wrap_pyfunction!(verify_averaging, m)?)?;
    m.add_function(wrap_pyfunction!(curve_info, m)?)?;
    m.add_function(wrap_pyfunction!(riemann_roch_dimension, m)?)?;
    m.add_function(wrap_pyfunction!(section_count, m)?)?;
    m.add_function(wrap_pyfunction!(height, m)?)?;
    m.add_function(wrap_pyfunction!(total_multiplicity, m)?)?;
    m.add_function(wrap_pyfunction!(entropy, m)?)?;
    m.add_function(wrap_pyfunction!(gv_feasible, m)?)?;
    m.add_function(wrap_pyfunction!(goppa_line, m)?)?;
    m.add_function(wrap_pyfunction!(xing_gain, m)?)?;
    m.add_function(wrap_pyfunction!(xing_gain_limit, m)?)?;
    m.add_function(wrap_pyfunction!(new_gain, m)?)?;
    m.add_function(wrap_pyfunction!(optimal_sigma, m)?)?;
    m.add_function(wrap_pyfunction!(optimal_sigma0, m)?)?;
    m.add_function(wrap_pyfunction!(gv_crossing, m)?)?;
    m.add_function(wrap_pyfunction!(frontier_csv, m)?)?;
    Ok(())
}
