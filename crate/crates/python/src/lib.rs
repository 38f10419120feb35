//! Python bindings for `paramark`.
//!
//! Rationals cross the boundary as `fractions.Fraction`. Valuations are
//! dictionaries from parameter names to anything whose `str` is a rational
//! literal (`Fraction`, `int` or strings such as `"2/5"`).

use std::collections::BTreeMap;
use std::path::PathBuf;

use paramark::etr::{self, EncodingRequest, Style};
use paramark::io::{parse_dimacs, parse_model, print_model};
use paramark::model::{instantiate, ModelKind, ParametricModel};
use paramark::oracle::{self, GridKind, GridSpec};
use paramark::polyalg::{format_rational, parse_polynomial, parse_rational, Rational, Valuation};
use paramark::qualitative::{decide_qualitative, QualKind, QualProblem};
use paramark::quantitative::{
    deciding_value, mc_reach_exact, mdp_reach_extremum_exact, solution_function,
};
use paramark::reductions::{self, Sat3Variant};
use paramark::types::{Domain, Mode, Quantifier, Relop};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyTuple};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn runtime_error(e: impl std::fmt::Display) -> PyErr {
    PyRuntimeError::new_err(e.to_string())
}

fn to_fraction<'py>(py: Python<'py>, r: &Rational) -> PyResult<Bound<'py, PyAny>> {
    let fraction = py.import("fractions")?.getattr("Fraction")?;
    fraction.call1((format_rational(r),))
}

fn from_python(obj: &Bound<'_, PyAny>) -> PyResult<Rational> {
    let text = obj.str()?.to_string();
    parse_rational(&text)
        .map_err(|_| PyValueError::new_err(format!("'{text}' is not an exact rational")))
}

fn valuation_from(dict: &Bound<'_, PyDict>) -> PyResult<Valuation> {
    let mut val = Valuation::new();
    for (k, v) in dict.iter() {
        val.insert(k.extract::<String>()?, from_python(&v)?);
    }
    Ok(val)
}

fn valuation_to<'py>(py: Python<'py>, val: &Valuation) -> PyResult<Bound<'py, PyDict>> {
    let dict = PyDict::new(py);
    for (k, v) in val {
        dict.set_item(k, to_fraction(py, v)?)?;
    }
    Ok(dict)
}

fn relop(s: &str) -> PyResult<Relop> {
    s.parse()
        .map_err(|_| PyValueError::new_err(format!("unknown relop '{s}'")))
}

fn quantifier(s: &str) -> PyResult<Quantifier> {
    match s {
        "exists" => Ok(Quantifier::Exists),
        "forall" => Ok(Quantifier::Forall),
        _ => Err(PyValueError::new_err(format!("unknown quantifier '{s}'"))),
    }
}

fn domain(s: &str) -> PyResult<Domain> {
    match s {
        "wd" => Ok(Domain::Wd),
        "gp" => Ok(Domain::Gp),
        "bool" | "boolean" => Ok(Domain::Boolean),
        _ => Err(PyValueError::new_err(format!("unknown domain '{s}'"))),
    }
}

fn style(s: &str) -> PyResult<Style> {
    match s {
        "equations" => Ok(Style::Equations),
        "solution-function" => Ok(Style::SolutionFunction),
        _ => Err(PyValueError::new_err(format!("unknown style '{s}'"))),
    }
}

fn qual_kind(s: &str) -> PyResult<QualKind> {
    match s {
        "positive" => Ok(QualKind::Positive),
        "unsure" => Ok(QualKind::Unsure),
        "safety" => Ok(QualKind::Safety),
        "almost-sure" => Ok(QualKind::AlmostSure),
        _ => Err(PyValueError::new_err(format!(
            "unknown qualitative kind '{s}'"
        ))),
    }
}

fn sat3_variant(s: &str) -> PyResult<Sat3Variant> {
    match s {
        "positive" => Ok(Sat3Variant::Positive),
        "almostsure" | "almost-sure" => Ok(Sat3Variant::AlmostSure),
        "unsure" => Ok(Sat3Variant::Unsure),
        _ => Err(PyValueError::new_err(format!(
            "unknown gadget variant '{s}'"
        ))),
    }
}

/// A parametric Markov chain or Markov decision process.
#[pyclass(name = "Model", module = "paramark_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyModel {
    inner: ParametricModel,
}

#[pymethods]
impl PyModel {
    /// Parses a model from its text format.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(PyModel {
            inner: parse_model(text).map_err(value_error)?,
        })
    }

    /// Reads a model file.
    #[staticmethod]
    fn load(path: PathBuf) -> PyResult<Self> {
        let text = std::fs::read_to_string(&path)
            .map_err(|e| value_error(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// `"pmc"` or `"pmdp"`.
    #[getter]
    fn kind(&self) -> &'static str {
        match self.inner.kind {
            ModelKind::Pmc => "pmc",
            ModelKind::Pmdp => "pmdp",
        }
    }

    #[getter]
    fn params(&self) -> Vec<String> {
        self.inner.params.clone()
    }

    #[getter]
    fn states(&self) -> Vec<String> {
        self.inner.states.clone()
    }

    #[getter]
    fn init(&self) -> String {
        self.inner.states[self.inner.init].clone()
    }

    #[getter]
    fn targets(&self) -> Vec<String> {
        self.inner
            .targets
            .iter()
            .map(|&t| self.inner.states[t].clone())
            .collect()
    }

    /// The model in its text format.
    fn to_text(&self) -> String {
        print_model(&self.inner)
    }

    /// A copy of the model with different target states.
    fn with_targets(&self, targets: Vec<String>) -> PyResult<Self> {
        let set = self.inner.resolve_states(&targets).map_err(value_error)?;
        Ok(PyModel {
            inner: self.inner.with_targets(set),
        })
    }

    /// The reachability probability of a chain as a rational function,
    /// printed in polynomial syntax (`num` or `(num) / (den)`).
    fn solution_function(&self) -> PyResult<String> {
        let f = solution_function(&self.inner).map_err(value_error)?;
        Ok(if f.is_polynomial() {
            f.num().to_string()
        } else {
            format!("({}) / ({})", f.num(), f.den())
        })
    }

    /// The exact reachability probability at a valuation. Chains return a
    /// `Fraction`; decision models return the pair `(min, max)`.
    fn reach<'py>(
        &self,
        py: Python<'py>,
        valuation: &Bound<'py, PyDict>,
    ) -> PyResult<Bound<'py, PyAny>> {
        let concrete =
            instantiate(&self.inner, &valuation_from(valuation)?).map_err(value_error)?;
        if concrete.is_chain() {
            return to_fraction(py, &mc_reach_exact(&concrete).map_err(runtime_error)?);
        }
        let min = mdp_reach_extremum_exact(&concrete, Mode::Min).map_err(runtime_error)?;
        let max = mdp_reach_extremum_exact(&concrete, Mode::Max).map_err(runtime_error)?;
        let pair = (
            to_fraction(py, min.init_value(&concrete))?,
            to_fraction(py, max.init_value(&concrete))?,
        );
        Ok(PyTuple::new(py, [pair.0, pair.1])?.into_any())
    }

    /// Whether the valuation yields a well-defined Markov model.
    fn is_well_defined(&self, valuation: &Bound<'_, PyDict>) -> PyResult<bool> {
        Ok(oracle::is_well_defined(
            &self.inner,
            &valuation_from(valuation)?,
        ))
    }

    fn __repr__(&self) -> String {
        format!(
            "Model(kind={}, states={}, params={:?})",
            self.kind(),
            self.inner.num_states(),
            self.inner.params
        )
    }
}

/// The SMT-LIB script asking for a valuation with `Pr ⋈ 1/2`.
#[pyfunction]
#[pyo3(signature = (model, relop = "ge", domain = "wd", quantifier = "exists", style = "equations"))]
fn encode(
    model: &PyModel,
    relop: &str,
    domain: &str,
    quantifier: &str,
    style: &str,
) -> PyResult<String> {
    let req = EncodingRequest {
        quantifier: self::quantifier(quantifier)?,
        relop: self::relop(relop)?,
        domain: self::domain(domain)?,
        style: self::style(style)?,
    };
    let formula = etr::encode(&model.inner, &req).map_err(value_error)?;
    Ok(etr::to_smt_script_with(&formula, &model.inner.params))
}

/// Whether `valuation` meets `quantifier σ. Pr^σ relop threshold` exactly.
#[pyfunction]
#[pyo3(signature = (model, valuation, relop = "ge", threshold = None, quantifier = "exists"))]
fn check_witness(
    model: &PyModel,
    valuation: &Bound<'_, PyDict>,
    relop: &str,
    threshold: Option<&Bound<'_, PyAny>>,
    quantifier: &str,
) -> PyResult<bool> {
    let thr = match threshold {
        Some(t) => from_python(t)?,
        None => paramark::polyalg::rat(1, 2),
    };
    etr::check_witness(
        &model.inner,
        self::quantifier(quantifier)?,
        self::relop(relop)?,
        &thr,
        &valuation_from(valuation)?,
    )
    .map_err(value_error)
}

/// The deciding value of a query at a valuation: the probability for a
/// chain, the relevant extremum for a decision model.
#[pyfunction]
#[pyo3(signature = (model, valuation, relop = "ge", quantifier = "exists"))]
fn deciding<'py>(
    py: Python<'py>,
    model: &PyModel,
    valuation: &Bound<'py, PyDict>,
    relop: &str,
    quantifier: &str,
) -> PyResult<Bound<'py, PyAny>> {
    let (value, _) = deciding_value(
        &model.inner,
        &valuation_from(valuation)?,
        self::quantifier(quantifier)?,
        self::relop(relop)?,
    )
    .map_err(value_error)?;
    to_fraction(py, &value)
}

/// Decides a qualitative problem. Returns `(answer, witness)` where the
/// witness is a valuation dictionary or `None`.
#[pyfunction]
#[pyo3(signature = (model, kind, quantifier = "exists", domain = "wd"))]
fn qualitative<'py>(
    py: Python<'py>,
    model: &PyModel,
    kind: &str,
    quantifier: &str,
    domain: &str,
) -> PyResult<(bool, Option<Bound<'py, PyDict>>)> {
    let problem = QualProblem {
        kind: qual_kind(kind)?,
        quantifier: self::quantifier(quantifier)?,
        domain: self::domain(domain)?,
    };
    let answer = decide_qualitative(&model.inner, &problem).map_err(value_error)?;
    let witness = answer
        .witness
        .as_ref()
        .map(|w| valuation_to(py, w))
        .transpose()?;
    Ok((answer.answer, witness))
}

/// Grid valuations at which the query holds, as `(valuation, value)` pairs.
#[pyfunction]
#[pyo3(signature = (model, relop = "ge", threshold = None, resolution = 10, quantifier = "exists", interior = false))]
fn sweep<'py>(
    py: Python<'py>,
    model: &PyModel,
    relop: &str,
    threshold: Option<&Bound<'py, PyAny>>,
    resolution: u32,
    quantifier: &str,
    interior: bool,
) -> PyResult<Vec<(Bound<'py, PyDict>, Bound<'py, PyAny>)>> {
    let thr = match threshold {
        Some(t) => from_python(t)?,
        None => paramark::polyalg::rat(1, 2),
    };
    let kind = if interior {
        GridKind::GpInterior
    } else {
        GridKind::WdClosed
    };
    let report = oracle::sweep(
        &model.inner,
        self::quantifier(quantifier)?,
        self::relop(relop)?,
        &thr,
        &GridSpec::new(resolution, kind),
    );
    report
        .witnesses
        .iter()
        .map(|w| Ok((valuation_to(py, &w.val)?, to_fraction(py, &w.value)?)))
        .collect()
}

/// Number of grid points at which the encoding disagrees with exact
/// evaluation, and the number of points checked.
#[pyfunction]
#[pyo3(signature = (model, relop = "ge", domain = "wd", quantifier = "exists", resolution = 5))]
fn cross_check(
    model: &PyModel,
    relop: &str,
    domain: &str,
    quantifier: &str,
    resolution: u32,
) -> PyResult<(usize, usize)> {
    let domain = self::domain(domain)?;
    let req = EncodingRequest {
        quantifier: self::quantifier(quantifier)?,
        relop: self::relop(relop)?,
        domain,
        style: Style::Equations,
    };
    let kind = match domain {
        Domain::Gp => GridKind::GpInterior,
        Domain::Wd => GridKind::WdClosed,
        Domain::Boolean => GridKind::Boolean,
    };
    let report = oracle::cross_check(&model.inner, &req, &GridSpec::new(resolution, kind))
        .map_err(value_error)?;
    Ok((report.counterexamples.len(), report.checked))
}

/// The model with threshold `lambda` moved to 1/2.
#[pyfunction]
fn normalize_threshold(model: &PyModel, threshold: &Bound<'_, PyAny>) -> PyResult<PyModel> {
    let lambda = from_python(threshold)?;
    Ok(PyModel {
        inner: reductions::normalize_threshold(&model.inner, &lambda).map_err(value_error)?,
    })
}

/// The model preceded by a gadget that zeroes every non-graph-preserving
/// valuation.
#[pyfunction]
fn gp_gadget(model: &PyModel) -> PyResult<PyModel> {
    Ok(PyModel {
        inner: reductions::gp_gadget(&model.inner).map_err(value_error)?,
    })
}

/// A chain with solution function `(f + A) / B`. Returns `(model, A, B)`.
#[pyfunction]
#[pyo3(signature = (poly, params = Vec::new()))]
fn poly_to_pmc<'py>(
    py: Python<'py>,
    poly: &str,
    params: Vec<String>,
) -> PyResult<(PyModel, Bound<'py, PyAny>, Bound<'py, PyAny>)> {
    let f = parse_polynomial(poly).map_err(value_error)?;
    let r = reductions::poly_to_pmc(&f, &params);
    Ok((
        PyModel { inner: r.pmc },
        to_fraction(py, &r.a_shift)?,
        to_fraction(py, &r.b_scale)?,
    ))
}

/// The chain of a DIMACS 3-CNF for the given variant
/// (`positive`, `almostsure` or `unsure`).
#[pyfunction]
fn sat3_to_pmc(dimacs: &str, variant: &str) -> PyResult<PyModel> {
    let cnf = parse_dimacs(dimacs).map_err(value_error)?;
    Ok(PyModel {
        inner: reductions::sat3_to_pmc(&cnf, sat3_variant(variant)?),
    })
}

/// Coin parameter to `(state, first choice, end of choices)`.
type CoinMap = BTreeMap<String, (String, usize, usize)>;

/// The chain replacing every choice of a decision model by parametric
/// coins. Returns the chain and a map from coin parameter to
/// `(state, first choice, end of choices)`.
#[pyfunction]
fn pmdp_exists_to_pmc(model: &PyModel) -> PyResult<(PyModel, CoinMap)> {
    let tree = reductions::pmdp_exists_to_pmc(&model.inner).map_err(value_error)?;
    let coins = tree
        .coins
        .iter()
        .map(|(&(s, lo, hi), z)| (z.clone(), (model.inner.states[s].clone(), lo, hi)))
        .collect();
    Ok((PyModel { inner: tree.pmc }, coins))
}

#[pymodule]
fn paramark_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyModel>()?;
    m.add_function(wrap_pyfunction!(encode, m)?)?;
    m.add_function(wrap_pyfunction!(check_witness, m)?)?;
    m.add_function(wrap_pyfunction!(deciding, m)?)?;
    m.add_function(wrap_pyfunction!(qualitative, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    m.add_function(wrap_pyfunction!(cross_check, m)?)?;
    m.add_function(wrap_pyfunction!(normalize_threshold, m)?)?;
    m.add_function(wrap_pyfunction!(gp_gadget, m)?)?;
    m.add_function(wrap_pyfunction!(poly_to_pmc, m)?)?;
    m.add_function(wrap_pyfunction!(sat3_to_pmc, m)?)?;
    m.add_function(wrap_pyfunction!(pmdp_exists_to_pmc, m)?)?;
    Ok(())
}
