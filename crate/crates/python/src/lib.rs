//! Python bindings: groups, operators, Hilbert dimensions and suites.

use orthinv_core::fields::select_lambda;
use orthinv_core::invariants::{self, LinearAction};
use orthinv_core::matgroups::{orthogonal_group, special_subgroup};
use orthinv_core::suites::{run_suite, SuiteConfig};
use orthinv_core::{Error, MatrixGroup, OrthogonalType, Polynomial, PrimeField, ProductGroup};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::NoGeneratorFound { .. } | Error::ClosureBudgetExceeded(_) => {
            PyRuntimeError::new_err(e.to_string())
        }
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn field(p: u32) -> PyResult<PrimeField> {
    PrimeField::new(p as u64).map_err(to_py)
}

enum Action {
    Matrix(MatrixGroup),
    Product(ProductGroup),
}

impl Action {
    fn as_dyn(&self) -> &dyn LinearAction {
        match self {
            Action::Matrix(g) => g,
            Action::Product(g) => g,
        }
    }
}

fn matrix_group(name: &str, f: PrimeField, lambda: Option<i64>) -> PyResult<MatrixGroup> {
    let plus = || orthogonal_group(f, OrthogonalType::Plus, None).map_err(to_py);
    match name {
        "so2plus" => Ok(special_subgroup(&plus()?)),
        "o2plus" | "plus" => plus(),
        "o2minus" | "minus" => {
            let lambda = lambda
                .map(|l| f.elem(l))
                .unwrap_or_else(|| select_lambda(f));
            orthogonal_group(f, OrthogonalType::Minus, Some(lambda)).map_err(to_py)
        }
        other => Err(PyValueError::new_err(format!(
            "unknown group `{other}` (expected so2plus, o2plus, o2minus or product)"
        ))),
    }
}

fn action(name: &str, f: PrimeField, lambda: Option<i64>) -> PyResult<Action> {
    if name == "product" {
        let minus = matrix_group("o2minus", f, lambda)?;
        return Ok(Action::Product(ProductGroup::square(&minus)));
    }
    matrix_group(name, f, lambda).map(Action::Matrix)
}

fn parse(text: &str, f: PrimeField) -> PyResult<Polynomial> {
    Polynomial::parse(text, f).map_err(to_py)
}

/// Order of `so2plus`, `o2plus`/`plus` or `o2minus`/`minus` over `F_p`.
#[pyfunction]
#[pyo3(signature = (group, p, lambda_=None))]
fn group_order(group: &str, p: u32, lambda_: Option<i64>) -> PyResult<usize> {
    Ok(matrix_group(group, field(p)?, lambda_)?.order())
}

/// Every element as a nested list `[[a, b], [c, d]]`.
#[pyfunction]
#[pyo3(signature = (group, p, lambda_=None))]
fn group_elements(group: &str, p: u32, lambda_: Option<i64>) -> PyResult<Vec<[[u32; 2]; 2]>> {
    let g = matrix_group(group, field(p)?, lambda_)?;
    Ok(g.elements().iter().map(|m| m.rows()).collect())
}

/// Group average of `poly`, in canonical text form.
#[pyfunction]
#[pyo3(signature = (group, p, poly, lambda_=None))]
fn reynolds(group: &str, p: u32, poly: &str, lambda_: Option<i64>) -> PyResult<String> {
    let f = field(p)?;
    let g = action(group, f, lambda_)?;
    let out = invariants::reynolds(g.as_dyn(), &parse(poly, f)?).map_err(to_py)?;
    Ok(out.to_text())
}

/// Orbit sum of `poly`, in canonical text form.
#[pyfunction]
#[pyo3(signature = (group, p, poly, lambda_=None))]
fn transfer(group: &str, p: u32, poly: &str, lambda_: Option<i64>) -> PyResult<String> {
    let f = field(p)?;
    let g = action(group, f, lambda_)?;
    let out = invariants::transfer(g.as_dyn(), &parse(poly, f)?).map_err(to_py)?;
    Ok(out.to_text())
}

/// Whether every group element fixes `poly`.
#[pyfunction]
#[pyo3(signature = (group, p, poly, lambda_=None))]
fn is_invariant(group: &str, p: u32, poly: &str, lambda_: Option<i64>) -> PyResult<bool> {
    let f = field(p)?;
    let g = action(group, f, lambda_)?;
    invariants::is_invariant(g.as_dyn(), &parse(poly, f)?).map_err(to_py)
}

/// Basis of the degree-`degree` invariants, in canonical text form.
#[pyfunction]
#[pyo3(signature = (group, p, degree, lambda_=None))]
fn fixed_space(group: &str, p: u32, degree: u32, lambda_: Option<i64>) -> PyResult<Vec<String>> {
    let g = action(group, field(p)?, lambda_)?;
    let basis = invariants::fixed_space(g.as_dyn(), degree);
    Ok(basis
        .polynomials()
        .iter()
        .map(Polynomial::to_text)
        .collect())
}

/// Dimensions of the invariants in degrees `0..=max_degree`.
#[pyfunction]
#[pyo3(signature = (group, p, max_degree, lambda_=None))]
fn hilbert_dims(
    group: &str,
    p: u32,
    max_degree: u32,
    lambda_: Option<i64>,
) -> PyResult<Vec<usize>> {
    let g = action(group, field(p)?, lambda_)?;
    Ok(invariants::hilbert_dims(g.as_dyn(), max_degree))
}

/// Runs a named suite and returns its report as a dict.
#[pyfunction]
#[pyo3(signature = (suite, p, max_degree=None, seed=0, lambda_=None))]
fn verify<'py>(
    py: Python<'py>,
    suite: &str,
    p: u32,
    max_degree: Option<u32>,
    seed: u64,
    lambda_: Option<i64>,
) -> PyResult<Bound<'py, PyAny>> {
    let cfg = SuiteConfig {
        suite: suite.parse().map_err(to_py)?,
        p,
        lambda: lambda_.map(|l| l.rem_euclid(p as i64) as u32),
        max_degree,
        seed,
        prime_cap: None,
    };
    let report = py.detach(|| run_suite(&cfg)).map_err(to_py)?;
    py.import("json")?
        .call_method1("loads", (report.to_json(),))
}

#[pymodule]
fn orthinv(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_function(wrap_pyfunction!(group_order, m)?)?;
    m.add_function(wrap_pyfunction!(group_elements, m)?)?;
    m.add_function(wrap_pyfunction!(reynolds, m)?)?;
    m.add_function(wrap_pyfunction!(transfer, m)?)?;
    m.add_function(wrap_pyfunction!(is_invariant, m)?)?;
    m.add_function(wrap_pyfunction!(fixed_space, m)?)?;
    m.add_function(wrap_pyfunction!(hilbert_dims, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
