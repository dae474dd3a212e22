//! Python bindings: certified intervals, the two sequences, and the
//! bound–reduce–search pipeline.

use num_bigint::BigInt;
use pyo3::exceptions::{PyValueError, PyZeroDivisionError};
use pyo3::prelude::*;

use fibpell::linforms::{self, StageId};
use fibpell::pipeline::{self, VerifyOptions, REPLAY_CONVERGENT_INDEX};
use fibpell::realcore::{digits_to_bits, make_constant, CReal, Constant, Expr, PrecisionPolicy, RealError};
use fibpell::reduction::{self, ConvergentTable};
use fibpell::sequences::{BinaryRecurrence, RecurrencePair};
use fibpell::Equation;

fn real_err(e: RealError) -> PyErr {
    match e {
        RealError::DivisionByZero => PyZeroDivisionError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn parse_equation(s: &str) -> PyResult<Equation> {
    s.parse::<Equation>().map_err(PyValueError::new_err)
}

/// A certified real: an interval guaranteed to contain the true value.
#[pyclass(name = "Interval", from_py_object)]
#[derive(Clone)]
struct PyInterval {
    inner: CReal,
}

#[pymethods]
impl PyInterval {
    /// Named constant at the given precision (decimal digits).
    #[staticmethod]
    #[pyo3(signature = (name, digits=64))]
    fn constant(name: &str, digits: u32) -> PyResult<Self> {
        let c: Constant = name.parse().map_err(real_err)?;
        Ok(PyInterval { inner: make_constant(c, digits).map_err(real_err)? })
    }

    #[staticmethod]
    #[pyo3(signature = (value, digits=64))]
    fn from_int(value: BigInt, digits: u32) -> Self {
        PyInterval { inner: CReal::from_bigint(&value, digits_to_bits(digits)) }
    }

    #[staticmethod]
    #[pyo3(signature = (num, den, digits=64))]
    fn from_ratio(num: BigInt, den: BigInt, digits: u32) -> PyResult<Self> {
        Ok(PyInterval {
            inner: CReal::from_ratio(&num, &den, digits_to_bits(digits)).map_err(real_err)?,
        })
    }

    /// Decimal rendering of the midpoint.
    #[pyo3(signature = (digits=10))]
    fn approx(&self, digits: u32) -> String {
        self.inner.approx_decimal(digits)
    }

    /// Upper bound for the radius, as a decimal string.
    fn radius(&self) -> String {
        self.inner.radius_decimal()
    }

    fn add(&self, other: &PyInterval) -> Self {
        PyInterval { inner: self.inner.add(&other.inner) }
    }

    fn sub(&self, other: &PyInterval) -> Self {
        PyInterval { inner: self.inner.sub(&other.inner) }
    }

    fn mul(&self, other: &PyInterval) -> Self {
        PyInterval { inner: self.inner.mul(&other.inner) }
    }

    fn div(&self, other: &PyInterval) -> PyResult<Self> {
        Ok(PyInterval { inner: self.inner.div(&other.inner).map_err(real_err)? })
    }

    fn neg(&self) -> Self {
        PyInterval { inner: self.inner.neg() }
    }

    fn abs(&self) -> Self {
        PyInterval { inner: self.inner.abs() }
    }

    fn log(&self) -> PyResult<Self> {
        Ok(PyInterval { inner: self.inner.log().map_err(real_err)? })
    }

    fn sqrt(&self) -> PyResult<Self> {
        Ok(PyInterval { inner: self.inner.sqrt().map_err(real_err)? })
    }

    fn pow(&self, e: i64) -> PyResult<Self> {
        Ok(PyInterval { inner: self.inner.pow_i64(e).map_err(real_err)? })
    }

    /// Certified distance to the nearest integer, inside [0, 1/2].
    fn nearest_int_distance(&self) -> PyResult<Self> {
        Ok(PyInterval { inner: self.inner.nearest_int_distance().map_err(real_err)? })
    }

    /// True if the other interval lies entirely inside this one.
    fn contains(&self, other: &PyInterval) -> bool {
        self.inner.contains(&other.inner)
    }

    fn intersects(&self, other: &PyInterval) -> bool {
        self.inner.intersects(&other.inner)
    }

    fn __repr__(&self) -> String {
        format!("Interval({} ± {})", self.inner.approx_decimal(10), self.inner.radius_decimal())
    }
}

/// A binary recurrence with exact big-integer terms.
#[pyclass(name = "Recurrence")]
struct PyRecurrence {
    inner: BinaryRecurrence,
}

#[pymethods]
impl PyRecurrence {
    #[staticmethod]
    fn fibonacci() -> Self {
        PyRecurrence { inner: BinaryRecurrence::fibonacci() }
    }

    #[staticmethod]
    fn pell() -> Self {
        PyRecurrence { inner: BinaryRecurrence::pell() }
    }

    /// Custom recurrence u_{n+2} = a·u_{n+1} + b·u_n; validation errors
    /// raise ValueError.
    #[staticmethod]
    fn custom(name: &str, a: i64, b: i64, u0: i64, u1: i64) -> PyResult<Self> {
        BinaryRecurrence::new(name, a.into(), b.into(), u0.into(), u1.into())
            .map(|inner| PyRecurrence { inner })
            .map_err(|e| PyValueError::new_err(e.to_string()))
    }

    fn term(&self, n: usize) -> BigInt {
        self.inner.term(n)
    }

    fn terms(&self, n_max: usize) -> Vec<BigInt> {
        self.inner.terms_upto(n_max)
    }

    fn name(&self) -> String {
        self.inner.name().to_string()
    }

    fn discriminant(&self) -> BigInt {
        self.inner.discriminant().clone()
    }

    fn __repr__(&self) -> String {
        format!(
            "Recurrence({}: a={}, b={})",
            self.inner.name(),
            self.inner.coeff_a(),
            self.inner.coeff_b()
        )
    }
}

/// Exact solutions (k, m, n, value) of `U_k = V_m·V_n` with the built-in
/// pair of the chosen equation.
#[pyfunction]
fn search(equation: &str, k_max: usize, n_max: usize) -> PyResult<Vec<(usize, usize, usize, BigInt)>> {
    let eq = parse_equation(equation)?;
    let pair = RecurrencePair::for_equation(eq);
    Ok(pipeline::search(&pair, eq, k_max, n_max)
        .into_iter()
        .map(|t| (t.k, t.m, t.n, t.value))
        .collect())
}

/// Runs the full certified pipeline and returns the certificate as a JSON
/// string.
#[pyfunction]
#[pyo3(signature = (equation, precision=256, k_max=400, n_max=100))]
fn verify(equation: &str, precision: u32, k_max: usize, n_max: usize) -> PyResult<String> {
    let eq = parse_equation(equation)?;
    let options =
        VerifyOptions { digits: precision, k_max, n_max, ..VerifyOptions::default() };
    pipeline::verify_theorem(eq, &options)
        .map(|c| c.to_json())
        .map_err(|e| PyValueError::new_err(e.to_string()))
}

/// Certified stage-1 absolute bound: every solution with m ≤ n has n
/// below the returned integer.
#[pyfunction]
#[pyo3(signature = (equation, precision=64))]
fn absolute_bound(equation: &str, precision: u32) -> PyResult<BigInt> {
    let eq = parse_equation(equation)?;
    linforms::absolute_bound(eq, precision).map_err(|e| PyValueError::new_err(e.to_string()))
}

/// Convergents (p, q) of τ = log α / log γ until q exceeds `min_q`.
#[pyfunction]
fn tau_convergents(min_q: BigInt) -> PyResult<Vec<(BigInt, BigInt)>> {
    let policy = PrecisionPolicy::default();
    let table = ConvergentTable::expand(reduction::campaign_tau(), &min_q, &policy)
        .map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok(table.convergents().to_vec())
}

/// One reduction campaign; returns (convergent_index, q, epsilon_approx,
/// exponent_bound, effective_bound).
#[pyfunction]
#[pyo3(signature = (equation, stage, mirrored=false, m=None, precision=256))]
fn reduce_stage(
    equation: &str,
    stage: &str,
    mirrored: bool,
    m: Option<usize>,
    precision: u32,
) -> PyResult<(usize, BigInt, String, BigInt, BigInt)> {
    let eq = parse_equation(equation)?;
    let stage_id = match stage {
        "lambda1" => StageId::Lambda1,
        "lambda2" => StageId::Lambda2,
        "lambda3" => StageId::Lambda3,
        "lambda4" => StageId::Lambda4,
        other => return Err(PyValueError::new_err(format!("unknown stage `{other}`"))),
    };
    let pair = RecurrencePair::for_equation(eq);
    let policy = PrecisionPolicy { start_digits: precision, ..PrecisionPolicy::default() };
    let err = |e: String| PyValueError::new_err(e);
    let m_bound = linforms::stage1_m_bound(eq, precision).map_err(|e| err(e.to_string()))?;
    let needs_member = matches!(stage_id, StageId::Lambda2 | StageId::Lambda4);
    let built = if needs_member {
        linforms::build_stage(stage_id, &pair, Some(&m_bound), precision)
    } else {
        linforms::build_stage(stage_id, &pair, None, precision)
    }
    .map_err(|e| err(e.to_string()))?;
    let mut inst = reduction::gamma_to_lemma_form(&built, &pair, mirrored, m, precision)
        .map_err(|e| err(e.to_string()))?;
    inst.pinned_index = Some(REPLAY_CONVERGENT_INDEX);
    let mut table = ConvergentTable::expand(
        reduction::campaign_tau(),
        &pipeline::replay_min_q(),
        &policy,
    )
    .map_err(|e| err(e.to_string()))?;
    let out = reduction::dp_reduce(&inst, &mut table, &policy).map_err(|e| err(e.to_string()))?;
    Ok((
        out.convergent_index,
        out.q,
        out.epsilon.approx_decimal(10),
        out.exponent_bound,
        out.effective_bound,
    ))
}

/// Value of a named constant expression at the given precision, as
/// (approx, radius) decimal strings.
#[pyfunction]
#[pyo3(signature = (name, digits=64))]
fn constant_digits(name: &str, digits: u32) -> PyResult<(String, String)> {
    let c: Constant = name.parse().map_err(real_err)?;
    let v = make_constant(c, digits).map_err(real_err)?;
    Ok((v.approx_decimal(digits.min(40)), v.radius_decimal()))
}

/// Evaluates `log(x)` for an exact positive integer at high precision.
#[pyfunction]
#[pyo3(signature = (x, digits=64))]
fn log_int(x: BigInt, digits: u32) -> PyResult<PyInterval> {
    let v = Expr::log(Expr::bigint(x)).eval_digits(digits).map_err(real_err)?;
    Ok(PyInterval { inner: v })
}

#[pymodule]
fn pyfibpell(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyInterval>()?;
    m.add_class::<PyRecurrence>()?;
    m.add_function(wrap_pyfunction!(search, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(absolute_bound, m)?)?;
    m.add_function(wrap_pyfunction!(tau_convergents, m)?)?;
    m.add_function(wrap_pyfunction!(reduce_stage, m)?)?;
    m.add_function(wrap_pyfunction!(constant_digits, m)?)?;
    m.add_function(wrap_pyfunction!(log_int, m)?)?;
    m.add("REPLAY_CONVERGENT_INDEX", REPLAY_CONVERGENT_INDEX)?;
    Ok(())
}
