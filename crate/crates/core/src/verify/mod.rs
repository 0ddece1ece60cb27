//! Checks of solved series: symbolic residuals, numeric evaluation, closed
//! form oracles, and the Burgers quasi-separation time factor.

mod candidate;
mod oracle;

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::exact::{rational, ExactError, Rational, RationalFunction, Symbol};
use crate::expand::{evaluate_equations, AlgSystem, ExpandError};
use crate::series::{coefficient, Exponents, SeriesError, TruncSeries};
use crate::solve::SolveResult;

pub use candidate::{parse_candidate, CandidateError};
pub use oracle::{oracle_value, OracleSpec, TimeFactor};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("assumption {0} != 0 is violated")]
    AssumptionViolated(String),
    #[error("symbol `{0}` has no value")]
    Unbound(String),
    #[error("outside the oracle domain: {0}")]
    OutOfDomain(String),
    #[error("point has {found} coordinates, expected {expected}")]
    PointArity { expected: usize, found: usize },
    #[error("no unknown function `{0}`")]
    UnknownFunction(String),
    #[error(transparent)]
    Expand(#[from] ExpandError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

impl From<SeriesError> for VerifyError {
    fn from(e: SeriesError) -> Self {
        VerifyError::Expand(e.into())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResidualEntry {
    pub equation: usize,
    pub monomial: Vec<u32>,
    pub zero: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResidualReport {
    pub entries: Vec<ResidualEntry>,
    pub max_degree: u32,
}

impl ResidualReport {
    pub fn all_zero(&self) -> bool {
        self.entries.iter().all(|e| e.zero)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = &ResidualEntry> {
        self.entries.iter().filter(|e| !e.zero)
    }
}

/// Ansatz series with `values` substituted for their coefficients.
pub fn solved_series(
    sys: &AlgSystem,
    values: &BTreeMap<Symbol, RationalFunction>,
) -> Result<Vec<TruncSeries>, VerifyError> {
    sys.ansatz
        .iter()
        .map(|s| s.try_map(|c| c.substitute(values)).map_err(VerifyError::from))
        .collect()
}

/// Rebuilds every equation's series from the assigned coefficients and
/// reports its coefficient at each matched monomial.
pub fn residual(sys: &AlgSystem, r: &SolveResult) -> Result<ResidualReport, VerifyError> {
    residual_of(sys, &r.assignment_map())
}

pub fn residual_of(
    sys: &AlgSystem,
    values: &BTreeMap<Symbol, RationalFunction>,
) -> Result<ResidualReport, VerifyError> {
    let series = solved_series(sys, values)?;
    let evaluated = evaluate_equations(&sys.problem, &series, &sys.params, sys.out_bound)?;
    let mut entries = Vec::new();
    for (i, s) in evaluated.iter().enumerate() {
        for m in &sys.match_set {
            let c = coefficient(s, m);
            entries.push(ResidualEntry {
                equation: i,
                monomial: m.0.clone(),
                zero: c.is_zero(),
                residual: (!c.is_zero()).then(|| c.to_text(&sys.table)),
            });
        }
    }
    Ok(ResidualReport {
        entries,
        max_degree: sys.match_set.iter().map(Exponents::degree).max().unwrap_or(0),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    Exact,
    Float,
}

#[derive(Clone, Debug)]
pub struct EvalGrid {
    pub bindings: BTreeMap<Symbol, Rational>,
    pub points: Vec<Vec<Rational>>,
    pub precision: Precision,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Exact(Rational),
    Float(f64),
}

impl Value {
    pub fn to_f64(&self) -> f64 {
        match self {
            Value::Exact(q) => rational::to_f64(q),
            Value::Float(x) => *x,
        }
    }

    pub fn to_text(&self) -> String {
        match self {
            Value::Exact(q) => q.to_string(),
            Value::Float(x) => format!("{x:e}"),
        }
    }
}

/// Every assumption of `r` must be nonzero at `bindings`.
pub fn check_assumptions(
    sys: &AlgSystem,
    r: &SolveResult,
    bindings: &BTreeMap<Symbol, Rational>,
) -> Result<(), VerifyError> {
    let lookup = |s: Symbol| bindings.get(&s).cloned();
    for a in &r.assumptions {
        if let Some(v) = a.eval(&lookup)? {
            if num_traits::Zero::is_zero(&v) {
                return Err(VerifyError::AssumptionViolated(a.to_text(&sys.table)));
            }
        }
    }
    Ok(())
}

/// Numeric coefficients of the solved series of unknown `func`.
pub fn numeric_coefficients(
    sys: &AlgSystem,
    r: &SolveResult,
    func: &str,
    bindings: &BTreeMap<Symbol, Rational>,
) -> Result<Vec<(Exponents, Rational)>, VerifyError> {
    check_assumptions(sys, r, bindings)?;
    let idx = sys
        .problem
        .unknowns
        .iter()
        .position(|u| u.name == func)
        .ok_or_else(|| VerifyError::UnknownFunction(func.to_string()))?;
    let values = r.assignment_map();
    let lookup = |s: Symbol| bindings.get(&s).cloned();
    let mut out = Vec::new();
    for (e, c) in sys.ansatz[idx].terms() {
        let c = c.substitute(&values)?;
        let v = match c.eval(&lookup) {
            Ok(Some(v)) => v,
            Ok(None) => {
                let missing = c
                    .symbols()
                    .into_iter()
                    .find(|s| !bindings.contains_key(s))
                    .expect("some symbol is unbound");
                return Err(VerifyError::Unbound(sys.name(missing).to_string()));
            }
            Err(ExactError::DivisionByZero) => {
                return Err(VerifyError::AssumptionViolated(c.denom().to_text(&sys.table)))
            }
            Err(e) => return Err(e.into()),
        };
        if !num_traits::Zero::is_zero(&v) {
            out.push((e.clone(), v));
        }
    }
    Ok(out)
}

/// Evaluates a numeric series at a point. Univariate series use Horner's
/// rule; multivariate ones sum terms in graded order.
pub fn eval_numeric(coeffs: &[(Exponents, Rational)], point: &[Rational], precision: Precision) -> Value {
    match precision {
        Precision::Exact => Value::Exact(eval_exact(coeffs, point)),
        Precision::Float => {
            let c: Vec<(Exponents, f64)> = coeffs
                .iter()
                .map(|(e, q)| (e.clone(), rational::to_f64(q)))
                .collect();
            let p: Vec<f64> = point.iter().map(rational::to_f64).collect();
            Value::Float(eval_float(&c, &p))
        }
    }
}

fn dense(coeffs: &[(Exponents, Rational)]) -> Vec<Rational> {
    let deg = coeffs.iter().map(|(e, _)| e.0[0]).max().unwrap_or(0) as usize;
    let mut d = vec![Rational::from_integer(0.into()); deg + 1];
    for (e, c) in coeffs {
        d[e.0[0] as usize] = c.clone();
    }
    d
}

fn eval_exact(coeffs: &[(Exponents, Rational)], point: &[Rational]) -> Rational {
    if point.len() == 1 {
        let d = dense(coeffs);
        let x = &point[0];
        return d
            .iter()
            .rev()
            .fold(Rational::from_integer(0.into()), |acc, c| acc * x + c);
    }
    let mut acc = Rational::from_integer(0.into());
    for (e, c) in coeffs {
        let mut t = c.clone();
        for (x, k) in point.iter().zip(&e.0) {
            t *= num_traits::pow(x.clone(), *k as usize);
        }
        acc += t;
    }
    acc
}

fn eval_float(coeffs: &[(Exponents, f64)], point: &[f64]) -> f64 {
    if point.len() == 1 {
        let deg = coeffs.iter().map(|(e, _)| e.0[0]).max().unwrap_or(0) as usize;
        let mut d = vec![0.0; deg + 1];
        for (e, c) in coeffs {
            d[e.0[0] as usize] = *c;
        }
        return d.iter().rev().fold(0.0, |acc, c| acc * point[0] + c);
    }
    let mut acc = 0.0;
    for (e, c) in coeffs {
        let mut t = *c;
        for (x, k) in point.iter().zip(&e.0) {
            t *= x.powi(*k as i32);
        }
        acc += t;
    }
    acc
}

/// Values of the solved series of `func` at every grid point, in grid order.
pub fn eval_series(
    sys: &AlgSystem,
    r: &SolveResult,
    func: &str,
    grid: &EvalGrid,
) -> Result<Vec<Value>, VerifyError> {
    let coeffs = numeric_coefficients(sys, r, func, &grid.bindings)?;
    let n = sys.problem.series_vars().len();
    grid.points
        .iter()
        .map(|p| {
            if p.len() != n {
                return Err(VerifyError::PointArity {
                    expected: n,
                    found: p.len(),
                });
            }
            Ok(eval_numeric(&coeffs, p, grid.precision))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompareRow {
    pub point: Vec<f64>,
    pub series: f64,
    pub oracle: f64,
    pub abserr: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompareReport {
    pub rows: Vec<CompareRow>,
    pub max_abs_error: f64,
    /// Lowest total degree not carried by the series.
    pub first_omitted_order: u32,
}

/// Pointwise comparison of a solved univariate series against an oracle.
pub fn compare(
    sys: &AlgSystem,
    r: &SolveResult,
    func: &str,
    oracle: &OracleSpec,
    grid: &EvalGrid,
) -> Result<CompareReport, VerifyError> {
    let values = eval_series(sys, r, func, grid)?;
    let mut rows = Vec::new();
    let mut max = 0.0f64;
    for (p, v) in grid.points.iter().zip(values) {
        let x = rational::to_f64(&p[0]);
        let o = oracle_value(oracle, x)?;
        let s = v.to_f64();
        let err = (s - o).abs();
        max = max.max(err);
        rows.push(CompareRow {
            point: p.iter().map(rational::to_f64).collect(),
            series: s,
            oracle: o,
            abserr: err,
        });
    }
    let idx = sys
        .problem
        .unknowns
        .iter()
        .position(|u| u.name == func)
        .ok_or_else(|| VerifyError::UnknownFunction(func.to_string()))?;
    let first_omitted_order = sys.problem.unknowns[idx]
        .support
        .max_degree()
        .map_or(0, |d| d + 1);
    Ok(CompareReport {
        rows,
        max_abs_error: max,
        first_omitted_order,
    })
}

/// Frozen-x coefficients of the quasi-separated Burgers solution
/// `U(x) a(t)`: `alpha = nu U''(x) / U(x)` and `beta = U'(x)`.
pub fn quasi_separation(
    coeffs: &[(Exponents, Rational)],
    nu: f64,
    x: f64,
) -> Result<(f64, f64), VerifyError> {
    let c: Vec<(u32, f64)> = coeffs
        .iter()
        .map(|(e, q)| (e.0[0], rational::to_f64(q)))
        .collect();
    let deriv = |order: u32| -> f64 {
        c.iter()
            .filter(|(n, _)| *n >= order)
            .map(|(n, v)| {
                let f: f64 = ((n - order + 1)..=*n).map(f64::from).product();
                v * f * x.powi((n - order) as i32)
            })
            .sum()
    };
    let u = deriv(0);
    if u == 0.0 {
        return Err(VerifyError::OutOfDomain("U(x) = 0 at the frozen point".into()));
    }
    Ok((nu * deriv(2) / u, deriv(1)))
}
