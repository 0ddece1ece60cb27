//! Compilation of a problem into its matched polynomial system.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::exact::{Polynomial, RationalFunction, Symbol, SymbolTable};
use crate::model::{MatchSpec, ModelError, PdeExpr, ProblemSpec};
use crate::series::{
    ansatz, coefficient, coefficient_name, series_add, series_diff, series_mul, series_pow,
    Exponents, SeriesError, TruncSeries,
};

/// Largest number of ansatz coefficients accepted per unknown function.
pub const MAX_ANSATZ_TERMS: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExpandError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("match bound {bound} exceeds the reliable degree {reliable}")]
    UnreliableMatch { bound: u32, reliable: u32 },
    #[error("ansatz for `{0}` has more than {MAX_ANSATZ_TERMS} terms")]
    TooLarge(String),
    #[error("matched coefficient is not polynomial")]
    NonPolynomial,
}

/// `poly = 0`, matched at `monomial` of equation `eq_index`.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgEquation {
    pub eq_index: usize,
    pub monomial: Exponents,
    pub poly: Polynomial,
}

#[derive(Clone, Debug)]
pub struct AlgSystem {
    /// The problem after any traveling-wave reduction.
    pub problem: ProblemSpec,
    pub table: SymbolTable,
    pub params: Vec<Symbol>,
    pub seeds: Vec<Symbol>,
    pub unknowns: Vec<Symbol>,
    /// Generic ansatz series, one per unknown function.
    pub ansatz: Vec<TruncSeries>,
    pub match_set: Vec<Exponents>,
    pub out_bound: u32,
    pub equations: Vec<AlgEquation>,
    /// Matched monomials whose coefficient vanished identically.
    pub trivial: Vec<(usize, Exponents)>,
}

impl AlgSystem {
    pub fn is_unknown(&self, s: Symbol) -> bool {
        self.unknowns.contains(&s)
    }

    pub fn lookup(&self, name: &str) -> Option<Symbol> {
        self.table.lookup(name)
    }

    pub fn name(&self, s: Symbol) -> &str {
        self.table.name(s)
    }

    /// Parameters and seeds.
    pub fn knowns(&self) -> Vec<Symbol> {
        self.params.iter().chain(&self.seeds).copied().collect()
    }
}

/// Symbol table, parameter symbols and ansatz series for a reduced problem.
pub struct Ansatz {
    pub table: SymbolTable,
    pub params: Vec<Symbol>,
    pub series: Vec<TruncSeries>,
}

pub fn build_ansatz(p: &ProblemSpec) -> Result<Ansatz, ExpandError> {
    let mut table = SymbolTable::new();
    let mut params = Vec::new();
    for q in &p.params {
        params.push(table.fresh(q).map_err(SeriesError::from)?);
    }
    let vars = p.series_vars();
    let mut series = Vec::new();
    for u in &p.unknowns {
        let n = u.support.enumerate(vars.len())?.len();
        if n > MAX_ANSATZ_TERMS {
            return Err(ExpandError::TooLarge(u.name.clone()));
        }
        series.push(ansatz(&mut table, &u.prefix, &vars, u.support.clone())?);
    }
    Ok(Ansatz {
        table,
        params,
        series,
    })
}

/// Output truncation of products: the largest ansatz degree.
pub fn default_bound(p: &ProblemSpec) -> u32 {
    p.max_ansatz_degree().unwrap_or(0)
}

/// The matched monomials, checked for reliability in total-degree mode.
pub fn match_set(p: &ProblemSpec) -> Result<Vec<Exponents>, ExpandError> {
    let n = p.series_vars().len();
    let reliable = default_bound(p).saturating_sub(p.max_deriv_order());
    Ok(match &p.match_bound {
        Some(MatchSpec::Explicit(set)) => set.iter().cloned().collect(),
        Some(MatchSpec::TotalDegree(d)) => {
            if *d > reliable {
                return Err(ExpandError::UnreliableMatch {
                    bound: *d,
                    reliable,
                });
            }
            Exponents::up_to_degree(n, *d)
        }
        None => Exponents::up_to_degree(n, reliable),
    })
}

struct Ctx<'a> {
    vars: &'a [String],
    funcs: BTreeMap<&'a str, &'a TruncSeries>,
    params: BTreeMap<&'a str, Symbol>,
    bound: u32,
}

fn eval(e: &PdeExpr, cx: &Ctx) -> Result<TruncSeries, SeriesError> {
    Ok(match e {
        PdeExpr::Const(c) => TruncSeries::constant(cx.vars, RationalFunction::constant(c.clone())),
        PdeExpr::Param(n) => {
            let s = cx.params.get(n.as_str()).copied();
            let s = s.ok_or_else(|| SeriesError::UnknownVar(n.clone()))?;
            TruncSeries::constant(cx.vars, RationalFunction::symbol(s))
        }
        PdeExpr::FuncRef(n) => (*cx
            .funcs
            .get(n.as_str())
            .ok_or_else(|| SeriesError::UnknownVar(n.clone()))?)
        .clone(),
        PdeExpr::Deriv { child, var, order } => series_diff(&eval(child, cx)?, var, *order)?,
        PdeExpr::Sum(cs) => {
            let mut acc = TruncSeries::zero(cx.vars);
            for c in cs {
                acc = series_add(&acc, &eval(c, cx)?)?;
            }
            acc
        }
        PdeExpr::Product(cs) => {
            let mut acc = TruncSeries::constant(cx.vars, RationalFunction::one());
            for c in cs {
                acc = series_mul(&acc, &eval(c, cx)?, cx.bound)?;
                if acc.is_zero() {
                    break;
                }
            }
            acc
        }
        PdeExpr::Power(b, n) => series_pow(&eval(b, cx)?, *n, cx.bound)?,
        PdeExpr::Negate(c) => eval(c, cx)?.neg(),
    })
}

/// Evaluates every equation of `p` with its unknowns replaced by `series`.
pub fn evaluate_equations(
    p: &ProblemSpec,
    series: &[TruncSeries],
    params: &[Symbol],
    bound: u32,
) -> Result<Vec<TruncSeries>, ExpandError> {
    let vars = p.series_vars();
    let cx = Ctx {
        vars: &vars,
        funcs: p
            .unknowns
            .iter()
            .map(|u| u.name.as_str())
            .zip(series)
            .collect(),
        params: p
            .params
            .iter()
            .map(String::as_str)
            .zip(params.iter().copied())
            .collect(),
        bound,
    };
    p.equations
        .iter()
        .map(|e| eval(e, &cx).map_err(ExpandError::from))
        .collect()
}

/// Clears constant denominators and content so the equation has coprime
/// integer coefficients.
fn to_equation(c: &RationalFunction) -> Result<Polynomial, ExpandError> {
    if c.denom().as_constant().is_none() {
        return Err(ExpandError::NonPolynomial);
    }
    Ok(c.numer().primitive_part())
}

/// Substitutes the ansatz into every equation and collects one polynomial
/// equation per matched monomial, ordered by equation then graded monomial.
pub fn expand_pde(problem: &ProblemSpec) -> Result<AlgSystem, ExpandError> {
    let p = problem.reduced()?;
    let Ansatz {
        table,
        params,
        series,
    } = build_ansatz(&p)?;
    let matched = match_set(&p)?;
    let bound = default_bound(&p);
    let evaluated = evaluate_equations(&p, &series, &params, bound)?;

    let seed_names: BTreeSet<String> = p
        .seeds
        .iter()
        .map(|(f, e)| coefficient_name(&p.unknown(f).expect("validated").prefix, e))
        .collect();
    let mut seeds = Vec::new();
    let mut unknowns = Vec::new();
    for s in &series {
        for (_, c) in s.terms() {
            let sym = *c.symbols().iter().next().expect("ansatz coefficient");
            if seed_names.contains(table.name(sym)) {
                seeds.push(sym);
            } else {
                unknowns.push(sym);
            }
        }
    }
    seeds.sort();
    unknowns.sort();

    let mut equations = Vec::new();
    let mut trivial = Vec::new();
    for (i, s) in evaluated.iter().enumerate() {
        for m in &matched {
            let c = coefficient(s, m);
            if c.is_zero() {
                trivial.push((i, m.clone()));
            } else {
                equations.push(AlgEquation {
                    eq_index: i,
                    monomial: m.clone(),
                    poly: to_equation(&c)?,
                });
            }
        }
    }
    Ok(AlgSystem {
        problem: p,
        table,
        params,
        seeds,
        unknowns,
        ansatz: series,
        match_set: matched,
        out_bound: bound,
        equations,
        trivial,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub equations: usize,
    pub unknowns: usize,
    pub seeds: usize,
    pub params: usize,
    pub trivial: usize,
    pub underdetermined: bool,
    pub overdetermined: bool,
    pub trivially_determined: bool,
}

pub fn classify(sys: &AlgSystem) -> Classification {
    let (e, u) = (sys.equations.len(), sys.unknowns.len());
    Classification {
        equations: e,
        unknowns: u,
        seeds: sys.seeds.len(),
        params: sys.params.len(),
        trivial: sys.trivial.len(),
        underdetermined: e < u,
        overdetermined: e > u,
        trivially_determined: e == 0 && u == 0,
    }
}
