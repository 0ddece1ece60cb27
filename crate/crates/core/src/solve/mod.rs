//! Elimination solver for matched systems, specialization of seeds, and
//! checking of externally supplied solutions.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{ExactError, Polynomial, Rational, RationalFunction, Symbol, SymbolTable};
use crate::expand::{AlgEquation, AlgSystem};
use crate::series::Exponents;

mod report;

pub use report::{solve_report, AssignmentRow, BranchReport, EquationRow, SolveReport, SCHEMA_VERSION};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("more than {0} solution branches")]
    BranchLimit(usize),
    #[error("inconsistent equation {eq_index} at monomial {monomial}")]
    Inconsistent { eq_index: usize, monomial: Exponents },
    #[error("assumption {0} != 0 is violated")]
    AssumptionViolated(String),
    #[error("candidate is missing unknowns: {}", .0.join(", "))]
    MissingUnknowns(Vec<String>),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RootSelection {
    Both,
    Principal,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolvePolicy {
    pub allow_quadratic: bool,
    pub max_branches: usize,
    pub root_selection: RootSelection,
    /// Divide by any nonzero polynomial in seeds and parameters. When off,
    /// only divisors free of seeds are used.
    pub generic_seeds: bool,
}

impl Default for SolvePolicy {
    fn default() -> Self {
        SolvePolicy {
            allow_quadratic: true,
            max_branches: 4,
            root_selection: RootSelection::Both,
            generic_seeds: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveResult {
    /// Sorted by symbol.
    pub assignments: Vec<(Symbol, RationalFunction)>,
    /// Divisors assumed nonzero.
    pub assumptions: Vec<RationalFunction>,
    pub unresolved: Vec<AlgEquation>,
    pub branches: Vec<SolveResult>,
}

impl SolveResult {
    pub fn get(&self, s: Symbol) -> Option<&RationalFunction> {
        self.assignments.iter().find(|(k, _)| *k == s).map(|(_, v)| v)
    }

    pub fn is_resolved(&self) -> bool {
        self.unresolved.is_empty()
    }

    pub fn assignment_map(&self) -> BTreeMap<Symbol, RationalFunction> {
        self.assignments.iter().cloned().collect()
    }
}

#[derive(Clone)]
struct State {
    assign: BTreeMap<Symbol, RationalFunction>,
    assumptions: Vec<RationalFunction>,
    active: Vec<AlgEquation>,
    unresolved: Vec<AlgEquation>,
}

fn push_assumption(list: &mut Vec<RationalFunction>, p: &Polynomial) {
    if p.is_constant() {
        return;
    }
    let mut add = |q: Polynomial| {
        let r = RationalFunction::from_poly(q.normalized());
        if !list.iter().any(|a| a.equals(&r)) {
            list.push(r);
        }
    };
    match p.as_term() {
        Some((m, _)) => {
            for (s, _) in m.factors() {
                add(Polynomial::var(*s));
            }
        }
        None => {
            let m = p.monomial_content();
            for (s, _) in m.factors() {
                add(Polynomial::var(*s));
            }
            add(p.div_monomial(&m).expect("content divides"));
        }
    }
}

/// Removes factors known to be nonzero from an equation polynomial.
fn reduce_by_assumptions(p: Polynomial, assumptions: &[RationalFunction]) -> Polynomial {
    let mut p = p.primitive_part();
    if p.is_zero() {
        return p;
    }
    for a in assumptions {
        let a = a.numer();
        if let Some((m, _)) = a.as_term() {
            while let Some(q) = p.div_monomial(m) {
                p = q;
            }
        } else {
            while let Some(q) = p.div_exact(a) {
                if q.is_constant() {
                    break;
                }
                p = q;
            }
        }
    }
    p.primitive_part()
}

impl State {
    fn assign(&mut self, u: Symbol, value: RationalFunction) -> Result<(), SolveError> {
        let sub: BTreeMap<Symbol, RationalFunction> = [(u, value.clone())].into();
        for v in self.assign.values_mut() {
            if v.contains(u) {
                *v = v.substitute(&sub)?;
            }
        }
        self.assign.insert(u, value);
        for e in &mut self.active {
            if e.poly.contains(u) {
                let r = e.poly.substitute(&sub)?;
                e.poly = reduce_by_assumptions(r.numer().clone(), &self.assumptions);
            }
        }
        Ok(())
    }

    /// Drops satisfied equations and moves unknown-free ones to `unresolved`.
    fn sweep(&mut self, unknowns: &BTreeSet<Symbol>) -> Result<(), SolveError> {
        let mut keep = Vec::new();
        for e in self.active.drain(..) {
            if e.poly.is_zero() {
                continue;
            }
            if e.poly.is_constant() {
                return Err(SolveError::Inconsistent {
                    eq_index: e.eq_index,
                    monomial: e.monomial,
                });
            }
            if e.poly.symbols().iter().any(|s| unknowns.contains(s)) {
                keep.push(e);
            } else {
                self.unresolved.push(e);
            }
        }
        self.active = keep;
        Ok(())
    }
}

enum Step {
    Linear {
        u: Symbol,
        kappa: Polynomial,
        rest: Polynomial,
    },
    Quadratic {
        u: Symbol,
        a: Polynomial,
        roots: Vec<RationalFunction>,
    },
}

fn divisor_ok(k: &Polynomial, seeds: &BTreeSet<Symbol>, policy: &SolvePolicy) -> bool {
    !k.is_zero() && (policy.generic_seeds || !k.symbols().iter().any(|s| seeds.contains(s)))
}

fn pick_step(
    st: &State,
    open: &BTreeSet<Symbol>,
    seeds: &BTreeSet<Symbol>,
    policy: &SolvePolicy,
) -> Option<Step> {
    let unknowns_of = |p: &Polynomial| -> Vec<Symbol> {
        p.symbols().into_iter().filter(|s| open.contains(s)).collect()
    };
    // an equation in a single unknown, linear in it
    for e in &st.active {
        let us = unknowns_of(&e.poly);
        if us.len() == 1 && e.poly.degree_in(us[0]) == 1 {
            let cs = e.poly.coefficients_in(us[0]);
            if divisor_ok(&cs[1], seeds, policy) {
                return Some(Step::Linear {
                    u: us[0],
                    kappa: cs[1].clone(),
                    rest: cs[0].clone(),
                });
            }
        }
    }
    // a linear unknown whose coefficient is free of unknowns
    let mut best: Option<((u8, usize, Symbol), Step)> = None;
    for (i, e) in st.active.iter().enumerate() {
        for u in unknowns_of(&e.poly) {
            if e.poly.degree_in(u) != 1 {
                continue;
            }
            let cs = e.poly.coefficients_in(u);
            let k = &cs[1];
            if k.symbols().iter().any(|s| open.contains(s)) || !divisor_ok(k, seeds, policy) {
                continue;
            }
            let rank = if k.is_constant() {
                0
            } else if k.as_term().is_some() {
                1
            } else {
                2
            };
            let key = (rank, i, u);
            if best.as_ref().map_or(true, |(b, _)| key < *b) {
                best = Some((
                    key,
                    Step::Linear {
                        u,
                        kappa: k.clone(),
                        rest: cs[0].clone(),
                    },
                ));
            }
        }
    }
    if let Some((_, s)) = best {
        return Some(s);
    }
    if !policy.allow_quadratic {
        return None;
    }
    for e in &st.active {
        let us = unknowns_of(&e.poly);
        if us.len() != 1 || e.poly.degree_in(us[0]) != 2 {
            continue;
        }
        let cs = e.poly.coefficients_in(us[0]);
        let (a, b, c) = (&cs[2], &cs[1], &cs[0]);
        if !divisor_ok(a, seeds, policy) {
            continue;
        }
        let four = Rational::from_integer(4.into());
        let disc = &(b * b) - &(a * c).scale(&four);
        let Some(s) = disc.sqrt_exact() else {
            continue;
        };
        let two_a = RationalFunction::from_poly(a.scale(&Rational::from_integer(2.into())));
        let root = |num: Polynomial| {
            RationalFunction::from_poly(num)
                .div(&two_a)
                .expect("leading coefficient is nonzero")
        };
        let mut roots = vec![root(&s - b)];
        if !s.is_zero() {
            roots.push(root(&(-&s) - b));
        }
        return Some(Step::Quadratic {
            u: us[0],
            a: a.clone(),
            roots,
        });
    }
    None
}

fn run(
    mut st: State,
    sys: &AlgSystem,
    policy: &SolvePolicy,
    branch_count: &mut usize,
) -> Result<SolveResult, SolveError> {
    let seeds: BTreeSet<Symbol> = sys.seeds.iter().copied().collect();
    let mut branches = Vec::new();
    loop {
        let open: BTreeSet<Symbol> = sys
            .unknowns
            .iter()
            .copied()
            .filter(|u| !st.assign.contains_key(u))
            .collect();
        st.sweep(&open)?;
        match pick_step(&st, &open, &seeds, policy) {
            Some(Step::Linear { u, kappa, rest }) => {
                push_assumption(&mut st.assumptions, &kappa);
                let value = RationalFunction::from_poly(-rest).div(&RationalFunction::from_poly(kappa))?;
                st.assign(u, value)?;
            }
            Some(Step::Quadratic { u, a, mut roots }) => {
                push_assumption(&mut st.assumptions, &a);
                if roots.len() == 2 && policy.root_selection == RootSelection::Both {
                    *branch_count += 1;
                    if *branch_count > policy.max_branches {
                        return Err(SolveError::BranchLimit(policy.max_branches));
                    }
                    let mut other = st.clone();
                    other.assign(u, roots.pop().unwrap())?;
                    let mut r = run(other, sys, policy, branch_count)?;
                    let nested = std::mem::take(&mut r.branches);
                    branches.push(r);
                    branches.extend(nested);
                }
                st.assign(u, roots.swap_remove(0))?;
            }
            None => break,
        }
    }
    let mut unresolved = st.unresolved;
    unresolved.extend(st.active);
    Ok(SolveResult {
        assignments: st.assign.into_iter().collect(),
        assumptions: st.assumptions,
        unresolved,
        branches,
    })
}

/// Iterative elimination: repeatedly solves an equation for an unknown that
/// appears linearly (or quadratically with a perfect-square discriminant),
/// substituting each result everywhere.
pub fn solve_system(sys: &AlgSystem, policy: &SolvePolicy) -> Result<SolveResult, SolveError> {
    if policy.max_branches == 0 {
        return Err(SolveError::BranchLimit(0));
    }
    let st = State {
        assign: BTreeMap::new(),
        assumptions: Vec::new(),
        active: sys.equations.clone(),
        unresolved: Vec::new(),
    };
    let mut count = 0;
    run(st, sys, policy, &mut count)
}

fn degenerate(e: ExactError, table: &SymbolTable) -> SolveError {
    let _ = table;
    match e {
        ExactError::DegenerateSubstitution(t) => SolveError::AssumptionViolated(t),
        e => SolveError::Exact(e),
    }
}

/// Re-evaluates a result under `bindings`, failing if an assumption vanishes.
pub fn specialize(
    r: &SolveResult,
    bindings: &BTreeMap<Symbol, RationalFunction>,
    table: &SymbolTable,
) -> Result<SolveResult, SolveError> {
    let mut assumptions: Vec<RationalFunction> = Vec::new();
    for a in &r.assumptions {
        let v = a.substitute(bindings).map_err(|e| degenerate(e, table))?;
        if v.is_zero() {
            return Err(SolveError::AssumptionViolated(a.to_text(table)));
        }
        let mut p = v.numer().clone();
        if let Some(d) = v.denom().as_term() {
            p = p.mul_monomial(d.0);
        }
        push_assumption(&mut assumptions, &p);
    }
    let mut assignments = Vec::new();
    for (s, v) in &r.assignments {
        let nv = v.substitute(bindings).map_err(|e| degenerate(e, table))?;
        assignments.push((*s, nv));
    }
    let mut unresolved = Vec::new();
    for e in &r.unresolved {
        let v = e.poly.substitute(bindings).map_err(|e| degenerate(e, table))?;
        if !v.is_zero() {
            unresolved.push(AlgEquation {
                eq_index: e.eq_index,
                monomial: e.monomial.clone(),
                poly: reduce_by_assumptions(v.numer().clone(), &assumptions),
            });
        }
    }
    let mut branches = Vec::new();
    for b in &r.branches {
        match specialize(b, bindings, table) {
            Ok(b) => branches.push(b),
            Err(SolveError::AssumptionViolated(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(SolveResult {
        assignments,
        assumptions,
        unresolved,
        branches,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct EquationCheck {
    pub eq_index: usize,
    pub monomial: Exponents,
    pub residual: RationalFunction,
}

impl EquationCheck {
    pub fn is_zero(&self) -> bool {
        self.residual.is_zero()
    }
}

/// Substitutes `candidate` into every equation of `sys`.
pub fn verify_assignment(
    sys: &AlgSystem,
    candidate: &BTreeMap<Symbol, RationalFunction>,
) -> Result<Vec<EquationCheck>, SolveError> {
    let missing: Vec<String> = sys
        .unknowns
        .iter()
        .filter(|u| !candidate.contains_key(u))
        .map(|u| sys.name(*u).to_string())
        .collect();
    if !missing.is_empty() {
        return Err(SolveError::MissingUnknowns(missing));
    }
    sys.equations
        .iter()
        .map(|e| {
            Ok(EquationCheck {
                eq_index: e.eq_index,
                monomial: e.monomial.clone(),
                residual: e
                    .poly
                    .substitute(candidate)
                    .map_err(|x| degenerate(x, &sys.table))?,
            })
        })
        .collect()
}
