//! PDE problems: expression AST, the `.pde` text format, traveling-wave
//! reduction and the built-in problem library.

mod builtins;
mod parse;
mod print;
mod reduce;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::Rational;
use crate::series::{Exponents, SupportPolicy};

pub use builtins::{builtin, builtin_names, builtin_source};
pub use parse::parse_problem;
pub use print::{print_expr, print_problem};
pub use reduce::traveling_wave_reduce;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("{line}:{col}: syntax error: {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("{line}:{col}: unknown identifier `{name}`")]
    UnknownIdentifier { name: String, line: usize, col: usize },
    #[error("{line}:{col}: unknown function `{name}`")]
    UnknownFunction { name: String, line: usize, col: usize },
    #[error("{line}:{col}: derivative of an expression without unknown functions")]
    NotAFunction { line: usize, col: usize },
    #[error("{line}: seed {seed} is not in the ansatz support")]
    SeedNotInSupport { seed: String, line: usize },
    #[error("{line}: {message}")]
    Invalid { line: usize, message: String },
    #[error("problem cannot be reduced: {0}")]
    NotReducible(String),
    #[error("unknown built-in problem `{0}`")]
    UnknownBuiltin(String),
}

/// PDE expression tree. Parameters and functions are referenced by name.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PdeExpr {
    Const(Rational),
    Param(String),
    FuncRef(String),
    Deriv {
        child: Box<PdeExpr>,
        var: String,
        order: u32,
    },
    Sum(Vec<PdeExpr>),
    Product(Vec<PdeExpr>),
    Power(Box<PdeExpr>, u32),
    Negate(Box<PdeExpr>),
}

impl PdeExpr {
    pub fn contains_func(&self) -> bool {
        match self {
            PdeExpr::FuncRef(_) => true,
            PdeExpr::Const(_) | PdeExpr::Param(_) => false,
            PdeExpr::Deriv { child, .. } | PdeExpr::Power(child, _) | PdeExpr::Negate(child) => {
                child.contains_func()
            }
            PdeExpr::Sum(cs) | PdeExpr::Product(cs) => cs.iter().any(PdeExpr::contains_func),
        }
    }

    /// Largest total derivative order applied to any function reference.
    pub fn max_deriv_order(&self) -> u32 {
        match self {
            PdeExpr::Const(_) | PdeExpr::Param(_) | PdeExpr::FuncRef(_) => 0,
            PdeExpr::Deriv { child, order, .. } => order + child.max_deriv_order(),
            PdeExpr::Power(c, _) | PdeExpr::Negate(c) => c.max_deriv_order(),
            PdeExpr::Sum(cs) | PdeExpr::Product(cs) => {
                cs.iter().map(PdeExpr::max_deriv_order).max().unwrap_or(0)
            }
        }
    }

    pub fn is_zero_const(&self) -> bool {
        matches!(self, PdeExpr::Const(c) if num_traits::Zero::is_zero(c))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Unknown {
    pub name: String,
    /// Coefficient symbols are `<prefix>_<e1>_...`.
    pub prefix: String,
    pub support: SupportPolicy,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MatchSpec {
    TotalDegree(u32),
    Explicit(BTreeSet<Exponents>),
}

/// `new_var = k*x - lambda*t`, with `lambda` replaced by `c*k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WaveReduction {
    pub new_var: String,
    pub k: String,
    pub x: String,
    pub lambda: String,
    pub t: String,
    pub c: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub name: String,
    pub vars: Vec<String>,
    pub params: Vec<String>,
    pub unknowns: Vec<Unknown>,
    /// Each equation is `expr = 0`.
    pub equations: Vec<PdeExpr>,
    /// `(function name, exponents)` of the coefficients taken as known.
    pub seeds: Vec<(String, Exponents)>,
    pub match_bound: Option<MatchSpec>,
    /// When present, ansatz, seeds and match refer to the reduced variable.
    pub reduction: Option<WaveReduction>,
}

impl ProblemSpec {
    pub fn unknown(&self, name: &str) -> Option<&Unknown> {
        self.unknowns.iter().find(|u| u.name == name)
    }

    pub fn max_deriv_order(&self) -> u32 {
        self.equations
            .iter()
            .map(PdeExpr::max_deriv_order)
            .max()
            .unwrap_or(0)
    }

    pub fn max_ansatz_degree(&self) -> Option<u32> {
        self.unknowns
            .iter()
            .map(|u| u.support.max_degree())
            .try_fold(0, |acc, d| d.map(|d| acc.max(d)))
    }

    /// Variables of the ansatz: the reduced variable when a reduction is set.
    pub fn series_vars(&self) -> Vec<String> {
        match &self.reduction {
            Some(r) => vec![r.new_var.clone()],
            None => self.vars.clone(),
        }
    }

    /// Applies the reduction, if any.
    pub fn reduced(&self) -> Result<ProblemSpec, ModelError> {
        match &self.reduction {
            Some(r) => traveling_wave_reduce(self, r),
            None => Ok(self.clone()),
        }
    }

    /// Resizes every total-degree or parity ansatz to degree `n` and resets a
    /// total-degree match set to the reliable default.
    pub fn with_order(&self, n: u32) -> ProblemSpec {
        let mut p = self.clone();
        for u in &mut p.unknowns {
            u.support = match &u.support {
                SupportPolicy::TotalDegree { .. } => SupportPolicy::total_degree(n),
                SupportPolicy::Parity { parities, .. } => {
                    SupportPolicy::parity(parities.clone(), Some(n))
                }
                other => other.clone(),
            };
        }
        if matches!(p.match_bound, Some(MatchSpec::TotalDegree(_)) | None) {
            p.match_bound = Some(MatchSpec::TotalDegree(
                n.saturating_sub(p.max_deriv_order()),
            ));
        }
        p.seeds.retain(|(f, e)| {
            p.unknowns
                .iter()
                .find(|u| &u.name == f)
                .is_some_and(|u| u.support.admits(e))
        });
        p
    }
}
