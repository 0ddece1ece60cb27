//! Exact arithmetic kernel: rationals, sparse multivariate polynomials over
//! named symbols, and rational functions.

mod monomial;
mod poly;
pub mod rational;
mod ratfunc;
mod symbol;
mod text;

pub use monomial::Monomial;
pub use poly::Polynomial;
pub use rational::Rational;
pub use ratfunc::{ratfunc_equal, RationalFunction};
pub use symbol::{is_valid_name, Symbol, SymbolTable};
pub use text::parse_ratfunc;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("degenerate substitution: {0}")]
    DegenerateSubstitution(String),
    #[error("invalid symbol name `{0}`")]
    InvalidSymbolName(String),
    #[error("symbol `{0}` already exists")]
    DuplicateSymbol(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
}

/// `lhs op rhs` for polynomials.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
}

pub fn poly_arith(lhs: &Polynomial, rhs: &Polynomial, op: PolyOp) -> Polynomial {
    match op {
        PolyOp::Add => lhs + rhs,
        PolyOp::Sub => lhs - rhs,
        PolyOp::Mul => lhs * rhs,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RatOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn ratfunc_arith(
    lhs: &RationalFunction,
    rhs: &RationalFunction,
    op: RatOp,
) -> Result<RationalFunction, ExactError> {
    Ok(match op {
        RatOp::Add => lhs + rhs,
        RatOp::Sub => lhs - rhs,
        RatOp::Mul => lhs * rhs,
        RatOp::Div => lhs.div(rhs)?,
    })
}

pub fn poly_substitute(
    p: &Polynomial,
    bindings: &std::collections::BTreeMap<Symbol, RationalFunction>,
) -> Result<RationalFunction, ExactError> {
    p.substitute(bindings)
}
