//! Truncated multivariate power series with rational-function coefficients.

mod support;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::exact::{ExactError, Rational, RationalFunction, SymbolTable};

pub use support::{Exponents, Parity, SupportPolicy};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("support policy admits infinitely many exponents")]
    UnboundedSupport,
    #[error("series are over different variables")]
    VarMismatch,
    #[error("variable `{0}` is not one of the series variables")]
    UnknownVar(String),
    #[error("exponent vector has {found} entries, expected {expected}")]
    ArityMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Name of the ansatz coefficient for `prefix` at `exps`, e.g. `a_3`, `U_0_2`.
pub fn coefficient_name(prefix: &str, exps: &Exponents) -> String {
    let mut s = prefix.to_string();
    for e in &exps.0 {
        s.push('_');
        s.push_str(&e.to_string());
    }
    s
}

#[derive(Clone, Debug)]
pub struct TruncSeries {
    vars: Vec<String>,
    support: SupportPolicy,
    coeffs: BTreeMap<Exponents, RationalFunction>,
}

impl TruncSeries {
    pub fn zero(vars: &[String]) -> Self {
        TruncSeries {
            vars: vars.to_vec(),
            support: SupportPolicy::total_degree(0),
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &[String], c: RationalFunction) -> Self {
        let mut s = Self::zero(vars);
        if !c.is_zero() {
            s.coeffs.insert(Exponents::zero(vars.len()), c);
        }
        s
    }

    /// Builds a series from explicit terms; zero coefficients are dropped.
    pub fn from_terms(
        vars: &[String],
        support: SupportPolicy,
        terms: impl IntoIterator<Item = (Exponents, RationalFunction)>,
    ) -> Result<Self, SeriesError> {
        let mut coeffs = BTreeMap::new();
        for (e, c) in terms {
            if e.len() != vars.len() {
                return Err(SeriesError::ArityMismatch {
                    expected: vars.len(),
                    found: e.len(),
                });
            }
            if !c.is_zero() && support.admits(&e) {
                coeffs.insert(e, c);
            }
        }
        Ok(TruncSeries {
            vars: vars.to_vec(),
            support,
            coeffs,
        })
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn support(&self) -> &SupportPolicy {
        &self.support
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &RationalFunction)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Highest total degree among stored terms.
    pub fn degree(&self) -> u32 {
        self.coeffs.keys().map(Exponents::degree).max().unwrap_or(0)
    }

    pub fn var_index(&self, var: &str) -> Result<usize, SeriesError> {
        self.vars
            .iter()
            .position(|v| v == var)
            .ok_or_else(|| SeriesError::UnknownVar(var.to_string()))
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| -c)
    }

    pub fn scale(&self, k: &RationalFunction) -> Self {
        if k.is_zero() {
            return TruncSeries {
                coeffs: BTreeMap::new(),
                ..self.clone()
            };
        }
        self.map_coeffs(|c| c * k)
    }

    fn map_coeffs(&self, f: impl Fn(&RationalFunction) -> RationalFunction) -> Self {
        TruncSeries {
            vars: self.vars.clone(),
            support: self.support.clone(),
            coeffs: self
                .coeffs
                .iter()
                .map(|(e, c)| (e.clone(), f(c)))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        }
    }

    /// Replaces every coefficient by `f(coefficient)`.
    pub fn try_map(
        &self,
        f: impl Fn(&RationalFunction) -> Result<RationalFunction, ExactError>,
    ) -> Result<Self, SeriesError> {
        let mut coeffs = BTreeMap::new();
        for (e, c) in &self.coeffs {
            let v = f(c)?;
            if !v.is_zero() {
                coeffs.insert(e.clone(), v);
            }
        }
        Ok(TruncSeries {
            vars: self.vars.clone(),
            support: self.support.clone(),
            coeffs,
        })
    }

    /// `sum of coeff*x^i*y^j` in graded-lex order.
    pub fn to_text(&self, table: &SymbolTable) -> String {
        if self.coeffs.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.coeffs.iter().enumerate() {
            let mono = monomial_text(&self.vars, e);
            let mut ct = c.to_text(table);
            let simple = c.is_polynomial() && c.numer().len() == 1;
            let negative = ct.starts_with('-');
            if negative && simple {
                ct.remove(0);
            }
            if i > 0 {
                out.push_str(if negative && simple { " - " } else { " + " });
            } else if negative && simple {
                out.push('-');
            }
            match (mono.is_empty(), simple, ct.as_str()) {
                (true, _, _) => out.push_str(&ct),
                (false, true, "1") => out.push_str(&mono),
                (false, true, _) => {
                    out.push_str(&ct);
                    out.push('*');
                    out.push_str(&mono);
                }
                (false, false, _) => {
                    if c.is_polynomial() {
                        out.push('(');
                        out.push_str(&ct);
                        out.push(')');
                    } else {
                        out.push_str(&ct);
                    }
                    out.push('*');
                    out.push_str(&mono);
                }
            }
        }
        out
    }
}

fn monomial_text(vars: &[String], e: &Exponents) -> String {
    let mut parts = Vec::new();
    for (v, &k) in vars.iter().zip(&e.0) {
        match k {
            0 => {}
            1 => parts.push(v.clone()),
            k => parts.push(format!("{v}^{k}")),
        }
    }
    parts.join("*")
}

/// Generic series over `support` with one fresh coefficient symbol per
/// admitted exponent vector, named by [`coefficient_name`].
pub fn ansatz(
    table: &mut SymbolTable,
    prefix: &str,
    vars: &[String],
    support: SupportPolicy,
) -> Result<TruncSeries, SeriesError> {
    let exps = support.enumerate(vars.len())?;
    let mut coeffs = BTreeMap::new();
    for e in exps {
        let sym = table.fresh(&coefficient_name(prefix, &e))?;
        coeffs.insert(e, RationalFunction::symbol(sym));
    }
    Ok(TruncSeries {
        vars: vars.to_vec(),
        support,
        coeffs,
    })
}

pub fn series_add(a: &TruncSeries, b: &TruncSeries) -> Result<TruncSeries, SeriesError> {
    if a.vars != b.vars {
        return Err(SeriesError::VarMismatch);
    }
    let mut coeffs = a.coeffs.clone();
    for (e, c) in &b.coeffs {
        match coeffs.get_mut(e) {
            Some(v) => {
                let s = &*v + c;
                if s.is_zero() {
                    coeffs.remove(e);
                } else {
                    *v = s;
                }
            }
            None => {
                coeffs.insert(e.clone(), c.clone());
            }
        }
    }
    Ok(TruncSeries {
        vars: a.vars.clone(),
        support: a.support.union(&b.support),
        coeffs,
    })
}

pub fn series_sub(a: &TruncSeries, b: &TruncSeries) -> Result<TruncSeries, SeriesError> {
    series_add(a, &b.neg())
}

/// Cauchy product keeping only terms of total degree `<= out_bound`.
pub fn series_mul(
    a: &TruncSeries,
    b: &TruncSeries,
    out_bound: u32,
) -> Result<TruncSeries, SeriesError> {
    if a.vars != b.vars {
        return Err(SeriesError::VarMismatch);
    }
    let mut acc: BTreeMap<Exponents, RationalFunction> = BTreeMap::new();
    for (ea, ca) in &a.coeffs {
        let da = ea.degree();
        if da > out_bound {
            continue;
        }
        for (eb, cb) in &b.coeffs {
            if da + eb.degree() > out_bound {
                continue;
            }
            let e = ea.add(eb);
            let p = ca * cb;
            match acc.get_mut(&e) {
                Some(v) => *v = &*v + &p,
                None => {
                    acc.insert(e, p);
                }
            }
        }
    }
    acc.retain(|_, c| !c.is_zero());
    Ok(TruncSeries {
        vars: a.vars.clone(),
        support: product_support(&a.support, &b.support, out_bound),
        coeffs: acc,
    })
}

fn product_support(a: &SupportPolicy, b: &SupportPolicy, bound: u32) -> SupportPolicy {
    if let (
        SupportPolicy::Parity { parities: pa, .. },
        SupportPolicy::Parity { parities: pb, .. },
    ) = (a, b)
    {
        let parities = pa
            .iter()
            .zip(pb)
            .map(|(x, y)| match (x, y) {
                (Parity::Any, _) | (_, Parity::Any) => Parity::Any,
                (x, y) if x == y => Parity::Even,
                _ => Parity::Odd,
            })
            .collect();
        return SupportPolicy::Parity {
            parities,
            degree: Some(bound),
        };
    }
    SupportPolicy::total_degree(bound)
}

/// `order`-th partial derivative in `var`.
pub fn series_diff(s: &TruncSeries, var: &str, order: u32) -> Result<TruncSeries, SeriesError> {
    let i = s.var_index(var)?;
    let mut coeffs = BTreeMap::new();
    for (e, c) in &s.coeffs {
        let k = e.0[i];
        if k < order {
            continue;
        }
        let falling: u64 = ((k - order + 1)..=k).map(u64::from).product();
        let mut ne = e.0.clone();
        ne[i] -= order;
        coeffs.insert(
            Exponents(ne),
            c.scale(&Rational::from_integer(falling.into())),
        );
    }
    Ok(TruncSeries {
        vars: s.vars.clone(),
        support: s.support.differentiate(i, order),
        coeffs,
    })
}

/// Stored coefficient at `exps`, or zero.
pub fn coefficient(s: &TruncSeries, exps: &Exponents) -> RationalFunction {
    s.coeffs
        .get(exps)
        .cloned()
        .unwrap_or_else(RationalFunction::zero)
}

/// `s^e` truncated to `out_bound`.
pub fn series_pow(s: &TruncSeries, e: u32, out_bound: u32) -> Result<TruncSeries, SeriesError> {
    let mut acc = TruncSeries::constant(&s.vars, RationalFunction::one());
    for _ in 0..e {
        acc = series_mul(&acc, s, out_bound)?;
    }
    Ok(acc)
}
