use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::rational::{self, Rational};
use super::{Monomial, RationalFunction, Symbol, SymbolTable};

/// Sparse multivariate polynomial with rational coefficients.
///
/// Terms are kept in a `BTreeMap` ordered by the monomial order, so iteration
/// is ascending and the leading term is the last entry. Zero coefficients are
/// never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn var(sym: Symbol) -> Self {
        Self::term(Rational::one(), Monomial::var(sym))
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Polynomial::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    /// The value, if the polynomial has no symbols (zero included).
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    /// The single term, if there is exactly one.
    pub fn as_term(&self) -> Option<(&Monomial, &Rational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, sym: Symbol) -> u32 {
        self.terms.keys().map(|m| m.exponent(sym)).max().unwrap_or(0)
    }

    pub fn symbols(&self) -> BTreeSet<Symbol> {
        self.terms
            .keys()
            .flat_map(|m| m.factors().iter().map(|&(s, _)| s))
            .collect()
    }

    pub fn contains(&self, sym: Symbol) -> bool {
        self.terms.keys().any(|m| m.exponent(sym) > 0)
    }

    /// Coefficients of `self` viewed as a univariate polynomial in `sym`;
    /// entry `i` multiplies `sym^i`.
    pub fn coefficients_in(&self, sym: Symbol) -> Vec<Polynomial> {
        let mut out = vec![Polynomial::zero(); self.degree_in(sym) as usize + 1];
        for (m, c) in &self.terms {
            let (e, rest) = m.split_off(sym);
            out[e as usize].add_term(rest, c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Polynomial {
        let mut base = self.clone();
        let mut acc = Polynomial::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Positive rational `c` such that `self / c` has coprime integer
    /// coefficients. Zero for the zero polynomial.
    pub fn content(&self) -> Rational {
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for c in self.terms.values() {
            num = rational::gcd_int(&num, c.numer());
            den = rational::lcm_int(&den, c.denom());
        }
        if num.is_zero() {
            return Rational::zero();
        }
        Rational::new(num.abs(), den)
    }

    /// `self / content`, with the sign left as is.
    pub fn primitive_part(&self) -> Polynomial {
        let c = self.content();
        if c.is_zero() || c.is_one() {
            return self.clone();
        }
        self.scale(&c.recip())
    }

    /// Makes the polynomial primitive and its leading coefficient positive.
    pub fn normalized(&self) -> Polynomial {
        let p = self.primitive_part();
        match p.leading_term() {
            Some((_, c)) if c.is_negative() => -&p,
            _ => p,
        }
    }

    /// Greatest common monomial factor of all terms (one for zero).
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Monomial::one();
        };
        it.fold(first.clone(), |g, m| g.gcd(m))
    }

    pub fn div_monomial(&self, m: &Monomial) -> Option<Polynomial> {
        let mut terms = BTreeMap::new();
        for (k, c) in &self.terms {
            terms.insert(k.div(m)?, c.clone());
        }
        Some(Polynomial { terms })
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Polynomial) -> Option<Polynomial> {
        let (dm, dc) = d.leading_term()?;
        let (dm, dc) = (dm.clone(), dc.clone());
        let mut rem = self.clone();
        let mut quot = Polynomial::zero();
        while let Some((rm, rc)) = rem.leading_term() {
            let qm = rm.div(&dm)?;
            let qc = rc / &dc;
            let step = Polynomial::term(qc, qm);
            rem = &rem - &(&step * d);
            quot = &quot + &step;
        }
        Some(quot)
    }

    /// Exact square root up to sign, if `self` is a perfect square.
    pub fn sqrt_exact(&self) -> Option<Polynomial> {
        let Some((lm, lc)) = self.leading_term() else {
            return Some(Polynomial::zero());
        };
        let root_m = lm.sqrt()?;
        let root_c = rational::sqrt_exact(lc)?;
        let lead = Polynomial::term(root_c.clone(), root_m.clone());
        let two_lead_c = &root_c * rational::int(2);
        let mut root = lead;
        let mut rem = self - &root.pow(2);
        let mut last = root_m.clone();
        while let Some((rm, rc)) = rem.leading_term() {
            let tm = rm.div(&root_m)?;
            if tm >= last {
                return None;
            }
            let t = Polynomial::term(rc / &two_lead_c, tm.clone());
            rem = &(&rem - &(&(&root * &t) * &Polynomial::constant(rational::int(2)))) - &t.pow(2);
            root = &root + &t;
            last = tm;
        }
        Some(root)
    }

    /// Substitutes rational-function values for symbols; unbound symbols pass
    /// through unchanged.
    pub fn substitute(
        &self,
        bindings: &BTreeMap<Symbol, RationalFunction>,
    ) -> Result<RationalFunction, super::ExactError> {
        if bindings.is_empty() || self.symbols().iter().all(|s| !bindings.contains_key(s)) {
            return Ok(RationalFunction::from_poly(self.clone()));
        }
        // Group terms by their bound part so each distinct product of binding
        // powers is formed once.
        let mut groups: BTreeMap<Monomial, Polynomial> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (mut bound, mut free) = (Vec::new(), Vec::new());
            for &(s, e) in m.factors() {
                if bindings.contains_key(&s) {
                    bound.push((s, e));
                } else {
                    free.push((s, e));
                }
            }
            groups
                .entry(Monomial::from_pairs(bound))
                .or_default()
                .add_term(Monomial::from_pairs(free), c.clone());
        }
        let mut powers: BTreeMap<(Symbol, u32), RationalFunction> = BTreeMap::new();
        let mut acc = RationalFunction::zero();
        for (bound, free) in groups {
            let mut value = RationalFunction::from_poly(free);
            for &(s, e) in bound.factors() {
                let pw = powers
                    .entry((s, e))
                    .or_insert_with(|| bindings[&s].pow(e))
                    .clone();
                value = &value * &pw;
            }
            acc = &acc + &value;
        }
        Ok(acc)
    }

    /// Evaluates with every symbol bound to a rational; `None` if a symbol is
    /// missing from `values`.
    pub fn eval(&self, values: &dyn Fn(Symbol) -> Option<Rational>) -> Option<Rational> {
        let mut acc = Rational::zero();
        let mut cache: BTreeMap<Symbol, Rational> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(s, e) in m.factors() {
                let v = match cache.get(&s) {
                    Some(v) => v.clone(),
                    None => {
                        let v = values(s)?;
                        cache.insert(s, v.clone());
                        v
                    }
                };
                t *= num_traits::pow(v, e as usize);
            }
            acc += t;
        }
        Some(acc)
    }

    /// Canonical text: descending term order, `*` for products, `^` for powers.
    pub fn to_text(&self, table: &SymbolTable) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            write_term(&mut out, &mag, m, table);
        }
        out
    }
}

fn write_term(out: &mut String, mag: &Rational, m: &Monomial, table: &SymbolTable) {
    if m.is_one() {
        let _ = write!(out, "{mag}");
        return;
    }
    if !mag.is_one() {
        let _ = write!(out, "{mag}*");
    }
    for (k, &(s, e)) in m.factors().iter().enumerate() {
        if k > 0 {
            out.push('*');
        }
        out.push_str(table.name(s));
        if e > 1 {
            let _ = write!(out, "^{e}");
        }
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let (big, small) = if self.terms.len() >= rhs.terms.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: Polynomial) -> Polynomial {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

impl From<Symbol> for Polynomial {
    fn from(s: Symbol) -> Self {
        Polynomial::var(s)
    }
}

impl From<Rational> for Polynomial {
    fn from(c: Rational) -> Self {
        Polynomial::constant(c)
    }
}
