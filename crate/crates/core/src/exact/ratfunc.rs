use std::collections::{BTreeMap, BTreeSet};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::rational::{self, Rational};
use super::{ExactError, Monomial, Polynomial, Symbol, SymbolTable};

/// Ratio of two polynomials.
///
/// Construction normalizes to integer coefficients with the shared integer
/// content and the shared monomial factor removed, a positive leading
/// denominator coefficient, and `0/1` for zero. No polynomial gcd is taken,
/// so the representation may be non-minimal; equality is decided by
/// cross-multiplication.
#[derive(Clone, Debug)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self, ExactError> {
        if den.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Ok(Self::normalize(num, den))
    }

    pub fn zero() -> Self {
        Self::from_poly(Polynomial::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(Polynomial::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(Polynomial::constant(c))
    }

    pub fn symbol(s: Symbol) -> Self {
        Self::from_poly(Polynomial::var(s))
    }

    pub fn from_poly(p: Polynomial) -> Self {
        Self::normalize(p, Polynomial::one())
    }

    pub fn numer(&self) -> &Polynomial {
        &self.num
    }

    pub fn denom(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// The polynomial value when the denominator is a constant.
    pub fn as_polynomial(&self) -> Option<Polynomial> {
        let d = self.den.as_constant()?;
        Some(self.num.scale(&d.recip()))
    }

    pub fn as_constant(&self) -> Option<Rational> {
        let n = self.num.as_constant()?;
        let d = self.den.as_constant()?;
        Some(n / d)
    }

    pub fn symbols(&self) -> BTreeSet<Symbol> {
        let mut s = self.num.symbols();
        s.extend(self.den.symbols());
        s
    }

    pub fn contains(&self, sym: Symbol) -> bool {
        self.num.contains(sym) || self.den.contains(sym)
    }

    fn normalize(num: Polynomial, den: Polynomial) -> Self {
        if num.is_zero() {
            return RationalFunction {
                num,
                den: Polynomial::one(),
            };
        }
        // Integer coefficients, then strip the content the two parts share.
        let cn = num.content();
        let cd = den.content();
        let mut num = num.scale(&cn.recip());
        let mut den = den.scale(&cd.recip());
        let ratio = cn / cd;
        num = num.scale(&Rational::from_integer(ratio.numer().clone()));
        den = den.scale(&Rational::from_integer(ratio.denom().clone()));

        let m = num.monomial_content().gcd(&den.monomial_content());
        if !m.is_one() {
            num = num.div_monomial(&m).expect("monomial content divides");
            den = den.div_monomial(&m).expect("monomial content divides");
        }

        if den.len() > 1 {
            if let Some(q) = num.div_exact(&den) {
                return Self::normalize(q, Polynomial::one());
            }
        }

        if den.leading_term().is_some_and(|(_, c)| c.is_negative()) {
            num = -&num;
            den = -&den;
        }
        RationalFunction { num, den }
    }

    /// Cross-multiplication equality.
    pub fn equals(&self, other: &RationalFunction) -> bool {
        if self.den == other.den {
            return self.num == other.num;
        }
        &self.num * &other.den == &other.num * &self.den
    }

    pub fn recip(&self) -> Result<Self, ExactError> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, rhs: &RationalFunction) -> Result<Self, ExactError> {
        if rhs.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Ok(self * &rhs.recip()?)
    }

    pub fn pow(&self, e: u32) -> Self {
        RationalFunction {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::normalize(self.num.scale(c), self.den.clone())
    }

    pub fn substitute(
        &self,
        bindings: &BTreeMap<Symbol, RationalFunction>,
    ) -> Result<Self, ExactError> {
        let n = self.num.substitute(bindings)?;
        let d = self.den.substitute(bindings)?;
        if d.is_zero() {
            return Err(ExactError::DegenerateSubstitution(
                "denominator vanishes under the bindings".into(),
            ));
        }
        n.div(&d)
    }

    /// Evaluates at rational values for every symbol. `Ok(None)` when a
    /// symbol is unbound.
    pub fn eval(
        &self,
        values: &dyn Fn(Symbol) -> Option<Rational>,
    ) -> Result<Option<Rational>, ExactError> {
        let (Some(n), Some(d)) = (self.num.eval(values), self.den.eval(values)) else {
            return Ok(None);
        };
        if d.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Ok(Some(n / d))
    }

    /// Canonical text: `(num)/(den)`, or the bare numerator over one.
    pub fn to_text(&self, table: &SymbolTable) -> String {
        if self.den.is_one() {
            return self.num.to_text(table);
        }
        format!("({})/({})", self.num.to_text(table), self.den.to_text(table))
    }

    /// Splits the denominator into `content * monomial * rest`. Normalized
    /// denominators have integer coefficients, so the content is an integer.
    fn den_parts(&self) -> (BigInt, Monomial, Polynomial) {
        let c = self.den.content();
        debug_assert!(c.is_integer());
        let m = self.den.monomial_content();
        let rest = self
            .den
            .scale(&c.recip())
            .div_monomial(&m)
            .expect("monomial content divides");
        (c.numer().clone(), m, rest)
    }
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

/// Cross-multiplication equality between two rational functions.
pub fn ratfunc_equal(lhs: &RationalFunction, rhs: &RationalFunction) -> bool {
    lhs.equals(rhs)
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RationalFunction::normalize(&self.num + &rhs.num, self.den.clone());
        }
        // Common denominator from lcm of the monomial-times-content parts;
        // the remaining factors are shared if equal, multiplied otherwise.
        let (c1, m1, r1) = self.den_parts();
        let (c2, m2, r2) = rhs.den_parts();
        let (rest, f1, f2) = if r1 == r2 {
            (r1, Polynomial::one(), Polynomial::one())
        } else if r1 == -&r2 {
            let neg = -&Polynomial::one();
            (r1, Polynomial::one(), neg)
        } else {
            (&r1 * &r2, r2.clone(), r1.clone())
        };
        let c = rational::lcm_int(&c1, &c2);
        let m = m1.lcm(&m2);
        let den = rest.mul_monomial(&m).scale(&Rational::from_integer(c.clone()));
        let scale1 = Polynomial::term(Rational::from_integer(&c / &c1), m.div(&m1).unwrap());
        let scale2 = Polynomial::term(Rational::from_integer(&c / &c2), m.div(&m2).unwrap());
        let num = &(&(&self.num * &scale1) * &f1) + &(&(&rhs.num * &scale2) * &f2);
        RationalFunction::normalize(num, den)
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RationalFunction::normalize(&self.num * &rhs.num, Polynomial::one());
        }
        // Cancel across before multiplying to keep intermediate sizes down.
        let (mut n1, mut d1) = (self.num.clone(), self.den.clone());
        let (mut n2, mut d2) = (rhs.num.clone(), rhs.den.clone());
        cancel_pair(&mut n1, &mut d2);
        cancel_pair(&mut n2, &mut d1);
        RationalFunction::normalize(&n1 * &n2, &d1 * &d2)
    }
}

fn cancel_pair(num: &mut Polynomial, den: &mut Polynomial) {
    let m = num.monomial_content().gcd(&den.monomial_content());
    if !m.is_one() {
        *num = num.div_monomial(&m).unwrap();
        *den = den.div_monomial(&m).unwrap();
    }
    if den.len() > 1 {
        if let Some(q) = num.div_exact(den) {
            *num = q;
            *den = Polynomial::one();
        }
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        -&self
    }
}

impl Add for RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: RationalFunction) -> RationalFunction {
        &self + &rhs
    }
}

impl Sub for RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: RationalFunction) -> RationalFunction {
        &self - &rhs
    }
}

impl Mul for RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: RationalFunction) -> RationalFunction {
        &self * &rhs
    }
}

impl From<Polynomial> for RationalFunction {
    fn from(p: Polynomial) -> Self {
        RationalFunction::from_poly(p)
    }
}

impl From<Symbol> for RationalFunction {
    fn from(s: Symbol) -> Self {
        RationalFunction::symbol(s)
    }
}

impl From<Rational> for RationalFunction {
    fn from(c: Rational) -> Self {
        RationalFunction::constant(c)
    }
}
