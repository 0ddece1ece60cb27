//! Parser for the canonical rational-function text form.
//!
//! Accepts the printed form `(a_0^3*a_1 + 4*nu*a_0*a_1^2)/(24*nu^3)` and, more
//! generally, any expression over integers and symbols built from `+ - * /`,
//! `^` with a nonnegative integer exponent, and parentheses.

use num_bigint::BigInt;

use super::{ExactError, Polynomial, RationalFunction, Symbol};
use crate::exact::rational::Rational;

const MAX_DEPTH: usize = 200;
const MAX_EXPONENT: u32 = 256;

/// Parses `text`, resolving names through `resolve`.
pub fn parse_ratfunc(
    text: &str,
    resolve: &mut dyn FnMut(&str) -> Option<Symbol>,
) -> Result<RationalFunction, ExactError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        depth: 0,
        resolve,
    };
    let r = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(r)
}

struct Parser<'a, 'r> {
    src: &'a [u8],
    pos: usize,
    depth: usize,
    resolve: &'r mut dyn FnMut(&str) -> Option<Symbol>,
}

impl Parser<'_, '_> {
    fn err(&self, msg: &str) -> ExactError {
        ExactError::Parse {
            offset: self.pos,
            message: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn enter(&mut self) -> Result<(), ExactError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(self.err("expression nested too deeply"));
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<RationalFunction, ExactError> {
        self.enter()?;
        let neg = self.eat(b'-');
        let mut acc = self.term()?;
        if neg {
            acc = -acc;
        }
        loop {
            if self.eat(b'+') {
                acc = &acc + &self.term()?;
            } else if self.eat(b'-') {
                acc = &acc - &self.term()?;
            } else {
                break;
            }
        }
        self.depth -= 1;
        Ok(acc)
    }

    fn term(&mut self) -> Result<RationalFunction, ExactError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = &acc * &self.unary()?;
            } else if self.eat(b'/') {
                let rhs = self.unary()?;
                acc = acc.div(&rhs)?;
            } else {
                break;
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<RationalFunction, ExactError> {
        if self.eat(b'-') {
            self.enter()?;
            let v = -self.unary()?;
            self.depth -= 1;
            return Ok(v);
        }
        let base = self.atom()?;
        if self.eat(b'^') {
            let e = self.integer()?;
            let e: u32 = e
                .try_into()
                .ok()
                .filter(|&e| e <= MAX_EXPONENT)
                .ok_or_else(|| self.err("exponent out of range"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt, ExactError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(s.parse().expect("digits parse"))
    }

    fn atom(&mut self) -> Result<RationalFunction, ExactError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(RationalFunction::constant(Rational::from_integer(n)))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                match (self.resolve)(name) {
                    Some(s) => Ok(RationalFunction::from_poly(Polynomial::var(s))),
                    None => Err(ExactError::UnknownSymbol(name.to_string())),
                }
            }
            _ => Err(self.err("expected number, symbol or '('")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::SymbolTable;

    #[test]
    fn parses_canonical_form() {
        let mut t = SymbolTable::new();
        for n in ["nu", "a_0", "a_1"] {
            t.fresh(n).unwrap();
        }
        let text = "(a_0^3*a_1 + 4*nu*a_0*a_1^2)/(24*nu^3)";
        let r = parse_ratfunc(text, &mut |n| t.lookup(n)).unwrap();
        assert_eq!(r.to_text(&t), text);
        let r2 = parse_ratfunc("-a_0 / 2 - -a_1", &mut |n| t.lookup(n)).unwrap();
        assert_eq!(r2.to_text(&t), "(-a_0 + 2*a_1)/(2)");
    }

    #[test]
    fn errors() {
        let t = SymbolTable::new();
        let mut res = |n: &str| t.lookup(n);
        assert!(matches!(parse_ratfunc("x", &mut res), Err(ExactError::UnknownSymbol(_))));
        assert!(matches!(parse_ratfunc("1/0", &mut res), Err(ExactError::DivisionByZero)));
        assert!(matches!(parse_ratfunc("(1", &mut res), Err(ExactError::Parse { .. })));
        assert!(matches!(parse_ratfunc("2^999", &mut res), Err(ExactError::Parse { .. })));
        assert!(matches!(parse_ratfunc("1 2", &mut res), Err(ExactError::Parse { .. })));
        let deep = "(".repeat(1000) + "1" + &")".repeat(1000);
        assert!(matches!(parse_ratfunc(&deep, &mut res), Err(ExactError::Parse { .. })));
    }
}
