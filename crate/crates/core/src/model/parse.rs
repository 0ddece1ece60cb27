use std::collections::BTreeSet;

use num_bigint::BigInt;

use super::{MatchSpec, ModelError, PdeExpr, ProblemSpec, Unknown, WaveReduction};
use crate::exact::{is_valid_name, Rational};
use crate::series::{Exponents, Parity, SupportPolicy};

const MAX_DEPTH: usize = 64;
const MAX_EXPONENT: u32 = 256;
const MAX_DEGREE: u32 = 64;
const MAX_VARS: usize = 8;
const MAX_INT_DIGITS: usize = 200;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    Colon,
    Eq,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    col: usize,
}

fn lex(line_no: usize, text: &str) -> Result<Vec<Token>, ModelError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                col,
            });
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i - start > MAX_INT_DIGITS {
                return Err(syntax(line_no, col, "integer literal too long"));
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Token {
                tok: Tok::Int(s.parse().expect("digits")),
                col,
            });
            continue;
        }
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBrack,
            ']' => Tok::RBrack,
            ',' => Tok::Comma,
            ':' => Tok::Colon,
            '=' => Tok::Eq,
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            _ => return Err(syntax(line_no, col, &format!("unexpected character `{c}`"))),
        };
        out.push(Token { tok, col });
        i += 1;
    }
    out.push(Token {
        tok: Tok::End,
        col: chars.len() + 1,
    });
    Ok(out)
}

fn syntax(line: usize, col: usize, message: &str) -> ModelError {
    ModelError::Syntax {
        line,
        col,
        message: message.to_string(),
    }
}

fn invalid(line: usize, message: impl Into<String>) -> ModelError {
    ModelError::Invalid {
        line,
        message: message.into(),
    }
}

/// Declarations visible while parsing an expression.
struct Scope<'a> {
    vars: &'a [String],
    params: &'a [String],
    funcs: &'a [String],
}

struct Line<'a> {
    no: usize,
    toks: Vec<Token>,
    pos: usize,
    depth: usize,
    in_deriv: usize,
    scope: Option<Scope<'a>>,
}

impl<'a> Line<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn col(&self) -> usize {
        self.toks[self.pos].col
    }

    fn next(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.next();
            true
        } else {
            false
        }
    }

    fn err(&self, msg: &str) -> ModelError {
        syntax(self.no, self.col(), msg)
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), ModelError> {
        if self.eat(&t) {
            Ok(())
        } else {
            Err(self.err(&format!("expected {what}")))
        }
    }

    fn ident(&mut self) -> Result<String, ModelError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.next();
                Ok(s)
            }
            _ => Err(self.err("expected identifier")),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), ModelError> {
        match self.peek() {
            Tok::Ident(s) if s == kw => {
                self.next();
                Ok(())
            }
            _ => Err(self.err(&format!("expected `{kw}`"))),
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn uint(&mut self, max: u32) -> Result<u32, ModelError> {
        match self.peek().clone() {
            Tok::Int(n) => {
                let v: Option<u32> = (&n).try_into().ok();
                match v.filter(|&v| v <= max) {
                    Some(v) => {
                        self.next();
                        Ok(v)
                    }
                    None => Err(self.err(&format!("integer must be at most {max}"))),
                }
            }
            _ => Err(self.err("expected integer")),
        }
    }

    fn end(&mut self) -> Result<(), ModelError> {
        if *self.peek() == Tok::End {
            Ok(())
        } else {
            Err(self.err("unexpected trailing input"))
        }
    }

    /// Identifier list, commas optional.
    fn names(&mut self) -> Result<Vec<(String, usize)>, ModelError> {
        let mut out = Vec::new();
        while let Tok::Ident(s) = self.peek().clone() {
            let col = self.col();
            self.next();
            out.push((s, col));
            self.eat(&Tok::Comma);
        }
        Ok(out)
    }

    fn exponents(&mut self, nvars: Option<usize>) -> Result<Exponents, ModelError> {
        let col = self.col();
        let mut v = Vec::new();
        if self.eat(&Tok::LParen) {
            loop {
                v.push(self.uint(MAX_DEGREE)?);
                if self.eat(&Tok::RParen) {
                    break;
                }
                self.expect(Tok::Comma, "`,` or `)`")?;
                if v.len() > MAX_VARS {
                    return Err(self.err("too many exponents"));
                }
            }
        } else {
            v.push(self.uint(MAX_DEGREE)?);
        }
        if let Some(n) = nvars {
            if v.len() != n {
                return Err(syntax(
                    self.no,
                    col,
                    &format!("expected {n} exponent(s), found {}", v.len()),
                ));
            }
        }
        Ok(Exponents(v))
    }

    fn exponent_list(&mut self, nvars: Option<usize>) -> Result<BTreeSet<Exponents>, ModelError> {
        self.expect(Tok::LBrack, "`[`")?;
        let mut set = BTreeSet::new();
        if self.eat(&Tok::RBrack) {
            return Ok(set);
        }
        loop {
            set.insert(self.exponents(nvars)?);
            if set.len() > 4096 {
                return Err(self.err("exponent list too long"));
            }
            if self.eat(&Tok::RBrack) {
                break;
            }
            self.expect(Tok::Comma, "`,` or `]`")?;
        }
        Ok(set)
    }

    // expression grammar

    fn enter(&mut self) -> Result<(), ModelError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(self.err("expression nested too deeply"));
        }
        Ok(())
    }

    fn sum(&mut self) -> Result<PdeExpr, ModelError> {
        self.enter()?;
        let mut terms = Vec::new();
        let first_neg = self.eat(&Tok::Minus);
        let first = self.product()?;
        terms.push(if first_neg {
            PdeExpr::Negate(Box::new(first))
        } else {
            first
        });
        loop {
            if self.eat(&Tok::Plus) {
                terms.push(self.product()?);
            } else if self.eat(&Tok::Minus) {
                terms.push(PdeExpr::Negate(Box::new(self.product()?)));
            } else {
                break;
            }
        }
        self.depth -= 1;
        Ok(if terms.len() == 1 {
            terms.pop().unwrap()
        } else {
            PdeExpr::Sum(terms)
        })
    }

    fn product(&mut self) -> Result<PdeExpr, ModelError> {
        let mut factors = vec![self.power()?];
        while self.eat(&Tok::Star) {
            factors.push(self.power()?);
        }
        Ok(if factors.len() == 1 {
            factors.pop().unwrap()
        } else {
            PdeExpr::Product(factors)
        })
    }

    fn power(&mut self) -> Result<PdeExpr, ModelError> {
        let base = self.atom()?;
        if self.eat(&Tok::Caret) {
            let col = self.col();
            let e = self.uint(MAX_EXPONENT)?;
            if e == 0 {
                return Err(syntax(self.no, col, "exponent must be positive"));
            }
            return Ok(PdeExpr::Power(Box::new(base), e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<PdeExpr, ModelError> {
        let col = self.col();
        match self.next() {
            Tok::LParen => {
                let e = self.sum()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::Int(n) => {
                if self.eat(&Tok::Slash) {
                    let dcol = self.col();
                    match self.next() {
                        Tok::Int(d) if d != BigInt::from(0) => Ok(PdeExpr::Const(Rational::new(n, d))),
                        Tok::Int(_) => Err(syntax(self.no, dcol, "division by zero")),
                        _ => Err(syntax(self.no, dcol, "expected integer denominator")),
                    }
                } else {
                    Ok(PdeExpr::Const(Rational::from_integer(n)))
                }
            }
            Tok::Ident(name) => self.ident_atom(name, col),
            Tok::End => Err(syntax(self.no, col, "unexpected end of line")),
            _ => Err(syntax(self.no, col, "expected expression")),
        }
    }

    fn ident_atom(&mut self, name: String, col: usize) -> Result<PdeExpr, ModelError> {
        let scope = self.scope.as_ref().expect("expression scope");
        let deriv_var = name
            .strip_prefix('d')
            .filter(|v| scope.vars.iter().any(|x| x == v))
            .map(str::to_string);
        if let (Some(var), Tok::LParen) = (deriv_var, self.peek()) {
            self.next();
            self.enter()?;
            self.in_deriv += 1;
            let child = self.sum()?;
            self.in_deriv -= 1;
            self.depth -= 1;
            self.expect(Tok::RParen, "`)`")?;
            if !child.contains_func() {
                return Err(ModelError::NotAFunction { line: self.no, col });
            }
            return Ok(match child {
                PdeExpr::Deriv {
                    child,
                    var: v,
                    order,
                } if v == var => PdeExpr::Deriv {
                    child,
                    var,
                    order: order + 1,
                },
                other => PdeExpr::Deriv {
                    child: Box::new(other),
                    var,
                    order: 1,
                },
            });
        }
        if scope.funcs.contains(&name) {
            return Ok(PdeExpr::FuncRef(name));
        }
        if scope.params.contains(&name) {
            return Ok(PdeExpr::Param(name));
        }
        if *self.peek() == Tok::LParen || self.in_deriv > 0 {
            return Err(ModelError::UnknownFunction {
                name,
                line: self.no,
                col,
            });
        }
        Err(ModelError::UnknownIdentifier {
            name,
            line: self.no,
            col,
        })
    }
}

/// Turns `lhs = rhs` into a single expression equal to `lhs - rhs`.
fn equation(lhs: PdeExpr, rhs: PdeExpr) -> PdeExpr {
    if rhs.is_zero_const() {
        return lhs;
    }
    let mut terms = match lhs {
        PdeExpr::Sum(ts) => ts,
        e if e.is_zero_const() => Vec::new(),
        e => vec![e],
    };
    let neg = |e: PdeExpr| match e {
        PdeExpr::Negate(inner) => *inner,
        e => PdeExpr::Negate(Box::new(e)),
    };
    match rhs {
        PdeExpr::Sum(ts) => terms.extend(ts.into_iter().map(neg)),
        e => terms.push(neg(e)),
    }
    if terms.len() == 1 {
        terms.pop().unwrap()
    } else {
        PdeExpr::Sum(terms)
    }
}

struct Builder {
    name: Option<String>,
    vars: Vec<String>,
    params: Vec<String>,
    unknowns: Vec<(String, String, Option<SupportPolicy>, usize)>,
    equations: Vec<PdeExpr>,
    seeds: Vec<(String, Exponents, usize)>,
    match_bound: Option<MatchSpec>,
    reduction: Option<(WaveReduction, usize)>,
}

fn check_name(line: usize, col: usize, name: &str) -> Result<(), ModelError> {
    if is_valid_name(name) {
        Ok(())
    } else {
        Err(syntax(line, col, &format!("invalid name `{name}`")))
    }
}

/// Parses `.pde` source into a validated problem.
pub fn parse_problem(text: &str) -> Result<ProblemSpec, ModelError> {
    let mut b = Builder {
        name: None,
        vars: Vec::new(),
        params: Vec::new(),
        unknowns: Vec::new(),
        equations: Vec::new(),
        seeds: Vec::new(),
        match_bound: None,
        reduction: None,
    };
    for (i, raw) in text.lines().enumerate() {
        let no = i + 1;
        let body = raw.split('#').next().unwrap_or("");
        if body.trim().is_empty() {
            continue;
        }
        let trimmed = body.trim_start();
        if let Some(rest) = trimmed.strip_prefix("problem") {
            if rest.is_empty() || rest.starts_with(char::is_whitespace) {
                let name = rest.trim();
                let ok = !name.is_empty()
                    && name
                        .chars()
                        .all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_');
                if !ok {
                    return Err(syntax(no, 1, "expected problem name"));
                }
                if b.name.is_some() {
                    return Err(invalid(no, "duplicate `problem` statement"));
                }
                b.name = Some(name.to_string());
                continue;
            }
        }
        let toks = lex(no, body)?;
        statement(&mut b, no, toks)?;
    }
    finish(b)
}

fn statement(b: &mut Builder, no: usize, toks: Vec<Token>) -> Result<(), ModelError> {
    let mut l = Line {
        no,
        toks,
        pos: 0,
        depth: 0,
        in_deriv: 0,
        scope: None,
    };
    let kw = l.ident()?;
    match kw.as_str() {
        "vars" => {
            if !b.vars.is_empty() {
                return Err(invalid(no, "duplicate `vars` statement"));
            }
            let names = l.names()?;
            l.end()?;
            if names.is_empty() || names.len() > MAX_VARS {
                return Err(invalid(no, format!("between 1 and {MAX_VARS} variables required")));
            }
            for (n, col) in names {
                check_name(no, col, &n)?;
                if b.vars.contains(&n) {
                    return Err(invalid(no, format!("duplicate variable `{n}`")));
                }
                b.vars.push(n);
            }
        }
        "params" => {
            for (n, col) in l.names()? {
                check_name(no, col, &n)?;
                if b.params.contains(&n) || b.vars.contains(&n) {
                    return Err(invalid(no, format!("`{n}` already declared")));
                }
                b.params.push(n);
            }
            l.end()?;
        }
        "unknown" => {
            let col = l.col();
            let name = l.ident()?;
            check_name(no, col, &name)?;
            l.expect(Tok::LParen, "`(`")?;
            let args = l.names()?;
            l.expect(Tok::RParen, "`)`")?;
            let args: Vec<String> = args.into_iter().map(|(n, _)| n).collect();
            if b.vars.is_empty() {
                return Err(invalid(no, "`vars` must come before `unknown`"));
            }
            if args != b.vars {
                return Err(invalid(
                    no,
                    format!("unknown `{name}` must take all variables ({})", b.vars.join(", ")),
                ));
            }
            let prefix = if l.is_keyword("as") {
                l.next();
                let col = l.col();
                let p = l.ident()?;
                check_name(no, col, &p)?;
                p
            } else {
                name.clone()
            };
            l.end()?;
            if b.unknowns.iter().any(|u| u.0 == name)
                || b.params.contains(&name)
                || b.vars.contains(&name)
            {
                return Err(invalid(no, format!("`{name}` already declared")));
            }
            if b.unknowns.iter().any(|u| u.1 == prefix) {
                return Err(invalid(no, format!("coefficient prefix `{prefix}` already used")));
            }
            b.unknowns.push((name, prefix, None, no));
        }
        "eq" => {
            let funcs: Vec<String> = b.unknowns.iter().map(|u| u.0.clone()).collect();
            l.scope = Some(Scope {
                vars: &b.vars,
                params: &b.params,
                funcs: &funcs,
            });
            let lhs = l.sum()?;
            l.expect(Tok::Eq, "`=`")?;
            let rhs = l.sum()?;
            l.end()?;
            b.equations.push(equation(lhs, rhs));
        }
        "ansatz" => {
            let col = l.col();
            let name = l.ident()?;
            l.expect(Tok::Colon, "`:`")?;
            let support = support_policy(&mut l)?;
            l.end()?;
            let u = b
                .unknowns
                .iter_mut()
                .find(|u| u.0 == name)
                .ok_or(ModelError::UnknownFunction {
                    name: name.clone(),
                    line: no,
                    col,
                })?;
            if u.2.is_some() {
                return Err(invalid(no, format!("duplicate ansatz for `{name}`")));
            }
            u.2 = Some(support);
        }
        "seeds" => {
            while *l.peek() != Tok::End {
                let col = l.col();
                let name = l.ident()?;
                if !b.unknowns.iter().any(|u| u.0 == name) {
                    return Err(ModelError::UnknownFunction { name, line: no, col });
                }
                l.expect(Tok::LBrack, "`[`")?;
                let mut v = vec![l.uint(MAX_DEGREE)?];
                while l.eat(&Tok::Comma) {
                    v.push(l.uint(MAX_DEGREE)?);
                    if v.len() > MAX_VARS {
                        return Err(l.err("too many exponents"));
                    }
                }
                l.expect(Tok::RBrack, "`]`")?;
                l.eat(&Tok::Comma);
                b.seeds.push((name, Exponents(v), no));
            }
        }
        "match" => {
            if b.match_bound.is_some() {
                return Err(invalid(no, "duplicate `match` statement"));
            }
            let m = if l.is_keyword("total_degree") {
                l.next();
                MatchSpec::TotalDegree(l.uint(MAX_DEGREE)?)
            } else if l.is_keyword("explicit") {
                l.next();
                MatchSpec::Explicit(l.exponent_list(None)?)
            } else {
                return Err(l.err("expected `total_degree` or `explicit`"));
            };
            l.end()?;
            b.match_bound = Some(m);
        }
        "reduce" => {
            if b.reduction.is_some() {
                return Err(invalid(no, "duplicate `reduce` statement"));
            }
            let new_var = l.ident()?;
            l.expect(Tok::Eq, "`=`")?;
            let k = l.ident()?;
            l.expect(Tok::Star, "`*`")?;
            let x = l.ident()?;
            l.expect(Tok::Minus, "`-`")?;
            let lambda = l.ident()?;
            l.expect(Tok::Star, "`*`")?;
            let t = l.ident()?;
            l.keyword("with")?;
            let c = l.ident()?;
            l.expect(Tok::Eq, "`=`")?;
            let col = l.col();
            let lambda2 = l.ident()?;
            l.expect(Tok::Slash, "`/`")?;
            let k2 = l.ident()?;
            l.end()?;
            if lambda2 != lambda || k2 != k {
                return Err(syntax(no, col, &format!("expected `{lambda}/{k}`")));
            }
            check_name(no, 1, &new_var)?;
            check_name(no, 1, &c)?;
            b.reduction = Some((
                WaveReduction {
                    new_var,
                    k,
                    x,
                    lambda,
                    t,
                    c,
                },
                no,
            ));
        }
        other => return Err(syntax(no, 1, &format!("unknown statement `{other}`"))),
    }
    Ok(())
}

fn support_policy(l: &mut Line) -> Result<SupportPolicy, ModelError> {
    if l.is_keyword("total_degree") {
        l.next();
        return Ok(SupportPolicy::total_degree(l.uint(MAX_DEGREE)?));
    }
    if l.is_keyword("explicit") {
        l.next();
        let set = l.exponent_list(None)?;
        return Ok(SupportPolicy::Explicit { exponents: set });
    }
    if l.is_keyword("parity") {
        l.next();
        let mut parities = Vec::new();
        loop {
            let p = match l.peek() {
                Tok::Ident(s) if s == "even" => Parity::Even,
                Tok::Ident(s) if s == "odd" => Parity::Odd,
                Tok::Ident(s) if s == "any" => Parity::Any,
                _ => break,
            };
            l.next();
            parities.push(p);
            if parities.len() > MAX_VARS {
                return Err(l.err("too many parities"));
            }
        }
        if parities.is_empty() {
            return Err(l.err("expected `even`, `odd` or `any`"));
        }
        let degree = if l.is_keyword("total_degree") {
            l.next();
            Some(l.uint(MAX_DEGREE)?)
        } else {
            None
        };
        return Ok(SupportPolicy::parity(parities, degree));
    }
    Err(l.err("expected `total_degree`, `explicit` or `parity`"))
}

fn finish(b: Builder) -> Result<ProblemSpec, ModelError> {
    let name = b.name.ok_or_else(|| invalid(1, "missing `problem` statement"))?;
    if b.vars.is_empty() {
        return Err(invalid(1, "missing `vars` statement"));
    }
    let mut spec = ProblemSpec {
        name,
        vars: b.vars,
        params: b.params,
        unknowns: Vec::new(),
        equations: b.equations,
        seeds: Vec::new(),
        match_bound: b.match_bound,
        reduction: None,
    };
    if let Some((r, line)) = b.reduction {
        if spec.vars.len() != 2 || spec.vars[0] != r.x || spec.vars[1] != r.t {
            return Err(ModelError::NotReducible(format!(
                "line {line}: reduction needs variables ({}, {})",
                r.x, r.t
            )));
        }
        for p in [&r.k, &r.lambda] {
            if !spec.params.contains(p) {
                return Err(invalid(line, format!("`{p}` must be a declared parameter")));
            }
        }
        if r.k == r.lambda {
            return Err(invalid(line, "wave number and speed must differ"));
        }
        if spec.params.contains(&r.c) && r.c != r.lambda {
            return Err(invalid(line, format!("`{}` already declared", r.c)));
        }
        if spec.vars.contains(&r.new_var) || spec.params.contains(&r.new_var) {
            return Err(invalid(line, format!("`{}` already declared", r.new_var)));
        }
        spec.reduction = Some(r);
    }
    let nvars = spec.series_vars().len();
    for (name, prefix, support, line) in b.unknowns {
        let support = support.ok_or_else(|| invalid(line, format!("missing ansatz for `{name}`")))?;
        check_arity(&support, nvars, line)?;
        spec.unknowns.push(Unknown {
            name,
            prefix,
            support,
        });
    }
    if let Some(MatchSpec::Explicit(set)) = &spec.match_bound {
        if set.iter().any(|e| e.len() != nvars) {
            return Err(invalid(1, format!("match exponents must have {nvars} entries")));
        }
    }
    for (f, e, line) in b.seeds {
        let u = spec.unknown(&f).expect("checked when parsed");
        let label = format!("{f}{}", e);
        if e.len() != nvars || !u.support.admits(&e) {
            return Err(ModelError::SeedNotInSupport { seed: label, line });
        }
        if spec.seeds.iter().any(|s| s.0 == f && s.1 == e) {
            return Err(invalid(line, format!("duplicate seed {label}")));
        }
        spec.seeds.push((f, e));
    }
    Ok(spec)
}

fn check_arity(s: &SupportPolicy, nvars: usize, line: usize) -> Result<(), ModelError> {
    let ok = match s {
        SupportPolicy::TotalDegree { .. } => true,
        SupportPolicy::Explicit { exponents } => exponents.iter().all(|e| e.len() == nvars),
        SupportPolicy::Parity { parities, .. } => parities.len() == nvars,
    };
    if ok {
        Ok(())
    } else {
        Err(invalid(line, format!("ansatz must be over {nvars} variable(s)")))
    }
}
