use std::fmt::Write;

use num_traits::{One, Signed};

use super::{MatchSpec, PdeExpr, ProblemSpec};
use crate::exact::Rational;
use crate::series::{Exponents, Parity, SupportPolicy};

/// Prints an expression in the `.pde` expression syntax.
pub fn print_expr(e: &PdeExpr) -> String {
    let mut s = String::new();
    sum(e, &mut s);
    s
}

fn sum(e: &PdeExpr, out: &mut String) {
    match e {
        PdeExpr::Sum(ts) => {
            for (i, t) in ts.iter().enumerate() {
                match (i, t) {
                    (0, PdeExpr::Negate(c)) => {
                        out.push('-');
                        product(c, out);
                    }
                    (0, t) => product(t, out),
                    (_, PdeExpr::Negate(c)) => {
                        out.push_str(" - ");
                        product(c, out);
                    }
                    (_, t) => {
                        out.push_str(" + ");
                        product(t, out);
                    }
                }
            }
        }
        PdeExpr::Negate(c) => {
            out.push('-');
            product(c, out);
        }
        e => product(e, out),
    }
}

fn product(e: &PdeExpr, out: &mut String) {
    match e {
        PdeExpr::Sum(_) | PdeExpr::Negate(_) => paren(e, out),
        PdeExpr::Product(fs) => {
            for (i, f) in fs.iter().enumerate() {
                if i > 0 {
                    out.push('*');
                }
                match f {
                    PdeExpr::Product(_) => paren(f, out),
                    f => product(f, out),
                }
            }
        }
        e => power(e, out),
    }
}

fn power(e: &PdeExpr, out: &mut String) {
    match e {
        PdeExpr::Power(b, n) => {
            let simple = match &**b {
                PdeExpr::Const(c) => c.is_integer() && !c.is_negative(),
                PdeExpr::Param(_) | PdeExpr::FuncRef(_) | PdeExpr::Deriv { .. } => true,
                _ => false,
            };
            if simple {
                atom(b, out);
            } else {
                paren(b, out);
            }
            let _ = write!(out, "^{n}");
        }
        e => atom(e, out),
    }
}

fn atom(e: &PdeExpr, out: &mut String) {
    match e {
        PdeExpr::Const(c) => constant(c, out),
        PdeExpr::Param(n) | PdeExpr::FuncRef(n) => out.push_str(n),
        PdeExpr::Deriv { child, var, order } => {
            for _ in 0..*order {
                let _ = write!(out, "d{var}(");
            }
            sum(child, out);
            for _ in 0..*order {
                out.push(')');
            }
        }
        e => paren(e, out),
    }
}

fn constant(c: &Rational, out: &mut String) {
    if c.is_negative() {
        out.push('(');
        out.push('-');
        constant(&-c, out);
        out.push(')');
    } else if c.denom().is_one() {
        let _ = write!(out, "{}", c.numer());
    } else {
        let _ = write!(out, "{}/{}", c.numer(), c.denom());
    }
}

fn paren(e: &PdeExpr, out: &mut String) {
    out.push('(');
    sum(e, out);
    out.push(')');
}

fn exps(e: &Exponents) -> String {
    let parts: Vec<String> = e.0.iter().map(u32::to_string).collect();
    format!("({})", parts.join(","))
}

fn exp_list<'a>(it: impl Iterator<Item = &'a Exponents>) -> String {
    let parts: Vec<String> = it.map(exps).collect();
    format!("[{}]", parts.join(", "))
}

fn support(s: &SupportPolicy) -> String {
    match s {
        SupportPolicy::TotalDegree { degree } => format!("total_degree {degree}"),
        SupportPolicy::Explicit { exponents } => format!("explicit {}", exp_list(exponents.iter())),
        SupportPolicy::Parity { parities, degree } => {
            let mut s = "parity".to_string();
            for p in parities {
                s.push_str(match p {
                    Parity::Even => " even",
                    Parity::Odd => " odd",
                    Parity::Any => " any",
                });
            }
            if let Some(d) = degree {
                let _ = write!(s, " total_degree {d}");
            }
            s
        }
    }
}

/// Prints a problem as `.pde` source that parses back to an equal problem.
pub fn print_problem(p: &ProblemSpec) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "problem {}", p.name);
    let _ = writeln!(s, "vars {}", p.vars.join(" "));
    if !p.params.is_empty() {
        let _ = writeln!(s, "params {}", p.params.join(" "));
    }
    for u in &p.unknowns {
        let _ = write!(s, "unknown {}({})", u.name, p.vars.join(","));
        if u.prefix != u.name {
            let _ = write!(s, " as {}", u.prefix);
        }
        s.push('\n');
    }
    for e in &p.equations {
        let _ = writeln!(s, "eq {} = 0", print_expr(e));
    }
    if let Some(r) = &p.reduction {
        let _ = writeln!(
            s,
            "reduce {} = {}*{} - {}*{} with {} = {}/{}",
            r.new_var, r.k, r.x, r.lambda, r.t, r.c, r.lambda, r.k
        );
    }
    for u in &p.unknowns {
        let _ = writeln!(s, "ansatz {}: {}", u.name, support(&u.support));
    }
    if !p.seeds.is_empty() {
        let seeds: Vec<String> = p
            .seeds
            .iter()
            .map(|(f, e)| {
                let parts: Vec<String> = e.0.iter().map(u32::to_string).collect();
                format!("{f}[{}]", parts.join(","))
            })
            .collect();
        let _ = writeln!(s, "seeds {}", seeds.join(" "));
    }
    match &p.match_bound {
        Some(MatchSpec::TotalDegree(d)) => {
            let _ = writeln!(s, "match total_degree {d}");
        }
        Some(MatchSpec::Explicit(set)) => {
            let _ = writeln!(s, "match explicit {}", exp_list(set.iter()));
        }
        None => {}
    }
    s
}
