use num_traits::{One, Zero};

use super::{ModelError, PdeExpr, ProblemSpec, WaveReduction};
use crate::exact::Rational;

/// Rewrites an `(x, t)` problem as an ODE in `z = k*x - lambda*t`.
///
/// `d/dx` becomes `k d/dz`, `d/dt` becomes `-lambda d/dz = -c*k d/dz`, and each
/// equation is divided by the largest power of `k` common to all its terms.
pub fn traveling_wave_reduce(p: &ProblemSpec, r: &WaveReduction) -> Result<ProblemSpec, ModelError> {
    if p.vars.len() != 2 || p.vars[0] != r.x || p.vars[1] != r.t {
        return Err(ModelError::NotReducible(format!(
            "variables are ({}), expected ({}, {})",
            p.vars.join(", "),
            r.x,
            r.t
        )));
    }
    for q in [&r.k, &r.lambda] {
        if !p.params.contains(q) {
            return Err(ModelError::NotReducible(format!("`{q}` is not a parameter")));
        }
    }
    let equations = p
        .equations
        .iter()
        .map(|e| {
            let t = transform(e, r);
            let m = valuation(&t, &r.k).unwrap_or(0);
            simplify(strip(&t, m, &r.k))
        })
        .collect();
    let params = p
        .params
        .iter()
        .map(|q| if *q == r.lambda { r.c.clone() } else { q.clone() })
        .collect();
    Ok(ProblemSpec {
        name: p.name.clone(),
        vars: vec![r.new_var.clone()],
        params,
        unknowns: p.unknowns.clone(),
        equations,
        seeds: p.seeds.clone(),
        match_bound: p.match_bound.clone(),
        reduction: None,
    })
}

fn param_power(name: &str, n: u32) -> PdeExpr {
    let p = PdeExpr::Param(name.to_string());
    if n == 1 {
        p
    } else {
        PdeExpr::Power(Box::new(p), n)
    }
}

fn transform(e: &PdeExpr, r: &WaveReduction) -> PdeExpr {
    match e {
        PdeExpr::Const(_) | PdeExpr::FuncRef(_) => e.clone(),
        PdeExpr::Param(n) if *n == r.lambda => PdeExpr::Product(vec![
            PdeExpr::Param(r.c.clone()),
            PdeExpr::Param(r.k.clone()),
        ]),
        PdeExpr::Param(_) => e.clone(),
        PdeExpr::Deriv { child, var, order } => {
            let d = PdeExpr::Deriv {
                child: Box::new(transform(child, r)),
                var: r.new_var.clone(),
                order: *order,
            };
            if *var == r.x {
                PdeExpr::Product(vec![param_power(&r.k, *order), d])
            } else {
                let scaled = PdeExpr::Product(vec![
                    param_power(&r.c, *order),
                    param_power(&r.k, *order),
                    d,
                ]);
                if order % 2 == 1 {
                    PdeExpr::Negate(Box::new(scaled))
                } else {
                    scaled
                }
            }
        }
        PdeExpr::Sum(cs) => PdeExpr::Sum(cs.iter().map(|c| transform(c, r)).collect()),
        PdeExpr::Product(cs) => PdeExpr::Product(cs.iter().map(|c| transform(c, r)).collect()),
        PdeExpr::Power(b, n) => PdeExpr::Power(Box::new(transform(b, r)), *n),
        PdeExpr::Negate(c) => PdeExpr::Negate(Box::new(transform(c, r))),
    }
}

/// Guaranteed power of `k` dividing `e`; `None` for an identically zero term.
fn valuation(e: &PdeExpr, k: &str) -> Option<u32> {
    match e {
        PdeExpr::Const(c) => (!c.is_zero()).then_some(0),
        PdeExpr::Param(n) => Some(u32::from(n == k)),
        PdeExpr::FuncRef(_) => Some(0),
        PdeExpr::Deriv { child, .. } | PdeExpr::Negate(child) => valuation(child, k),
        PdeExpr::Sum(cs) => cs.iter().filter_map(|c| valuation(c, k)).min(),
        PdeExpr::Product(cs) => cs.iter().map(|c| valuation(c, k)).sum(),
        PdeExpr::Power(b, n) => valuation(b, k).map(|v| v * n),
    }
}

/// Divides `e` by `k^m`; requires `valuation(e) >= m`.
fn strip(e: &PdeExpr, m: u32, k: &str) -> PdeExpr {
    if m == 0 {
        return e.clone();
    }
    match e {
        PdeExpr::Param(n) if n == k && m == 1 => PdeExpr::Const(Rational::one()),
        PdeExpr::Const(c) if c.is_zero() => e.clone(),
        PdeExpr::Sum(cs) => PdeExpr::Sum(cs.iter().map(|c| strip(c, m, k)).collect()),
        PdeExpr::Negate(c) => PdeExpr::Negate(Box::new(strip(c, m, k))),
        PdeExpr::Deriv { child, var, order } => PdeExpr::Deriv {
            child: Box::new(strip(child, m, k)),
            var: var.clone(),
            order: *order,
        },
        PdeExpr::Product(cs) => {
            let mut left = m;
            let out = cs
                .iter()
                .map(|c| {
                    let take = valuation(c, k).unwrap_or(left).min(left);
                    left -= take;
                    strip(c, take, k)
                })
                .collect();
            debug_assert_eq!(left, 0);
            PdeExpr::Product(out)
        }
        PdeExpr::Power(b, n) => {
            if valuation(b, k).is_none() {
                return e.clone();
            }
            if let PdeExpr::Product(fs) = &**b {
                let spread = fs
                    .iter()
                    .map(|f| PdeExpr::Power(Box::new(f.clone()), *n))
                    .collect();
                return strip(&PdeExpr::Product(spread), m, k);
            }
            let (q, r) = (m / n, m % n);
            let mut fs = vec![PdeExpr::Power(Box::new(strip(b, q, k)), n - r)];
            if r > 0 {
                fs.push(PdeExpr::Power(Box::new(strip(b, q + 1, k)), r));
            }
            PdeExpr::Product(fs)
        }
        _ => unreachable!("strip called beyond the valuation"),
    }
}

fn simplify(e: PdeExpr) -> PdeExpr {
    match e {
        PdeExpr::Sum(cs) => {
            let mut out = Vec::new();
            for c in cs.into_iter().map(simplify) {
                match c {
                    PdeExpr::Sum(inner) => out.extend(inner),
                    c if c.is_zero_const() => {}
                    c => out.push(c),
                }
            }
            match out.len() {
                0 => PdeExpr::Const(Rational::zero()),
                1 => out.pop().unwrap(),
                _ => PdeExpr::Sum(out),
            }
        }
        PdeExpr::Product(cs) => {
            let mut neg = false;
            let mut coeff = Rational::one();
            let mut out = Vec::new();
            let mut stack: Vec<PdeExpr> = cs.into_iter().rev().collect();
            while let Some(c) = stack.pop() {
                match simplify(c) {
                    PdeExpr::Negate(inner) => {
                        neg = !neg;
                        stack.push(*inner);
                    }
                    PdeExpr::Product(inner) => stack.extend(inner.into_iter().rev()),
                    PdeExpr::Const(q) => coeff *= q,
                    c => out.push(c),
                }
            }
            if coeff.is_zero() {
                return PdeExpr::Const(coeff);
            }
            if !coeff.is_one() || out.is_empty() {
                out.insert(0, PdeExpr::Const(coeff));
            }
            let body = if out.len() == 1 {
                out.pop().unwrap()
            } else {
                PdeExpr::Product(out)
            };
            if neg {
                PdeExpr::Negate(Box::new(body))
            } else {
                body
            }
        }
        PdeExpr::Power(b, n) => match simplify(*b) {
            b if n == 1 => b,
            PdeExpr::Const(q) => PdeExpr::Const(num_traits::pow(q, n as usize)),
            b => PdeExpr::Power(Box::new(b), n),
        },
        PdeExpr::Negate(c) => match simplify(*c) {
            PdeExpr::Negate(inner) => *inner,
            c if c.is_zero_const() => c,
            c => PdeExpr::Negate(Box::new(c)),
        },
        PdeExpr::Deriv { child, var, order } => match simplify(*child) {
            PdeExpr::Deriv {
                child: inner,
                var: v,
                order: o,
            } if v == var => PdeExpr::Deriv {
                child: inner,
                var,
                order: order + o,
            },
            c => PdeExpr::Deriv {
                child: Box::new(c),
                var,
                order,
            },
        },
        e => e,
    }
}
