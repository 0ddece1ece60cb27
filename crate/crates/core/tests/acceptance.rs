//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use pssm_core::exact::rational::{frac, int, to_f64};
use pssm_core::exact::{parse_ratfunc, ratfunc_equal, Polynomial, Rational, RationalFunction, Symbol};
use pssm_core::expand::{expand_pde, AlgSystem};
use pssm_core::model::{builtin, MatchSpec};
use pssm_core::series::Exponents;
use pssm_core::solve::{solve_report, solve_system, specialize, SolvePolicy, SolveResult};
use pssm_core::verify::{
    compare, parse_candidate, residual, residual_of, EvalGrid, OracleSpec, Precision, TimeFactor,
};

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn setup(name: &str) -> Result<(AlgSystem, SolveResult), String> {
    let sys = expand_pde(&builtin(name).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let r = solve_system(&sys, &SolvePolicy::default()).map_err(|e| e.to_string())?;
    Ok((sys, r))
}

fn rf(sys: &AlgSystem, text: &str) -> RationalFunction {
    parse_ratfunc(text, &mut |n| sys.lookup(n)).unwrap_or_else(|e| panic!("{text}: {e}"))
}

fn sym(sys: &AlgSystem, name: &str) -> Symbol {
    sys.lookup(name).unwrap_or_else(|| panic!("no symbol {name}"))
}

fn value(sys: &AlgSystem, r: &SolveResult, name: &str) -> Result<RationalFunction, String> {
    r.get(sym(sys, name))
        .cloned()
        .ok_or_else(|| format!("{name} is not assigned"))
}

fn expect_eq(sys: &AlgSystem, r: &SolveResult, name: &str, expected: &str) -> Result<(), String> {
    let got = value(sys, r, name)?;
    ensure(
        ratfunc_equal(&got, &rf(sys, expected)),
        format!("{name} = {} differs from {expected}", got.to_text(&sys.table)),
    )
}

/// `lhs = rhs` as a normalized polynomial.
fn equation(sys: &AlgSystem, text: &str) -> Polynomial {
    let (l, r) = text.split_once('=').expect("equation");
    let p = rf(sys, &format!("({l}) - ({r})"));
    p.as_polynomial().expect("polynomial equation").normalized()
}

fn system_has(sys: &AlgSystem, text: &str) -> bool {
    let want = equation(sys, text);
    sys.equations.iter().any(|e| e.poly.normalized() == want)
}

/// Exact Taylor coefficients of tan through degree `n`.
fn tan_taylor(n: usize) -> Vec<Rational> {
    let mut t = vec![int(0); n + 1];
    for k in 0..n {
        let mut sq = if k == 0 { int(1) } else { int(0) };
        for i in 0..=k {
            sq += &t[i] * &t[k - i];
        }
        t[k + 1] = sq / int(k as i64 + 1);
    }
    t
}

/// Exact Taylor coefficients of tanh through degree `n`.
fn tanh_taylor(n: usize) -> Vec<Rational> {
    let mut t = vec![int(0); n + 1];
    for k in 0..n {
        let mut sq = if k == 0 { int(1) } else { int(0) };
        for i in 0..=k {
            sq -= &t[i] * &t[k - i];
        }
        t[k + 1] = sq / int(k as i64 + 1);
    }
    t
}

fn grid(sys: &AlgSystem, bind: &[(&str, Rational)], points: Vec<Rational>) -> EvalGrid {
    EvalGrid {
        bindings: bind.iter().map(|(n, v)| (sym(sys, n), v.clone())).collect(),
        points: points.into_iter().map(|p| vec![p]).collect(),
        precision: Precision::Float,
    }
}

fn half_unit_grid() -> Vec<Rational> {
    (-10..=10).map(|i| frac(i, 20)).collect()
}

fn timed(limit: Duration, start: Instant) -> Result<String, String> {
    let took = start.elapsed();
    ensure(took < limit, format!("took {took:?}, limit {limit:?}"))?;
    Ok(format!("{:.2}s", took.as_secs_f64()))
}

fn criterion1() -> Check {
    let start = Instant::now();
    let (sys, r) = setup("burgers-stationary")?;
    let seeds: Vec<_> = sys.seeds.iter().map(|s| sys.name(*s)).collect();
    ensure(seeds == ["a_0", "a_1"], format!("seeds {seeds:?}"))?;
    let table = [
        ("a_2", "a_0*a_1/(2*nu)"),
        ("a_3", "(a_0^2*a_1 + nu*a_1^2)/(6*nu^2)"),
        ("a_4", "(a_0^3*a_1 + 4*nu*a_0*a_1^2)/(24*nu^3)"),
        ("a_5", "(a_0^4*a_1 + 11*nu*a_0^2*a_1^2 + 4*nu^2*a_1^3)/(120*nu^4)"),
        ("a_6", "(a_0^5*a_1 + 26*nu*a_0^3*a_1^2 + 34*nu^2*a_0*a_1^3)/(720*nu^5)"),
        ("a_7", "(a_0^6*a_1 + 57*nu*a_0^4*a_1^2 + 180*nu^2*a_0^2*a_1^3 + 34*nu^3*a_1^4)/(5040*nu^6)"),
        ("a_8", "(a_0^7*a_1 + 120*nu*a_0^5*a_1^2 + 768*nu^2*a_0^3*a_1^3 + 496*nu^3*a_0*a_1^4)/(40320*nu^7)"),
        (
            "a_9",
            "(a_0^8*a_1 + 247*nu*a_0^6*a_1^2 + 2904*nu^2*a_0^4*a_1^3 + 4288*nu^3*a_0^2*a_1^4 + 496*nu^4*a_1^5)/(362880*nu^8)",
        ),
        (
            "a_10",
            "(a_0^9*a_1 + 502*nu*a_0^7*a_1^2 + 10194*nu^2*a_0^5*a_1^3 + 28768*nu^3*a_0^3*a_1^4 + 11056*nu^4*a_0*a_1^5)/(3628800*nu^9)",
        ),
    ];
    for (name, expected) in table {
        expect_eq(&sys, &r, name, expected)?;
    }
    Ok(format!("a_2..a_10 equal the table ({})", timed(Duration::from_secs(5), start)?))
}

fn criterion2() -> Check {
    let start = Instant::now();
    let (sys, r) = setup("burgers-stationary")?;
    let b: BTreeMap<_, _> = [(sym(&sys, "a_0"), RationalFunction::zero())].into();
    let odd = specialize(&r, &b, &sys.table).map_err(|e| e.to_string())?;
    let table = [
        ("a_3", "a_1^2/(6*nu)"),
        ("a_5", "a_1^3/(30*nu^2)"),
        ("a_7", "17*a_1^4/(2520*nu^3)"),
        ("a_9", "31*a_1^5/(22680*nu^4)"),
    ];
    for (name, expected) in table {
        expect_eq(&sys, &odd, name, expected)?;
    }
    for name in ["a_2", "a_4", "a_6", "a_8", "a_10"] {
        ensure(value(&sys, &odd, name)?.is_zero(), format!("{name} is not zero"))?;
    }
    // independent oracle: sqrt(2 nu a1) tan(x sqrt(a1/(2 nu))) has coefficient
    // T_n a1^((n+1)/2) / (2 nu)^((n-1)/2) at odd n
    let t = tan_taylor(11);
    for n in [3usize, 5, 7, 9] {
        let text = format!(
            "({})*a_1^{}/(2*nu)^{}",
            t[n],
            (n + 1) / 2,
            (n - 1) / 2
        );
        expect_eq(&sys, &odd, &format!("a_{n}"), &text)?;
    }
    let oracle = OracleSpec::BurgersTan { a1: 1.0, nu: 1.0 };
    let g = grid(&sys, &[("a_0", int(0)), ("a_1", int(1)), ("nu", int(1))], half_unit_grid());
    let rep = compare(&sys, &odd, "U", &oracle, &g).map_err(|e| e.to_string())?;
    // a_10 vanishes, so the first omitted term is the degree-11 one
    let bound = to_f64(&t[11]) / 32.0 * 0.5f64.powi(11);
    ensure(
        rep.max_abs_error <= 2.0 * bound && rep.max_abs_error <= 1e-4,
        format!("max error {:e}, first omitted term {bound:e}", rep.max_abs_error),
    )?;
    Ok(format!(
        "odd coefficients exact, max |series - tan| = {:.3e} (omitted-term bound {bound:.3e}) ({})",
        rep.max_abs_error,
        timed(Duration::from_secs(1), start)?
    ))
}

fn criterion3() -> Check {
    let (sys, r) = setup("kdv")?;
    for e in [
        "6*a_0*a_1 + 6*k^2*a_3 = c*a_1",
        "6*a_1^2 + 24*k^2*a_4 + 12*a_0*a_2 = 2*c*a_2",
        "60*k^2*a_5 + 18*a_0*a_3 + 18*a_1*a_2 = 3*c*a_3",
        "30*k^2*a_6 + 6*a_0*a_4 + 3*a_2^2 + 6*a_1*a_3 = c*a_4",
        "210*k^2*a_7 + 30*a_0*a_5 + 30*a_1*a_4 + 30*a_2*a_3 = 5*c*a_5",
    ] {
        ensure(system_has(&sys, e), format!("missing equation {e}"))?;
    }
    expect_eq(&sys, &r, "a_3", "-(6*a_0*a_1 - c*a_1)/(6*k^2)")?;
    expect_eq(&sys, &r, "a_4", "-(6*a_0*a_2 - c*a_2 + 3*a_1^2)/(12*k^2)")?;
    expect_eq(&sys, &r, "a_5", "(36*a_0^2*a_1 - 12*c*a_0*a_1 + c^2*a_1 - 36*k^2*a_1*a_2)/(120*k^4)")?;
    expect_eq(
        &sys,
        &r,
        "a_6",
        "(36*a_0^2*a_2 - 12*c*a_0*a_2 + c^2*a_2 - 36*k^2*a_2^2 + 90*a_0*a_1^2 - 15*c*a_1^2)/(360*k^4)",
    )?;
    let rep = residual(&sys, &r).map_err(|e| e.to_string())?;
    ensure(rep.all_zero(), "kdv residual is not zero")?;

    // The reference a_7 and a_8 carry transcription errors; the solver values must
    // differ from them exactly by the documented corrections.
    let transcribed_a7 = "(-216*a_0^3*a_1 + 108*c*a_0^2*a_1 - 18*c^2*a_0*a_1 - 15*c*a_1^2 - 216*k^2*c*a_1*a_2 + c^3*a_1 + 1296*k^2*a_0*a_1*a_2 + 180*k^2*a_1^3)/(5040*k^6)";
    let fixed_a7 = "(-216*a_0^3*a_1 + 108*c*a_0^2*a_1 - 18*c^2*a_0*a_1 - 216*k^2*c*a_1*a_2 + c^3*a_1 + 1296*k^2*a_0*a_1*a_2 + 180*k^2*a_1^3)/(5040*k^6)";
    let transcribed_a8 = "-(216*a_0^3*a_2 - 108*c*a_0^2*a_2 + 18*c^2*a_0*a_2 + 63*c^2*a_1^2 - 216*k^2*c*a_1*a_2 - c^3*a_2 + 1296*k^2*a_0*a_2^2 - 1188*k^2*a_1^2*a_2^2 + 2268*a_0^2*a_1^2 - 756*a_0*a_1^2)/(20160*k^6)";
    let fixed_a8 = "-(216*a_0^3*a_2 - 108*c*a_0^2*a_2 + 18*c^2*a_0*a_2 + 63*c^2*a_1^2 + 216*k^2*c*a_2^2 - c^3*a_2 - 1296*k^2*a_0*a_2^2 - 1188*k^2*a_1^2*a_2 + 2268*a_0^2*a_1^2 - 756*c*a_0*a_1^2)/(20160*k^6)";
    for (name, transcribed, fixed) in [("a_7", transcribed_a7, fixed_a7), ("a_8", transcribed_a8, fixed_a8)] {
        expect_eq(&sys, &r, name, fixed)?;
        ensure(
            !ratfunc_equal(&value(&sys, &r, name)?, &rf(&sys, transcribed)),
            format!("{name}: transcribed form unexpectedly correct"),
        )?;
    }

    let b: BTreeMap<_, _> = [(sym(&sys, "a_1"), RationalFunction::zero())].into();
    let even = specialize(&r, &b, &sys.table).map_err(|e| e.to_string())?;
    expect_eq(&sys, &even, "a_4", "-(6*a_0*a_2 - c*a_2)/(12*k^2)")?;
    expect_eq(&sys, &even, "a_6", "(36*a_0^2*a_2 - 12*c*a_0*a_2 - 36*a_2^2*k^2 + a_2*c^2)/(360*k^4)")?;
    expect_eq(
        &sys,
        &even,
        "a_8",
        "-(216*a_0^3*a_2 - 108*c*a_0^2*a_2 - 1296*a_0*a_2^2*k^2 + 18*c^2*a_0*a_2 + 216*c*a_2^2*k^2 - c^3*a_2)/(20160*k^6)",
    )?;

    // soliton: (1/2) sech^2(z/2) = (1/2)(1 - tanh^2(z/2)) at c = k = 1
    let th: Vec<Rational> = tanh_taylor(8)
        .iter()
        .enumerate()
        .map(|(n, t)| t / num_traits::pow(int(2), n))
        .collect();
    let mut sech = vec![int(0); 9];
    for i in 0..=8 {
        for j in 0..=8 - i {
            sech[i + j] -= &th[i] * &th[j];
        }
    }
    sech[0] += int(1);
    let soliton: Vec<Rational> = sech.iter().map(|s| s / int(2)).collect();
    let seeds = [("a_0", frac(1, 2)), ("a_1", int(0)), ("a_2", frac(-1, 8)), ("c", int(1)), ("k", int(1))];
    let b: BTreeMap<_, _> = seeds
        .iter()
        .map(|(n, v)| (sym(&sys, n), RationalFunction::constant(v.clone())))
        .collect();
    let sol = specialize(&r, &b, &sys.table).map_err(|e| e.to_string())?;
    ensure(soliton[0] == frac(1, 2) && soliton[2] == frac(-1, 8), "soliton seeds")?;
    ensure(soliton[4] == frac(1, 48), "soliton a_4 is not c^3/48")?;
    for n in 3..=8 {
        let got = value(&sys, &sol, &format!("a_{n}"))?;
        ensure(
            got.as_constant() == Some(soliton[n].clone()),
            format!("a_{n} = {} but sech^2 gives {}", got.to_text(&sys.table), soliton[n]),
        )?;
    }
    let oracle = OracleSpec::KdvSech { c: 1.0, k: 1.0 };
    let g = grid(&sys, &seeds, half_unit_grid());
    let rep = compare(&sys, &r, "U", &oracle, &g).map_err(|e| e.to_string())?;
    ensure(rep.max_abs_error <= 1e-4, format!("sech max error {:e}", rep.max_abs_error))?;
    Ok(format!(
        "a_3..a_6 exact, a_7/a_8 residual-verified with documented corrections, even branch and sech^2 through degree 8, max error {:.3e}",
        rep.max_abs_error
    ))
}

fn criterion4() -> Check {
    let (sys, r) = setup("burgers-xt")?;
    let listed = [
        "2*nu*a_2_0 = a_0_1 + a_0_0*a_1_0",
        "6*nu*a_3_0 = a_1_0^2 + a_1_1 + 2*a_0_0*a_2_0",
        "2*nu*a_2_1 = 2*a_0_2 + a_0_1*a_1_0 + a_0_0*a_1_1",
        "3*nu*a_3_1 = a_1_0*a_1_1 + a_1_2 + a_0_1*a_2_0 + a_0_0*a_2_1",
        "2*nu*a_2_2 = 3*a_0_3 + a_0_2*a_1_0 + a_0_1*a_1_1 + a_0_0*a_1_2",
        "6*nu*a_3_2 = 2*a_1_0*a_1_2 + 2*a_0_1*a_2_1 + a_1_1^2 + 3*a_1_3 + 2*a_0_2*a_2_0 + 2*a_0_0*a_2_2",
        "-3*a_1_0*a_2_1 - 2*a_2_2 - 3*a_0_1*a_3_0 - 3*a_0_0*a_3_1 - 3*a_1_1*a_2_0 = 0",
        "-a_1_0*a_2_2 - a_1_1*a_2_1 - a_1_2*a_2_0 - a_2_3 - a_0_2*a_3_0 - a_0_1*a_3_1 - a_0_0*a_3_2 = 0",
        "6*nu*a_3_3 = 2*a_1_0*a_1_3 + 2*a_0_2*a_2_1 + 2*a_1_1*a_1_2 + 2*a_0_3*a_2_0 + 2*a_0_1*a_2_2 + 2*a_0_0*a_2_3",
        "2*nu*a_2_3 = a_0_3*a_1_0 + a_0_2*a_1_1 + a_0_1*a_1_2 + a_0_0*a_1_3",
    ];
    for e in listed {
        ensure(system_has(&sys, e), format!("missing equation {e}"))?;
    }
    // two transcribed equations are not coefficient matchings; the derived ones are
    for (transcribed, derived) in [
        ("-a_1_0*a_2_0 - a_2_1 - a_0_0*a_3_0 = 0", "a_2_1 + 3*a_0_0*a_3_0 + 3*a_1_0*a_2_0 = 0"),
        ("-2*a_2_0^2 - a_3_1 = 0", "a_3_1 + 4*a_1_0*a_3_0 + 2*a_2_0^2 = 0"),
    ] {
        ensure(!system_has(&sys, transcribed), format!("transcribed {transcribed} unexpectedly present"))?;
        ensure(system_has(&sys, derived), format!("missing derived {derived}"))?;
    }
    ensure(sys.equations.len() == 12, format!("{} equations", sys.equations.len()))?;
    let seeds: BTreeSet<_> = sys.seeds.iter().map(|s| sys.name(*s)).collect();
    ensure(seeds == BTreeSet::from(["a_0_0", "a_0_1", "a_1_0", "a_1_1"]), format!("seeds {seeds:?}"))?;
    ensure(r.is_resolved() && r.assignments.len() == 12, "not all 12 unknowns resolved")?;
    ensure(residual(&sys, &r).map_err(|e| e.to_string())?.all_zero(), "residual not zero")?;
    expect_eq(&sys, &r, "a_2_0", "(a_0_1 + a_0_0*a_1_0)/(2*nu)")?;
    expect_eq(&sys, &r, "a_3_0", "(a_0_0^2*a_1_0 + a_0_1*a_0_0 + nu*a_1_0^2 + nu*a_1_1)/(6*nu^2)")?;
    let a00 = sym(&sys, "a_0_0");
    let assumed = r.assumptions.iter().any(|a| a.as_polynomial() == Some(Polynomial::var(a00)));
    ensure(assumed, "a_0_0 != 0 is not assumed")?;
    let divides: BTreeSet<_> = r
        .assignments
        .iter()
        .filter(|(_, v)| v.denom().contains(a00))
        .map(|(s, _)| sys.name(*s))
        .collect();
    ensure(
        divides == BTreeSet::from(["a_1_3", "a_3_2", "a_3_3"]),
        format!("a_0_0 divides {divides:?}"),
    )?;
    Ok("12 equations (2 transcribed with documented errors), 12 unknowns, residual zero, a_0_0 assumption matches".into())
}

fn criterion5() -> Check {
    let start = Instant::now();
    let full = expand_pde(&builtin("coupled-kdv-full").map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let sum = |coef: u32, n: usize| {
        (0..=n)
            .map(|i| format!("{coef}*b_{i}*c_{}", n - i))
            .collect::<Vec<_>>()
            .join(" + ")
    };
    let listed = [
        format!("3*a_0*a_1 = c*a_1 + {} + 3*a_3*k^2", sum(3, 1)),
        format!("3*a_1^2 + 6*a_0*a_2 = 12*a_4*k^2 + 2*c*a_2 + {}", sum(6, 2)),
        format!("9*a_0*a_3 + 9*a_1*a_2 = 30*a_5*k^2 + 3*c*a_3 + {}", sum(9, 3)),
        format!("6*a_2^2 + 12*a_0*a_4 + 12*a_1*a_3 = 60*k^2*a_6 + 4*c*a_4 + {}", sum(12, 4)),
        format!("15*a_0*a_5 + 15*a_1*a_4 + 15*a_2*a_3 = 105*k^2*a_7 + 5*c*a_5 + {}", sum(15, 5)),
        format!(
            "9*a_3^2 + 18*a_0*a_6 + 18*a_1*a_5 + 18*a_2*a_4 = 168*k^2*a_8 + 6*c*a_6 + {}",
            sum(18, 6)
        ),
        "6*k^2*b_3 = c*b_1 + 3*a_0*b_1".into(),
        "24*k^2*b_4 = 6*a_0*b_2 + 3*a_1*b_1 + 2*c*b_2".into(),
        "60*k^2*b_5 = 9*a_0*b_3 + 6*a_1*b_2 + 3*a_2*b_1 + 3*c*b_3".into(),
        "120*k^2*b_6 = 12*a_0*b_4 + 9*a_1*b_3 + 6*a_2*b_2 + 3*a_3*b_1 + 4*c*b_4".into(),
        "210*k^2*b_7 = 15*a_0*b_5 + 12*a_1*b_4 + 9*a_2*b_3 + 6*a_3*b_2 + 3*a_4*b_1 + 5*c*b_5".into(),
        "336*k^2*b_8 = 18*a_0*b_6 + 15*a_1*b_5 + 12*a_2*b_4 + 9*a_3*b_3 + 6*a_4*b_2 + 3*a_5*b_1 + 6*c*b_6".into(),
        "6*a_0*c_1 + 6*c_3*k^2 = c*c_1".into(),
        "24*k^2*c_4 + 6*a_1*c_1 + 12*a_0*c_2 = 2*c*c_2".into(),
        "60*k^2*c_5 + 18*a_0*c_3 + 12*a_1*c_2 + 6*a_2*c_1 = 3*c*c_3".into(),
        "120*k^2*c_6 + 24*a_0*c_4 + 18*a_1*c_3 + 12*a_2*c_2 + 6*a_3*c_1 = 4*c*c_4".into(),
        "210*k^2*c_7 + 30*a_0*c_5 + 24*a_1*c_4 + 18*a_2*c_3 + 12*a_3*c_2 + 6*a_4*c_1 = 5*c*c_5".into(),
        "336*k^2*c_8 + 36*a_0*c_6 + 30*a_1*c_5 + 24*a_2*c_4 + 18*a_3*c_3 + 12*a_4*c_2 + 6*a_5*c_1 = 6*c*c_6".into(),
    ];
    for e in &listed {
        ensure(system_has(&full, e), format!("missing equation {e}"))?;
    }
    let (sys, r) = setup("coupled-kdv")?;
    ensure(sys.unknowns.len() == 15 && sys.equations.len() == 15, "not a 15x15 system")?;
    ensure(r.is_resolved() && r.assignments.len() == 15, "15 unknowns not resolved")?;
    expect_eq(&sys, &r, "b_3", "(3*a_0*b_1 + c*b_1)/(6*k^2)")?;
    expect_eq(&sys, &r, "b_4", "(6*a_0*b_2 + 3*a_1*b_1 + 2*c*b_2)/(24*k^2)")?;
    expect_eq(&sys, &r, "c_3", "-(6*a_0*c_1 - c*c_1)/(6*k^2)")?;
    expect_eq(&sys, &r, "c_4", "-(6*a_0*c_2 + 3*a_1*c_1 - c*c_2)/(12*k^2)")?;
    ensure(residual(&sys, &r).map_err(|e| e.to_string())?.all_zero(), "residual not zero")?;
    Ok(format!(
        "18 listed equations reproduced, 15x15 solved, b_3 b_4 c_3 c_4 exact, residual zero ({})",
        timed(Duration::from_secs(30), start)?
    ))
}

fn criterion6() -> Check {
    let sys = expand_pde(&builtin("boundary-layer").map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let fixture = include_str!("../fixtures/boundary-layer-closed-form.json");
    let cand = parse_candidate(fixture, &sys.table).map_err(|e| e.to_string())?;
    let rep = residual_of(&sys, &cand).map_err(|e| e.to_string())?;
    ensure(rep.entries.len() == 9 && rep.all_zero(), "fixture does not zero the system")?;
    for (s, v) in &cand {
        let mut bad = cand.clone();
        let perturbed = if v.is_zero() {
            RationalFunction::one()
        } else {
            v.scale(&int(2))
        };
        bad.insert(*s, perturbed);
        let rep = residual_of(&sys, &bad).map_err(|e| e.to_string())?;
        let failing: BTreeSet<(usize, Exponents)> = rep
            .nonzero()
            .map(|e| (e.equation, Exponents(e.monomial.clone())))
            .collect();
        let touching: BTreeSet<(usize, Exponents)> = sys
            .equations
            .iter()
            .filter(|e| e.poly.contains(*s))
            .map(|e| (e.eq_index, e.monomial.clone()))
            .collect();
        ensure(
            !failing.is_empty() && failing.is_subset(&touching),
            format!("perturbing {} gave {failing:?}", sys.name(*s)),
        )?;
    }
    // the tenth listed equation (n=1, m=3) is not satisfied by the closed forms
    let mut p = builtin("boundary-layer").map_err(|e| e.to_string())?;
    if let Some(MatchSpec::Explicit(set)) = &mut p.match_bound {
        set.insert(Exponents(vec![1, 3]));
    }
    let sys10 = expand_pde(&p).map_err(|e| e.to_string())?;
    let cand10 = parse_candidate(fixture, &sys10.table).map_err(|e| e.to_string())?;
    let rep10 = residual_of(&sys10, &cand10).map_err(|e| e.to_string())?;
    let bad: Vec<_> = rep10.nonzero().collect();
    ensure(bad.len() == 1 && bad[0].monomial == [1, 3], "expected a single (1,3) residual")?;
    Ok(format!(
        "fixture zeroes all 9 equations; every single-coefficient perturbation is detected; excluded (1,3) residual {}",
        bad[0].residual.as_deref().unwrap_or("0")
    ))
}

fn run_props<S: Strategy>(
    cases: u32,
    strategy: S,
    check: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    let mut runner = TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    runner.run(&strategy, check).map_err(|e| e.to_string())
}

fn criterion7() -> Check {
    use common::*;
    run_props(1000, (dense2(4), dense2(4), 0u32..=8), |(a, b, n)| check_convolution(&a, &b, n))?;
    run_props(200, (dense2(4), dense2(4), 1u32..=6, 0usize..2), |(a, b, n, v)| {
        check_leibniz(&a, &b, n, ["x", "y"][v])
    })?;
    run_props(200, (dense2(6), 1u32..=3, 1u32..=3), |(a, p, q)| check_mixed_partials(&a, p, q))?;
    let coeffs = || prop::collection::vec(-5i64..=5, 6);
    run_props(200, (coeffs(), coeffs(), any::<bool>(), any::<bool>()), |(a, b, pa, pb)| {
        check_parity_closure(&a, &b, pa, pb)
    })?;
    for name in ["burgers-stationary", "burgers-xt", "kdv", "coupled-kdv"] {
        let (sys, r) = setup(name)?;
        let rep = residual(&sys, &r).map_err(|e| e.to_string())?;
        ensure(rep.all_zero(), format!("{name}: residual not zero"))?;
        let json = solve_report(&sys, &r).to_json();
        let (sys2, r2) = setup(name)?;
        ensure(json == solve_report(&sys2, &r2).to_json(), format!("{name}: JSON differs between runs"))?;
    }
    Ok("1000 convolution cases, Leibniz, mixed partials, parity closure, soundness and JSON determinism on 4 built-ins".into())
}

fn criterion8() -> Check {
    let tf = TimeFactor { alpha: 1.0, beta: 1.0, c: 1.0 };
    let h = 1e-5;
    let mut worst = 0.0f64;
    for i in 0..=100 {
        let t = f64::from(i) / 100.0;
        let a = tf.value(t).map_err(|e| e.to_string())?;
        let d = (tf.value(t + h).map_err(|e| e.to_string())? - tf.value(t - h).map_err(|e| e.to_string())?)
            / (2.0 * h);
        worst = worst.max((d - (tf.alpha * a - tf.beta * a * a)).abs());
    }
    ensure(worst <= 1e-8, format!("Bernoulli defect {worst:e}"))?;
    Ok(format!("max |a' - (alpha a - beta a^2)| = {worst:.2e} on t in [0,1]"))
}

fn main() {
    let criteria: [(u32, fn() -> Check); 8] = [
        (1, criterion1),
        (2, criterion2),
        (3, criterion3),
        (4, criterion4),
        (5, criterion5),
        (6, criterion6),
        (7, criterion7),
        (8, criterion8),
    ];
    let mut failed = 0;
    for (n, f) in criteria {
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(msg) => println!("criterion {n}: PASS - {msg}"),
            Err(msg) => {
                failed += 1;
                println!("criterion {n}: FAIL - {msg}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all 8 acceptance criteria passed");
}
