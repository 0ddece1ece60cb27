//! Series-algebra checks shared by the property tests and the acceptance run.

#![allow(dead_code)]

use std::collections::BTreeMap;

use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use pssm_core::exact::{Rational, RationalFunction};
use pssm_core::series::{
    coefficient, series_add, series_diff, series_mul, Exponents, Parity, SupportPolicy,
    TruncSeries,
};

pub type Dense = BTreeMap<(u32, u32), i64>;

fn vars2() -> Vec<String> {
    vec!["x".into(), "y".into()]
}

pub fn dense2(max_deg: u32) -> impl Strategy<Value = Dense> {
    let mut keys = Vec::new();
    for i in 0..=max_deg {
        for j in 0..=max_deg - i {
            keys.push((i, j));
        }
    }
    prop::collection::vec(-5i64..=5, keys.len())
        .prop_map(move |vals| keys.iter().cloned().zip(vals).filter(|(_, v)| *v != 0).collect())
}

pub fn to_series(d: &Dense, deg: u32) -> TruncSeries {
    TruncSeries::from_terms(
        &vars2(),
        SupportPolicy::total_degree(deg),
        d.iter().map(|(&(i, j), &v)| {
            (
                Exponents(vec![i, j]),
                RationalFunction::constant(Rational::from_integer(v.into())),
            )
        }),
    )
    .unwrap()
}

fn coeff_i64(s: &TruncSeries, i: u32, j: u32) -> i64 {
    let c = coefficient(s, &Exponents(vec![i, j])).as_constant().unwrap();
    assert!(c.is_integer());
    c.to_integer().try_into().unwrap()
}

/// Truncated product against the full convolution of two degree-4 series.
pub fn check_convolution(a: &Dense, b: &Dense, bound: u32) -> Result<(), TestCaseError> {
    let mut full: Dense = BTreeMap::new();
    for (&(i1, j1), &v1) in a {
        for (&(i2, j2), &v2) in b {
            *full.entry((i1 + i2, j1 + j2)).or_default() += v1 * v2;
        }
    }
    let p = series_mul(&to_series(a, 4), &to_series(b, 4), bound).unwrap();
    for i in 0..=8 {
        for j in 0..=8 - i {
            let want = if i + j <= bound { full.get(&(i, j)).copied().unwrap_or(0) } else { 0 };
            prop_assert_eq!(coeff_i64(&p, i, j), want);
        }
    }
    Ok(())
}

pub fn check_leibniz(a: &Dense, b: &Dense, n: u32, v: &str) -> Result<(), TestCaseError> {
    let (sa, sb) = (to_series(a, 4), to_series(b, 4));
    let lhs = series_diff(&series_mul(&sa, &sb, n).unwrap(), v, 1).unwrap();
    let r1 = series_mul(&series_diff(&sa, v, 1).unwrap(), &sb, n - 1).unwrap();
    let r2 = series_mul(&sa, &series_diff(&sb, v, 1).unwrap(), n - 1).unwrap();
    let rhs = series_add(&r1, &r2).unwrap();
    for e in Exponents::up_to_degree(2, n - 1) {
        prop_assert_eq!(coefficient(&lhs, &e), coefficient(&rhs, &e));
    }
    Ok(())
}

pub fn check_mixed_partials(a: &Dense, p: u32, q: u32) -> Result<(), TestCaseError> {
    let s = to_series(a, 6);
    let xy = series_diff(&series_diff(&s, "x", p).unwrap(), "y", q).unwrap();
    let yx = series_diff(&series_diff(&s, "y", q).unwrap(), "x", p).unwrap();
    prop_assert_eq!(xy.len(), yx.len());
    for (e, c) in xy.terms() {
        prop_assert_eq!(c, &coefficient(&yx, e));
    }
    Ok(())
}

pub fn check_parity_closure(a: &[i64], b: &[i64], pa: bool, pb: bool) -> Result<(), TestCaseError> {
    let build = |vals: &[i64], odd: bool| {
        let par = if odd { Parity::Odd } else { Parity::Even };
        TruncSeries::from_terms(
            &["z".to_string()],
            SupportPolicy::parity(vec![par], Some(11)),
            vals.iter().enumerate().map(|(k, &v)| {
                let e = 2 * k as u32 + odd as u32;
                (Exponents(vec![e]), RationalFunction::constant(Rational::from_integer(v.into())))
            }),
        )
        .unwrap()
    };
    let prod = series_mul(&build(a, pa), &build(b, pb), 20).unwrap();
    let want_odd = pa != pb;
    for (e, _) in prod.terms() {
        prop_assert_eq!(e.0[0] % 2 == 1, want_odd);
    }
    let want = SupportPolicy::parity(
        vec![if want_odd { Parity::Odd } else { Parity::Even }],
        Some(20),
    );
    prop_assert_eq!(prod.support(), &want);
    Ok(())
}
