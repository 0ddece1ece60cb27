use std::cmp::Ordering;

use super::Symbol;

/// Power product of symbols, stored sparsely as `(symbol, exponent)` pairs
/// sorted by symbol with every exponent positive.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<(Symbol, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(sym: Symbol) -> Self {
        Monomial(vec![(sym, 1)])
    }

    pub fn from_pairs(mut pairs: Vec<(Symbol, u32)>) -> Self {
        pairs.sort_by_key(|&(s, _)| s);
        let mut out: Vec<(Symbol, u32)> = Vec::with_capacity(pairs.len());
        for (s, e) in pairs {
            if e == 0 {
                continue;
            }
            match out.last_mut() {
                Some((ls, le)) if *ls == s => *le += e,
                _ => out.push((s, e)),
            }
        }
        Monomial(out)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent(&self, sym: Symbol) -> u32 {
        match self.0.binary_search_by_key(&sym, |&(s, _)| s) {
            Ok(i) => self.0[i].1,
            Err(_) => 0,
        }
    }

    pub fn factors(&self) -> &[(Symbol, u32)] {
        &self.0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        merge(&self.0, &other.0, |a, b| a + b)
    }

    pub fn pow(&self, e: u32) -> Monomial {
        if e == 0 {
            return Monomial::one();
        }
        Monomial(self.0.iter().map(|&(s, x)| (s, x * e)).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().all(|&(s, e)| other.exponent(s) >= e)
    }

    /// `self / other`, or `None` when `other` does not divide `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if !other.divides(self) {
            return None;
        }
        let mut out = Vec::with_capacity(self.0.len());
        for &(s, e) in &self.0 {
            let d = e - other.exponent(s);
            if d > 0 {
                out.push((s, d));
            }
        }
        Some(Monomial(out))
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::new();
        for &(s, e) in &self.0 {
            let f = other.exponent(s);
            if f > 0 {
                out.push((s, e.min(f)));
            }
        }
        Monomial(out)
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        merge(&self.0, &other.0, |a, b| a.max(b))
    }

    /// Removes `sym` and returns its exponent together with the cofactor.
    pub fn split_off(&self, sym: Symbol) -> (u32, Monomial) {
        let mut e = 0;
        let rest = self
            .0
            .iter()
            .filter(|&&(s, x)| {
                if s == sym {
                    e = x;
                    false
                } else {
                    true
                }
            })
            .copied()
            .collect();
        (e, Monomial(rest))
    }

    /// Every exponent even: returns the square root.
    pub fn sqrt(&self) -> Option<Monomial> {
        if self.0.iter().any(|&(_, e)| e % 2 != 0) {
            return None;
        }
        Some(Monomial(self.0.iter().map(|&(s, e)| (s, e / 2)).collect()))
    }
}

fn merge(a: &[(Symbol, u32)], b: &[(Symbol, u32)], f: impl Fn(u32, u32) -> u32) -> Monomial {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j >= b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push((a[i].0, f(a[i].1, 0)));
            i += 1;
        } else if i >= a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, f(0, b[j].1)));
            j += 1;
        } else {
            out.push((a[i].0, f(a[i].1, b[j].1)));
            i += 1;
            j += 1;
        }
    }
    out.retain(|&(_, e)| e > 0);
    Monomial(out)
}

/// Graded order with reverse-lexicographic tie-break: at equal total degree,
/// the monomial with the smaller exponent in the latest-created differing
/// symbol is the larger one.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (a.len(), b.len());
        while i > 0 || j > 0 {
            let sa = if i > 0 { Some(a[i - 1]) } else { None };
            let sb = if j > 0 { Some(b[j - 1]) } else { None };
            match (sa, sb) {
                (Some((s, e)), Some((t, f))) if s == t => {
                    if e != f {
                        return f.cmp(&e);
                    }
                    i -= 1;
                    j -= 1;
                }
                (Some((s, _)), Some((t, _))) if s > t => return Ordering::Less,
                (Some(_), Some(_)) => return Ordering::Greater,
                (Some(_), None) => return Ordering::Less,
                (None, Some(_)) => return Ordering::Greater,
                (None, None) => unreachable!(),
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
