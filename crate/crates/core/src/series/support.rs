use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::SeriesError;

/// Exponent vector over the independent variables of a series.
///
/// Ordered graded-lex: by total degree first, then by larger exponent in an
/// earlier variable first. So for `[x, y]`: 1, x, y, x^2, x*y, y^2, ...
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Exponents(pub Vec<u32>);

impl Exponents {
    pub fn zero(n: usize) -> Self {
        Exponents(vec![0; n])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add(&self, other: &Exponents) -> Exponents {
        Exponents(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn checked_sub(&self, other: &Exponents) -> Option<Exponents> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Exponents)
    }

    /// Every exponent vector in `n` variables with total degree `<= d`, in
    /// graded-lex order.
    pub fn up_to_degree(n: usize, d: u32) -> Vec<Exponents> {
        let mut out = Vec::new();
        for deg in 0..=d {
            let mut cur = vec![0u32; n];
            fill(&mut cur, 0, deg, &mut out);
        }
        out
    }
}

fn fill(cur: &mut Vec<u32>, i: usize, left: u32, out: &mut Vec<Exponents>) {
    if i + 1 == cur.len() {
        cur[i] = left;
        out.push(Exponents(cur.clone()));
        return;
    }
    if cur.is_empty() {
        if left == 0 {
            out.push(Exponents(Vec::new()));
        }
        return;
    }
    for e in (0..=left).rev() {
        cur[i] = e;
        fill(cur, i + 1, left - e, out);
    }
    cur[i] = 0;
}

impl Ord for Exponents {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Exponents {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Exponents {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

impl From<Vec<u32>> for Exponents {
    fn from(v: Vec<u32>) -> Self {
        Exponents(v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
    Any,
}

impl Parity {
    pub fn admits(self, e: u32) -> bool {
        match self {
            Parity::Even => e % 2 == 0,
            Parity::Odd => e % 2 == 1,
            Parity::Any => true,
        }
    }

    pub fn flip(self, order: u32) -> Parity {
        match (self, order % 2) {
            (p, 0) | (p @ Parity::Any, _) => p,
            (Parity::Even, _) => Parity::Odd,
            (Parity::Odd, _) => Parity::Even,
        }
    }
}

/// Which exponent vectors a series may carry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SupportPolicy {
    TotalDegree { degree: u32 },
    Explicit { exponents: BTreeSet<Exponents> },
    Parity { parities: Vec<Parity>, degree: Option<u32> },
}

impl SupportPolicy {
    pub fn total_degree(degree: u32) -> Self {
        SupportPolicy::TotalDegree { degree }
    }

    pub fn explicit(exps: impl IntoIterator<Item = Vec<u32>>) -> Self {
        SupportPolicy::Explicit {
            exponents: exps.into_iter().map(Exponents).collect(),
        }
    }

    pub fn parity(parities: Vec<Parity>, degree: Option<u32>) -> Self {
        SupportPolicy::Parity { parities, degree }
    }

    pub fn admits(&self, e: &Exponents) -> bool {
        match self {
            SupportPolicy::TotalDegree { degree } => e.degree() <= *degree,
            SupportPolicy::Explicit { exponents } => exponents.contains(e),
            SupportPolicy::Parity { parities, degree } => {
                degree.map_or(true, |d| e.degree() <= d)
                    && parities.iter().zip(&e.0).all(|(p, x)| p.admits(*x))
            }
        }
    }

    /// Largest total degree admitted, `None` when unbounded.
    pub fn max_degree(&self) -> Option<u32> {
        match self {
            SupportPolicy::TotalDegree { degree } => Some(*degree),
            SupportPolicy::Explicit { exponents } => {
                Some(exponents.iter().map(Exponents::degree).max().unwrap_or(0))
            }
            SupportPolicy::Parity { degree, .. } => *degree,
        }
    }

    /// All admitted exponent vectors in graded-lex order.
    pub fn enumerate(&self, nvars: usize) -> Result<Vec<Exponents>, SeriesError> {
        match self {
            SupportPolicy::Explicit { exponents } => {
                if let Some(bad) = exponents.iter().find(|e| e.len() != nvars) {
                    return Err(SeriesError::ArityMismatch {
                        expected: nvars,
                        found: bad.len(),
                    });
                }
                Ok(exponents.iter().cloned().collect())
            }
            SupportPolicy::Parity { parities, .. } if parities.len() != nvars => {
                Err(SeriesError::ArityMismatch {
                    expected: nvars,
                    found: parities.len(),
                })
            }
            _ => {
                let d = self.max_degree().ok_or(SeriesError::UnboundedSupport)?;
                Ok(Exponents::up_to_degree(nvars, d)
                    .into_iter()
                    .filter(|e| self.admits(e))
                    .collect())
            }
        }
    }

    /// Support of the derivative of a series with this support.
    pub fn differentiate(&self, var: usize, order: u32) -> SupportPolicy {
        match self {
            SupportPolicy::TotalDegree { degree } => SupportPolicy::TotalDegree {
                degree: degree.saturating_sub(order),
            },
            SupportPolicy::Explicit { exponents } => SupportPolicy::Explicit {
                exponents: exponents
                    .iter()
                    .filter(|e| e.0[var] >= order)
                    .map(|e| {
                        let mut v = e.0.clone();
                        v[var] -= order;
                        Exponents(v)
                    })
                    .collect(),
            },
            SupportPolicy::Parity { parities, degree } => {
                let mut p = parities.clone();
                p[var] = p[var].flip(order);
                SupportPolicy::Parity {
                    parities: p,
                    degree: degree.map(|d| d.saturating_sub(order)),
                }
            }
        }
    }

    /// A policy admitting everything either side admits, possibly more.
    pub fn union(&self, other: &SupportPolicy) -> SupportPolicy {
        if self == other {
            return self.clone();
        }
        match (self, other) {
            (
                SupportPolicy::Explicit { exponents: a },
                SupportPolicy::Explicit { exponents: b },
            ) => SupportPolicy::Explicit {
                exponents: a.union(b).cloned().collect(),
            },
            (
                SupportPolicy::Parity { parities: pa, degree: da },
                SupportPolicy::Parity { parities: pb, degree: db },
            ) => SupportPolicy::Parity {
                parities: pa
                    .iter()
                    .zip(pb)
                    .map(|(a, b)| if a == b { *a } else { Parity::Any })
                    .collect(),
                degree: da.zip(*db).map(|(a, b)| a.max(b)),
            },
            _ => match (self.max_degree(), other.max_degree()) {
                (Some(a), Some(b)) => SupportPolicy::TotalDegree { degree: a.max(b) },
                _ => SupportPolicy::Parity {
                    parities: Vec::new(),
                    degree: None,
                },
            },
        }
    }
}
