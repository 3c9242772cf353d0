use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};

/// Exponent vector; its length equals the number of ring variables.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        let mut e = vec![0; nvars];
        e[index] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(b, a)| b - a).collect())
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// A monomial order. All variants break ties by the variable order of the
/// ring (earlier variables are larger).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MonomialOrder {
    /// Graded reverse lexicographic.
    Grevlex,
    /// Pure lexicographic.
    Lex,
    /// Grevlex on the first `split` variables, ties broken by grevlex on the rest.
    Block { split: usize },
    /// Weighted degree first, then grevlex. Weights must be positive.
    Weighted(Arc<[u32]>),
}

impl Serialize for MonomialOrder {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl fmt::Display for MonomialOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MonomialOrder::Grevlex => f.write_str("grevlex"),
            MonomialOrder::Lex => f.write_str("lex"),
            MonomialOrder::Block { split } => write!(f, "block({split})"),
            MonomialOrder::Weighted(w) => {
                let w: Vec<String> = w.iter().map(u32::to_string).collect();
                write!(f, "weighted({})", w.join(","))
            }
        }
    }
}

fn grevlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| revlex(a, b))
}

/// Among equal degrees, the monomial with the smaller exponent in the last
/// differing variable is larger.
fn revlex(a: &[u32], b: &[u32]) -> Ordering {
    for (x, y) in a.iter().zip(b).rev() {
        if x != y {
            return y.cmp(x);
        }
    }
    Ordering::Equal
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        let (a, b) = (a.exponents(), b.exponents());
        match self {
            MonomialOrder::Grevlex => grevlex(a, b),
            MonomialOrder::Lex => a.cmp(b),
            MonomialOrder::Block { split } => {
                let s = (*split).min(a.len());
                grevlex(&a[..s], &b[..s]).then_with(|| grevlex(&a[s..], &b[s..]))
            }
            MonomialOrder::Weighted(w) => {
                let wa: u64 = a
                    .iter()
                    .zip(w.iter())
                    .map(|(e, w)| *e as u64 * *w as u64)
                    .sum();
                let wb: u64 = b
                    .iter()
                    .zip(w.iter())
                    .map(|(e, w)| *e as u64 * *w as u64)
                    .sum();
                wa.cmp(&wb).then_with(|| grevlex(a, b))
            }
        }
    }

    /// The degree used by the normal pair-selection strategy.
    pub fn sugar_degree(&self, m: &Monomial) -> u64 {
        match self {
            MonomialOrder::Weighted(w) => m
                .exponents()
                .iter()
                .zip(w.iter())
                .map(|(e, w)| *e as u64 * *w as u64)
                .sum(),
            _ => m.degree() as u64,
        }
    }

    /// The order for a ring with `extra` variables appended after `nvars`
    /// existing ones. Appended variables get weight 1 / land in the last block.
    pub fn extend(&self, nvars: usize, extra: usize) -> MonomialOrder {
        match self {
            MonomialOrder::Weighted(w) => {
                let mut w: Vec<u32> = w.iter().copied().collect();
                w.resize(nvars, 1);
                w.extend(std::iter::repeat_n(1, extra));
                MonomialOrder::Weighted(w.into())
            }
            other => other.clone(),
        }
    }

    /// The order for the disjoint union of two variable lists.
    pub fn concat(&self, n_self: usize, other: &MonomialOrder, n_other: usize) -> MonomialOrder {
        match (self, other) {
            (MonomialOrder::Weighted(_), _) | (_, MonomialOrder::Weighted(_)) => {
                let mut w = self.weights(n_self);
                w.extend(other.weights(n_other));
                MonomialOrder::Weighted(w.into())
            }
            (MonomialOrder::Lex, MonomialOrder::Lex) => MonomialOrder::Lex,
            _ => MonomialOrder::Grevlex,
        }
    }

    fn weights(&self, n: usize) -> Vec<u32> {
        match self {
            MonomialOrder::Weighted(w) => {
                let mut w: Vec<u32> = w.iter().copied().collect();
                w.resize(n, 1);
                w
            }
            _ => vec![1; n],
        }
    }
}
