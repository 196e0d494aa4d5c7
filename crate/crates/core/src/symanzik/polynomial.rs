use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::edgeset::EdgeSubset;
use crate::rational::format_rational;
use crate::Rational;

/// Homogeneous multilinear polynomial in the edge variables: each term is a
/// support set `S` (monomial `prod_{e in S} y_e`) with a rational coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymanzikPolynomial {
    m: usize,
    degree: usize,
    terms: BTreeMap<EdgeSubset, Rational>,
}

impl SymanzikPolynomial {
    /// Collects terms, summing repeated supports and dropping zeros.
    ///
    /// # Panics
    /// If a support does not have `degree` elements or mentions an edge `>= m`.
    pub fn from_terms<I>(m: usize, degree: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (EdgeSubset, Rational)>,
    {
        let full = EdgeSubset::full(m);
        let mut map: BTreeMap<EdgeSubset, Rational> = BTreeMap::new();
        for (s, c) in terms {
            assert_eq!(s.len(), degree, "support {s} has wrong degree");
            assert!(s.is_subset(full), "support {s} outside 0..{m}");
            *map.entry(s).or_insert_with(Rational::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        SymanzikPolynomial {
            m,
            degree,
            terms: map,
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<EdgeSubset, Rational> {
        &self.terms
    }

    pub fn coefficient(&self, s: EdgeSubset) -> Rational {
        self.terms.get(&s).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Exact value at `y`. Works over a common denominator so the inner loop
    /// is integer multiply-add.
    pub fn evaluate(&self, y: &[Rational]) -> Rational {
        assert_eq!(y.len(), self.m, "weight vector length");
        if self.terms.is_empty() {
            return Rational::zero();
        }
        let y_den = y.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let y_num: Vec<BigInt> = y.iter().map(|v| v.numer() * (&y_den / v.denom())).collect();
        let c_den = self
            .terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut total = BigInt::zero();
        for (s, c) in &self.terms {
            let mut term = c.numer() * (&c_den / c.denom());
            for e in *s {
                term *= &y_num[e];
            }
            total += term;
        }
        let den = c_den * num_traits::pow(y_den, self.degree);
        Rational::new(total, den)
    }
}

impl Serialize for SymanzikPolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term {
            edges: EdgeSubset,
            coeff: String,
        }
        let terms: Vec<Term> = self
            .terms
            .iter()
            .map(|(s, c)| Term {
                edges: *s,
                coeff: format_rational(c),
            })
            .collect();
        let mut st = serializer.serialize_struct("SymanzikPolynomial", 2)?;
        st.serialize_field("degree", &self.degree)?;
        st.serialize_field("terms", &terms)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{integer, ratio};
    use proptest::prelude::*;

    fn set(ids: &[usize]) -> EdgeSubset {
        ids.iter().copied().collect()
    }

    #[test]
    fn merges_and_drops_zero_terms() {
        let p = SymanzikPolynomial::from_terms(
            3,
            1,
            [
                (set(&[0]), integer(2)),
                (set(&[0]), integer(-2)),
                (set(&[2]), ratio(1, 3)),
            ],
        );
        assert_eq!(p.len(), 1);
        assert_eq!(p.coefficient(set(&[2])), ratio(1, 3));
        assert_eq!(p.coefficient(set(&[0])), integer(0));
    }

    #[test]
    fn constant_polynomial() {
        let p = SymanzikPolynomial::from_terms(1, 0, [(EdgeSubset::EMPTY, integer(1))]);
        assert_eq!(p.evaluate(&[ratio(7, 3)]), integer(1));
    }

    proptest! {
        #[test]
        fn fast_evaluation_matches_naive(
            coeffs in proptest::collection::vec((-20i64..20, 1i64..7), 6),
            ys in proptest::collection::vec((1i64..50, 1i64..9), 4),
        ) {
            let supports = [set(&[0, 1]), set(&[0, 2]), set(&[0, 3]), set(&[1, 2]), set(&[1, 3]), set(&[2, 3])];
            let p = SymanzikPolynomial::from_terms(
                4,
                2,
                supports.iter().zip(&coeffs).map(|(s, &(a, b))| (*s, ratio(a, b))),
            );
            let y: Vec<Rational> = ys.iter().map(|&(a, b)| ratio(a, b)).collect();
            let naive: Rational = p
                .terms()
                .iter()
                .map(|(s, c)| s.iter().fold(c.clone(), |acc, e| acc * &y[e]))
                .sum();
            prop_assert_eq!(p.evaluate(&y), naive);
        }
    }
}
