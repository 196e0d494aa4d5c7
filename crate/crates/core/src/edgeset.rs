//! Edge subsets of a fixed multigraph, stored as a 64-bit mask.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Largest edge count an [`EdgeSubset`] can address.
pub const MAX_EDGES: usize = 64;

/// A set of edge ids `0..m` with `m <= 64`.
///
/// Ordering is lexicographic on the increasing member lists, so that
/// `{e0,e1} < {e0,e2} < {e1,e2}` and `{e0,e3} < {e1,e2}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct EdgeSubset(u64);

impl EdgeSubset {
    pub const EMPTY: EdgeSubset = EdgeSubset(0);

    pub fn from_bits(bits: u64) -> Self {
        EdgeSubset(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    /// Every edge id of a graph with `m` edges.
    pub fn full(m: usize) -> Self {
        assert!(m <= MAX_EDGES, "edge count {m} exceeds {MAX_EDGES}");
        if m == MAX_EDGES {
            EdgeSubset(u64::MAX)
        } else {
            EdgeSubset((1u64 << m) - 1)
        }
    }

    pub fn singleton(e: usize) -> Self {
        assert!(e < MAX_EDGES, "edge id {e} out of range");
        EdgeSubset(1u64 << e)
    }

    pub fn contains(self, e: usize) -> bool {
        e < MAX_EDGES && self.0 & (1u64 << e) != 0
    }

    #[must_use]
    pub fn with(self, e: usize) -> Self {
        self.union(Self::singleton(e))
    }

    #[must_use]
    pub fn without(self, e: usize) -> Self {
        self.difference(Self::singleton(e))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[must_use]
    pub fn union(self, other: Self) -> Self {
        EdgeSubset(self.0 | other.0)
    }

    #[must_use]
    pub fn intersection(self, other: Self) -> Self {
        EdgeSubset(self.0 & other.0)
    }

    #[must_use]
    pub fn difference(self, other: Self) -> Self {
        EdgeSubset(self.0 & !other.0)
    }

    #[must_use]
    pub fn symmetric_difference(self, other: Self) -> Self {
        EdgeSubset(self.0 ^ other.0)
    }

    /// Complement within `0..m`.
    #[must_use]
    pub fn complement(self, m: usize) -> Self {
        Self::full(m).difference(self)
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// Members in increasing order.
    pub fn iter(self) -> Members {
        Members(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl FromIterator<usize> for EdgeSubset {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        iter.into_iter()
            .fold(EdgeSubset::EMPTY, |acc, e| acc.with(e))
    }
}

impl IntoIterator for EdgeSubset {
    type Item = usize;
    type IntoIter = Members;

    fn into_iter(self) -> Members {
        self.iter()
    }
}

#[derive(Clone, Debug)]
pub struct Members(u64);

impl Iterator for Members {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let e = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(e)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Members {}

impl Ord for EdgeSubset {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for EdgeSubset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for EdgeSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for EdgeSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "e{e}")?;
        }
        f.write_str("}")
    }
}

impl Serialize for EdgeSubset {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for EdgeSubset {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let ids = Vec::<usize>::deserialize(deserializer)?;
        if let Some(&bad) = ids.iter().find(|&&e| e >= MAX_EDGES) {
            return Err(serde::de::Error::custom(format!(
                "edge id {bad} out of range"
            )));
        }
        Ok(ids.into_iter().collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn lexicographic_order_follows_member_lists() {
        let a: EdgeSubset = [0, 3].into_iter().collect();
        let b: EdgeSubset = [1, 2].into_iter().collect();
        assert!(a < b);
        let c: EdgeSubset = [0, 1].into_iter().collect();
        assert!(c < a);
        assert_eq!(format!("{a}"), "{e0,e3}");
    }

    #[test]
    fn full_and_complement() {
        assert_eq!(EdgeSubset::full(0), EdgeSubset::EMPTY);
        assert_eq!(EdgeSubset::full(64).len(), 64);
        let s = EdgeSubset::singleton(1);
        assert_eq!(s.complement(3).to_vec(), vec![0, 2]);
    }

    proptest! {
        #[test]
        fn set_algebra_is_closed(a in any::<u64>(), b in any::<u64>(), m in 0usize..=64) {
            let full = EdgeSubset::full(m);
            let a = EdgeSubset::from_bits(a).intersection(full);
            let b = EdgeSubset::from_bits(b).intersection(full);
            prop_assert!(a.union(b).is_subset(full));
            prop_assert!(a.complement(m).is_disjoint(a));
            prop_assert_eq!(a.complement(m).union(a), full);
            prop_assert_eq!(a.difference(b).union(a.intersection(b)), a);
            prop_assert_eq!(a.iter().collect::<EdgeSubset>(), a);
        }
    }
}
